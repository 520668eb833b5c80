#pragma once

#include <optional>
#include <string_view>

#include "manet/routing/packet.hpp"
#include "manet/sim/kernel.hpp"
#include "manet/sim/rng.hpp"

namespace manet::adversary {

enum class AdversaryKind : std::uint8_t { Blackhole, Grayhole, Tamperer, Outsider };
enum class ForwardAction : std::uint8_t { Forward, Drop, Tamper };

std::string_view to_string(AdversaryKind kind) noexcept;
std::optional<AdversaryKind> parse_kind(std::string_view name) noexcept;

struct AdversaryProfile {
  NodeId node{};
  AdversaryKind kind = AdversaryKind::Blackhole;
  double drop_prob = 0.0;
  double tamper_prob = 0.0;
  SimTime onset_at = 0.0;
  std::optional<SimTime> repent_at;

  /// Malicious at `now`: inside [onset_at, repent_at).
  bool active_at(SimTime now) const noexcept {
    return now >= onset_at && (!repent_at || now < *repent_at);
  }
};

/// Decision for one DATA packet about to be forwarded. Control packets are
/// always forwarded so a blackhole keeps attracting routes.
ForwardAction intercept_forward(const AdversaryProfile& profile, const routing::Packet& packet,
                                SimTime now, sim::Rng& rng);

/// Flips one payload bit chosen from `rng`; the MAC tag is left stale.
void tamper(routing::Packet& packet, sim::Rng& rng);

/// Per-node wrapper that can be disabled permanently at repent_at.
class Interceptor {
 public:
  Interceptor(AdversaryProfile profile, std::uint64_t seed);

  const AdversaryProfile& profile() const noexcept { return profile_; }
  bool repented() const noexcept { return repented_; }
  bool malicious_at(SimTime now) const noexcept { return !repented_ && profile_.active_at(now); }
  bool signs_with_outsider_key(SimTime now) const noexcept {
    return profile_.kind == AdversaryKind::Outsider && malicious_at(now);
  }

  ForwardAction on_forward(routing::Packet& packet, SimTime now);
  void repent() noexcept { repented_ = true; }

 private:
  AdversaryProfile profile_;
  sim::Rng rng_;
  bool repented_ = false;
};

/// Schedules the Timer that disables the interceptor at repent_at (if any).
void schedule_repentance(sim::Simulator& sim, Interceptor& interceptor);

}  // namespace manet::adversary
