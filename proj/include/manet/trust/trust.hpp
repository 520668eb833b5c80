#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "manet/types.hpp"

namespace manet::trust {

enum class TrustState : std::uint8_t { Normal, Suspected, Blacklisted, Probation };
enum class MisbehaviorCause : std::uint8_t { NoForward, MacFailure, ProtocolViolation };

std::string_view to_string(TrustState state) noexcept;
std::string_view to_string(MisbehaviorCause cause) noexcept;

struct TrustParams {
  double alpha = 0.7;
  double t_black = 0.3;
  double t_ok = 0.5;
  double deviation_delta = 0.4;
  double probation_period = 200.0;
  double report_interval = 10.0;
  double watchdog_timeout = 0.05;
  double report_ttl = 30.0;
  /// Clean-behavior window that ends Probation; unset means probation_period / 2.
  std::optional<double> probation_window;
  double idle_prune_after = 60.0;
  /// The deviation filter engages once the observer has this many direct observations.
  std::uint32_t filter_min_observations = 5;
  /// false: Blacklisted is permanent.
  bool reintegration = true;

  double effective_probation_window() const noexcept {
    return probation_window.value_or(probation_period / 2.0);
  }
};

struct TrustRecord {
  NodeId observer{};
  NodeId subject{};
  std::uint32_t forwards = 0;
  std::uint32_t misbehaviors = 0;
  double direct_rating = 0.5;
  double distributed_rating = 0.5;
  double composite = 0.5;
  TrustState state = TrustState::Normal;
  SimTime probation_until = 0.0;
  std::uint32_t strikes = 0;
  SimTime last_activity = 0.0;
  /// Bumped on every Probation entry; stale window timers compare against it.
  std::uint32_t probation_epoch = 0;

  std::uint32_t observations() const noexcept { return forwards + misbehaviors; }
};

struct ReputationReport {
  NodeId reporter{};
  NodeId subject{};
  double rating = 0.5;
  SimTime issued_at = 0.0;
};

/// Beta-prior mean (f+1)/(f+m+2).
constexpr double direct_rating(std::uint32_t forwards, std::uint32_t misbehaviors) noexcept {
  return (static_cast<double>(forwards) + 1.0) /
         (static_cast<double>(forwards) + static_cast<double>(misbehaviors) + 2.0);
}

constexpr double composite_trust(double direct, double distributed, double alpha) noexcept {
  return alpha * direct + (1.0 - alpha) * distributed;
}

inline double composite_trust(const TrustRecord& record, const TrustParams& params) noexcept {
  return composite_trust(record.direct_rating, record.distributed_rating, params.alpha);
}

/// Threshold rule only; the Blacklisted/Probation lifecycle lives in TrustTable.
TrustState classify(double composite, const TrustParams& params) noexcept;
inline TrustState classify(const TrustRecord& record, const TrustParams& params) noexcept {
  return classify(record.composite, params);
}

struct WeightedRating {
  double weight;
  double rating;
};

/// Sum(w_k * r_k) / Sum(w_k). Empty input or zero total weight yields nullopt.
std::optional<double> weighted_reputation(std::span<const WeightedRating> reports) noexcept;

/// True if the deviation filter discards `rating` given the observer's own view.
bool deviates(double rating, double own_direct, std::uint32_t own_observations,
              const TrustParams& params) noexcept;

}  // namespace manet::trust
