#include "manet/adversary/adversary.hpp"

namespace manet::adversary {

std::string_view to_string(AdversaryKind kind) noexcept {
  switch (kind) {
    case AdversaryKind::Blackhole: return "Blackhole";
    case AdversaryKind::Grayhole: return "Grayhole";
    case AdversaryKind::Tamperer: return "Tamperer";
    case AdversaryKind::Outsider: return "Outsider";
  }
  return "?";
}

std::optional<AdversaryKind> parse_kind(std::string_view name) noexcept {
  for (auto k : {AdversaryKind::Blackhole, AdversaryKind::Grayhole, AdversaryKind::Tamperer,
                 AdversaryKind::Outsider}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

ForwardAction intercept_forward(const AdversaryProfile& profile, const routing::Packet& packet,
                                SimTime now, sim::Rng& rng) {
  if (packet.kind != routing::PacketKind::Data || !profile.active_at(now)) return ForwardAction::Forward;
  switch (profile.kind) {
    case AdversaryKind::Blackhole:
      return ForwardAction::Drop;
    case AdversaryKind::Grayhole:
      return rng.bernoulli(profile.drop_prob) ? ForwardAction::Drop : ForwardAction::Forward;
    case AdversaryKind::Tamperer:
      return rng.bernoulli(profile.tamper_prob) ? ForwardAction::Tamper : ForwardAction::Forward;
    case AdversaryKind::Outsider:
      return ForwardAction::Forward;
  }
  return ForwardAction::Forward;
}

void tamper(routing::Packet& packet, sim::Rng& rng) {
  if (packet.payload.empty()) {
    packet.payload.push_back(0x01);
    return;
  }
  const auto bit = rng.below(packet.payload.size() * 8);
  packet.payload[bit / 8] ^= static_cast<std::uint8_t>(1U << (bit % 8));
}

Interceptor::Interceptor(AdversaryProfile profile, std::uint64_t seed)
    : profile_(profile), rng_(sim::derive_seed(seed, sim::Stream::Adversary, index(profile.node))) {}

ForwardAction Interceptor::on_forward(routing::Packet& packet, SimTime now) {
  if (repented_) return ForwardAction::Forward;
  const auto action = intercept_forward(profile_, packet, now, rng_);
  if (action == ForwardAction::Tamper) tamper(packet, rng_);
  return action;
}

void schedule_repentance(sim::Simulator& sim, Interceptor& interceptor) {
  const auto& p = interceptor.profile();
  if (!p.repent_at) return;
  sim.schedule(sim::Event{*p.repent_at, sim::EventKind::Timer, p.node, [&interceptor] { interceptor.repent(); }});
}

}  // namespace manet::adversary
