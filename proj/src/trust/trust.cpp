#include "manet/trust/trust.hpp"

#include <cmath>

namespace manet::trust {

std::string_view to_string(TrustState state) noexcept {
  switch (state) {
    case TrustState::Normal: return "Normal";
    case TrustState::Suspected: return "Suspected";
    case TrustState::Blacklisted: return "Blacklisted";
    case TrustState::Probation: return "Probation";
  }
  return "?";
}

std::string_view to_string(MisbehaviorCause cause) noexcept {
  switch (cause) {
    case MisbehaviorCause::NoForward: return "NoForward";
    case MisbehaviorCause::MacFailure: return "MacFailure";
    case MisbehaviorCause::ProtocolViolation: return "ProtocolViolation";
  }
  return "?";
}

TrustState classify(double composite, const TrustParams& params) noexcept {
  if (composite < params.t_black) return TrustState::Blacklisted;
  if (composite < params.t_ok) return TrustState::Suspected;
  return TrustState::Normal;
}

std::optional<double> weighted_reputation(std::span<const WeightedRating> reports) noexcept {
  double num = 0.0;
  double den = 0.0;
  for (const auto& r : reports) {
    num += r.weight * r.rating;
    den += r.weight;
  }
  if (reports.empty() || den <= 0.0) return std::nullopt;
  return num / den;
}

bool deviates(double rating, double own_direct, std::uint32_t own_observations,
              const TrustParams& params) noexcept {
  if (own_observations < params.filter_min_observations) return false;
  return std::abs(rating - own_direct) > params.deviation_delta;
}

}  // namespace manet::trust
