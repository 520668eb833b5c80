#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "manet/adversary/adversary.hpp"
#include "manet/routing/routing.hpp"
#include "manet/sim/channel.hpp"
#include "manet/sim/mobility.hpp"
#include "manet/trust/trust.hpp"

namespace manet::harness {

enum class SecurityMode : std::uint8_t { Baseline, TripleFactor };

std::string_view to_string(SecurityMode mode) noexcept;

struct TrafficFlow {
  NodeId src{};
  NodeId dst{};
  SimTime start_at = 0.0;
  double interval = 1.0;
  std::uint32_t payload_bytes = 512;
  std::uint32_t count = 1;
};

struct ScenarioConfig {
  std::string name = "scenario";
  sim::Arena arena;
  std::uint32_t node_count = 2;
  std::vector<sim::Vec2> positions;
  sim::RadioModel radio;
  sim::MobilityParams mobility;
  routing::Protocol protocol = routing::Protocol::Aodv;
  std::vector<SecurityMode> security_modes{SecurityMode::Baseline, SecurityMode::TripleFactor};
  trust::TrustParams trust_params;
  routing::RoutingParams routing_params;
  std::vector<TrafficFlow> traffic;
  std::vector<adversary::AdversaryProfile> adversaries;
  double duration = 100.0;
  std::vector<std::uint64_t> seeds;
};

/// Malformed document: bad syntax, wrong type, or an unknown key.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string field, const std::string& message, std::optional<std::size_t> line = std::nullopt);
  const std::string& field() const noexcept { return field_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  std::string field_;
  std::optional<std::size_t> line_;
};

/// Well-formed document whose values break an invariant.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// `key.path=value`; value is read as JSON, falling back to a plain string.
struct Override {
  std::string path;
  std::string value;
};

Override parse_override(std::string_view text);

ScenarioConfig parse_scenario_text(std::string_view text, const std::vector<Override>& overrides = {});
ScenarioConfig parse_scenario(const std::filesystem::path& path, const std::vector<Override>& overrides = {});

/// Throws ValidationError naming the first violated invariant.
void validate(const ScenarioConfig& config);

}  // namespace manet::harness
