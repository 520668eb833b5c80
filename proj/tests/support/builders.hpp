#pragma once

#include <string>

#include "manet/harness/scenario.hpp"

namespace testing_support {

using namespace manet;

/// Static line of `n` nodes spaced 200 m apart with range 200, one flow from
/// the first node to the last.
inline harness::ScenarioConfig line(std::uint32_t n, routing::Protocol protocol, std::uint32_t packets = 20) {
  harness::ScenarioConfig c;
  c.name = "line";
  c.arena = {200.0 * n, 100.0};
  c.node_count = n;
  for (std::uint32_t i = 0; i < n; ++i) c.positions.push_back({50.0 + 200.0 * i, 50.0});
  c.radio.range = 200.0;
  c.protocol = protocol;
  c.traffic.push_back({node_id(0), node_id(n - 1), 1.0, 1.0, 64, packets});
  c.duration = 2.0 + packets;
  c.seeds = {1};
  return c;
}

inline std::string source_path(const std::string& relative) {
  return std::string(MANET_SOURCE_DIR) + "/" + relative;
}

}  // namespace testing_support
