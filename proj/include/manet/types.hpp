#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>

namespace manet {

/// Node identifier. Dense indices 0..node_count-1; kBroadcast is reserved.
enum class NodeId : std::uint32_t {};

inline constexpr NodeId kBroadcast{std::numeric_limits<std::uint32_t>::max()};
inline constexpr NodeId kNoNode{std::numeric_limits<std::uint32_t>::max() - 1};

constexpr std::uint32_t index(NodeId id) noexcept { return static_cast<std::uint32_t>(id); }
constexpr NodeId node_id(std::uint32_t i) noexcept { return NodeId{i}; }

inline std::string to_string(NodeId id) {
  if (id == kBroadcast) return "*";
  if (id == kNoNode) return "-";
  return std::to_string(index(id));
}

/// Virtual time in seconds.
using SimTime = double;

}  // namespace manet

template <>
struct std::hash<manet::NodeId> {
  std::size_t operator()(manet::NodeId id) const noexcept {
    return std::hash<std::uint32_t>{}(manet::index(id));
  }
};
