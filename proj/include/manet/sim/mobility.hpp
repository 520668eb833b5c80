#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "manet/sim/kernel.hpp"
#include "manet/sim/rng.hpp"
#include "manet/types.hpp"

namespace manet::sim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

double distance(Vec2 a, Vec2 b) noexcept;

struct Arena {
  double width = 1000.0;
  double height = 1000.0;

  bool contains(Vec2 p) const noexcept { return p.x >= 0 && p.y >= 0 && p.x <= width && p.y <= height; }
};

struct MobilityParams {
  double speed_min = 0.0;
  double speed_max = 0.0;
  double pause_time = 0.0;
  double step_interval = 1.0;

  bool is_static() const noexcept { return speed_max <= 0.0; }
};

struct NodeKinematics {
  NodeId node{};
  Vec2 position;
  Vec2 waypoint;
  double speed = 0.0;
  SimTime pause_until = 0.0;
};

class UnknownNode : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Random-waypoint mobility over a rectangular arena. Each node draws from its
/// own stream derived from (seed, Mobility, node).
class Mobility {
 public:
  /// `initial` fixes start positions; when empty, positions are drawn uniformly.
  Mobility(Arena arena, MobilityParams params, std::size_t node_count, std::uint64_t seed,
           const std::vector<Vec2>& initial = {});

  std::size_t node_count() const noexcept { return nodes_.size(); }
  const NodeKinematics& kinematics(NodeId node) const;
  Vec2 position(NodeId node) const { return kinematics(node).position; }
  const Arena& arena() const noexcept { return arena_; }
  const MobilityParams& params() const noexcept { return params_; }

  /// Advances one step_interval toward the current waypoint.
  void mobility_step(NodeId node, SimTime now);

  /// Schedules the periodic MobilityStep events. No-op for static scenarios.
  void start(Simulator& sim);

  /// Test hook for hand-built kinematics.
  void set_kinematics(const NodeKinematics& k);

 private:
  void schedule_step(Simulator& sim, NodeId node, SimTime at);
  Vec2 draw_point(Rng& rng) const;

  Arena arena_;
  MobilityParams params_;
  std::vector<NodeKinematics> nodes_;
  std::vector<Rng> rngs_;
};

}  // namespace manet::sim
