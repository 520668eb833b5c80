#include "manet/sim/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace manet::sim {

double distance(Vec2 a, Vec2 b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

Mobility::Mobility(Arena arena, MobilityParams params, std::size_t node_count, std::uint64_t seed,
                   const std::vector<Vec2>& initial)
    : arena_(arena), params_(params) {
  nodes_.reserve(node_count);
  rngs_.reserve(node_count);
  Rng placement(derive_seed(seed, Stream::Placement));
  for (std::size_t i = 0; i < node_count; ++i) {
    rngs_.emplace_back(derive_seed(seed, Stream::Mobility, i));
    NodeKinematics k;
    k.node = node_id(static_cast<std::uint32_t>(i));
    k.position = i < initial.size() ? initial[i] : draw_point(placement);
    if (params_.is_static()) {
      k.waypoint = k.position;
    } else {
      k.waypoint = draw_point(rngs_.back());
      k.speed = rngs_.back().uniform(params_.speed_min, params_.speed_max);
    }
    nodes_.push_back(k);
  }
}

const NodeKinematics& Mobility::kinematics(NodeId node) const {
  if (index(node) >= nodes_.size()) throw UnknownNode("unknown node " + to_string(node));
  return nodes_[index(node)];
}

void Mobility::set_kinematics(const NodeKinematics& k) {
  if (index(k.node) >= nodes_.size()) throw UnknownNode("unknown node " + to_string(k.node));
  nodes_[index(k.node)] = k;
}

Vec2 Mobility::draw_point(Rng& rng) const {
  const double x = rng.uniform(0.0, arena_.width);
  const double y = rng.uniform(0.0, arena_.height);
  return {x, y};
}

void Mobility::mobility_step(NodeId node, SimTime now) {
  if (index(node) >= nodes_.size()) throw UnknownNode("unknown node " + to_string(node));
  auto& k = nodes_[index(node)];
  auto& rng = rngs_[index(node)];
  if (now < k.pause_until || k.speed <= 0.0) return;

  const double reach = k.speed * params_.step_interval;
  const double remaining = distance(k.position, k.waypoint);
  if (remaining <= reach) {
    k.position = k.waypoint;
    k.pause_until = now + params_.pause_time;
    k.waypoint = draw_point(rng);
    k.speed = rng.uniform(params_.speed_min, params_.speed_max);
    return;
  }
  const double f = reach / remaining;
  k.position.x += (k.waypoint.x - k.position.x) * f;
  k.position.y += (k.waypoint.y - k.position.y) * f;
  k.position.x = std::clamp(k.position.x, 0.0, arena_.width);
  k.position.y = std::clamp(k.position.y, 0.0, arena_.height);
}

void Mobility::start(Simulator& sim) {
  if (params_.is_static()) return;
  for (const auto& k : nodes_) schedule_step(sim, k.node, sim.now() + params_.step_interval);
}

void Mobility::schedule_step(Simulator& sim, NodeId node, SimTime at) {
  sim.schedule(Event{at, EventKind::MobilityStep, node, [this, &sim, node] {
                       mobility_step(node, sim.now());
                       schedule_step(sim, node, sim.now() + params_.step_interval);
                     }});
}

}  // namespace manet::sim
