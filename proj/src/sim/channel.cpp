#include "manet/sim/channel.hpp"

#include <string>

namespace manet::sim {

Channel::Channel(Simulator& sim, const Mobility& mobility, RadioModel radio, std::uint64_t seed)
    : sim_(sim), mobility_(mobility), radio_(radio), loss_rng_(derive_seed(seed, Stream::Loss)) {}

bool Channel::in_range(NodeId a, NodeId b) const {
  if (a == b) return false;
  return distance(mobility_.position(a), mobility_.position(b)) <= radio_.range;
}

std::vector<NodeId> Channel::neighbors_of(NodeId node) const {
  const Vec2 here = mobility_.position(node);
  std::vector<NodeId> out;
  for (std::uint32_t i = 0; i < mobility_.node_count(); ++i) {
    const NodeId other = node_id(i);
    if (other == node) continue;
    if (distance(here, mobility_.position(other)) <= radio_.range) out.push_back(other);
  }
  return out;
}

void Channel::transmit_frame(NodeId from, NodeId to, const routing::Packet& packet) {
  if (to != kBroadcast && index(to) >= mobility_.node_count()) {
    throw UnknownNode("unicast to unknown node " + to_string(to));
  }
  ++stats_.frames_transmitted;
  auto shared = std::make_shared<const routing::Packet>(packet);
  bool addressed_reached = false;
  for (const NodeId rx : neighbors_of(from)) {
    const bool promiscuous = to != kBroadcast && rx != to;
    ++stats_.receiver_trials;
    if (loss_rng_.bernoulli(radio_.frame_loss_prob)) {
      ++stats_.frames_lost;
      continue;
    }
    ++stats_.frames_scheduled;
    if (!promiscuous) addressed_reached = true;
    sim_.schedule_in(radio_.per_hop_latency,
                     promiscuous ? EventKind::PromiscuousCopy : EventKind::FrameArrival, rx,
                     [this, rx, shared, promiscuous] {
                       if (receiver_) receiver_(rx, *shared, promiscuous);
                     });
  }
  if (to != kBroadcast && !addressed_reached && loss_observer_) loss_observer_(from, to, packet);
}

}  // namespace manet::sim
