#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "manet/routing/packet.hpp"
#include "manet/sim/kernel.hpp"
#include "manet/sim/mobility.hpp"
#include "manet/sim/rng.hpp"

namespace manet::sim {

struct RadioModel {
  double range = 250.0;
  double frame_loss_prob = 0.0;
  double per_hop_latency = 0.002;
};

/// Per-run radio counters. scheduled + lost == receiver_trials.
struct ChannelStats {
  std::uint64_t frames_transmitted = 0;
  std::uint64_t receiver_trials = 0;
  std::uint64_t frames_scheduled = 0;
  std::uint64_t frames_lost = 0;
};

/// Unit-disk broadcast medium. Every neighbor of the sender gets an independent
/// loss trial; the addressed receiver(s) get FrameArrival, the rest overhear via
/// PromiscuousCopy.
class Channel {
 public:
  using Receiver = std::function<void(NodeId receiver, const routing::Packet& packet, bool promiscuous)>;
  /// Called when the addressed receiver's copy is lost (or never reachable).
  using LossObserver = std::function<void(NodeId from, NodeId to, const routing::Packet& packet)>;

  Channel(Simulator& sim, const Mobility& mobility, RadioModel radio, std::uint64_t seed);

  void set_receiver(Receiver receiver) { receiver_ = std::move(receiver); }
  void set_loss_observer(LossObserver observer) { loss_observer_ = std::move(observer); }

  /// Every other node with distance <= range, ascending id.
  std::vector<NodeId> neighbors_of(NodeId node) const;
  bool in_range(NodeId a, NodeId b) const;

  void transmit_frame(NodeId from, NodeId to, const routing::Packet& packet);

  const RadioModel& radio() const noexcept { return radio_; }
  const ChannelStats& stats() const noexcept { return stats_; }

 private:
  Simulator& sim_;
  const Mobility& mobility_;
  RadioModel radio_;
  Rng loss_rng_;
  Receiver receiver_;
  LossObserver loss_observer_;
  ChannelStats stats_;
};

}  // namespace manet::sim
