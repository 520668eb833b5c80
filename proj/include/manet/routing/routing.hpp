#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "manet/metrics/metrics.hpp"
#include "manet/routing/lru.hpp"
#include "manet/routing/packet.hpp"

namespace manet::routing {

enum class Protocol : std::uint8_t { Aodv, Dsr };

std::string_view to_string(Protocol protocol) noexcept;

struct RoutingParams {
  double active_route_lifetime = 10.0;
  double rreq_retry_wait = 1.0;
  std::uint32_t max_discovery_retries = 3;
  std::size_t buffer_capacity = 64;
  std::size_t route_cache_capacity = 64;
  std::size_t rreq_seen_capacity = 256;
};

/// What a routing agent needs from the node it runs on.
class RoutingHost {
 public:
  virtual ~RoutingHost() = default;

  virtual NodeId self() const = 0;
  virtual SimTime now() const = 0;
  virtual std::size_t node_count() const = 0;

  /// Control transmission. `retag` means this node set or changed MAC-covered fields.
  virtual void send(NodeId to, Packet packet, bool retag) = 0;
  /// DATA transmission to the next hop; the host arms the watchdog.
  virtual void send_data(NodeId next_hop, Packet packet) = 0;
  /// Local connectivity sensing.
  virtual bool link_up(NodeId neighbor) const = 0;
  /// Trust veto. Every false is one path rejection.
  virtual bool admissible(NodeId subject) = 0;
  /// Adversary hook before forwarding someone else's DATA. false: consumed.
  virtual bool intercept(Packet& data) = 0;

  virtual void schedule(SimTime delay, std::function<void()> action) = 0;
  virtual std::uint64_t next_uid() = 0;

  virtual void deliver(const Packet& data) = 0;
  virtual void data_dropped(const Packet& data, metrics::DropReason reason) = 0;
  virtual void discovery_started() = 0;
  virtual void discovery_succeeded() = 0;
};

struct RouteCacheEntry {
  std::vector<NodeId> path;
  SimTime learned_at = 0.0;
};

class NoAdmissibleRoute : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimum hop count; ties go to the lexicographically smallest node sequence.
const RouteCacheEntry& select_route(std::span<const RouteCacheEntry> candidates);

/// Behavior shared by both protocols: duplicate suppression, the send buffer,
/// and the discovery retry loop at the origin.
class RoutingAgent {
 public:
  RoutingAgent(RoutingHost& host, RoutingParams params);
  virtual ~RoutingAgent() = default;
  RoutingAgent(const RoutingAgent&) = delete;
  RoutingAgent& operator=(const RoutingAgent&) = delete;

  virtual Protocol protocol() const noexcept = 0;

  /// `data` must have origin = self, target, uid and payload filled in.
  void originate_data(Packet data);

  /// Dispatch an addressed (non-promiscuous), already verified packet.
  void receive(const Packet& packet);

  virtual void handle_rreq(const Packet& rreq) = 0;
  virtual void handle_rrep(const Packet& rrep) = 0;
  virtual void handle_data(const Packet& data) = 0;
  virtual void handle_rerr(const Packet& rerr) = 0;

  /// `subject` became inadmissible here; forget every route through it.
  virtual void purge_node(NodeId subject) = 0;
  /// The link to `neighbor` is gone.
  virtual void purge_link(NodeId neighbor) = 0;

  std::size_t buffered() const noexcept { return buffer_.size(); }
  std::size_t buffered_for(NodeId dest) const;
  bool discovering(NodeId dest) const;
  std::uint32_t rreqs_issued() const noexcept { return rreqs_issued_; }

 protected:
  enum class SendResult { Sent, NoRoute, Rejected, LinkDown };

  /// Try to put `data` on an existing usable route.
  virtual SendResult send_via_route(Packet& data) = 0;
  virtual void broadcast_rreq(NodeId dest, std::uint32_t rreq_id) = 0;

  /// First sighting of (origin, id)?
  bool first_sighting(NodeId origin, std::uint32_t id);
  /// At the target: first copy of (origin, id) arriving from `prev_hop`?
  bool first_copy_from(NodeId origin, std::uint32_t id, NodeId prev_hop);

  void start_discovery(NodeId dest);
  void route_found(NodeId dest);
  /// Origin received an RERR about `dest`.
  void route_lost(NodeId dest);

  RoutingHost& host_;
  RoutingParams params_;

 private:
  struct Discovery {
    bool active = false;
    std::uint32_t retries = 0;
    std::uint64_t generation = 0;
  };

  void issue_rreq(NodeId dest);
  void discovery_timeout(NodeId dest, std::uint64_t generation);
  void buffer(Packet data);
  void flush(NodeId dest);

  using RreqKey = std::pair<NodeId, std::uint32_t>;
  BoundedLru<RreqKey, std::vector<NodeId>> seen_;
  std::deque<Packet> buffer_;
  std::map<NodeId, Discovery> discoveries_;
  std::uint32_t next_rreq_id_ = 0;
  std::uint32_t rreqs_issued_ = 0;
};

}  // namespace manet::routing
