#pragma once

#include <list>
#include <vector>

#include "manet/routing/routing.hpp"

namespace manet::routing {

/// Source routing with a per-node LRU path cache. Only the destination
/// answers requests; it answers the first copy arriving from each neighbor.
class DsrAgent final : public RoutingAgent {
 public:
  using RoutingAgent::RoutingAgent;

  Protocol protocol() const noexcept override { return Protocol::Dsr; }

  void handle_rreq(const Packet& rreq) override;
  void handle_rrep(const Packet& rrep) override;
  void handle_data(const Packet& data) override;
  void handle_rerr(const Packet& rerr) override;
  void purge_node(NodeId subject) override;
  void purge_link(NodeId neighbor) override;

  /// Most recently used first.
  const std::list<RouteCacheEntry>& cache() const noexcept { return cache_; }
  void add_path(std::vector<NodeId> path);
  /// Trust-admissible cached routes from self to dest (prefixes of cached paths).
  std::vector<RouteCacheEntry> candidates(NodeId dest);

 protected:
  SendResult send_via_route(Packet& data) override;
  void broadcast_rreq(NodeId dest, std::uint32_t rreq_id) override;

 private:
  void purge_link(NodeId from, NodeId to);
  void send_rerr(const Packet& data, std::size_t self_pos, NodeId broken_next_hop);

  std::list<RouteCacheEntry> cache_;
};

}  // namespace manet::routing
