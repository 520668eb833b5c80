#pragma once

#include <map>
#include <optional>

#include "manet/routing/routing.hpp"

namespace manet::routing {

struct RouteEntry {
  NodeId dest{};
  NodeId next_hop{};
  std::uint32_t hop_count = 1;
  std::uint32_t dest_seq = 0;
  SimTime expires_at = 0.0;
  /// Invalidated entries keep dest_seq as a freshness floor.
  bool valid = true;
};

/// Table-driven on-demand routing. Only the destination answers requests;
/// it answers the first copy arriving from each neighbor.
class AodvAgent final : public RoutingAgent {
 public:
  using RoutingAgent::RoutingAgent;

  Protocol protocol() const noexcept override { return Protocol::Aodv; }

  void handle_rreq(const Packet& rreq) override;
  void handle_rrep(const Packet& rrep) override;
  void handle_data(const Packet& data) override;
  void handle_rerr(const Packet& rerr) override;
  void purge_node(NodeId subject) override;
  void purge_link(NodeId neighbor) override;

  /// Installed entry (valid or not) for dest.
  const RouteEntry* entry(NodeId dest) const;
  /// Valid and unexpired entry for dest.
  const RouteEntry* usable_route(NodeId dest) const;
  std::optional<NodeId> reverse_hop(NodeId origin) const;
  std::uint32_t own_seq() const noexcept { return own_seq_; }

  /// Applies the freshness rule; true if the entry was (re)installed.
  bool offer_route(NodeId dest, NodeId next_hop, std::uint32_t hop_count, std::uint32_t dest_seq);

 protected:
  SendResult send_via_route(Packet& data) override;
  void broadcast_rreq(NodeId dest, std::uint32_t rreq_id) override;

 private:
  void send_rerr(const Packet& data, NodeId broken_next_hop);

  std::map<NodeId, RouteEntry> table_;
  std::map<NodeId, NodeId> reverse_;
  std::uint32_t own_seq_ = 0;
};

}  // namespace manet::routing
