#include "manet/routing/aodv.hpp"

namespace manet::routing {

const RouteEntry* AodvAgent::entry(NodeId dest) const {
  const auto it = table_.find(dest);
  return it == table_.end() ? nullptr : &it->second;
}

const RouteEntry* AodvAgent::usable_route(NodeId dest) const {
  const auto* e = entry(dest);
  if (e == nullptr || !e->valid || host_.now() >= e->expires_at) return nullptr;
  return e;
}

std::optional<NodeId> AodvAgent::reverse_hop(NodeId origin) const {
  const auto it = reverse_.find(origin);
  if (it == reverse_.end()) return std::nullopt;
  return it->second;
}

bool AodvAgent::offer_route(NodeId dest, NodeId next_hop, std::uint32_t hop_count, std::uint32_t dest_seq) {
  auto it = table_.find(dest);
  if (it != table_.end()) {
    const auto& e = it->second;
    const bool live = e.valid && host_.now() < e.expires_at;
    const bool better = live ? (dest_seq > e.dest_seq || (dest_seq == e.dest_seq && hop_count < e.hop_count))
                             : dest_seq >= e.dest_seq;
    if (!better) return false;
  }
  table_[dest] = RouteEntry{dest, next_hop, hop_count, dest_seq,
                            host_.now() + params_.active_route_lifetime, true};
  return true;
}

void AodvAgent::broadcast_rreq(NodeId dest, std::uint32_t rreq_id) {
  Packet rreq;
  rreq.kind = PacketKind::Rreq;
  rreq.origin = host_.self();
  rreq.target = dest;
  rreq.seq_or_id = rreq_id;
  rreq.uid = host_.next_uid();
  host_.send(kBroadcast, std::move(rreq), true);
}

void AodvAgent::handle_rreq(const Packet& rreq) {
  const NodeId self = host_.self();
  if (rreq.origin == self) return;
  if (!host_.admissible(rreq.prev_hop)) return;

  const bool first = first_sighting(rreq.origin, rreq.seq_or_id);
  if (first) reverse_[rreq.origin] = rreq.prev_hop;

  if (rreq.target == self) {
    if (!first_copy_from(rreq.origin, rreq.seq_or_id, rreq.prev_hop)) return;
    if (first) ++own_seq_;
    if (!host_.link_up(rreq.prev_hop)) return;
    Packet rrep;
    rrep.kind = PacketKind::Rrep;
    rrep.origin = self;
    rrep.target = rreq.origin;
    rrep.seq_or_id = own_seq_;
    rrep.uid = host_.next_uid();
    host_.send(rreq.prev_hop, std::move(rrep), true);
    return;
  }
  if (!first) return;
  if (rreq.hop_count + 1 > host_.node_count()) return;
  Packet next = rreq;
  ++next.hop_count;
  host_.send(kBroadcast, std::move(next), false);
}

void AodvAgent::handle_rrep(const Packet& rrep) {
  if (!host_.admissible(rrep.prev_hop)) return;
  const bool updated = offer_route(rrep.origin, rrep.prev_hop, rrep.hop_count + 1, rrep.seq_or_id);
  if (rrep.target == host_.self()) {
    if (usable_route(rrep.origin) != nullptr) route_found(rrep.origin);
    return;
  }
  if (!updated) return;
  const auto back = reverse_hop(rrep.target);
  if (!back || !host_.admissible(*back) || !host_.link_up(*back)) return;
  Packet next = rrep;
  ++next.hop_count;
  host_.send(*back, std::move(next), false);
}

AodvAgent::SendResult AodvAgent::send_via_route(Packet& data) {
  auto it = table_.find(data.target);
  if (it == table_.end() || usable_route(data.target) == nullptr) return SendResult::NoRoute;
  auto& e = it->second;
  if (!host_.admissible(e.next_hop)) {
    e.valid = false;
    return SendResult::Rejected;
  }
  if (!host_.link_up(e.next_hop)) {
    purge_link(e.next_hop);
    return SendResult::LinkDown;
  }
  e.expires_at = host_.now() + params_.active_route_lifetime;
  host_.send_data(e.next_hop, data);
  return SendResult::Sent;
}

void AodvAgent::handle_data(const Packet& data) {
  if (data.target == host_.self()) {
    host_.deliver(data);
    return;
  }
  Packet fwd = data;
  if (!host_.intercept(fwd)) return;
  const auto* e = entry(fwd.target);
  const NodeId intended = e != nullptr ? e->next_hop : kNoNode;
  if (send_via_route(fwd) == SendResult::Sent) return;
  host_.data_dropped(fwd, metrics::DropReason::NoRoute);
  send_rerr(fwd, intended);
}

void AodvAgent::send_rerr(const Packet& data, NodeId broken_next_hop) {
  const NodeId upstream = data.prev_hop;
  if (upstream == host_.self() || !host_.link_up(upstream)) return;
  Packet rerr;
  rerr.kind = PacketKind::Rerr;
  rerr.origin = host_.self();
  rerr.target = data.origin;
  rerr.seq_or_id = index(data.target);
  rerr.aux = broken_next_hop;
  rerr.about_uid = data.uid;
  rerr.uid = host_.next_uid();
  host_.send(upstream, std::move(rerr), true);
}

void AodvAgent::handle_rerr(const Packet& rerr) {
  const NodeId unreachable = node_id(rerr.seq_or_id);
  for (auto& [dest, e] : table_) {
    if (e.valid && e.next_hop == rerr.prev_hop && (dest == unreachable || dest == rerr.aux)) e.valid = false;
  }
  if (rerr.target == host_.self()) {
    route_lost(unreachable);
    return;
  }
  if (rerr.hop_count + 1 > host_.node_count()) return;
  const auto back = reverse_hop(rerr.target);
  if (!back || !host_.link_up(*back)) return;
  Packet next = rerr;
  ++next.hop_count;
  host_.send(*back, std::move(next), false);
}

void AodvAgent::purge_node(NodeId subject) {
  for (auto& [dest, e] : table_) {
    if (e.next_hop == subject) e.valid = false;
  }
}

void AodvAgent::purge_link(NodeId neighbor) { purge_node(neighbor); }

}  // namespace manet::routing
