#include "manet/routing/dsr.hpp"

#include <algorithm>
#include <optional>

namespace manet::routing {
namespace {

std::optional<std::size_t> position(const std::vector<NodeId>& path, NodeId node) {
  const auto it = std::find(path.begin(), path.end(), node);
  if (it == path.end()) return std::nullopt;
  return static_cast<std::size_t>(it - path.begin());
}

bool has_link(const std::vector<NodeId>& path, NodeId from, NodeId to) {
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (path[i] == from && path[i + 1] == to) return true;
  }
  return false;
}

}  // namespace

void DsrAgent::add_path(std::vector<NodeId> path) {
  cache_.remove_if([&](const RouteCacheEntry& e) { return e.path == path; });
  cache_.push_front(RouteCacheEntry{std::move(path), host_.now()});
  while (cache_.size() > params_.route_cache_capacity) cache_.pop_back();
}

std::vector<RouteCacheEntry> DsrAgent::candidates(NodeId dest) {
  std::vector<RouteCacheEntry> out;
  for (const auto& e : cache_) {
    const auto pos = position(e.path, dest);
    if (!pos || e.path.front() != host_.self() || *pos == 0) continue;
    std::vector<NodeId> prefix(e.path.begin(), e.path.begin() + static_cast<std::ptrdiff_t>(*pos) + 1);
    const bool ok = std::all_of(prefix.begin() + 1, prefix.end(), [&](NodeId n) { return host_.admissible(n); });
    if (ok) out.push_back(RouteCacheEntry{std::move(prefix), e.learned_at});
  }
  return out;
}

void DsrAgent::broadcast_rreq(NodeId dest, std::uint32_t rreq_id) {
  Packet rreq;
  rreq.kind = PacketKind::Rreq;
  rreq.origin = host_.self();
  rreq.target = dest;
  rreq.seq_or_id = rreq_id;
  rreq.source_route = {host_.self()};
  rreq.uid = host_.next_uid();
  host_.send(kBroadcast, std::move(rreq), true);
}

void DsrAgent::handle_rreq(const Packet& rreq) {
  const NodeId self = host_.self();
  if (rreq.origin == self) return;
  if (!host_.admissible(rreq.prev_hop)) return;
  if (position(rreq.source_route, self)) return;

  const bool first = first_sighting(rreq.origin, rreq.seq_or_id);
  if (rreq.target == self) {
    if (!first_copy_from(rreq.origin, rreq.seq_or_id, rreq.prev_hop)) return;
    if (!host_.link_up(rreq.prev_hop)) return;
    Packet rrep;
    rrep.kind = PacketKind::Rrep;
    rrep.origin = self;
    rrep.target = rreq.origin;
    rrep.seq_or_id = rreq.seq_or_id;
    rrep.source_route = rreq.source_route;
    rrep.source_route.push_back(self);
    rrep.uid = host_.next_uid();
    host_.send(rreq.prev_hop, std::move(rrep), true);
    return;
  }
  if (!first) return;
  if (rreq.hop_count + 1 > host_.node_count()) return;
  Packet next = rreq;
  next.source_route.push_back(self);
  ++next.hop_count;
  host_.send(kBroadcast, std::move(next), true);
}

void DsrAgent::handle_rrep(const Packet& rrep) {
  if (!host_.admissible(rrep.prev_hop)) return;
  const auto& path = rrep.source_route;
  const auto pos = position(path, host_.self());
  if (!pos || path.size() < 2) return;
  if (*pos == 0) {
    if (rrep.target != host_.self()) return;
    const bool ok = std::all_of(path.begin() + 1, path.end(), [&](NodeId n) { return host_.admissible(n); });
    if (!ok) return;
    add_path(path);
    route_found(rrep.origin);
    return;
  }
  const NodeId back = path[*pos - 1];
  if (!host_.admissible(back) || !host_.link_up(back)) return;
  Packet next = rrep;
  ++next.hop_count;
  host_.send(back, std::move(next), false);
}

DsrAgent::SendResult DsrAgent::send_via_route(Packet& data) {
  auto found = candidates(data.target);
  while (!found.empty()) {
    const auto chosen = select_route(found);
    const NodeId first_hop = chosen.path[1];
    if (host_.link_up(first_hop)) {
      for (auto it = cache_.begin(); it != cache_.end(); ++it) {
        if (it->path.size() >= chosen.path.size() &&
            std::equal(chosen.path.begin(), chosen.path.end(), it->path.begin())) {
          cache_.splice(cache_.begin(), cache_, it);
          break;
        }
      }
      data.source_route = chosen.path;
      host_.send_data(first_hop, data);
      return SendResult::Sent;
    }
    purge_link(host_.self(), first_hop);
    std::erase_if(found, [&](const RouteCacheEntry& e) { return e.path[1] == first_hop; });
  }
  return SendResult::NoRoute;
}

void DsrAgent::handle_data(const Packet& data) {
  const NodeId self = host_.self();
  if (data.target == self) {
    host_.deliver(data);
    return;
  }
  const auto pos = position(data.source_route, self);
  if (!pos || *pos + 1 >= data.source_route.size()) {
    host_.data_dropped(data, metrics::DropReason::NoRoute);
    return;
  }
  Packet fwd = data;
  if (!host_.intercept(fwd)) return;
  const NodeId next = fwd.source_route[*pos + 1];
  if (!host_.admissible(next)) {
    host_.data_dropped(fwd, metrics::DropReason::NoRoute);
    send_rerr(fwd, *pos, next);
    return;
  }
  if (!host_.link_up(next)) {
    purge_link(self, next);
    host_.data_dropped(fwd, metrics::DropReason::NoRoute);
    send_rerr(fwd, *pos, next);
    return;
  }
  host_.send_data(next, std::move(fwd));
}

void DsrAgent::send_rerr(const Packet& data, std::size_t self_pos, NodeId broken_next_hop) {
  if (self_pos == 0) return;
  const NodeId upstream = data.source_route[self_pos - 1];
  if (!host_.link_up(upstream)) return;
  Packet rerr;
  rerr.kind = PacketKind::Rerr;
  rerr.origin = host_.self();
  rerr.target = data.origin;
  rerr.seq_or_id = index(data.target);
  rerr.aux = broken_next_hop;
  rerr.about_uid = data.uid;
  rerr.source_route = data.source_route;
  rerr.uid = host_.next_uid();
  host_.send(upstream, std::move(rerr), true);
}

void DsrAgent::handle_rerr(const Packet& rerr) {
  purge_link(rerr.origin, rerr.aux);
  if (rerr.target == host_.self()) {
    route_lost(node_id(rerr.seq_or_id));
    return;
  }
  const auto pos = position(rerr.source_route, host_.self());
  if (!pos || *pos == 0) return;
  const NodeId upstream = rerr.source_route[*pos - 1];
  if (!host_.link_up(upstream)) return;
  Packet next = rerr;
  ++next.hop_count;
  host_.send(upstream, std::move(next), false);
}

void DsrAgent::purge_node(NodeId subject) {
  cache_.remove_if([&](const RouteCacheEntry& e) { return position(e.path, subject).has_value(); });
}

void DsrAgent::purge_link(NodeId neighbor) { purge_link(host_.self(), neighbor); }

void DsrAgent::purge_link(NodeId from, NodeId to) {
  cache_.remove_if([&](const RouteCacheEntry& e) { return has_link(e.path, from, to); });
}

}  // namespace manet::routing
