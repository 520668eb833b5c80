#include "manet/routing/routing.hpp"

#include <algorithm>

namespace manet::routing {

std::string_view to_string(PacketKind kind) noexcept {
  switch (kind) {
    case PacketKind::Data: return "DATA";
    case PacketKind::Rreq: return "RREQ";
    case PacketKind::Rrep: return "RREP";
    case PacketKind::Rerr: return "RERR";
    case PacketKind::Report: return "REPORT";
    case PacketKind::Warn: return "WARN";
  }
  return "?";
}

std::string_view to_string(Protocol protocol) noexcept {
  return protocol == Protocol::Aodv ? "AODV" : "DSR";
}

const RouteCacheEntry& select_route(std::span<const RouteCacheEntry> candidates) {
  if (candidates.empty()) throw NoAdmissibleRoute("no admissible route among candidates");
  return *std::min_element(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.path.size() != b.path.size()) return a.path.size() < b.path.size();
    return a.path < b.path;
  });
}

RoutingAgent::RoutingAgent(RoutingHost& host, RoutingParams params)
    : host_(host), params_(params), seen_(params.rreq_seen_capacity) {}

void RoutingAgent::receive(const Packet& packet) {
  switch (packet.kind) {
    case PacketKind::Rreq: handle_rreq(packet); break;
    case PacketKind::Rrep: handle_rrep(packet); break;
    case PacketKind::Data: handle_data(packet); break;
    case PacketKind::Rerr: handle_rerr(packet); break;
    case PacketKind::Report:
    case PacketKind::Warn: break;
  }
}

void RoutingAgent::originate_data(Packet data) {
  if (send_via_route(data) == SendResult::Sent) return;
  const NodeId dest = data.target;
  buffer(std::move(data));
  start_discovery(dest);
}

std::size_t RoutingAgent::buffered_for(NodeId dest) const {
  return static_cast<std::size_t>(
      std::count_if(buffer_.begin(), buffer_.end(), [dest](const Packet& p) { return p.target == dest; }));
}

bool RoutingAgent::discovering(NodeId dest) const {
  const auto it = discoveries_.find(dest);
  return it != discoveries_.end() && it->second.active;
}

bool RoutingAgent::first_sighting(NodeId origin, std::uint32_t id) {
  return seen_.touch({origin, id}).second;
}

bool RoutingAgent::first_copy_from(NodeId origin, std::uint32_t id, NodeId prev_hop) {
  auto& answered = seen_.touch({origin, id}).first;
  if (std::find(answered.begin(), answered.end(), prev_hop) != answered.end()) return false;
  answered.push_back(prev_hop);
  return true;
}

void RoutingAgent::buffer(Packet data) {
  if (buffer_.size() >= params_.buffer_capacity) {
    host_.data_dropped(buffer_.front(), metrics::DropReason::BufferOverflow);
    buffer_.pop_front();
  }
  buffer_.push_back(std::move(data));
}

void RoutingAgent::start_discovery(NodeId dest) {
  auto& d = discoveries_[dest];
  if (d.active) return;
  d.active = true;
  d.retries = 0;
  ++d.generation;
  host_.discovery_started();
  issue_rreq(dest);
}

void RoutingAgent::issue_rreq(NodeId dest) {
  const std::uint32_t id = next_rreq_id_++;
  ++rreqs_issued_;
  first_sighting(host_.self(), id);
  broadcast_rreq(dest, id);
  const auto generation = discoveries_[dest].generation;
  host_.schedule(params_.rreq_retry_wait, [this, dest, generation] { discovery_timeout(dest, generation); });
}

void RoutingAgent::discovery_timeout(NodeId dest, std::uint64_t generation) {
  auto& d = discoveries_[dest];
  if (!d.active || d.generation != generation) return;
  if (d.retries < params_.max_discovery_retries) {
    ++d.retries;
    issue_rreq(dest);
    return;
  }
  d.active = false;
  ++d.generation;
  std::deque<Packet> keep;
  for (auto& p : buffer_) {
    if (p.target == dest) {
      host_.data_dropped(p, metrics::DropReason::NoRoute);
    } else {
      keep.push_back(std::move(p));
    }
  }
  buffer_.swap(keep);
}

void RoutingAgent::route_found(NodeId dest) {
  auto& d = discoveries_[dest];
  if (d.active) {
    d.active = false;
    ++d.generation;
    host_.discovery_succeeded();
  }
  flush(dest);
}

void RoutingAgent::flush(NodeId dest) {
  std::deque<Packet> keep;
  std::deque<Packet> pending;
  pending.swap(buffer_);
  for (auto& p : pending) {
    if (p.target == dest && send_via_route(p) == SendResult::Sent) continue;
    keep.push_back(std::move(p));
  }
  // send_via_route never buffers, so buffer_ is still empty here.
  buffer_.swap(keep);
  if (buffered_for(dest) > 0) start_discovery(dest);
}

void RoutingAgent::route_lost(NodeId dest) {
  if (buffered_for(dest) == 0) return;
  host_.schedule(params_.rreq_retry_wait, [this, dest] {
    if (buffered_for(dest) > 0) start_discovery(dest);
  });
}

}  // namespace manet::routing
