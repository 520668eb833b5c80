#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "manet/crypto/mac_tag.hpp"
#include "manet/types.hpp"

namespace manet::routing {

enum class PacketKind : std::uint8_t { Data = 0, Rreq = 1, Rrep = 2, Rerr = 3, Report = 4, Warn = 5 };

std::string_view to_string(PacketKind kind) noexcept;

constexpr bool is_control(PacketKind kind) noexcept { return kind != PacketKind::Data; }

/// One (subject, rating) pair inside a REPORT or WARN.
struct ReportEntry {
  NodeId subject{};
  double rating = 0.5;

  friend bool operator==(const ReportEntry&, const ReportEntry&) = default;
};

/// In-memory packet. Field meaning per kind:
///
///   DATA   origin/target = flow endpoints, source_route = DSR path, payload = bytes
///   RREQ   seq_or_id = per-origin request id, source_route = DSR accumulated path
///   RREP   origin = replying destination, target = requester, seq_or_id = AODV
///          destination sequence number, source_route = DSR full path
///   RERR   origin = node that detected the break, target = data origin to notify,
///          seq_or_id = unreachable destination, aux = broken next hop,
///          about_uid = data packet that could not be forwarded
///   REPORT origin = reporter, reports = (subject, direct rating) pairs
///   WARN   origin = accuser, aux = accused, reports = single evidence entry
///
/// hop_count and prev_hop are rewritten per hop and are not covered by the MAC.
struct Packet {
  PacketKind kind = PacketKind::Data;
  NodeId origin{};
  NodeId target{};
  NodeId prev_hop{};
  std::uint32_t seq_or_id = 0;
  std::uint32_t hop_count = 0;
  std::vector<NodeId> source_route;
  std::vector<std::uint8_t> payload;
  crypto::MacTag mac_tag;
  std::uint64_t uid = 0;

  NodeId aux = kNoNode;
  std::uint64_t about_uid = 0;
  SimTime issued_at = 0.0;
  std::vector<ReportEntry> reports;

  std::size_t payload_len() const noexcept { return payload.size(); }

  friend bool operator==(const Packet&, const Packet&) = default;
};

}  // namespace manet::routing
