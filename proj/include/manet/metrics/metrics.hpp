#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "manet/routing/packet.hpp"

namespace manet::metrics {

enum class DropReason : std::uint8_t { Adversary, MacFailure, Loss, NoRoute, BufferOverflow };

std::string_view to_string(DropReason reason) noexcept;

enum class MetricKind : std::uint8_t {
  Originated,
  Delivered,
  Dropped,
  ControlTx,
  PathRejection,
  BlacklistTransition,
  DiscoveryStarted,
  DiscoverySucceeded,
};

struct MetricEvent {
  MetricKind kind = MetricKind::Originated;
  SimTime time = 0.0;
  std::uint64_t uid = 0;
  double delay = 0.0;           // Delivered
  std::uint64_t bits = 0;       // Delivered
  DropReason reason = DropReason::NoRoute;  // Dropped
  routing::PacketKind control = routing::PacketKind::Rreq;  // ControlTx
  NodeId subject = kNoNode;     // BlacklistTransition
  bool honest_now = false;      // BlacklistTransition
};

/// Per-run aggregates. nro is +inf when nothing was delivered.
struct MetricsReport {
  std::uint64_t originated = 0;
  std::uint64_t delivered = 0;
  double pdr = 0.0;
  double throughput_bps = 0.0;
  std::uint64_t control_packets = 0;
  double nro = 0.0;
  std::uint64_t path_rejections = 0;
  std::uint64_t false_accusations = 0;
  std::uint64_t blacklist_events = 0;
  double mean_delay = 0.0;
  std::uint64_t dropped_by_adversary = 0;
  std::uint64_t dropped_by_loss = 0;
  std::uint64_t dropped_no_route = 0;
  std::uint64_t still_buffered = 0;
  std::uint64_t route_discoveries = 0;
  std::uint64_t discovery_successes = 0;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Column names in output order, after the seed/protocol/security_mode prefix.
std::span<const std::string_view> report_columns() noexcept;
/// Report values in report_columns() order, as doubles (nro may be +inf).
std::vector<double> report_values(const MetricsReport& report);

/// Shortest round-trip decimal; "inf" for +infinity.
std::string format_number(double value);

/// Running counters plus the event log they were folded from.
class MetricsCollector {
 public:
  void record(const MetricEvent& event);

  void originated(std::uint64_t uid, SimTime now);
  void delivered(std::uint64_t uid, SimTime now, double delay, std::uint64_t bits);
  void dropped(std::uint64_t uid, SimTime now, DropReason reason);
  void control_tx(routing::PacketKind kind, SimTime now);
  void path_rejection(SimTime now);
  void blacklist_transition(NodeId subject, bool honest_now, SimTime now);
  void discovery_started(SimTime now);
  void discovery_succeeded(SimTime now);

  MetricsReport finalize(double duration) const;
  const std::vector<MetricEvent>& log() const noexcept { return log_; }

 private:
  std::vector<MetricEvent> log_;
  MetricsReport counters_;
  double delay_sum_ = 0.0;
  std::uint64_t delivered_bits_ = 0;
  std::uint64_t terminal_ = 0;
};

/// Recomputes the report from a persisted log alone.
MetricsReport fold(std::span<const MetricEvent> log, double duration);

/// Delivery ratio of packets originated in [from, to).
double pdr_in_window(std::span<const MetricEvent> log, SimTime from, SimTime to);

}  // namespace manet::metrics

#include <iosfwd>

namespace manet::metrics {

/// One line per event: time,kind,uid,delay,bits,reason,control,subject,honest.
void write_log_csv(std::ostream& out, std::span<const MetricEvent> log);
/// Inverse of write_log_csv. Throws std::runtime_error on malformed input.
std::vector<MetricEvent> read_log_csv(std::istream& in);

}  // namespace manet::metrics
