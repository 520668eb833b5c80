#include "manet/metrics/metrics.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace manet::metrics {
namespace {

constexpr std::array<std::string_view, 16> kColumns = {
    "originated",          "delivered",       "pdr",
    "throughput_bps",      "control_packets", "nro",
    "path_rejections",     "false_accusations", "blacklist_events",
    "mean_delay",          "dropped_by_adversary", "dropped_by_loss",
    "dropped_no_route",    "still_buffered",  "route_discoveries",
    "discovery_successes",
};

void apply(MetricsReport& r, const MetricEvent& e, double& delay_sum, std::uint64_t& bits,
           std::uint64_t& terminal) {
  switch (e.kind) {
    case MetricKind::Originated: ++r.originated; break;
    case MetricKind::Delivered:
      ++r.delivered;
      ++terminal;
      delay_sum += e.delay;
      bits += e.bits;
      break;
    case MetricKind::Dropped:
      ++terminal;
      switch (e.reason) {
        case DropReason::Adversary:
        case DropReason::MacFailure: ++r.dropped_by_adversary; break;
        case DropReason::Loss: ++r.dropped_by_loss; break;
        case DropReason::NoRoute:
        case DropReason::BufferOverflow: ++r.dropped_no_route; break;
      }
      break;
    case MetricKind::ControlTx: ++r.control_packets; break;
    case MetricKind::PathRejection: ++r.path_rejections; break;
    case MetricKind::BlacklistTransition:
      ++r.blacklist_events;
      if (e.honest_now) ++r.false_accusations;
      break;
    case MetricKind::DiscoveryStarted: ++r.route_discoveries; break;
    case MetricKind::DiscoverySucceeded: ++r.discovery_successes; break;
  }
}

MetricsReport derive(MetricsReport r, double delay_sum, std::uint64_t bits, std::uint64_t terminal,
                     double duration) {
  r.pdr = r.originated == 0 ? 0.0 : static_cast<double>(r.delivered) / static_cast<double>(r.originated);
  r.throughput_bps = (r.delivered == 0 || duration <= 0.0) ? 0.0 : static_cast<double>(bits) / duration;
  r.nro = r.delivered == 0 ? std::numeric_limits<double>::infinity()
                           : static_cast<double>(r.control_packets) / static_cast<double>(r.delivered);
  r.mean_delay = r.delivered == 0 ? 0.0 : delay_sum / static_cast<double>(r.delivered);
  r.still_buffered = r.originated >= terminal ? r.originated - terminal : 0;
  return r;
}

}  // namespace

std::string_view to_string(DropReason reason) noexcept {
  switch (reason) {
    case DropReason::Adversary: return "adversary";
    case DropReason::MacFailure: return "mac_failure";
    case DropReason::Loss: return "loss";
    case DropReason::NoRoute: return "no_route";
    case DropReason::BufferOverflow: return "buffer_overflow";
  }
  return "?";
}

std::span<const std::string_view> report_columns() noexcept { return kColumns; }

std::vector<double> report_values(const MetricsReport& r) {
  auto d = [](std::uint64_t v) { return static_cast<double>(v); };
  return {d(r.originated),        d(r.delivered),        r.pdr,
          r.throughput_bps,       d(r.control_packets),  r.nro,
          d(r.path_rejections),   d(r.false_accusations), d(r.blacklist_events),
          r.mean_delay,           d(r.dropped_by_adversary), d(r.dropped_by_loss),
          d(r.dropped_no_route),  d(r.still_buffered),   d(r.route_discoveries),
          d(r.discovery_successes)};
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

void MetricsCollector::record(const MetricEvent& event) {
  log_.push_back(event);
  apply(counters_, event, delay_sum_, delivered_bits_, terminal_);
}

void MetricsCollector::originated(std::uint64_t uid, SimTime now) {
  record({.kind = MetricKind::Originated, .time = now, .uid = uid});
}

void MetricsCollector::delivered(std::uint64_t uid, SimTime now, double delay, std::uint64_t bits) {
  record({.kind = MetricKind::Delivered, .time = now, .uid = uid, .delay = delay, .bits = bits});
}

void MetricsCollector::dropped(std::uint64_t uid, SimTime now, DropReason reason) {
  record({.kind = MetricKind::Dropped, .time = now, .uid = uid, .reason = reason});
}

void MetricsCollector::control_tx(routing::PacketKind kind, SimTime now) {
  record({.kind = MetricKind::ControlTx, .time = now, .control = kind});
}

void MetricsCollector::path_rejection(SimTime now) { record({.kind = MetricKind::PathRejection, .time = now}); }

void MetricsCollector::blacklist_transition(NodeId subject, bool honest_now, SimTime now) {
  record({.kind = MetricKind::BlacklistTransition, .time = now, .subject = subject, .honest_now = honest_now});
}

void MetricsCollector::discovery_started(SimTime now) { record({.kind = MetricKind::DiscoveryStarted, .time = now}); }
void MetricsCollector::discovery_succeeded(SimTime now) {
  record({.kind = MetricKind::DiscoverySucceeded, .time = now});
}

MetricsReport MetricsCollector::finalize(double duration) const {
  return derive(counters_, delay_sum_, delivered_bits_, terminal_, duration);
}

MetricsReport fold(std::span<const MetricEvent> log, double duration) {
  MetricsReport r;
  double delay_sum = 0.0;
  std::uint64_t bits = 0;
  std::uint64_t terminal = 0;
  for (const auto& e : log) apply(r, e, delay_sum, bits, terminal);
  return derive(r, delay_sum, bits, terminal, duration);
}

double pdr_in_window(std::span<const MetricEvent> log, SimTime from, SimTime to) {
  std::unordered_set<std::uint64_t> in_window;
  std::uint64_t delivered = 0;
  for (const auto& e : log) {
    if (e.kind == MetricKind::Originated && e.time >= from && e.time < to) in_window.insert(e.uid);
  }
  for (const auto& e : log) {
    if (e.kind == MetricKind::Delivered && in_window.contains(e.uid)) ++delivered;
  }
  return in_window.empty() ? 0.0 : static_cast<double>(delivered) / static_cast<double>(in_window.size());
}

}  // namespace manet::metrics
