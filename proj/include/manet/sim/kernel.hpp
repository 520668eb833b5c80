#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string_view>
#include <utility>

#include "manet/types.hpp"

namespace manet::sim {

enum class EventKind : std::uint8_t {
  FrameArrival,
  PromiscuousCopy,
  Timer,
  MobilityStep,
  AppSend,
  ReportRound,
  ProbationEnd,
};

std::string_view to_string(EventKind kind) noexcept;

/// A timestamped action. `node` is the node the action runs on (kNoNode for
/// global events) and is part of the trace.
struct Event {
  SimTime fire_at = 0.0;
  EventKind kind = EventKind::Timer;
  NodeId node = kNoNode;
  std::function<void()> action;
};

struct EventHandle {
  SimTime fire_at = 0.0;
  std::uint64_t seq = 0;

  friend bool operator==(const EventHandle&, const EventHandle&) = default;
};

/// What the trace sink sees for each fired event.
struct TraceRecord {
  SimTime fire_at;
  std::uint64_t seq;
  EventKind kind;
  NodeId node;
};

class SchedulingInPast : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Sequential discrete-event engine. Events fire in (fire_at, seq) order where
/// seq is a global monotone counter, so ties resolve FIFO.
class Simulator {
 public:
  Simulator() = default;
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  EventHandle schedule(Event event);
  EventHandle schedule_in(SimTime delay, EventKind kind, NodeId node, std::function<void()> action) {
    return schedule(Event{now_ + delay, kind, node, std::move(action)});
  }

  /// Returns false if the event already fired or was cancelled.
  bool cancel(const EventHandle& handle);

  /// Fires every event with fire_at <= end, then sets the clock to end.
  SimTime run_until(SimTime end);

  SimTime now() const noexcept { return now_; }
  std::size_t pending() const noexcept { return queue_.size(); }
  std::uint64_t fired() const noexcept { return fired_; }

  /// FNV-1a over every fired (fire_at, seq, kind, node).
  std::uint64_t trace_hash() const noexcept { return trace_hash_; }

  void set_trace_sink(std::function<void(const TraceRecord&)> sink) { trace_sink_ = std::move(sink); }

 private:
  using Key = std::pair<SimTime, std::uint64_t>;
  struct Pending {
    EventKind kind;
    NodeId node;
    std::function<void()> action;
  };

  void hash_record(const TraceRecord& record) noexcept;

  SimTime now_ = 0.0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t fired_ = 0;
  std::uint64_t trace_hash_ = 0xcbf29ce484222325ULL;
  std::map<Key, Pending> queue_;
  std::function<void(const TraceRecord&)> trace_sink_;
};

}  // namespace manet::sim
