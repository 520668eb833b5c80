#include "manet/sim/kernel.hpp"

#include <bit>
#include <string>

namespace manet::sim {

std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::FrameArrival: return "FrameArrival";
    case EventKind::PromiscuousCopy: return "PromiscuousCopy";
    case EventKind::Timer: return "Timer";
    case EventKind::MobilityStep: return "MobilityStep";
    case EventKind::AppSend: return "AppSend";
    case EventKind::ReportRound: return "ReportRound";
    case EventKind::ProbationEnd: return "ProbationEnd";
  }
  return "?";
}

EventHandle Simulator::schedule(Event event) {
  if (event.fire_at < now_) {
    throw SchedulingInPast("event at t=" + std::to_string(event.fire_at) +
                           " scheduled when clock is t=" + std::to_string(now_));
  }
  const EventHandle handle{event.fire_at, next_seq_++};
  queue_.emplace(Key{handle.fire_at, handle.seq},
                 Pending{event.kind, event.node, std::move(event.action)});
  return handle;
}

bool Simulator::cancel(const EventHandle& handle) {
  return queue_.erase(Key{handle.fire_at, handle.seq}) > 0;
}

SimTime Simulator::run_until(SimTime end) {
  if (end < now_) {
    throw SchedulingInPast("run_until(" + std::to_string(end) + ") is before the clock");
  }
  while (!queue_.empty() && queue_.begin()->first.first <= end) {
    auto node = queue_.extract(queue_.begin());
    now_ = node.key().first;
    const TraceRecord record{now_, node.key().second, node.mapped().kind, node.mapped().node};
    hash_record(record);
    ++fired_;
    if (trace_sink_) trace_sink_(record);
    if (node.mapped().action) node.mapped().action();
  }
  now_ = end;
  return now_;
}

void Simulator::hash_record(const TraceRecord& record) noexcept {
  auto mix = [this](std::uint64_t value, int bytes) {
    for (int i = 0; i < bytes; ++i) {
      trace_hash_ ^= (value >> (8 * i)) & 0xffU;
      trace_hash_ *= 0x100000001b3ULL;
    }
  };
  mix(std::bit_cast<std::uint64_t>(record.fire_at), 8);
  mix(record.seq, 8);
  mix(static_cast<std::uint64_t>(record.kind), 1);
  mix(index(record.node), 4);
}

}  // namespace manet::sim
