#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "manet/sim/kernel.hpp"
#include "manet/types.hpp"

namespace manet::trust {

/// Outstanding "I handed packet `uid` to `subject`, it should retransmit it"
/// expectations at one observer.
class Watchdog {
 public:
  enum class Outcome { NotWatched, Forwarded, Excused };

  void expect(NodeId subject, std::uint64_t uid, sim::EventHandle timeout) {
    pending_[{subject, uid}] = timeout;
  }

  /// A retransmission of `uid` by `subject` was overheard.
  std::pair<Outcome, sim::EventHandle> saw_forward(NodeId subject, std::uint64_t uid) {
    return settle(subject, uid, Outcome::Forwarded);
  }

  /// `subject` reported it could not forward `uid` (RERR).
  std::pair<Outcome, sim::EventHandle> saw_excuse(NodeId subject, std::uint64_t uid) {
    return settle(subject, uid, Outcome::Excused);
  }

  /// Timer fired. True if the expectation was still open (and is now closed).
  bool expire(NodeId subject, std::uint64_t uid) { return pending_.erase({subject, uid}) > 0; }

  std::size_t pending() const noexcept { return pending_.size(); }

 private:
  std::pair<Outcome, sim::EventHandle> settle(NodeId subject, std::uint64_t uid, Outcome outcome) {
    const auto it = pending_.find({subject, uid});
    if (it == pending_.end()) return {Outcome::NotWatched, {}};
    const auto handle = it->second;
    pending_.erase(it);
    return {outcome, handle};
  }

  std::map<std::pair<NodeId, std::uint64_t>, sim::EventHandle> pending_;
};

}  // namespace manet::trust
