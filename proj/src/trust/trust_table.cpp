#include "manet/trust/trust_table.hpp"

#include <cmath>
#include <limits>

namespace manet::trust {

std::string_view to_string(TrustEventKind kind) noexcept {
  switch (kind) {
    case TrustEventKind::Forward: return "forward";
    case TrustEventKind::Misbehavior: return "misbehavior";
    case TrustEventKind::ReportStored: return "report";
    case TrustEventKind::Merge: return "merge";
    case TrustEventKind::Transition: return "transition";
    case TrustEventKind::ProbationStart: return "probation";
    case TrustEventKind::Rehabilitated: return "rehabilitated";
    case TrustEventKind::Pruned: return "pruned";
  }
  return "?";
}

TrustTable::TrustTable(NodeId observer, TrustParams params, TrustListener* listener)
    : observer_(observer), params_(params), listener_(listener) {}

TrustRecord& TrustTable::record(NodeId subject, SimTime now) {
  auto [it, inserted] = records_.try_emplace(subject);
  if (inserted) {
    it->second.observer = observer_;
    it->second.subject = subject;
    it->second.last_activity = now;
  }
  return it->second;
}

const TrustRecord* TrustTable::find(NodeId subject) const {
  const auto it = records_.find(subject);
  return it == records_.end() ? nullptr : &it->second;
}

bool TrustTable::admissible(NodeId subject) {
  const auto it = records_.find(subject);
  if (it == records_.end()) {
    record(subject, 0.0);
    return true;
  }
  return it->second.state != TrustState::Blacklisted;
}

void TrustTable::observe_forward(NodeId subject, SimTime now) {
  auto& rec = record(subject, now);
  ++rec.forwards;
  rec.direct_rating = direct_rating(rec.forwards, rec.misbehaviors);
  rec.last_activity = now;
  rec.composite = composite_trust(rec, params_);
  emit(rec, TrustEventKind::Forward, now);
  refresh(rec, now);
}

void TrustTable::observe_misbehavior(NodeId subject, MisbehaviorCause cause, SimTime now) {
  auto& rec = record(subject, now);
  ++rec.misbehaviors;
  rec.direct_rating = direct_rating(rec.forwards, rec.misbehaviors);
  rec.last_activity = now;
  rec.composite = composite_trust(rec, params_);
  TrustEvent ev;
  ev.time = now;
  ev.kind = TrustEventKind::Misbehavior;
  ev.cause = cause;
  emit(ev, rec);
  if (rec.state == TrustState::Probation) {
    ++rec.strikes;
    transition(rec, TrustState::Blacklisted, now);
  } else {
    refresh(rec, now);
  }
}

double TrustTable::merge_reports(NodeId subject, std::span<const ReputationReport> reports, SimTime now) {
  auto& rec = record(subject, now);
  auto& stored = reports_[subject];
  for (const auto& r : reports) {
    if (r.subject != subject || r.reporter == observer_ || r.reporter == subject) continue;
    if (now - r.issued_at > params_.report_ttl) continue;
    auto [it, inserted] = stored.try_emplace(r.reporter, r);
    if (!inserted) {
      if (r.issued_at < it->second.issued_at) continue;
      it->second = r;
    }
    TrustEvent ev;
    ev.time = now;
    ev.kind = TrustEventKind::ReportStored;
    ev.report = r;
    emit(ev, rec);
  }
  rec.last_activity = now;
  recompute_distributed(rec, now);
  refresh(rec, now);
  emit(rec, TrustEventKind::Merge, now);
  return rec.distributed_rating;
}

void TrustTable::recompute_distributed(TrustRecord& rec, SimTime now) {
  std::vector<WeightedRating> survivors;
  if (const auto it = reports_.find(rec.subject); it != reports_.end()) {
    for (const auto& [reporter, r] : it->second) {
      if (now - r.issued_at > params_.report_ttl) continue;
      if (deviates(r.rating, rec.direct_rating, rec.observations(), params_)) continue;
      const auto* w = find(reporter);
      survivors.push_back({w != nullptr ? w->composite : 0.5, r.rating});
    }
  }
  rec.distributed_rating = weighted_reputation(survivors).value_or(rec.direct_rating);
}

void TrustTable::refresh(TrustRecord& rec, SimTime now) {
  rec.composite = composite_trust(rec, params_);
  if (rec.state == TrustState::Blacklisted || rec.state == TrustState::Probation) return;
  const TrustState next = classify(rec.composite, params_);
  if (next != rec.state) transition(rec, next, now);
}

void TrustTable::transition(TrustRecord& rec, TrustState to, SimTime now) {
  const TrustState from = rec.state;
  rec.state = to;
  if (to == TrustState::Blacklisted) {
    rec.probation_until = params_.reintegration
                              ? now + params_.probation_period * std::ldexp(1.0, static_cast<int>(rec.strikes))
                              : std::numeric_limits<double>::infinity();
  }
  TrustEvent ev;
  ev.time = now;
  ev.kind = TrustEventKind::Transition;
  ev.from = from;
  emit(ev, rec);

  const bool warn = to == TrustState::Blacklisted || (from == TrustState::Normal && to == TrustState::Suspected);
  if (listener_ == nullptr) return;
  if (to == TrustState::Blacklisted) listener_->on_blacklisted(rec.subject, rec.probation_until, params_.reintegration);
  if (warn) listener_->on_warn(rec.subject, rec.direct_rating);
}

void TrustTable::reintegrate(NodeId subject, SimTime now) {
  const auto it = records_.find(subject);
  if (it == records_.end()) return;
  auto& rec = it->second;
  if (rec.state != TrustState::Blacklisted || now < rec.probation_until) return;
  rec.state = TrustState::Probation;
  rec.forwards = 0;
  rec.misbehaviors = 0;
  rec.direct_rating = 0.5;
  rec.distributed_rating = 0.5;
  rec.composite = composite_trust(rec, params_);
  rec.last_activity = now;
  ++rec.probation_epoch;
  reports_.erase(subject);
  emit(rec, TrustEventKind::ProbationStart, now);
  if (listener_ != nullptr) {
    listener_->on_probation(subject, now + params_.effective_probation_window(), rec.probation_epoch);
  }
}

void TrustTable::end_probation_window(NodeId subject, std::uint32_t epoch, SimTime now) {
  const auto it = records_.find(subject);
  if (it == records_.end()) return;
  auto& rec = it->second;
  if (rec.state != TrustState::Probation || rec.probation_epoch != epoch) return;
  rec.state = TrustState::Normal;
  rec.strikes = 0;
  emit(rec, TrustEventKind::Rehabilitated, now);
}

std::vector<routing::ReportEntry> TrustTable::report_entries() const {
  std::vector<routing::ReportEntry> out;
  for (const auto& [subject, rec] : records_) {
    if (rec.observations() >= 1) out.push_back({subject, rec.direct_rating});
  }
  return out;
}

void TrustTable::prune_idle(SimTime now) {
  for (auto it = records_.begin(); it != records_.end();) {
    const auto& rec = it->second;
    if (rec.state == TrustState::Normal && now - rec.last_activity > params_.idle_prune_after) {
      const bool had_evidence = rec.observations() > 0 || reports_.contains(it->first);
      TrustRecord gone = rec;
      gone.forwards = 0;
      gone.misbehaviors = 0;
      gone.direct_rating = gone.distributed_rating = gone.composite = 0.5;
      reports_.erase(it->first);
      it = records_.erase(it);
      if (had_evidence) emit(gone, TrustEventKind::Pruned, now);
    } else {
      ++it;
    }
  }
}

void TrustTable::emit(const TrustRecord& rec, TrustEventKind kind, SimTime now) {
  TrustEvent ev;
  ev.time = now;
  ev.kind = kind;
  emit(ev, rec);
}

void TrustTable::emit(TrustEvent ev, const TrustRecord& rec) {
  if (listener_ == nullptr) return;
  ev.observer = observer_;
  ev.subject = rec.subject;
  ev.forwards = rec.forwards;
  ev.misbehaviors = rec.misbehaviors;
  ev.direct = rec.direct_rating;
  ev.distributed = rec.distributed_rating;
  ev.composite = rec.composite;
  ev.state = rec.state;
  listener_->on_event(ev);
}

}  // namespace manet::trust
