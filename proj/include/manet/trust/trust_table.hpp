#pragma once

#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "manet/routing/packet.hpp"
#include "manet/trust/trust.hpp"

namespace manet::trust {

enum class TrustEventKind : std::uint8_t {
  Forward,
  Misbehavior,
  ReportStored,
  Merge,
  Transition,
  ProbationStart,
  Rehabilitated,
  Pruned,
};

std::string_view to_string(TrustEventKind kind) noexcept;

/// One mutation of one record, with the record's state after it. This is the
/// replay log the batch oracle consumes and the source of trust_events CSVs.
struct TrustEvent {
  SimTime time = 0.0;
  NodeId observer{};
  NodeId subject{};
  TrustEventKind kind = TrustEventKind::Forward;
  MisbehaviorCause cause = MisbehaviorCause::NoForward;
  ReputationReport report;  // ReportStored only
  TrustState from = TrustState::Normal;  // Transition only

  std::uint32_t forwards = 0;
  std::uint32_t misbehaviors = 0;
  double direct = 0.5;
  double distributed = 0.5;
  double composite = 0.5;
  TrustState state = TrustState::Normal;
};

/// Side effects the owning node must carry out. All default to no-ops.
class TrustListener {
 public:
  virtual ~TrustListener() = default;
  /// Broadcast one WARN about `accused` carrying `evidence_rating`.
  virtual void on_warn(NodeId /*accused*/, double /*evidence_rating*/) {}
  /// Entered Blacklisted. When reintegration is on, schedule reintegrate() at probation_end.
  virtual void on_blacklisted(NodeId /*subject*/, SimTime /*probation_end*/, bool /*reintegration*/) {}
  /// Entered Probation; schedule end_probation_window(subject, epoch) at window_end.
  virtual void on_probation(NodeId /*subject*/, SimTime /*window_end*/, std::uint32_t /*epoch*/) {}
  virtual void on_event(const TrustEvent& /*event*/) {}
};

/// One observer's view of every subject it has evidence about.
class TrustTable {
 public:
  TrustTable(NodeId observer, TrustParams params, TrustListener* listener = nullptr);

  NodeId observer() const noexcept { return observer_; }
  const TrustParams& params() const noexcept { return params_; }

  void observe_forward(NodeId subject, SimTime now);
  void observe_misbehavior(NodeId subject, MisbehaviorCause cause, SimTime now);

  /// Stores the fresh reports about `subject` and recomputes its distributed
  /// rating from every stored, fresh, non-deviant report. Returns it.
  double merge_reports(NodeId subject, std::span<const ReputationReport> reports, SimTime now);

  /// ProbationEnd handler: Blacklisted -> Probation with a neutral record.
  void reintegrate(NodeId subject, SimTime now);
  /// Clean-window timer: Probation -> Normal and strikes cleared.
  void end_probation_window(NodeId subject, std::uint32_t epoch, SimTime now);

  /// false iff Blacklisted. Creates a neutral record for unknown subjects.
  bool admissible(NodeId subject);

  /// (subject, direct rating) for every record with at least one observation.
  std::vector<routing::ReportEntry> report_entries() const;

  /// Drops Normal records idle for longer than idle_prune_after.
  void prune_idle(SimTime now);

  const TrustRecord* find(NodeId subject) const;
  const std::map<NodeId, TrustRecord>& records() const noexcept { return records_; }

 private:
  TrustRecord& record(NodeId subject, SimTime now);
  void refresh(TrustRecord& rec, SimTime now);
  void transition(TrustRecord& rec, TrustState to, SimTime now);
  void recompute_distributed(TrustRecord& rec, SimTime now);
  void emit(const TrustRecord& rec, TrustEventKind kind, SimTime now);
  void emit(TrustEvent event, const TrustRecord& rec);

  NodeId observer_;
  TrustParams params_;
  TrustListener* listener_;
  std::map<NodeId, TrustRecord> records_;
  /// subject -> reporter -> latest report
  std::map<NodeId, std::map<NodeId, ReputationReport>> reports_;
};

}  // namespace manet::trust
