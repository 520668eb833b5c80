#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "manet/harness/scenario.hpp"
#include "manet/harness/simulation.hpp"

namespace manet::harness {

enum class ExecPolicy : std::uint8_t {
  /// One run after another on the calling thread. The reference path.
  Serial,
  /// OpenMP over (mode, seed) pairs. Results are identical to Serial.
  Parallel,
};

/// Every (mode, seed) run of `config`, ordered by mode (as listed) then seed.
std::vector<RunResult> run_experiment(const ScenarioConfig& config, ExecPolicy policy = ExecPolicy::Parallel);

struct MetricSummary {
  std::string metric;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for a single run
  double min = 0.0;
  double max = 0.0;
};

struct GroupSummary {
  routing::Protocol protocol = routing::Protocol::Aodv;
  SecurityMode mode = SecurityMode::Baseline;
  std::size_t n = 0;
  std::vector<MetricSummary> metrics;  // report_columns() order

  const MetricSummary& at(std::string_view metric) const;
};

using ExperimentSummary = std::vector<GroupSummary>;

ExperimentSummary summarize(std::span<const RunResult> runs);
MetricSummary summarize_metric(std::string metric, std::span<const double> values);

void write_runs_csv(std::ostream& out, std::span<const RunResult> runs);
void write_summary_csv(std::ostream& out, const ExperimentSummary& summary);
void write_trust_events_csv(std::ostream& out, std::span<const trust::TrustEvent> events);

/// runs.csv, summary.csv and trust_events/<mode>_<seed>.csv under `dir`.
void write_outputs(const std::filesystem::path& dir, std::span<const RunResult> runs,
                   const ExperimentSummary& summary);

/// Paired one-sided t-test of H1: mean(treatment - control) > 0.
struct PairedTest {
  std::size_t n = 0;
  double mean_diff = 0.0;
  double t = 0.0;
  double p_value = 1.0;
};

PairedTest paired_t_test(std::span<const double> control, std::span<const double> treatment);

/// Values of one metric for the runs of `mode`, in seed order.
std::vector<double> metric_values(std::span<const RunResult> runs, SecurityMode mode, std::string_view metric);

/// Human-readable Baseline vs TripleFactor table (mean±sd per metric).
void write_compare_table(std::ostream& out, const ExperimentSummary& summary, std::span<const RunResult> runs);

}  // namespace manet::harness
