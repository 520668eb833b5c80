#include "manet/harness/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace manet::harness {

namespace {

struct Job {
  SecurityMode mode;
  std::uint64_t seed;
};

std::vector<Job> jobs_for(const ScenarioConfig& config) {
  std::vector<Job> jobs;
  for (const auto mode : config.security_modes) {
    for (const auto seed : config.seeds) jobs.push_back({mode, seed});
  }
  return jobs;
}

RunResult run_one(const ScenarioConfig& config, const Job& job) {
  Simulation sim(config, job.mode, job.seed);
  return sim.run();
}

}  // namespace

std::vector<RunResult> run_experiment(const ScenarioConfig& config, ExecPolicy policy) {
  const auto jobs = jobs_for(config);
  std::vector<RunResult> results(jobs.size());
  if (policy == ExecPolicy::Serial) {
    for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = run_one(config, jobs[i]);
    return results;
  }

  // Exceptions must not escape an OpenMP region; keep the first one by job index.
  std::vector<std::exception_ptr> errors(jobs.size());
  const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      results[static_cast<std::size_t>(i)] = run_one(config, jobs[static_cast<std::size_t>(i)]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

const MetricSummary& GroupSummary::at(std::string_view metric) const {
  for (const auto& m : metrics) {
    if (m.metric == metric) return m;
  }
  throw std::out_of_range("no metric " + std::string(metric));
}

MetricSummary summarize_metric(std::string metric, std::span<const double> values) {
  MetricSummary s;
  s.metric = std::move(metric);
  if (values.empty()) return s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (!std::isfinite(s.mean)) {
    s.sd = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

ExperimentSummary summarize(std::span<const RunResult> runs) {
  ExperimentSummary out;
  const auto columns = metrics::report_columns();
  std::vector<std::pair<routing::Protocol, SecurityMode>> groups;
  for (const auto& r : runs) {
    const std::pair key{r.protocol, r.mode};
    if (std::find(groups.begin(), groups.end(), key) == groups.end()) groups.push_back(key);
  }
  for (const auto& [protocol, mode] : groups) {
    std::vector<std::vector<double>> values(columns.size());
    for (const auto& r : runs) {
      if (r.protocol != protocol || r.mode != mode) continue;
      const auto row = metrics::report_values(r.report);
      for (std::size_t c = 0; c < columns.size(); ++c) values[c].push_back(row[c]);
    }
    GroupSummary g;
    g.protocol = protocol;
    g.mode = mode;
    g.n = values.front().size();
    for (std::size_t c = 0; c < columns.size(); ++c) {
      g.metrics.push_back(summarize_metric(std::string(columns[c]), values[c]));
    }
    out.push_back(std::move(g));
  }
  return out;
}

void write_runs_csv(std::ostream& out, std::span<const RunResult> runs) {
  out << "seed,protocol,security_mode";
  for (const auto c : metrics::report_columns()) out << ',' << c;
  out << '\n';
  for (const auto& r : runs) {
    out << r.seed << ',' << routing::to_string(r.protocol) << ',' << to_string(r.mode);
    for (const double v : metrics::report_values(r.report)) out << ',' << metrics::format_number(v);
    out << '\n';
  }
}

void write_summary_csv(std::ostream& out, const ExperimentSummary& summary) {
  out << "protocol,security_mode,metric,mean,sd,min,max,n\n";
  for (const auto& g : summary) {
    for (const auto& m : g.metrics) {
      out << routing::to_string(g.protocol) << ',' << to_string(g.mode) << ',' << m.metric << ','
          << metrics::format_number(m.mean) << ',' << metrics::format_number(m.sd) << ','
          << metrics::format_number(m.min) << ',' << metrics::format_number(m.max) << ',' << g.n << '\n';
    }
  }
}

void write_trust_events_csv(std::ostream& out, std::span<const trust::TrustEvent> events) {
  out << "time,observer,subject,kind,cause,reporter,report_rating,from,forwards,misbehaviors,direct,"
         "distributed,composite,state\n";
  using metrics::format_number;
  for (const auto& e : events) {
    const bool misbehavior = e.kind == trust::TrustEventKind::Misbehavior;
    const bool stored = e.kind == trust::TrustEventKind::ReportStored;
    const bool transition = e.kind == trust::TrustEventKind::Transition;
    out << format_number(e.time) << ',' << index(e.observer) << ',' << index(e.subject) << ','
        << trust::to_string(e.kind) << ',' << (misbehavior ? trust::to_string(e.cause) : "") << ',';
    if (stored) {
      out << index(e.report.reporter) << ',' << format_number(e.report.rating);
    } else {
      out << ',';
    }
    out << ',' << (transition ? trust::to_string(e.from) : "") << ',' << e.forwards << ',' << e.misbehaviors
        << ',' << format_number(e.direct) << ',' << format_number(e.distributed) << ','
        << format_number(e.composite) << ',' << trust::to_string(e.state) << '\n';
  }
}

void write_outputs(const std::filesystem::path& dir, std::span<const RunResult> runs,
                   const ExperimentSummary& summary) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "trust_events");
  auto open = [](const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    return f;
  };
  {
    auto f = open(dir / "runs.csv");
    write_runs_csv(f, runs);
  }
  {
    auto f = open(dir / "summary.csv");
    write_summary_csv(f, summary);
  }
  for (const auto& r : runs) {
    auto f = open(dir / "trust_events" / (std::string(to_string(r.mode)) + "_" + std::to_string(r.seed) + ".csv"));
    write_trust_events_csv(f, r.trust_log);
  }
}

PairedTest paired_t_test(std::span<const double> control, std::span<const double> treatment) {
  if (control.size() != treatment.size()) throw std::invalid_argument("paired samples differ in size");
  PairedTest result;
  result.n = control.size();
  if (result.n < 2) return result;
  std::vector<double> d(result.n);
  for (std::size_t i = 0; i < result.n; ++i) d[i] = treatment[i] - control[i];
  const auto s = summarize_metric("diff", d);
  result.mean_diff = s.mean;
  if (s.sd == 0.0) {
    result.t = s.mean > 0 ? std::numeric_limits<double>::infinity()
                          : (s.mean < 0 ? -std::numeric_limits<double>::infinity() : 0.0);
    result.p_value = s.mean > 0 ? 0.0 : (s.mean < 0 ? 1.0 : 0.5);
    return result;
  }
  result.t = s.mean / (s.sd / std::sqrt(static_cast<double>(result.n)));
  const boost::math::students_t dist(static_cast<double>(result.n - 1));
  result.p_value = boost::math::cdf(boost::math::complement(dist, result.t));
  return result;
}

std::vector<double> metric_values(std::span<const RunResult> runs, SecurityMode mode, std::string_view metric) {
  const auto columns = metrics::report_columns();
  const auto it = std::find(columns.begin(), columns.end(), metric);
  if (it == columns.end()) throw std::out_of_range("no metric " + std::string(metric));
  const auto c = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  for (const auto& r : runs) {
    if (r.mode == mode) out.push_back(metrics::report_values(r.report)[c]);
  }
  return out;
}

void write_compare_table(std::ostream& out, const ExperimentSummary& summary, std::span<const RunResult> runs) {
  const GroupSummary* base = nullptr;
  const GroupSummary* triple = nullptr;
  for (const auto& g : summary) {
    (g.mode == SecurityMode::Baseline ? base : triple) = &g;
  }
  if (base == nullptr || triple == nullptr) throw std::logic_error("compare needs both security modes");

  auto cell = [](const MetricSummary& m) {
    return metrics::format_number(m.mean) + " ± " + metrics::format_number(m.sd);
  };
  constexpr int kMetricWidth = 22;
  constexpr int kCellWidth = 44;
  auto pad = [](std::string s, int width) {
    // "±" is two bytes but one column.
    const auto extra = s.find("±") != std::string::npos ? 1 : 0;
    if (static_cast<int>(s.size()) < width + extra) s.append(width + extra - s.size(), ' ');
    return s;
  };
  out << pad("metric", kMetricWidth) << pad("Baseline", kCellWidth) << "TripleFactor\n";
  for (std::size_t i = 0; i < base->metrics.size(); ++i) {
    out << pad(base->metrics[i].metric, kMetricWidth) << pad(cell(base->metrics[i]), kCellWidth)
        << cell(triple->metrics[i]) << '\n';
  }
  const auto test = paired_t_test(metric_values(runs, SecurityMode::Baseline, "pdr"),
                                  metric_values(runs, SecurityMode::TripleFactor, "pdr"));
  out << "\nseeds: " << base->n << "  paired one-sided t-test on pdr: mean diff "
      << metrics::format_number(test.mean_diff) << ", t " << metrics::format_number(test.t) << ", p "
      << metrics::format_number(test.p_value) << '\n';
}

}  // namespace manet::harness
