#include <exception>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "manet/harness/experiment.hpp"
#include "manet/harness/scenario.hpp"
#include "manet/harness/simulation.hpp"
#include "manet/metrics/metrics.hpp"

namespace {

using namespace manet;
using namespace manet::harness;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct CommonArgs {
  std::string scenario;
  std::vector<std::string> overrides;
  unsigned seeds = 0;
};

ScenarioConfig load(const CommonArgs& args) {
  std::vector<Override> overrides;
  for (const auto& o : args.overrides) overrides.push_back(parse_override(o));
  auto config = parse_scenario(args.scenario, overrides);
  if (args.seeds > 0) {
    config.seeds.resize(args.seeds);
    std::iota(config.seeds.begin(), config.seeds.end(), 1);
  }
  return config;
}

void add_common(CLI::App& cmd, CommonArgs& args) {
  cmd.add_option("scenario", args.scenario, "Scenario file")->required();
  cmd.add_option("--override", args.overrides, "key.path=value (repeatable)");
}

int cmd_trace(const ScenarioConfig& config, std::uint64_t seed) {
  const auto mode = config.security_modes.back();
  Simulation sim(config, mode, seed);
  std::cout << "# events: time,seq,kind,node\n";
  sim.kernel().set_trace_sink([](const sim::TraceRecord& r) {
    std::cout << metrics::format_number(r.fire_at) << ',' << r.seq << ',' << sim::to_string(r.kind) << ','
              << to_string(r.node) << '\n';
  });
  const auto result = sim.run();
  std::cout << "# metrics\n";
  metrics::write_log_csv(std::cout, result.metric_log);
  std::cout << "# trust\n";
  write_trust_events_csv(std::cout, result.trust_log);
  std::cout << "# report (" << to_string(mode) << ", seed " << seed << ")\n";
  const auto values = metrics::report_values(result.report);
  const auto columns = metrics::report_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    std::cout << columns[i] << ' ' << metrics::format_number(values[i]) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic MANET simulator with a trust-based security layer"};
  app.require_subcommand(1);

  CommonArgs run_args;
  std::string out_dir = "out";
  bool serial = false;
  auto* run = app.add_subcommand("run", "Run every (mode, seed) pair and write CSV outputs");
  add_common(*run, run_args);
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--seeds", run_args.seeds, "Use seeds 1..N instead of the scenario's list");
  run->add_flag("--serial", serial, "Run on one thread (reference path)");

  CommonArgs compare_args;
  auto* compare = app.add_subcommand("compare", "Baseline vs TripleFactor table");
  add_common(*compare, compare_args);
  compare->add_option("--seeds", compare_args.seeds, "Use seeds 1..N instead of the scenario's list");

  CommonArgs trace_args;
  std::uint64_t trace_seed = 1;
  auto* trace = app.add_subcommand("trace", "Dump the full event, metric and trust log of one run");
  add_common(*trace, trace_args);
  trace->add_option("--seed", trace_seed, "Seed")->required();

  CommonArgs validate_args;
  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate only");
  add_common(*validate_cmd, validate_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate_cmd) {
      load(validate_args);
      std::cout << "OK\n";
      return kExitOk;
    }
    if (*trace) {
      return cmd_trace(load(trace_args), trace_seed);
    }
    if (*compare) {
      auto config = load(compare_args);
      config.security_modes = {SecurityMode::Baseline, SecurityMode::TripleFactor};
      const auto runs = run_experiment(config);
      write_compare_table(std::cout, summarize(runs), runs);
      return kExitOk;
    }
    const auto config = load(run_args);
    const auto runs = run_experiment(config, serial ? ExecPolicy::Serial : ExecPolicy::Parallel);
    const auto summary = summarize(runs);
    write_outputs(out_dir, runs, summary);
    std::cout << "wrote " << runs.size() << " runs to " << out_dir << '\n';
    return kExitOk;
  } catch (const ParseError& e) {
    std::cerr << "parse error";
    if (e.line()) std::cerr << " (line " << *e.line() << ')';
    std::cerr << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
