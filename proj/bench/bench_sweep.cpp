// Serial vs OpenMP seed sweep over one scenario. Also checks the two agree.
#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "manet/harness/experiment.hpp"

int main(int argc, char** argv) {
  using namespace manet::harness;
  if (argc < 2) {
    std::cerr << "usage: bench_sweep <scenario> [repeats]\n";
    return 2;
  }
  const auto config = parse_scenario(argv[1]);
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;

  auto time = [&](ExecPolicy policy, std::string& csv) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
      const auto start = std::chrono::steady_clock::now();
      const auto runs = run_experiment(config, policy);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      best = std::min(best, elapsed.count());
      std::ostringstream out;
      write_runs_csv(out, runs);
      csv = out.str();
    }
    return best;
  };

  std::string serial_csv;
  std::string parallel_csv;
  const double serial = time(ExecPolicy::Serial, serial_csv);
  const double parallel = time(ExecPolicy::Parallel, parallel_csv);
  std::cout << "runs        " << config.seeds.size() * config.security_modes.size() << '\n'
            << "threads     " << omp_get_max_threads() << '\n'
            << "serial      " << serial << " s\n"
            << "parallel    " << parallel << " s\n"
            << "speedup     " << serial / parallel << '\n'
            << "identical   " << (serial_csv == parallel_csv ? "yes" : "NO") << '\n';
  return serial_csv == parallel_csv ? 0 : 1;
}
