// Times the OpenMP sweep/grid kernels against the serial reference and
// checks that both produce identical bytes.

#include <chrono>
#include <cstdio>
#include <sstream>
#include <vector>

#include "contract_lab/garbling.hpp"
#include "contract_lab/io.hpp"
#include "contract_lab/parallel.hpp"
#include "contract_lab/welfare.hpp"

using namespace contract_lab;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Fn>
double timed(Fn&& fn) {
  const auto start = Clock::now();
  fn();
  return seconds_since(start);
}

}  // namespace

int main() {
  const Scenario s(1.0, 0.5, CostModel::exponential(0.5), CostModel::exponential(0.01));
  std::vector<double> eps;
  for (int i = 0; i < 201; ++i) eps.push_back(i / 200.0);
  std::vector<double> lambdas;
  for (int i = 0; i < 24; ++i) lambdas.push_back(0.01 + i * (0.99 / 23.0));

  std::printf("workers: %d\n", worker_count());

  std::vector<GarblingPoint> sweep_serial, sweep_parallel;
  const double t_sweep_serial =
      timed([&] { sweep_serial = sweep_garbling(s, 0.5, eps, ExecutionMode::Serial); });
  const double t_sweep_parallel =
      timed([&] { sweep_parallel = sweep_garbling(s, 0.5, eps, ExecutionMode::Parallel); });

  std::ostringstream a, b;
  io::write_garbling_csv(a, sweep_serial);
  io::write_garbling_csv(b, sweep_parallel);
  std::printf("garbling sweep (201 pts):   serial %.3fs  parallel %.3fs  speedup %.2fx  identical=%s\n",
              t_sweep_serial, t_sweep_parallel, t_sweep_serial / t_sweep_parallel,
              a.str() == b.str() ? "yes" : "NO");

  std::vector<RevelationCell> grid_serial, grid_parallel;
  const double t_grid_serial = timed([&] {
    grid_serial = grid_revelation_preference(1.0, 0.5, lambdas, lambdas, ExecutionMode::Serial);
  });
  const double t_grid_parallel = timed([&] {
    grid_parallel =
        grid_revelation_preference(1.0, 0.5, lambdas, lambdas, ExecutionMode::Parallel);
  });
  std::ostringstream c, d;
  io::write_revelation_csv(c, grid_serial);
  io::write_revelation_csv(d, grid_parallel);
  std::printf("revelation grid (24x24):    serial %.3fs  parallel %.3fs  speedup %.2fx  identical=%s\n",
              t_grid_serial, t_grid_parallel, t_grid_serial / t_grid_parallel,
              c.str() == d.str() ? "yes" : "NO");
  return 0;
}
