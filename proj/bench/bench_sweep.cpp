// Timing comparison between the serial reference sweep and the OpenMP path.

#include <chrono>
#include <cstdio>

#include "nhsense/analysis.hpp"

using namespace nhsense;
using clock_type = std::chrono::steady_clock;

namespace {

constexpr double kPi = 3.14159265358979323846;

double ms_since(clock_type::time_point t0) {
  return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = clock_type::now();
    f();
    best = std::min(best, ms_since(t0));
  }
  return best;
}

}  // namespace

int main() {
  DriveSpec drive;
  drive.theta = kPi / 2;

  analysis::ScalingRequest scaling;
  scaling.baseline.t1 = 1.0;
  scaling.baseline.t2 = 1.0;
  scaling.baseline.gamma1 = 1.5;
  scaling.baseline.gamma2 = 2.5;
  scaling.baseline.kappa = 0.05;
  scaling.drive = drive;
  scaling.pert = PerturbationSpec::on_site(1e-6);
  scaling.n_min = 1;
  scaling.n_max = 40;

  analysis::PhaseDiagramRequest grid;
  grid.baseline.gamma1 = 1.6;
  grid.baseline.gamma2 = 2.0;
  grid.baseline.kappa = 0.05;
  grid.drive.theta = kPi / 4;
  grid.t1_min = 0.05;
  grid.t1_max = 1.5;
  grid.t1_steps = 24;
  grid.t2_min = 0.05;
  grid.t2_max = 1.9;
  grid.t2_steps = 24;

  const sweep::Options serial{sweep::Execution::Serial, 1};
  const sweep::Options parallel{sweep::Execution::OpenMP, 0};

  std::printf("%-22s %12s %12s %9s\n", "workload", "serial[ms]", "openmp[ms]", "speedup");

  const double s1 = time_best_of(3, [&] { analysis::scaling_scan(scaling, serial); });
  const double p1 = time_best_of(3, [&] { analysis::scaling_scan(scaling, parallel); });
  std::printf("%-22s %12.1f %12.1f %8.2fx\n", "scaling N=1..40", s1, p1, s1 / p1);

  const double s2 = time_best_of(3, [&] { analysis::phase_diagram_scan(grid, serial); });
  const double p2 = time_best_of(3, [&] { analysis::phase_diagram_scan(grid, parallel); });
  std::printf("%-22s %12.1f %12.1f %8.2fx\n", "phase diagram 24x24", s2, p2, s2 / p2);

  return 0;
}
