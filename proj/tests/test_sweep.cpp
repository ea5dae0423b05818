#include <doctest.h>

#include <atomic>
#include <numeric>

#include "nhsense/analysis.hpp"
#include "support.hpp"

using namespace nhsense;
using nhsense::testing::kPi;

TEST_CASE("every index runs exactly once under both executions") {
  for (const auto exec : {sweep::Execution::Serial, sweep::Execution::OpenMP}) {
    std::vector<std::atomic<int>> hits(257);
    sweep::for_each_index(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); },
                          {exec, 3});
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
}

TEST_CASE("parallel scans reproduce the serial reference bitwise") {
  analysis::PhaseDiagramRequest req;
  req.baseline.gamma1 = 2.0;
  req.baseline.gamma2 = 1.6;
  req.baseline.kappa = 0.05;
  req.drive.theta = kPi / 4;
  req.t1_min = 0.1;
  req.t1_max = 1.2;
  req.t1_steps = 6;
  req.t2_min = 0.1;
  req.t2_max = 1.0;
  req.t2_steps = 6;
  const auto serial = analysis::phase_diagram_scan(req, {sweep::Execution::Serial, 1});
  const auto parallel = analysis::phase_diagram_scan(req, {sweep::Execution::OpenMP, 4});
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].t1 == parallel[i].t1);
    CHECK(serial[i].t2 == parallel[i].t2);
    CHECK(serial[i].onsite_winner == parallel[i].onsite_winner);
    CHECK(serial[i].nhse_enhanced == parallel[i].nhse_enhanced);
    CHECK(serial[i].stable == parallel[i].stable);
    CHECK(serial[i].label.regime == parallel[i].label.regime);
  }
}
