#include <doctest.h>

#include "support.hpp"

using namespace nhsense;
using nhsense::testing::fig4_chain;
using nhsense::testing::fig5_chain;
using nhsense::testing::kPi;
using nhsense::testing::rel_err;

namespace {

ChainSpec single_site() {
  ChainSpec c;
  c.n_cells = 1;
  c.kappa = 0.05;
  c.t1 = 0.0;
  c.t2 = 0.0;
  c.gamma1 = 1.0;
  c.gamma2 = 1.0;
  return c;
}

}  // namespace

TEST_CASE("single-site steady state matches the closed solution") {
  const ChainSpec c = single_site();
  DriveSpec drive;
  drive.theta = 0.0;
  const auto sys = assemble_full(c, PerturbationSpec::on_site(0.0), Frame::Lab);
  const Eigen::VectorXd v = steady_state_moments(sys, drive);
  // -(kappa/2) x = sqrt(2 kappa) |beta|
  CHECK(rel_err(std::abs(v(0)), 2.0 * std::sqrt(2.0 / c.kappa)) < 1e-13);
  CHECK(std::abs(v(1)) < 1e-13);
  CHECK(v(0) < 0.0);
}

TEST_CASE("sublattice B stays dark in the unperturbed odd chain") {
  const ChainSpec c = fig4_chain(5, Parity::Odd, 2);
  DriveSpec drive;
  drive.theta = 0.7;
  const auto sys = assemble_full(c, PerturbationSpec::on_site(0.0), Frame::Lab);
  const Eigen::VectorXd v = steady_state_moments(sys, drive);
  const IndexMap map = index_map(c);
  const double scale = v.cwiseAbs().maxCoeff();
  for (int n = 1; n < c.n_cells; ++n) {
    CHECK(std::abs(v(map.x_pos(n, Sublattice::B))) <= 1e-12 * scale);
    CHECK(std::abs(v(map.p_pos(n, Sublattice::B))) <= 1e-12 * scale);
  }
}

TEST_CASE("a p-only drive leaves every x moment empty") {
  const ChainSpec c = fig4_chain(4, Parity::Odd, 2);
  DriveSpec drive;
  drive.theta = kPi / 2;
  const auto sys = assemble_full(c, PerturbationSpec::on_site(0.0), Frame::Lab);
  const Eigen::VectorXd v = steady_state_moments(sys, drive);
  CHECK(v.head(c.sites()).cwiseAbs().maxCoeff() <= 1e-13 * v.cwiseAbs().maxCoeff());
}

TEST_CASE("single-site photon number") {
  const ChainSpec c = single_site();
  for (const double theta : {0.0, kPi / 2}) {
    DriveSpec drive;
    drive.theta = theta;
    const ResponseReport rep = compute_report(c, drive, PerturbationSpec::on_site(0.0));
    CHECK(rel_err(rep.n_tot, 4.0 / c.kappa) < 1e-12);  // 80 at kappa = 0.05
    CHECK(rep.signal == 0.0);
    CHECK(rep.cond >= 1.0);
  }
}

TEST_CASE("noise floor at zero strength, every measurement angle") {
  std::mt19937_64 rng(23);
  const auto res = verify::check_noise_floor(10, 1e-10, rng);
  CHECK(res.failed == 0);
  CHECK(res.worst <= 1e-10);
}

TEST_CASE("signal rises quadratically at small strengths") {
  for (const auto kind : {PertKind::OnSite, PertKind::Nhse}) {
    const ChainSpec c = fig4_chain(3);
    DriveSpec drive;
    drive.theta = kPi / 4;
    std::vector<int> idx;
    std::vector<double> sig;
    std::vector<double> eps_list = {1e-9, 3.16e-9, 1e-8, 3.16e-8, 1e-7};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const double e : eps_list) {
      const PerturbationSpec pert =
          kind == PertKind::OnSite ? PerturbationSpec::on_site(e) : PerturbationSpec::nhse(e, kPi / 2);
      const ResponseReport rep = compute_report(c, drive, pert);
      const double x = std::log(e), y = std::log(rep.signal);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double n = static_cast<double>(eps_list.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(std::abs(slope - 2.0) < 0.01);
  }
}

TEST_CASE("all-order ratio saturates at 8 tau |beta|^2") {
  DriveSpec drive;
  drive.theta = kPi / 2;
  const ResponseReport rep = compute_report(fig5_chain(25), drive, PerturbationSpec::on_site(1e-6));
  CHECK(rel_err(rep.snr, 800.0) < 1e-3);
  SUBCASE("and never exceeds it") {
    for (int n : {4, 8, 11, 14, 20}) {
      for (const double e0 : {1e-6, 1e-4, 1e-2}) {
        const ResponseReport r = compute_report(fig5_chain(n), drive, PerturbationSpec::on_site(e0));
        CHECK(r.snr <= 800.0 * (1.0 + 1e-9));
      }
    }
  }
}

TEST_CASE("even chain gives no response to the boundary coupling") {
  ChainSpec c = fig4_chain(5, Parity::Even, 2);
  DriveSpec drive;
  drive.theta = kPi / 4;
  for (const double e : {1e-6, 1e-3}) {
    const ResponseReport rep = compute_report(c, drive, PerturbationSpec::nhse(e, kPi / 2));
    CHECK(rep.signal <= 1e-24);
    CHECK(rel_err(rep.noise, 0.5) < 1e-12);
  }
}

TEST_CASE("time-domain oracle") {
  SUBCASE("single site converges to the closed value") {
    const ChainSpec c = single_site();
    DriveSpec drive;
    const auto sys = assemble_full(c, PerturbationSpec::on_site(0.0), Frame::Lab);
    const OracleResult res = time_domain_oracle(sys, drive, 1e6, 0.0, 1e-10);
    REQUIRE(res.status == OracleStatus::Converged);
    CHECK(rel_err(std::abs(res.moments(0)), 2.0 * std::sqrt(2.0 / c.kappa)) < 1e-6);
    CHECK(res.sample_times.size() > 1);
  }
  SUBCASE("matches inversion on a multi-site chain") {
    const ChainSpec c = fig4_chain(4);
    DriveSpec drive;
    drive.theta = kPi / 4;
    const auto sys = assemble_full(c, PerturbationSpec::on_site(0.0), Frame::Lab);
    const Eigen::VectorXd direct = steady_state_moments(sys, drive);
    const OracleResult res = time_domain_oracle(sys, drive, 1e6, 0.0, 1e-10);
    REQUIRE(res.status == OracleStatus::Converged);
    CHECK((res.moments - direct).lpNorm<Eigen::Infinity>() <=
          1e-6 * direct.lpNorm<Eigen::Infinity>());
  }
  SUBCASE("diverges on an unstable chain") {
    ChainSpec c;
    c.n_cells = 3;
    c.t1 = 1.2;
    c.gamma1 = 1.0;
    c.t2 = 0.5;
    c.gamma2 = 0.4;
    c.kappa = 0.05;
    DriveSpec drive;
    drive.theta = 0.3;
    const auto sys = assemble_full(c, PerturbationSpec::on_site(0.0), Frame::Lab);
    const OracleResult res = time_domain_oracle(sys, drive, 1e4, 0.0, 1e-10);
    CHECK(res.status == OracleStatus::Diverged);
  }
  SUBCASE("random-draw equivalence") {
    std::mt19937_64 rng(29);
    const auto res = verify::check_oracle_equivalence(8, 1e-6, rng);
    CHECK(res.failed == 0);
  }
}

TEST_CASE("response errors") {
  SUBCASE("unstable chain is rejected up front") {
    ChainSpec c;
    c.n_cells = 2;
    c.t1 = 1.2;
    c.gamma1 = 1.0;
    c.t2 = 0.5;
    c.gamma2 = 0.4;
    c.kappa = 0.05;
    CHECK_THROWS_AS(compute_report(c, DriveSpec{}, PerturbationSpec::on_site(1e-6)),
                    InstabilityError);
  }
  SUBCASE("a strength sitting on the pole raises the singularity error") {
    const ChainSpec c = nhsense::testing::fig6_chain(8, 2);
    const SqueezingParams sq = squeezing_params(c);
    const double theta_unit = closed_form::theta_factor(c, sq, 1.0);
    const double eps_pole = 0.5 * c.kappa / theta_unit;
    DriveSpec drive;
    drive.theta = kPi / 4;
    CHECK_THROWS_AS(compute_report(c, drive, PerturbationSpec::nhse(eps_pole, kPi / 2)),
                    SingularMatrixError);
  }
}

TEST_CASE("frame and gauge leave observables unchanged") {
  std::mt19937_64 rng(31);
  const auto res = verify::check_frame_gauge_invariance(6, 1e-10, rng);
  CHECK(res.failed == 0);
  CHECK(res.worst <= 1e-10);
}
