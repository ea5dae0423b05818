#include "nhsense/lattice.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace nhsense {

SqueezingParams squeezing_params(const ChainSpec& chain, double n0, double m0) {
  chain.validate();
  if (!chain.squeezable()) {
    throw InstabilityError(
        "squeezing transform undefined: requires gamma1 > |t1| and gamma2 > |t2|; "
        "outside that regime the model maps onto purely parametric driving and is unstable");
  }
  SqueezingParams sq;
  sq.r = 0.5 * std::log((chain.gamma1 + chain.t1) / (chain.gamma1 - chain.t1));
  sq.s = 0.5 * std::log((chain.gamma2 + chain.t2) / (chain.gamma2 - chain.t2));
  sq.t1_tilde = std::sqrt(chain.gamma1 * chain.gamma1 - chain.t1 * chain.t1);
  sq.t2_tilde = std::sqrt(chain.gamma2 * chain.gamma2 - chain.t2 * chain.t2);
  sq.n0 = n0;
  sq.m0 = m0;
  return sq;
}

SqueezingTransform squeezing_transform(const ChainSpec& chain, double n0, double m0) {
  const SqueezingParams sq = squeezing_params(chain, n0, m0);
  return {sq, squeezing_transform_matrix(chain, sq)};
}

DynamicalMatrix squeezing_transform_matrix(const ChainSpec& chain, const SqueezingParams& sq) {
  const IndexMap map = index_map(chain);
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(map.sites(), map.sites());
  for (int n = 1; n <= chain.n_cells; ++n) {
    T(map.x_pos(n, Sublattice::A), map.x_pos(n, Sublattice::A)) =
        std::exp(-sq.r * (n - sq.n0) - sq.s * (n - sq.m0));
    if (chain.parity == Parity::Even || n < chain.n_cells) {
      T(map.x_pos(n, Sublattice::B), map.x_pos(n, Sublattice::B)) =
          std::exp(-sq.r * (n + 1 - sq.n0) - sq.s * (n - sq.m0));
    }
  }
  return DynamicalMatrix{std::move(T), map, MatrixSpace::Transform};
}

namespace {

// Shared SSH wiring: coefficients (aAB, aBA) act inside cells, (bAB, bBA)
// between cell n and cell n-1: row (n,A) <- col (n-1,B) gets bAB, row (n-1,B)
// <- col (n,A) gets bBA.
Eigen::MatrixXd ssh_block(const ChainSpec& chain, double aAB, double aBA, double bAB, double bBA) {
  const IndexMap map = index_map(chain);
  const int s = map.sites();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(s, s);
  const int intra_cells = chain.parity == Parity::Odd ? chain.n_cells - 1 : chain.n_cells;
  for (int n = 1; n <= intra_cells; ++n) {
    h(map.x_pos(n, Sublattice::A), map.x_pos(n, Sublattice::B)) += aAB;
    h(map.x_pos(n, Sublattice::B), map.x_pos(n, Sublattice::A)) += aBA;
  }
  for (int n = 2; n <= chain.n_cells; ++n) {
    h(map.x_pos(n, Sublattice::A), map.x_pos(n - 1, Sublattice::B)) += bAB;
    h(map.x_pos(n - 1, Sublattice::B), map.x_pos(n, Sublattice::A)) += bBA;
  }
  const int d = map.x_pos(chain.m, Sublattice::A);
  h(d, d) -= 0.5 * chain.kappa;
  return h;
}

}  // namespace

DynamicalMatrix build_quadrature_block(const ChainSpec& chain, Quadrature block) {
  chain.validate();
  const double t1 = block == Quadrature::X ? chain.t1 : -chain.t1;
  const double t2 = block == Quadrature::X ? chain.t2 : -chain.t2;
  Eigen::MatrixXd h = ssh_block(chain, -(chain.gamma1 + t1), +(chain.gamma1 - t1),
                                +(chain.gamma2 - t2), -(chain.gamma2 + t2));
  return DynamicalMatrix{std::move(h), index_map(chain),
                         block == Quadrature::X ? MatrixSpace::XBlock : MatrixSpace::PBlock};
}

DynamicalMatrix build_tilde_h(const ChainSpec& chain, const SqueezingParams& sq) {
  chain.validate();
  if (!chain.squeezable()) {
    throw InstabilityError("build_tilde_h: squeezing undefined for gamma <= |t|");
  }
  Eigen::MatrixXd h = ssh_block(chain, -sq.t1_tilde, +sq.t1_tilde, +sq.t2_tilde, -sq.t2_tilde);
  return DynamicalMatrix{std::move(h), index_map(chain), MatrixSpace::TildeBlock};
}

DynamicalMatrix build_full_lab(const ChainSpec& chain) {
  const IndexMap map = index_map(chain);
  const int s = map.sites();
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(2 * s, 2 * s);
  full.topLeftCorner(s, s) = build_quadrature_block(chain, Quadrature::X).entries;
  full.bottomRightCorner(s, s) = build_quadrature_block(chain, Quadrature::P).entries;
  return DynamicalMatrix{std::move(full), map, MatrixSpace::FullLab};
}

StabilityReport check_stability(const ChainSpec& chain) {
  const DynamicalMatrix full = build_full_lab(chain);
  Eigen::EigenSolver<Eigen::MatrixXd> es(full.entries, /*computeEigenvectors=*/false);
  const double max_re = es.eigenvalues().real().maxCoeff();

  StabilityReport report;
  report.max_real_eigenvalue = max_re;
  const double scale = std::max(1.0, full.entries.cwiseAbs().maxCoeff());
  report.stable = max_re < -1e-12 * scale;
  if (report.stable) {
    report.reason = StabilityReason::AllNegative;
  } else if (chain.gamma1 < std::abs(chain.t1) && chain.gamma2 < std::abs(chain.t2)) {
    report.reason = StabilityReason::MappedToPureParametric;
  } else {
    report.reason = StabilityReason::PositiveRealPart;
  }
  return report;
}

void require_stable(const ChainSpec& chain) {
  const StabilityReport report = check_stability(chain);
  if (!report.stable) {
    throw InstabilityError("chain is dynamically unstable (max eigenvalue real part " +
                           std::to_string(report.max_real_eigenvalue) + " >= 0)");
  }
}

}  // namespace nhsense
