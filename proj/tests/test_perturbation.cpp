#include <doctest.h>

#include "support.hpp"

using namespace nhsense;
using nhsense::testing::fig4_chain;
using nhsense::testing::kPi;

namespace {

int nonzero_count(const Eigen::MatrixXd& M) {
  int n = 0;
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      if (M(i, j) != 0.0) ++n;
  return n;
}

}  // namespace

TEST_CASE("zero strength gives the zero matrix") {
  const ChainSpec c = fig4_chain(4);
  const auto P = perturbation_block(c, PerturbationSpec::nhse(0.0, 0.3), Frame::Lab);
  CHECK(P.entries.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("on-site block: two antisymmetric corner entries") {
  const ChainSpec c = fig4_chain(4);
  const IndexMap map = index_map(c);
  const double eps = 0.125;
  const auto P = perturbation_block(c, PerturbationSpec::on_site(eps), Frame::Lab);
  const int x = map.x_pos(4, Sublattice::A), p = map.p_pos(4, Sublattice::A);
  CHECK(P.entries(x, p) == eps);
  CHECK(P.entries(p, x) == -eps);
  CHECK(nonzero_count(P.entries) == 2);
  CHECK(Eigen::FullPivLU<Eigen::MatrixXd>(P.entries).rank() == 2);
}

TEST_CASE("boundary-coupling block entry structure") {
  const ChainSpec c = fig4_chain(5, Parity::Odd, 2);
  const IndexMap map = index_map(c);
  const int s = c.sites();
  SUBCASE("phi = pi/2 keeps only the four intra-quadrature entries") {
    const auto P = perturbation_block(c, PerturbationSpec::nhse(1.0, kPi / 2), Frame::Lab);
    CHECK(nonzero_count(P.entries) == 4);
    CHECK(P.entries.topRightCorner(s, s).cwiseAbs().maxCoeff() == 0.0);
    CHECK(P.entries.bottomLeftCorner(s, s).cwiseAbs().maxCoeff() == 0.0);
    CHECK(P.entries(map.x_pos(1, Sublattice::A), map.x_pos(5, Sublattice::A)) == -1.0);
    CHECK(P.entries(map.x_pos(5, Sublattice::A), map.x_pos(1, Sublattice::A)) == 1.0);
  }
  SUBCASE("phi = 0 keeps only the four cross-quadrature entries") {
    const auto P = perturbation_block(c, PerturbationSpec::nhse(1.0, 0.0), Frame::Lab);
    CHECK(nonzero_count(P.entries) == 4);
    CHECK(P.entries.topLeftCorner(s, s).cwiseAbs().maxCoeff() == 0.0);
    CHECK(P.entries.bottomRightCorner(s, s).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("block is linear in epsilon") {
  const ChainSpec c = fig4_chain(3);
  for (const auto& pert : {PerturbationSpec::on_site(0.25), PerturbationSpec::nhse(0.25, 0.7)}) {
    PerturbationSpec twice = pert;
    twice.epsilon = 0.5;
    const auto P1 = perturbation_block(c, pert, Frame::Lab);
    const auto P2 = perturbation_block(c, twice, Frame::Lab);
    CHECK((P2.entries - 2.0 * P1.entries).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("frame covariance of the assembled system") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 12; ++k) {
    verify::SpecDraw draw;
    draw.n_lo = 2;
    draw.n_hi = 5;
    draw.rs_hi = 0.6;
    draw.allow_even = false;
    const ChainSpec c = verify::random_stable_spec(rng, draw);
    const PerturbationSpec pert =
        k % 2 == 0 ? PerturbationSpec::on_site(1e-3) : PerturbationSpec::nhse(1e-3, 1.1);
    const SqueezingParams sq = squeezing_params(c, 0.4, -0.7);
    const auto lab = assemble_full(c, pert, Frame::Lab);
    const auto sqz = assemble_full(c, pert, Frame::Squeezed, &sq);
    const int s = c.sites();
    const Eigen::MatrixXd T = squeezing_transform_matrix(c, sq).entries;
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(2 * s, 2 * s);
    S.topLeftCorner(s, s) = T;
    S.bottomRightCorner(s, s) = T.inverse();
    const Eigen::MatrixXd back = S * sqz.matrix.entries * S.inverse();
    CHECK((back - lab.matrix.entries).cwiseAbs().maxCoeff() <=
          1e-12 * lab.matrix.entries.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("assembly at zero strength equals the direct block sum") {
  const ChainSpec c = fig4_chain(4, Parity::Even, 3);
  const auto sys = assemble_full(c, PerturbationSpec::on_site(0.0), Frame::Lab);
  CHECK((sys.matrix.entries - build_full_lab(c).entries).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("even chains address the final B site") {
  const ChainSpec c = fig4_chain(3, Parity::Even, 1);
  const IndexMap map = index_map(c);
  const auto P = perturbation_block(c, PerturbationSpec::on_site(1.0), Frame::Lab);
  CHECK(P.entries(map.x_pos(3, Sublattice::B), map.p_pos(3, Sublattice::B)) == 1.0);
  const auto Q = perturbation_block(c, PerturbationSpec::nhse(1.0, kPi / 2), Frame::Lab);
  CHECK(Q.entries(map.x_pos(1, Sublattice::A), map.x_pos(3, Sublattice::B)) == -1.0);
}

TEST_CASE("squeezed assembly propagates the instability error") {
  ChainSpec c = fig4_chain(3);
  c.t2 = 0.5;  // > gamma2
  CHECK_THROWS_AS(assemble_full(c, PerturbationSpec::on_site(1e-3), Frame::Squeezed),
                  InstabilityError);
}
