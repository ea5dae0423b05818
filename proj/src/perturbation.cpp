#include "nhsense/perturbation.hpp"

#include <cmath>

namespace nhsense {

namespace {

Eigen::MatrixXd pert_lab_block(const ChainSpec& chain, const PerturbationSpec& pert) {
  const IndexMap map = index_map(chain);
  const int d = map.dim();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(d, d);
  const double eps = pert.epsilon;
  if (eps == 0.0) return P;

  const int lc = map.last_site_cell();
  const Sublattice ls = map.last_site_sublattice();
  const int xL = map.x_pos(lc, ls), pL = map.p_pos(lc, ls);

  if (pert.kind == PertKind::OnSite) {
    P(xL, pL) += eps;
    P(pL, xL) -= eps;
    return P;
  }

  const int x1 = map.x_pos(1, Sublattice::A), p1 = map.p_pos(1, Sublattice::A);
  const double c = eps * detail::snap_trig(std::cos(pert.phi));
  const double s = eps * detail::snap_trig(std::sin(pert.phi));
  P(x1, pL) += c;  P(x1, xL) -= s;
  P(xL, p1) += c;  P(xL, x1) += s;
  P(p1, xL) -= c;  P(p1, pL) -= s;
  P(pL, x1) -= c;  P(pL, p1) += s;
  return P;
}

Eigen::MatrixXd full_frame_diag(const ChainSpec& chain, const SqueezingParams& sq) {
  const Eigen::MatrixXd T = squeezing_transform_matrix(chain, sq).entries;
  const int s = static_cast<int>(T.rows());
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(2 * s, 2 * s);
  S.topLeftCorner(s, s) = T;
  S.bottomRightCorner(s, s) = T.inverse();
  return S;
}

}  // namespace

DynamicalMatrix perturbation_block(const ChainSpec& chain, const PerturbationSpec& pert,
                                   Frame frame, const SqueezingParams* sq) {
  chain.validate();
  Eigen::MatrixXd P = pert_lab_block(chain, pert);
  if (frame == Frame::Squeezed) {
    const SqueezingParams sq_local = sq ? *sq : squeezing_params(chain);
    const Eigen::MatrixXd S = full_frame_diag(chain, sq_local);
    // S is diagonal, so this is an exact per-entry rescaling.
    P = S.inverse() * P * S;
  }
  return DynamicalMatrix{std::move(P), index_map(chain),
                         frame == Frame::Lab ? MatrixSpace::FullLab : MatrixSpace::FullSqueezed};
}

AssembledSystem assemble_full(const ChainSpec& chain, const PerturbationSpec& pert, Frame frame,
                              const SqueezingParams* sq) {
  chain.validate();
  AssembledSystem sys;
  sys.frame = frame;
  sys.chain = chain;
  sys.pert = pert;
  if (frame == Frame::Lab) {
    sys.matrix = build_full_lab(chain);
    sys.matrix.entries += pert_lab_block(chain, pert);
    return sys;
  }
  sys.squeeze = sq ? *sq : squeezing_params(chain);
  const Eigen::MatrixXd h = build_tilde_h(chain, sys.squeeze).entries;
  const int s = static_cast<int>(h.rows());
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(2 * s, 2 * s);
  full.topLeftCorner(s, s) = h;
  full.bottomRightCorner(s, s) = h;
  full += perturbation_block(chain, pert, Frame::Squeezed, &sys.squeeze).entries;
  sys.matrix = DynamicalMatrix{std::move(full), index_map(chain), MatrixSpace::FullSqueezed};
  return sys;
}

}  // namespace nhsense
