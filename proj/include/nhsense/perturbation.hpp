#pragma once

#include "nhsense/lattice.hpp"

namespace nhsense {

enum class PertKind { OnSite, Nhse };

enum class Frame { Lab, Squeezed };

/// Boundary perturbation: OnSite is a number operator on the chain's last
/// site ((N,A) for odd parity, (N,B) for even); Nhse is a phase-phi hopping
/// between site (1,A) and that same last site.
struct PerturbationSpec {
  PertKind kind = PertKind::OnSite;
  double epsilon = 0.0;
  double phi = 0.0;  // Nhse only, radians

  static PerturbationSpec on_site(double epsilon) { return {PertKind::OnSite, epsilon, 0.0}; }
  static PerturbationSpec nhse(double epsilon, double phi) { return {PertKind::Nhse, epsilon, phi}; }
};

/// Full dynamical matrix at finite perturbation strength, in one frame.
struct AssembledSystem {
  DynamicalMatrix matrix;
  Frame frame = Frame::Lab;
  ChainSpec chain;
  PerturbationSpec pert;
  SqueezingParams squeeze;  // meaningful when frame == Squeezed
};

/// Perturbation matrix at unit strength times epsilon. OnSite contributes the
/// antisymmetric x-p pair (+eps, -eps) at the last site; Nhse contributes
/// eight entries, sin(phi) ones inside each quadrature block and cos(phi)
/// ones across blocks. The squeezed frame is the diagonal conjugation by
/// diag(T, T^-1), which multiplies every entry by site exponentials.
DynamicalMatrix perturbation_block(const ChainSpec& chain, const PerturbationSpec& pert,
                                   Frame frame, const SqueezingParams* sq = nullptr);

/// Unperturbed matrix plus perturbation block. With frame == Squeezed the
/// gauge offsets of `sq` are used (defaults n0 = m0 = 0 when sq is null).
AssembledSystem assemble_full(const ChainSpec& chain, const PerturbationSpec& pert,
                              Frame frame = Frame::Lab, const SqueezingParams* sq = nullptr);

}  // namespace nhsense
