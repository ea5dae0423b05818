#pragma once

#include <Eigen/Dense>

#include "nhsense/chain.hpp"

namespace nhsense {

enum class Quadrature { X, P };

/// Which representation a dynamical matrix lives in.
enum class MatrixSpace { XBlock, PBlock, TildeBlock, Transform, FullLab, FullSqueezed };

/// A real dynamical matrix together with its index convention.
struct DynamicalMatrix {
  Eigen::MatrixXd entries;
  IndexMap map;
  MatrixSpace space = MatrixSpace::FullLab;

  int dim() const { return static_cast<int>(entries.rows()); }
};

/// Site-local squeezing transform parameters.
///
/// e^{2r} = (gamma1+t1)/(gamma1-t1), e^{2s} = (gamma2+t2)/(gamma2-t2), and
/// t1_tilde/t2_tilde are the hoppings of the transformed reciprocal chain.
/// n0 and m0 are free gauge offsets; no observable depends on them.
struct SqueezingParams {
  double r = 0.0;
  double s = 0.0;
  double t1_tilde = 0.0;
  double t2_tilde = 0.0;
  double n0 = 0.0;
  double m0 = 0.0;
};

enum class StabilityReason { AllNegative, PositiveRealPart, MappedToPureParametric };

struct StabilityReport {
  bool stable = false;
  double max_real_eigenvalue = 0.0;
  StabilityReason reason = StabilityReason::PositiveRealPart;
};

/// Squeezing parameters for a chain; throws InstabilityError outside the
/// squeezable regime (gamma <= |t| maps the model onto purely parametric
/// driving with no stable steady state).
SqueezingParams squeezing_params(const ChainSpec& chain, double n0 = 0.0, double m0 = 0.0);

/// Diagonal transform T with x = T x~ and p = T^{-1} p~.
/// Site (n,A) carries e^{-r(n-n0)-s(n-m0)}, site (n,B) carries e^{-r(n+1-n0)-s(n-m0)}.
DynamicalMatrix squeezing_transform_matrix(const ChainSpec& chain, const SqueezingParams& sq);

struct SqueezingTransform {
  SqueezingParams params;
  DynamicalMatrix transform;
};

/// Parameters and diagonal transform in one step. Gauge offsets n0, m0 only
/// rescale the transform globally; conjugations and observables ignore them.
SqueezingTransform squeezing_transform(const ChainSpec& chain, double n0 = 0.0, double m0 = 0.0);

/// One quadrature block of the unperturbed dynamical matrix in the lab frame.
/// The X block couples with -(gamma1+t1), +(gamma1-t1), +(gamma2-t2),
/// -(gamma2+t2); the P block swaps t -> -t. The driven (m,A) row carries
/// -kappa/2 on the diagonal.
DynamicalMatrix build_quadrature_block(const ChainSpec& chain, Quadrature block);

/// Squeezed-frame block: antisymmetric hopping with alternating t1_tilde,
/// t2_tilde plus the -kappa/2 damping entry at the driven site.
DynamicalMatrix build_tilde_h(const ChainSpec& chain, const SqueezingParams& sq);

/// Unperturbed full x (+) p matrix in the lab frame (block diagonal).
DynamicalMatrix build_full_lab(const ChainSpec& chain);

/// Eigenvalue test of the full unperturbed matrix. Marginal spectra
/// (max real part within 1e-12 of zero) count as unstable since the
/// steady-state solve would be singular.
StabilityReport check_stability(const ChainSpec& chain);

/// Throws InstabilityError unless check_stability passes.
void require_stable(const ChainSpec& chain);

}  // namespace nhsense
