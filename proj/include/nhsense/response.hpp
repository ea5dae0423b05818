#pragma once

#include <optional>
#include <vector>

#include "nhsense/perturbation.hpp"

namespace nhsense {

/// Coherent drive and homodyne measurement protocol. theta is the drive
/// phase, phi_meas the measured quadrature angle, tau the integration window
/// and n_th the thermal occupation of the input field.
struct DriveSpec {
  double beta_abs = 1.0;
  double theta = 0.0;
  double phi_meas = 0.0;
  double tau = 100.0;
  double n_th = 0.0;
};

/// Steady-state observables for one parameter point. noise and n_tot are the
/// symmetric averages between the perturbed and unperturbed steady states;
/// snr = signal / noise and snr_per_photon = snr / n_tot. The log10 fields
/// are computed independently so they stay finite when the linear values
/// overflow, and cond is a 1-norm condition estimate of the solve.
struct ResponseReport {
  double signal = 0.0;
  double noise = 0.0;
  double n_tot = 0.0;
  double snr = 0.0;
  double snr_per_photon = 0.0;
  double log10_signal = 0.0;
  double log10_snr = 0.0;
  double cond = 0.0;
  bool pole = false;
};

struct ResponseOptions {
  Frame frame = Frame::Lab;
  double n0 = 0.0;  // gauge offsets, squeezed frame only
  double m0 = 0.0;
};

/// Lab-frame first moments <x>, <p> of the driven steady state: the solution
/// of H v = b with b = sqrt(2 kappa) |beta| (cos theta at x_{m,A}, sin theta
/// at p_{m,A}). Squeezed-frame systems are solved in their own frame and
/// mapped back. Throws SingularMatrixError when H is numerically singular.
Eigen::VectorXd steady_state_moments(const AssembledSystem& sys, const DriveSpec& drive);

/// Full steady-state report at perturbation strength pert.epsilon, built from
/// dense LU solves. Noise comes from the homodyne variance expressed through
/// the four inverse-matrix elements at the driven site's x/p rows and
/// columns. Requires a stable unperturbed chain.
ResponseReport compute_report(const ChainSpec& chain, const DriveSpec& drive,
                              const PerturbationSpec& pert,
                              const ResponseOptions& opts = {});

/// Exact first-order response: moments differentiated analytically in
/// epsilon (one extra solve with the perturbation applied to the unperturbed
/// steady state), noise pinned at n_th + 1/2 and photons at their
/// unperturbed value. This is the numeric side of linear-response scans and
/// stays meaningful where a finite epsilon would already be past breakdown.
ResponseReport compute_report_linear(const ChainSpec& chain, const DriveSpec& drive,
                                     const PerturbationSpec& pert,
                                     const ResponseOptions& opts = {});

enum class OracleStatus { Converged, Diverged, TimedOut };

struct OracleResult {
  OracleStatus status = OracleStatus::TimedOut;
  Eigen::VectorXd moments;          // final state (lab frame)
  double residual = 0.0;            // ||H v - b||_inf / ||b||_inf at the end
  double t_final = 0.0;
  long long steps = 0;
  std::vector<double> sample_times;            // sparse trajectory samples
  std::vector<Eigen::VectorXd> sample_states;
};

/// Independent steady-state check: integrates dv/dt = H v - b from v(0) = 0
/// with fixed-step RK4 until the residual drops below tol (relative to
/// ||b||), the state norm blows up (Diverged), or t_end is reached
/// (TimedOut, with the residual attached).
OracleResult time_domain_oracle(const AssembledSystem& sys, const DriveSpec& drive,
                                double t_end = 1e7, double dt = 0.0, double tol = 1e-10);

}  // namespace nhsense
