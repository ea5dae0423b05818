#pragma once

#include <random>
#include <string>
#include <vector>

#include "nhsense/closed_form.hpp"

namespace nhsense::verify {

struct SuiteResult {
  std::string name;
  int passed = 0;
  int failed = 0;
  double worst = 0.0;  // worst relative error or margin seen
  std::string note;
};

/// Bounds for the random chain generator. Couplings are drawn through the
/// transformed hoppings and the squeezing exponents: t1~ in
/// [t_tilde_lo, t_tilde_hi], t2~/t1~ in [ratio_lo, ratio_hi], r/s in
/// [0, rs_hi]. Bounding the ratio and the exponents keeps the dense solves
/// the catalogues are checked against well conditioned.
struct SpecDraw {
  int n_lo = 2, n_hi = 12;
  double t_tilde_lo = 0.6, t_tilde_hi = 1.4;
  double ratio_lo = 0.75, ratio_hi = 1.35;
  double rs_hi = 0.8;
  double kappa_lo = 0.05, kappa_hi = 0.4;
  bool allow_even = false;
  bool random_m = true;
};

ChainSpec random_stable_spec(std::mt19937_64& rng, const SpecDraw& draw = {});
ChainSpec random_unstable_spec(std::mt19937_64& rng);

/// Exact (eps = 0) element catalogues against dense inversion.
SuiteResult check_exact_catalogue(int n_specs, double tol, std::mt19937_64& rng);
/// First-order coefficients against central finite differences (delta = 1e-8).
SuiteResult check_first_order_catalogue(int n_specs, double tol, std::mt19937_64& rng);
/// All-order elements against dense inversion at several strengths.
SuiteResult check_all_order_catalogue(int n_specs, double tol,
                                      const std::vector<double>& eps_values,
                                      std::mt19937_64& rng);
/// Time-domain integration against matrix-inversion steady states.
SuiteResult check_oracle_equivalence(int n_specs, double tol, std::mt19937_64& rng);
/// Unperturbed homodyne noise equals n_th + 1/2 for every measurement angle.
SuiteResult check_noise_floor(int n_specs, double tol, std::mt19937_64& rng);
/// Observables unchanged across frames and gauge offsets.
SuiteResult check_frame_gauge_invariance(int n_specs, double tol, std::mt19937_64& rng);
/// Eigenvalue classification on both sides of the instability boundary.
SuiteResult check_stability_dichotomy(int n_per_side, std::mt19937_64& rng);
/// Full-report closed forms against the numeric pipeline.
SuiteResult check_full_report_equivalence(double tol, std::mt19937_64& rng);

std::vector<SuiteResult> run_all(unsigned seed = 20240901);

}  // namespace nhsense::verify
