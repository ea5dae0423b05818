#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nhsense/closed_form.hpp"
#include "nhsense/sweep.hpp"

namespace nhsense::analysis {

enum class Regime { I, II_e, II_o, III };

struct RegimeLabel {
  Regime regime = Regime::I;
  bool boundary = false;  // an inequality sits within tolerance of equality
};

/// Sector of the response phase diagram. Regime I has both hopping-dominated
/// inequalities satisfied, III both reversed, II the mixed case; II splits by
/// whether the even chain keeps localized edge modes (II_e) or not (II_o).
RegimeLabel classify_regime(const ChainSpec& chain);

struct EvenEdgeModes {
  std::vector<double> zero_mode_t1_values;  // real roots only, sign pairs
  bool localized = false;
};

/// Critical t1 values where the even chain's zero modes appear, and whether
/// the chain's own parameters satisfy the edge-localization condition.
EvenEdgeModes even_edge_modes(const ChainSpec& chain);

struct OptimalAlpha {
  double alpha_star = 0.0;
  int n_min = 0;
};

/// Optimal linear drive-position coefficient for the boundary-coupling
/// perturbation: alpha* = ln R / (ln L + ln R) with L = (g2+t2)/(g1-t1) and
/// R = (g1+t1)/(g2-t2); requires both logs positive (NoEnhancement
/// otherwise). n_min = ceil(1/alpha*).
std::optional<OptimalAlpha> optimal_alpha(const ChainSpec& chain);

/// System size where linear response breaks down, as a real number.
/// OnSite: ((g1+t1)/(g2-t2))^{2(N*-1)} = kappa/(4 eps0). Nhse uses the
/// two-ratio condition with drive position alpha*N. Returns nullopt when the
/// amplification ratios never reach breakdown.
std::optional<double> breakdown_size(const ChainSpec& chain, PertKind kind, double eps0,
                                     double alpha);

enum class ScanMode { Linear, AllOrders };

struct ScalingRow {
  int n_cells = 0;
  int m = 0;
  ResponseReport numeric;
  ResponseReport analytic;
  bool analytic_valid = false;
  std::string flag = "ok";  // ok | unstable | singular | pole
};

struct ScalingRequest {
  ChainSpec baseline;                // n_cells/m overridden per row
  DriveSpec drive;
  PerturbationSpec pert;
  int n_min = 1;
  int n_max = 12;
  ScanMode mode = ScanMode::AllOrders;
  std::optional<double> alpha;       // m = floor(alpha N) clamped to [1, N]
};

/// Per-N numeric and closed-form reports side by side. Rows are evaluated
/// independently (parallelizable) and assembled in N order.
std::vector<ScalingRow> scaling_scan(const ScalingRequest& req,
                                     const sweep::Options& opts = {});

struct PhaseCell {
  double t1 = 0.0, t2 = 0.0;
  RegimeLabel label;
  bool stable = false;               // false marks masked cells
  std::string onsite_winner = "masked";  // odd | even | masked
  bool nhse_enhanced = false;
};

struct PhaseDiagramRequest {
  ChainSpec baseline;   // gammas, kappa; t1/t2 swept
  DriveSpec drive;
  double t1_min = 0.0, t1_max = 1.0;
  int t1_steps = 16;
  double t2_min = 0.0, t2_max = 1.0;
  int t2_steps = 16;
  int n_window_lo = 4, n_window_hi = 8;  // sizes used for the slope fits
};

/// Regime label plus numerically decided winners on a (t1, t2) grid. Cells
/// outside the squeezable region are masked. The on-site winner compares
/// fitted d log(snr_per_photon)/dN between parities in linear response; the
/// enhancement flag requires an optimal alpha to exist and the
/// boundary-coupling slope at m = floor(alpha* N) to be positive.
std::vector<PhaseCell> phase_diagram_scan(const PhaseDiagramRequest& req,
                                          const sweep::Options& opts = {});

/// Least-squares slope of log(y) against n, used by winner fits and tests.
double log_slope(const std::vector<int>& n, const std::vector<double>& y);

}  // namespace nhsense::analysis
