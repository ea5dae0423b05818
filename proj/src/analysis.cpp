#include "nhsense/analysis.hpp"

#include <cmath>

namespace nhsense::analysis {

namespace {

double floor_with_guard(double v) { return std::floor(v + 1e-9); }

int drive_cell_for(double alpha, int n) {
  const int m = static_cast<int>(floor_with_guard(alpha * n));
  return std::max(1, std::min(n, m));
}

}  // namespace

double log_slope(const std::vector<int>& n, const std::vector<double>& y) {
  const std::size_t k = n.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double xi = n[i], yi = std::log(y[i]);
    sx += xi; sy += yi; sxx += xi * xi; sxy += xi * yi;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

RegimeLabel classify_regime(const ChainSpec& chain) {
  const double lhs1 = std::abs(chain.gamma2 + chain.t2), rhs1 = std::abs(chain.gamma1 - chain.t1);
  const double lhs2 = std::abs(chain.gamma2 - chain.t2), rhs2 = std::abs(chain.gamma1 + chain.t1);
  const bool a = lhs1 > rhs1, b = lhs2 > rhs2;

  RegimeLabel label;
  const double tol = 1e-12;
  label.boundary = std::abs(lhs1 - rhs1) <= tol * std::max(lhs1, rhs1) ||
                   std::abs(lhs2 - rhs2) <= tol * std::max(lhs2, rhs2);
  if (a && b) {
    label.regime = Regime::I;
  } else if (!a && !b) {
    label.regime = Regime::III;
  } else {
    const double lhs = std::abs((chain.gamma2 + chain.t2) / (chain.gamma1 - chain.t1));
    const double rhs = std::abs((chain.gamma1 + chain.t1) / (chain.gamma2 - chain.t2));
    label.regime = lhs > rhs ? Regime::II_e : Regime::II_o;
    label.boundary = label.boundary || std::abs(lhs - rhs) <= tol * std::max(lhs, rhs);
  }
  return label;
}

EvenEdgeModes even_edge_modes(const ChainSpec& chain) {
  EvenEdgeModes out;
  const double g1 = chain.gamma1, g2 = chain.gamma2, t2 = chain.t2;
  for (const double d : {g1 * g1 + t2 * t2 - g2 * g2, g1 * g1 - t2 * t2 + g2 * g2}) {
    if (d < 0.0) continue;  // imaginary roots omitted
    const double root = std::sqrt(d);
    out.zero_mode_t1_values.push_back(root);
    if (root > 0.0) out.zero_mode_t1_values.push_back(-root);
  }
  out.localized = std::abs((g2 + t2) / (g1 - chain.t1)) > std::abs((g1 + chain.t1) / (g2 - t2));
  return out;
}

std::optional<OptimalAlpha> optimal_alpha(const ChainSpec& chain) {
  const double lnL = std::log((chain.gamma2 + chain.t2) / (chain.gamma1 - chain.t1));
  const double lnR = std::log((chain.gamma1 + chain.t1) / (chain.gamma2 - chain.t2));
  if (!(lnL > 0.0) || !(lnR > 0.0)) return std::nullopt;
  OptimalAlpha out;
  out.alpha_star = lnR / (lnL + lnR);
  out.n_min = static_cast<int>(std::ceil(1.0 / out.alpha_star - 1e-12));
  return out;
}

std::optional<double> breakdown_size(const ChainSpec& chain, PertKind kind, double eps0,
                                     double alpha) {
  if (eps0 <= 0.0) return std::nullopt;
  const double lnR = std::log((chain.gamma1 + chain.t1) / (chain.gamma2 - chain.t2));
  if (kind == PertKind::OnSite) {
    if (!(lnR > 0.0)) return std::nullopt;
    return 1.0 + std::log(chain.kappa / (4.0 * eps0)) / (2.0 * lnR);
  }
  const double lnL = std::log((chain.gamma2 + chain.t2) / (chain.gamma1 - chain.t1));
  const double denom = (1.0 - alpha) * lnR + alpha * lnL;
  if (!(denom > 0.0)) return std::nullopt;
  return (std::log(chain.kappa / (2.0 * eps0)) + lnL) / denom;
}

std::vector<ScalingRow> scaling_scan(const ScalingRequest& req, const sweep::Options& opts) {
  const int count = req.n_max - req.n_min + 1;
  std::vector<ScalingRow> rows(static_cast<std::size_t>(std::max(count, 0)));

  sweep::for_each_index(rows.size(), [&](std::size_t i) {
    ScalingRow& row = rows[i];
    row.n_cells = req.n_min + static_cast<int>(i);
    ChainSpec chain = req.baseline;
    chain.n_cells = row.n_cells;
    chain.m = req.alpha ? drive_cell_for(*req.alpha, row.n_cells)
                        : std::min(req.baseline.m, row.n_cells);
    row.m = chain.m;
    try {
      row.numeric = req.mode == ScanMode::Linear
                        ? compute_report_linear(chain, req.drive, req.pert)
                        : compute_report(chain, req.drive, req.pert);
    } catch (const InstabilityError&) {
      row.flag = "unstable";
      return;
    } catch (const SingularMatrixError&) {
      row.flag = "singular";
      return;
    }
    try {
      row.analytic = req.mode == ScanMode::Linear
                         ? closed_form::analytic_linear_report(chain, req.drive, req.pert)
                         : closed_form::analytic_full_report(chain, req.drive, req.pert);
      row.analytic_valid = true;
      if (row.analytic.pole) row.flag = "pole";
    } catch (const std::exception&) {
      row.analytic_valid = false;  // protocol outside the closed-form catalogue
    }
  }, opts);
  return rows;
}

namespace {

// First-order report for the winner fits. The dense route is primary; close
// to the squeezable boundary its solves turn numerically singular (end-to-end
// amplification beyond ~1e14), and the closed first-order expressions take
// over there. Both agree to solver precision wherever both evaluate.
ResponseReport linear_point(const ChainSpec& chain, const DriveSpec& drive,
                            const PerturbationSpec& pert) {
  try {
    return compute_report_linear(chain, drive, pert);
  } catch (const SingularMatrixError&) {
    return closed_form::analytic_linear_report(chain, drive, pert);
  }
}

std::pair<double, bool> parity_slope(const ChainSpec& base, const DriveSpec& drive, Parity parity,
                                     int lo, int hi) {
  std::vector<int> ns;
  std::vector<double> spp;
  for (int n = lo; n <= hi; ++n) {
    ChainSpec chain = base;
    chain.parity = parity;
    chain.n_cells = n;
    chain.m = 1;
    try {
      const ResponseReport rep = linear_point(chain, drive, PerturbationSpec::on_site(1e-9));
      if (!(rep.snr_per_photon > 0.0) || !std::isfinite(rep.snr_per_photon)) return {0.0, false};
      ns.push_back(n);
      spp.push_back(rep.snr_per_photon);
    } catch (const std::exception&) {
      return {0.0, false};
    }
  }
  return {log_slope(ns, spp), true};
}

}  // namespace

std::vector<PhaseCell> phase_diagram_scan(const PhaseDiagramRequest& req,
                                          const sweep::Options& opts) {
  const int n1 = std::max(req.t1_steps, 2), n2 = std::max(req.t2_steps, 2);
  std::vector<PhaseCell> cells(static_cast<std::size_t>(n1) * n2);

  sweep::for_each_index(cells.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / n2;
    const int j = static_cast<int>(idx) % n2;
    PhaseCell& cell = cells[idx];
    cell.t1 = req.t1_min + (req.t1_max - req.t1_min) * i / (n1 - 1);
    cell.t2 = req.t2_min + (req.t2_max - req.t2_min) * j / (n2 - 1);

    ChainSpec chain = req.baseline;
    chain.t1 = cell.t1;
    chain.t2 = cell.t2;
    cell.label = classify_regime(chain);
    if (!chain.squeezable()) return;  // masked: keeps stable=false sentinel
    cell.stable = true;

    const auto [odd_slope, odd_ok] =
        parity_slope(chain, req.drive, Parity::Odd, req.n_window_lo, req.n_window_hi);
    const auto [even_slope, even_ok] =
        parity_slope(chain, req.drive, Parity::Even, req.n_window_lo, req.n_window_hi);
    if (odd_ok && even_ok) {
      cell.onsite_winner = odd_slope > even_slope ? "odd" : "even";
    } else {
      cell.onsite_winner = "masked";
      cell.stable = odd_ok || even_ok;
    }

    cell.nhse_enhanced = false;
    if (const auto alpha = optimal_alpha(chain)) {
      const int lo = std::max(req.n_window_lo, alpha->n_min);
      const int hi = lo + (req.n_window_hi - req.n_window_lo);
      std::vector<int> ns;
      std::vector<double> spp;
      bool ok = true;
      for (int n = lo; n <= hi && ok; ++n) {
        ChainSpec c = chain;
        c.n_cells = n;
        c.m = drive_cell_for(alpha->alpha_star, n);
        try {
          const ResponseReport rep =
              linear_point(c, req.drive, PerturbationSpec::nhse(1e-9, std::acos(-1.0) / 2));
          ok = rep.snr_per_photon > 0.0 && std::isfinite(rep.snr_per_photon);
          ns.push_back(n);
          spp.push_back(rep.snr_per_photon);
        } catch (const std::exception&) {
          ok = false;
        }
      }
      cell.nhse_enhanced = ok && log_slope(ns, spp) > 0.0;
    }
  }, opts);
  return cells;
}

}  // namespace nhsense::analysis
