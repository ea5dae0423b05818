// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "nhsense/analysis.hpp"
#include "nhsense/verify.hpp"

using namespace nhsense;

namespace {

constexpr double kPi = 3.14159265358979323846;
int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s criterion-%02d %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

ChainSpec fig4(int n, Parity parity = Parity::Odd, int m = 1) {
  ChainSpec c;
  c.n_cells = n;
  c.parity = parity;
  c.t1 = 0.5;
  c.t2 = 0.3;
  c.gamma1 = 0.7;
  c.gamma2 = 0.4;
  c.kappa = 0.05;
  c.m = m;
  return c;
}

ChainSpec fig5(int n) {
  ChainSpec c;
  c.n_cells = n;
  c.t1 = 1.0;
  c.t2 = 1.0;
  c.gamma1 = 1.5;
  c.gamma2 = 2.5;
  c.kappa = 0.05;
  c.m = 1;
  return c;
}

ChainSpec fig6(int n, int m) {
  ChainSpec c;
  c.n_cells = n;
  c.t1 = 0.6;
  c.t2 = 0.4;
  c.gamma1 = 1.1;
  c.gamma2 = 1.6;
  c.kappa = 0.05;
  c.m = m;
  return c;
}

int floor_cell(double alpha, int n) {
  return std::max(1, std::min(n, static_cast<int>(std::floor(alpha * n + 1e-9))));
}

double rel(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

// knee = strongest curvature of log10(snr) against N
int knee_cell(const std::vector<analysis::ScalingRow>& rows) {
  int knee = rows.front().n_cells;
  double best = -1.0;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    const double c = std::abs(rows[i - 1].numeric.log10_snr - 2.0 * rows[i].numeric.log10_snr +
                              rows[i + 1].numeric.log10_snr);
    if (c > best) {
      best = c;
      knee = rows[i].n_cells;
    }
  }
  return knee;
}

void criterion_1_catalogue(std::mt19937_64& rng) {
  const auto exact = verify::check_exact_catalogue(20, 1e-10, rng);
  const auto first = verify::check_first_order_catalogue(20, 1e-5, rng);
  const auto all = verify::check_all_order_catalogue(20, 1e-8, {1e-6, 1e-3, 1e-1}, rng);
  report(1, "closed-form inverse catalogue",
         exact.failed == 0 && first.failed == 0 && all.failed == 0,
         "exact worst=" + fmt(exact.worst) + ", first-order worst=" + fmt(first.worst) +
             ", all-order worst=" + fmt(all.worst));
}

void criterion_2_oracle(std::mt19937_64& rng) {
  const auto res = verify::check_oracle_equivalence(50, 1e-6, rng);
  report(2, "time-domain oracle equivalence", res.failed == 0,
         std::to_string(res.passed) + "/50 configs, worst rel err=" + fmt(res.worst));
}

void criterion_3_noise_floor(std::mt19937_64& rng) {
  const auto res = verify::check_noise_floor(20, 1e-10, rng);
  report(3, "noise floor n_th + 1/2", res.failed == 0, "worst abs dev=" + fmt(res.worst));
}

void criterion_4_fig4() {
  DriveSpec drive;
  drive.theta = kPi / 4;

  analysis::ScalingRequest odd;
  odd.baseline = fig4(2);
  odd.drive = drive;
  odd.pert = PerturbationSpec::on_site(1e-6);
  odd.n_min = 6;
  odd.n_max = 12;
  odd.mode = analysis::ScanMode::Linear;
  const auto odd_rows = analysis::scaling_scan(odd);

  analysis::ScalingRequest even = odd;
  even.baseline = fig4(2, Parity::Even);
  const auto even_rows = analysis::scaling_scan(even);

  std::vector<int> ns;
  std::vector<double> so, se;
  for (std::size_t i = 0; i < odd_rows.size(); ++i) {
    ns.push_back(odd_rows[i].n_cells);
    so.push_back(odd_rows[i].numeric.snr_per_photon);
    se.push_back(even_rows[i].numeric.snr_per_photon);
  }
  const double odd_slope = analysis::log_slope(ns, so);
  const double even_slope = analysis::log_slope(ns, se);
  const double target = 2.0 * std::log(12.0);
  const bool slope_ok = std::abs(odd_slope / target - 1.0) <= 0.01;

  const double alpha = 9.0 / 20.0;
  const int n_min = static_cast<int>(std::ceil(1.0 / alpha - 1e-12));
  analysis::ScalingRequest nhse;
  nhse.baseline = fig4(2);
  nhse.drive = drive;
  nhse.pert = PerturbationSpec::nhse(1e-6, kPi / 2);
  nhse.n_min = n_min;
  nhse.n_max = 13;
  nhse.mode = analysis::ScanMode::Linear;
  nhse.alpha = alpha;
  const auto nhse_rows = analysis::scaling_scan(nhse);
  std::vector<int> nn;
  std::vector<double> sn;
  bool nondecreasing = true;
  for (std::size_t i = 0; i < nhse_rows.size(); ++i) {
    nn.push_back(nhse_rows[i].n_cells);
    sn.push_back(nhse_rows[i].numeric.snr_per_photon);
    if (i > 0) nondecreasing = nondecreasing && sn[i] >= sn[i - 1] * (1.0 - 1e-12);
  }
  const double nhse_slope = analysis::log_slope(nn, sn);
  const bool nhse_ok = nondecreasing && nhse_slope > 0.0 && sn.back() > 10.0 * sn.front();

  report(4, "first-order size scaling at the reference point",
         slope_ok && nhse_ok && even_slope < odd_slope,
         "odd slope=" + fmt(odd_slope) + " vs 2ln12=" + fmt(target) +
             ", even slope=" + fmt(even_slope) + ", boundary-coupling slope=" + fmt(nhse_slope));
}

void criterion_5_fig5() {
  DriveSpec drive;
  drive.theta = kPi / 2;

  analysis::ScalingRequest req;
  req.baseline = fig5(1);
  req.drive = drive;
  req.pert = PerturbationSpec::on_site(1e-6);
  req.n_min = 1;
  req.n_max = 25;
  const auto rows = analysis::scaling_scan(req);
  const double tail = rows.back().numeric.snr;
  const bool saturated = rel(tail, 800.0) <= 1e-3;

  bool knees_ok = true;
  std::string knee_detail;
  for (const double e0 : {1e-6, 1e-5, 1e-4}) {
    analysis::ScalingRequest r2 = req;
    r2.pert = PerturbationSpec::on_site(e0);
    const auto rows2 = analysis::scaling_scan(r2);
    const int knee = knee_cell(rows2);
    const double nstar = *analysis::breakdown_size(req.baseline, PertKind::OnSite, e0, 0.0);
    knees_ok = knees_ok && std::abs(knee - nstar) <= 1.0;
    knee_detail += "eps0=" + fmt(e0) + ": knee=" + std::to_string(knee) + " N*=" + fmt(nstar) + "; ";
  }
  report(5, "all-order saturation and breakdown knee", saturated && knees_ok,
         "tail snr=" + fmt(tail) + "; " + knee_detail);
}

void criterion_6_fig6() {
  const auto alpha = analysis::optimal_alpha(fig6(5, 1));
  const bool alpha_ok = alpha && std::abs(alpha->alpha_star - 0.2008) <= 1e-3 && alpha->n_min == 5;

  DriveSpec drive;
  drive.theta = kPi / 4;
  analysis::ScalingRequest req;
  req.baseline = fig6(5, 1);
  req.drive = drive;
  req.pert = PerturbationSpec::nhse(1e-6, kPi / 2);
  req.n_min = 5;
  req.n_max = 30;
  req.alpha = alpha ? alpha->alpha_star : 0.2;
  const auto rows = analysis::scaling_scan(req);

  int peak_cell = 0;
  double peak = -1.0;
  for (const auto& r : rows) {
    if (r.numeric.snr_per_photon > peak) {
      peak = r.numeric.snr_per_photon;
      peak_cell = r.n_cells;
    }
  }
  const double nstar =
      *analysis::breakdown_size(req.baseline, PertKind::Nhse, 1e-6, alpha->alpha_star);
  const bool peak_ok = std::abs(peak_cell - nstar) <= 1.0;
  const double tail = rows.back().numeric.snr;
  const bool tail_ok = rel(tail, 800.0) <= 1e-3;

  report(6, "drive-position optimum and per-photon peak", alpha_ok && peak_ok && tail_ok,
         "alpha*=" + fmt(alpha ? alpha->alpha_star : 0.0) +
             " n_min=" + std::to_string(alpha ? alpha->n_min : 0) +
             ", peak at N=" + std::to_string(peak_cell) + " vs N*=" + fmt(nstar) +
             ", tail snr=" + fmt(tail));
}

void criterion_7_even_null() {
  DriveSpec drive;
  drive.theta = kPi / 4;
  const ChainSpec base = fig4(5, Parity::Even, 2);

  std::vector<double> eps = {1e-9, 1e-8, 1e-7, 1e-6};
  std::vector<double> sig;
  double scale = 0.0;
  for (const double e : eps) {
    const ResponseReport rep = compute_report(base, drive, PerturbationSpec::nhse(e, kPi / 2));
    sig.push_back(rep.signal);
    scale = std::max(scale, rep.n_tot);
  }
  // the quadratic-or-steeper criterion: either the measured signals carry a
  // usable slope, or they sit at the numerical floor because the first-order
  // (and in fact every-order) coefficient vanishes identically
  const double floor = base.kappa * drive.tau * std::pow(1e-10 * std::sqrt(2.0 * scale), 2);
  bool all_floor = true;
  for (const double s : sig) all_floor = all_floor && s <= floor;
  bool pass;
  std::string detail;
  if (all_floor) {
    pass = true;
    detail = "signal at numerical zero for eps in [1e-9,1e-6]; max=" + fmt(sig.back()) +
             " (floor " + fmt(floor) + ")";
  } else {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
      const double x = std::log(eps[i]), y = std::log(sig[i]);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double n = static_cast<double>(eps.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    pass = slope >= 2.0 - 0.05;
    detail = "fitted log-log slope=" + fmt(slope);
  }
  report(7, "even-chain boundary-coupling null response", pass, detail);
}

void criterion_8_stability(std::mt19937_64& rng) {
  const auto res = verify::check_stability_dichotomy(100, rng);
  report(8, "stability dichotomy", res.failed == 0,
         std::to_string(res.passed) + "/200 classified, 0 tolerated misses");
}

void criterion_9_gauge_frame(std::mt19937_64& rng) {
  const auto res = verify::check_frame_gauge_invariance(20, 1e-10, rng);
  report(9, "gauge and frame invariance", res.failed == 0, "worst rel dev=" + fmt(res.worst));
}

void criterion_10_bkc() {
  DriveSpec drive;
  drive.theta = kPi / 2;
  const double eps = 1e-6;
  const double pts[5][3] = {{1.0, 1.5, 3}, {0.5, 0.7, 4}, {0.3, 2.0, 5}, {0.6, 1.1, 6}, {2.0, 3.0, 2}};
  double worst = 0.0;
  for (const auto& p : pts) {
    ChainSpec c;
    c.n_cells = static_cast<int>(p[2]);
    c.t1 = p[0];
    c.t2 = p[0];
    c.gamma1 = p[1];
    c.gamma2 = p[1];
    c.kappa = 0.05;
    c.m = 1;
    const ResponseReport rep =
        closed_form::analytic_linear_report(c, drive, PerturbationSpec::on_site(eps));
    const double bkc =
        closed_form::bkc_linear_snr(2 * c.n_cells - 1, p[0], p[1], c.kappa, drive, eps);
    worst = std::max(worst, rel(rep.snr, bkc));
  }
  report(10, "uniform-chain linear-ratio limit", worst <= 1e-10, "worst rel dev=" + fmt(worst));
}

}  // namespace

int main() {
  std::mt19937_64 rng(777);
  criterion_1_catalogue(rng);
  criterion_2_oracle(rng);
  criterion_3_noise_floor(rng);
  criterion_4_fig4();
  criterion_5_fig5();
  criterion_6_fig6();
  criterion_7_even_null();
  criterion_8_stability(rng);
  criterion_9_gauge_frame(rng);
  criterion_10_bkc();
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
