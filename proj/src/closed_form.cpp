#include "nhsense/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>

namespace nhsense::closed_form {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ipow(double base, int k) { return std::pow(base, k); }

// (1 - lambda^n) / (1 - lambda), continued to n at lambda = 1.
double geometric_sum(double lambda, int n) {
  if (std::abs(lambda - 1.0) < 1e-13) return static_cast<double>(n);
  return (1.0 - std::pow(lambda, n)) / (1.0 - lambda);
}

double log_sum_exp(std::initializer_list<double> logs) {
  double m = -kInf;
  for (double l : logs) m = std::max(m, l);
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - m);
  return m + std::log(acc);
}

struct Ratios {
  double L1, L2, R, Rb;  // (g2+t2)/(g1-t1), (g2-t2)/(g1+t1), (g1+t1)/(g2-t2), (g1-t1)/(g2+t2)
};

Ratios ratios(const ChainSpec& c) {
  return {(c.gamma2 + c.t2) / (c.gamma1 - c.t1), (c.gamma2 - c.t2) / (c.gamma1 + c.t1),
          (c.gamma1 + c.t1) / (c.gamma2 - c.t2), (c.gamma1 - c.t1) / (c.gamma2 + c.t2)};
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

double safe_log10(double v) { return v > 0.0 ? std::log10(v) : -kInf; }

}  // namespace

std::optional<double> tilde_h_inv_element(const ChainSpec& chain, const SqueezingParams& sq,
                                          int row, int col) {
  if (chain.parity != Parity::Odd) return std::nullopt;
  const int N = chain.n_cells, m = chain.m;
  const int dim = 2 * N - 1;
  if (row < 1 || row > dim || col < 1 || col > dim) return std::nullopt;
  const double t1t = sq.t1_tilde, t2t = sq.t2_tilde, kap = chain.kappa;

  if (col == 2 * m - 1) {
    if (row % 2 == 0) return 0.0;
    const int n = (row + 1) / 2;
    return -(2.0 / kap) * ipow(t2t / t1t, m - n);
  }
  if (col == 1) {
    if (row % 2 == 0) {
      const int n = row / 2;
      return n <= m - 1 ? -(1.0 / t1t) * ipow(t2t / t1t, n - 1) : 0.0;
    }
    const int n = (row + 1) / 2;
    return -(2.0 / kap) * ipow(t2t / t1t, 2 * m - n - 1);
  }
  if (col == dim) {
    if (row % 2 == 0) {
      const int n = row / 2;
      return n >= m ? (1.0 / t2t) * ipow(t1t / t2t, N - n - 1) : 0.0;
    }
    const int n = (row + 1) / 2;
    return -(2.0 / kap) * ipow(t1t / t2t, N + n - 2 * m);
  }
  return std::nullopt;
}

std::optional<double> block_inv_element(const ChainSpec& chain, const SqueezingParams& sq,
                                        Quadrature block, int row, int col) {
  const auto base = tilde_h_inv_element(chain, sq, row, col);
  if (!base) return std::nullopt;
  const double halfsum = 0.5 * (sq.r + sq.s);
  const double halfdiff = 0.5 * (sq.r - sq.s);
  double lx = halfsum * (col - row);  // log of the X-block factor
  if (row % 2 == 1 && col % 2 == 0) lx += halfdiff;
  if (row % 2 == 0 && col % 2 == 1) lx -= halfdiff;
  const double f = std::exp(block == Quadrature::X ? lx : -lx);
  return *base * f;
}

std::optional<double> inv_element_first_order(const ChainSpec& chain, const SqueezingParams& sq,
                                              PertKind kind, double phi, int row, int col) {
  if (chain.parity != Parity::Odd) return std::nullopt;
  const int N = chain.n_cells, m = chain.m;
  const int gx = 2 * m - 1;           // driven x row, global
  const int gp = 2 * N + 2 * m - 2;   // driven p row, global

  const auto at = [&](int r, int c) { return *tilde_h_inv_element(chain, sq, r, c); };

  if (kind == PertKind::OnSite) {
    const double prod = at(2 * m - 1, 2 * N - 1) * at(2 * N - 1, 2 * m - 1);
    const double g = std::exp(2.0 * sq.r * (N - sq.n0) + 2.0 * sq.s * (N - sq.m0));
    if (row == gx && col == gx) return 0.0;
    if (row == gx && col == gp) return -g * prod;
    if (row == gp && col == gx) return prod / g;
    if (row == gp && col == gp) return 0.0;
    return std::nullopt;
  }

  const double ep = std::exp((sq.r + sq.s) * (N - 1));
  const double gc = std::exp(sq.r * (N + 1 - 2.0 * sq.n0) + sq.s * (N + 1 - 2.0 * sq.m0));
  const double A = at(2 * m - 1, 1) * at(2 * N - 1, 2 * m - 1);
  const double B = at(2 * m - 1, 2 * N - 1) * at(1, 2 * m - 1);
  const double sp = detail::snap_trig(std::sin(phi)), cp = detail::snap_trig(std::cos(phi));
  if (row == gx && col == gx) return sp * (A / ep - B * ep);
  if (row == gx && col == gp) return -cp * gc * (A + B);
  if (row == gp && col == gx) return cp * (A + B) / gc;
  if (row == gp && col == gp) return sp * (A * ep - B / ep);
  return std::nullopt;
}

double theta_factor(const ChainSpec& chain, const SqueezingParams& sq, double eps0) {
  const int N = chain.n_cells, m = chain.m;
  return 2.0 * eps0 * ipow(sq.t1_tilde / sq.t2_tilde, N - 2 * m + 1) *
         std::sinh((sq.r + sq.s) * (N - 1));
}

CfValue inv_element_all_orders(const ChainSpec& chain, const SqueezingParams& sq, PertKind kind,
                               double eps0, int row, int col) {
  if (chain.parity != Parity::Odd) return {};
  const int N = chain.n_cells, m = chain.m;
  const double t1t = sq.t1_tilde, t2t = sq.t2_tilde, kap = chain.kappa;
  const int S = 2 * N - 1;

  if (kind == PertKind::OnSite) {
    if (m != 1) return {};  // catalogued for the end-drive protocol only
    const double D = eps0 * eps0 + 0.25 * kap * kap * ipow(t2t / t1t, 4 * (N - 1));
    const double g = std::exp(2.0 * sq.r * (N - sq.n0) + 2.0 * sq.s * (N - sq.m0));
    if (col == 1 && row % 2 == 1 && row <= S) {
      const int n = (row + 1) / 2;
      return {CfStatus::Ok, -ipow(t1t / t2t, n - 1) * 0.5 * kap / D * ipow(t2t / t1t, 4 * (N - 1))};
    }
    if (col == 2 * N) {
      if (row <= S && row % 2 == 1) {
        const int n = (row + 1) / 2;
        return {CfStatus::Ok, -ipow(t2t / t1t, N - n) * eps0 * g / D * ipow(t2t / t1t, N - 1)};
      }
      if (row <= S && row % 2 == 0) {
        const int n = row / 2;
        if (n <= N - 1)
          return {CfStatus::Ok,
                  ipow(t2t / t1t, n - 1) * kap / (2.0 * t1t) * eps0 * g / D * ipow(t2t / t1t, 2 * (N - 1))};
      }
      if (row > S) {
        const int q = row - S;
        if (q % 2 == 1) {
          const int n = (q + 1) / 2;
          return {CfStatus::Ok, -ipow(t2t / t1t, N - n) * 0.5 * kap / D * ipow(t2t / t1t, 3 * (N - 1))};
        }
        const int n = q / 2;
        if (n <= N - 1) return {CfStatus::Ok, -ipow(t2t / t1t, n - 1) / t1t * eps0 * eps0 / D};
      }
    }
    return {};
  }

  // Boundary-coupling perturbation at phi = pi/2.
  const double th = theta_factor(chain, sq, eps0);
  const double dminus = -0.5 * kap + th;
  const double dplus = 0.5 * kap + th;
  if (std::abs(dminus) <= 1e-12 * std::max(0.5 * kap, std::abs(th)) ||
      std::abs(dplus) <= 1e-12 * std::max(0.5 * kap, std::abs(th))) {
    return {CfStatus::PoleEncountered, 0.0};
  }
  const double e_amp = std::exp((sq.r + sq.s) * (N - 1));
  const int cx = 2 * m - 1, cp = 2 * N + 2 * m - 2;

  if (col == cx) {
    if (row <= S) {
      if (row % 2 == 1) {
        const int n = (row + 1) / 2;
        return {CfStatus::Ok, ipow(t2t / t1t, m - n) / dminus};
      }
      const int n = row / 2;
      if (n <= m - 1)
        return {CfStatus::Ok, -(eps0 / t1t) * ipow(t1t / t2t, N - m - n + 1) / dminus / e_amp};
      if (n <= N - 1)
        return {CfStatus::Ok, -(eps0 / t2t) * ipow(t1t / t2t, N - m - n) / dminus * e_amp};
    } else {
      const int q = row - S;
      if ((q % 2 == 1 && (q + 1) / 2 <= N) || (q % 2 == 0 && q / 2 <= N - 1))
        return {CfStatus::Ok, 0.0};
    }
    return {};
  }
  if (col == cp) {
    if (row <= S) {
      if ((row % 2 == 1 && (row + 1) / 2 <= N) || (row % 2 == 0 && row / 2 <= N - 1))
        return {CfStatus::Ok, 0.0};
      return {};
    }
    const int q = row - S;
    if (q % 2 == 1) {
      const int n = (q + 1) / 2;
      return {CfStatus::Ok, -ipow(t2t / t1t, m - n) / dplus};
    }
    const int n = q / 2;
    if (n <= m - 1)
      return {CfStatus::Ok, (eps0 / t1t) * ipow(t1t / t2t, N - m - n + 1) / dplus * e_amp};
    if (n <= N - 1)
      return {CfStatus::Ok, (eps0 / t2t) * ipow(t1t / t2t, N - m - n) / dplus / e_amp};
    return {};
  }
  return {};
}

ResponseReport analytic_linear_report(const ChainSpec& chain, const DriveSpec& drive,
                                      const PerturbationSpec& pert) {
  chain.validate();
  if (!chain.squeezable()) {
    throw InstabilityError("analytic_linear_report: requires gamma > |t| in both cells");
  }
  const int N = chain.n_cells, m = chain.m;
  const Ratios q = ratios(chain);
  const double eps = pert.epsilon, kap = chain.kappa, beta = drive.beta_abs, tau = drive.tau;
  const double ct = detail::snap_trig(std::cos(drive.theta));
  const double st = detail::snap_trig(std::sin(drive.theta));
  const double cm = detail::snap_trig(std::cos(drive.phi_meas));
  const double sm = detail::snap_trig(std::sin(drive.phi_meas));

  double signal = 0.0;
  if (chain.parity == Parity::Odd) {
    double bracket;
    if (pert.kind == PertKind::OnSite) {
      bracket = -cm * st * ipow(q.R, 2 * (N - m)) + sm * ct * ipow(q.Rb, 2 * (N - m));
    } else {
      const double sp = detail::snap_trig(std::sin(pert.phi));
      const double cp = detail::snap_trig(std::cos(pert.phi));
      const double Q = (chain.gamma2 * chain.gamma2 - chain.t2 * chain.t2) /
                       (chain.gamma1 * chain.gamma1 - chain.t1 * chain.t1);
      const double edge = ipow(q.R, N) * q.Rb - ipow(q.Rb, N) * q.R;
      bracket = -cm * (sp * ipow(Q, m) * edge * ct + 2.0 * cp * ipow(q.R, N - 2 * m + 1) * st) +
                sm * (2.0 * cp * ipow(q.Rb, N - 2 * m + 1) * ct + sp * ipow(Q, m) * edge * st);
    }
    signal = 32.0 * tau * eps * eps / (kap * kap) * beta * beta * bracket * bracket;
  } else {
    if (pert.kind == PertKind::OnSite) {
      const double g1t = chain.gamma1 - chain.t1, g1p = chain.gamma1 + chain.t1;
      const double bracket = cm * st / (g1t * g1t) * ipow(q.L1, 2 * (N - m)) -
                             sm * ct / (g1p * g1p) * ipow(q.L2, 2 * (N - m));
      signal = 2.0 * tau * kap * kap * eps * eps * beta * beta * bracket * bracket;
    } else {
      signal = 0.0;  // single drive cannot see the boundary coupling here
    }
  }

  ResponseReport rep;
  rep.signal = signal;
  rep.noise = drive.n_th + 0.5;
  if (chain.parity == Parity::Odd) {
    rep.n_tot = 4.0 / kap * beta * beta *
                (ct * ct * ipow(q.L1, 2 * (m - 1)) * geometric_sum(1.0 / (q.L1 * q.L1), N) +
                 st * st * ipow(q.L2, 2 * (m - 1)) * geometric_sum(1.0 / (q.L2 * q.L2), N));
  } else {
    const double g1t = chain.gamma1 - chain.t1, g1p = chain.gamma1 + chain.t1;
    rep.n_tot = kap * beta * beta *
                (ct * ct / (g1p * g1p) * geometric_sum(q.L2 * q.L2, N - m + 1) +
                 st * st / (g1t * g1t) * geometric_sum(q.L1 * q.L1, N - m + 1));
  }
  rep.snr = rep.signal / rep.noise;
  rep.snr_per_photon = rep.snr / rep.n_tot;
  rep.log10_signal = safe_log10(rep.signal);
  rep.log10_snr = safe_log10(rep.snr);
  return rep;
}

namespace {

// Lab-frame steady-state moments assembled from the all-order catalogue,
// used for the exact photon sums. The gauge offsets carried by sq cancel
// between the element values, the drive factors and the site factors.
double catalogue_photons(const ChainSpec& chain, const SqueezingParams& sq, PertKind kind,
                         double eps0, const DriveSpec& drive, bool& pole) {
  const int N = chain.n_cells, m = chain.m;
  const int S = 2 * N - 1;
  const double amp = std::sqrt(2.0 * chain.kappa) * drive.beta_abs;
  const double bx = amp * std::cos(drive.theta) * std::exp(sq.r * (m - sq.n0) + sq.s * (m - sq.m0));
  const double bp = amp * std::sin(drive.theta) * std::exp(-sq.r * (m - sq.n0) - sq.s * (m - sq.m0));

  const auto elem = [&](int row, int col) -> double {
    const CfValue v = inv_element_all_orders(chain, sq, kind, eps0, row, col);
    if (v.status == CfStatus::PoleEncountered) {
      pole = true;
      return kInf;
    }
    if (v.status == CfStatus::NotTabulated) {
      throw std::logic_error("catalogue_photons: element outside the tabulated families");
    }
    return v.value;
  };

  const int cx = kind == PertKind::OnSite ? 1 : 2 * m - 1;
  const int cp = kind == PertKind::OnSite ? 2 * N : 2 * N + 2 * m - 2;
  const bool use_x = std::abs(std::cos(drive.theta)) > 1e-15;

  double sum = 0.0;
  for (int n = 1; n <= N; ++n) {
    const double site_a = std::exp(-sq.r * (n - sq.n0) - sq.s * (n - sq.m0));
    double xt = elem(2 * n - 1, cp) * bp;
    double pt = elem(S + 2 * n - 1, cp) * bp;
    if (use_x) {
      xt += elem(2 * n - 1, cx) * bx;
      pt += elem(S + 2 * n - 1, cx) * bx;
    }
    const double xa = site_a * xt;
    const double pa = pt / site_a;
    sum += xa * xa + pa * pa;
    if (n <= N - 1) {
      const double site_b = std::exp(-sq.r * (n + 1 - sq.n0) - sq.s * (n - sq.m0));
      double xbt = elem(2 * n, cp) * bp;
      double pbt = elem(S + 2 * n, cp) * bp;
      if (use_x) {
        xbt += elem(2 * n, cx) * bx;
        pbt += elem(S + 2 * n, cx) * bx;
      }
      const double xb = site_b * xbt;
      const double pb = pbt / site_b;
      sum += xb * xb + pb * pb;
    }
  }
  return 0.5 * sum;
}

}  // namespace

ResponseReport analytic_full_report(const ChainSpec& chain, const DriveSpec& drive,
                                    const PerturbationSpec& pert, double n0, double m0) {
  chain.validate();
  if (chain.parity != Parity::Odd) {
    throw std::invalid_argument("analytic_full_report: all-order closed forms cover odd chains only");
  }
  if (!chain.squeezable()) {
    throw InstabilityError("analytic_full_report: requires gamma > |t| in both cells");
  }
  const double pi = std::acos(-1.0);
  if (pert.kind == PertKind::OnSite) {
    if (chain.m != 1 || !near(drive.phi_meas, 0.0) || !near(drive.theta, pi / 2))
      throw std::invalid_argument(
          "analytic_full_report: on-site protocol is m = 1, phi_meas = 0, theta = pi/2");
  } else {
    if (!near(drive.theta, pi / 4) || !near(pert.phi, pi / 2) || !near(drive.phi_meas, 0.0))
      throw std::invalid_argument(
          "analytic_full_report: boundary-coupling protocol is theta = pi/4, phi = pi/2, phi_meas = 0");
  }

  const SqueezingParams sq = squeezing_params(chain, n0, m0);
  const int N = chain.n_cells;
  const double kap = chain.kappa, tau = drive.tau, beta = drive.beta_abs, nth = drive.n_th;
  const double eps0 = pert.epsilon;
  const Ratios q = ratios(chain);

  ResponseReport rep;

  if (pert.kind == PertKind::OnSite) {
    // log-space assembly: lY = log L1^{4(N-1)}, lX = log (t2~/t1~)^{4(N-1)}
    const double lY = 4.0 * (N - 1) * std::log(q.L1);
    const double lX = 4.0 * (N - 1) * std::log(sq.t2_tilde / sq.t1_tilde);
    const double le = std::log(eps0 > 0.0 ? eps0 : std::numeric_limits<double>::min());
    const double lD = log_sum_exp({2.0 * le, 2.0 * std::log(0.5 * kap) + lX});
    const double lsig = std::log(2.0 * tau * kap * kap * beta * beta) + 2.0 * le + lY - 2.0 * lD;
    rep.signal = std::exp(lsig);
    const double lnoise_bracket =
        log_sum_exp({4.0 * std::log(0.5 * kap) + 2.0 * lX,
                     2.0 * le + 2.0 * std::log(kap) - std::log(2.0) + lY, 4.0 * le});
    rep.noise = 0.5 * (2.0 * nth + 1.0) * std::exp(lnoise_bracket - 2.0 * lD);
    const double lden = log_sum_exp({std::log(2.0) + 4.0 * std::log(0.5 * kap) + 2.0 * lX,
                                     2.0 * le + 2.0 * std::log(kap) + lY,
                                     std::log(2.0) + 4.0 * le});
    rep.snr = std::exp(std::log(8.0 * tau * beta * beta) + 2.0 * le + 2.0 * std::log(kap) + lY -
                       lden) /
              (2.0 * nth + 1.0);
    rep.log10_signal = lsig / std::log(10.0);
    rep.log10_snr = safe_log10(rep.snr);
  } else {
    const double th = theta_factor(chain, sq, eps0);
    const double dminus = 0.5 * kap - th;
    if (std::abs(dminus) <= 1e-12 * std::max(0.5 * kap, std::abs(th))) {
      rep.pole = true;
      rep.signal = kInf;
      rep.noise = kInf;
    } else {
      rep.signal = 4.0 * tau * beta * beta * th * th / (dminus * dminus);
      rep.noise = 0.5 * (2.0 * nth + 1.0) * (0.25 * kap * kap + th * th) / (dminus * dminus);
    }
    // the pole cancels between signal and averaged noise
    rep.snr = 8.0 * tau * beta * beta * th * th / ((2.0 * nth + 1.0) * (0.25 * kap * kap + th * th));
    rep.log10_signal = safe_log10(rep.signal);
    rep.log10_snr = safe_log10(rep.snr);
  }

  bool pole = false;
  const double photons_eps = catalogue_photons(chain, sq, pert.kind, eps0, drive, pole);
  const double photons_zero = analytic_linear_report(chain, drive, pert).n_tot;
  rep.pole = rep.pole || pole;
  rep.n_tot = 0.5 * (photons_zero + photons_eps);
  rep.snr_per_photon = rep.snr / rep.n_tot;
  return rep;
}

double full_photons_asymptotic(const ChainSpec& chain, const DriveSpec& drive,
                               const PerturbationSpec& pert) {
  const int N = chain.n_cells, m = chain.m;
  const double kap = chain.kappa, beta = drive.beta_abs, eps0 = pert.epsilon;
  const Ratios q = ratios(chain);
  const double g1p = chain.gamma1 + chain.t1, g1t = chain.gamma1 - chain.t1;
  if (pert.kind == PertKind::OnSite) {
    const double G = (chain.gamma2 * chain.gamma2 - chain.t2 * chain.t2) /
                     (chain.gamma1 * chain.gamma1 - chain.t1 * chain.t1);
    const double D = eps0 * eps0 + 0.25 * kap * kap * ipow(G, 2 * (N - 1));
    const double term1 = 0.25 * kap * kap * ipow(G, 4 * (N - 1)) * geometric_sum(q.R * q.R, N);
    const double term2 = eps0 * eps0 * ipow(q.L1, 4 * (N - 1)) * geometric_sum(q.Rb * q.Rb, N);
    const double term3 = std::pow(eps0, 4) / (g1t * g1t) *
                         ((chain.gamma2 + chain.t2) / (chain.gamma2 - chain.t2)) *
                         geometric_sum(q.L1 * q.L1, N - 1);
    const double term4 = 0.25 * kap * kap * eps0 * eps0 / (g1p * g1p) * ipow(q.L1, 4 * (N - 1)) *
                         ((chain.gamma2 - chain.t2) / (chain.gamma2 + chain.t2)) *
                         geometric_sum(q.L2 * q.L2, N - 1);
    return kap * beta * beta / (D * D) * (term1 + term2 + term3 + term4);
  }
  const double Tp = ipow(q.L1, m - 1) * ipow(q.R, N - m);
  const double first = 0.5 * kap * beta * beta / std::pow(0.5 * kap - eps0 * Tp, 2) *
                       (ipow(q.L1, 2 * (m - 1)) +
                        eps0 * eps0 / (g1p * g1p) * ipow(q.R, 2 * (N - m)) * ipow(q.L1, 2 * (m - 1)));
  const double second = 0.5 * kap * beta * beta / std::pow(0.5 * kap + eps0 * Tp, 2) *
                        (ipow(q.L2, 2 * (m - 1)) * geometric_sum(q.R * q.R, N) +
                         eps0 * eps0 / (g1t * g1t) * ipow(q.R, 2 * (N - m)) * ipow(q.L1, 2 * (m - 2)));
  return first + second;
}

double bkc_linear_snr(int n_sites, double t1, double gamma1, double kappa, const DriveSpec& drive,
                      double eps) {
  const double lam = (gamma1 + t1) / (gamma1 - t1);
  return 64.0 * drive.tau * (eps / kappa) * (eps / kappa) * drive.beta_abs * drive.beta_abs *
         std::pow(lam, 2 * (n_sites - 1)) / (2.0 * drive.n_th + 1.0);
}

double bkc_all_order_snr(int n_sites, double t1, double gamma1, double kappa,
                         const DriveSpec& drive, double eps0) {
  const double lam = (gamma1 + t1) / (gamma1 - t1);
  const double h2 = 0.25 * kappa * kappa;
  const double qf = eps0 * kappa / (h2 + eps0 * eps0);
  const double w = (h2 - eps0 * eps0) / (h2 + eps0 * eps0);
  const double amp = std::pow(lam, 2 * (n_sites - 1));
  return 8.0 * drive.tau * qf * qf * drive.beta_abs * drive.beta_abs * amp /
         ((2.0 * drive.n_th + 1.0) * (1.0 + w * w + qf * qf * amp));
}

}  // namespace nhsense::closed_form
