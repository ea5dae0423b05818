#include "nhsense/response.hpp"

#include <Eigen/LU>
#include <cmath>

namespace nhsense {

namespace {

// Drive vector in the frame of `sys`; the squeezed frame rescales the two
// entries by the site exponentials of the transform.
Eigen::VectorXd drive_vector(const AssembledSystem& sys, const DriveSpec& drive) {
  const IndexMap map = sys.matrix.map;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(map.dim());
  const ChainSpec& chain = sys.chain;
  const double amp = std::sqrt(2.0 * chain.kappa) * drive.beta_abs;
  double fx = 1.0, fp = 1.0;
  if (sys.frame == Frame::Squeezed) {
    const SqueezingParams& sq = sys.squeeze;
    fx = std::exp(sq.r * (chain.m - sq.n0) + sq.s * (chain.m - sq.m0));
    fp = 1.0 / fx;
  }
  b(map.x_pos(chain.m, Sublattice::A)) = amp * detail::snap_trig(std::cos(drive.theta)) * fx;
  b(map.p_pos(chain.m, Sublattice::A)) = amp * detail::snap_trig(std::sin(drive.theta)) * fp;
  return b;
}

// diag(T, T^-1) mapping squeezed-frame vectors to the lab frame.
Eigen::VectorXd frame_diagonal(const AssembledSystem& sys) {
  const int s = sys.matrix.map.sites();
  Eigen::VectorXd d = Eigen::VectorXd::Ones(2 * s);
  if (sys.frame == Frame::Squeezed) {
    const Eigen::VectorXd t = squeezing_transform_matrix(sys.chain, sys.squeeze).entries.diagonal();
    d.head(s) = t;
    d.tail(s) = t.cwiseInverse();
  }
  return d;
}

struct Factorized {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  const Eigen::MatrixXd* H = nullptr;
  double norm1 = 0.0;
  double rcond = 0.0;

  // one step of iterative refinement on top of the factored solve
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    Eigen::VectorXd x = lu.solve(b);
    x += lu.solve((b - *H * x).eval());
    return x;
  }
};

Factorized factorize(const Eigen::MatrixXd& H) {
  Factorized f{Eigen::PartialPivLU<Eigen::MatrixXd>(H), &H,
               H.cwiseAbs().colwise().sum().maxCoeff(), 0.0};
  f.rcond = f.lu.rcond();
  if (!(f.rcond > 1e-14)) {
    throw SingularMatrixError("dynamical matrix is numerically singular (rcond " +
                              std::to_string(f.rcond) + ")");
  }
  return f;
}

// The four lab-frame inverse elements at the driven site's x/p rows and
// columns, obtained from two solves (inverse columns), plus the lab moments.
struct SolveOut {
  Eigen::VectorXd moments_lab;
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;  // [H^-1] at (x,x),(x,p),(p,x),(p,p)
  double cond = 0.0;
};

SolveOut solve_point(const AssembledSystem& sys, const DriveSpec& drive) {
  const IndexMap map = sys.matrix.map;
  const int ix = map.x_pos(sys.chain.m, Sublattice::A);
  const int ip = map.p_pos(sys.chain.m, Sublattice::A);
  const Factorized f = factorize(sys.matrix.entries);

  const Eigen::VectorXd frame = frame_diagonal(sys);
  SolveOut out;
  out.moments_lab = frame.asDiagonal() * f.solve(drive_vector(sys, drive));

  Eigen::VectorXd ex = Eigen::VectorXd::Zero(map.dim());
  Eigen::VectorXd ep = Eigen::VectorXd::Zero(map.dim());
  ex(ix) = 1.0 / frame(ix);  // lab inverse column = frame * Hf^-1 * frame^-1 e_j
  ep(ip) = 1.0 / frame(ip);
  Eigen::MatrixXd cols(map.dim(), 2);
  cols.col(0) = frame.asDiagonal() * f.solve(ex);
  cols.col(1) = frame.asDiagonal() * f.solve(ep);
  out.a = cols(ix, 0);
  out.c = cols(ip, 0);
  out.b = cols(ix, 1);
  out.d = cols(ip, 1);
  out.cond = f.norm1 / std::max(f.rcond * f.norm1, 1e-300);  // 1/rcond
  return out;
}

double homodyne_noise(const SolveOut& s, double kappa, double phi_meas, double n_th) {
  const double cf = std::cos(phi_meas), sf = std::sin(phi_meas);
  const double ux = 1.0 + kappa * s.a;
  const double up = 1.0 + kappa * s.d;
  return (n_th + 0.5) * (cf * cf * (ux * ux + kappa * kappa * s.b * s.b) +
                         sf * sf * (up * up + kappa * kappa * s.c * s.c) +
                         sf * cf * (ux * kappa * s.c + kappa * s.b * up));
}

double photon_number(const Eigen::VectorXd& moments) { return 0.5 * moments.squaredNorm(); }

AssembledSystem assemble(const ChainSpec& chain, const PerturbationSpec& pert, double epsilon,
                         const ResponseOptions& opts) {
  PerturbationSpec p = pert;
  p.epsilon = epsilon;
  if (opts.frame == Frame::Squeezed) {
    const SqueezingParams sq = squeezing_params(chain, opts.n0, opts.m0);
    return assemble_full(chain, p, Frame::Squeezed, &sq);
  }
  return assemble_full(chain, p, Frame::Lab);
}

double safe_log10(double v) { return v > 0.0 ? std::log10(v) : -std::numeric_limits<double>::infinity(); }

}  // namespace

Eigen::VectorXd steady_state_moments(const AssembledSystem& sys, const DriveSpec& drive) {
  require_stable(sys.chain);
  return solve_point(sys, drive).moments_lab;
}

ResponseReport compute_report(const ChainSpec& chain, const DriveSpec& drive,
                              const PerturbationSpec& pert, const ResponseOptions& opts) {
  chain.validate();
  require_stable(chain);
  if (pert.epsilon < 0.0) throw std::invalid_argument("compute_report: epsilon must be >= 0");

  const AssembledSystem sys0 = assemble(chain, pert, 0.0, opts);
  const AssembledSystem syse = assemble(chain, pert, pert.epsilon, opts);
  const IndexMap map = sys0.matrix.map;
  const int ix = map.x_pos(chain.m, Sublattice::A);
  const int ip = map.p_pos(chain.m, Sublattice::A);

  const SolveOut s0 = solve_point(sys0, drive);
  const SolveOut se = solve_point(syse, drive);

  const double dx = se.moments_lab(ix) - s0.moments_lab(ix);
  const double dp = se.moments_lab(ip) - s0.moments_lab(ip);
  const double amp = std::cos(drive.phi_meas) * dx + std::sin(drive.phi_meas) * dp;

  ResponseReport rep;
  rep.signal = chain.kappa * drive.tau * amp * amp;
  rep.noise = 0.5 * (homodyne_noise(s0, chain.kappa, drive.phi_meas, drive.n_th) +
                     homodyne_noise(se, chain.kappa, drive.phi_meas, drive.n_th));
  rep.n_tot = 0.5 * (photon_number(s0.moments_lab) + photon_number(se.moments_lab));
  rep.snr = rep.signal / rep.noise;
  rep.snr_per_photon = rep.snr / rep.n_tot;
  rep.log10_signal = safe_log10(rep.signal);
  rep.log10_snr = safe_log10(rep.snr);
  rep.cond = std::max(s0.cond, se.cond);
  return rep;
}

ResponseReport compute_report_linear(const ChainSpec& chain, const DriveSpec& drive,
                                     const PerturbationSpec& pert, const ResponseOptions& opts) {
  chain.validate();
  require_stable(chain);

  const AssembledSystem sys0 = assemble(chain, pert, 0.0, opts);
  const IndexMap map = sys0.matrix.map;
  const int ix = map.x_pos(chain.m, Sublattice::A);
  const int ip = map.p_pos(chain.m, Sublattice::A);

  const Factorized f = factorize(sys0.matrix.entries);
  const Eigen::VectorXd frame = frame_diagonal(sys0);
  const Eigen::VectorXd v0_frame = f.solve(drive_vector(sys0, drive));

  // d v / d eps at eps = 0: one extra solve against the perturbation image.
  PerturbationSpec unit = pert;
  unit.epsilon = 1.0;
  const Eigen::MatrixXd P =
      perturbation_block(chain, unit, sys0.frame,
                         sys0.frame == Frame::Squeezed ? &sys0.squeeze : nullptr)
          .entries;
  const Eigen::VectorXd dv_frame = -pert.epsilon * f.solve((P * v0_frame).eval());
  const Eigen::VectorXd v0 = frame.asDiagonal() * v0_frame;
  const Eigen::VectorXd dv = frame.asDiagonal() * dv_frame;

  const double amp = std::cos(drive.phi_meas) * dv(ix) + std::sin(drive.phi_meas) * dv(ip);

  ResponseReport rep;
  rep.signal = chain.kappa * drive.tau * amp * amp;
  rep.noise = drive.n_th + 0.5;
  rep.n_tot = photon_number(v0);
  rep.snr = rep.signal / rep.noise;
  rep.snr_per_photon = rep.snr / rep.n_tot;
  rep.log10_signal = safe_log10(rep.signal);
  rep.log10_snr = safe_log10(rep.snr);
  rep.cond = f.norm1 / std::max(f.rcond * f.norm1, 1e-300);
  return rep;
}

OracleResult time_domain_oracle(const AssembledSystem& sys, const DriveSpec& drive, double t_end,
                                double dt, double tol) {
  const Eigen::MatrixXd& H = sys.matrix.entries;
  const Eigen::VectorXd b = drive_vector(sys, drive);
  const double bnorm = std::max(b.lpNorm<Eigen::Infinity>(), 1e-300);
  if (dt <= 0.0) {
    const double hnorm = H.cwiseAbs().colwise().sum().maxCoeff();
    dt = 1.0 / std::max(hnorm, 1e-12);
  }

  OracleResult res;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(H.rows());
  Eigen::VectorXd k1(H.rows()), k2(H.rows()), k3(H.rows()), k4(H.rows());
  const int check_every = 512;
  double t = 0.0;
  long long steps = 0;
  const double blowup = 1e14 * (1.0 + bnorm);

  auto record = [&](double tt) {
    if (res.sample_times.size() >= 64) {  // thin to keep the trajectory small
      std::vector<double> ts;
      std::vector<Eigen::VectorXd> vs;
      for (std::size_t i = 0; i < res.sample_times.size(); i += 2) {
        ts.push_back(res.sample_times[i]);
        vs.push_back(res.sample_states[i]);
      }
      res.sample_times.swap(ts);
      res.sample_states.swap(vs);
    }
    res.sample_times.push_back(tt);
    res.sample_states.push_back(v);
  };

  record(0.0);
  while (t < t_end) {
    for (int i = 0; i < check_every; ++i) {
      k1.noalias() = H * v;            k1 -= b;
      k2.noalias() = H * (v + 0.5 * dt * k1); k2 -= b;
      k3.noalias() = H * (v + 0.5 * dt * k2); k3 -= b;
      k4.noalias() = H * (v + dt * k3);       k4 -= b;
      v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += dt;
      ++steps;
    }
    record(t);
    const double resid = (H * v - b).lpNorm<Eigen::Infinity>() / bnorm;
    res.residual = resid;
    if (resid < tol) {
      res.status = OracleStatus::Converged;
      break;
    }
    if (v.lpNorm<Eigen::Infinity>() > blowup || !v.allFinite()) {
      res.status = OracleStatus::Diverged;
      break;
    }
  }
  res.t_final = t;
  res.steps = steps;
  const Eigen::VectorXd frame = frame_diagonal(sys);
  res.moments = frame.asDiagonal() * v;
  if (res.status == OracleStatus::TimedOut && res.residual < tol) res.status = OracleStatus::Converged;
  return res;
}

}  // namespace nhsense
