#pragma once

#include <stdexcept>
#include <string>

namespace nhsense {

/// Chain layout: unit cells hold an A and a B site. An odd chain drops the
/// final B site (2N-1 sites total), an even chain keeps it (2N sites).
enum class Parity { Odd, Even };

enum class Sublattice { A, B };

/// Raised when an operation requires dynamically stable (or squeezable)
/// parameters and the chain does not provide them.
struct InstabilityError : std::runtime_error {
  explicit InstabilityError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a linear solve meets a numerically singular matrix
/// (marginal stability, or a perturbation strength sitting on a pole).
struct SingularMatrixError : std::runtime_error {
  explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// Lattice geometry and coupling strengths.
///
/// t1/t2 are the intra-/intercell two-mode squeezing strengths, gamma1/gamma2
/// the corresponding hopping strengths, kappa the waveguide decay at the
/// driven site, and m the driven unit cell (sublattice A, 1-based).
struct ChainSpec {
  int n_cells = 1;
  Parity parity = Parity::Odd;
  double t1 = 0.0;
  double t2 = 0.0;
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  double kappa = 0.05;
  int m = 1;

  int sites() const { return parity == Parity::Odd ? 2 * n_cells - 1 : 2 * n_cells; }
  int dim() const { return 2 * sites(); }

  /// True when the site-local squeezing transform exists (gamma > |t| in both cells).
  bool squeezable() const { return gamma1 > std::abs(t1) && gamma2 > std::abs(t2); }

  // kappa = 0 is admitted so the stability check can report the marginal
  // spectrum; every response operation needs kappa > 0 and rejects it there.
  void validate() const {
    if (n_cells < 1) throw std::invalid_argument("ChainSpec: n_cells must be >= 1");
    if (gamma1 <= 0.0 || gamma2 <= 0.0) throw std::invalid_argument("ChainSpec: gamma1, gamma2 must be > 0");
    if (kappa < 0.0) throw std::invalid_argument("ChainSpec: kappa must be >= 0");
    if (m < 1 || m > n_cells) throw std::invalid_argument("ChainSpec: drive cell m out of [1, n_cells]");
  }
};

/// Bijection between (quadrature, cell, sublattice) and matrix positions.
///
/// Within one quadrature block, site (n,A) is 1-based index 2n-1 and (n,B) is
/// 2n; the p block is appended after all x rows, so for an odd chain p_{m,A}
/// sits at global 1-based index 2N + 2m - 2. All *_pos accessors return the
/// 0-based row/column used by the dense matrices.
struct IndexMap {
  int n_cells = 1;
  Parity parity = Parity::Odd;

  int sites() const { return parity == Parity::Odd ? 2 * n_cells - 1 : 2 * n_cells; }
  int dim() const { return 2 * sites(); }

  static int site_index(int cell, Sublattice sl) {
    return sl == Sublattice::A ? 2 * cell - 1 : 2 * cell;
  }

  int last_site_cell() const { return n_cells; }
  Sublattice last_site_sublattice() const {
    return parity == Parity::Odd ? Sublattice::A : Sublattice::B;
  }

  int x_pos(int cell, Sublattice sl) const { return site_index(cell, sl) - 1; }
  int p_pos(int cell, Sublattice sl) const { return sites() + site_index(cell, sl) - 1; }

  int global_x(int cell, Sublattice sl) const { return site_index(cell, sl); }
  int global_p(int cell, Sublattice sl) const { return sites() + site_index(cell, sl); }
};

inline IndexMap index_map(const ChainSpec& chain) {
  return IndexMap{chain.n_cells, chain.parity};
}

namespace detail {
/// cos/sin of protocol angles like pi/2 must vanish exactly where the model
/// says they do; values at rounding scale are snapped to zero.
inline double snap_trig(double v) { return v > -1e-15 && v < 1e-15 ? 0.0 : v; }
}  // namespace detail

}  // namespace nhsense
