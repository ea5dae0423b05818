#pragma once

#include <cmath>

#include "nhsense/verify.hpp"

namespace nhsense::testing {

constexpr double kPi = 3.14159265358979323846;

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

// figure parameter sets used across suites
inline ChainSpec fig4_chain(int n_cells, Parity parity = Parity::Odd, int m = 1) {
  ChainSpec c;
  c.n_cells = n_cells;
  c.parity = parity;
  c.t1 = 0.5;
  c.t2 = 0.3;
  c.gamma1 = 0.7;
  c.gamma2 = 0.4;
  c.kappa = 0.05;
  c.m = m;
  return c;
}

inline ChainSpec fig5_chain(int n_cells) {
  ChainSpec c;
  c.n_cells = n_cells;
  c.t1 = 1.0;
  c.t2 = 1.0;
  c.gamma1 = 1.5;
  c.gamma2 = 2.5;
  c.kappa = 0.05;
  c.m = 1;
  return c;
}

inline ChainSpec fig6_chain(int n_cells, int m) {
  ChainSpec c;
  c.n_cells = n_cells;
  c.t1 = 0.6;
  c.t2 = 0.4;
  c.gamma1 = 1.1;
  c.gamma2 = 1.6;
  c.kappa = 0.05;
  c.m = m;
  return c;
}

inline int floor_drive_cell(double alpha, int n) {
  const int m = static_cast<int>(std::floor(alpha * n + 1e-9));
  return std::max(1, std::min(n, m));
}

}  // namespace nhsense::testing
