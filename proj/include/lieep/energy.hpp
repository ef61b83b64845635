#pragma once

#include <string>

#include "lieep/polarization.hpp"
#include "lieep/system.hpp"

namespace lieep {

/// (1/2p) sum_{i<p} y_{n+i}^T M y_{n+i} + Ubar(y_n, ..., y_{n+p-1}).
inline double polarized_energy(const PolarizedPotential& pol, const SparseMatrix& m,
                               StateSpan window) {
  if (static_cast<int>(window.size()) != pol.window) {
    throw Error(ErrorKind::shape, "polarized_energy: window has " + std::to_string(window.size()) +
                                      " states, polarization expects " + std::to_string(pol.window));
  }
  double quad = 0.0;
  for (const auto& y : window) quad += y.dot(m * y);
  return quad / (2.0 * pol.window) + pol.energy(window);
}

inline double polarized_energy(const PolarizedPotential& pol, const Matrix& m, StateSpan window) {
  return polarized_energy(pol, SparseMatrix(m.sparseView()), window);
}

/// H(y) = 1/2 y^T M y + U(y).
inline double discrete_energy(const SemilinearSystem& sys, const Vector& y) { return sys.energy(y); }

}  // namespace lieep
