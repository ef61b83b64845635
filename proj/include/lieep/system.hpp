#pragma once

#include <Eigen/Eigenvalues>

#include <string>

#include "lieep/types.hpp"

namespace lieep {

enum class JClass { skew_symmetric, negative_semidefinite };

constexpr std::string_view to_string(JClass c) noexcept {
  return c == JClass::skew_symmetric ? "skew_symmetric" : "negative_semidefinite";
}

/// y' = J (M y + grad U(y)) with constant J and symmetric M.
struct SemilinearSystem {
  std::string name;
  int dim = 0;
  Matrix J;
  Matrix M;
  SparseMatrix J_sparse;
  SparseMatrix M_sparse;
  ScalarField U;
  GradientField grad_U;
  JClass j_class = JClass::skew_symmetric;
  /// Polynomial degree of U; selects the Gauss-Legendre order of EAVF.
  int potential_degree = 3;

  /// 1/2 y^T M y + U(y).
  [[nodiscard]] double energy(const Vector& y) const {
    return 0.5 * y.dot(M_sparse * y) + U(y);
  }

  /// grad H(y) = M y + grad U(y), written into `out`.
  void energy_gradient(const Vector& y, Vector& out, Vector& scratch) const {
    grad_U(y, scratch);
    out.noalias() = M_sparse * y;
    out += scratch;
  }
};

/// Largest eigenvalue of the symmetric part (A + A^T)/2.
inline double max_symmetric_eigenvalue(const Matrix& a) {
  const Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

/// Throws a parameter error when the structure claims of `sys` do not hold.
inline void check_system(const SemilinearSystem& sys) {
  require_square(sys.J, "system J");
  require_square(sys.M, "system M");
  require_finite(sys.J, "system J");
  require_finite(sys.M, "system M");
  if (sys.J.rows() != sys.dim || sys.M.rows() != sys.dim) {
    throw Error(ErrorKind::shape, "system '" + sys.name + "': J/M size does not match dim");
  }
  const double m_norm = inf_norm(sys.M);
  if (inf_norm(Matrix(sys.M - sys.M.transpose())) > 1e-13 * m_norm) {
    throw Error(ErrorKind::parameter, "system '" + sys.name + "': M is not symmetric");
  }
  if (sys.j_class == JClass::skew_symmetric) {
    if (inf_norm(Matrix(sys.J + sys.J.transpose())) > 1e-13 * (1.0 + inf_norm(sys.J))) {
      throw Error(ErrorKind::parameter, "system '" + sys.name + "': J is not skew-symmetric");
    }
  } else if (max_symmetric_eigenvalue(sys.J) > 1e-12) {
    throw Error(ErrorKind::parameter, "system '" + sys.name + "': J is not negative semidefinite");
  }
}

inline SemilinearSystem make_system(std::string name, Matrix j, Matrix m, ScalarField u,
                                    GradientField grad_u, JClass j_class, int potential_degree) {
  SemilinearSystem sys;
  sys.name = std::move(name);
  sys.dim = static_cast<int>(j.rows());
  sys.J = std::move(j);
  sys.M = std::move(m);
  sys.J_sparse = sys.J.sparseView();
  sys.M_sparse = sys.M.sparseView();
  sys.U = std::move(u);
  sys.grad_U = std::move(grad_u);
  sys.j_class = j_class;
  sys.potential_degree = potential_degree;
  check_system(sys);
  return sys;
}

/// The same structure with U = 0; the exact flow is exp(t J M) y0.
inline SemilinearSystem linear_part(const SemilinearSystem& sys) {
  const int n = sys.dim;
  return make_system(
      sys.name + "/linear", sys.J, sys.M, [](const Vector&) { return 0.0; },
      [n](const Vector&, Vector& out) { out.setZero(n); }, sys.j_class, 2);
}

}  // namespace lieep
