#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <span>
#include <string>

#include "lieep/error.hpp"

namespace lieep {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Consecutive states y_n, ..., y_{n+k}, oldest first.
using StateSpan = std::span<const Vector>;

inline double inf_norm(const Matrix& a) {
  return a.rows() == 0 ? 0.0 : a.cwiseAbs().rowwise().sum().maxCoeff();
}

inline double inf_norm(const Vector& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

inline void require_square(const Matrix& a, std::string_view what) {
  if (a.rows() < 1 || a.rows() != a.cols()) {
    throw Error(ErrorKind::shape, std::string(what) + ": expected a non-empty square matrix, got " +
                                      std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

inline void require_finite(const Matrix& a, std::string_view what) {
  if (!a.allFinite()) {
    throw Error(ErrorKind::invalid_input, std::string(what) + ": non-finite entry");
  }
}

}  // namespace lieep

namespace lieep {

/// Scalar potential U(y).
using ScalarField = std::function<double(const Vector&)>;
/// Gradient of a potential; writes grad U(y) into `out` (resized by the callee).
using GradientField = std::function<void(const Vector&, Vector&)>;

}  // namespace lieep
