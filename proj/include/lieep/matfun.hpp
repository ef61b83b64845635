#pragma once

// Dense matrix exponential and phi_1 = (e^z - 1)/z for the exponential
// schemes. Both use scaling and squaring with the scaled norm at most 0.5:
// a degree-13 Pade core for exp, a truncated Taylor core for phi_1 with the
// doubling rule phi(2X) = (e^X + I) phi(X) / 2.

#include <array>
#include <cmath>
#include <string>

#include "lieep/types.hpp"

namespace lieep {

struct MatrixFunctionPair {
  Matrix exp;    // exp(scale * J * M)
  Matrix phi;    // phi_1(scale * J * M)
  double scale;  // p*h used to form V
};

namespace detail {

inline constexpr double kScaledNormBound = 0.5;
inline constexpr int kPhiTaylorTerms = 18;

/// Number of halvings s such that ||A||_inf / 2^s <= 0.5.
inline int squaring_count(double norm) {
  if (norm <= kScaledNormBound) return 0;
  return static_cast<int>(std::ceil(std::log2(norm / kScaledNormBound)));
}

inline Matrix pade13(const Matrix& a) {
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  const auto n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                         b[3] * a2 + b[1] * ident;
  const Matrix u = a * u_inner;
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                   b[2] * a2 + b[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

inline void check_overflow(const Matrix& m, double norm, std::string_view what) {
  if (!m.allFinite()) {
    throw Error(ErrorKind::overflow,
                std::string(what) + ": overflow during squaring, ||A||_inf = " + std::to_string(norm));
  }
}

}  // namespace detail

/// exp(A) by scaling and squaring around a [13/13] Pade approximant.
inline Matrix expm(const Matrix& a) {
  require_square(a, "expm");
  require_finite(a, "expm");
  const double norm = inf_norm(a);
  if (norm == 0.0) return Matrix::Identity(a.rows(), a.cols());
  const int s = detail::squaring_count(norm);
  Matrix e = detail::pade13(a / std::ldexp(1.0, s));
  for (int i = 0; i < s; ++i) {
    e = e * e;
    detail::check_overflow(e, norm, "expm");
  }
  return e;
}

/// phi_1(A) = sum_k A^k / (k+1)!, well defined for singular A.
inline Matrix phi1(const Matrix& a) {
  require_square(a, "phi1");
  require_finite(a, "phi1");
  const auto n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const double norm = inf_norm(a);
  const int s = detail::squaring_count(norm);
  const Matrix x = a / std::ldexp(1.0, s);

  // Horner form of I + X/2! + X^2/3! + ...
  Matrix phi = ident;
  for (int k = detail::kPhiTaylorTerms; k >= 1; --k) {
    phi = ident + (x * phi) / static_cast<double>(k + 1);
  }
  if (s == 0) return phi;

  Matrix e = ident + x * phi;
  for (int i = 0; i < s; ++i) {
    phi = 0.5 * ((e + ident) * phi);
    if (i + 1 < s) e = e * e;
    detail::check_overflow(phi, norm, "phi1");
  }
  return phi;
}

/// Zeroes entries below 1e-150 of the largest one. Far under rounding, but
/// left in they decay into subnormals and make every later product slow.
inline void flush_negligible(Matrix& a) {
  if (a.size() == 0) return;
  const double cut = 1e-150 * a.cwiseAbs().maxCoeff();
  a = (a.array().abs() < cut).select(0.0, a);
}

/// (exp(V), phi_1(V)) for V = scale * J * M.
inline MatrixFunctionPair exp_and_phi(const Matrix& j, const Matrix& m, double scale) {
  require_square(j, "exp_and_phi J");
  require_square(m, "exp_and_phi M");
  if (j.rows() != m.rows()) {
    throw Error(ErrorKind::shape, "exp_and_phi: J is " + std::to_string(j.rows()) + "x" +
                                      std::to_string(j.cols()) + " but M is " +
                                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!std::isfinite(scale) || scale == 0.0) {
    throw Error(ErrorKind::invalid_input, "exp_and_phi: scale must be finite and non-zero");
  }
  const Matrix v = scale * (j * m);
  MatrixFunctionPair pair{expm(v), phi1(v), scale};
  flush_negligible(pair.exp);
  flush_negligible(pair.phi);
  return pair;
}

/// ||exp(V) - I - V phi(V)||_inf / (1 + ||exp(V)||_inf) for V = scale * J * M.
inline double pair_identity_residual(const MatrixFunctionPair& pair, const Matrix& j,
                                     const Matrix& m) {
  const Matrix v = pair.scale * (j * m);
  const Matrix r = pair.exp - Matrix::Identity(v.rows(), v.cols()) - v * pair.phi;
  return inf_norm(r) / (1.0 + inf_norm(pair.exp));
}

}  // namespace lieep
