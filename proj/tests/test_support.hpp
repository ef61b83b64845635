#pragma once

#include <random>

#include "lieep/types.hpp"

namespace lieep::testing {

/// Uniform entries in [-1, 1], rescaled so that ||A||_inf = norm.
inline Matrix random_matrix(int n, double norm, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = dist(rng);
  return a * (norm / inf_norm(a));
}

inline Matrix random_skew(int n, double norm, std::mt19937_64& rng) {
  const Matrix a = random_matrix(n, 1.0, rng);
  const Matrix s = a - a.transpose();
  return s * (norm / inf_norm(s));
}

inline Matrix random_symmetric(int n, double norm, std::mt19937_64& rng) {
  const Matrix a = random_matrix(n, 1.0, rng);
  const Matrix s = a + a.transpose();
  return s * (norm / inf_norm(s));
}

inline Vector random_vector(int n, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

/// sum_{k<terms} A^k / (k + shift)!, evaluated term by term.
inline Matrix shifted_exponential_series(const Matrix& a, int shift, int terms) {
  const auto n = a.rows();
  Matrix term = Matrix::Identity(n, n);
  double fact = 1.0;
  for (int k = 2; k <= shift; ++k) fact *= k;
  term /= fact;
  Matrix sum = term;
  for (int k = 1; k < terms; ++k) {
    term = (a * term) / static_cast<double>(k + shift);
    sum += term;
  }
  return sum;
}

inline double rel_inf_error(const Matrix& got, const Matrix& want) {
  return inf_norm(Matrix(got - want)) / inf_norm(want);
}

}  // namespace lieep::testing
