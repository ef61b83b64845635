#pragma once

// Benchmark systems: the averaged wind-induced oscillator, a damped
// alpha-FPU lattice from a semi-discretized wave equation, and the
// pendulum with its Hamiltonian truncated at degree six.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "lieep/polarization.hpp"
#include "lieep/system.hpp"

namespace lieep {

struct Problem {
  SemilinearSystem system;
  PolarizedPotential polarization;
  Vector initial;
};

// ---------------------------------------------------------------------------
// Wind-induced oscillator

struct WindOscillatorParams {
  double r = 20.0;
  double theta = std::numbers::pi / 2;
  double a = 0.5;
};

namespace detail {

struct WindTrig {
  double c;
  double s;
};

/// cos/sin of theta, snapped to exactly (0, 1) at theta = pi/2 so the
/// conservative case has an exactly skew J.
inline WindTrig wind_trig(double theta) {
  if (std::abs(theta - std::numbers::pi / 2) <= 1e-15) return {0.0, 1.0};
  return {std::cos(theta), std::sin(theta)};
}

}  // namespace detail

inline void check_params(const WindOscillatorParams& p) {
  if (!(p.r >= 0.0) || !std::isfinite(p.r)) throw Error(ErrorKind::parameter, "wind: r must be >= 0");
  if (!(p.theta >= 0.0 && p.theta <= std::numbers::pi / 2 + 1e-15)) {
    throw Error(ErrorKind::parameter, "wind: theta must lie in [0, pi/2]");
  }
  if (!(p.a >= 0.0 && p.a <= 1.0)) throw Error(ErrorKind::parameter, "wind: a must lie in [0, 1]");
}

/// exp(scale * J * M) in closed form.
inline Matrix wind_closed_form_exp(const WindOscillatorParams& p, double scale) {
  const auto [c, s] = detail::wind_trig(p.theta);
  const double decay = std::exp(-scale * c * p.r);
  const double angle = scale * s * p.r;
  Matrix e(2, 2);
  e << decay * std::cos(angle), -decay * std::sin(angle), decay * std::sin(angle),
      decay * std::cos(angle);
  return e;
}

inline Problem wind_oscillator(const WindOscillatorParams& params) {
  check_params(params);
  const auto [c, s] = detail::wind_trig(params.theta);
  const double a = params.a;

  Matrix j(2, 2);
  j << -c, -s, s, -c;
  const Matrix m = params.r * Matrix::Identity(2, 2);

  auto u = [c, s](const Vector& x) {
    const double x1 = x(0), x2 = x(1);
    return -0.5 * s * (x1 * x2 * x2 - x1 * x1 * x1 / 3.0) +
           0.5 * c * (x2 * x2 * x2 / 3.0 - x1 * x1 * x2);
  };
  auto grad_u = [c, s](const Vector& x, Vector& out) {
    const double x1 = x(0), x2 = x(1);
    out.resize(2);
    out(0) = -0.5 * s * (x2 * x2 - x1 * x1) - c * x1 * x2;
    out(1) = -s * x1 * x2 + 0.5 * c * (x2 * x2 - x1 * x1);
  };

  SemilinearSystem sys =
      make_system("wind", j, m, u, grad_u, c == 0.0 ? JClass::skew_symmetric : JClass::negative_semidefinite, 3);

  PolarizedPotential pol;
  pol.dim = 2;
  pol.window = 2;
  pol.permutation_free = true;
  pol.energy = [c, s, a](StateSpan w) {
    const double x1 = w[0](0), x2 = w[0](1), y1 = w[1](0), y2 = w[1](1);
    const double sin_part = a * (x1 + y1) / 2.0 * x2 * y2 + (1.0 - a) * (x1 * y2 * y2 + y1 * x2 * x2) / 2.0 -
                            x1 * (x1 + y1) / 2.0 * y1 / 3.0;
    const double cos_part = x2 * (x2 + y2) / 2.0 * y2 / 3.0 - a * x1 * y1 * (x2 + y2) / 2.0 -
                            (1.0 - a) * (x2 * y1 * y1 + y2 * x1 * x1) / 2.0;
    return -0.5 * s * sin_part + 0.5 * c * cos_part;
  };

  // Gradient of Ubar in its first argument x given the second argument y:
  // H(y) x + b(y).
  struct FirstSlot {
    Eigen::Matrix2d hess;
    Eigen::Vector2d lin;
  };
  auto first_slot = [c, s, a](const Vector& y) {
    const double y1 = y(0), y2 = y(1);
    FirstSlot fs;
    fs.hess(0, 0) = s * y1 / 6.0 - 0.5 * c * (1.0 - a) * y2;
    fs.hess(0, 1) = -0.25 * a * (s * y2 + c * y1);
    fs.hess(1, 0) = fs.hess(0, 1);
    fs.hess(1, 1) = -0.5 * s * (1.0 - a) * y1 + c * y2 / 6.0;
    fs.lin(0) = -0.5 * s * ((1.0 - a) * y2 * y2 / 2.0 - y1 * y1 / 6.0) - 0.25 * c * a * y1 * y2;
    fs.lin(1) = -0.25 * s * a * y1 * y2 + 0.5 * c * (y2 * y2 / 6.0 - (1.0 - a) * y1 * y1 / 2.0);
    return fs;
  };

  // gradbar(x, y, z) = 2 * (H(y) (x + z)/2 + b(y))
  pol.gradient = [first_slot](StateSpan w) {
    const FirstSlot fs = first_slot(w[1]);
    const Eigen::Vector2d mid = (w[0] + w[2]) / 2.0;
    return Vector(2.0 * (fs.hess * mid + fs.lin));
  };
  pol.affine_parts = [first_slot](StateSpan w) {
    const FirstSlot fs = first_slot(w[1]);
    AffinePart part;
    part.G.resize(2, 2);
    part.G.reserve(Eigen::VectorXi::Constant(2, 2));
    for (int col = 0; col < 2; ++col) {
      for (int row = 0; row < 2; ++row) {
        if (fs.hess(row, col) != 0.0) part.G.insert(row, col) = fs.hess(row, col);
      }
    }
    part.g = fs.hess * Eigen::Vector2d(w[0]) + 2.0 * fs.lin;
    return part;
  };

  Vector y0(2);
  y0 << 0.0, 1.0;
  return {std::move(sys), std::move(pol), std::move(y0)};
}

// ---------------------------------------------------------------------------
// Damped alpha-FPU lattice

struct FpuParams {
  int N = 128;
  double L = 128.0;
  double beta = 0.0;
  double gamma = 0.0;
  double m = 0.0;
  double eps = 0.75;
  int p_exp = 1;

  [[nodiscard]] double dx() const { return L / N; }
  [[nodiscard]] int interior() const { return N - 1; }
};

namespace detail {

/// Forward differences w_j = (u_{j+1} - u_j)/dx, j = 0..N-1, of the interior
/// nodes u_1..u_{N-1} with u_0 = u_N = 0, as an N x (N-1) matrix.
inline SparseMatrix fpu_forward_difference(int n_nodes, double dx) {
  const int n = n_nodes - 1;
  std::vector<Eigen::Triplet<double>> t;
  for (int j = 0; j < n_nodes; ++j) {
    if (j < n) t.emplace_back(j, j, 1.0 / dx);       // u_{j+1} is interior index j
    if (j >= 1) t.emplace_back(j, j - 1, -1.0 / dx); // u_j is interior index j-1
  }
  SparseMatrix b(n_nodes, n);
  b.setFromTriplets(t.begin(), t.end());
  return b;
}

}  // namespace detail

inline Problem fpu_system(const FpuParams& params, double alpha = 0.1);

/// u_j(0) = q_j(0) and v_j(0) = dq_j/dt(0) for the interior nodes j = 1..N-1
/// of the two-kink profile
///   q_j(t) = 5 ln[(1 + e^{2(a(j-97) + t sinh a)}) / (1 + e^{2(a(j-96) + t sinh a)})]
///          + 5 ln[(1 + e^{2(a(j-32) + t sinh a)}) / (1 + e^{2(a(j-33) + t sinh a)})].
inline Vector fpu_initial(double alpha, int N, double t = 0.0) {
  const auto softplus = [](double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); };
  const auto logistic = [](double x) {
    return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  };
  const int n = N - 1;
  const double shift = t * std::sinh(alpha);
  Vector y(2 * n);
  for (int k = 0; k < n; ++k) {
    const double j = k + 1;
    const double a1 = 2.0 * (alpha * (j - 97.0) + shift);
    const double b1 = 2.0 * (alpha * (j - 96.0) + shift);
    const double a2 = 2.0 * (alpha * (j - 32.0) + shift);
    const double b2 = 2.0 * (alpha * (j - 33.0) + shift);
    y(k) = 5.0 * (softplus(a1) - softplus(b1)) + 5.0 * (softplus(a2) - softplus(b2));
    y(n + k) = 10.0 * std::sinh(alpha) *
               (logistic(a1) - logistic(b1) + logistic(a2) - logistic(b2));
  }
  return y;
}

inline Problem fpu_system(const FpuParams& params, double alpha) {
  if (params.N < 3) throw Error(ErrorKind::parameter, "fpu: N must be >= 3");
  if (!(params.L > 0.0)) throw Error(ErrorKind::parameter, "fpu: L must be positive");
  if (params.beta < 0.0 || params.gamma < 0.0) throw Error(ErrorKind::parameter, "fpu: damping must be >= 0");
  if (!(params.eps > 0.0)) throw Error(ErrorKind::parameter, "fpu: eps must be positive");
  if (params.p_exp != 1) throw Error(ErrorKind::parameter, "fpu: only p_exp = 1 is supported");

  const int n = params.interior();
  const double dx = params.dx();
  const double eps = params.eps;
  const SparseMatrix b = detail::fpu_forward_difference(params.N, dx);
  const SparseMatrix bt = b.transpose();
  const Matrix d = -Matrix(bt * b);  // central second difference, Dirichlet closure

  Matrix q = Matrix::Zero(2 * n, 2 * n);
  q.block(0, n, n, n) = Matrix::Identity(n, n);
  q.block(n, 0, n, n) = -Matrix::Identity(n, n);
  q.block(n, n, n, n) = params.beta * d - params.gamma * Matrix::Identity(n, n);

  Matrix m = Matrix::Zero(2 * n, 2 * n);
  m.block(0, 0, n, n) = params.m * params.m * Matrix::Identity(n, n) - d;
  m.block(n, n, n, n) = Matrix::Identity(n, n);

  auto u = [b, n, eps](const Vector& y) {
    const Vector w = b * y.head(n);
    return eps / 6.0 * w.array().cube().sum();
  };
  auto grad_u = [b, bt, n, eps](const Vector& y, Vector& out) {
    const Vector w = b * y.head(n);
    out.setZero(2 * n);
    out.head(n) = eps / 2.0 * (bt * w.cwiseAbs2());
  };

  const JClass cls = (params.beta == 0.0 && params.gamma == 0.0) ? JClass::skew_symmetric
                                                                  : JClass::negative_semidefinite;
  SemilinearSystem sys = make_system("fpu", q, m, u, grad_u, cls, 3);

  PolarizedPotential pol;
  pol.dim = 2 * n;
  pol.window = 2;
  pol.permutation_free = true;
  pol.energy = [b, n, eps](StateSpan ws) {
    const Vector w0 = b * ws[0].head(n);
    const Vector w1 = b * ws[1].head(n);
    return eps / 6.0 * (w0.array() * (w0.array() + w1.array()) / 2.0 * w1.array()).sum();
  };
  // gradbar_k = eps/(6 dx) [w1_{k-1}(w0+w1+w2)_{k-1} - w1_k (w0+w1+w2)_k]
  pol.gradient = [b, bt, n, eps](StateSpan ws) {
    const Vector w0 = b * ws[0].head(n);
    const Vector w1 = b * ws[1].head(n);
    const Vector w2 = b * ws[2].head(n);
    Vector g = Vector::Zero(2 * n);
    g.head(n) = eps / 6.0 * (bt * Vector(w1.array() * (w0 + w1 + w2).array()));
    return g;
  };
  pol.affine_parts = [b, bt, n, eps](StateSpan ws) {
    const Vector w0 = b * ws[0].head(n);
    const Vector w1 = b * ws[1].head(n);
    const SparseMatrix guu = eps / 6.0 * (bt * w1.asDiagonal() * b);
    std::vector<Eigen::Triplet<double>> t;
    for (Eigen::Index k = 0; k < guu.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(guu, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
    }
    AffinePart part;
    part.G.resize(2 * n, 2 * n);
    part.G.setFromTriplets(t.begin(), t.end());
    part.g = Vector::Zero(2 * n);
    part.g.head(n) = eps / 6.0 * (bt * Vector(w1.array() * (w0 + w1).array()));
    return part;
  };

  return {std::move(sys), std::move(pol), fpu_initial(alpha, params.N)};
}

/// Local energy density sum sum_j [u_x^2/2 + m^2 u^2/2 + v^2/2 + eps u_x^3/6]
/// with u_x the forward difference and u, v at interior nodes.
inline double fpu_energy_density_sum(const FpuParams& params, const Vector& y) {
  const int n = params.interior();
  const double dx = params.dx();
  double total = 0.0;
  for (int j = 0; j < params.N; ++j) {
    const double left = j >= 1 ? y(j - 1) : 0.0;
    const double right = j < n ? y(j) : 0.0;
    const double ux = (right - left) / dx;
    total += 0.5 * ux * ux + params.eps * ux * ux * ux / 6.0;
  }
  for (int k = 0; k < n; ++k) {
    total += 0.5 * params.m * params.m * y(k) * y(k) + 0.5 * y(n + k) * y(n + k);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Truncated pendulum

inline Problem pendulum_truncated() {
  Matrix j(2, 2);
  j << 0.0, 1.0, -1.0, 0.0;
  const Matrix m = Matrix::Identity(2, 2);

  auto u = [](const Vector& y) {
    const double q2 = y(0) * y(0);
    return -q2 * q2 / 24.0 + q2 * q2 * q2 / 720.0;
  };
  auto grad_u = [](const Vector& y, Vector& out) {
    const double q = y(0);
    out.resize(2);
    out(0) = -q * q * q / 6.0 + q * q * q * q * q / 120.0;
    out(1) = 0.0;
  };
  SemilinearSystem sys = make_system("pendulum", j, m, u, grad_u, JClass::skew_symmetric, 6);

  PolarizedPotential pol;
  pol.dim = 2;
  pol.window = 3;
  pol.permutation_free = true;
  pol.energy = [](StateSpan w) {
    const double q0 = w[0](0), q1 = w[1](0), q2 = w[2](0);
    return -q0 * q1 * q2 * (q0 + q1 + q2) / 3.0 / 24.0 + q0 * q0 * q1 * q1 * q2 * q2 / 720.0;
  };
  pol.gradient = [](StateSpan w) {
    const double q0 = w[0](0), q1 = w[1](0), q2 = w[2](0), q3 = w[3](0);
    Vector g = Vector::Zero(2);
    g(0) = q1 * q1 * q2 * q2 * (q0 + q3) / 240.0 - q1 * q2 * (q0 + q1 + q2 + q3) / 24.0;
    return g;
  };
  pol.affine_parts = [](StateSpan w) {
    const double q0 = w[0](0), q1 = w[1](0), q2 = w[2](0);
    AffinePart part;
    part.G.resize(2, 2);
    part.G.insert(0, 0) = q1 * q1 * q2 * q2 / 240.0 - q1 * q2 / 24.0;
    part.g = Vector::Zero(2);
    part.g(0) = q1 * q1 * q2 * q2 * q0 / 240.0 - q1 * q2 * (q0 + q1 + q2) / 24.0;
    return part;
  };

  Vector y0(2);
  y0 << 0.5, 1.0;
  return {std::move(sys), std::move(pol), std::move(y0)};
}

/// H(q, p) = p^2/2 + 1 - cos q for the untruncated pendulum.
inline double pendulum_original_energy(const Vector& y) {
  return 0.5 * y(1) * y(1) + 1.0 - std::cos(y(0));
}

}  // namespace lieep
