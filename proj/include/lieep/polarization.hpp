#pragma once

// Quadratic polarizations of polynomial potentials and their polarized
// discrete gradients.
//
// A window-p polarization Ubar(x_1, ..., x_p) is permutation free and
// quadratic in each argument, with Ubar(x, ..., x) = U(x). Writing Ubar as
// c2 x_1^2 + c1 x_1 + c0 in its first argument (c2, c1 depending on the
// remaining p-1 arguments), the polarized discrete gradient is
//
//   gradbar(y_n, ..., y_{n+p}) = p * (c2 (y_n + y_{n+p}) + c1),
//
// with c2, c1 evaluated at (y_{n+1}, ..., y_{n+p-1}). It satisfies
// Ubar(y_{n+1..n+p}) - Ubar(y_{n..n+p-1}) = (y_{n+p} - y_n)^T gradbar / p,
// and is affine in y_{n+p}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "lieep/types.hpp"

namespace lieep {

/// gradbar(y_n, ..., y_{n+p}) = G y_{n+p} + g.
struct AffinePart {
  SparseMatrix G;
  Vector g;
};

struct PolarizedPotential {
  int dim = 1;
  int window = 2;
  bool permutation_free = true;
  /// Ubar over `window` states.
  std::function<double(StateSpan)> energy;
  /// Polarized discrete gradient over `window + 1` states.
  std::function<Vector(StateSpan)> gradient;
  /// (G, g) from the oldest `window` states of the gradient's arguments.
  std::function<AffinePart(StateSpan)> affine_parts;
};

struct ScalarPolynomial {
  std::vector<double> coefficients;  // index = degree

  [[nodiscard]] int degree() const {
    int d = static_cast<int>(coefficients.size()) - 1;
    while (d > 0 && coefficients[static_cast<std::size_t>(d)] == 0.0) --d;
    return std::max(d, 0);
  }

  [[nodiscard]] double operator()(double x) const {
    double acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  [[nodiscard]] double derivative(double x) const {
    double acc = 0.0;
    for (std::size_t k = coefficients.size(); k-- > 1;) {
      acc = acc * x + static_cast<double>(k) * coefficients[k];
    }
    return acc;
  }
};

inline constexpr double kDefaultQuadraticTheta = 0.5;
inline constexpr int kMaxPolarizedDegree = 6;

namespace detail {

/// First-argument coefficients of a polarization that is quadratic in x_1.
struct FirstSlot {
  double c2 = 0.0;
  double c1 = 0.0;
};

/// Built-in monomial polarizations on scalar arguments.
struct MonomialForm {
  int degree = 0;
  double theta = kDefaultQuadraticTheta;

  [[nodiscard]] int window() const {
    switch (degree) {
      case 0: return 0;
      case 1: return 1;
      case 2:
      case 3:
      case 4: return 2;
      case 5: return 4;
      case 6: return 3;
      default: return -1;
    }
  }

  [[nodiscard]] double value(std::span<const double> x) const {
    switch (degree) {
      case 0: return 1.0;
      case 1: return x[0];
      case 2: return theta * (x[0] * x[0] + x[1] * x[1]) / 2.0 + (1.0 - theta) * x[0] * x[1];
      case 3: return x[0] * (x[0] + x[1]) / 2.0 * x[1];
      case 4: return x[0] * x[0] * x[1] * x[1];
      case 5: return x[0] * x[1] * x[2] * x[3] * (x[0] + x[1] + x[2] + x[3]) / 4.0;
      case 6: return x[0] * x[0] * x[1] * x[1] * x[2] * x[2];
      default: return 0.0;
    }
  }

  /// Coefficients in x_1 given the other arguments.
  [[nodiscard]] FirstSlot first_slot(std::span<const double> rest) const {
    switch (degree) {
      case 1: return {0.0, 1.0};
      case 2: return {theta / 2.0, (1.0 - theta) * rest[0]};
      case 3: return {rest[0] / 2.0, rest[0] * rest[0] / 2.0};
      case 4: return {rest[0] * rest[0], 0.0};
      case 5: {
        const double prod = rest[0] * rest[1] * rest[2];
        const double sum = rest[0] + rest[1] + rest[2];
        return {prod / 4.0, prod * sum / 4.0};
      }
      case 6: return {rest[0] * rest[0] * rest[1] * rest[1], 0.0};
      default: return {};
    }
  }
};

/// All k-element subsets of {0, ..., n-1} in lexicographic order.
inline std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(k));
  std::iota(cur.begin(), cur.end(), 0);
  if (k > n) return out;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

/// A monomial polarization lifted to a larger window by averaging over all
/// argument subsets of its native size.
struct LiftedTerm {
  MonomialForm form;
  double coefficient = 0.0;
  std::vector<std::vector<int>> subsets;
};

class ScalarPolarization {
 public:
  ScalarPolarization(std::vector<LiftedTerm> terms, int window)
      : terms_(std::move(terms)), window_(window) {}

  [[nodiscard]] int window() const { return window_; }

  [[nodiscard]] double energy(std::span<const double> x) const {
    double total = 0.0;
    std::vector<double> args;
    for (const auto& term : terms_) {
      double acc = 0.0;
      for (const auto& subset : term.subsets) {
        args.clear();
        for (int idx : subset) args.push_back(x[static_cast<std::size_t>(idx)]);
        acc += term.form.value(args);
      }
      total += term.coefficient * acc / static_cast<double>(term.subsets.size());
    }
    return total;
  }

  /// Coefficients in the first argument; `rest` holds arguments 2..window.
  [[nodiscard]] FirstSlot first_slot(std::span<const double> rest) const {
    FirstSlot total;
    std::vector<double> args;
    for (const auto& term : terms_) {
      FirstSlot acc;
      for (const auto& subset : term.subsets) {
        if (subset.empty() || subset.front() != 0) continue;
        args.clear();
        for (std::size_t i = 1; i < subset.size(); ++i) {
          args.push_back(rest[static_cast<std::size_t>(subset[i] - 1)]);
        }
        const FirstSlot fs = term.form.first_slot(args);
        acc.c2 += fs.c2;
        acc.c1 += fs.c1;
      }
      const double w = term.coefficient / static_cast<double>(term.subsets.size());
      total.c2 += w * acc.c2;
      total.c1 += w * acc.c1;
    }
    return total;
  }

 private:
  std::vector<LiftedTerm> terms_;
  int window_;
};

inline PolarizedPotential wrap_scalar(ScalarPolarization pol) {
  const int p = pol.window();
  auto shared = std::make_shared<const ScalarPolarization>(std::move(pol));

  auto scalars = [](StateSpan states, std::size_t first, std::size_t count) {
    std::vector<double> xs(count);
    for (std::size_t i = 0; i < count; ++i) xs[i] = states[first + i](0);
    return xs;
  };

  PolarizedPotential out;
  out.dim = 1;
  out.window = p;
  out.permutation_free = true;
  out.energy = [shared, p, scalars](StateSpan w) {
    return shared->energy(scalars(w, 0, static_cast<std::size_t>(p)));
  };
  out.gradient = [shared, p, scalars](StateSpan w) {
    const auto rest = scalars(w, 1, static_cast<std::size_t>(p - 1));
    const FirstSlot fs = shared->first_slot(rest);
    Vector g(1);
    g(0) = p * (fs.c2 * (w[0](0) + w[static_cast<std::size_t>(p)](0)) + fs.c1);
    return g;
  };
  out.affine_parts = [shared, p, scalars](StateSpan w) {
    const auto rest = scalars(w, 1, static_cast<std::size_t>(p - 1));
    const FirstSlot fs = shared->first_slot(rest);
    AffinePart part;
    part.G.resize(1, 1);
    part.G.insert(0, 0) = p * fs.c2;
    part.g = Vector::Constant(1, p * (fs.c2 * w[0](0) + fs.c1));
    return part;
  };
  return out;
}

}  // namespace detail

/// Built-in polarization of x^degree, degree in 2..6, on scalar states.
/// Windows: x^2, x^3, x^4 -> 2; x^5 -> 4; x^6 -> 3. `theta` only affects x^2.
inline PolarizedPotential polarize_monomial(int degree, double theta = kDefaultQuadraticTheta) {
  if (degree < 2 || degree > kMaxPolarizedDegree) {
    throw Error(ErrorKind::unsupported_degree,
                "polarize_monomial: degree " + std::to_string(degree) + " not in 2..6");
  }
  const detail::MonomialForm form{degree, theta};
  const int p = form.window();
  std::vector<detail::LiftedTerm> terms{{form, 1.0, detail::combinations(p, p)}};
  return detail::wrap_scalar(detail::ScalarPolarization(std::move(terms), p));
}

/// Window of the built-in polarization of x^degree (0 for constants).
inline int monomial_window(int degree) { return detail::MonomialForm{degree}.window(); }

/// Coefficient-weighted sum of monomial polarizations, each lifted to
/// `window` by symmetrizing over argument subsets.
inline PolarizedPotential polarize_polynomial(const ScalarPolynomial& poly, int window,
                                              double theta = kDefaultQuadraticTheta) {
  const int d = poly.degree();
  if (d > kMaxPolarizedDegree) {
    throw Error(ErrorKind::unsupported_degree,
                "polarize_polynomial: degree " + std::to_string(d) + " exceeds 6");
  }
  std::vector<detail::LiftedTerm> terms;
  int needed = 1;
  for (int k = 0; k <= d; ++k) {
    const double c = poly.coefficients[static_cast<std::size_t>(k)];
    if (c == 0.0) continue;
    const detail::MonomialForm form{k, theta};
    needed = std::max(needed, form.window());
    terms.push_back({form, c, {}});
  }
  if (window < needed) {
    throw Error(ErrorKind::window, "polarize_polynomial: window " + std::to_string(window) +
                                       " smaller than required " + std::to_string(needed));
  }
  for (auto& term : terms) term.subsets = detail::combinations(window, term.form.window());
  return detail::wrap_scalar(detail::ScalarPolarization(std::move(terms), window));
}

/// Lifts a scalar polarization to states of size `dim`, acting on one component.
inline PolarizedPotential embed_component(const PolarizedPotential& scalar, int dim, int index) {
  if (scalar.dim != 1) throw Error(ErrorKind::shape, "embed_component: expected a scalar polarization");
  if (index < 0 || index >= dim) throw Error(ErrorKind::shape, "embed_component: index out of range");

  auto project = [index](StateSpan states) {
    std::vector<Vector> xs;
    xs.reserve(states.size());
    for (const auto& s : states) xs.push_back(Vector::Constant(1, s(index)));
    return xs;
  };

  PolarizedPotential out;
  out.dim = dim;
  out.window = scalar.window;
  out.permutation_free = scalar.permutation_free;
  out.energy = [scalar, project](StateSpan w) { return scalar.energy(project(w)); };
  out.gradient = [scalar, project, dim, index](StateSpan w) {
    Vector g = Vector::Zero(dim);
    g(index) = scalar.gradient(project(w))(0);
    return g;
  };
  out.affine_parts = [scalar, project, dim, index](StateSpan w) {
    const AffinePart s = scalar.affine_parts(project(w));
    AffinePart part;
    part.G.resize(dim, dim);
    const double gii = s.G.coeff(0, 0);
    if (gii != 0.0) part.G.insert(index, index) = gii;
    part.g = Vector::Zero(dim);
    part.g(index) = s.g(0);
    return part;
  };
  return out;
}

inline ScalarField as_field(const ScalarPolynomial& poly) {
  return [poly](const Vector& y) { return poly(y(0)); };
}

inline GradientField as_gradient(const ScalarPolynomial& poly) {
  return [poly](const Vector& y, Vector& out) {
    out.resize(1);
    out(0) = poly.derivative(y(0));
  };
}

// ---------------------------------------------------------------------------
// Validation

struct ResidualStat {
  double max_abs = 0.0;  // largest |residual|
  double max_rel = 0.0;  // largest |residual| / (1 + magnitude of terms)

  void record(double residual, double magnitude) {
    max_abs = std::max(max_abs, std::abs(residual));
    max_rel = std::max(max_rel, std::abs(residual) / (1.0 + magnitude));
  }
};

struct ValidationReport {
  int trials = 0;
  double tolerance = 1e-10;
  ResidualStat identity;     // discrete-gradient identity
  ResidualStat consistency;  // gradbar(x, ..., x) vs grad U(x)
  ResidualStat energy;       // Ubar(x, ..., x) vs U(x)
  ResidualStat affine;       // G z + g vs gradbar(..., z)
  ResidualStat permutation;  // Ubar under a random argument permutation
  ResidualStat reversal;     // gradbar under argument reversal

  [[nodiscard]] bool passed() const {
    return identity.max_rel <= tolerance && consistency.max_rel <= tolerance &&
           energy.max_rel <= tolerance &&
           affine.max_rel <= tolerance && permutation.max_rel <= tolerance &&
           reversal.max_rel <= tolerance;
  }
};

/// Checks the defining identities of `pol` on `trials` random argument
/// tuples with entries uniform in [-2, 2].
inline ValidationReport validate_polarization(const PolarizedPotential& pol, const ScalarField& u,
                                              const GradientField& grad_u, int trials,
                                              std::uint64_t seed = 20240521,
                                              double tolerance = 1e-10) {
  ValidationReport report;
  report.trials = trials;
  report.tolerance = tolerance;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  const auto p = static_cast<std::size_t>(pol.window);
  const auto random_state = [&] {
    Vector v(pol.dim);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = dist(rng);
    return v;
  };

  std::vector<Vector> ys(p + 1);
  Vector gu;
  for (int t = 0; t < trials; ++t) {
    for (auto& y : ys) y = random_state();
    const StateSpan all(ys);
    const Vector gbar = pol.gradient(all);

    const double e_old = pol.energy(all.first(p));
    const double e_new = pol.energy(all.subspan(1, p));
    const double rhs = (ys[p] - ys[0]).dot(gbar) / static_cast<double>(p);
    report.identity.record(e_new - e_old - rhs,
                           std::abs(e_new) + std::abs(e_old) +
                               (ys[p] - ys[0]).cwiseAbs().dot(gbar.cwiseAbs()) / static_cast<double>(p));

    const AffinePart part = pol.affine_parts(all.first(p));
    const Vector affine = part.G * ys[p] + part.g;
    report.affine.record(inf_norm(Vector(affine - gbar)), inf_norm(gbar));

    const Vector x = random_state();
    const std::vector<Vector> equal(p + 1, x);
    const Vector gbar_eq = pol.gradient(equal);
    grad_u(x, gu);
    report.consistency.record(inf_norm(Vector(gbar_eq - gu)), inf_norm(gu));
    const double u_x = u(x);
    report.energy.record(pol.energy(StateSpan(equal).first(p)) - u_x, std::abs(u_x));

    if (pol.permutation_free) {
      std::vector<Vector> perm(ys.begin(), ys.begin() + static_cast<std::ptrdiff_t>(p));
      std::shuffle(perm.begin(), perm.end(), rng);
      const double e_perm = pol.energy(perm);
      report.permutation.record(e_perm - e_old, std::abs(e_old));

      std::vector<Vector> rev(ys.rbegin(), ys.rend());
      const Vector gbar_rev = pol.gradient(rev);
      report.reversal.record(inf_norm(Vector(gbar_rev - gbar)), inf_norm(gbar));
    }
  }
  return report;
}

}  // namespace lieep
