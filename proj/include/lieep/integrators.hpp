#pragma once

// Time steppers for y' = J (M y + grad U(y)):
//
//   LIEEP   y_{n+p} = exp(V) y_n + p h phi(V) J gradbar(y_n, ..., y_{n+p}),  V = p h J M
//   EAVF    y_{n+1} = exp(hJM) y_n + h phi(hJM) J int_0^1 grad U((1-t) y_n + t y_{n+1}) dt
//   CRK6    three-stage continuous Runge-Kutta with cubic stage interpolant
//
// LIEEP is linear in y_{n+p} because gradbar is affine in its newest
// argument; each step is a single dense LU solve. EAVF and CRK6 use plain
// fixed-point iteration.

#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lieep/energy.hpp"
#include "lieep/matfun.hpp"
#include "lieep/polarization.hpp"
#include "lieep/quadrature.hpp"
#include "lieep/system.hpp"

namespace lieep {

struct StepWindow {
  std::vector<Vector> states;  // y_n, ..., y_{n+p-1}

  [[nodiscard]] StateSpan view() const { return states; }
  [[nodiscard]] std::size_t size() const { return states.size(); }
};

struct FixedPointOptions {
  double tol = 1e-14;
  int max_iter = 500;
  /// Consecutive growing successive differences treated as divergence.
  int divergence_window = 5;
};

struct StepInfo {
  int iterations = 0;
  double residual = 0.0;
};

namespace detail {

/// Successive-difference bookkeeping shared by the implicit schemes. The
/// difference is measured in the inf-norm and compared against
/// tol * max(1, ||iterate||_inf).
class FixedPointMonitor {
 public:
  FixedPointMonitor(const FixedPointOptions& opts, double h, std::string_view scheme)
      : opts_(opts), h_(h), scheme_(scheme) {}

  /// Returns true once converged; throws on divergence or exhaustion.
  bool update(double diff, double iterate_norm) {
    ++iterations_;
    last_ = diff;
    if (!std::isfinite(diff)) {
      throw IterationError(ErrorKind::divergence, diff, iterations_,
                           std::string(scheme_) + ": non-finite iterate at h=" + std::to_string(h_));
    }
    if (diff <= opts_.tol * std::max(1.0, iterate_norm)) return true;
    growth_ = diff > prev_ ? growth_ + 1 : 0;
    prev_ = diff;
    if (growth_ >= opts_.divergence_window) {
      throw IterationError(ErrorKind::divergence, diff, iterations_,
                           std::string(scheme_) + ": fixed-point iteration diverging at h=" +
                               std::to_string(h_) + ", residual " + std::to_string(diff));
    }
    if (iterations_ >= opts_.max_iter) {
      throw IterationError(ErrorKind::non_convergence, diff, iterations_,
                           std::string(scheme_) + ": no convergence in " +
                               std::to_string(opts_.max_iter) + " iterations at h=" +
                               std::to_string(h_) + ", residual " + std::to_string(diff));
    }
    return false;
  }

  [[nodiscard]] int iterations() const { return iterations_; }
  [[nodiscard]] double last() const { return last_; }

 private:
  FixedPointOptions opts_;
  double h_;
  std::string_view scheme_;
  double prev_ = std::numeric_limits<double>::infinity();
  double last_ = 0.0;
  int iterations_ = 0;
  int growth_ = 0;
};

inline void require_finite_state(const Vector& y, double h, std::string_view scheme) {
  if (!y.allFinite()) {
    throw Error(ErrorKind::divergence,
                std::string(scheme) + ": non-finite state at h=" + std::to_string(h));
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// LIEEP

inline MatrixFunctionPair make_lieep_cache(const SemilinearSystem& sys, int window, double h) {
  return exp_and_phi(sys.J, sys.M, window * h);
}

class LieepScheme {
 public:
  LieepScheme(SemilinearSystem sys, PolarizedPotential pol, double h)
      : LieepScheme(sys, pol, h, make_lieep_cache(sys, pol.window, h)) {}

  LieepScheme(SemilinearSystem sys, PolarizedPotential pol, double h, MatrixFunctionPair cache)
      : sys_(std::move(sys)), pol_(std::move(pol)), h_(h), cache_(std::move(cache)) {
    if (pol_.dim != sys_.dim) {
      throw Error(ErrorKind::shape, "LieepScheme: polarization acts on dim " +
                                        std::to_string(pol_.dim) + ", system has dim " +
                                        std::to_string(sys_.dim));
    }
    const double expected = pol_.window * h_;
    if (std::abs(cache_.scale - expected) > 1e-14 * std::abs(expected)) {
      throw Error(ErrorKind::invalid_input, "LieepScheme: cache scale " +
                                                std::to_string(cache_.scale) + " != p*h = " +
                                                std::to_string(expected));
    }
    phi_j_ = cache_.scale * (cache_.phi * sys_.J);
    flush_negligible(phi_j_);
  }

  [[nodiscard]] int window() const { return pol_.window; }
  [[nodiscard]] double h() const { return h_; }
  [[nodiscard]] const MatrixFunctionPair& cache() const { return cache_; }
  [[nodiscard]] const PolarizedPotential& polarization() const { return pol_; }

  /// y_{n+p} from the window (y_n, ..., y_{n+p-1}).
  [[nodiscard]] Vector step(StateSpan window) const {
    const auto p = static_cast<std::size_t>(pol_.window);
    if (window.size() != p) {
      throw Error(ErrorKind::window, "lieep step: window has " + std::to_string(window.size()) +
                                         " states, expected " + std::to_string(p));
    }
    const AffinePart part = pol_.affine_parts(window);
    Vector rhs = cache_.exp * window[0];
    rhs.noalias() += phi_j_ * part.g;

    // Only columns where G has entries differ from the identity in
    // I - K G, so the solve reduces to those rows and columns.
    std::vector<Eigen::Index> active;
    active.reserve(static_cast<std::size_t>(part.G.outerSize()));
    for (Eigen::Index k = 0; k < part.G.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(part.G, k); it; ++it) {
        if (it.value() != 0.0) {
          active.push_back(k);
          break;
        }
      }
    }
    if (active.empty()) {
      detail::require_finite_state(rhs, h_, "lieep");
      return rhs;
    }

    Matrix kg = phi_j_ * part.G;
    const auto n = static_cast<Eigen::Index>(sys_.dim);
    const auto m = static_cast<Eigen::Index>(active.size());
    Vector y;
    if (m == n) {
      kg = -kg;
      kg.diagonal().array() += 1.0;
      const Eigen::PartialPivLU<Matrix> lu(kg);
      check_pivots(lu.matrixLU());
      y = lu.solve(rhs);
    } else {
      Matrix s(m, m);
      Vector b(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        const auto ai = active[static_cast<std::size_t>(i)];
        b(i) = rhs(ai);
        for (Eigen::Index j = 0; j < m; ++j) s(i, j) = -kg(ai, active[static_cast<std::size_t>(j)]);
        s(i, i) += 1.0;
      }
      const Eigen::PartialPivLU<Matrix> lu(s);
      check_pivots(lu.matrixLU());
      const Vector x = lu.solve(b);
      y = rhs;
      for (Eigen::Index j = 0; j < m; ++j) y.noalias() += kg.col(active[static_cast<std::size_t>(j)]) * x(j);
      for (Eigen::Index i = 0; i < m; ++i) y(active[static_cast<std::size_t>(i)]) = x(i);
    }
    detail::require_finite_state(y, h_, "lieep");
    return y;
  }

  /// ||y_{n+p} - exp(V) y_n - p h phi(V) J gradbar||_inf / (1 + ||y_{n+p}||_inf)
  /// over the p+1 states (y_n, ..., y_{n+p}).
  [[nodiscard]] double residual(StateSpan states) const {
    const auto p = static_cast<std::size_t>(pol_.window);
    const Vector grad = pol_.gradient(states);
    const Vector r = states[p] - cache_.exp * states[0] - phi_j_ * grad;
    return inf_norm(r) / (1.0 + inf_norm(states[p]));
  }

  /// Smallest admissible ratio min|u_ii| / max|u_ii| of the LU pivots.
  static constexpr double kSingularPivotRatio = 1e-14;

 private:
  /// Pivot-ratio condition estimate of the factored step matrix.
  void check_pivots(const Matrix& lu) const {
    const auto diag = lu.diagonal().cwiseAbs();
    const double hi = diag.maxCoeff();
    const double lo = diag.minCoeff();
    if (!std::isfinite(hi) || !(lo > kSingularPivotRatio * hi)) {
      const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
      throw StepSingularityError(h_, cond,
                                 "lieep step: singular step matrix at h=" + std::to_string(h_) +
                                     ", condition estimate " + std::to_string(cond));
    }
  }

  SemilinearSystem sys_;
  PolarizedPotential pol_;
  double h_;
  MatrixFunctionPair cache_;
  Matrix phi_j_;  // p h phi(V) J
};

/// One LIEEP step with an explicit cache (scale = p*h).
inline Vector lieep_step(const SemilinearSystem& sys, const PolarizedPotential& pol,
                         const StepWindow& w, double h, const MatrixFunctionPair& cache) {
  return LieepScheme(sys, pol, h, cache).step(w.view());
}

// ---------------------------------------------------------------------------
// EAVF

/// Smallest Gauss-Legendre order integrating grad U along a segment exactly.
inline int avf_quadrature_points(int potential_degree) {
  return std::max(1, (potential_degree + 1) / 2);
}

class EavfScheme {
 public:
  EavfScheme(SemilinearSystem sys, double h, FixedPointOptions opts = {}, int gl_points = 0)
      : EavfScheme(sys, h, exp_and_phi(sys.J, sys.M, h), opts, gl_points) {}

  EavfScheme(SemilinearSystem sys, double h, MatrixFunctionPair cache, FixedPointOptions opts,
             int gl_points)
      : sys_(std::move(sys)),
        h_(h),
        cache_(std::move(cache)),
        opts_(opts),
        rule_(gl_points > 0 ? gl_points : avf_quadrature_points(sys_.potential_degree)) {
    if (opts_.tol <= 0.0) throw Error(ErrorKind::invalid_input, "eavf: tolerance must be positive");
    phi_j_ = cache_.scale * (cache_.phi * sys_.J);
    flush_negligible(phi_j_);
  }

  [[nodiscard]] double h() const { return h_; }
  [[nodiscard]] const MatrixFunctionPair& cache() const { return cache_; }
  [[nodiscard]] int quadrature_points() const { return static_cast<int>(rule_.size()); }

  [[nodiscard]] Vector step(const Vector& y, StepInfo* info = nullptr) const {
    const Vector linear = cache_.exp * y;
    Vector z = y;
    Vector next(y.size());
    Vector avg(y.size());
    Vector point(y.size());
    Vector grad(y.size());
    detail::FixedPointMonitor monitor(opts_, h_, "eavf");
    while (true) {
      avg.setZero();
      for (std::size_t i = 0; i < rule_.size(); ++i) {
        point = y + rule_.nodes[i] * (z - y);
        sys_.grad_U(point, grad);
        avg += rule_.weights[i] * grad;
      }
      next.noalias() = phi_j_ * avg;
      next += linear;
      const double diff = inf_norm(Vector(next - z));
      z.swap(next);
      if (monitor.update(diff, inf_norm(z))) break;
    }
    detail::require_finite_state(z, h_, "eavf");
    if (info != nullptr) {
      info->iterations = monitor.iterations();
      info->residual = monitor.last();
    }
    return z;
  }

 private:
  SemilinearSystem sys_;
  double h_;
  MatrixFunctionPair cache_;
  FixedPointOptions opts_;
  GaussLegendre rule_;
  Matrix phi_j_;  // h phi(hJM) J
};

inline Vector eavf_step(const SemilinearSystem& sys, const Vector& y, double h,
                        const MatrixFunctionPair& cache, int gl_points, double tol, int max_iter) {
  FixedPointOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  return EavfScheme(sys, h, cache, opts, gl_points).step(y);
}

// ---------------------------------------------------------------------------
// CRK6

class Crk6Scheme {
 public:
  static constexpr int kQuadraturePoints = 5;

  Crk6Scheme(SemilinearSystem sys, double h, FixedPointOptions opts = {})
      : sys_(std::move(sys)), h_(h), opts_(opts) {
    if (opts_.tol <= 0.0) throw Error(ErrorKind::invalid_input, "crk6: tolerance must be positive");
    const GaussLegendre rule(kQuadraturePoints);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double s = rule.nodes[i];
      const double w = rule.weights[i];
      Node node;
      // Cubic Lagrange basis on the nodes 0, 1/3, 2/3, 1.
      node.basis = {-(3 * s - 1) * (3 * s - 2) * (s - 1) / 2, 3 * s * (3 * s - 2) * (3 * s - 3) / 2,
                    -3 * s * (3 * s - 1) * (3 * s - 3) / 2, s * (3 * s - 1) * (3 * s - 2) / 2};
      node.stage_weight = {w * (37.0 / 27.0 - 32.0 / 9.0 * s + 20.0 / 9.0 * s * s),
                           w * (26.0 / 27.0 + 8.0 / 9.0 * s - 20.0 / 9.0 * s * s), w};
      nodes_.push_back(node);
    }
  }

  [[nodiscard]] double h() const { return h_; }

  [[nodiscard]] Vector step(const Vector& y, StepInfo* info = nullptr) const {
    const auto n = y.size();
    std::array<Vector, 3> stage{y, y, y};
    std::array<Vector, 3> acc{Vector(n), Vector(n), Vector(n)};
    Vector point(n);
    Vector grad(n);
    Vector scratch(n);
    Vector next(n);
    detail::FixedPointMonitor monitor(opts_, h_, "crk6");
    while (true) {
      for (auto& a : acc) a.setZero();
      for (const auto& node : nodes_) {
        point = node.basis[0] * y;
        for (std::size_t k = 0; k < 3; ++k) point += node.basis[k + 1] * stage[k];
        sys_.energy_gradient(point, grad, scratch);
        for (std::size_t k = 0; k < 3; ++k) acc[k] += node.stage_weight[k] * grad;
      }
      double diff = 0.0;
      double norm = 0.0;
      for (std::size_t k = 0; k < 3; ++k) {
        next.noalias() = h_ * (sys_.J_sparse * acc[k]);
        next += y;
        diff = std::max(diff, inf_norm(Vector(next - stage[k])));
        stage[k].swap(next);
        norm = std::max(norm, inf_norm(stage[k]));
      }
      if (monitor.update(diff, norm)) break;
    }
    detail::require_finite_state(stage[2], h_, "crk6");
    if (info != nullptr) {
      info->iterations = monitor.iterations();
      info->residual = monitor.last();
    }
    return stage[2];
  }

 private:
  struct Node {
    std::array<double, 4> basis;         // coefficients of y_n, y_{n+1/3}, y_{n+2/3}, y_{n+1}
    std::array<double, 3> stage_weight;  // quadrature weight times stage weight polynomial
  };

  SemilinearSystem sys_;
  double h_;
  FixedPointOptions opts_;
  std::vector<Node> nodes_;
};

inline Vector crk6_step(const SemilinearSystem& sys, const Vector& y, double h, double tol,
                        int max_iter) {
  FixedPointOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  return Crk6Scheme(sys, h, opts).step(y);
}

// ---------------------------------------------------------------------------
// Starting values

enum class StartMethod { crk6_substep };

inline constexpr int kStartSubsteps = 10;

/// (y_0, ..., y_{p-1}) on the grid t_k = k h; each advance is CRK6 with
/// `substeps` steps of size h/substeps.
inline StepWindow generate_starting_values(const SemilinearSystem& sys, const Vector& y0, double h,
                                           int p, StartMethod method = StartMethod::crk6_substep,
                                           FixedPointOptions opts = {},
                                           int substeps = kStartSubsteps) {
  (void)method;
  if (p < 1) throw Error(ErrorKind::window, "generate_starting_values: p must be >= 1");
  StepWindow w;
  w.states.reserve(static_cast<std::size_t>(p));
  w.states.push_back(y0);
  if (h == 0.0) {
    w.states.resize(static_cast<std::size_t>(p), y0);
    return w;
  }
  const Crk6Scheme crk(sys, h / substeps, opts);
  Vector y = y0;
  for (int k = 1; k < p; ++k) {
    for (int s = 0; s < substeps; ++s) y = crk.step(y);
    w.states.push_back(y);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Trajectories

enum class Method { lieep, eavf, crk6 };

constexpr std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::lieep: return "lieep";
    case Method::eavf: return "eavf";
    case Method::crk6: return "crk6";
  }
  return "unknown";
}

inline std::optional<Method> parse_method(std::string_view s) {
  if (s == "lieep") return Method::lieep;
  if (s == "eavf") return Method::eavf;
  if (s == "crk6") return Method::crk6;
  return std::nullopt;
}

namespace channel {
inline constexpr const char* polarized_energy = "polarized_energy";
inline constexpr const char* discrete_energy = "discrete_energy";
inline constexpr const char* step_residual = "step_residual";
inline constexpr const char* iterations = "iterations";
}  // namespace channel

struct ChannelFlags {
  bool polarized_energy = true;
  bool discrete_energy = true;
  bool step_residual = false;
};

struct IntegrateOptions {
  FixedPointOptions fixed_point;
  int gl_points = 0;  // 0 selects from the potential degree
  int start_substeps = kStartSubsteps;
  ChannelFlags channels;
  /// Reuse a prebuilt exp/phi pair (scale must match the method).
  std::optional<MatrixFunctionPair> cache;
};

struct TrajectoryInfo {
  Method method = Method::lieep;
  double h = 0.0;
  double T = 0.0;
  long steps = 0;
  bool truncated_final_step = false;
  double setup_seconds = 0.0;     // matrix functions
  double stepping_seconds = 0.0;  // starting values and steps
  double fixed_point_iterations_mean = 0.0;
  std::optional<ErrorKind> error;
  std::string error_message;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  /// Each channel has one entry per state; NaN where undefined (e.g. the
  /// last p-1 polarized energies, whose windows run past the end).
  std::map<std::string, std::vector<double>> channels;
  TrajectoryInfo info;

  [[nodiscard]] std::size_t size() const { return states.size(); }
  [[nodiscard]] bool ok() const { return !info.error.has_value(); }
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

inline void fill_energy_channels(Trajectory& traj, const SemilinearSystem& sys,
                                 const PolarizedPotential* pol, const ChannelFlags& flags) {
  const std::size_t n = traj.states.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (flags.discrete_energy) {
    auto& ch = traj.channels[channel::discrete_energy];
    ch.resize(n);
    for (std::size_t i = 0; i < n; ++i) ch[i] = sys.energy(traj.states[i]);
  }
  if (flags.polarized_energy && pol != nullptr) {
    auto& ch = traj.channels[channel::polarized_energy];
    const auto p = static_cast<std::size_t>(pol->window);
    ch.assign(n, nan);
    const StateSpan all(traj.states);
    for (std::size_t i = 0; i + p <= n; ++i) ch[i] = polarized_energy(*pol, sys.M_sparse, all.subspan(i, p));
  }
}

}  // namespace detail

/// Integrates from t = 0 to T with step h. For T/h not an integer the last
/// step is truncated to land on T (done with CRK6 substeps for LIEEP, whose
/// window needs a uniform grid) and flagged in the metadata. Step failures
/// end the run; the partial trajectory is returned with the error recorded.
inline Trajectory integrate(Method method, const SemilinearSystem& sys,
                            const PolarizedPotential* pol, const Vector& y0, double h, double T,
                            const IntegrateOptions& opts = {}) {
  if (!(h > 0.0) || !(T > 0.0)) {
    throw Error(ErrorKind::invalid_input, "integrate: h and T must be positive");
  }
  if (y0.size() != sys.dim) throw Error(ErrorKind::shape, "integrate: y0 has the wrong size");
  if (method == Method::lieep && pol == nullptr) {
    throw Error(ErrorKind::invalid_input, "integrate: lieep needs a polarized potential");
  }

  Trajectory traj;
  traj.info.method = method;
  traj.info.h = h;
  traj.info.T = T;

  long steps = std::lround(T / h);
  double remainder = 0.0;
  if (std::abs(static_cast<double>(steps) * h - T) > 1e-9 * T) {
    steps = static_cast<long>(std::floor(T / h));
    remainder = T - static_cast<double>(steps) * h;
    traj.info.truncated_final_step = true;
  }
  traj.info.steps = steps + (remainder > 0.0 ? 1 : 0);

  traj.states.reserve(static_cast<std::size_t>(traj.info.steps + 1));
  std::vector<double> iterations;
  std::vector<double> residuals;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  const auto setup_start = detail::Clock::now();
  std::optional<LieepScheme> lieep;
  std::optional<EavfScheme> eavf;
  std::optional<Crk6Scheme> crk6;
  try {
    switch (method) {
      case Method::lieep:
        lieep.emplace(sys, *pol, h,
                      opts.cache ? *opts.cache : make_lieep_cache(sys, pol->window, h));
        break;
      case Method::eavf:
        eavf.emplace(sys, h, opts.cache ? *opts.cache : exp_and_phi(sys.J, sys.M, h),
                     opts.fixed_point, opts.gl_points);
        break;
      case Method::crk6: crk6.emplace(sys, h, opts.fixed_point); break;
    }
  } catch (const Error& e) {
    traj.info.error = e.kind();
    traj.info.error_message = e.what();
    return traj;
  }
  traj.info.setup_seconds = detail::seconds_since(setup_start);

  const auto step_start = detail::Clock::now();
  try {
    switch (method) {
      case Method::lieep: {
        const int p = pol->window;
        StepWindow start = generate_starting_values(sys, y0, h, p, StartMethod::crk6_substep,
                                                    opts.fixed_point, opts.start_substeps);
        for (auto& s : start.states) {
          if (static_cast<long>(traj.states.size()) > steps) break;
          traj.states.push_back(std::move(s));
          residuals.push_back(nan);
        }
        while (static_cast<long>(traj.states.size()) <= steps) {
          const StateSpan all(traj.states);
          Vector next = lieep->step(all.last(static_cast<std::size_t>(p)));
          traj.states.push_back(std::move(next));
          residuals.push_back(nan);
        }
        break;
      }
      case Method::eavf:
      case Method::crk6: {
        traj.states.push_back(y0);
        iterations.push_back(0.0);
        residuals.push_back(nan);
        StepInfo info;
        for (long n = 0; n < steps; ++n) {
          Vector next = eavf ? eavf->step(traj.states.back(), &info) : crk6->step(traj.states.back(), &info);
          traj.states.push_back(std::move(next));
          iterations.push_back(info.iterations);
          residuals.push_back(info.residual);
        }
        break;
      }
    }
    if (remainder > 0.0) {
      StepInfo info;
      Vector y = traj.states.back();
      if (method == Method::eavf) {
        y = EavfScheme(sys, remainder, opts.fixed_point, opts.gl_points).step(y, &info);
      } else {
        const int substeps = method == Method::lieep ? opts.start_substeps : 1;
        const Crk6Scheme tail(sys, remainder / substeps, opts.fixed_point);
        for (int s = 0; s < substeps; ++s) y = tail.step(y, &info);
      }
      traj.states.push_back(std::move(y));
      if (!iterations.empty()) iterations.push_back(info.iterations);
      residuals.push_back(nan);
    }
  } catch (const Error& e) {
    traj.info.error = e.kind();
    traj.info.error_message = e.what();
  }
  traj.info.stepping_seconds = detail::seconds_since(step_start);

  const std::size_t n = traj.states.size();
  traj.times.resize(n);
  for (std::size_t i = 0; i < n; ++i) traj.times[i] = static_cast<double>(i) * h;
  if (traj.info.truncated_final_step && static_cast<long>(n) == steps + 2) traj.times.back() = T;

  if (!iterations.empty()) {
    iterations.resize(n, nan);
    double sum = 0.0;
    for (std::size_t i = 1; i < n; ++i) sum += iterations[i];
    traj.info.fixed_point_iterations_mean = n > 1 ? sum / static_cast<double>(n - 1) : 0.0;
    traj.channels[channel::iterations] = std::move(iterations);
  }
  if (opts.channels.step_residual) {
    residuals.resize(n, nan);
    if (lieep) {
      const auto p = static_cast<std::size_t>(pol->window);
      const StateSpan all(traj.states);
      const std::size_t uniform = std::min<std::size_t>(n, static_cast<std::size_t>(steps) + 1);
      for (std::size_t i = p; i < uniform; ++i) residuals[i] = lieep->residual(all.subspan(i - p, p + 1));
    }
    traj.channels[channel::step_residual] = std::move(residuals);
  }
  detail::fill_energy_channels(traj, sys, pol, opts.channels);
  return traj;
}

}  // namespace lieep
