#pragma once

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>
#include <vector>

#include "lieep/energy.hpp"
#include "lieep/integrators.hpp"
#include "lieep/matfun.hpp"

namespace lieep {

// ---------------------------------------------------------------------------
// Error metrics and order estimation

/// Every `stride`-th state of `traj`, e.g. a fine reference restricted to a
/// coarser grid.
inline Trajectory subsample(const Trajectory& traj, std::size_t stride) {
  if (stride == 0) throw Error(ErrorKind::invalid_input, "subsample: stride must be positive");
  Trajectory out;
  out.info = traj.info;
  out.info.h = traj.info.h * static_cast<double>(stride);
  for (std::size_t i = 0; i < traj.size(); i += stride) {
    out.times.push_back(traj.times[i]);
    out.states.push_back(traj.states[i]);
  }
  return out;
}

/// max_n ||y_n - y_ref(t_n)||_2 over identical grids.
inline double global_error(const Trajectory& traj, const Trajectory& ref) {
  if (traj.size() != ref.size()) {
    throw Error(ErrorKind::alignment, "global_error: " + std::to_string(traj.size()) + " states vs " +
                                          std::to_string(ref.size()) + " reference states");
  }
  double err = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    if (std::abs(t - ref.times[i]) > 1e-9 * std::max(1.0, std::abs(t))) {
      throw Error(ErrorKind::alignment, "global_error: time grids differ at index " + std::to_string(i));
    }
    err = std::max(err, (traj.states[i] - ref.states[i]).norm());
  }
  return err;
}

struct OrderEstimate {
  double slope = 0.0;                  // least-squares slope of log err vs log h
  std::vector<double> pairwise;        // slope between consecutive h values
  std::vector<double> hs;
  std::vector<double> errors;
};

inline OrderEstimate observed_order(const std::vector<double>& hs, const std::vector<double>& errs) {
  if (hs.size() != errs.size()) throw Error(ErrorKind::shape, "observed_order: size mismatch");
  if (hs.size() < 2) throw Error(ErrorKind::insufficient_data, "observed_order: need at least two points");
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (!(hs[i] > 0.0) || !(errs[i] > 0.0)) {
      throw Error(ErrorKind::invalid_input, "observed_order: h and errors must be positive");
    }
    if (i > 0 && !(hs[i] < hs[i - 1])) {
      throw Error(ErrorKind::invalid_input, "observed_order: h must be strictly decreasing");
    }
  }
  OrderEstimate est;
  est.hs = hs;
  est.errors = errs;
  const auto n = static_cast<double>(hs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double x = std::log(hs[i]);
    const double y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    if (i > 0) est.pairwise.push_back((y - std::log(errs[i - 1])) / (x - std::log(hs[i - 1])));
  }
  est.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return est;
}

// ---------------------------------------------------------------------------
// Structural checks

struct LemmaReport {
  double norm_B = 0.0;          // ||B||_inf
  double max_eig_sym_B = 0.0;   // largest eigenvalue of (B + B^T)/2
};

/// B = exp(phJM)^T M exp(phJM) - M; zero for skew J, negative semidefinite
/// for negative semidefinite J.
inline LemmaReport lemma_definiteness(const Matrix& j, const Matrix& m, int p, double h) {
  const Matrix e = expm(p * h * (j * m));
  const Matrix b = e.transpose() * m * e - m;
  const Matrix sym = 0.5 * (b + b.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  return {inf_norm(b), solver.eigenvalues().maxCoeff()};
}

/// Steps forward from `w` to y_{n+p}, then applies the scheme with -h to
/// the reversed window (y_{n+p}, ..., y_{n+1}); returns ||recovered - y_n||_inf.
inline double symmetry_residual(const SemilinearSystem& sys, const PolarizedPotential& pol,
                                const StepWindow& w, double h) {
  const LieepScheme forward(sys, pol, h);
  const LieepScheme backward(sys, pol, -h);
  const Vector next = forward.step(w.view());
  std::vector<Vector> reversed;
  reversed.push_back(next);
  for (std::size_t i = w.size(); i-- > 1;) reversed.push_back(w.states[i]);
  const Vector recovered = backward.step(reversed);
  return inf_norm(Vector(recovered - w.states.front()));
}

struct MonotonicityReport {
  int violations = 0;
  double max_increase = 0.0;  // largest series[n+1] - series[n], may be negative
};

/// Counts n with series[n+1] - series[n] > tol * (1 + |series[0]|); NaN
/// entries are skipped.
inline MonotonicityReport monotonicity_check(const std::vector<double>& series, double tol) {
  MonotonicityReport rep;
  rep.max_increase = -std::numeric_limits<double>::infinity();
  if (series.empty()) return rep;
  const double bound = tol * (1.0 + std::abs(series.front()));
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (std::isnan(series[i]) || std::isnan(series[i - 1])) continue;
    const double inc = series[i] - series[i - 1];
    rep.max_increase = std::max(rep.max_increase, inc);
    if (inc > bound) ++rep.violations;
  }
  return rep;
}

/// max - min over the finite entries.
inline double peak_to_peak(const std::vector<double>& series) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : series) {
    if (std::isnan(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi >= lo ? hi - lo : 0.0;
}

}  // namespace lieep
