#pragma once

#include <fmt/format.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "lieep/diagnostics.hpp"
#include "lieep/harness/config.hpp"
#include "lieep/problems.hpp"

namespace lieep::harness {

namespace fs = std::filesystem;

/// Environment variable that replaces the output root (default: cwd).
inline constexpr const char* kOutputRootEnv = "LIEEP_OUTPUT_ROOT";

enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_config = 2, exit_integration = 3 };

inline fs::path output_root() {
  const char* env = std::getenv(kOutputRootEnv);
  return (env != nullptr && *env != '\0') ? fs::path(env) : fs::current_path();
}

inline Problem build_problem(const ExperimentConfig& cfg) {
  try {
    switch (cfg.problem) {
      case ProblemKind::wind: return wind_oscillator(cfg.wind);
      case ProblemKind::fpu: return fpu_system(cfg.fpu, cfg.fpu_alpha);
      case ProblemKind::pendulum: return pendulum_truncated();
    }
  } catch (const Error& e) {
    throw config_error("[" + cfg.name + "] " + e.what());
  }
  throw config_error("unknown problem");
}

inline std::vector<std::string> state_names(const ExperimentConfig& cfg, int dim) {
  std::vector<std::string> names;
  switch (cfg.problem) {
    case ProblemKind::wind: names = {"x1", "x2"}; break;
    case ProblemKind::pendulum: names = {"q", "p"}; break;
    case ProblemKind::fpu: {
      const int n = dim / 2;
      for (int j = 1; j <= n; ++j) names.push_back(fmt::format("u{}", j));
      for (int j = 1; j <= n; ++j) names.push_back(fmt::format("v{}", j));
      break;
    }
  }
  return names;
}

namespace detail {

inline fs::path prepare_directory(const ExperimentConfig& cfg, const fs::path& root) {
  const fs::path dir = root / cfg.output;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw config_error("[" + cfg.name + "] output directory '" + dir.string() + "' is not writable");
  }
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw config_error("[" + cfg.name + "] output directory '" + dir.string() + "' is not writable");
  }
  fs::remove(probe, ec);
  return dir;
}

inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.17g}", v);
}

inline void write_file(const fs::path& path, const fmt::memory_buffer& buf) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (f == nullptr) throw Error(ErrorKind::config, "cannot write '" + path.string() + "'");
  const bool ok = std::fwrite(buf.data(), 1, buf.size(), f) == buf.size();
  if (std::fclose(f) != 0 || !ok) throw Error(ErrorKind::config, "cannot write '" + path.string() + "'");
}

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline const std::vector<std::string>& channel_order() {
  static const std::vector<std::string> order{channel::polarized_energy, channel::discrete_energy,
                                              channel::step_residual, channel::iterations};
  return order;
}

}  // namespace detail

struct RunRow {
  Method method = Method::lieep;
  StepSize h;
  TrajectoryInfo info;
  double global_error = std::numeric_limits<double>::quiet_NaN();
  double wall_clock_total = std::numeric_limits<double>::quiet_NaN();
  double wall_clock_stepping = std::numeric_limits<double>::quiet_NaN();
  double wall_clock_setup = std::numeric_limits<double>::quiet_NaN();
  double polarized_energy_ptp = std::numeric_limits<double>::quiet_NaN();
  double discrete_energy_ptp = std::numeric_limits<double>::quiet_NaN();
  int polarized_energy_increases = 0;
  [[nodiscard]] bool ok() const { return !info.error.has_value(); }
};

struct RunReport {
  std::string name;
  std::vector<fs::path> files;
  std::vector<RunRow> rows;
  std::optional<OrderEstimate> order_for(Method m) const {
    std::vector<double> hs, errs;
    for (const auto& r : rows) {
      if (r.method != m || !r.ok() || r.info.truncated_final_step || !(r.global_error > 0.0)) continue;
      hs.push_back(r.h.value);
      errs.push_back(r.global_error);
    }
    // observed_order wants decreasing h
    std::vector<std::size_t> idx(hs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return hs[a] > hs[b]; });
    std::vector<double> hs_sorted, errs_sorted;
    for (auto i : idx) {
      hs_sorted.push_back(hs[i]);
      errs_sorted.push_back(errs[i]);
    }
    if (hs_sorted.size() < 2) return std::nullopt;
    return observed_order(hs_sorted, errs_sorted);
  }
  [[nodiscard]] bool integration_failed() const {
    return std::any_of(rows.begin(), rows.end(), [](const RunRow& r) { return !r.ok(); });
  }
};

inline void write_trace(const fs::path& path, const ExperimentConfig& cfg, const Trajectory& traj) {
  fmt::memory_buffer buf;
  const int dim = traj.states.empty() ? 0 : static_cast<int>(traj.states.front().size());
  buf.append(std::string_view("t"));
  for (const auto& n : state_names(cfg, dim)) fmt::format_to(std::back_inserter(buf), ",{}", n);
  std::vector<const std::vector<double>*> cols;
  for (const auto& name : detail::channel_order()) {
    const auto it = traj.channels.find(name);
    if (it == traj.channels.end()) continue;
    if (name == channel::iterations) continue;  // summarized in summary.csv
    fmt::format_to(std::back_inserter(buf), ",{}", name);
    cols.push_back(&it->second);
  }
  // The untruncated pendulum energy, for comparing against the cosine model.
  const bool original = cfg.problem == ProblemKind::pendulum;
  if (original) buf.append(std::string_view(",original_energy"));
  buf.push_back('\n');
  const auto stride = static_cast<std::size_t>(cfg.trace_stride);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (i % stride != 0 && i + 1 != traj.size()) continue;
    buf.append(detail::num(traj.times[i]));
    for (Eigen::Index k = 0; k < traj.states[i].size(); ++k) {
      buf.push_back(',');
      buf.append(detail::num(traj.states[i](k)));
    }
    for (const auto* c : cols) {
      buf.push_back(',');
      buf.append(detail::num((*c)[i]));
    }
    if (original) {
      buf.push_back(',');
      buf.append(detail::num(pendulum_original_energy(traj.states[i])));
    }
    buf.push_back('\n');
  }
  detail::write_file(path, buf);
}

/// Runs every (method, h) of `cfg`, writing traces, summary.csv and, when a
/// reference is requested, order.csv under root/cfg.output. Integration
/// failures are recorded per row; the remaining rows still run.
inline RunReport run_experiment(const ExperimentConfig& cfg, const fs::path& root = output_root()) {
  const Problem prob = build_problem(cfg);
  const fs::path dir = detail::prepare_directory(cfg, root);
  RunReport report;
  report.name = cfg.name;

  IntegrateOptions opts;
  opts.fixed_point = cfg.fixed_point;
  opts.start_substeps = cfg.start_substeps;
  opts.channels = cfg.channels;

  std::optional<Trajectory> ref;
  double h_ref = 0.0;
  if (cfg.reference) {
    double h_min = cfg.hs.front().value;
    for (const auto& h : cfg.hs) h_min = std::min(h_min, h.value);
    h_ref = h_min / cfg.ref_divisor;
    IntegrateOptions ref_opts = opts;
    ref_opts.channels = ChannelFlags{false, false, false};
    ref = integrate(Method::crk6, prob.system, nullptr, prob.initial, h_ref, cfg.T, ref_opts);
    if (!ref->ok()) {
      throw Error(ErrorKind::divergence, "[" + cfg.name + "] reference failed: " + ref->info.error_message);
    }
  }

  for (const Method method : cfg.methods) {
    for (const auto& h : cfg.hs) {
      RunRow row;
      row.method = method;
      row.h = h;
      std::optional<Trajectory> first;
      std::vector<double> total, stepping, setup;
      for (int rep = 0; rep < cfg.repetitions; ++rep) {
        Trajectory traj = integrate(method, prob.system, &prob.polarization, prob.initial, h.value, cfg.T, opts);
        total.push_back(traj.info.setup_seconds + traj.info.stepping_seconds);
        stepping.push_back(traj.info.stepping_seconds);
        setup.push_back(traj.info.setup_seconds);
        if (!first) first = std::move(traj);
        if (!first->ok()) break;
      }
      const Trajectory& traj = *first;
      row.info = traj.info;
      if (cfg.record_timing) {
        row.wall_clock_total = detail::median(total);
        row.wall_clock_stepping = detail::median(stepping);
        row.wall_clock_setup = detail::median(setup);
      }
      if (const auto it = traj.channels.find(channel::polarized_energy); it != traj.channels.end()) {
        row.polarized_energy_ptp = peak_to_peak(it->second);
        row.polarized_energy_increases = monotonicity_check(it->second, 1e-12).violations;
      }
      if (const auto it = traj.channels.find(channel::discrete_energy); it != traj.channels.end()) {
        row.discrete_energy_ptp = peak_to_peak(it->second);
      }
      if (ref && traj.ok() && !traj.info.truncated_final_step) {
        const double ratio = h.value / h_ref;
        const auto stride = static_cast<std::size_t>(std::lround(ratio));
        if (stride >= 1 && std::abs(ratio - static_cast<double>(stride)) <= 1e-9 * ratio) {
          const Trajectory sub = subsample(*ref, stride);
          if (sub.size() == traj.size()) row.global_error = global_error(traj, sub);
        }
      }
      if (cfg.write_traces) {
        const fs::path path = dir / fmt::format("trace_{}_{}.csv", to_string(method), h.label);
        write_trace(path, cfg, traj);
        report.files.push_back(path);
      }
      report.rows.push_back(std::move(row));
    }
  }

  fmt::memory_buffer sum;
  sum.append(std::string_view(
      "method,h,steps,status,global_error,wall_clock_total,wall_clock_stepping,wall_clock_setup,"
      "fixed_point_iters_mean,polarized_energy_ptp,discrete_energy_ptp,polarized_energy_increases,"
      "truncated_final_step\n"));
  for (const auto& r : report.rows) {
    const std::string status = r.ok() ? "ok" : "error:" + std::string(to_string(*r.info.error));
    fmt::format_to(std::back_inserter(sum), "{},{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(r.method),
                   detail::num(r.h.value), r.info.steps, status, detail::num(r.global_error),
                   detail::num(r.wall_clock_total), detail::num(r.wall_clock_stepping),
                   detail::num(r.wall_clock_setup), detail::num(r.info.fixed_point_iterations_mean),
                   detail::num(r.polarized_energy_ptp), detail::num(r.discrete_energy_ptp),
                   r.polarized_energy_increases, r.info.truncated_final_step ? 1 : 0);
  }
  detail::write_file(dir / "summary.csv", sum);
  report.files.push_back(dir / "summary.csv");

  if (cfg.reference) {
    fmt::memory_buffer ord;
    ord.append(std::string_view("method,h,global_error,pairwise_slope,fit_slope\n"));
    for (const Method m : cfg.methods) {
      const auto est = report.order_for(m);
      if (!est) continue;
      for (std::size_t i = 0; i < est->hs.size(); ++i) {
        fmt::format_to(std::back_inserter(ord), "{},{},{},{},{}\n", to_string(m), detail::num(est->hs[i]),
                       detail::num(est->errors[i]),
                       i == 0 ? std::string("nan") : detail::num(est->pairwise[i - 1]), detail::num(est->slope));
      }
    }
    detail::write_file(dir / "order.csv", ord);
    report.files.push_back(dir / "order.csv");
  }
  return report;
}

// ---------------------------------------------------------------------------
// Validation

struct CheckRow {
  std::string check;
  double value = 0.0;
  double tolerance = 0.0;
  [[nodiscard]] bool passed() const { return value <= tolerance; }
};

struct ValidationResult {
  std::string name;
  fs::path file;
  std::vector<CheckRow> rows;
  [[nodiscard]] bool passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.passed(); });
  }
};

/// Gradient offset applied by the corrupt_gradient debug flag.
inline constexpr double kCorruptionOffset = 1e-3;

inline ValidationResult validate_experiment(const ExperimentConfig& cfg, const fs::path& root = output_root()) {
  Problem prob = build_problem(cfg);
  const fs::path dir = detail::prepare_directory(cfg, root);
  if (cfg.corrupt_gradient) {
    auto good = prob.polarization.gradient;
    prob.polarization.gradient = [good](StateSpan w) { return Vector(good(w).array() + kCorruptionOffset); };
  }
  const auto& sys = prob.system;
  const auto& pol = prob.polarization;

  ValidationResult res;
  res.name = cfg.name;
  const auto rep = validate_polarization(pol, sys.U, sys.grad_U, cfg.validation_trials, cfg.seed);
  res.rows.push_back({"polarization_identity", rep.identity.max_rel, rep.tolerance});
  res.rows.push_back({"polarization_consistency", rep.consistency.max_rel, rep.tolerance});
  res.rows.push_back({"polarization_energy", rep.energy.max_rel, rep.tolerance});
  res.rows.push_back({"polarization_affine", rep.affine.max_rel, rep.tolerance});
  if (pol.permutation_free) {
    res.rows.push_back({"polarization_permutation", rep.permutation.max_rel, rep.tolerance});
    res.rows.push_back({"polarization_reversal", rep.reversal.max_rel, rep.tolerance});
  }

  for (const auto& h : cfg.hs) {
    const auto lemma = lemma_definiteness(sys.J, sys.M, pol.window, h.value);
    if (sys.j_class == JClass::skew_symmetric) {
      res.rows.push_back({"lemma_norm_B@" + h.label, lemma.norm_B, 1e-11});
    } else {
      res.rows.push_back({"lemma_max_eig_B@" + h.label, lemma.max_eig_sym_B, 1e-11});
    }
    double sym = std::numeric_limits<double>::infinity();
    double step_res = std::numeric_limits<double>::infinity();
    try {
      const StepWindow w = generate_starting_values(sys, prob.initial, h.value, pol.window,
                                                    StartMethod::crk6_substep, cfg.fixed_point,
                                                    cfg.start_substeps);
      sym = symmetry_residual(sys, pol, w, h.value);
      const LieepScheme scheme(sys, pol, h.value);
      std::vector<Vector> states = w.states;
      states.push_back(scheme.step(w.view()));
      step_res = scheme.residual(states);
    } catch (const Error&) {
      // reported as an infinite residual
    }
    res.rows.push_back({"symmetry_residual@" + h.label, sym, 1e-10});
    res.rows.push_back({"step_residual@" + h.label, step_res, 1e-12});
  }

  fmt::memory_buffer buf;
  buf.append(std::string_view("check,value,tolerance,status\n"));
  for (const auto& r : res.rows) {
    fmt::format_to(std::back_inserter(buf), "{},{},{},{}\n", r.check, detail::num(r.value),
                   detail::num(r.tolerance), r.passed() ? "PASS" : "FAIL");
  }
  res.file = dir / "validation.csv";
  detail::write_file(res.file, buf);
  return res;
}

}  // namespace lieep::harness
