#pragma once

// Experiment configuration: an INI file with one section per experiment.
// Values are plain numbers or small arithmetic expressions ("1/20",
// "pi/2 - 1e-4", "2^-3"); lists are comma separated.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lieep/error.hpp"
#include "lieep/integrators.hpp"
#include "lieep/problems.hpp"

namespace lieep::harness {

enum class ProblemKind { wind, fpu, pendulum };

constexpr std::string_view to_string(ProblemKind p) noexcept {
  switch (p) {
    case ProblemKind::wind: return "wind";
    case ProblemKind::fpu: return "fpu";
    case ProblemKind::pendulum: return "pendulum";
  }
  return "unknown";
}

struct StepSize {
  double value = 0.0;
  std::string label;  // as written, used in file names
};

struct ExperimentConfig {
  std::string name;
  ProblemKind problem = ProblemKind::wind;
  WindOscillatorParams wind;
  FpuParams fpu;
  double fpu_alpha = 0.1;
  std::vector<Method> methods{Method::lieep};
  std::vector<StepSize> hs;
  double T = 0.0;
  ChannelFlags channels;
  std::uint64_t seed = 20240521;
  std::string output;  // relative to the output root; defaults to the section name
  int trace_stride = 1;
  bool write_traces = true;
  int repetitions = 3;
  bool reference = false;  // CRK6 reference and global errors
  int ref_divisor = 16;
  bool record_timing = true;
  bool corrupt_gradient = false;
  int validation_trials = 1000;
  FixedPointOptions fixed_point;
  int start_substeps = kStartSubsteps;
};

inline Error config_error(const std::string& what) { return Error(ErrorKind::config, what); }

namespace detail {

/// Recursive-descent evaluator for + - * / ^, parentheses, unary minus,
/// decimal literals and the constant pi.
class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  double parse() {
    const double v = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  double expr() {
    double v = term();
    while (true) {
      skip_space();
      if (accept('+')) v += term();
      else if (accept('-')) v -= term();
      else return v;
    }
  }

  double term() {
    double v = power();
    while (true) {
      skip_space();
      if (accept('*')) v *= power();
      else if (accept('/')) v /= power();
      else return v;
    }
  }

  double power() {
    const double base = unary();
    skip_space();
    if (accept('^')) return std::pow(base, power());
    return base;
  }

  double unary() {
    skip_space();
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return primary();
  }

  double primary() {
    skip_space();
    if (accept('(')) {
      const double v = expr();
      skip_space();
      if (!accept(')')) fail("missing ')'");
      return v;
    }
    if (text_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      return std::numbers::pi;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    if (start == pos_) fail("expected a number");
    const std::string lit(text_.substr(start, pos_ - start));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(lit, &used);
    } catch (const std::exception&) {
      fail("bad number '" + lit + "'");
    }
    if (used != lit.size()) fail("bad number '" + lit + "'");
    return v;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw config_error("cannot parse '" + std::string(text_) + "': " + why);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::string file_label(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') out += c;
    else if (c == '/') out += '_';
    else if (c == '^') out += 'p';
    else if (!std::isspace(static_cast<unsigned char>(c))) out += 'x';
  }
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw config_error("key '" + key + "': expected a boolean, got '" + v + "'");
}

inline long parse_integer(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long out = 0;
  try {
    out = std::stol(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw config_error("key '" + key + "': expected an integer, got '" + v + "'");
  return out;
}

}  // namespace detail

inline double parse_real(std::string_view text) { return detail::ExpressionParser(text).parse(); }

namespace detail {

inline const std::set<std::string>& common_keys() {
  static const std::set<std::string> keys{
      "problem",     "methods",        "h",          "T",          "channels",          "seed",
      "output",      "trace_stride",   "write_traces", "repetitions", "reference",       "ref_divisor",
      "record_timing", "corrupt_gradient", "validation_trials", "fixed_point_tol", "max_iter",
      "start_substeps"};
  return keys;
}

inline const std::set<std::string>& problem_keys(ProblemKind p) {
  static const std::set<std::string> wind{"r", "theta", "a"};
  static const std::set<std::string> fpu{"N", "L", "beta", "gamma", "m", "eps", "alpha"};
  static const std::set<std::string> pendulum{};
  switch (p) {
    case ProblemKind::wind: return wind;
    case ProblemKind::fpu: return fpu;
    case ProblemKind::pendulum: return pendulum;
  }
  return pendulum;
}

inline ExperimentConfig parse_section(const std::string& name, const boost::property_tree::ptree& sec) {
  ExperimentConfig cfg;
  cfg.name = name;
  cfg.output = name;
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    const auto v = sec.get_optional<std::string>(boost::property_tree::ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return trim(*v);
  };
  const std::string where = "[" + name + "] ";

  const auto problem = get("problem");
  if (!problem) throw config_error(where + "missing key 'problem'");
  if (*problem == "wind") cfg.problem = ProblemKind::wind;
  else if (*problem == "fpu") cfg.problem = ProblemKind::fpu;
  else if (*problem == "pendulum") cfg.problem = ProblemKind::pendulum;
  else throw config_error(where + "unknown problem '" + *problem + "'");

  for (const auto& [key, child] : sec) {
    if (!child.empty()) throw config_error(where + "nested key '" + key + "'");
    if (!common_keys().count(key) && !problem_keys(cfg.problem).count(key)) {
      throw config_error(where + "unknown key '" + key + "' for problem " + std::string(to_string(cfg.problem)));
    }
  }

  auto real = [&](const std::string& key, double& out) {
    if (const auto v = get(key)) {
      try {
        out = parse_real(*v);
      } catch (const Error& e) {
        throw config_error(where + "key '" + key + "': " + e.what());
      }
      if (!std::isfinite(out)) throw config_error(where + "key '" + key + "' is not finite");
    }
  };
  auto integer = [&](const std::string& key, auto& out) {
    if (const auto v = get(key)) out = static_cast<std::decay_t<decltype(out)>>(parse_integer(key, *v));
  };
  auto boolean = [&](const std::string& key, bool& out) {
    if (const auto v = get(key)) out = parse_bool(key, *v);
  };

  if (const auto v = get("methods")) {
    cfg.methods.clear();
    for (const auto& item : split_list(*v)) {
      const auto m = parse_method(item);
      if (!m) throw config_error(where + "unknown method '" + item + "'");
      cfg.methods.push_back(*m);
    }
    if (cfg.methods.empty()) throw config_error(where + "empty method list");
  }

  const auto h = get("h");
  if (!h) throw config_error(where + "missing key 'h'");
  std::set<std::string> labels;
  for (const auto& item : split_list(*h)) {
    StepSize s;
    try {
      s.value = parse_real(item);
    } catch (const Error& e) {
      throw config_error(where + "key 'h': " + e.what());
    }
    if (!(s.value > 0.0) || !std::isfinite(s.value)) throw config_error(where + "step size '" + item + "' must be positive");
    s.label = file_label(item);
    if (!labels.insert(s.label).second) throw config_error(where + "duplicate step size '" + item + "'");
    cfg.hs.push_back(s);
  }
  if (cfg.hs.empty()) throw config_error(where + "empty h list");

  if (!get("T")) throw config_error(where + "missing key 'T'");
  real("T", cfg.T);
  if (!(cfg.T > 0.0)) throw config_error(where + "T must be positive");

  if (const auto v = get("channels")) {
    cfg.channels = ChannelFlags{false, false, false};
    for (const auto& item : split_list(*v)) {
      if (item == channel::polarized_energy) cfg.channels.polarized_energy = true;
      else if (item == channel::discrete_energy) cfg.channels.discrete_energy = true;
      else if (item == channel::step_residual) cfg.channels.step_residual = true;
      else throw config_error(where + "unknown channel '" + item + "'");
    }
  }

  if (const auto v = get("seed")) {
    const long s = parse_integer("seed", *v);
    if (s < 0) throw config_error(where + "seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (const auto v = get("output")) {
    if (v->empty()) throw config_error(where + "empty output");
    cfg.output = *v;
  }
  integer("trace_stride", cfg.trace_stride);
  boolean("write_traces", cfg.write_traces);
  integer("repetitions", cfg.repetitions);
  if (const auto v = get("reference")) {
    if (*v == "crk6") cfg.reference = true;
    else if (*v == "none") cfg.reference = false;
    else throw config_error(where + "reference must be 'crk6' or 'none'");
  }
  integer("ref_divisor", cfg.ref_divisor);
  boolean("record_timing", cfg.record_timing);
  boolean("corrupt_gradient", cfg.corrupt_gradient);
  integer("validation_trials", cfg.validation_trials);
  real("fixed_point_tol", cfg.fixed_point.tol);
  integer("max_iter", cfg.fixed_point.max_iter);
  integer("start_substeps", cfg.start_substeps);

  if (cfg.trace_stride < 1) throw config_error(where + "trace_stride must be >= 1");
  if (cfg.repetitions < 1) throw config_error(where + "repetitions must be >= 1");
  if (cfg.ref_divisor < 1) throw config_error(where + "ref_divisor must be >= 1");
  if (cfg.validation_trials < 1) throw config_error(where + "validation_trials must be >= 1");
  if (!(cfg.fixed_point.tol > 0.0)) throw config_error(where + "fixed_point_tol must be positive");
  if (cfg.fixed_point.max_iter < 1) throw config_error(where + "max_iter must be >= 1");
  if (cfg.start_substeps < 1) throw config_error(where + "start_substeps must be >= 1");

  switch (cfg.problem) {
    case ProblemKind::wind:
      real("r", cfg.wind.r);
      real("theta", cfg.wind.theta);
      real("a", cfg.wind.a);
      break;
    case ProblemKind::fpu:
      integer("N", cfg.fpu.N);
      real("L", cfg.fpu.L);
      real("beta", cfg.fpu.beta);
      real("gamma", cfg.fpu.gamma);
      real("m", cfg.fpu.m);
      real("eps", cfg.fpu.eps);
      real("alpha", cfg.fpu_alpha);
      break;
    case ProblemKind::pendulum: break;
  }
  return cfg;
}

}  // namespace detail

/// All experiments of an INI document, in file order.
inline std::vector<ExperimentConfig> parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw config_error(std::string("config: ") + e.what());
  }
  std::vector<ExperimentConfig> out;
  std::set<std::string> outputs;
  for (const auto& [name, sec] : tree) {
    if (sec.empty()) throw config_error("config: key '" + name + "' outside any section");
    out.push_back(detail::parse_section(name, sec));
    if (!outputs.insert(out.back().output).second) {
      throw config_error("config: output '" + out.back().output + "' used by two experiments");
    }
  }
  if (out.empty()) throw config_error("config: no experiments");
  return out;
}

inline std::vector<ExperimentConfig> parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline std::vector<ExperimentConfig> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  return parse_config(in);
}

}  // namespace lieep::harness
