// Command line front end for the experiment harness.
//
//   lieep run --config exp.ini        integrate and write CSV output
//   lieep validate --config exp.ini   structural checks, validation.csv
//   lieep presets list
//   lieep presets emit <name>         print a preset config to stdout
//
// Output goes under $LIEEP_OUTPUT_ROOT (default: the working directory).

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "lieep/harness/config.hpp"
#include "lieep/harness/presets.hpp"
#include "lieep/harness/run.hpp"

namespace h = lieep::harness;

namespace {

std::vector<h::ExperimentConfig> select(std::vector<h::ExperimentConfig> all, const std::vector<std::string>& only) {
  if (only.empty()) return all;
  std::vector<h::ExperimentConfig> out;
  for (const auto& name : only) {
    const auto it = std::find_if(all.begin(), all.end(), [&](const auto& c) { return c.name == name; });
    if (it == all.end()) throw h::config_error("no experiment named '" + name + "'");
    out.push_back(*it);
  }
  return out;
}

int cmd_run(const std::string& path, const std::vector<std::string>& only) {
  const auto configs = select(h::load_config(path), only);
  const auto root = h::output_root();
  bool failed = false;
  for (const auto& cfg : configs) {
    const auto report = h::run_experiment(cfg, root);
    for (const auto& row : report.rows) {
      if (!row.ok()) {
        failed = true;
        fmt::print(stderr, "{}: {} h={} failed: {}\n", cfg.name, lieep::to_string(row.method), row.h.label,
                   row.info.error_message);
      }
    }
    for (const auto& f : report.files) fmt::print("{}\n", f.string());
    for (const auto m : cfg.methods) {
      if (const auto est = report.order_for(m)) {
        fmt::print(stderr, "{}: {} observed order {:.3f}\n", cfg.name, lieep::to_string(m), est->slope);
      }
    }
  }
  return failed ? h::exit_integration : h::exit_ok;
}

int cmd_validate(const std::string& path, const std::vector<std::string>& only) {
  const auto configs = select(h::load_config(path), only);
  const auto root = h::output_root();
  bool passed = true;
  for (const auto& cfg : configs) {
    const auto res = h::validate_experiment(cfg, root);
    for (const auto& row : res.rows) {
      if (!row.passed()) {
        fmt::print(stderr, "{}: FAIL {} = {:.3e} (tolerance {:.1e})\n", cfg.name, row.check, row.value,
                   row.tolerance);
      }
    }
    fmt::print("{}\n", res.file.string());
    passed = passed && res.passed();
  }
  return passed ? h::exit_ok : h::exit_validation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linearly implicit energy-preserving exponential integrators: experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> only;

  auto* run = app.add_subcommand("run", "integrate the experiments of a config file");
  run->add_option("--config", config_path, "INI experiment file")->required();
  run->add_option("--only", only, "restrict to the named sections");

  auto* validate = app.add_subcommand("validate", "check polarizations and scheme properties");
  validate->add_option("--config", config_path, "INI experiment file")->required();
  validate->add_option("--only", only, "restrict to the named sections");

  auto* presets = app.add_subcommand("presets", "shipped experiment configs");
  presets->require_subcommand(1);
  presets->add_subcommand("list", "list preset names");
  auto* emit = presets->add_subcommand("emit", "print a preset config");
  std::string preset_name;
  emit->add_option("name", preset_name, "preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Error& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : h::exit_config;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, only);
    if (validate->parsed()) return cmd_validate(config_path, only);
    if (presets->got_subcommand("list")) {
      for (const auto& p : h::presets()) fmt::print("{:<32} {}\n", p.name, p.description);
      return h::exit_ok;
    }
    if (emit->parsed()) {
      const auto p = h::find_preset(preset_name);
      if (!p) {
        fmt::print(stderr, "unknown preset '{}'\n", preset_name);
        return h::exit_config;
      }
      fmt::print("{}", p->text);
      return h::exit_ok;
    }
  } catch (const lieep::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return e.kind() == lieep::ErrorKind::config ? h::exit_config : h::exit_integration;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return h::exit_integration;
  }
  return h::exit_config;
}
