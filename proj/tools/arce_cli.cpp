// SPDX-License-Identifier: Apache-2.0
//
// arce - angle- and range-constrained localization for multistatic radar
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Command line front end: solve one delay set, run Monte Carlo sweeps, dump
// lower bounds, or dump simulated delays. Exit codes: 0 success, 1 bad
// configuration or usage, 2 numerical failure.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arce/arce.hpp"

namespace {

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string field = text.substr(start, comma - start);
    if (field.empty()) {
      throw arce::ConfigError("delay list: empty field");
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(field, &used);
    } catch (const std::exception&) {
      throw arce::ConfigError("delay list: '" + field + "' is not a number");
    }
    if (used != field.size()) {
      throw arce::ConfigError("delay list: '" + field + "' is not a number");
    }
    values.push_back(v);
    start = comma + 1;
  }
  return values;
}

void print_estimate(const std::string& name, const arce::Estimate& e) {
  std::printf("estimator: %s\n", name.c_str());
  std::printf("  position_m: %.16e %.16e %.16e\n", e.position.x(),
              e.position.y(), e.position.z());
  std::printf("  objective: %.16e\n", e.objective);
  std::printf("  family: %s\n", arce::to_string(e.family));
  if (e.family == arce::CandidateFamily::AzimuthFace ||
      e.family == arce::CandidateFamily::ElevationFace) {
    std::printf("  face: %d\n", e.face);
  }
  if (e.family == arce::CandidateFamily::Corner) {
    std::printf("  corner: (%d, %d)\n", e.face, e.corner);
  }
  if (e.has_multiplier) {
    std::printf("  multiplier: %.16e%s\n", e.multiplier,
                e.certified ? "" : " (uncertified)");
  }
  std::printf("  candidates: %d\n", e.candidate_count);
}

int run_solve(const std::string& config_path, const std::string& delay_text,
              double epsilon_override, int target_index) {
  arce::ScenarioConfig cfg = arce::load_scenario(config_path);
  (void)target_index;
  std::vector<double> delays_s =
      delay_text.empty() ? cfg.delays_s : parse_double_list(delay_text);
  if (delays_s.empty()) {
    throw arce::ConfigError(
        "solve: provide delays via --delays or the scenario's delays_s field");
  }
  const double boresight =
      cfg.boresight_azimuth_deg * arce::detail::kDegToRad;
  const arce::SensorNetwork network =
      arce::detail::beam_frame_network(cfg, boresight);
  if (delays_s.size() != static_cast<std::size_t>(network.size()) + 1) {
    throw arce::ConfigError("solve: need one delay per link (monostatic first)");
  }
  const double eps = epsilon_override > 0.0 ? epsilon_override : cfg.epsilon;
  arce::DelaySet delays;
  delays.delays = delays_s;
  delays.sigmas.assign(delays_s.size(), 0.0);
  const double b0 = arce::kSpeedOfLight * delays.delays[0] / 2.0;
  const arce::RangeBin bin = arce::scenario_range_bin(cfg, b0);
  const arce::LinearModel model =
      arce::build_linear_model(delays, network, bin);
  const arce::BeamCone beam(cfg.beamwidth_az_deg * arce::detail::kDegToRad,
                            cfg.beamwidth_el_deg * arce::detail::kDegToRad);
  std::printf("model:\n");
  std::printf("  b0_m: %.16e\n", model.b0);
  std::printf("  b0_bar_m: %.16e\n", model.b0_bar);
  std::printf("  range_bin_m: [%.16e, %.16e]\n", model.bin.lower,
              model.bin.upper);
  for (const auto& name : cfg.estimators) {
    print_estimate(name, arce::detail::solve_named(name, model, beam, eps));
  }
  return 0;
}

int run_sweep_cmd(const std::string& config_path, const std::string& out_path,
                  int trials_override, std::int64_t seed_override,
                  int target_index, const std::string& plot_prefix) {
  arce::ScenarioConfig cfg = arce::load_scenario(config_path);
  if (trials_override > 0) cfg.trials = trials_override;
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
  const std::vector<arce::RmseRecord> records =
      arce::run_sweep(cfg, target_index);
  arce::emit_csv(records, out_path);
  if (!plot_prefix.empty()) arce::emit_plot_data(records, plot_prefix);
  return 0;
}

int run_crlb_cmd(const std::string& config_path, const std::string& out_path,
                 int target_index) {
  const arce::ScenarioConfig cfg = arce::load_scenario(config_path);
  arce::emit_csv(arce::run_crlb(cfg, target_index), out_path);
  return 0;
}

int run_simulate_cmd(const std::string& config_path, std::int64_t seed,
                     const std::string& out_path, int target_index) {
  arce::ScenarioConfig cfg = arce::load_scenario(config_path);
  cfg.seed = static_cast<std::uint64_t>(seed);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw arce::ConfigError("simulate: cannot write '" + out_path + "'");
  }
  arce::write_delay_csv(cfg, target_index, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained localization for monostatic/bistatic radar networks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string delay_text;
  std::string plot_prefix;
  double epsilon_override = -1.0;
  int trials_override = -1;
  std::int64_t seed_override = -1;
  int target_index = 0;

  CLI::App* solve = app.add_subcommand("solve", "Estimate from one delay set");
  solve->add_option("--config", config_path, "Scenario file")->required();
  solve->add_option("--epsilon", epsilon_override,
                    "Multiplier resolution override");
  solve->add_option("--delays", delay_text,
                    "Comma separated delays in seconds, monostatic first");
  solve->add_option("--target", target_index, "Target index (unused by solve)");

  CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo RMSE sweep");
  sweep->add_option("--config", config_path, "Scenario file")->required();
  sweep->add_option("--out", out_path, "Output CSV path")->required();
  sweep->add_option("--trials", trials_override, "Trial count override");
  sweep->add_option("--seed", seed_override, "Seed override");
  sweep->add_option("--target", target_index, "Target index");
  sweep->add_option("--plot-data", plot_prefix,
                    "Also write <prefix><estimator>.dat series");

  CLI::App* crlb = app.add_subcommand("crlb", "Lower bound sweep");
  crlb->add_option("--config", config_path, "Scenario file")->required();
  crlb->add_option("--out", out_path, "Output CSV path")->required();
  crlb->add_option("--target", target_index, "Target index");

  CLI::App* simulate = app.add_subcommand("simulate", "Dump simulated delays");
  simulate->add_option("--config", config_path, "Scenario file")->required();
  simulate->add_option("--seed", seed_override, "Seed")->required();
  simulate->add_option("--out", out_path, "Output CSV path")->required();
  simulate->add_option("--target", target_index, "Target index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (solve->parsed()) {
      return run_solve(config_path, delay_text, epsilon_override, target_index);
    }
    if (sweep->parsed()) {
      return run_sweep_cmd(config_path, out_path, trials_override,
                           seed_override, target_index, plot_prefix);
    }
    if (crlb->parsed()) {
      return run_crlb_cmd(config_path, out_path, target_index);
    }
    if (simulate->parsed()) {
      return run_simulate_cmd(config_path, seed_override, out_path,
                              target_index);
    }
  } catch (const arce::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const arce::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
