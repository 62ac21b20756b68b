// SPDX-License-Identifier: Apache-2.0
//
// arce - angle- and range-constrained localization for multistatic radar
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "arce/baselines.hpp"
#include "arce/crlb.hpp"
#include "arce/estimator.hpp"
#include "arce/scenario.hpp"
#include "arce/types.hpp"

namespace arce {

/// One row of sweep output: RMS error of one estimator at one sweep point,
/// with the matching lower bound and bookkeeping counts.
struct RmseRecord {
  double sweep_value = 0.0;
  std::string estimator;
  double rmse_m = 0.0;
  double rcrlb_m = 0.0;
  int trials = 0;
  int failures = 0;
};

namespace detail {

/// Geometry of one sweep point, expressed in the beam frame (boresight along
/// +x) where the estimator's bounds are axis-aligned. Errors and bounds are
/// rotation invariant, so the whole trial loop runs in this frame.
struct SweepPoint {
  double sweep_value = 0.0;
  double snr0_db = 0.0;
  TargetSpec target;
  double pointing_rad = 0.0;
};

inline std::vector<SweepPoint> sweep_points(const ScenarioConfig& c,
                                            int target_index) {
  if (target_index < 0 ||
      target_index >= static_cast<int>(c.targets.size())) {
    throw ConfigError("sweep: target index out of range");
  }
  const TargetSpec& base = c.targets[target_index];
  const double boresight = c.boresight_azimuth_deg * kDegToRad;
  std::vector<SweepPoint> points;
  switch (c.sweep_kind) {
    case SweepKind::Snr:
      for (double db : c.snr0_db) {
        points.push_back({db, db, base, boresight});
      }
      break;
    case SweepKind::Elevation:
      for (double el : c.elevation_sweep_deg) {
        TargetSpec t = base;
        t.elevation_deg = el;
        points.push_back({el, c.snr0_db[0], t, boresight});
      }
      break;
    case SweepKind::Pointing:
      for (double psi : c.pointing_sweep_deg) {
        points.push_back({psi, c.snr0_db[0], base, boresight + psi * kDegToRad});
      }
      break;
  }
  return points;
}

/// Active receivers rotated into the beam frame. A zero pointing angle is a
/// strict no-op so unrotated studies stay bit-exact.
inline SensorNetwork beam_frame_network(const ScenarioConfig& c,
                                        double pointing_rad) {
  SensorNetwork world = active_network(c);
  if (pointing_rad == 0.0) return world;
  std::vector<Vec3> recv;
  recv.reserve(world.receivers().size());
  for (const auto& r : world.receivers()) {
    recv.push_back(rotate_z(r, -pointing_rad));
  }
  return SensorNetwork(std::move(recv));
}

inline Estimate solve_named(const std::string& name, const LinearModel& model,
                            const BeamCone& beam, double eps) {
  if (name == "arce") return arce_solve(model, beam, eps);
  if (name == "u_tdoa") return u_tdoa_estimate(model);
  if (name == "roce") return roce_estimate(model, eps);
  throw ConfigError("sweep: unknown estimator '" + name + "'");
}

}  // namespace detail

/// Monte Carlo RMS error of every configured estimator across the sweep of
/// the scenario, for the target at `target_index`. Each (sweep point, trial)
/// pair draws its noise from a seed derived from the scenario seed and the
/// two indices, so every estimator within a trial sees the same delays, runs
/// are reproducible, and appending receivers reuses the noise of shared
/// links. A trial whose estimator throws counts as a failure for that
/// estimator and is excluded from its RMS average.
inline std::vector<RmseRecord> run_sweep(const ScenarioConfig& c,
                                         int target_index = 0) {
  validate_scenario(c);
  const std::vector<detail::SweepPoint> points =
      detail::sweep_points(c, target_index);
  const BeamCone beam(c.beamwidth_az_deg * detail::kDegToRad,
                      c.beamwidth_el_deg * detail::kDegToRad);
  std::vector<RmseRecord> records;
  for (std::size_t s = 0; s < points.size(); ++s) {
    const auto& pt = points[s];
    const SensorNetwork network = detail::beam_frame_network(c, pt.pointing_rad);
    const Vec3 target = target_position_m(pt.target);

    double rcrlb_m = 0.0;
    NoiseModel noise;
    if (c.noise_free) {
      noise.bandwidth = c.bandwidth_hz;
      noise.sigma.assign(network.size() + 1, 0.0);
    } else {
      noise = noise_for_target(snr_scenario(c, pt.snr0_db), target, network,
                               c.bandwidth_hz);
      rcrlb_m = rcrlb(fisher_information(target, network, noise.sigma));
    }

    std::vector<double> sum_sq(c.estimators.size(), 0.0);
    std::vector<int> failures(c.estimators.size(), 0);
    for (int t = 0; t < c.trials; ++t) {
      const std::uint64_t seed = derive_seed(c.seed, s, t);
      const DelaySet delays = c.noise_free
                                  ? exact_delays(target, network)
                                  : simulate_delays(target, network, noise, seed);
      const double b0 = kSpeedOfLight * delays.delays[0] / 2.0;
      const LinearModel model =
          build_linear_model(delays, network, scenario_range_bin(c, b0));
      for (std::size_t e = 0; e < c.estimators.size(); ++e) {
        try {
          const Estimate est =
              detail::solve_named(c.estimators[e], model, beam, c.epsilon);
          sum_sq[e] += (est.position - target).squaredNorm();
        } catch (const std::exception&) {
          ++failures[e];
        }
      }
    }
    for (std::size_t e = 0; e < c.estimators.size(); ++e) {
      RmseRecord rec;
      rec.sweep_value = pt.sweep_value;
      rec.estimator = c.estimators[e];
      const int ok = c.trials - failures[e];
      rec.rmse_m = ok > 0 ? std::sqrt(sum_sq[e] / ok)
                          : std::numeric_limits<double>::quiet_NaN();
      rec.rcrlb_m = rcrlb_m;
      rec.trials = c.trials;
      rec.failures = failures[e];
      records.push_back(rec);
    }
  }
  return records;
}

/// Lower bound only, one record per sweep point with estimator "rcrlb".
/// The rmse_m column mirrors the bound so the file stands alone.
inline std::vector<RmseRecord> run_crlb(const ScenarioConfig& c,
                                        int target_index = 0) {
  validate_scenario(c);
  if (c.noise_free) {
    throw ConfigError("crlb: noise-free scenarios have no finite bound");
  }
  const std::vector<detail::SweepPoint> points =
      detail::sweep_points(c, target_index);
  std::vector<RmseRecord> records;
  for (const auto& pt : points) {
    const SensorNetwork network = detail::beam_frame_network(c, pt.pointing_rad);
    const Vec3 target = target_position_m(pt.target);
    const NoiseModel noise = noise_for_target(snr_scenario(c, pt.snr0_db),
                                              target, network, c.bandwidth_hz);
    RmseRecord rec;
    rec.sweep_value = pt.sweep_value;
    rec.estimator = "rcrlb";
    rec.rcrlb_m = rcrlb(fisher_information(target, network, noise.sigma));
    rec.rmse_m = rec.rcrlb_m;
    rec.trials = 0;
    rec.failures = 0;
    records.push_back(rec);
  }
  return records;
}

// ============================================================================
// CSV
// ============================================================================

inline constexpr const char* kRmseCsvHeader =
    "sweep_value,estimator,rmse_m,rcrlb_m,trials,failures";

inline void write_csv(const std::vector<RmseRecord>& records, std::ostream& os) {
  os << kRmseCsvHeader << "\n";
  char buf[256];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%.16e,%s,%.16e,%.16e,%d,%d\n",
                  r.sweep_value, r.estimator.c_str(), r.rmse_m, r.rcrlb_m,
                  r.trials, r.failures);
    os << buf;
  }
}

inline void emit_csv(const std::vector<RmseRecord>& records,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("csv: cannot write '" + path + "'");
  }
  write_csv(records, out);
}

inline std::vector<RmseRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kRmseCsvHeader) {
    throw ConfigError("csv: missing or unexpected header");
  }
  std::vector<RmseRecord> records;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t pos = 0; pos <= line.size(); ++pos) {
      if (pos == line.size() || line[pos] == ',') {
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
      }
    }
    if (fields.size() != 6) {
      throw ConfigError("csv: expected 6 fields per row");
    }
    RmseRecord r;
    r.sweep_value = std::strtod(fields[0].c_str(), nullptr);
    r.estimator = fields[1];
    r.rmse_m = std::strtod(fields[2].c_str(), nullptr);
    r.rcrlb_m = std::strtod(fields[3].c_str(), nullptr);
    r.trials = std::atoi(fields[4].c_str());
    r.failures = std::atoi(fields[5].c_str());
    records.push_back(r);
  }
  return records;
}

inline std::vector<RmseRecord> load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("csv: cannot open '" + path + "'");
  }
  return read_csv(in);
}

/// Two-column "sweep_value rmse_m" file per estimator, for plotting tools
/// that want one series per file. Files are named <prefix><estimator>.dat.
inline void emit_plot_data(const std::vector<RmseRecord>& records,
                           const std::string& prefix) {
  std::vector<std::string> names;
  for (const auto& r : records) {
    bool seen = false;
    for (const auto& n : names) seen = seen || n == r.estimator;
    if (!seen) names.push_back(r.estimator);
  }
  for (const auto& name : names) {
    std::ofstream out(prefix + name + ".dat", std::ios::binary);
    if (!out) {
      throw ConfigError("plot data: cannot write '" + prefix + name + ".dat'");
    }
    char buf[128];
    for (const auto& r : records) {
      if (r.estimator != name) continue;
      std::snprintf(buf, sizeof buf, "%.16e %.16e\n", r.sweep_value, r.rmse_m);
      out << buf;
    }
  }
}

// ============================================================================
// Delay dumps
// ============================================================================

inline constexpr const char* kDelayCsvHeader = "trial,link,tau_s,sigma_s";

/// Simulated delay sets for the first sweep point of the scenario, one row
/// per (trial, link), drawn exactly as run_sweep would draw them.
inline void write_delay_csv(const ScenarioConfig& c, int target_index,
                            std::ostream& os) {
  validate_scenario(c);
  const std::vector<detail::SweepPoint> points =
      detail::sweep_points(c, target_index);
  const auto& pt = points.front();
  const SensorNetwork network = detail::beam_frame_network(c, pt.pointing_rad);
  const Vec3 target = target_position_m(pt.target);
  NoiseModel noise;
  if (c.noise_free) {
    noise.bandwidth = c.bandwidth_hz;
    noise.sigma.assign(network.size() + 1, 0.0);
  } else {
    noise = noise_for_target(snr_scenario(c, pt.snr0_db), target, network,
                             c.bandwidth_hz);
  }
  os << kDelayCsvHeader << "\n";
  char buf[128];
  for (int t = 0; t < c.trials; ++t) {
    const DelaySet delays = c.noise_free
                                ? exact_delays(target, network)
                                : simulate_delays(target, network, noise,
                                                  derive_seed(c.seed, 0, t));
    for (int i = 0; i <= network.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.16e,%.16e\n", t, i,
                    delays.delays[i], delays.sigmas[i]);
      os << buf;
    }
  }
}

}  // namespace arce
