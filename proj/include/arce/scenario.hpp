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
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "arce/geometry.hpp"
#include "arce/measurement.hpp"
#include "arce/types.hpp"

namespace arce {

/// Simulation target in beam-aligned spherical coordinates.
struct TargetSpec {
  double range_km = 0.0;
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;
};

/// What a sweep iterates over: monostatic reference SNR, target elevation,
/// or beam pointing azimuth.
enum class SweepKind { Snr, Elevation, Pointing };

/// Full description of a simulation study. Distances are in kilometers and
/// angles in degrees on disk; accessors convert to SI.
struct ScenarioConfig {
  std::string name;
  std::vector<Vec3> receivers_km;
  std::vector<Vec3> additional_receivers_km;
  bool use_additional_receivers = false;
  double beamwidth_az_deg = 0.0;
  double beamwidth_el_deg = 0.0;
  double boresight_azimuth_deg = 0.0;
  double bandwidth_hz = 0.0;
  std::vector<double> snr0_db;
  std::vector<double> loss_db;  ///< Per link, monostatic first.
  Vec3 nominal_point_km = Vec3::Zero();
  std::vector<TargetSpec> targets;
  int trials = 1;
  std::uint64_t seed = 0;
  double epsilon = 1e-9;
  std::vector<std::string> estimators;
  SweepKind sweep_kind = SweepKind::Snr;
  std::vector<double> elevation_sweep_deg;
  std::vector<double> pointing_sweep_deg;
  double range_bin_half_width_m = -1.0;  ///< Negative: default c / (4 B).
  bool noise_free = false;
  std::vector<double> delays_s;  ///< Optional measured delays for solving.
};

namespace detail {

constexpr double kDegToRad = 0.017453292519943295;

inline const nlohmann::ordered_json& require_field(const nlohmann::ordered_json& j,
                                                   const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigError(std::string("scenario: missing field '") + key + "'");
  }
  return *it;
}

inline Vec3 parse_vec3(const nlohmann::ordered_json& j, const char* key) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(std::string("scenario: '") + key +
                      "' entries must be [x, y, z] triples");
  }
  Vec3 v;
  for (int k = 0; k < 3; ++k) {
    if (!j[k].is_number()) {
      throw ConfigError(std::string("scenario: '") + key + "' must be numeric");
    }
    v(k) = j[k].get<double>();
  }
  return v;
}

}  // namespace detail

inline const char* to_string(SweepKind k) {
  switch (k) {
    case SweepKind::Snr: return "snr";
    case SweepKind::Elevation: return "elevation";
    case SweepKind::Pointing: return "pointing";
  }
  return "unknown";
}

inline SweepKind sweep_kind_from_string(const std::string& s) {
  if (s == "snr") return SweepKind::Snr;
  if (s == "elevation") return SweepKind::Elevation;
  if (s == "pointing") return SweepKind::Pointing;
  throw ConfigError("scenario: unknown sweep_kind '" + s + "'");
}

/// Semantic checks beyond shape: positivity, angle bounds against the beam,
/// per-link table sizes, sweep-specific requirements.
inline void validate_scenario(const ScenarioConfig& c) {
  if (c.receivers_km.empty()) {
    throw ConfigError("scenario: at least one receiver is required");
  }
  const std::size_t total_receivers =
      c.receivers_km.size() + c.additional_receivers_km.size();
  if (c.loss_db.size() != total_receivers + 1) {
    throw ConfigError("scenario: loss_db must list the monostatic link plus every receiver");
  }
  if (!(c.beamwidth_az_deg >= 0.0 && c.beamwidth_az_deg < 90.0) ||
      !(c.beamwidth_el_deg >= 0.0 && c.beamwidth_el_deg < 90.0)) {
    throw ConfigError("scenario: beam half-widths must lie in [0, 90) degrees");
  }
  if (!std::isfinite(c.boresight_azimuth_deg)) {
    throw ConfigError("scenario: boresight azimuth must be finite");
  }
  if (!(c.bandwidth_hz > 0.0)) {
    throw ConfigError("scenario: bandwidth_hz must be positive");
  }
  if (c.targets.empty()) {
    throw ConfigError("scenario: at least one target is required");
  }
  for (const auto& t : c.targets) {
    if (!(t.range_km > 0.0)) {
      throw ConfigError("scenario: target range must be positive");
    }
    if (std::abs(t.azimuth_deg) > c.beamwidth_az_deg ||
        std::abs(t.elevation_deg) > c.beamwidth_el_deg) {
      throw ConfigError("scenario: target angles must lie within the beam half-widths");
    }
  }
  if (c.trials < 1) {
    throw ConfigError("scenario: trials must be at least 1");
  }
  if (!(c.epsilon > 0.0)) {
    throw ConfigError("scenario: epsilon must be positive");
  }
  if (c.estimators.empty()) {
    throw ConfigError("scenario: at least one estimator is required");
  }
  for (const auto& e : c.estimators) {
    if (e != "arce" && e != "roce" && e != "u_tdoa") {
      throw ConfigError("scenario: unknown estimator '" + e + "'");
    }
  }
  if (c.nominal_point_km.norm() == 0.0) {
    throw ConfigError("scenario: nominal_point_km must be nonzero");
  }
  switch (c.sweep_kind) {
    case SweepKind::Snr:
      if (c.snr0_db.empty()) {
        throw ConfigError("scenario: snr sweep needs snr0_db values");
      }
      break;
    case SweepKind::Elevation:
      if (c.elevation_sweep_deg.empty()) {
        throw ConfigError("scenario: elevation sweep needs elevation_sweep_deg");
      }
      if (c.snr0_db.size() != 1) {
        throw ConfigError("scenario: elevation sweep needs exactly one snr0_db value");
      }
      for (double v : c.elevation_sweep_deg) {
        if (std::abs(v) > c.beamwidth_el_deg) {
          throw ConfigError("scenario: elevation sweep values must lie within the beam");
        }
      }
      break;
    case SweepKind::Pointing:
      if (c.pointing_sweep_deg.empty()) {
        throw ConfigError("scenario: pointing sweep needs pointing_sweep_deg");
      }
      if (c.snr0_db.size() != 1) {
        throw ConfigError("scenario: pointing sweep needs exactly one snr0_db value");
      }
      break;
  }
  if (!c.delays_s.empty() &&
      c.delays_s.size() != c.receivers_km.size() +
                               (c.use_additional_receivers
                                    ? c.additional_receivers_km.size()
                                    : 0) + 1) {
    throw ConfigError("scenario: delays_s must have one entry per active link");
  }
}

inline ScenarioConfig parse_scenario(const nlohmann::ordered_json& j) {
  using detail::parse_vec3;
  using detail::require_field;
  ScenarioConfig c;
  if (j.contains("name")) c.name = j.at("name").get<std::string>();
  for (const auto& r : require_field(j, "receivers_km")) {
    c.receivers_km.push_back(parse_vec3(r, "receivers_km"));
  }
  if (j.contains("additional_receivers_km")) {
    for (const auto& r : j.at("additional_receivers_km")) {
      c.additional_receivers_km.push_back(parse_vec3(r, "additional_receivers_km"));
    }
  }
  if (j.contains("use_additional_receivers")) {
    c.use_additional_receivers = j.at("use_additional_receivers").get<bool>();
  }
  c.beamwidth_az_deg = require_field(j, "beamwidth_az_deg").get<double>();
  c.beamwidth_el_deg = require_field(j, "beamwidth_el_deg").get<double>();
  if (j.contains("boresight_azimuth_deg")) {
    c.boresight_azimuth_deg = j.at("boresight_azimuth_deg").get<double>();
  }
  c.bandwidth_hz = require_field(j, "bandwidth_hz").get<double>();
  for (const auto& v : require_field(j, "snr0_db")) {
    c.snr0_db.push_back(v.get<double>());
  }
  for (const auto& v : require_field(j, "loss_db")) {
    c.loss_db.push_back(v.get<double>());
  }
  c.nominal_point_km = parse_vec3(require_field(j, "nominal_point_km"), "nominal_point_km");
  for (const auto& t : require_field(j, "targets")) {
    TargetSpec spec;
    spec.range_km = require_field(t, "range_km").get<double>();
    spec.azimuth_deg = require_field(t, "azimuth_deg").get<double>();
    spec.elevation_deg = require_field(t, "elevation_deg").get<double>();
    c.targets.push_back(spec);
  }
  c.trials = require_field(j, "trials").get<int>();
  c.seed = require_field(j, "seed").get<std::uint64_t>();
  if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<double>();
  for (const auto& e : require_field(j, "estimators")) {
    c.estimators.push_back(e.get<std::string>());
  }
  c.sweep_kind = sweep_kind_from_string(require_field(j, "sweep_kind").get<std::string>());
  if (j.contains("elevation_sweep_deg")) {
    for (const auto& v : j.at("elevation_sweep_deg")) {
      c.elevation_sweep_deg.push_back(v.get<double>());
    }
  }
  if (j.contains("pointing_sweep_deg")) {
    for (const auto& v : j.at("pointing_sweep_deg")) {
      c.pointing_sweep_deg.push_back(v.get<double>());
    }
  }
  if (j.contains("range_bin_half_width_m")) {
    c.range_bin_half_width_m = j.at("range_bin_half_width_m").get<double>();
  }
  if (j.contains("noise_free")) c.noise_free = j.at("noise_free").get<bool>();
  if (j.contains("delays_s")) {
    for (const auto& v : j.at("delays_s")) c.delays_s.push_back(v.get<double>());
  }
  validate_scenario(c);
  return c;
}

inline ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("scenario: cannot open '" + path + "'");
  }
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError("scenario: '" + path + "' is not valid JSON: " + ex.what());
  }
  try {
    return parse_scenario(j);
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError("scenario: '" + path + "' has a malformed field: " + ex.what());
  }
}

inline nlohmann::ordered_json scenario_to_json(const ScenarioConfig& c) {
  nlohmann::ordered_json j;
  auto vec3_to_json = [](const Vec3& v) {
    return nlohmann::ordered_json::array({v.x(), v.y(), v.z()});
  };
  if (!c.name.empty()) j["name"] = c.name;
  j["receivers_km"] = nlohmann::ordered_json::array();
  for (const auto& r : c.receivers_km) j["receivers_km"].push_back(vec3_to_json(r));
  if (!c.additional_receivers_km.empty()) {
    j["additional_receivers_km"] = nlohmann::ordered_json::array();
    for (const auto& r : c.additional_receivers_km) {
      j["additional_receivers_km"].push_back(vec3_to_json(r));
    }
  }
  j["use_additional_receivers"] = c.use_additional_receivers;
  j["beamwidth_az_deg"] = c.beamwidth_az_deg;
  j["beamwidth_el_deg"] = c.beamwidth_el_deg;
  j["boresight_azimuth_deg"] = c.boresight_azimuth_deg;
  j["bandwidth_hz"] = c.bandwidth_hz;
  j["snr0_db"] = c.snr0_db;
  j["loss_db"] = c.loss_db;
  j["nominal_point_km"] = vec3_to_json(c.nominal_point_km);
  j["targets"] = nlohmann::ordered_json::array();
  for (const auto& t : c.targets) {
    nlohmann::ordered_json tj;
    tj["range_km"] = t.range_km;
    tj["azimuth_deg"] = t.azimuth_deg;
    tj["elevation_deg"] = t.elevation_deg;
    j["targets"].push_back(tj);
  }
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["epsilon"] = c.epsilon;
  j["estimators"] = c.estimators;
  j["sweep_kind"] = to_string(c.sweep_kind);
  if (!c.elevation_sweep_deg.empty()) j["elevation_sweep_deg"] = c.elevation_sweep_deg;
  if (!c.pointing_sweep_deg.empty()) j["pointing_sweep_deg"] = c.pointing_sweep_deg;
  if (c.range_bin_half_width_m >= 0.0) {
    j["range_bin_half_width_m"] = c.range_bin_half_width_m;
  }
  j["noise_free"] = c.noise_free;
  if (!c.delays_s.empty()) j["delays_s"] = c.delays_s;
  return j;
}

inline void save_scenario(const ScenarioConfig& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("scenario: cannot write '" + path + "'");
  }
  out << scenario_to_json(c).dump(2) << "\n";
}

inline bool operator==(const TargetSpec& a, const TargetSpec& b) {
  return a.range_km == b.range_km && a.azimuth_deg == b.azimuth_deg &&
         a.elevation_deg == b.elevation_deg;
}

inline bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  auto vecs_equal = [](const std::vector<Vec3>& x, const std::vector<Vec3>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] != y[i]) return false;
    }
    return true;
  };
  return a.name == b.name && vecs_equal(a.receivers_km, b.receivers_km) &&
         vecs_equal(a.additional_receivers_km, b.additional_receivers_km) &&
         a.use_additional_receivers == b.use_additional_receivers &&
         a.beamwidth_az_deg == b.beamwidth_az_deg &&
         a.beamwidth_el_deg == b.beamwidth_el_deg &&
         a.boresight_azimuth_deg == b.boresight_azimuth_deg &&
         a.bandwidth_hz == b.bandwidth_hz && a.snr0_db == b.snr0_db &&
         a.loss_db == b.loss_db && a.nominal_point_km == b.nominal_point_km &&
         a.targets == b.targets && a.trials == b.trials && a.seed == b.seed &&
         a.epsilon == b.epsilon && a.estimators == b.estimators &&
         a.sweep_kind == b.sweep_kind &&
         a.elevation_sweep_deg == b.elevation_sweep_deg &&
         a.pointing_sweep_deg == b.pointing_sweep_deg &&
         a.range_bin_half_width_m == b.range_bin_half_width_m &&
         a.noise_free == b.noise_free && a.delays_s == b.delays_s;
}

// ============================================================================
// Derived quantities
// ============================================================================

/// Active receiver set in meters: the base list plus, when enabled, the
/// additional receivers appended in order.
inline SensorNetwork active_network(const ScenarioConfig& c) {
  std::vector<Vec3> recv;
  for (const auto& r : c.receivers_km) recv.push_back(1000.0 * r);
  if (c.use_additional_receivers) {
    for (const auto& r : c.additional_receivers_km) recv.push_back(1000.0 * r);
  }
  return SensorNetwork(std::move(recv));
}

inline BeamCone beam_cone(const ScenarioConfig& c) {
  return BeamCone(c.beamwidth_az_deg * detail::kDegToRad,
                  c.beamwidth_el_deg * detail::kDegToRad,
                  c.boresight_azimuth_deg * detail::kDegToRad);
}

/// Target position in meters, in the beam frame (boresight along +x).
inline Vec3 target_position_m(const TargetSpec& t) {
  return place_target(1000.0 * t.range_km, t.azimuth_deg * detail::kDegToRad,
                      t.elevation_deg * detail::kDegToRad);
}

/// SNR budget for the active network at the given reference SNR in dB.
/// Losses take the first 1 + N entries of loss_db, so enabling additional
/// receivers keeps the base links' losses unchanged.
inline SnrScenario snr_scenario(const ScenarioConfig& c, double snr0_db) {
  SnrScenario s;
  s.snr0_ref = std::pow(10.0, snr0_db / 10.0);
  s.nominal_point = 1000.0 * c.nominal_point_km;
  const std::size_t links =
      1 + c.receivers_km.size() +
      (c.use_additional_receivers ? c.additional_receivers_km.size() : 0);
  s.loss.reserve(links);
  for (std::size_t i = 0; i < links; ++i) {
    s.loss.push_back(std::pow(10.0, c.loss_db[i] / 10.0));
  }
  return s;
}

/// Range bin around a measured monostatic range: the configured half-width
/// when set, otherwise c / (4 B).
inline RangeBin scenario_range_bin(const ScenarioConfig& c, double b0) {
  if (c.range_bin_half_width_m >= 0.0) {
    RangeBin bin;
    bin.lower = std::max(0.0, b0 - c.range_bin_half_width_m);
    bin.upper = b0 + c.range_bin_half_width_m;
    if (!(bin.upper > 0.0)) {
      throw NumericalError("scenario_range_bin: measured range is too negative");
    }
    return bin;
  }
  return default_range_bin(b0, c.bandwidth_hz);
}

}  // namespace arce
