#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "dynamics.hpp"
#include "ekf.hpp"
#include "geo.hpp"
#include "sensors.hpp"
#include "triallog.hpp"

namespace usv::config {

struct TrialSettings {
  log::Side side = log::Side::kStarboard;
  double steady_hold = 60.0;  // s; protocol requires >= 60
  double total_heading_change = 3.0 * M_PI;  // rad
  double turn_steer = 0.5;    // normalized differential
  double max_duration = 600.0;  // s, whole trial
  double dt = 0.02;           // s
  double start_x = 0.0, start_y = 0.0, start_yaw = 0.0;
};

struct Config {
  dynamics::VesselParams vessel;
  dynamics::Environment env;
  sensors::SensorNoiseConfig sensors;
  ekf::ProcessConfig ekf;
  TrialSettings trial;
  geo::GeoPoint origin{53.0, -1.6, 0.0};

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

Config default_config();

// Partial JSON: any omitted field keeps its default. Unknown keys rejected.
Config config_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json config_to_json(const Config& cfg);

Config load_config(const std::string& path);

}  // namespace usv::config
