#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace usv::log {

enum class Side { kPort, kStarboard };

std::string to_string(Side side);
Side side_from_string(const std::string& s);  // throws on unknown value

struct TruthSample {
  double x = 0.0, y = 0.0, yaw = 0.0;
  double u = 0.0, v = 0.0, r = 0.0;
};

struct EstimateSample {
  // [x y z roll pitch yaw u v w p q r]
  std::array<double, 12> state{};
  std::array<double, 12> p_diag{};
};

struct GpsSample {
  double lat = 0.0, lon = 0.0, alt = 0.0;
  double std_dev = 0.0;
};

struct ImuSample {
  double roll = 0.0, pitch = 0.0, yaw = 0.0;
  double p = 0.0, q = 0.0, r = 0.0;
};

struct CommandSample {
  double left = 0.0, right = 0.0;
};

struct LogRecord {
  double t = 0.0;
  std::optional<TruthSample> truth;
  std::optional<EstimateSample> est;
  std::optional<GpsSample> gps;
  std::optional<ImuSample> imu;
  CommandSample cmd;
  // Unknown keys from ingested files, preserved on round-trip.
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

struct TrialMetadata {
  std::string schema_version = "1";
  double vessel_length = 0.72;  // m
  Side side = Side::kStarboard;
  long execute_index = -1;      // -1: no execute point recorded
  double approach_speed = 0.0;  // m/s, from calibration
  std::uint64_t seed = 0;
  nlohmann::ordered_json config_snapshot = nlohmann::ordered_json::object();
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

struct TrialLog {
  TrialMetadata metadata;
  std::vector<LogRecord> samples;

  // Timestamps strictly increasing, execute_index in range (or -1).
  // Throws std::invalid_argument with a description when violated.
  void validate() const;
};

}  // namespace usv::log
