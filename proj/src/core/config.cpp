#include "config.hpp"

#include <fstream>
#include <stdexcept>

namespace usv::config {

namespace {

using Json = nlohmann::ordered_json;

void check_keys(const Json& j, std::initializer_list<const char*> allowed,
                const std::string& section) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) { ok = true; break; }
    if (!ok)
      throw std::invalid_argument("config: unknown key '" + key + "' in " + section);
  }
}

void get(const Json& j, const char* key, double& out) {
  if (j.contains(key)) out = j.at(key).get<double>();
}
void get(const Json& j, const char* key, std::uint64_t& out) {
  if (j.contains(key)) out = j.at(key).get<std::uint64_t>();
}
void get(const Json& j, const char* key, bool& out) {
  if (j.contains(key)) out = j.at(key).get<bool>();
}

void diag_from_json(const Json& j, const char* key, ekf::StateMatrix& out) {
  if (!j.contains(key)) return;
  const auto v = j.at(key).get<std::vector<double>>();
  if (v.size() != ekf::kStateDim)
    throw std::invalid_argument(std::string("config: ") + key + " must have 12 entries");
  ekf::StateVector d;
  for (int i = 0; i < ekf::kStateDim; ++i) d(i) = v[i];
  out = d.asDiagonal();
}

Json diag_to_json(const ekf::StateMatrix& m) {
  Json arr = Json::array();
  for (int i = 0; i < ekf::kStateDim; ++i) arr.push_back(m(i, i));
  return arr;
}

}  // namespace

void Config::validate() const {
  if (!vessel.valid()) throw std::invalid_argument("config: invalid vessel parameters");
  if (!env.valid()) throw std::invalid_argument("config: invalid environment");
  if (!sensors.valid()) throw std::invalid_argument("config: invalid sensor config");
  if (!origin.valid()) throw std::invalid_argument("config: invalid origin");
  if (trial.steady_hold < 60.0)
    throw std::invalid_argument("config: trial.steady_hold must be >= 60 s");
  if (!(trial.total_heading_change > 0.0))
    throw std::invalid_argument("config: trial.total_heading_change must be > 0");
  if (!(trial.dt > 0.0 && trial.dt <= 0.1))
    throw std::invalid_argument("config: trial.dt must be in (0, 0.1]");
  if (!(trial.max_duration > trial.steady_hold))
    throw std::invalid_argument("config: trial.max_duration too short");
  if (!(std::abs(trial.turn_steer) <= 1.0 && trial.turn_steer != 0.0))
    throw std::invalid_argument("config: trial.turn_steer must be in [-1, 1], nonzero");
}

Config default_config() { return Config{}; }

Config config_from_json(const Json& j) {
  Config cfg;
  check_keys(j, {"vessel", "environment", "sensors", "ekf", "trial", "origin"}, "root");

  if (j.contains("vessel")) {
    const auto& v = j.at("vessel");
    check_keys(v,
               {"length", "beam", "mass", "yaw_inertia", "thruster_halfspan",
                "max_thrust", "deadband", "reverse_thrust_factor", "drag_surge_lin",
                "drag_surge_quad", "drag_sway_lin", "drag_sway_quad", "drag_yaw_lin",
                "drag_yaw_quad"},
               "vessel");
    auto& p = cfg.vessel;
    get(v, "length", p.length);
    get(v, "beam", p.beam);
    get(v, "mass", p.mass);
    get(v, "yaw_inertia", p.yaw_inertia);
    get(v, "thruster_halfspan", p.thruster_halfspan);
    get(v, "max_thrust", p.max_thrust);
    get(v, "deadband", p.deadband);
    get(v, "reverse_thrust_factor", p.reverse_thrust_factor);
    get(v, "drag_surge_lin", p.drag_surge_lin);
    get(v, "drag_surge_quad", p.drag_surge_quad);
    get(v, "drag_sway_lin", p.drag_sway_lin);
    get(v, "drag_sway_quad", p.drag_sway_quad);
    get(v, "drag_yaw_lin", p.drag_yaw_lin);
    get(v, "drag_yaw_quad", p.drag_yaw_quad);
  }

  if (j.contains("environment")) {
    const auto& e = j.at("environment");
    check_keys(e,
               {"current_east", "current_north", "disturbance_force_std",
                "disturbance_torque_std", "seed"},
               "environment");
    get(e, "current_east", cfg.env.current_east);
    get(e, "current_north", cfg.env.current_north);
    get(e, "disturbance_force_std", cfg.env.disturbance_force_std);
    get(e, "disturbance_torque_std", cfg.env.disturbance_torque_std);
    get(e, "seed", cfg.env.seed);
  }

  if (j.contains("sensors")) {
    const auto& s = j.at("sensors");
    check_keys(s,
               {"gps_preset", "gps_rate", "gps_std", "gps_dropout_prob", "imu_rate",
                "imu_yaw_std", "imu_rate_std", "gyro_bias_walk_std"},
               "sensors");
    if (s.contains("gps_preset")) {
      const auto preset = s.at("gps_preset").get<std::string>();
      if (preset == "low-cost")
        cfg.sensors.gps_std = 1.5;
      else if (preset == "rtk")
        cfg.sensors.gps_std = 0.02;
      else
        throw std::invalid_argument("config: unknown gps_preset '" + preset + "'");
    }
    get(s, "gps_rate", cfg.sensors.gps_rate);
    get(s, "gps_std", cfg.sensors.gps_std);
    get(s, "gps_dropout_prob", cfg.sensors.gps_dropout_prob);
    get(s, "imu_rate", cfg.sensors.imu_rate);
    get(s, "imu_yaw_std", cfg.sensors.imu_yaw_std);
    get(s, "imu_rate_std", cfg.sensors.imu_rate_std);
    get(s, "gyro_bias_walk_std", cfg.sensors.gyro_bias_walk_std);
  }

  if (j.contains("ekf")) {
    const auto& e = j.at("ekf");
    check_keys(e, {"q_diag", "p0_diag", "gate_enabled", "gate_sigma", "stale_tolerance"},
               "ekf");
    diag_from_json(e, "q_diag", cfg.ekf.Q);
    diag_from_json(e, "p0_diag", cfg.ekf.P0);
    get(e, "gate_enabled", cfg.ekf.gate_enabled);
    get(e, "gate_sigma", cfg.ekf.gate_sigma);
    get(e, "stale_tolerance", cfg.ekf.stale_tolerance);
  }

  if (j.contains("trial")) {
    const auto& t = j.at("trial");
    check_keys(t,
               {"side", "steady_hold", "total_heading_change_deg", "turn_steer",
                "max_duration", "dt", "start_x", "start_y", "start_yaw"},
               "trial");
    if (t.contains("side"))
      cfg.trial.side = log::side_from_string(t.at("side").get<std::string>());
    get(t, "steady_hold", cfg.trial.steady_hold);
    if (t.contains("total_heading_change_deg"))
      cfg.trial.total_heading_change =
          t.at("total_heading_change_deg").get<double>() * M_PI / 180.0;
    get(t, "turn_steer", cfg.trial.turn_steer);
    get(t, "max_duration", cfg.trial.max_duration);
    get(t, "dt", cfg.trial.dt);
    get(t, "start_x", cfg.trial.start_x);
    get(t, "start_y", cfg.trial.start_y);
    get(t, "start_yaw", cfg.trial.start_yaw);
  }

  if (j.contains("origin")) {
    const auto& o = j.at("origin");
    check_keys(o, {"lat", "lon", "alt"}, "origin");
    get(o, "lat", cfg.origin.lat);
    get(o, "lon", cfg.origin.lon);
    get(o, "alt", cfg.origin.alt);
  }

  cfg.validate();
  return cfg;
}

Json config_to_json(const Config& cfg) {
  Json j;
  j["vessel"] = {{"length", cfg.vessel.length},
                 {"beam", cfg.vessel.beam},
                 {"mass", cfg.vessel.mass},
                 {"yaw_inertia", cfg.vessel.yaw_inertia},
                 {"thruster_halfspan", cfg.vessel.thruster_halfspan},
                 {"max_thrust", cfg.vessel.max_thrust},
                 {"deadband", cfg.vessel.deadband},
                 {"reverse_thrust_factor", cfg.vessel.reverse_thrust_factor},
                 {"drag_surge_lin", cfg.vessel.drag_surge_lin},
                 {"drag_surge_quad", cfg.vessel.drag_surge_quad},
                 {"drag_sway_lin", cfg.vessel.drag_sway_lin},
                 {"drag_sway_quad", cfg.vessel.drag_sway_quad},
                 {"drag_yaw_lin", cfg.vessel.drag_yaw_lin},
                 {"drag_yaw_quad", cfg.vessel.drag_yaw_quad}};
  j["environment"] = {{"current_east", cfg.env.current_east},
                      {"current_north", cfg.env.current_north},
                      {"disturbance_force_std", cfg.env.disturbance_force_std},
                      {"disturbance_torque_std", cfg.env.disturbance_torque_std},
                      {"seed", cfg.env.seed}};
  j["sensors"] = {{"gps_rate", cfg.sensors.gps_rate},
                  {"gps_std", cfg.sensors.gps_std},
                  {"gps_dropout_prob", cfg.sensors.gps_dropout_prob},
                  {"imu_rate", cfg.sensors.imu_rate},
                  {"imu_yaw_std", cfg.sensors.imu_yaw_std},
                  {"imu_rate_std", cfg.sensors.imu_rate_std},
                  {"gyro_bias_walk_std", cfg.sensors.gyro_bias_walk_std}};
  j["ekf"] = {{"q_diag", diag_to_json(cfg.ekf.Q)},
              {"p0_diag", diag_to_json(cfg.ekf.P0)},
              {"gate_enabled", cfg.ekf.gate_enabled},
              {"gate_sigma", cfg.ekf.gate_sigma},
              {"stale_tolerance", cfg.ekf.stale_tolerance}};
  j["trial"] = {{"side", log::to_string(cfg.trial.side)},
                {"steady_hold", cfg.trial.steady_hold},
                {"total_heading_change_deg", cfg.trial.total_heading_change * 180.0 / M_PI},
                {"turn_steer", cfg.trial.turn_steer},
                {"max_duration", cfg.trial.max_duration},
                {"dt", cfg.trial.dt},
                {"start_x", cfg.trial.start_x},
                {"start_y", cfg.trial.start_y},
                {"start_yaw", cfg.trial.start_yaw}};
  j["origin"] = {{"lat", cfg.origin.lat}, {"lon", cfg.origin.lon}, {"alt", cfg.origin.alt}};
  return j;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("config: parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace usv::config
