#include "usvsim.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "../core/config.hpp"
#include "../core/fmt.hpp"
#include "../core/logio.hpp"
#include "../core/metrics.hpp"
#include "../core/trial.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs fn, translating exceptions to status codes. io_default picks the
// code for std::runtime_error (I/O in most entry points, protocol for the
// simulation-driven ones).
template <typename Fn>
usv_status guarded(usv_status runtime_code, Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return USV_ERR_VALIDATION;
  } catch (const std::domain_error& e) {
    set_error(e.what());
    return USV_ERR_VALIDATION;
  } catch (const nlohmann::json::exception& e) {
    set_error(e.what());
    return USV_ERR_VALIDATION;
  } catch (const std::runtime_error& e) {
    set_error(e.what());
    return runtime_code;
  } catch (const std::exception& e) {
    set_error(e.what());
    return USV_ERR_INTERNAL;
  }
}

using usv::config::Config;

}  // namespace

struct usv_config {
  Config cfg;
};

extern "C" {

const char* usv_last_error(void) { return g_last_error.c_str(); }

void usv_string_free(char* s) { std::free(s); }

usv_config* usv_config_default(void) { return new usv_config{usv::config::default_config()}; }

usv_config* usv_config_load(const char* path) {
  usv_config* out = nullptr;
  guarded(USV_ERR_IO, [&]() -> usv_status {
    out = new usv_config{usv::config::load_config(path)};
    return USV_OK;
  });
  return out;
}

usv_status usv_config_override(usv_config* cfg, const char* json_fragment) {
  if (!cfg || !json_fragment) {
    set_error("null argument");
    return USV_ERR_VALIDATION;
  }
  return guarded(USV_ERR_VALIDATION, [&]() -> usv_status {
    auto merged = usv::config::config_to_json(cfg->cfg);
    merged.merge_patch(nlohmann::ordered_json::parse(json_fragment));
    cfg->cfg = usv::config::config_from_json(merged);
    return USV_OK;
  });
}

usv_status usv_config_set_side(usv_config* cfg, const char* side) {
  if (!cfg || !side) {
    set_error("null argument");
    return USV_ERR_VALIDATION;
  }
  return guarded(USV_ERR_VALIDATION, [&]() -> usv_status {
    cfg->cfg.trial.side = usv::log::side_from_string(side);
    return USV_OK;
  });
}

usv_status usv_config_to_json(const usv_config* cfg, char** json_out) {
  if (!cfg || !json_out) {
    set_error("null argument");
    return USV_ERR_VALIDATION;
  }
  *json_out = dup_string(usv::config::config_to_json(cfg->cfg).dump(2) + "\n");
  return USV_OK;
}

void usv_config_free(usv_config* cfg) { delete cfg; }

usv_status usv_calibrate(const usv_config* cfg, double* throttle_out,
                         double* approach_speed_out) {
  if (!cfg || !throttle_out || !approach_speed_out) {
    set_error("null argument");
    return USV_ERR_VALIDATION;
  }
  return guarded(USV_ERR_PROTOCOL, [&]() -> usv_status {
    const auto cal = usv::trial::calibrate_approach_throttle(cfg->cfg.vessel, cfg->cfg.env);
    *throttle_out = cal.throttle;
    *approach_speed_out = cal.approach_speed;
    return USV_OK;
  });
}

usv_status usv_run_trial(const usv_config* cfg, uint64_t seed, const char* out_dir) {
  if (!cfg || !out_dir) {
    set_error("null argument");
    return USV_ERR_VALIDATION;
  }
  return guarded(USV_ERR_PROTOCOL, [&]() -> usv_status {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const std::string dir(out_dir);

    const auto cal =
        usv::trial::calibrate_approach_throttle(cfg->cfg.vessel, cfg->cfg.env);
    auto result = usv::trial::run_turning_circle(cfg->cfg, cal, seed);

    usv::logio::write_log(result.log, dir + "/trial.jsonl");
    {
      std::ofstream cj(dir + "/resolved_config.json", std::ios::binary);
      if (!cj) throw std::runtime_error("cannot write resolved_config.json");
      cj << usv::config::config_to_json(cfg->cfg).dump(2) << '\n';
    }
    if (!result.completed) {
      set_error("trial incomplete: " + result.message + " (partial artifacts in " +
                dir + ")");
      return USV_ERR_PROTOCOL;
    }

    const auto m = usv::metrics::compute_metrics(result.log, usv::metrics::Source::kTruth);
    const auto campaign = usv::metrics::compare_tests({m});
    const auto compliance = usv::metrics::check_imo(m, cfg->cfg.vessel.length);
    {
      std::ofstream csv(dir + "/metrics.csv", std::ios::binary);
      if (!csv) throw std::runtime_error("cannot write metrics.csv");
      csv << usv::metrics::metrics_csv(campaign);
    }
    {
      std::ofstream txt(dir + "/compliance.txt", std::ios::binary);
      if (!txt) throw std::runtime_error("cannot write compliance.txt");
      txt << usv::metrics::compliance_text(compliance);
    }
    usv::logio::render_plots(result.log, dir);
    return USV_OK;
  });
}

usv_status usv_ekf_replay(const usv_config* cfg, const char* log_in,
                          const char* log_out, int* applied_out,
                          int* dropped_stale_out) {
  if (!cfg || !log_in || !log_out) {
    set_error("null argument");
    return USV_ERR_VALIDATION;
  }
  return guarded(USV_ERR_IO, [&]() -> usv_status {
    auto log = usv::logio::read_log(log_in);

    bool any_sensor = false;
    for (const auto& s : log.samples)
      if (s.gps || s.imu) { any_sensor = true; break; }
    if (!any_sensor)
      throw std::invalid_argument("ekf replay: log has no sensor fields");

    usv::ekf::EkfState est;
    est.t = log.samples.empty() ? 0.0 : log.samples.front().t;
    est.P = cfg->cfg.ekf.P0;
    if (!log.samples.empty() && log.samples.front().truth) {
      est.x(usv::ekf::kX) = log.samples.front().truth->x;
      est.x(usv::ekf::kY) = log.samples.front().truth->y;
      est.x(usv::ekf::kYaw) = log.samples.front().truth->yaw;
    }

    usv::ekf::StreamStats stats;
    for (auto& s : log.samples) {
      // GPS before IMU at equal timestamps: documented fusion tie-break.
      std::vector<usv::ekf::Measurement> ms;
      if (s.gps) {
        usv::sensors::GpsFix fix;
        fix.t = s.t;
        fix.point = {s.gps->lat, s.gps->lon, s.gps->alt};
        fix.horizontal_std = s.gps->std_dev;
        ms.push_back(usv::ekf::fuse_gps(fix, cfg->cfg.origin));
      }
      if (s.imu) {
        usv::sensors::ImuReading r;
        r.t = s.t;
        r.roll = s.imu->roll;
        r.pitch = s.imu->pitch;
        r.yaw = s.imu->yaw;
        r.rate_x = s.imu->p;
        r.rate_y = s.imu->q;
        r.rate_z = s.imu->r;
        r.orientation_std = cfg->cfg.sensors.imu_yaw_std;
        r.rate_std = cfg->cfg.sensors.imu_rate_std;
        ms.push_back(usv::ekf::fuse_imu(r));
      }
      for (auto& m : ms) {
        if (m.t < est.t - cfg->cfg.ekf.stale_tolerance) {
          ++stats.dropped_stale;
          continue;
        }
        if (m.t > est.t) est = usv::ekf::predict(est, m.t - est.t, cfg->cfg.ekf);
        usv::ekf::CorrectOutcome oc;
        est = usv::ekf::correct(est, m, cfg->cfg.ekf, &oc);
        if (oc == usv::ekf::CorrectOutcome::kGated)
          ++stats.gated;
        else
          ++stats.applied;
      }
      usv::log::EstimateSample e;
      for (int i = 0; i < usv::ekf::kStateDim; ++i) {
        e.state[i] = est.x(i);
        e.p_diag[i] = est.P(i, i);
      }
      s.est = e;
    }

    usv::logio::write_log(log, log_out);
    if (applied_out) *applied_out = stats.applied;
    if (dropped_stale_out) *dropped_stale_out = stats.dropped_stale;
    return USV_OK;
  });
}

usv_status usv_metrics_json(const char* log_path, const char* source,
                            double vessel_length, char** json_out) {
  if (!log_path || !source || !json_out) {
    set_error("null argument");
    return USV_ERR_VALIDATION;
  }
  return guarded(USV_ERR_IO, [&]() -> usv_status {
    usv::metrics::Source src;
    if (std::string(source) == "truth")
      src = usv::metrics::Source::kTruth;
    else if (std::string(source) == "estimate")
      src = usv::metrics::Source::kEstimate;
    else
      throw std::invalid_argument("source must be 'truth' or 'estimate'");

    const auto log = usv::logio::read_log(log_path);
    const auto m = usv::metrics::compute_metrics(log, src);
    const auto compliance = usv::metrics::check_imo(m, vessel_length);
    const auto campaign = usv::metrics::compare_tests({m});

    nlohmann::ordered_json j;
    j["metrics"] = {{"side", usv::log::to_string(m.side)},
                    {"advance_m", m.advance},
                    {"transfer_m", m.transfer},
                    {"tactical_diameter_m", m.tactical_diameter},
                    {"speed_loss_pct", m.speed_loss_pct},
                    {"t90_s", m.t90},
                    {"t180_s", m.t180}};
    j["compliance"] = {{"advance_limit_m", compliance.advance_limit},
                       {"td_limit_m", compliance.td_limit},
                       {"advance_pass", compliance.advance_pass},
                       {"td_pass", compliance.td_pass}};
    j["table"] = usv::metrics::metrics_table(campaign);
    j["compliance_text"] = usv::metrics::compliance_text(compliance);
    *json_out = dup_string(j.dump(2) + "\n");
    return USV_OK;
  });
}

usv_status usv_check_imo(double advance_m, double tactical_diameter_m,
                         double vessel_length_m, int* advance_pass_out,
                         int* td_pass_out, double* advance_limit_out,
                         double* td_limit_out) {
  return guarded(USV_ERR_VALIDATION, [&]() -> usv_status {
    usv::metrics::TurningCircleMetrics m;
    m.advance = advance_m;
    m.tactical_diameter = tactical_diameter_m;
    const auto r = usv::metrics::check_imo(m, vessel_length_m);
    if (advance_pass_out) *advance_pass_out = r.advance_pass ? 1 : 0;
    if (td_pass_out) *td_pass_out = r.td_pass ? 1 : 0;
    if (advance_limit_out) *advance_limit_out = r.advance_limit;
    if (td_limit_out) *td_limit_out = r.td_limit;
    return USV_OK;
  });
}

usv_status usv_report(const char* const* log_paths, int count, const char* source,
                      const char* out_csv_path, char** table_out) {
  if (!log_paths || count < 1 || !source) {
    set_error("usv_report: need at least one log path");
    return USV_ERR_VALIDATION;
  }
  return guarded(USV_ERR_IO, [&]() -> usv_status {
    usv::metrics::Source src = std::string(source) == "estimate"
                                   ? usv::metrics::Source::kEstimate
                                   : usv::metrics::Source::kTruth;
    std::vector<usv::metrics::TurningCircleMetrics> trials;
    for (int i = 0; i < count; ++i) {
      const auto log = usv::logio::read_log(log_paths[i]);
      trials.push_back(usv::metrics::compute_metrics(log, src));
    }
    const auto campaign = usv::metrics::compare_tests(trials);
    if (out_csv_path) {
      std::ofstream csv(out_csv_path, std::ios::binary);
      if (!csv) throw std::runtime_error(std::string("cannot write ") + out_csv_path);
      csv << usv::metrics::metrics_csv(campaign);
    }
    if (table_out) *table_out = dup_string(usv::metrics::metrics_table(campaign));
    return USV_OK;
  });
}

usv_status usv_ingest_external(const char* csv_path, double origin_lat,
                               double origin_lon, double origin_alt,
                               const char* datum, const char* heading_convention,
                               long execute_index, const char* out_log_path) {
  if (!csv_path || !out_log_path || !datum || !heading_convention) {
    set_error("null argument");
    return USV_ERR_VALIDATION;
  }
  return guarded(USV_ERR_IO, [&]() -> usv_status {
    const auto log = usv::logio::ingest_external(
        csv_path, {origin_lat, origin_lon, origin_alt},
        {datum, heading_convention}, execute_index);
    usv::logio::write_log(log, out_log_path);
    return USV_OK;
  });
}

}  // extern "C"
