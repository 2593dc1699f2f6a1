// usvsim command-line front end. Links only the public C API.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "usvsim.h"

namespace {

struct ConfigDeleter {
  void operator()(usv_config* c) const { usv_config_free(c); }
};
using ConfigPtr = std::unique_ptr<usv_config, ConfigDeleter>;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  std::string side;
};

int fail(usv_status st) {
  std::fprintf(stderr, "error: %s\n", usv_last_error());
  return static_cast<int>(st);
}

ConfigPtr make_config(const CommonOpts& opts, int& err) {
  ConfigPtr cfg;
  if (!opts.config_path.empty()) {
    cfg.reset(usv_config_load(opts.config_path.c_str()));
    if (!cfg) {
      err = fail(USV_ERR_IO);
      return nullptr;
    }
  } else {
    cfg.reset(usv_config_default());
  }
  if (!opts.side.empty()) {
    if (auto st = usv_config_set_side(cfg.get(), opts.side.c_str()); st != USV_OK) {
      err = fail(st);
      return nullptr;
    }
  }
  return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_out = true) {
  cmd->add_option("--config", opts.config_path, "JSON config file");
  if (with_out) cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "RNG seed");
  cmd->add_option("--side", opts.side, "turn side: port or starboard");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential-drive USV simulation, EKF localization, and "
               "IMO turning-circle analysis"};
  app.require_subcommand(1);

  CommonOpts opts;

  auto* calibrate = app.add_subcommand(
      "calibrate", "Compute the approach throttle and approach speed");
  add_common(calibrate, opts, false);

  auto* trial = app.add_subcommand(
      "trial", "Run a turning-circle trial; writes log, metrics, plots");
  add_common(trial, opts);
  std::vector<std::uint64_t> seeds;
  trial->add_option("--seeds", seeds,
                    "run one trial per seed and a combined campaign report");

  auto* ekf = app.add_subcommand("ekf", "Replay a log's sensors through the EKF");
  add_common(ekf, opts, false);
  std::string log_in, log_out = "ekf_out.jsonl";
  ekf->add_option("--log", log_in, "input JSONL log")->required();
  ekf->add_option("--out-log", log_out, "output JSONL log with estimates");

  auto* metrics = app.add_subcommand(
      "metrics", "Turning-circle metrics and IMO compliance for a log");
  std::string metrics_log, metrics_source = "truth";
  double length = 0.0;
  metrics->add_option("--log", metrics_log, "trial JSONL log")->required();
  metrics->add_option("--length", length, "vessel length in meters (limits are 4.5L/5L)")
      ->required();
  metrics->add_option("--source", metrics_source, "truth or estimate");

  auto* report = app.add_subcommand("report", "Campaign report over several trial logs");
  std::vector<std::string> report_logs;
  std::string report_csv, report_source = "truth";
  report->add_option("--logs", report_logs, "trial JSONL logs")->required();
  report->add_option("--csv", report_csv, "also write the report as CSV here");
  report->add_option("--source", report_source, "truth or estimate");

  auto* ingest = app.add_subcommand(
      "ingest", "Convert an external CSV track into the trial log format");
  std::string ingest_csv, ingest_out = "ingested.jsonl";
  double olat = 0.0, olon = 0.0, oalt = 0.0;
  std::string datum, heading_conv;
  long exec_index = -1;
  ingest->add_option("--csv", ingest_csv, "CSV with iso_time,lat,lon,heading_deg_compass")
      ->required();
  ingest->add_option("--out-log", ingest_out, "output JSONL log");
  ingest->add_option("--origin-lat", olat)->required();
  ingest->add_option("--origin-lon", olon)->required();
  ingest->add_option("--origin-alt", oalt);
  ingest->add_option("--datum", datum, "must be declared; WGS84")->required();
  ingest->add_option("--heading-convention", heading_conv, "must be declared; compass-deg")
      ->required();
  ingest->add_option("--execute-index", exec_index, "sample index of the execute point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(USV_ERR_VALIDATION);
  }

  int err = 0;

  if (calibrate->parsed()) {
    auto cfg = make_config(opts, err);
    if (!cfg) return err;
    double throttle = 0.0, speed = 0.0;
    if (auto st = usv_calibrate(cfg.get(), &throttle, &speed); st != USV_OK)
      return fail(st);
    std::printf("approach_throttle %.6f\napproach_speed_mps %.6f\n", throttle, speed);
    return 0;
  }

  if (trial->parsed()) {
    auto cfg = make_config(opts, err);
    if (!cfg) return err;
    if (seeds.empty()) seeds.push_back(opts.seed);
    std::vector<std::string> log_paths;
    for (auto s : seeds) {
      const std::string dir =
          seeds.size() == 1 ? opts.out_dir : opts.out_dir + "/seed_" + std::to_string(s);
      if (auto st = usv_run_trial(cfg.get(), s, dir.c_str()); st != USV_OK)
        return fail(st);
      std::printf("trial seed %llu -> %s\n", static_cast<unsigned long long>(s),
                  dir.c_str());
      log_paths.push_back(dir + "/trial.jsonl");
    }
    if (log_paths.size() > 1) {
      std::vector<const char*> paths;
      for (const auto& p : log_paths) paths.push_back(p.c_str());
      const std::string csv = opts.out_dir + "/campaign.csv";
      char* table = nullptr;
      if (auto st = usv_report(paths.data(), static_cast<int>(paths.size()), "truth",
                               csv.c_str(), &table);
          st != USV_OK)
        return fail(st);
      std::printf("%s", table);
      usv_string_free(table);
    }
    return 0;
  }

  if (ekf->parsed()) {
    auto cfg = make_config(opts, err);
    if (!cfg) return err;
    int applied = 0, dropped = 0;
    if (auto st = usv_ekf_replay(cfg.get(), log_in.c_str(), log_out.c_str(), &applied,
                                 &dropped);
        st != USV_OK)
      return fail(st);
    std::printf("applied %d\ndropped_stale %d\nwrote %s\n", applied, dropped,
                log_out.c_str());
    return 0;
  }

  if (metrics->parsed()) {
    char* json = nullptr;
    if (auto st = usv_metrics_json(metrics_log.c_str(), metrics_source.c_str(), length,
                                   &json);
        st != USV_OK)
      return fail(st);
    std::printf("%s", json);
    usv_string_free(json);
    return 0;
  }

  if (report->parsed()) {
    std::vector<const char*> paths;
    for (const auto& p : report_logs) paths.push_back(p.c_str());
    char* table = nullptr;
    if (auto st = usv_report(paths.data(), static_cast<int>(paths.size()),
                             report_source.c_str(),
                             report_csv.empty() ? nullptr : report_csv.c_str(), &table);
        st != USV_OK)
      return fail(st);
    std::printf("%s", table);
    usv_string_free(table);
    return 0;
  }

  if (ingest->parsed()) {
    if (auto st = usv_ingest_external(ingest_csv.c_str(), olat, olon, oalt,
                                      datum.c_str(), heading_conv.c_str(), exec_index,
                                      ingest_out.c_str());
        st != USV_OK)
      return fail(st);
    std::printf("wrote %s\n", ingest_out.c_str());
    return 0;
  }

  return static_cast<int>(USV_ERR_VALIDATION);
}
