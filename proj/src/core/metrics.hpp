#pragma once

#include <optional>
#include <string>
#include <vector>

#include "triallog.hpp"

namespace usv::metrics {

enum class Source { kTruth, kEstimate };

struct TurningCircleMetrics {
  double advance = 0.0;            // m, along-course at 90 deg heading change
  double transfer = 0.0;           // m, lateral at 90 deg
  double tactical_diameter = 0.0;  // m, lateral at 180 deg
  double speed_loss_pct = 0.0;     // settled-turn speed drop, percent
  double t90 = 0.0;                // s from execute
  double t180 = 0.0;
  log::Side side = log::Side::kStarboard;
};

struct ComplianceReport {
  double advance_limit = 0.0;  // 4.5 * L
  double td_limit = 0.0;       // 5 * L
  bool advance_pass = false;   // strict <
  bool td_pass = false;
  double measured_advance = 0.0;
  double measured_td = 0.0;
};

struct SideSummary {
  log::Side side;
  int count = 0;
  // mean and spread (sample standard deviation) per metric, in the order
  // advance, transfer, tactical diameter, speed loss, t90, t180
  std::array<double, 6> mean{};
  std::array<double, 6> spread{};
  bool insufficient_n = false;  // spread needs at least two trials
};

struct CampaignReport {
  std::vector<TurningCircleMetrics> trials;
  std::vector<SideSummary> summaries;
  // Set when starboard spread < port spread on the majority of metrics,
  // matching the field observation this tooling reports on.
  bool starboard_less_variable = false;
};

// Extracts the six turning-circle parameters from a logged trial.
// Throws std::invalid_argument if the log never reaches 540 deg of heading
// change after the execute point, or the approach speed is degenerate.
TurningCircleMetrics compute_metrics(const log::TrialLog& log, Source source);

// Limits derived from vessel length; strict-inequality pass flags.
ComplianceReport check_imo(const TurningCircleMetrics& m, double length);

CampaignReport compare_tests(const std::vector<TurningCircleMetrics>& trials);

// Plan positions of the execute point and the 90/180 deg heading crossings,
// for plot annotation.
struct CrossingPoints {
  double exec_x, exec_y;
  double x90, y90;
  double x180, y180;
};
std::optional<CrossingPoints> crossing_points(const log::TrialLog& log, Source source);

std::string metrics_csv(const CampaignReport& report);
std::string metrics_table(const CampaignReport& report);
std::string compliance_text(const ComplianceReport& r);

}  // namespace usv::metrics
