#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fmt.hpp"
#include "geo.hpp"

namespace usv::metrics {

namespace {

struct TrackPoint {
  double t, x, y, yaw, speed;
};

std::vector<TrackPoint> extract_track(const log::TrialLog& log, Source source) {
  std::vector<TrackPoint> track;
  track.reserve(log.samples.size());
  for (const auto& s : log.samples) {
    if (source == Source::kTruth) {
      if (!s.truth) continue;
      const auto& tr = *s.truth;
      track.push_back({s.t, tr.x, tr.y, tr.yaw, std::hypot(tr.u, tr.v)});
    } else {
      if (!s.est) continue;
      const auto& e = s.est->state;
      track.push_back({s.t, e[0], e[1], e[5], std::hypot(e[6], e[7])});
    }
  }
  return track;
}

struct Crossing {
  double t, x, y, speed;
};

// Linear interpolation of the track at turn progress = target.
Crossing crossing_at(const std::vector<TrackPoint>& track,
                     const std::vector<double>& progress, double target) {
  for (size_t i = 1; i < track.size(); ++i) {
    if (progress[i - 1] < target && progress[i] >= target) {
      const double a = (target - progress[i - 1]) / (progress[i] - progress[i - 1]);
      return {track[i - 1].t + a * (track[i].t - track[i - 1].t),
              track[i - 1].x + a * (track[i].x - track[i - 1].x),
              track[i - 1].y + a * (track[i].y - track[i - 1].y),
              track[i - 1].speed + a * (track[i].speed - track[i - 1].speed)};
    }
  }
  throw std::invalid_argument("compute_metrics: heading change never reaches target");
}

}  // namespace

TurningCircleMetrics compute_metrics(const log::TrialLog& log, Source source) {
  log.validate();
  if (log.metadata.execute_index < 0)
    throw std::invalid_argument("compute_metrics: log has no execute point");
  if (!(log.metadata.approach_speed > 0.0))
    throw std::invalid_argument("compute_metrics: degenerate approach speed");

  const auto all = extract_track(log, source);
  // Index of the execute sample within the extracted track.
  size_t exec_i = 0;
  {
    const double t_exec = log.samples[log.metadata.execute_index].t;
    while (exec_i < all.size() && all[exec_i].t < t_exec) ++exec_i;
    if (exec_i >= all.size())
      throw std::invalid_argument("compute_metrics: no track data after execute");
  }
  std::vector<TrackPoint> track(all.begin() + exec_i, all.end());
  if (track.size() < 2)
    throw std::invalid_argument("compute_metrics: too few samples after execute");

  std::vector<double> yaws(track.size());
  for (size_t i = 0; i < track.size(); ++i) yaws[i] = track[i].yaw;
  const auto unwrapped = geo::unwrap_heading(yaws);

  // Signed turn progress, positive in the commanded direction.
  const double turn_sign = log.metadata.side == log::Side::kPort ? 1.0 : -1.0;
  std::vector<double> progress(track.size());
  for (size_t i = 0; i < track.size(); ++i)
    progress[i] = turn_sign * (unwrapped[i] - unwrapped[0]);

  if (progress.back() < 3.0 * M_PI &&
      *std::max_element(progress.begin(), progress.end()) < 3.0 * M_PI)
    throw std::invalid_argument("compute_metrics: trial did not reach 540 deg");

  const double yaw0 = track[0].yaw;
  const Eigen::Vector2d along_dir(std::cos(yaw0), std::sin(yaw0));
  // Lateral positive toward the commanded turn side.
  const Eigen::Vector2d lat_dir = turn_sign * Eigen::Vector2d(-std::sin(yaw0), std::cos(yaw0));
  const Eigen::Vector2d origin(track[0].x, track[0].y);

  const auto c90 = crossing_at(track, progress, M_PI / 2.0);
  const auto c180 = crossing_at(track, progress, M_PI);
  crossing_at(track, progress, 3.0 * M_PI);  // existence check for the 540 deg point

  TurningCircleMetrics m;
  m.side = log.metadata.side;
  m.advance = (Eigen::Vector2d(c90.x, c90.y) - origin).dot(along_dir);
  m.transfer = (Eigen::Vector2d(c90.x, c90.y) - origin).dot(lat_dir);
  m.tactical_diameter = (Eigen::Vector2d(c180.x, c180.y) - origin).dot(lat_dir);
  m.t90 = c90.t - track[0].t;
  m.t180 = c180.t - track[0].t;

  // Settled-turn speed: mean over the final revolution, progress in [2pi, 3pi].
  double speed_sum = 0.0;
  int speed_n = 0;
  for (size_t i = 0; i < track.size(); ++i) {
    if (progress[i] >= 2.0 * M_PI && progress[i] <= 3.0 * M_PI) {
      speed_sum += track[i].speed;
      ++speed_n;
    }
  }
  if (speed_n == 0)
    throw std::invalid_argument("compute_metrics: no samples in steady-turn window");
  const double steady_speed = speed_sum / speed_n;
  m.speed_loss_pct =
      100.0 * (log.metadata.approach_speed - steady_speed) / log.metadata.approach_speed;
  return m;
}

std::optional<CrossingPoints> crossing_points(const log::TrialLog& log, Source source) {
  if (log.metadata.execute_index < 0) return std::nullopt;
  const auto all = extract_track(log, source);
  size_t exec_i = 0;
  const double t_exec = log.samples[log.metadata.execute_index].t;
  while (exec_i < all.size() && all[exec_i].t < t_exec) ++exec_i;
  if (exec_i + 1 >= all.size()) return std::nullopt;
  std::vector<TrackPoint> track(all.begin() + exec_i, all.end());

  std::vector<double> yaws(track.size());
  for (size_t i = 0; i < track.size(); ++i) yaws[i] = track[i].yaw;
  const auto unwrapped = geo::unwrap_heading(yaws);
  const double turn_sign = log.metadata.side == log::Side::kPort ? 1.0 : -1.0;
  std::vector<double> progress(track.size());
  for (size_t i = 0; i < track.size(); ++i)
    progress[i] = turn_sign * (unwrapped[i] - unwrapped[0]);

  try {
    const auto c90 = crossing_at(track, progress, M_PI / 2.0);
    const auto c180 = crossing_at(track, progress, M_PI);
    return CrossingPoints{track[0].x, track[0].y, c90.x, c90.y, c180.x, c180.y};
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

ComplianceReport check_imo(const TurningCircleMetrics& m, double length) {
  if (!(length > 0.0)) throw std::invalid_argument("check_imo: length must be > 0");
  ComplianceReport r;
  r.advance_limit = 4.5 * length;
  r.td_limit = 5.0 * length;
  r.measured_advance = m.advance;
  r.measured_td = m.tactical_diameter;
  r.advance_pass = m.advance < r.advance_limit;
  r.td_pass = m.tactical_diameter < r.td_limit;
  return r;
}

namespace {

std::array<double, 6> as_array(const TurningCircleMetrics& m) {
  return {m.advance, m.transfer, m.tactical_diameter, m.speed_loss_pct, m.t90, m.t180};
}

SideSummary summarize(log::Side side, const std::vector<TurningCircleMetrics>& trials) {
  SideSummary s;
  s.side = side;
  std::vector<std::array<double, 6>> rows;
  for (const auto& m : trials)
    if (m.side == side) rows.push_back(as_array(m));
  s.count = static_cast<int>(rows.size());
  if (rows.empty()) return s;
  for (int k = 0; k < 6; ++k) {
    double sum = 0.0;
    for (const auto& r : rows) sum += r[k];
    s.mean[k] = sum / rows.size();
  }
  if (rows.size() < 2) {
    s.insufficient_n = true;
    return s;
  }
  for (int k = 0; k < 6; ++k) {
    double ss = 0.0;
    for (const auto& r : rows) ss += (r[k] - s.mean[k]) * (r[k] - s.mean[k]);
    s.spread[k] = std::sqrt(ss / (rows.size() - 1));
  }
  return s;
}

}  // namespace

CampaignReport compare_tests(const std::vector<TurningCircleMetrics>& trials) {
  if (trials.empty()) throw std::invalid_argument("compare_tests: no trials");
  CampaignReport report;
  report.trials = trials;
  const auto port = summarize(log::Side::kPort, trials);
  const auto starboard = summarize(log::Side::kStarboard, trials);
  if (port.count > 0) report.summaries.push_back(port);
  if (starboard.count > 0) report.summaries.push_back(starboard);
  if (port.count >= 2 && starboard.count >= 2) {
    int starboard_tighter = 0;
    for (int k = 0; k < 6; ++k)
      if (starboard.spread[k] < port.spread[k]) ++starboard_tighter;
    report.starboard_less_variable = starboard_tighter > 3;
  }
  return report;
}

std::string metrics_csv(const CampaignReport& report) {
  std::ostringstream out;
  out << "trial,side,advance_m,transfer_m,tactical_diameter_m,speed_loss_pct,t90_s,t180_s\n";
  int i = 1;
  for (const auto& m : report.trials) {
    out << i++ << ',' << log::to_string(m.side) << ',' << fmt_shortest(m.advance)
        << ',' << fmt_shortest(m.transfer) << ',' << fmt_shortest(m.tactical_diameter)
        << ',' << fmt_shortest(m.speed_loss_pct) << ',' << fmt_shortest(m.t90) << ','
        << fmt_shortest(m.t180) << '\n';
  }
  for (const auto& s : report.summaries) {
    out << "mean," << log::to_string(s.side);
    for (int k = 0; k < 6; ++k) out << ',' << fmt_shortest(s.mean[k]);
    out << '\n';
    out << "spread," << log::to_string(s.side);
    if (s.insufficient_n) {
      out << ",insufficient n\n";
    } else {
      for (int k = 0; k < 6; ++k) out << ',' << fmt_shortest(s.spread[k]);
      out << '\n';
    }
  }
  return out.str();
}

std::string metrics_table(const CampaignReport& report) {
  static const char* names[6] = {"Advance (m)", "Transfer (m)",
                                 "Tactical Diameter (m)", "Loss of speed (%)",
                                 "Time to 90 deg (s)", "Time to 180 deg (s)"};
  std::ostringstream out;
  out << "Parameter";
  for (size_t i = 0; i < report.trials.size(); ++i)
    out << "\tTest " << i + 1 << " ("
        << (report.trials[i].side == log::Side::kPort ? "P" : "S") << ")";
  out << '\n';
  for (int k = 0; k < 6; ++k) {
    out << names[k];
    for (const auto& m : report.trials) out << '\t' << fmt_fixed(as_array(m)[k], 2);
    out << '\n';
  }
  if (report.starboard_less_variable)
    out << "Note: starboard-side trials show less variability than port-side trials.\n";
  return out.str();
}

std::string compliance_text(const ComplianceReport& r) {
  std::ostringstream out;
  out << "Advance: measured " << fmt_fixed(r.measured_advance, 2) << " m, limit < "
      << fmt_fixed(r.advance_limit, 2) << " m -> " << (r.advance_pass ? "Y" : "N")
      << '\n';
  out << "Tactical Diameter: measured " << fmt_fixed(r.measured_td, 2)
      << " m, limit < " << fmt_fixed(r.td_limit, 2) << " m -> "
      << (r.td_pass ? "Y" : "N") << '\n';
  return out.str();
}

}  // namespace usv::metrics
