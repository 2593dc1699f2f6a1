#include "logio.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fmt.hpp"

namespace usv::logio {

namespace {

using Json = nlohmann::ordered_json;

Json header_json(const log::TrialMetadata& md) {
  Json h;
  h["schema_version"] = md.schema_version;
  h["vessel_length"] = md.vessel_length;
  h["side"] = log::to_string(md.side);
  h["execute_index"] = md.execute_index;
  h["approach_speed"] = md.approach_speed;
  h["seed"] = md.seed;
  h["config"] = md.config_snapshot;
  for (const auto& [k, v] : md.extra.items()) h[k] = v;
  return h;
}

Json record_json(const log::LogRecord& rec) {
  Json j;
  j["t"] = rec.t;
  if (rec.truth) {
    const auto& tr = *rec.truth;
    j["truth"] = {{"x", tr.x}, {"y", tr.y}, {"yaw", tr.yaw},
                  {"u", tr.u}, {"v", tr.v}, {"r", tr.r}};
  } else {
    j["truth"] = nullptr;
  }
  if (rec.est) {
    j["est"] = {{"state", rec.est->state}, {"P_diag", rec.est->p_diag}};
  } else {
    j["est"] = nullptr;
  }
  if (rec.gps) {
    j["gps"] = {{"lat", rec.gps->lat}, {"lon", rec.gps->lon},
                {"alt", rec.gps->alt}, {"std", rec.gps->std_dev}};
  } else {
    j["gps"] = nullptr;
  }
  if (rec.imu) {
    const auto& im = *rec.imu;
    j["imu"] = {{"roll", im.roll}, {"pitch", im.pitch}, {"yaw", im.yaw},
                {"p", im.p}, {"q", im.q}, {"r", im.r}};
  } else {
    j["imu"] = nullptr;
  }
  j["cmd"] = {{"left", rec.cmd.left}, {"right", rec.cmd.right}};
  for (const auto& [k, v] : rec.extra.items()) j[k] = v;
  return j;
}

log::TrialMetadata header_from_json(Json h) {
  log::TrialMetadata md;
  if (!h.contains("schema_version") || !h.at("schema_version").is_string())
    throw std::invalid_argument("log header missing schema_version");
  md.schema_version = h.at("schema_version").get<std::string>();
  if (md.schema_version != kSchemaVersion)
    throw std::invalid_argument("unsupported log schema version '" +
                                md.schema_version + "' (expected " + kSchemaVersion + ")");
  md.vessel_length = h.value("vessel_length", 0.72);
  md.side = log::side_from_string(h.value("side", std::string("starboard")));
  md.execute_index = h.value("execute_index", -1L);
  md.approach_speed = h.value("approach_speed", 0.0);
  md.seed = h.value("seed", std::uint64_t{0});
  if (h.contains("config")) md.config_snapshot = h.at("config");
  for (const char* k : {"schema_version", "vessel_length", "side", "execute_index",
                        "approach_speed", "seed", "config"})
    h.erase(k);
  md.extra = std::move(h);
  return md;
}

log::LogRecord record_from_json(Json j) {
  log::LogRecord rec;
  rec.t = j.at("t").get<double>();
  if (j.contains("truth") && !j.at("truth").is_null()) {
    const auto& tr = j.at("truth");
    rec.truth = log::TruthSample{tr.at("x"), tr.at("y"), tr.at("yaw"),
                                 tr.at("u"), tr.at("v"), tr.at("r")};
  }
  if (j.contains("est") && !j.at("est").is_null()) {
    log::EstimateSample e;
    e.state = j.at("est").at("state").get<std::array<double, 12>>();
    e.p_diag = j.at("est").at("P_diag").get<std::array<double, 12>>();
    rec.est = e;
  }
  if (j.contains("gps") && !j.at("gps").is_null()) {
    const auto& g = j.at("gps");
    rec.gps = log::GpsSample{g.at("lat"), g.at("lon"), g.at("alt"), g.at("std")};
  }
  if (j.contains("imu") && !j.at("imu").is_null()) {
    const auto& im = j.at("imu");
    rec.imu = log::ImuSample{im.at("roll"), im.at("pitch"), im.at("yaw"),
                             im.at("p"), im.at("q"), im.at("r")};
  }
  if (j.contains("cmd")) {
    rec.cmd = log::CommandSample{j.at("cmd").at("left"), j.at("cmd").at("right")};
  }
  for (const char* k : {"t", "truth", "est", "gps", "imu", "cmd"}) j.erase(k);
  rec.extra = std::move(j);
  return rec;
}

}  // namespace

std::string log_to_string(const log::TrialLog& log) {
  std::ostringstream out;
  out << header_json(log.metadata).dump() << '\n';
  for (const auto& rec : log.samples) out << record_json(rec).dump() << '\n';
  return out.str();
}

void write_log(const log::TrialLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_log: cannot open " + path);
  out << log_to_string(log);
  if (!out) throw std::runtime_error("write_log: write failed for " + path);
}

log::TrialLog log_from_string(const std::string& text, const std::string& origin_name) {
  std::istringstream in(text);
  std::string line;
  log::TrialLog out;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(origin_name + ":" + std::to_string(line_no) +
                                  ": malformed JSON: " + e.what());
    }
    try {
      if (line_no == 1) {
        out.metadata = header_from_json(std::move(j));
      } else {
        out.samples.push_back(record_from_json(std::move(j)));
        if (out.samples.size() > 1 &&
            !(out.samples.back().t > out.samples[out.samples.size() - 2].t))
          throw std::invalid_argument("non-monotone timestamp");
      }
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(origin_name + ":" + std::to_string(line_no) +
                                  ": bad record: " + e.what());
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(origin_name + ":" + std::to_string(line_no) + ": " +
                                  e.what());
    }
  }
  if (line_no == 0) throw std::invalid_argument(origin_name + ": empty log file");
  out.validate();
  return out;
}

log::TrialLog read_log(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_log: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return log_from_string(buf.str(), path);
}

namespace {

// Days since 1970-01-01 for a proleptic Gregorian civil date.
long days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

double parse_iso_time(const std::string& s, int line_no) {
  int y, mo, d, h, mi;
  double sec;
  if (std::sscanf(s.c_str(), "%d-%d-%dT%d:%d:%lf", &y, &mo, &d, &h, &mi, &sec) != 6)
    throw std::invalid_argument("line " + std::to_string(line_no) +
                                ": unparseable iso_time '" + s + "'");
  return static_cast<double>(days_from_civil(y, mo, d)) * 86400.0 + h * 3600.0 +
         mi * 60.0 + sec;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

log::TrialLog ingest_external(const std::string& path, const geo::GeoPoint& origin,
                              const ExternalConventions& conventions,
                              long execute_index) {
  if (conventions.datum != "WGS84")
    throw std::invalid_argument("ingest_external: datum must be declared as WGS84, got '" +
                                conventions.datum + "'");
  if (conventions.heading != "compass-deg")
    throw std::invalid_argument(
        "ingest_external: heading convention must be declared as compass-deg, got '" +
        conventions.heading + "'");

  std::ifstream in(path);
  if (!in) throw std::runtime_error("ingest_external: cannot open " + path);

  log::TrialLog out;
  out.metadata.execute_index = execute_index;
  out.metadata.extra["source"] = path;

  std::string line;
  int line_no = 0;
  double t0 = 0.0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      const auto cols = split_csv(line);
      if (cols.empty() || cols[0] != "iso_time")
        throw std::invalid_argument(
            "ingest_external: expected header starting with iso_time");
      continue;
    }
    const auto cols = split_csv(line);
    if (cols.size() < 4)
      throw std::invalid_argument("ingest_external: line " + std::to_string(line_no) +
                                  ": expected at least 4 columns");
    const double abs_t = parse_iso_time(cols[0], line_no);
    geo::GeoPoint p{std::stod(cols[1]), std::stod(cols[2]), 0.0};
    const auto enu = geo::enu_from_geodetic(origin, p);
    if (first) {
      t0 = abs_t;
      first = false;
    }
    log::LogRecord rec;
    rec.t = abs_t - t0;
    log::TruthSample truth;
    truth.x = enu.x();
    truth.y = enu.y();
    truth.yaw = geo::enu_yaw_from_compass_deg(std::stod(cols[3]));
    if (cols.size() >= 5 && !cols[4].empty()) truth.u = std::stod(cols[4]);
    rec.truth = truth;
    out.samples.push_back(rec);
  }
  out.validate();
  return out;
}

namespace {

struct PlotFrame {
  double min_x, max_x, min_y, max_y;
  double width, height, margin;

  double px(double x) const {
    return margin + (x - min_x) / (max_x - min_x) * (width - 2 * margin);
  }
  double py(double y) const {  // SVG y grows downward
    return height - margin - (y - min_y) / (max_y - min_y) * (height - 2 * margin);
  }
};

void pad(double& lo, double& hi) {
  if (hi - lo < 1e-9) {
    lo -= 1.0;
    hi += 1.0;
  }
}

void polyline(std::ostringstream& svg, const PlotFrame& f,
              const std::vector<std::pair<double, double>>& pts, const char* color) {
  if (pts.size() < 2) return;
  svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
  for (const auto& [x, y] : pts)
    svg << fmt_fixed(f.px(x), 2) << ',' << fmt_fixed(f.py(y), 2) << ' ';
  svg << "\"/>\n";
}

void marker(std::ostringstream& svg, const PlotFrame& f, double x, double y,
            const char* color, const std::string& label) {
  svg << "<circle cx=\"" << fmt_fixed(f.px(x), 2) << "\" cy=\"" << fmt_fixed(f.py(y), 2)
      << "\" r=\"4\" fill=\"" << color << "\"/>\n";
  svg << "<text x=\"" << fmt_fixed(f.px(x) + 6, 2) << "\" y=\"" << fmt_fixed(f.py(y) - 6, 2)
      << "\" font-size=\"11\">" << label << " (" << fmt_shortest(x) << ", "
      << fmt_shortest(y) << ")</text>\n";
}

std::string svg_document(const std::string& body, double w, double h,
                         const std::string& title) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\">\n<text x=\"10\" y=\"16\" font-size=\"13\">" << title << "</text>\n"
      << body << "</svg>\n";
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("render_plots: cannot open " + path);
  out << content;
}

}  // namespace

void render_plots(const log::TrialLog& log, const std::string& out_dir) {
  log.validate();
  std::filesystem::create_directories(out_dir);

  std::vector<std::pair<double, double>> truth_xy, est_xy;
  std::vector<double> times, yaws, speeds;
  for (const auto& s : log.samples) {
    if (s.truth) {
      truth_xy.emplace_back(s.truth->x, s.truth->y);
      times.push_back(s.t);
      yaws.push_back(s.truth->yaw);
      speeds.push_back(std::hypot(s.truth->u, s.truth->v));
    }
    if (s.est) est_xy.emplace_back(s.est->state[0], s.est->state[1]);
  }
  if (truth_xy.empty())
    throw std::invalid_argument("render_plots: log has no truth samples");

  // trajectory.svg
  {
    PlotFrame f{truth_xy[0].first, truth_xy[0].first, truth_xy[0].second,
                truth_xy[0].second, 600, 600, 40};
    for (const auto& [x, y] : truth_xy) {
      f.min_x = std::min(f.min_x, x);
      f.max_x = std::max(f.max_x, x);
      f.min_y = std::min(f.min_y, y);
      f.max_y = std::max(f.max_y, y);
    }
    pad(f.min_x, f.max_x);
    pad(f.min_y, f.max_y);
    std::ostringstream body;
    polyline(body, f, truth_xy, "#1f77b4");
    if (!est_xy.empty()) polyline(body, f, est_xy, "#d62728");
    if (const auto cp = metrics::crossing_points(log, metrics::Source::kTruth)) {
      marker(body, f, cp->exec_x, cp->exec_y, "#2ca02c", "execute");
      marker(body, f, cp->x90, cp->y90, "#ff7f0e", "90deg");
      marker(body, f, cp->x180, cp->y180, "#9467bd", "180deg");
    }
    write_file(out_dir + "/trajectory.svg",
               svg_document(body.str(), 600, 600, "Trajectory (ENU, m)"));
  }

  // heading.svg (unwrapped, degrees) and speed.svg
  const auto unwrapped = geo::unwrap_heading(yaws);
  auto line_plot = [&](const std::vector<double>& ys, const char* title,
                       const std::string& file) {
    PlotFrame f{times.front(), times.back(), ys[0], ys[0], 600, 360, 40};
    for (double v : ys) {
      f.min_y = std::min(f.min_y, v);
      f.max_y = std::max(f.max_y, v);
    }
    pad(f.min_x, f.max_x);
    pad(f.min_y, f.max_y);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(times.size());
    for (size_t i = 0; i < times.size(); ++i) pts.emplace_back(times[i], ys[i]);
    std::ostringstream body;
    polyline(body, f, pts, "#1f77b4");
    write_file(out_dir + "/" + file, svg_document(body.str(), 600, 360, title));
  };
  std::vector<double> heading_deg(unwrapped.size());
  for (size_t i = 0; i < unwrapped.size(); ++i)
    heading_deg[i] = unwrapped[i] * 180.0 / M_PI;
  line_plot(heading_deg, "Heading vs time (deg, unwrapped ENU)", "heading.svg");
  line_plot(speeds, "Speed vs time (m/s)", "speed.svg");
}

}  // namespace usv::logio
