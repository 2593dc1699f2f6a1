#pragma once

#include <string>

#include "geo.hpp"
#include "metrics.hpp"
#include "triallog.hpp"

namespace usv::logio {

inline constexpr const char* kSchemaVersion = "1";

// JSONL: one header line with metadata, one line per sample. Fixed field
// order and shortest round-trip decimals, so identical logs are
// byte-identical files. Unknown keys are preserved.
void write_log(const log::TrialLog& log, const std::string& path);
std::string log_to_string(const log::TrialLog& log);

// Throws std::runtime_error for I/O failures (with path), and
// std::invalid_argument for schema-version mismatch, malformed lines (with
// line number), or non-monotone timestamps.
log::TrialLog read_log(const std::string& path);
log::TrialLog log_from_string(const std::string& text, const std::string& origin_name);

// Declared conventions for external track ingestion. Refused unless the
// datum is "WGS84" and heading is "compass-deg"; no silent guessing.
struct ExternalConventions {
  std::string datum;    // "WGS84"
  std::string heading;  // "compass-deg" (clockwise from North)
};

// CSV columns: iso_time,lat,lon,heading_deg_compass[,speed_mps].
// Positions become ENU truth samples at their native rate; sensor and
// estimate fields stay empty. execute_index is the caller's call (-1: none).
log::TrialLog ingest_external(const std::string& path, const geo::GeoPoint& origin,
                              const ExternalConventions& conventions,
                              long execute_index = -1);

// Writes trajectory.svg, heading.svg, speed.svg under out_dir.
// Byte-deterministic for identical inputs.
void render_plots(const log::TrialLog& log, const std::string& out_dir);

}  // namespace usv::logio
