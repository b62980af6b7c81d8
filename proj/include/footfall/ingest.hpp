#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "footfall/types.hpp"

namespace footfall {

// Failure to read or parse an input file. line is 1-based; 0 means the
// problem is not tied to a specific line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, std::size_t line, const std::string& message);
  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

struct ValidationResult {
  std::vector<DetectionRecord> records;
  std::vector<std::string> diagnostics;  // one entry per rejected record
};

// Keeps person-category records whose fields satisfy the type invariants,
// sorts by (camera, track, timestamp), and collapses duplicate
// (camera, track, timestamp) keys to the last occurrence in input order.
// Invariant violations land in diagnostics instead of failing the batch.
ValidationResult validate_and_sort(std::vector<DetectionRecord> records);

// Reads a detection log. Accepts a comma-delimited table with a header row
// (ts_ms,camera,track,x,y,w,h,category in any column order) or one JSON
// object per line with the same fields; the format is sniffed from the
// first non-blank line. Throws ParseError on malformed input.
std::vector<DetectionRecord> read_detections(const std::filesystem::path& path);

std::vector<DetectionRecord> parse_detections_csv(const std::string& text,
                                                  const std::string& path_label);
std::vector<DetectionRecord> parse_detections_jsonl(const std::string& text,
                                                    const std::string& path_label);

// Reads a per-camera zone document: {"camera": ..., "zones": [{id, name,
// priority, vertices}], "gate": {"start": rect, "finish": rect}} with rects
// as {x, y, w, h}. Validates polygon simplicity, vertex counts, unique ids
// and priorities, and gate geometry. Throws ParseError.
ZoneConfig read_zone_config(const std::filesystem::path& path);
ZoneConfig parse_zone_config(const std::string& text, const std::string& path_label);

// Reads a JSON object overriding AnalysisConfig defaults field by field.
// Keys use the threshold names (stability_threshold, stabilization_time,
// min_dwell, max_dwell, track_gap, gate_tolerance, max_crossing_time,
// resample_points, segment_length, segment_overlap, stitch_max_gap,
// stitch_max_distance, frechet_cell_budget, dbscan_min_pts, dbscan_eps).
// dbscan_eps accepts a number or "auto". Unknown keys and invariant
// violations throw ParseError.
AnalysisConfig read_analysis_config(const std::filesystem::path& path);
AnalysisConfig parse_analysis_config(const std::string& text, const std::string& path_label);

}  // namespace footfall
