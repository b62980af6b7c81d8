#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "footfall/types.hpp"

namespace footfall {

enum class ScriptKind { pass_through, dwell, entry, exit, fragmented };

// One batch of identically scripted tracks.
struct ScriptGroup {
  ScriptKind kind = ScriptKind::pass_through;
  int count = 1;
  double duration_s = 90.0;   // dwell: scripted stationary time
  double crossing_s = 4.0;    // entry/exit: first-touch to first-touch span
  int pieces = 2;             // fragmented: number of track ids
  double fragment_gap_s = 1.0;
  std::optional<Point> from;  // pass_through corridor endpoints
  std::optional<Point> to;
};

struct NoiseSpec {
  double jitter_px = 0.0;     // uniform +-jitter on anchor positions
  double dropout_prob = 0.0;  // per-sample drop probability
};

// Deterministic scene script: the seed fully determines the output stream.
struct SyntheticSpec {
  std::uint64_t seed = 0;
  std::string camera = "cam1";
  std::int64_t start_ts_ms = 1746100800000;  // 2025-05-01T12:00:00Z
  double fps = 5.0;
  NoiseSpec noise;
  std::optional<ZoneConfig> zones;  // default venue when absent
  std::vector<ScriptGroup> groups;
};

// What the stream was scripted to contain, one row per scripted behavior.
// label is dwell / entry / exit / uncertain / pass_through / fragmented;
// value carries the scripted dwell seconds, crossing seconds, corridor
// group index, or piece count. Expected flow labels assume the default
// 10 s crossing limit.
struct GroundTruthLabel {
  std::int64_t track = 0;
  std::string label;
  double value = 0.0;
};

struct SyntheticResult {
  std::vector<DetectionRecord> records;  // time-sorted
  std::vector<GroundTruthLabel> labels;
  ZoneConfig zones;
};

// Built-in venue: a 1280x720 scene with a central seating polygon, west and
// east aisle zones, and a Start/Finish gate pair on the left and right edges.
ZoneConfig default_venue(const std::string& camera);

SyntheticResult generate_synthetic(const SyntheticSpec& spec);

// JSON spec document: {seed, camera, start_ts_ms, fps, noise:{jitter_px,
// dropout_prob}, zones: <zone config document>, tracks: [{script, count,
// duration_s, crossing_s, pieces, fragment_gap_s, from, to}]}.
// Throws ParseError on malformed or semantically invalid specs.
SyntheticSpec read_synthetic_spec(const std::filesystem::path& path);
SyntheticSpec parse_synthetic_spec(const std::string& text, const std::string& path_label);

// Serialization helpers shared by the CLI and tests.
std::string detections_to_csv(const std::vector<DetectionRecord>& records);
std::string labels_to_csv(const std::vector<GroundTruthLabel>& labels);
std::string zone_config_to_json(const ZoneConfig& zones);

}  // namespace footfall
