#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace footfall {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double point_distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Axis-aligned rectangle in image pixels, origin top-left, y increasing downward.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
};

// Detection box in the same pixel coordinate system.
struct BoundingBox {
  double x = 0.0;  // left edge
  double y = 0.0;  // top edge
  double w = 0.0;
  double h = 0.0;
};

// Finite values with positive width and height.
bool box_valid(const BoundingBox& b);

// One time-stamped observation of a tracked person from one camera.
// track is a local id, unique only within its camera.
struct DetectionRecord {
  std::int64_t ts_ms = 0;
  std::string camera;
  std::int64_t track = 0;
  BoundingBox bbox;
  std::string category;
};

// Polygonal zone of interest. Polygons must be simple (no self-intersection)
// and carry at least 3 vertices. When zones overlap, the zone with the larger
// priority value wins.
struct ZonePolygon {
  std::string id;
  std::string name;
  std::vector<Point> vertices;
  int priority = 0;
};

// Start/Finish rectangles whose ordered first-touch sequence classifies a
// crossing as entry (S before F) or exit (F before S).
struct GatePair {
  Rect start_zone;
  Rect finish_zone;
  std::string camera;
};

struct TrajectorySample {
  std::int64_t ts_ms = 0;
  Point pos;  // anchor point, pixels
};

// Ordered anchor-point samples of one (possibly stitched) track.
// Timestamps are strictly increasing, except in resampled copies of a
// degenerate single-sample trajectory, which repeat the one timestamp.
struct Trajectory {
  std::int64_t track = 0;
  std::vector<TrajectorySample> samples;
};

// Venue description for one camera: named zones plus at most one gate pair.
struct ZoneConfig {
  std::string camera;
  std::vector<ZonePolygon> zones;
  std::optional<GatePair> gate;
};

// Analysis thresholds. Defaults follow the deployed values.
struct AnalysisConfig {
  double stability_threshold = 0.15;   // max normalized box change counted as stationary
  double stabilization_time_s = 2.0;   // stability required before the dwell timer starts
  double min_dwell_s = 60.0;
  double max_dwell_s = 7200.0;
  double track_gap_s = 3.0;            // detection gap that breaks a stable run
  double gate_tolerance = 0.05;        // centroid buffer, ratio of the bbox diagonal
  double max_crossing_time_s = 10.0;   // slower gate crossings are uncertain
  int resample_points = 20;
  int segment_length = 8;
  int segment_overlap = 2;
  double stitch_max_gap_s = 2.0;
  double stitch_max_distance_px = 75.0;
  std::int64_t frechet_cell_budget = 10000;  // |P|*|Q| above this falls back to Hausdorff
  int dbscan_min_pts = 3;
  std::optional<double> dbscan_eps;    // nullopt = auto (15th percentile of nonzero distances)
};

// Error message when a config violates its invariants, nullopt when valid.
std::optional<std::string> config_error(const AnalysisConfig& cfg);

}  // namespace footfall
