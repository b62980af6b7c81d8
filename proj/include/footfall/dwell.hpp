#pragma once

#include <span>

#include "footfall/types.hpp"

namespace footfall {

struct StabilityVerdict {
  bool stable = false;
  double max_relative_change = 0.0;
};

// Rolling (t-1) rule: the four normalized changes are |dx|/prev.w,
// |dy|/prev.h, |dw|/prev.w, |dh|/prev.h; stable iff their maximum is
// strictly below the threshold.
StabilityVerdict stability_check(const BoundingBox& prev, const BoundingBox& curr,
                                 double threshold);

// A contiguous stationary stay of one track inside a zone of interest.
// duration_s is truncated to max_dwell when the raw span exceeded it
// (capped = true); end_ts_ms keeps the observed exit time.
struct DwellEvent {
  std::int64_t track = 0;
  std::string zone_id;
  std::int64_t start_ts_ms = 0;
  std::int64_t end_ts_ms = 0;
  double duration_s = 0.0;
  bool capped = false;
};

// Scans the time-sorted detections of one track for stays inside the zone.
// A stay is a run of consecutive detections whose anchors lie in the zone
// and whose consecutive pairs are stable with gaps within cfg.track_gap_s;
// the timer is backdated to the first sample of the run. Runs shorter than
// the stabilization time never start a dwell, and only runs of at least
// min_dwell seconds are emitted. One track may emit several events.
std::vector<DwellEvent> extract_dwell_events(std::span<const DetectionRecord> track_records,
                                             const ZonePolygon& zoi, const AnalysisConfig& cfg);

struct DailySummary {
  std::string date;  // YYYY-MM-DD
  std::size_t n = 0;
  double mean_s = 0.0;
  double median_s = 0.0;
  double sd_s = 0.0;  // sample standard deviation, 0 when n == 1
};

// Summary statistics for the events of one calendar day (assignment by
// start timestamp is the caller's job). Returns nullopt for no events.
std::optional<DailySummary> daily_summary(std::span<const DwellEvent> events,
                                          const std::string& date);

struct HistogramBin {
  double bin_start_s = 0.0;
  std::size_t count = 0;
};

// Left-closed right-open bins aligned to multiples of bin_width_s. Bins are
// listed contiguously from the first through the last nonempty bin; leading
// and trailing empty bins are omitted. Throws on non-positive widths.
std::vector<HistogramBin> dwell_histogram(std::span<const DwellEvent> events,
                                          double bin_width_s);

}  // namespace footfall
