#pragma once

#include <span>

#include "footfall/types.hpp"

namespace footfall {

enum class FlowDirection { entry, exit, uncertain };

const char* to_string(FlowDirection d);

struct FlowEvent {
  std::int64_t track = 0;
  FlowDirection direction = FlowDirection::uncertain;
  std::int64_t first_zone_ts_ms = 0;
  std::int64_t second_zone_ts_ms = 0;
};

// Classifies one track's gate crossing from the first timestamps at which
// the buffered centroid (gate_contains with cfg.gate_tolerance) touches the
// Start and Finish rectangles. Start first means entry, Finish first means
// exit; a span between the two first touches above cfg.max_crossing_time_s
// means uncertain. Tracks touching at most one rectangle yield nullopt.
// A simultaneous first touch of both rectangles counts as entry (the Start
// test runs first within a sample). Re-touches after the first pair are
// ignored; a track produces at most one event.
std::optional<FlowEvent> classify_crossing(std::span<const DetectionRecord> track_records,
                                           const GatePair& gates, const AnalysisConfig& cfg);

struct DailyFlowCounts {
  std::string date;  // YYYY-MM-DD
  std::string camera;
  std::size_t entries = 0;
  std::size_t exits = 0;
  std::size_t uncertain = 0;
};

// Groups events by the calendar day of their first-touch timestamp (shifted
// by tz_offset_minutes) and tallies per direction; uncertain events stay out
// of the entry/exit columns. Rows come back date-sorted.
std::vector<DailyFlowCounts> count_daily_flows(std::span<const FlowEvent> events,
                                               const std::string& camera,
                                               int tz_offset_minutes = 0);

}  // namespace footfall
