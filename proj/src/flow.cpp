#include "footfall/flow.hpp"

#include <algorithm>
#include <map>

#include "footfall/geometry.hpp"
#include "footfall/report.hpp"

namespace footfall {

const char* to_string(FlowDirection d) {
  switch (d) {
    case FlowDirection::entry: return "entry";
    case FlowDirection::exit: return "exit";
    case FlowDirection::uncertain: return "uncertain";
  }
  return "uncertain";
}

std::optional<FlowEvent> classify_crossing(std::span<const DetectionRecord> track_records,
                                           const GatePair& gates, const AnalysisConfig& cfg) {
  std::optional<std::int64_t> start_touch;
  std::optional<std::int64_t> finish_touch;
  for (const auto& r : track_records) {
    if (!start_touch && gate_contains(r.bbox, gates.start_zone, cfg.gate_tolerance)) {
      start_touch = r.ts_ms;
    }
    if (!finish_touch && gate_contains(r.bbox, gates.finish_zone, cfg.gate_tolerance)) {
      finish_touch = r.ts_ms;
    }
    if (start_touch && finish_touch) break;
  }
  if (!start_touch || !finish_touch) return std::nullopt;

  FlowEvent event;
  event.track = track_records.front().track;
  event.first_zone_ts_ms = std::min(*start_touch, *finish_touch);
  event.second_zone_ts_ms = std::max(*start_touch, *finish_touch);
  const double span_s =
      static_cast<double>(event.second_zone_ts_ms - event.first_zone_ts_ms) / 1000.0;
  if (span_s > cfg.max_crossing_time_s) {
    event.direction = FlowDirection::uncertain;
  } else {
    event.direction =
        *start_touch <= *finish_touch ? FlowDirection::entry : FlowDirection::exit;
  }
  return event;
}

std::vector<DailyFlowCounts> count_daily_flows(std::span<const FlowEvent> events,
                                               const std::string& camera,
                                               int tz_offset_minutes) {
  std::map<std::string, DailyFlowCounts> by_day;
  for (const auto& e : events) {
    const std::string date = format_date(e.first_zone_ts_ms, tz_offset_minutes);
    auto& row = by_day[date];
    row.date = date;
    row.camera = camera;
    switch (e.direction) {
      case FlowDirection::entry: ++row.entries; break;
      case FlowDirection::exit: ++row.exits; break;
      case FlowDirection::uncertain: ++row.uncertain; break;
    }
  }
  std::vector<DailyFlowCounts> out;
  out.reserve(by_day.size());
  for (auto& [date, row] : by_day) out.push_back(std::move(row));
  return out;
}

}  // namespace footfall
