#include "footfall/dwell.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "footfall/geometry.hpp"

namespace footfall {

StabilityVerdict stability_check(const BoundingBox& prev, const BoundingBox& curr,
                                 double threshold) {
  const double dx = std::abs(curr.x - prev.x) / prev.w;
  const double dy = std::abs(curr.y - prev.y) / prev.h;
  const double dw = std::abs(curr.w - prev.w) / prev.w;
  const double dh = std::abs(curr.h - prev.h) / prev.h;
  const double max_change = std::max({dx, dy, dw, dh});
  return {max_change < threshold, max_change};
}

std::vector<DwellEvent> extract_dwell_events(std::span<const DetectionRecord> track_records,
                                             const ZonePolygon& zoi, const AnalysisConfig& cfg) {
  std::vector<DwellEvent> events;
  if (track_records.empty()) return events;

  const double gap_limit_ms = cfg.track_gap_s * 1000.0;

  enum class State { outside, candidate, dwelling };
  State state = State::outside;
  std::size_t window_start = 0;  // first sample of the current stable window
  std::size_t window_last = 0;

  const auto close_window = [&] {
    if (state == State::dwelling) {
      const double span_s =
          static_cast<double>(track_records[window_last].ts_ms - track_records[window_start].ts_ms) /
          1000.0;
      if (span_s >= cfg.min_dwell_s) {
        DwellEvent event;
        event.track = track_records[window_start].track;
        event.zone_id = zoi.id;
        event.start_ts_ms = track_records[window_start].ts_ms;
        event.end_ts_ms = track_records[window_last].ts_ms;
        event.capped = span_s > cfg.max_dwell_s;
        event.duration_s = event.capped ? cfg.max_dwell_s : span_s;
        events.push_back(std::move(event));
      }
    }
    state = State::outside;
  };

  bool prev_inside = polygon_contains(zoi.vertices, anchor_point(track_records[0].bbox));
  for (std::size_t i = 1; i < track_records.size(); ++i) {
    const auto& prev = track_records[i - 1];
    const auto& curr = track_records[i];
    const bool inside = polygon_contains(zoi.vertices, anchor_point(curr.bbox));
    const bool pair_stable =
        inside && prev_inside &&
        static_cast<double>(curr.ts_ms - prev.ts_ms) <= gap_limit_ms &&
        stability_check(prev.bbox, curr.bbox, cfg.stability_threshold).stable;

    if (pair_stable) {
      if (state == State::outside) {
        state = State::candidate;
        window_start = i - 1;  // timer backdated to the first sample of the window
      }
      window_last = i;
      if (state == State::candidate) {
        const double span_s =
            static_cast<double>(curr.ts_ms - track_records[window_start].ts_ms) / 1000.0;
        if (span_s >= cfg.stabilization_time_s) state = State::dwelling;
      }
    } else {
      close_window();
    }
    prev_inside = inside;
  }
  close_window();
  return events;
}

std::optional<DailySummary> daily_summary(std::span<const DwellEvent> events,
                                          const std::string& date) {
  if (events.empty()) return std::nullopt;
  std::vector<double> durations;
  durations.reserve(events.size());
  for (const auto& e : events) durations.push_back(e.duration_s);
  std::sort(durations.begin(), durations.end());

  const std::size_t n = durations.size();
  double sum = 0.0;
  for (const double d : durations) sum += d;
  const double mean = sum / static_cast<double>(n);

  const double median =
      n % 2 == 1 ? durations[n / 2] : (durations[n / 2 - 1] + durations[n / 2]) / 2.0;

  double sd = 0.0;
  if (n > 1) {
    double ss = 0.0;
    for (const double d : durations) ss += (d - mean) * (d - mean);
    sd = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return DailySummary{date, n, mean, median, sd};
}

std::vector<HistogramBin> dwell_histogram(std::span<const DwellEvent> events,
                                          double bin_width_s) {
  if (!(bin_width_s > 0.0)) {
    throw std::invalid_argument("dwell_histogram: bin width must be positive");
  }
  if (events.empty()) return {};

  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  std::vector<std::int64_t> bins;
  bins.reserve(events.size());
  for (const auto& e : events) {
    const auto bin = static_cast<std::int64_t>(std::floor(e.duration_s / bin_width_s));
    bins.push_back(bin);
    lo = std::min(lo, bin);
    hi = std::max(hi, bin);
  }

  std::vector<HistogramBin> out(static_cast<std::size_t>(hi - lo + 1));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].bin_start_s = static_cast<double>(lo + static_cast<std::int64_t>(i)) * bin_width_s;
  }
  for (const auto bin : bins) ++out[static_cast<std::size_t>(bin - lo)].count;
  return out;
}

}  // namespace footfall
