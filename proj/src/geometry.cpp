#include "footfall/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace footfall {

bool box_valid(const BoundingBox& b) {
  return std::isfinite(b.x) && std::isfinite(b.y) && std::isfinite(b.w) && std::isfinite(b.h) &&
         b.w > 0.0 && b.h > 0.0;
}

std::optional<std::string> config_error(const AnalysisConfig& cfg) {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(cfg.stability_threshold)) return "stability_threshold must be positive";
  if (!positive(cfg.stabilization_time_s)) return "stabilization_time must be positive";
  if (!positive(cfg.min_dwell_s)) return "min_dwell must be positive";
  if (!positive(cfg.max_dwell_s)) return "max_dwell must be positive";
  if (!(cfg.min_dwell_s < cfg.max_dwell_s)) return "min_dwell must be below max_dwell";
  if (!positive(cfg.track_gap_s)) return "track_gap must be positive";
  if (!positive(cfg.gate_tolerance)) return "gate_tolerance must be positive";
  if (!positive(cfg.max_crossing_time_s)) return "max_crossing_time must be positive";
  if (cfg.resample_points < 2) return "resample_points must be at least 2";
  if (cfg.segment_length < 2) return "segment_length must be at least 2";
  if (cfg.segment_overlap < 1) return "segment_overlap must be positive";
  if (!(cfg.segment_overlap < cfg.segment_length))
    return "segment_overlap must be below segment_length";
  if (!positive(cfg.stitch_max_gap_s)) return "stitch_max_gap must be positive";
  if (!positive(cfg.stitch_max_distance_px)) return "stitch_max_distance must be positive";
  if (cfg.frechet_cell_budget < 1) return "frechet_cell_budget must be positive";
  if (cfg.dbscan_min_pts < 1) return "dbscan_min_pts must be positive";
  if (cfg.dbscan_eps && !(std::isfinite(*cfg.dbscan_eps) && *cfg.dbscan_eps >= 0.0))
    return "dbscan_eps must be a non-negative number or \"auto\"";
  return std::nullopt;
}

Point anchor_point(const BoundingBox& b) {
  return {b.x + b.w / 2.0, b.y + b.h};
}

namespace {

bool on_segment(const Point& a, const Point& b, const Point& p) {
  const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
  if (cross != 0.0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

int orientation(const Point& a, const Point& b, const Point& c) {
  const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
}

bool segments_touch(const Point& a, const Point& b, const Point& c, const Point& d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace

bool polygon_contains(std::span<const Point> vertices, const Point& p) {
  const std::size_t n = vertices.size();
  if (n < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& vi = vertices[i];
    const Point& vj = vertices[j];
    if (on_segment(vj, vi, p)) return true;  // boundary counts as inside
    if ((vi.y > p.y) != (vj.y > p.y)) {
      const double x_at = vj.x + (p.y - vj.y) / (vi.y - vj.y) * (vi.x - vj.x);
      if (p.x < x_at) inside = !inside;
    }
  }
  return inside;
}

bool polygon_simple(std::span<const Point> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = vertices[i];
    const Point& b = vertices[(i + 1) % n];
    if (a.x == b.x && a.y == b.y) return false;  // degenerate edge
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // skip edges sharing a vertex (consecutive, and the closing pair)
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_touch(vertices[i], vertices[(i + 1) % n], vertices[j],
                         vertices[(j + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

std::optional<std::string> zone_of(const Point& p, std::span<const ZonePolygon> zones) {
  const ZonePolygon* best = nullptr;
  for (const auto& zone : zones) {
    if (!polygon_contains(zone.vertices, p)) continue;
    if (best == nullptr || zone.priority > best->priority) best = &zone;
  }
  if (best == nullptr) return std::nullopt;
  return best->id;
}

bool gate_contains(const BoundingBox& b, const Rect& rect, double tolerance) {
  if (!(rect.w > 0.0) || !(rect.h > 0.0)) return false;
  const Point centroid{b.x + b.w / 2.0, b.y + b.h / 2.0};
  const double radius = tolerance * std::hypot(b.w, b.h);
  const double nx = std::clamp(centroid.x, rect.x, rect.x + rect.w);
  const double ny = std::clamp(centroid.y, rect.y, rect.y + rect.h);
  return std::hypot(centroid.x - nx, centroid.y - ny) <= radius;
}

Trajectory resample(const Trajectory& traj, int n) {
  if (n < 2) throw std::invalid_argument("resample: need at least 2 output points");
  if (traj.samples.empty()) throw std::invalid_argument("resample: empty trajectory");

  Trajectory out;
  out.track = traj.track;
  out.samples.reserve(static_cast<std::size_t>(n));

  const auto& s = traj.samples;
  if (s.size() == 1) {
    out.samples.assign(static_cast<std::size_t>(n), s.front());
    return out;
  }

  std::vector<double> cum(s.size(), 0.0);
  for (std::size_t i = 1; i < s.size(); ++i) {
    cum[i] = cum[i - 1] + point_distance(s[i - 1].pos, s[i].pos);
  }
  const double total = cum.back();

  if (total == 0.0) {
    // all samples coincide; spread timestamps, keep the position
    for (int k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) / (n - 1);
      const double ts = static_cast<double>(s.front().ts_ms) +
                        t * static_cast<double>(s.back().ts_ms - s.front().ts_ms);
      out.samples.push_back({static_cast<std::int64_t>(std::llround(ts)), s.front().pos});
    }
    return out;
  }

  std::size_t seg = 0;
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      out.samples.push_back(s.front());
      continue;
    }
    if (k == n - 1) {
      out.samples.push_back(s.back());
      continue;
    }
    const double target = total * static_cast<double>(k) / (n - 1);
    while (seg + 2 < s.size() && cum[seg + 1] < target) ++seg;
    const double seg_len = cum[seg + 1] - cum[seg];
    const double t = seg_len > 0.0 ? (target - cum[seg]) / seg_len : 0.0;
    const Point pos{s[seg].pos.x + t * (s[seg + 1].pos.x - s[seg].pos.x),
                    s[seg].pos.y + t * (s[seg + 1].pos.y - s[seg].pos.y)};
    const double ts = static_cast<double>(s[seg].ts_ms) +
                      t * static_cast<double>(s[seg + 1].ts_ms - s[seg].ts_ms);
    out.samples.push_back({static_cast<std::int64_t>(std::llround(ts)), pos});
  }
  return out;
}

double discrete_frechet(std::span<const Point> p, std::span<const Point> q) {
  if (p.empty() || q.empty()) throw std::invalid_argument("discrete_frechet: empty input");
  const std::size_t m = q.size();
  std::vector<double> prev(m), curr(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double d = point_distance(p[0], q[j]);
    prev[j] = j == 0 ? d : std::max(prev[j - 1], d);
  }
  for (std::size_t i = 1; i < p.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = point_distance(p[i], q[j]);
      const double reach =
          j == 0 ? prev[0] : std::min({prev[j], prev[j - 1], curr[j - 1]});
      curr[j] = std::max(d, reach);
    }
    std::swap(prev, curr);
  }
  return prev[m - 1];
}

namespace {

double directed_hausdorff(std::span<const Point> p, std::span<const Point> q) {
  double worst = 0.0;
  for (const auto& a : p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : q) best = std::min(best, point_distance(a, b));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double hausdorff(std::span<const Point> p, std::span<const Point> q) {
  if (p.empty() || q.empty()) throw std::invalid_argument("hausdorff: empty input");
  return std::max(directed_hausdorff(p, q), directed_hausdorff(q, p));
}

DistanceResult trajectory_distance(std::span<const Point> p, std::span<const Point> q,
                                   const AnalysisConfig& cfg) {
  const auto cells = static_cast<std::int64_t>(p.size()) * static_cast<std::int64_t>(q.size());
  if (cells <= cfg.frechet_cell_budget) {
    return {discrete_frechet(p, q), DistanceMethod::frechet};
  }
  return {hausdorff(p, q), DistanceMethod::hausdorff};
}

DistanceResult trajectory_distance(const Trajectory& p, const Trajectory& q,
                                   const AnalysisConfig& cfg) {
  const auto pp = positions(p);
  const auto qp = positions(q);
  return trajectory_distance(std::span<const Point>(pp), std::span<const Point>(qp), cfg);
}

std::vector<Point> positions(const Trajectory& traj) {
  std::vector<Point> out;
  out.reserve(traj.samples.size());
  for (const auto& s : traj.samples) out.push_back(s.pos);
  return out;
}

}  // namespace footfall
