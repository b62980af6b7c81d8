#pragma once

#include <span>

#include "footfall/types.hpp"

namespace footfall {

enum class DistanceMethod { frechet, hausdorff };

struct DistanceResult {
  double value = 0.0;
  DistanceMethod method = DistanceMethod::frechet;
};

// Bottom-center of the box: (x + w/2, y + h), a foot-position proxy.
Point anchor_point(const BoundingBox& b);

// Boundary-inclusive point-in-polygon test (crossing number with an exact
// on-edge pre-check). Fewer than 3 vertices contains nothing.
bool polygon_contains(std::span<const Point> vertices, const Point& p);

// True when the polygon has no duplicate consecutive vertices and no two
// non-adjacent edges touch.
bool polygon_simple(std::span<const Point> vertices);

// Highest-priority zone containing p, or nullopt when no zone does.
std::optional<std::string> zone_of(const Point& p, std::span<const ZonePolygon> zones);

// True iff the disk around the bbox centroid with radius
// tolerance * sqrt(w^2 + h^2) intersects rect (clamped nearest-point test,
// boundary touch counts). Degenerate rects contain nothing.
bool gate_contains(const BoundingBox& b, const Rect& rect, double tolerance);

// n >= 2 points uniformly spaced by cumulative arc length along the
// piecewise-linear path. First and last original points are preserved and
// timestamps are interpolated alongside positions. A single-sample
// trajectory yields n copies of that sample.
Trajectory resample(const Trajectory& traj, int n);

// Discrete Fréchet distance: the coupling dynamic program under the
// Euclidean norm. Symmetric; throws std::invalid_argument on empty input.
double discrete_frechet(std::span<const Point> p, std::span<const Point> q);

// Symmetric Hausdorff distance over the two point sets.
double hausdorff(std::span<const Point> p, std::span<const Point> q);

// Fréchet while |p|*|q| fits cfg.frechet_cell_budget, Hausdorff beyond it.
DistanceResult trajectory_distance(std::span<const Point> p, std::span<const Point> q,
                                   const AnalysisConfig& cfg);
DistanceResult trajectory_distance(const Trajectory& p, const Trajectory& q,
                                   const AnalysisConfig& cfg);

std::vector<Point> positions(const Trajectory& traj);

}  // namespace footfall
