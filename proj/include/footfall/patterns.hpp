#pragma once

#include <span>

#include "footfall/types.hpp"

namespace footfall {

struct StitchMerge {
  std::int64_t absorbed = 0;  // track id folded away by the merge
  std::int64_t survivor = 0;  // id of the chain head that keeps the samples
  double gap_s = 0.0;         // time between the joined end and start
  double gap_px = 0.0;        // distance between the joined end and start
};

struct StitchPlan {
  std::vector<StitchMerge> merges;
};

struct StitchResult {
  std::vector<Trajectory> trajectories;
  StitchPlan plan;
};

// Repairs fragmented tracks: candidate joins are pairs where one trajectory
// ends at most cfg.stitch_max_gap_s before another starts and the endpoints
// are within cfg.stitch_max_distance_px. Candidates apply nearest-in-space
// first, each end and each start used at most once; chains may run through
// several fragments. Joins with a zero time gap are skipped so merged
// trajectories keep strictly increasing timestamps.
StitchResult stitch_tracks(std::vector<Trajectory> trajectories, const AnalysisConfig& cfg);

// Groups validated, sorted detections of one camera into per-track
// trajectories of anchor points.
std::vector<Trajectory> build_trajectories(std::span<const DetectionRecord> sorted_records);

// Zone visited by each sample (highest priority wins), with consecutive
// repeats collapsed; samples outside every zone are dropped and do not
// break adjacency.
std::vector<std::string> zone_sequence(const Trajectory& traj,
                                       std::span<const ZonePolygon> zones);

// Row-stochastic next-zone statistics. counts[i][j] tallies ordered
// adjacent pairs zone i -> zone j over all sequences; self-transitions are
// excluded, so the diagonal stays zero. probabilities divides each row by
// its tally sum; all-zero rows stay zero.
struct TransitionMatrix {
  std::vector<std::string> zone_ids;
  std::vector<std::vector<std::int64_t>> counts;
  std::vector<std::vector<double>> probabilities;
};

TransitionMatrix transition_matrix(std::span<const std::vector<std::string>> sequences,
                                   std::span<const ZonePolygon> zones);

// Per-zone sum of incoming transition probabilities, aligned with
// m.zone_ids. Summed over all zones this equals the number of rows with a
// nonzero tally.
std::vector<double> exposure_index(const TransitionMatrix& m);

// Person-seconds demand proxy: arrivals times mean service (dwell) time.
double load_index(double arrivals, double mean_service_s);
// Ratio of two load indices, e.g. a peak day against a baseline day.
double load_ratio(double arrivals_a, double mean_service_a_s, double arrivals_b,
                  double mean_service_b_s);

struct Segment {
  std::size_t start_index = 0;
  std::vector<Point> points;
};

struct SegmentSet {
  std::int64_t parent_track = 0;
  std::vector<Segment> segments;
};

// Sliding windows of cfg.segment_length points advancing by
// length - overlap. The first window starts at index 0; a final window that
// would overrun is anchored to end at the last point (overlapping its
// predecessor by more than the nominal overlap). Trajectories shorter than
// one window yield a single full-trajectory segment.
SegmentSet segment_trajectory(const Trajectory& traj, const AnalysisConfig& cfg);

inline constexpr int kNoiseLabel = -1;

struct ClusterResult {
  std::vector<int> labels;                // per item; kNoiseLabel marks noise
  std::vector<std::size_t> cluster_sizes; // indexed by cluster label
  std::vector<std::size_t> medoids;       // item index with minimal summed
                                          // distance to its cluster, lowest
                                          // index on ties
};

// DBSCAN over the pairwise trajectory_distance matrix. The eps-neighborhood
// of an item is every item at distance strictly below eps (itself included),
// and an item is core when that neighborhood holds at least
// cfg.dbscan_min_pts items; eps == 0 therefore marks everything noise.
// Auto eps (cfg.dbscan_eps unset) uses the 15th percentile of the nonzero
// pairwise distances, or 1.0 when all distances are zero. Items must share
// one point count. Deterministic: seeds expand in item order.
ClusterResult cluster(std::span<const std::vector<Point>> items, const AnalysisConfig& cfg);

}  // namespace footfall
