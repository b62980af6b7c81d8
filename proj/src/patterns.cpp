#include "footfall/patterns.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>

#include "footfall/geometry.hpp"

namespace footfall {

namespace {

// union-find over trajectory slots, used to keep stitch chains acyclic
class ChainSets {
 public:
  explicit ChainSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

StitchResult stitch_tracks(std::vector<Trajectory> trajectories, const AnalysisConfig& cfg) {
  const std::size_t n = trajectories.size();

  struct Candidate {
    double dist_px;
    double gap_s;
    std::size_t from;  // trajectory whose end is joined
    std::size_t to;    // trajectory whose start is joined
  };
  std::vector<Candidate> candidates;
  const double max_gap_ms = cfg.stitch_max_gap_s * 1000.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (trajectories[i].samples.empty()) continue;
    const auto& tail = trajectories[i].samples.back();
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || trajectories[j].samples.empty()) continue;
      const auto& head = trajectories[j].samples.front();
      const double gap_ms = static_cast<double>(head.ts_ms - tail.ts_ms);
      if (gap_ms <= 0.0 || gap_ms > max_gap_ms) continue;
      const double dist = point_distance(tail.pos, head.pos);
      if (dist > cfg.stitch_max_distance_px) continue;
      candidates.push_back({dist, gap_ms / 1000.0, i, j});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.dist_px != b.dist_px) return a.dist_px < b.dist_px;
    if (a.gap_s != b.gap_s) return a.gap_s < b.gap_s;
    if (trajectories[a.from].track != trajectories[b.from].track)
      return trajectories[a.from].track < trajectories[b.from].track;
    return trajectories[a.to].track < trajectories[b.to].track;
  });

  std::vector<bool> end_used(n, false), start_used(n, false);
  std::vector<std::optional<std::size_t>> next(n);
  std::vector<std::pair<double, double>> join_evidence(n);  // keyed by joined-in slot
  ChainSets chains(n);
  for (const auto& c : candidates) {
    if (end_used[c.from] || start_used[c.to]) continue;
    if (chains.find(c.from) == chains.find(c.to)) continue;
    end_used[c.from] = true;
    start_used[c.to] = true;
    next[c.from] = c.to;
    join_evidence[c.to] = {c.gap_s, c.dist_px};
    chains.unite(c.from, c.to);
  }

  StitchResult result;
  for (std::size_t i = 0; i < n; ++i) {
    if (start_used[i]) continue;  // not a chain head
    Trajectory merged;
    merged.track = trajectories[i].track;
    merged.samples = std::move(trajectories[i].samples);
    std::size_t at = i;
    while (next[at]) {
      const std::size_t follower = *next[at];
      result.plan.merges.push_back({trajectories[follower].track, merged.track,
                                    join_evidence[follower].first,
                                    join_evidence[follower].second});
      auto& extra = trajectories[follower].samples;
      merged.samples.insert(merged.samples.end(), std::make_move_iterator(extra.begin()),
                            std::make_move_iterator(extra.end()));
      at = follower;
    }
    result.trajectories.push_back(std::move(merged));
  }
  return result;
}

std::vector<Trajectory> build_trajectories(std::span<const DetectionRecord> sorted_records) {
  std::vector<Trajectory> out;
  for (const auto& r : sorted_records) {
    if (out.empty() || out.back().track != r.track) {
      out.push_back({r.track, {}});
    }
    out.back().samples.push_back({r.ts_ms, anchor_point(r.bbox)});
  }
  return out;
}

std::vector<std::string> zone_sequence(const Trajectory& traj,
                                       std::span<const ZonePolygon> zones) {
  std::vector<std::string> seq;
  for (const auto& s : traj.samples) {
    auto zone = zone_of(s.pos, zones);
    if (!zone) continue;
    if (seq.empty() || seq.back() != *zone) seq.push_back(std::move(*zone));
  }
  return seq;
}

TransitionMatrix transition_matrix(std::span<const std::vector<std::string>> sequences,
                                   std::span<const ZonePolygon> zones) {
  TransitionMatrix m;
  std::map<std::string, std::size_t> index;
  for (const auto& z : zones) {
    index.emplace(z.id, m.zone_ids.size());
    m.zone_ids.push_back(z.id);
  }
  const std::size_t n = m.zone_ids.size();
  m.counts.assign(n, std::vector<std::int64_t>(n, 0));
  m.probabilities.assign(n, std::vector<double>(n, 0.0));

  for (const auto& seq : sequences) {
    for (std::size_t k = 1; k < seq.size(); ++k) {
      const auto from = index.find(seq[k - 1]);
      const auto to = index.find(seq[k]);
      if (from == index.end() || to == index.end()) continue;
      if (from->second == to->second) continue;  // self-transitions excluded
      ++m.counts[from->second][to->second];
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t row_sum = 0;
    for (const auto c : m.counts[i]) row_sum += c;
    if (row_sum == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      m.probabilities[i][j] =
          static_cast<double>(m.counts[i][j]) / static_cast<double>(row_sum);
    }
  }
  return m;
}

std::vector<double> exposure_index(const TransitionMatrix& m) {
  const std::size_t n = m.zone_ids.size();
  std::vector<double> exposure(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) exposure[j] += m.probabilities[i][j];
  }
  return exposure;
}

double load_index(double arrivals, double mean_service_s) {
  return arrivals * mean_service_s;
}

double load_ratio(double arrivals_a, double mean_service_a_s, double arrivals_b,
                  double mean_service_b_s) {
  return load_index(arrivals_a, mean_service_a_s) / load_index(arrivals_b, mean_service_b_s);
}

SegmentSet segment_trajectory(const Trajectory& traj, const AnalysisConfig& cfg) {
  SegmentSet out;
  out.parent_track = traj.track;
  const auto& samples = traj.samples;
  const std::size_t n = samples.size();
  if (n == 0) return out;

  const auto window = [&](std::size_t start, std::size_t len) {
    Segment seg;
    seg.start_index = start;
    seg.points.reserve(len);
    for (std::size_t k = start; k < start + len; ++k) seg.points.push_back(samples[k].pos);
    return seg;
  };

  const auto len = static_cast<std::size_t>(cfg.segment_length);
  if (len > n) {
    out.segments.push_back(window(0, n));
    return out;
  }
  const std::size_t stride = len - static_cast<std::size_t>(cfg.segment_overlap);
  std::size_t start = 0;
  while (true) {
    out.segments.push_back(window(start, len));
    if (start + len >= n) break;
    std::size_t next_start = start + stride;
    if (next_start + len > n) next_start = n - len;  // anchor the final window
    start = next_start;
  }
  return out;
}

namespace {

double auto_eps(const std::vector<double>& dist, std::size_t n) {
  std::vector<double> nonzero;
  nonzero.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = dist[i * n + j];
      if (d > 0.0) nonzero.push_back(d);
    }
  }
  if (nonzero.empty()) return 1.0;
  std::sort(nonzero.begin(), nonzero.end());
  // nearest-rank 15th percentile
  const auto rank = static_cast<std::size_t>(
      std::ceil(0.15 * static_cast<double>(nonzero.size())));
  return nonzero[std::max<std::size_t>(rank, 1) - 1];
}

}  // namespace

ClusterResult cluster(std::span<const std::vector<Point>> items, const AnalysisConfig& cfg) {
  constexpr int kUnvisited = -2;
  const std::size_t n = items.size();
  ClusterResult result;
  result.labels.assign(n, kUnvisited);
  if (n == 0) return result;

  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = trajectory_distance(items[i], items[j], cfg).value;
      dist[i * n + j] = d;
      dist[j * n + i] = d;
    }
  }

  const double eps = cfg.dbscan_eps ? *cfg.dbscan_eps : auto_eps(dist, n);
  const auto min_pts = static_cast<std::size_t>(cfg.dbscan_min_pts);

  std::vector<std::vector<std::size_t>> neighbors(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (dist[i * n + j] < eps) neighbors[i].push_back(j);
    }
  }

  int next_label = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (result.labels[i] != kUnvisited) continue;
    if (neighbors[i].size() < min_pts) {
      result.labels[i] = kNoiseLabel;
      continue;
    }
    const int label = next_label++;
    result.labels[i] = label;
    std::deque<std::size_t> frontier(neighbors[i].begin(), neighbors[i].end());
    while (!frontier.empty()) {
      const std::size_t q = frontier.front();
      frontier.pop_front();
      if (result.labels[q] == kNoiseLabel) result.labels[q] = label;  // border claim
      if (result.labels[q] != kUnvisited) continue;
      result.labels[q] = label;
      if (neighbors[q].size() >= min_pts) {
        frontier.insert(frontier.end(), neighbors[q].begin(), neighbors[q].end());
      }
    }
  }

  result.cluster_sizes.assign(static_cast<std::size_t>(next_label), 0);
  for (const int label : result.labels) {
    if (label >= 0) ++result.cluster_sizes[static_cast<std::size_t>(label)];
  }

  result.medoids.assign(static_cast<std::size_t>(next_label), 0);
  for (int c = 0; c < next_label; ++c) {
    double best_sum = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (result.labels[i] != c) continue;
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (result.labels[j] == c) sum += dist[i * n + j];
      }
      if (sum < best_sum) {
        best_sum = sum;
        best = i;
      }
    }
    result.medoids[static_cast<std::size_t>(c)] = best;
  }
  return result;
}

}  // namespace footfall
