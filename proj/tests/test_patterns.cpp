#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "footfall/geometry.hpp"
#include "footfall/patterns.hpp"
#include "oracles.hpp"

using namespace footfall;

namespace {

Trajectory traj(std::int64_t track, std::vector<std::pair<std::int64_t, Point>> samples) {
  Trajectory t;
  t.track = track;
  for (const auto& [ts, pos] : samples) t.samples.push_back({ts, pos});
  return t;
}

ZonePolygon square(const std::string& id, double x0, double y0, double side, int priority) {
  return {id, id, {{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}}, priority};
}

std::vector<Point> line(double x0, double y0, double x1, double y1, int n = 20) {
  std::vector<Point> pts;
  for (int k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / (n - 1);
    pts.push_back({x0 + t * (x1 - x0), y0 + t * (y1 - y0)});
  }
  return pts;
}

}  // namespace

TEST_CASE("stitch_tracks merges close fragments") {
  AnalysisConfig cfg;
  const auto a = traj(1, {{0, {0, 0}}, {10000, {100, 100}}});
  const auto b = traj(2, {{10500, {110, 105}}, {20000, {200, 200}}});

  auto result = stitch_tracks({a, b}, cfg);
  REQUIRE(result.trajectories.size() == 1);
  REQUIRE(result.plan.merges.size() == 1);
  CHECK(result.plan.merges[0].absorbed == 2);
  CHECK(result.plan.merges[0].survivor == 1);
  CHECK(result.plan.merges[0].gap_s == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(result.plan.merges[0].gap_px == doctest::Approx(std::sqrt(125.0)).epsilon(1e-12));
  CHECK(result.trajectories[0].samples.size() == 4);
  CHECK(result.trajectories[0].track == 1);
}

TEST_CASE("stitch_tracks respects the gap and distance thresholds") {
  AnalysisConfig cfg;
  const auto a = traj(1, {{0, {0, 0}}, {10000, {100, 100}}});
  const auto late = traj(2, {{15000, {110, 105}}, {20000, {200, 200}}});
  CHECK(stitch_tracks({a, late}, cfg).plan.merges.empty());

  const auto far = traj(2, {{10500, {300, 100}}, {20000, {200, 200}}});
  CHECK(stitch_tracks({a, far}, cfg).plan.merges.empty());
}

TEST_CASE("stitch_tracks chains transitively and keeps time order") {
  AnalysisConfig cfg;
  const auto a = traj(1, {{0, {0, 0}}, {1000, {10, 0}}});
  const auto b = traj(2, {{2000, {20, 0}}, {3000, {30, 0}}});
  const auto c = traj(3, {{4000, {40, 0}}, {5000, {50, 0}}});
  auto result = stitch_tracks({a, b, c}, cfg);
  REQUIRE(result.trajectories.size() == 1);
  REQUIRE(result.plan.merges.size() == 2);
  CHECK(result.plan.merges[0].survivor == 1);
  CHECK(result.plan.merges[1].survivor == 1);
  const auto& samples = result.trajectories[0].samples;
  REQUIRE(samples.size() == 6);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    CHECK(samples[i].ts_ms > samples[i - 1].ts_ms);
  }
}

TEST_CASE("stitching competing candidates resolves nearest-in-space first") {
  AnalysisConfig cfg;
  const auto a = traj(1, {{0, {0, 0}}, {10000, {100, 100}}});
  const auto near_b = traj(2, {{10500, {105, 100}}, {20000, {0, 0}}});
  const auto far_b = traj(3, {{10400, {130, 100}}, {20000, {300, 300}}});
  auto result = stitch_tracks({a, far_b, near_b}, cfg);
  REQUIRE(result.plan.merges.size() == 1);
  CHECK(result.plan.merges[0].absorbed == 2);  // 5 px beats 30 px despite the shorter gap
}

TEST_CASE("stitching never loses samples or breaks ordering on random inputs") {
  AnalysisConfig cfg;
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> coord(0.0, 500.0);
  for (int round = 0; round < 50; ++round) {
    std::vector<Trajectory> input;
    std::size_t total = 0;
    std::int64_t t0 = 0;
    for (int i = 0; i < 12; ++i) {
      Trajectory t;
      t.track = i;
      const int n = 2 + static_cast<int>(rng() % 6);
      for (int k = 0; k < n; ++k) {
        t.samples.push_back({t0, {coord(rng), coord(rng)}});
        t0 += 200 + static_cast<std::int64_t>(rng() % 300);
      }
      t0 += static_cast<std::int64_t>(rng() % 3000);  // sometimes stitchable
      total += t.samples.size();
      input.push_back(std::move(t));
    }
    const auto result = stitch_tracks(input, cfg);
    std::size_t got = 0;
    for (const auto& t : result.trajectories) {
      got += t.samples.size();
      for (std::size_t i = 1; i < t.samples.size(); ++i) {
        REQUIRE(t.samples[i].ts_ms > t.samples[i - 1].ts_ms);
      }
    }
    CHECK(got == total);
    std::set<std::int64_t> absorbed;
    for (const auto& m : result.plan.merges) {
      CHECK(absorbed.insert(m.absorbed).second);  // absorbed at most once
    }
  }
}

TEST_CASE("zone_sequence collapses repeats and drops outside samples") {
  const std::vector<ZonePolygon> zones{square("A", 0, 0, 10, 1), square("B", 20, 0, 10, 2),
                                       square("C", 40, 0, 10, 3)};
  const auto seq1 = zone_sequence(
      traj(1, {{0, {5, 5}}, {1, {6, 5}}, {2, {25, 5}}, {3, {26, 5}}, {4, {45, 5}}}), zones);
  CHECK(seq1 == std::vector<std::string>{"A", "B", "C"});

  const auto seq2 =
      zone_sequence(traj(1, {{0, {5, 5}}, {1, {15, 5}}, {2, {6, 5}}, {3, {25, 5}}}), zones);
  CHECK(seq2 == std::vector<std::string>{"A", "B"});

  const auto seq3 = zone_sequence(traj(1, {{0, {100, 100}}, {1, {110, 100}}}), zones);
  CHECK(seq3.empty());
}

TEST_CASE("transition_matrix tallies adjacent pairs") {
  const std::vector<ZonePolygon> zones{square("A", 0, 0, 10, 1), square("B", 20, 0, 10, 2),
                                       square("C", 40, 0, 10, 3)};
  const std::vector<std::vector<std::string>> sequences{{"A", "B"}, {"A", "B"}, {"A", "C"},
                                                        {"B", "C"}};
  const auto m = transition_matrix(sequences, zones);
  REQUIRE(m.zone_ids == std::vector<std::string>{"A", "B", "C"});
  CHECK(m.counts[0][1] == 2);
  CHECK(m.counts[0][2] == 1);
  CHECK(m.probabilities[0][1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(m.probabilities[0][2] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(m.probabilities[1][2] == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < 3; ++i) CHECK(m.probabilities[i][i] == 0.0);
  // row C has no outgoing transitions
  CHECK(m.probabilities[2][0] == 0.0);
  CHECK(m.probabilities[2][1] == 0.0);

  const std::vector<std::vector<std::string>> lone{{"A"}};
  const auto zero = transition_matrix(lone, zones);
  for (const auto& row : zero.counts) {
    for (const auto c : row) CHECK(c == 0);
  }
}

TEST_CASE("transition probability rows are stochastic on random sequences") {
  std::mt19937_64 rng(404);
  std::vector<ZonePolygon> zones;
  for (int z = 0; z < 6; ++z) zones.push_back(square("z" + std::to_string(z), z * 20.0, 0, 10, z));
  for (int round = 0; round < 50; ++round) {
    std::vector<std::vector<std::string>> sequences;
    const int n_seq = 1 + static_cast<int>(rng() % 20);
    for (int s = 0; s < n_seq; ++s) {
      std::vector<std::string> seq;
      const int len = 1 + static_cast<int>(rng() % 10);
      for (int k = 0; k < len; ++k) seq.push_back("z" + std::to_string(rng() % 6));
      sequences.push_back(std::move(seq));
    }
    const auto m = transition_matrix(sequences, zones);
    const auto exposure = exposure_index(m);
    double exposure_total = 0.0;
    int nonzero_rows = 0;
    for (std::size_t i = 0; i < m.zone_ids.size(); ++i) {
      std::int64_t tally = 0;
      double row_sum = 0.0;
      for (std::size_t j = 0; j < m.zone_ids.size(); ++j) {
        tally += m.counts[i][j];
        row_sum += m.probabilities[i][j];
        CHECK(m.probabilities[i][j] >= 0.0);
        CHECK(m.probabilities[i][j] <= 1.0);
      }
      if (tally > 0) {
        ++nonzero_rows;
        CHECK(std::abs(row_sum - 1.0) <= 1e-9);
      } else {
        CHECK(row_sum == 0.0);
      }
      exposure_total += exposure[i];
    }
    CHECK(std::abs(exposure_total - nonzero_rows) <= 1e-9);
  }
}

TEST_CASE("exposure_index sums incoming probabilities") {
  TransitionMatrix m;
  m.zone_ids = {"a", "b", "c"};
  m.counts = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  m.probabilities = {{0.0, 0.73, 0.27}, {0.0, 0.0, 0.0}, {0.0, 0.40, 0.60}};
  const auto scores = exposure_index(m);
  CHECK(scores[1] == doctest::Approx(1.13).epsilon(1e-12));
  CHECK(scores[0] == 0.0);  // no incoming transitions
}

TEST_CASE("load_index and the peak-to-baseline ratio") {
  CHECK(load_index(600, 1530) == 918000.0);
  CHECK(load_index(0, 12345) == 0.0);
  CHECK(load_ratio(600, 1528.3, 150, 931.6) == doctest::Approx(6.56).epsilon(0.002));
}

TEST_CASE("segment_trajectory windows") {
  AnalysisConfig cfg;  // length 8, overlap 2

  std::vector<std::pair<std::int64_t, Point>> samples20;
  for (int k = 0; k < 20; ++k) samples20.push_back({k * 1000, {static_cast<double>(k), 0}});
  const auto set20 = segment_trajectory(traj(1, samples20), cfg);
  REQUIRE(set20.segments.size() == 3);
  CHECK(set20.segments[0].start_index == 0);
  CHECK(set20.segments[1].start_index == 6);
  CHECK(set20.segments[2].start_index == 12);
  for (const auto& seg : set20.segments) CHECK(seg.points.size() == 8);

  std::vector<std::pair<std::int64_t, Point>> samples8(samples20.begin(), samples20.begin() + 8);
  const auto set8 = segment_trajectory(traj(1, samples8), cfg);
  REQUIRE(set8.segments.size() == 1);
  CHECK(set8.segments[0].start_index == 0);

  std::vector<std::pair<std::int64_t, Point>> samples10(samples20.begin(), samples20.begin() + 10);
  const auto set10 = segment_trajectory(traj(1, samples10), cfg);
  REQUIRE(set10.segments.size() == 2);
  CHECK(set10.segments[0].start_index == 0);
  CHECK(set10.segments[1].start_index == 2);  // anchored to end at the final point

  std::vector<std::pair<std::int64_t, Point>> samples5(samples20.begin(), samples20.begin() + 5);
  const auto set5 = segment_trajectory(traj(1, samples5), cfg);
  REQUIRE(set5.segments.size() == 1);
  CHECK(set5.segments[0].points.size() == 5);  // shorter than one window
}

TEST_CASE("segment windows cover the trajectory with the declared overlap") {
  for (int n = 8; n <= 40; ++n) {
    for (int length = 3; length <= 10; ++length) {
      for (int overlap = 2; overlap < length; ++overlap) {
        AnalysisConfig cfg;
        cfg.segment_length = length;
        cfg.segment_overlap = overlap;
        std::vector<std::pair<std::int64_t, Point>> samples;
        for (int k = 0; k < n; ++k) samples.push_back({k * 100, {static_cast<double>(k), 0}});
        const auto set = segment_trajectory(traj(1, samples), cfg);
        REQUIRE(!set.segments.empty());
        CHECK(set.segments.front().start_index == 0);
        std::size_t covered_to = 0;
        for (std::size_t s = 0; s < set.segments.size(); ++s) {
          const auto& seg = set.segments[s];
          CHECK(seg.points.size() == static_cast<std::size_t>(std::min(length, n)));
          if (s > 0) {
            const auto prev_start = set.segments[s - 1].start_index;
            CHECK(seg.start_index > prev_start);
            const auto overlap_got =
                prev_start + static_cast<std::size_t>(length) - seg.start_index;
            if (s + 1 < set.segments.size()) {
              CHECK(overlap_got == static_cast<std::size_t>(overlap));
            } else {
              CHECK(overlap_got >= static_cast<std::size_t>(overlap));
            }
          }
          CHECK(seg.start_index <= covered_to);  // no index skipped
          covered_to = seg.start_index + seg.points.size();
        }
        CHECK(covered_to == static_cast<std::size_t>(n));
      }
    }
  }
}

TEST_CASE("cluster separates a distant outlier under auto eps") {
  AnalysisConfig cfg;  // min_pts 3, auto eps
  std::vector<std::vector<Point>> items;
  for (int i = 0; i < 4; ++i) items.push_back(line(0, 0, 19, 0));
  items.push_back(line(0, 500, 19, 500));
  const auto result = cluster(items, cfg);
  REQUIRE(result.labels.size() == 5);
  CHECK(result.labels[0] == 0);
  CHECK(result.labels[1] == 0);
  CHECK(result.labels[2] == 0);
  CHECK(result.labels[3] == 0);
  CHECK(result.labels[4] == kNoiseLabel);
  REQUIRE(result.cluster_sizes.size() == 1);
  CHECK(result.cluster_sizes[0] == 4);
  CHECK(result.medoids[0] == 0);  // zero distances tie, lowest index wins
}

TEST_CASE("identical items form a single cluster") {
  AnalysisConfig cfg;
  std::vector<std::vector<Point>> items(5, line(3, 3, 30, 30));
  const auto result = cluster(items, cfg);
  REQUIRE(result.cluster_sizes.size() == 1);
  CHECK(result.cluster_sizes[0] == 5);
  CHECK(result.medoids[0] == 0);
}

TEST_CASE("degenerate eps and tiny inputs are all noise") {
  AnalysisConfig cfg;
  cfg.dbscan_eps = 0.0;
  std::vector<std::vector<Point>> items(5, line(0, 0, 19, 0));
  for (const int label : cluster(items, cfg).labels) CHECK(label == kNoiseLabel);

  AnalysisConfig few_cfg;  // min_pts 3
  std::vector<std::vector<Point>> two(2, line(0, 0, 19, 0));
  for (const int label : cluster(two, few_cfg).labels) CHECK(label == kNoiseLabel);
}

TEST_CASE("cluster matches the naive DBSCAN oracle") {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> coord(0.0, 400.0);
  std::uniform_real_distribution<double> wobble(-8.0, 8.0);
  for (int round = 0; round < 40; ++round) {
    AnalysisConfig cfg;
    cfg.dbscan_min_pts = 2 + static_cast<int>(rng() % 4);
    std::vector<std::vector<Point>> items;
    const int corridors = 1 + static_cast<int>(rng() % 4);
    const int n = 4 + static_cast<int>(rng() % 21);
    std::vector<std::vector<Point>> bases;
    for (int c = 0; c < corridors; ++c) {
      bases.push_back(line(coord(rng), coord(rng), coord(rng), coord(rng)));
    }
    for (int i = 0; i < n; ++i) {
      auto item = bases[rng() % bases.size()];
      for (auto& p : item) {
        p.x += wobble(rng);
        p.y += wobble(rng);
      }
      items.push_back(std::move(item));
    }

    const auto result = cluster(items, cfg);

    // oracle over the same distances with the resolved eps
    std::vector<std::vector<double>> dist(items.size(), std::vector<double>(items.size(), 0.0));
    std::vector<double> nonzero;
    for (std::size_t i = 0; i < items.size(); ++i) {
      for (std::size_t j = i + 1; j < items.size(); ++j) {
        const double d = trajectory_distance(items[i], items[j], cfg).value;
        dist[i][j] = dist[j][i] = d;
        if (d > 0.0) nonzero.push_back(d);
      }
    }
    std::sort(nonzero.begin(), nonzero.end());
    const double eps =
        nonzero.empty()
            ? 1.0
            : nonzero[static_cast<std::size_t>(std::ceil(0.15 * nonzero.size())) - 1];
    const auto oracle_labels =
        oracles::naive_dbscan(dist, eps, static_cast<std::size_t>(cfg.dbscan_min_pts));
    REQUIRE(oracles::same_partition(result.labels, oracle_labels));
  }
}

TEST_CASE("cluster labels are permutation invariant") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> coord(0.0, 300.0);
  std::uniform_real_distribution<double> wobble(-5.0, 5.0);
  for (int round = 0; round < 25; ++round) {
    AnalysisConfig cfg;
    std::vector<std::vector<Point>> items;
    std::vector<std::vector<Point>> bases;
    for (int c = 0; c < 3; ++c) bases.push_back(line(coord(rng), coord(rng), coord(rng), coord(rng)));
    const int n = 6 + static_cast<int>(rng() % 14);
    for (int i = 0; i < n; ++i) {
      auto item = bases[rng() % bases.size()];
      for (auto& p : item) {
        p.x += wobble(rng);
        p.y += wobble(rng);
      }
      items.push_back(std::move(item));
    }
    const auto base_result = cluster(items, cfg);

    std::vector<std::size_t> perm(items.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<Point>> shuffled(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) shuffled[i] = items[perm[i]];
    const auto shuffled_result = cluster(shuffled, cfg);

    std::vector<int> mapped(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) mapped[i] = base_result.labels[perm[i]];
    REQUIRE(oracles::same_partition(mapped, shuffled_result.labels));
  }
}

TEST_CASE("medoid minimizes the summed distance within its cluster") {
  AnalysisConfig cfg;
  cfg.dbscan_eps = 100.0;
  std::vector<std::vector<Point>> items;
  items.push_back(line(0, 0, 19, 0));
  items.push_back(line(0, 10, 19, 10));
  items.push_back(line(0, 22, 19, 22));
  const auto result = cluster(items, cfg);
  REQUIRE(result.cluster_sizes.size() == 1);
  // middle item: 10 + 12 = 22 beats 10 + 22 and 12 + 22
  CHECK(result.medoids[0] == 1);
}
