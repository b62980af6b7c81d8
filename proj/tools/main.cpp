#include <algorithm>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "footfall/dwell.hpp"
#include "footfall/flow.hpp"
#include "footfall/geometry.hpp"
#include "footfall/ingest.hpp"
#include "footfall/patterns.hpp"
#include "footfall/report.hpp"
#include "footfall/synth.hpp"

namespace {

using namespace footfall;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;

struct CommonOptions {
  std::string input;
  std::string zones;
  std::string config;
  std::string out;
  std::string camera;
  int tz_offset_minutes = 0;
};

void add_common_options(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--input", opt.input, "Detection log (CSV or JSONL)")->required();
  cmd->add_option("--zones", opt.zones, "Per-camera zone config (JSON)")->required();
  cmd->add_option("--config", opt.config, "Analysis config overrides (JSON)");
  cmd->add_option("--out", opt.out, "Output directory for report files")->required();
  cmd->add_option("--camera", opt.camera,
                  "Camera id to analyze (defaults to the zone config's camera)");
  cmd->add_option("--timezone-offset", opt.tz_offset_minutes,
                  "Minutes east of UTC for calendar-day grouping (default 0)");
}

struct LoadedInputs {
  AnalysisConfig cfg;
  ZoneConfig zones;
  std::vector<DetectionRecord> records;  // validated, sorted, one camera
};

// loads config, zones and detections; exits the process on failure
LoadedInputs load_inputs(const CommonOptions& opt) {
  LoadedInputs in;
  try {
    if (!opt.config.empty()) in.cfg = read_analysis_config(opt.config);
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    std::exit(kExitConfig);
  }
  try {
    in.zones = read_zone_config(opt.zones);
  } catch (const ParseError& e) {
    std::cerr << "zone config error: " << e.what() << "\n";
    std::exit(kExitConfig);
  }

  std::vector<DetectionRecord> raw;
  try {
    raw = read_detections(opt.input);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    std::exit(kExitInput);
  }

  auto validated = validate_and_sort(std::move(raw));
  for (const auto& d : validated.diagnostics) std::cerr << "skipped: " << d << "\n";

  const std::string camera = !opt.camera.empty() ? opt.camera : in.zones.camera;
  in.records.reserve(validated.records.size());
  for (auto& r : validated.records) {
    if (r.camera == camera) in.records.push_back(std::move(r));
  }
  if (in.records.empty() && !validated.records.empty()) {
    std::cerr << "note: no records for camera '" << camera << "' in " << opt.input << "\n";
  }
  return in;
}

// spans of consecutive records sharing one track id
std::vector<std::span<const DetectionRecord>> track_spans(
    std::span<const DetectionRecord> records) {
  std::vector<std::span<const DetectionRecord>> spans;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= records.size(); ++i) {
    if (i == records.size() || records[i].track != records[begin].track) {
      spans.push_back(records.subspan(begin, i - begin));
      begin = i;
    }
  }
  return spans;
}

int write_reports(const ReportSink& sink, const std::string& out_dir) {
  try {
    sink.flush(out_dir);
  } catch (const std::exception& e) {
    std::cerr << "write error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}

int run_dwell(const CommonOptions& opt, const std::string& zoi_id, double bin_width_s) {
  const LoadedInputs in = load_inputs(opt);

  std::vector<const ZonePolygon*> zois;
  for (const auto& z : in.zones.zones) {
    if (zoi_id.empty() || z.id == zoi_id) zois.push_back(&z);
  }
  if (!zoi_id.empty() && zois.empty()) {
    std::cerr << "zone config error: " << opt.zones << ": no zone with id '" << zoi_id << "'\n";
    return kExitConfig;
  }

  std::vector<DwellEvent> events;
  for (const auto span : track_spans(in.records)) {
    for (const auto* zoi : zois) {
      auto track_events = extract_dwell_events(span, *zoi, in.cfg);
      events.insert(events.end(), track_events.begin(), track_events.end());
    }
  }
  std::sort(events.begin(), events.end(), [](const DwellEvent& a, const DwellEvent& b) {
    if (a.start_ts_ms != b.start_ts_ms) return a.start_ts_ms < b.start_ts_ms;
    if (a.track != b.track) return a.track < b.track;
    return a.zone_id < b.zone_id;
  });

  std::ostringstream listing;
  listing << "track,zone,start_ts_ms,end_ts_ms,duration_s,capped\n";
  for (const auto& e : events) {
    listing << e.track << ',' << e.zone_id << ',' << e.start_ts_ms << ',' << e.end_ts_ms << ','
            << fmt_num(e.duration_s) << ',' << (e.capped ? 1 : 0) << '\n';
  }

  std::map<std::string, std::vector<DwellEvent>> by_day;
  for (const auto& e : events) {
    by_day[format_date(e.start_ts_ms, opt.tz_offset_minutes)].push_back(e);
  }
  std::ostringstream daily;
  daily << "date,n,mean_s,median_s,sd_s\n";
  for (const auto& [date, day_events] : by_day) {
    const auto summary = daily_summary(day_events, date);
    if (!summary) continue;
    daily << summary->date << ',' << summary->n << ',' << fmt_fixed1(summary->mean_s) << ','
          << fmt_fixed1(summary->median_s) << ',' << fmt_fixed1(summary->sd_s) << '\n';
  }

  std::ostringstream histogram;
  histogram << "bin_start_s,count\n";
  for (const auto& bin : dwell_histogram(events, bin_width_s)) {
    histogram << fmt_num(bin.bin_start_s) << ',' << bin.count << '\n';
  }

  ReportSink sink;
  sink.add("dwell_events.csv", listing.str());
  sink.add("dwell_daily.csv", daily.str());
  sink.add("dwell_histogram.csv", histogram.str());
  return write_reports(sink, opt.out);
}

int run_flow(const CommonOptions& opt) {
  const LoadedInputs in = load_inputs(opt);
  if (!in.zones.gate) {
    std::cerr << "zone config error: " << opt.zones << ": no gate pair configured\n";
    return kExitConfig;
  }

  std::vector<FlowEvent> events;
  for (const auto span : track_spans(in.records)) {
    if (auto event = classify_crossing(span, *in.zones.gate, in.cfg)) {
      events.push_back(*event);
    }
  }
  std::sort(events.begin(), events.end(), [](const FlowEvent& a, const FlowEvent& b) {
    if (a.first_zone_ts_ms != b.first_zone_ts_ms) return a.first_zone_ts_ms < b.first_zone_ts_ms;
    return a.track < b.track;
  });

  std::ostringstream listing;
  listing << "track,direction,first_zone_ts_ms,second_zone_ts_ms\n";
  for (const auto& e : events) {
    listing << e.track << ',' << to_string(e.direction) << ',' << e.first_zone_ts_ms << ','
            << e.second_zone_ts_ms << '\n';
  }

  const std::string camera = !opt.camera.empty() ? opt.camera : in.zones.camera;
  std::ostringstream daily;
  daily << "date,camera,entries,exits,uncertain\n";
  for (const auto& row : count_daily_flows(events, camera, opt.tz_offset_minutes)) {
    daily << row.date << ',' << row.camera << ',' << row.entries << ',' << row.exits << ','
          << row.uncertain << '\n';
  }

  ReportSink sink;
  sink.add("flow_events.csv", listing.str());
  sink.add("flow_daily.csv", daily.str());
  return write_reports(sink, opt.out);
}

std::string matrix_csv(const TransitionMatrix& m) {
  std::ostringstream os;
  os << "from";
  for (const auto& id : m.zone_ids) os << ',' << id;
  os << '\n';
  for (std::size_t i = 0; i < m.zone_ids.size(); ++i) {
    os << m.zone_ids[i];
    for (std::size_t j = 0; j < m.zone_ids.size(); ++j) {
      os << ',' << fmt_num(m.probabilities[i][j]);
    }
    os << '\n';
  }
  return os.str();
}

std::string medoids_csv(const ClusterResult& clusters,
                        const std::vector<std::vector<Point>>& items) {
  std::ostringstream os;
  os << "cluster,point_index,x,y\n";
  for (std::size_t c = 0; c < clusters.medoids.size(); ++c) {
    const auto& medoid = items[clusters.medoids[c]];
    for (std::size_t k = 0; k < medoid.size(); ++k) {
      os << c << ',' << k << ',' << fmt_num(medoid[k].x) << ',' << fmt_num(medoid[k].y) << '\n';
    }
  }
  return os.str();
}

int run_patterns(const CommonOptions& opt) {
  const LoadedInputs in = load_inputs(opt);

  auto stitched = stitch_tracks(build_trajectories(in.records), in.cfg);
  std::sort(stitched.trajectories.begin(), stitched.trajectories.end(),
            [](const Trajectory& a, const Trajectory& b) { return a.track < b.track; });

  std::ostringstream plan;
  plan << "absorbed_track,surviving_track,gap_s,gap_px\n";
  {
    auto merges = stitched.plan.merges;
    std::sort(merges.begin(), merges.end(), [](const StitchMerge& a, const StitchMerge& b) {
      return a.absorbed < b.absorbed;
    });
    for (const auto& m : merges) {
      plan << m.absorbed << ',' << m.survivor << ',' << fmt_num(m.gap_s) << ','
           << fmt_num(m.gap_px) << '\n';
    }
  }

  std::vector<std::vector<std::string>> sequences;
  sequences.reserve(stitched.trajectories.size());
  for (const auto& traj : stitched.trajectories) {
    sequences.push_back(zone_sequence(traj, in.zones.zones));
  }
  const auto matrix = transition_matrix(sequences, in.zones.zones);

  std::ostringstream exposure;
  exposure << "zone,exposure\n";
  const auto scores = exposure_index(matrix);
  for (std::size_t i = 0; i < matrix.zone_ids.size(); ++i) {
    exposure << matrix.zone_ids[i] << ',' << fmt_num(scores[i]) << '\n';
  }

  // full-trajectory clustering over resampled tracks
  std::vector<std::vector<Point>> full_items;
  std::vector<std::int64_t> full_tracks;
  for (const auto& traj : stitched.trajectories) {
    if (traj.samples.empty()) continue;
    full_items.push_back(positions(resample(traj, in.cfg.resample_points)));
    full_tracks.push_back(traj.track);
  }
  const auto full_clusters = cluster(full_items, in.cfg);
  std::ostringstream clusters_full;
  clusters_full << "track,cluster\n";
  for (std::size_t i = 0; i < full_items.size(); ++i) {
    clusters_full << full_tracks[i] << ',' << full_clusters.labels[i] << '\n';
  }

  // partial-trajectory clustering over sliding-window segments
  std::vector<std::vector<Point>> segment_items;
  std::vector<std::pair<std::int64_t, std::size_t>> segment_keys;  // (track, start index)
  for (const auto& traj : stitched.trajectories) {
    if (traj.samples.empty()) continue;
    const auto resampled = resample(traj, in.cfg.resample_points);
    for (auto& seg : segment_trajectory(resampled, in.cfg).segments) {
      segment_keys.emplace_back(traj.track, seg.start_index);
      segment_items.push_back(std::move(seg.points));
    }
  }
  const auto segment_clusters = cluster(segment_items, in.cfg);
  std::ostringstream clusters_seg;
  clusters_seg << "track,segment_start,cluster\n";
  for (std::size_t i = 0; i < segment_items.size(); ++i) {
    clusters_seg << segment_keys[i].first << ',' << segment_keys[i].second << ','
                 << segment_clusters.labels[i] << '\n';
  }

  ReportSink sink;
  sink.add("stitch_plan.csv", plan.str());
  sink.add("transition_matrix.csv", matrix_csv(matrix));
  sink.add("exposure_index.csv", exposure.str());
  sink.add("clusters_full.csv", clusters_full.str());
  sink.add("medoids_full.csv", medoids_csv(full_clusters, full_items));
  sink.add("clusters_segments.csv", clusters_seg.str());
  sink.add("medoids_segments.csv", medoids_csv(segment_clusters, segment_items));
  return write_reports(sink, opt.out);
}

int run_synth(const std::string& spec_path, const std::string& out_dir) {
  SyntheticSpec spec;
  try {
    spec = read_synthetic_spec(spec_path);
  } catch (const ParseError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kExitInput;
  }
  const auto result = generate_synthetic(spec);

  ReportSink sink;
  sink.add("detections.csv", detections_to_csv(result.records));
  sink.add("labels.csv", labels_to_csv(result.labels));
  sink.add("zones.json", zone_config_to_json(result.zones));
  return write_reports(sink, out_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-preserving behavioral metrics from detection metadata"};
  app.require_subcommand(1);

  CommonOptions dwell_opt;
  std::string zoi_id;
  double bin_width_s = 60.0;
  auto* dwell_cmd = app.add_subcommand("dwell", "Dwell times inside zones of interest");
  add_common_options(dwell_cmd, dwell_opt);
  dwell_cmd->add_option("--zoi", zoi_id, "Restrict to one zone id (default: all zones)");
  dwell_cmd->add_option("--bin-width", bin_width_s, "Histogram bin width in seconds (default 60)")
      ->check(CLI::PositiveNumber);

  CommonOptions flow_opt;
  auto* flow_cmd = app.add_subcommand("flow", "Directional entry/exit counts through the gate pair");
  add_common_options(flow_cmd, flow_opt);

  CommonOptions patterns_opt;
  auto* patterns_cmd =
      app.add_subcommand("patterns", "Track stitching, zone transitions and trajectory clusters");
  add_common_options(patterns_cmd, patterns_opt);

  std::string spec_path;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic stream with ground truth");
  synth_cmd->add_option("--spec", spec_path, "Synthetic scene spec (JSON)")->required();
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (dwell_cmd->parsed()) return run_dwell(dwell_opt, zoi_id, bin_width_s);
    if (flow_cmd->parsed()) return run_flow(flow_opt);
    if (patterns_cmd->parsed()) return run_patterns(patterns_opt);
    if (synth_cmd->parsed()) return run_synth(spec_path, synth_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
