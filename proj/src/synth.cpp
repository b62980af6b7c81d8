#include "footfall/synth.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "footfall/ingest.hpp"
#include "footfall/report.hpp"

namespace footfall {

using nlohmann::json;

namespace {

constexpr double kBoxW = 40.0;
constexpr double kBoxH = 80.0;

// Anchor-point timeline of one scripted person. Walk steps are emitted in
// per-step pixel units so that scripted stand phases land exactly on the
// sample grid and walking always breaks the stability rule.
struct TrackScript {
  std::int64_t step_ms;
  std::int64_t t;
  Point pos;
  std::vector<TrajectorySample> samples;

  TrackScript(std::int64_t start_ts, std::int64_t step, Point origin)
      : step_ms(step), t(start_ts), pos(origin) {
    emit();
  }

  void emit() {
    samples.push_back({t, pos});
    t += step_ms;
  }

  void walk_to(const Point& target, double step_px) {
    while (true) {
      const double d = point_distance(pos, target);
      if (d <= 1e-9) break;
      const double move = std::min(step_px, d);
      pos.x += (target.x - pos.x) * (move / d);
      pos.y += (target.y - pos.y) * (move / d);
      emit();
    }
  }

  void stand(std::int64_t steps) {
    for (std::int64_t k = 0; k < steps; ++k) emit();
  }
};

DetectionRecord to_record(const TrajectorySample& s, const std::string& camera,
                          std::int64_t track) {
  DetectionRecord r;
  r.ts_ms = s.ts_ms;
  r.camera = camera;
  r.track = track;
  r.bbox = {s.pos.x - kBoxW / 2.0, s.pos.y - kBoxH, kBoxW, kBoxH};
  r.category = "person";
  return r;
}

ScriptKind parse_script_kind(const std::string& name, const std::string& path) {
  if (name == "pass_through") return ScriptKind::pass_through;
  if (name == "dwell") return ScriptKind::dwell;
  if (name == "entry") return ScriptKind::entry;
  if (name == "exit") return ScriptKind::exit;
  if (name == "fragmented") return ScriptKind::fragmented;
  throw ParseError(path, 0, "unknown script '" + name + "'");
}

}  // namespace

ZoneConfig default_venue(const std::string& camera) {
  ZoneConfig venue;
  venue.camera = camera;
  venue.zones.push_back({"seating", "Seating area",
                         {{480, 280}, {820, 280}, {850, 410}, {820, 540}, {480, 540}, {450, 410}},
                         1});
  venue.zones.push_back(
      {"aisle_west", "West aisle", {{140, 0}, {440, 0}, {440, 720}, {140, 720}}, 2});
  venue.zones.push_back(
      {"aisle_east", "East aisle", {{880, 0}, {1140, 0}, {1140, 720}, {880, 720}}, 3});
  GatePair gate;
  gate.camera = camera;
  gate.start_zone = {0, 200, 120, 320};
  gate.finish_zone = {1160, 200, 120, 320};
  venue.gate = gate;
  return venue;
}

SyntheticResult generate_synthetic(const SyntheticSpec& spec) {
  SyntheticResult result;
  result.zones = spec.zones ? *spec.zones : default_venue(spec.camera);

  const auto step_ms = static_cast<std::int64_t>(std::llround(1000.0 / spec.fps));
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> jitter(-spec.noise.jitter_px, spec.noise.jitter_px);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // the gate buffer radius for the standard box, used to time first touches
  const double gate_radius = 0.05 * std::hypot(kBoxW, kBoxH);
  const GatePair gate = result.zones.gate ? *result.zones.gate : default_venue(spec.camera).gate.value();
  const double start_right = gate.start_zone.x + gate.start_zone.w;
  const double finish_left = gate.finish_zone.x;

  std::int64_t next_track = 0;
  std::int64_t next_start_ts = spec.start_ts_ms;
  const std::int64_t stagger_ms = 1500;

  const auto emit_track = [&](const std::vector<TrajectorySample>& samples, std::int64_t track) {
    for (const auto& s : samples) {
      TrajectorySample noisy = s;
      if (spec.noise.jitter_px > 0.0) {
        noisy.pos.x += jitter(rng);
        noisy.pos.y += jitter(rng);
      }
      if (spec.noise.dropout_prob > 0.0 && unit(rng) < spec.noise.dropout_prob) continue;
      result.records.push_back(to_record(noisy, spec.camera, track));
    }
  };

  for (std::size_t group_idx = 0; group_idx < spec.groups.size(); ++group_idx) {
    const auto& group = spec.groups[group_idx];
    for (int k = 0; k < group.count; ++k) {
      const std::int64_t start_ts = next_start_ts;
      next_start_ts += stagger_ms;

      switch (group.kind) {
        case ScriptKind::pass_through: {
          const Point from = group.from.value_or(Point{640, 0});
          const Point to = group.to.value_or(Point{640, 720});
          TrackScript s(start_ts, step_ms, from);
          s.walk_to(to, 30.0);
          emit_track(s.samples, next_track);
          result.labels.push_back(
              {next_track, "pass_through", static_cast<double>(group_idx)});
          ++next_track;
          break;
        }
        case ScriptKind::dwell: {
          TrackScript s(start_ts, step_ms, {640, 690});
          s.walk_to({640, 410}, 14.0);
          const auto stand_steps =
              static_cast<std::int64_t>(std::llround(group.duration_s * 1000.0 / step_ms));
          s.stand(stand_steps);
          s.walk_to({640, 690}, 14.0);
          emit_track(s.samples, next_track);
          const double scripted_s = static_cast<double>(stand_steps * step_ms) / 1000.0;
          result.labels.push_back({next_track, "dwell", scripted_s});
          ++next_track;
          break;
        }
        case ScriptKind::entry:
        case ScriptKind::exit: {
          const bool entry = group.kind == ScriptKind::entry;
          const double y = 400.0;
          const Point origin{entry ? start_right / 2.0 : finish_left + gate.finish_zone.w / 2.0, y};
          const Point target{entry ? finish_left + gate.finish_zone.w / 2.0 : start_right / 2.0, y};
          // distance from the origin to the first buffered touch of the far zone
          const double centroid_origin_x = origin.x;
          const double touch_x = entry ? finish_left - gate_radius : start_right + gate_radius;
          const double touch_dist = std::abs(touch_x - centroid_origin_x);
          const double steps_to_touch = group.crossing_s * 1000.0 / static_cast<double>(step_ms);
          const double step_px = touch_dist / steps_to_touch;
          TrackScript s(start_ts, step_ms, origin);
          s.walk_to(target, step_px);
          emit_track(s.samples, next_track);
          const char* expected = group.crossing_s > 10.0 ? "uncertain" : (entry ? "entry" : "exit");
          result.labels.push_back({next_track, expected, group.crossing_s});
          ++next_track;
          break;
        }
        case ScriptKind::fragmented: {
          TrackScript s(start_ts, step_ms, {200, 600});
          s.walk_to({1000, 600}, 4.0);
          const auto skip =
              static_cast<std::size_t>(std::llround(group.fragment_gap_s * 1000.0 / step_ms)) - 1;
          const std::size_t pieces = static_cast<std::size_t>(group.pieces);
          const std::size_t total = s.samples.size();
          const std::size_t usable = total > (pieces - 1) * skip ? total - (pieces - 1) * skip : 0;
          const std::size_t base = std::max<std::size_t>(usable / pieces, 2);
          const std::int64_t first_track = next_track;
          std::size_t at = 0;
          for (std::size_t piece = 0; piece < pieces && at < total; ++piece) {
            const std::size_t len =
                piece + 1 == pieces ? total - at : std::min(base, total - at);
            std::vector<TrajectorySample> chunk(s.samples.begin() + at,
                                                s.samples.begin() + at + len);
            emit_track(chunk, next_track);
            ++next_track;
            at += len + skip;
          }
          result.labels.push_back(
              {first_track, "fragmented", static_cast<double>(group.pieces)});
          break;
        }
      }
    }
  }

  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const DetectionRecord& a, const DetectionRecord& b) {
                     if (a.ts_ms != b.ts_ms) return a.ts_ms < b.ts_ms;
                     return a.track < b.track;
                   });
  return result;
}

SyntheticSpec parse_synthetic_spec(const std::string& text, const std::string& path_label) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path_label, 0, e.what());
  }
  if (!doc.is_object()) throw ParseError(path_label, 0, "synthetic spec must be a JSON object");
  if (!doc.contains("seed") || !doc.at("seed").is_number_integer()) {
    throw ParseError(path_label, 0, "missing integer field 'seed'");
  }

  SyntheticSpec spec;
  spec.seed = doc.at("seed").get<std::uint64_t>();
  spec.camera = doc.value("camera", spec.camera);
  if (doc.contains("start_ts_ms")) spec.start_ts_ms = doc.at("start_ts_ms").get<std::int64_t>();
  if (doc.contains("fps")) {
    spec.fps = doc.at("fps").get<double>();
    if (!(spec.fps > 0.0) || spec.fps > 1000.0) {
      throw ParseError(path_label, 0, "'fps' must be in (0, 1000]");
    }
  }
  if (doc.contains("noise")) {
    const auto& nj = doc.at("noise");
    spec.noise.jitter_px = nj.value("jitter_px", 0.0);
    spec.noise.dropout_prob = nj.value("dropout_prob", 0.0);
    if (spec.noise.jitter_px < 0.0) throw ParseError(path_label, 0, "'jitter_px' must be >= 0");
    if (spec.noise.dropout_prob < 0.0 || spec.noise.dropout_prob >= 1.0) {
      throw ParseError(path_label, 0, "'dropout_prob' must be in [0, 1)");
    }
  }
  if (doc.contains("zones")) {
    spec.zones = parse_zone_config(doc.at("zones").dump(), path_label);
  }
  if (doc.contains("tracks")) {
    if (!doc.at("tracks").is_array()) throw ParseError(path_label, 0, "'tracks' must be an array");
    for (const auto& gj : doc.at("tracks")) {
      ScriptGroup group;
      if (!gj.contains("script") || !gj.at("script").is_string()) {
        throw ParseError(path_label, 0, "track group missing string field 'script'");
      }
      group.kind = parse_script_kind(gj.at("script").get<std::string>(), path_label);
      group.count = gj.value("count", 1);
      if (group.count < 0) throw ParseError(path_label, 0, "'count' must be >= 0");
      group.duration_s = gj.value("duration_s", group.duration_s);
      group.crossing_s = gj.value("crossing_s", group.crossing_s);
      group.pieces = gj.value("pieces", group.pieces);
      if (group.pieces < 2 && group.kind == ScriptKind::fragmented) {
        throw ParseError(path_label, 0, "'pieces' must be >= 2");
      }
      group.fragment_gap_s = gj.value("fragment_gap_s", group.fragment_gap_s);
      for (const char* key : {"from", "to"}) {
        if (!gj.contains(key)) continue;
        const auto& pj = gj.at(key);
        if (!pj.is_array() || pj.size() != 2) {
          throw ParseError(path_label, 0, std::string("'") + key + "' must be an [x, y] pair");
        }
        const Point p{pj[0].get<double>(), pj[1].get<double>()};
        (key[0] == 'f' ? group.from : group.to) = p;
      }
      spec.groups.push_back(group);
    }
  }
  return spec;
}

SyntheticSpec read_synthetic_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_synthetic_spec(os.str(), path.string());
}

std::string detections_to_csv(const std::vector<DetectionRecord>& records) {
  std::ostringstream os;
  os << "ts_ms,camera,track,x,y,w,h,category\n";
  for (const auto& r : records) {
    os << r.ts_ms << ',' << r.camera << ',' << r.track << ',' << fmt_num(r.bbox.x) << ','
       << fmt_num(r.bbox.y) << ',' << fmt_num(r.bbox.w) << ',' << fmt_num(r.bbox.h) << ','
       << r.category << '\n';
  }
  return os.str();
}

std::string labels_to_csv(const std::vector<GroundTruthLabel>& labels) {
  std::ostringstream os;
  os << "track,label,value\n";
  for (const auto& l : labels) {
    os << l.track << ',' << l.label << ',' << fmt_num(l.value) << '\n';
  }
  return os.str();
}

std::string zone_config_to_json(const ZoneConfig& zones) {
  json doc;
  doc["camera"] = zones.camera;
  doc["zones"] = json::array();
  for (const auto& z : zones.zones) {
    json zj;
    zj["id"] = z.id;
    zj["name"] = z.name;
    zj["priority"] = z.priority;
    zj["vertices"] = json::array();
    for (const auto& v : z.vertices) zj["vertices"].push_back({v.x, v.y});
    doc["zones"].push_back(zj);
  }
  if (zones.gate) {
    const auto rect_json = [](const Rect& r) {
      return json{{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}};
    };
    doc["gate"] = {{"start", rect_json(zones.gate->start_zone)},
                   {"finish", rect_json(zones.gate->finish_zone)}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace footfall
