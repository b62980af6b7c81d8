#include "footfall/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "footfall/geometry.hpp"

namespace footfall {

using nlohmann::json;

ParseError::ParseError(std::string path, std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? path + ":" + std::to_string(line) + ": " + message
                                  : path + ": " + message),
      path_(std::move(path)),
      line_(line) {}

namespace {

std::string describe_record(const DetectionRecord& r, const std::string& reason) {
  std::ostringstream os;
  os << "record camera=" << r.camera << " track=" << r.track << " ts_ms=" << r.ts_ms << ": "
     << reason;
  return os.str();
}

std::string load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string::size_type pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (auto& line : lines) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
  }
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type pos = 0;
  while (true) {
    auto comma = line.find(',', pos);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  for (auto& f : fields) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.erase(f.begin());
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.pop_back();
  }
  return fields;
}

double parse_double(const std::string& s, const std::string& path, std::size_t line,
                    const char* field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParseError(path, line, std::string("field '") + field + "' is not a number: '" + s + "'");
  }
}

std::int64_t parse_int(const std::string& s, const std::string& path, std::size_t line,
                       const char* field) {
  std::int64_t v = 0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(path, line, std::string("field '") + field + "' is not an integer: '" + s + "'");
  }
  return v;
}

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

json parse_json_document(const std::string& text, const std::string& path_label) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path_label, line_of_byte(text, e.byte), e.what());
  }
}

double json_number(const json& j, const char* key, const std::string& path, std::size_t line) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ParseError(path, line, std::string("missing or non-numeric field '") + key + "'");
  }
  return j.at(key).get<double>();
}

Rect parse_rect(const json& j, const std::string& path, const char* what) {
  if (!j.is_object()) throw ParseError(path, 0, std::string(what) + " must be an object");
  Rect r;
  r.x = json_number(j, "x", path, 0);
  r.y = json_number(j, "y", path, 0);
  r.w = json_number(j, "w", path, 0);
  r.h = json_number(j, "h", path, 0);
  return r;
}

bool rects_overlap(const Rect& a, const Rect& b) {
  return a.x < b.x + b.w && b.x < a.x + a.w && a.y < b.y + b.h && b.y < a.y + a.h;
}

}  // namespace

ValidationResult validate_and_sort(std::vector<DetectionRecord> records) {
  ValidationResult out;
  std::vector<DetectionRecord> kept;
  kept.reserve(records.size());
  for (auto& r : records) {
    if (r.category != "person") continue;
    if (!box_valid(r.bbox)) {
      out.diagnostics.push_back(describe_record(r, "invalid bounding box (w, h must be positive and finite)"));
      continue;
    }
    if (r.ts_ms < 0) {
      out.diagnostics.push_back(describe_record(r, "negative timestamp"));
      continue;
    }
    if (r.track < 0) {
      out.diagnostics.push_back(describe_record(r, "negative track id"));
      continue;
    }
    kept.push_back(std::move(r));
  }

  std::stable_sort(kept.begin(), kept.end(), [](const DetectionRecord& a, const DetectionRecord& b) {
    if (a.camera != b.camera) return a.camera < b.camera;
    if (a.track != b.track) return a.track < b.track;
    return a.ts_ms < b.ts_ms;
  });

  // duplicates of one (camera, track, timestamp) keep the last occurrence
  out.records.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const bool last_of_key = i + 1 == kept.size() || kept[i + 1].camera != kept[i].camera ||
                             kept[i + 1].track != kept[i].track || kept[i + 1].ts_ms != kept[i].ts_ms;
    if (last_of_key) out.records.push_back(std::move(kept[i]));
  }
  return out;
}

std::vector<DetectionRecord> parse_detections_csv(const std::string& text,
                                                  const std::string& path_label) {
  const auto lines = split_lines(text);
  std::vector<DetectionRecord> records;
  if (lines.empty()) return records;

  const auto header = split_csv(lines[0]);
  std::map<std::string, std::size_t> columns;
  for (std::size_t i = 0; i < header.size(); ++i) columns[header[i]] = i;
  for (const char* required : {"ts_ms", "camera", "track", "x", "y", "w", "h", "category"}) {
    if (!columns.count(required)) {
      throw ParseError(path_label, 1, std::string("missing column '") + required + "'");
    }
  }

  records.reserve(lines.size() - 1);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const auto fields = split_csv(lines[li]);
    if (fields.size() < header.size()) {
      throw ParseError(path_label, li + 1, "expected " + std::to_string(header.size()) +
                                               " fields, got " + std::to_string(fields.size()));
    }
    DetectionRecord r;
    r.ts_ms = parse_int(fields[columns["ts_ms"]], path_label, li + 1, "ts_ms");
    r.camera = fields[columns["camera"]];
    r.track = parse_int(fields[columns["track"]], path_label, li + 1, "track");
    r.bbox.x = parse_double(fields[columns["x"]], path_label, li + 1, "x");
    r.bbox.y = parse_double(fields[columns["y"]], path_label, li + 1, "y");
    r.bbox.w = parse_double(fields[columns["w"]], path_label, li + 1, "w");
    r.bbox.h = parse_double(fields[columns["h"]], path_label, li + 1, "h");
    r.category = fields[columns["category"]];
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<DetectionRecord> parse_detections_jsonl(const std::string& text,
                                                    const std::string& path_label) {
  const auto lines = split_lines(text);
  std::vector<DetectionRecord> records;
  records.reserve(lines.size());
  for (std::size_t li = 0; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    json j;
    try {
      j = json::parse(lines[li]);
    } catch (const json::parse_error& e) {
      throw ParseError(path_label, li + 1, e.what());
    }
    if (!j.is_object()) throw ParseError(path_label, li + 1, "expected a JSON object");
    DetectionRecord r;
    if (!j.contains("ts_ms") || !j.at("ts_ms").is_number_integer()) {
      throw ParseError(path_label, li + 1, "missing or non-integer field 'ts_ms'");
    }
    r.ts_ms = j.at("ts_ms").get<std::int64_t>();
    if (!j.contains("camera") || !j.at("camera").is_string()) {
      throw ParseError(path_label, li + 1, "missing or non-string field 'camera'");
    }
    r.camera = j.at("camera").get<std::string>();
    if (!j.contains("track") || !j.at("track").is_number_integer()) {
      throw ParseError(path_label, li + 1, "missing or non-integer field 'track'");
    }
    r.track = j.at("track").get<std::int64_t>();
    r.bbox.x = json_number(j, "x", path_label, li + 1);
    r.bbox.y = json_number(j, "y", path_label, li + 1);
    r.bbox.w = json_number(j, "w", path_label, li + 1);
    r.bbox.h = json_number(j, "h", path_label, li + 1);
    if (!j.contains("category") || !j.at("category").is_string()) {
      throw ParseError(path_label, li + 1, "missing or non-string field 'category'");
    }
    r.category = j.at("category").get<std::string>();
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<DetectionRecord> read_detections(const std::filesystem::path& path) {
  const std::string text = load_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool looks_json = first != std::string::npos && text[first] == '{';
  return looks_json ? parse_detections_jsonl(text, path.string())
                    : parse_detections_csv(text, path.string());
}

ZoneConfig parse_zone_config(const std::string& text, const std::string& path_label) {
  const json doc = parse_json_document(text, path_label);
  if (!doc.is_object()) throw ParseError(path_label, 0, "zone config must be a JSON object");

  ZoneConfig cfg;
  if (!doc.contains("camera") || !doc.at("camera").is_string()) {
    throw ParseError(path_label, 0, "missing or non-string field 'camera'");
  }
  cfg.camera = doc.at("camera").get<std::string>();

  std::set<std::string> ids;
  std::set<int> priorities;
  if (doc.contains("zones")) {
    if (!doc.at("zones").is_array()) throw ParseError(path_label, 0, "'zones' must be an array");
    for (const auto& zj : doc.at("zones")) {
      ZonePolygon zone;
      if (!zj.contains("id") || !zj.at("id").is_string()) {
        throw ParseError(path_label, 0, "zone entry missing string field 'id'");
      }
      zone.id = zj.at("id").get<std::string>();
      zone.name = zj.value("name", zone.id);
      if (!zj.contains("priority") || !zj.at("priority").is_number_integer()) {
        throw ParseError(path_label, 0, "zone '" + zone.id + "' missing integer field 'priority'");
      }
      zone.priority = zj.at("priority").get<int>();
      if (!zj.contains("vertices") || !zj.at("vertices").is_array()) {
        throw ParseError(path_label, 0, "zone '" + zone.id + "' missing array field 'vertices'");
      }
      for (const auto& vj : zj.at("vertices")) {
        if (!vj.is_array() || vj.size() != 2 || !vj[0].is_number() || !vj[1].is_number()) {
          throw ParseError(path_label, 0, "zone '" + zone.id + "' vertices must be [x, y] pairs");
        }
        zone.vertices.push_back({vj[0].get<double>(), vj[1].get<double>()});
      }
      if (zone.vertices.size() < 3) {
        throw ParseError(path_label, 0, "zone '" + zone.id + "' needs at least 3 vertices");
      }
      if (!polygon_simple(zone.vertices)) {
        throw ParseError(path_label, 0, "zone '" + zone.id + "' polygon is self-intersecting");
      }
      if (!ids.insert(zone.id).second) {
        throw ParseError(path_label, 0, "duplicate zone id '" + zone.id + "'");
      }
      if (!priorities.insert(zone.priority).second) {
        throw ParseError(path_label, 0, "duplicate zone priority " + std::to_string(zone.priority));
      }
      cfg.zones.push_back(std::move(zone));
    }
  }

  if (doc.contains("gate")) {
    const auto& gj = doc.at("gate");
    if (!gj.is_object() || !gj.contains("start") || !gj.contains("finish")) {
      throw ParseError(path_label, 0, "'gate' must carry 'start' and 'finish' rectangles");
    }
    GatePair gate;
    gate.camera = cfg.camera;
    gate.start_zone = parse_rect(gj.at("start"), path_label, "gate start");
    gate.finish_zone = parse_rect(gj.at("finish"), path_label, "gate finish");
    if (!(gate.start_zone.w > 0.0 && gate.start_zone.h > 0.0 && gate.finish_zone.w > 0.0 &&
          gate.finish_zone.h > 0.0)) {
      throw ParseError(path_label, 0, "gate rectangles must have positive width and height");
    }
    if (rects_overlap(gate.start_zone, gate.finish_zone)) {
      throw ParseError(path_label, 0, "gate start and finish rectangles overlap");
    }
    cfg.gate = gate;
  }
  return cfg;
}

ZoneConfig read_zone_config(const std::filesystem::path& path) {
  return parse_zone_config(load_file(path), path.string());
}

AnalysisConfig parse_analysis_config(const std::string& text, const std::string& path_label) {
  const json doc = parse_json_document(text, path_label);
  if (!doc.is_object()) throw ParseError(path_label, 0, "analysis config must be a JSON object");

  AnalysisConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    const auto number = [&](double& field) {
      if (!value.is_number()) throw ParseError(path_label, 0, "'" + key + "' must be a number");
      field = value.get<double>();
    };
    const auto integer = [&](auto& field) {
      if (!value.is_number_integer()) {
        throw ParseError(path_label, 0, "'" + key + "' must be an integer");
      }
      field = value.get<std::remove_reference_t<decltype(field)>>();
    };
    if (key == "stability_threshold") number(cfg.stability_threshold);
    else if (key == "stabilization_time") number(cfg.stabilization_time_s);
    else if (key == "min_dwell") number(cfg.min_dwell_s);
    else if (key == "max_dwell") number(cfg.max_dwell_s);
    else if (key == "track_gap") number(cfg.track_gap_s);
    else if (key == "gate_tolerance") number(cfg.gate_tolerance);
    else if (key == "max_crossing_time") number(cfg.max_crossing_time_s);
    else if (key == "resample_points") integer(cfg.resample_points);
    else if (key == "segment_length") integer(cfg.segment_length);
    else if (key == "segment_overlap") integer(cfg.segment_overlap);
    else if (key == "stitch_max_gap") number(cfg.stitch_max_gap_s);
    else if (key == "stitch_max_distance") number(cfg.stitch_max_distance_px);
    else if (key == "frechet_cell_budget") integer(cfg.frechet_cell_budget);
    else if (key == "dbscan_min_pts") integer(cfg.dbscan_min_pts);
    else if (key == "dbscan_eps") {
      if (value.is_string() && value.get<std::string>() == "auto") {
        cfg.dbscan_eps.reset();
      } else if (value.is_number()) {
        cfg.dbscan_eps = value.get<double>();
      } else {
        throw ParseError(path_label, 0, "'dbscan_eps' must be a number or \"auto\"");
      }
    } else {
      throw ParseError(path_label, 0, "unknown config key '" + key + "'");
    }
  }

  if (const auto err = config_error(cfg)) throw ParseError(path_label, 0, *err);
  return cfg;
}

AnalysisConfig read_analysis_config(const std::filesystem::path& path) {
  return parse_analysis_config(load_file(path), path.string());
}

}  // namespace footfall
