#include "vpt/scenario_config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vpt/errors.hpp"

namespace vpt {

using nlohmann::json;

namespace {

std::vector<TrackSegment> stadium(double straight, double radius) {
  const double half_turn = std::numbers::pi;
  return {TrackSegment::straight(straight), TrackSegment::arc(radius, half_turn),
          TrackSegment::straight(straight), TrackSegment::arc(radius, half_turn)};
}

std::vector<TrackSegment> rounded_rectangle(double long_side, double short_side, double radius) {
  const double quarter = std::numbers::pi / 2.0;
  std::vector<TrackSegment> segs;
  for (int i = 0; i < 2; ++i) {
    segs.push_back(TrackSegment::straight(long_side));
    segs.push_back(TrackSegment::arc(radius, quarter));
    segs.push_back(TrackSegment::straight(short_side));
    segs.push_back(TrackSegment::arc(radius, quarter));
  }
  return segs;
}

std::vector<TrackSegment> single_turn(double radius) {
  return {TrackSegment::straight(20.0), TrackSegment::arc(radius, std::numbers::pi / 2.0),
          TrackSegment::straight(20.0)};
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) {
    throw ConfigError(where + " must be an object");
  }
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw ConfigError(where + "." + key + " must be a number");
  }
  return v.get<double>();
}

std::optional<double> optional_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) {
    return std::nullopt;
  }
  return number(obj, key, where);
}

Lighting lighting_from_string(const std::string& s) {
  if (s == "day") return Lighting::kDay;
  if (s == "night") return Lighting::kNight;
  throw ConfigError("conditions must be 'day' or 'night'");
}

std::string to_string(Lighting l) { return l == Lighting::kDay ? "day" : "night"; }

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"se-fc",  "se-nfc",   "set-v",
                                              "set-pp", "park-day", "park-night"};
  return names;
}

ScenarioConfig preset(const std::string& name) {
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.seed = 1;
  if (name == "se-fc" || name == "se-nfc") {
    cfg.track = stadium(40.0, 20.0);
    cfg.controller = name == "se-fc" ? ControllerKind::kFuzzyPid : ControllerKind::kRawPid;
    cfg.gains = {10.0, 10.0, 4.0};
    cfg.speed_kmh = 20.0;
    cfg.duration_s = 60.0;
  } else if (name == "set-v" || name == "set-pp") {
    cfg.track = single_turn(5.0);
    cfg.controller = name == "set-v" ? ControllerKind::kFuzzyPid : ControllerKind::kPurePursuit;
    cfg.gains = {10.0, 14.0, 1.0};
    cfg.lookahead_m = 8.0;
    cfg.speed_kmh = 10.0;
    cfg.duration_s = 30.0;
  } else if (name == "park-day" || name == "park-night") {
    cfg.track = rounded_rectangle(30.0, 15.0, 8.0);
    cfg.controller = ControllerKind::kFuzzyPid;
    cfg.gains = {20.0, 18.0, 1.0};
    cfg.speed_kmh = 10.0;
    cfg.duration_s = 80.0;
    cfg.conditions = name == "park-day" ? Lighting::kDay : Lighting::kNight;
  } else {
    throw UnknownPreset("unknown preset '" + name + "'");
  }
  return cfg;
}

ScenarioConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  try {
    check_keys(doc,
               {"name", "track", "camera", "controller", "gains", "lookahead_m", "speed_kmh",
                "duration_s", "conditions", "seed"},
               "config");
    ScenarioConfig cfg;
    cfg.name = doc.value("name", std::string("scenario"));
    if (!doc.contains("track") || !doc["track"].is_array() || doc["track"].empty()) {
      throw ConfigError("config.track must be a non-empty array of segments");
    }
    for (const json& seg : doc["track"]) {
      const std::string where = "track segment";
      const std::string kind = seg.is_object() ? seg.value("kind", std::string()) : std::string();
      if (kind == "straight") {
        check_keys(seg, {"kind", "length_m"}, where);
        cfg.track.push_back(TrackSegment::straight(number(seg, "length_m", where)));
      } else if (kind == "arc") {
        check_keys(seg, {"kind", "radius_m", "sweep_deg"}, where);
        cfg.track.push_back(TrackSegment::arc(number(seg, "radius_m", where),
                                              deg2rad(number(seg, "sweep_deg", where))));
      } else {
        throw ConfigError("track segment kind must be 'straight' or 'arc'");
      }
    }
    if (doc.contains("camera")) {
      const json& c = doc["camera"];
      check_keys(c,
                 {"height_m", "pitch_deg", "yaw_deg", "hfov_deg", "vfov_deg", "lateral_m",
                  "longitudinal_m"},
                 "camera");
      cfg.camera.height_m = optional_number(c, "height_m", "camera");
      cfg.camera.pitch_deg = optional_number(c, "pitch_deg", "camera");
      cfg.camera.yaw_deg = optional_number(c, "yaw_deg", "camera");
      cfg.camera.hfov_deg = optional_number(c, "hfov_deg", "camera");
      cfg.camera.vfov_deg = optional_number(c, "vfov_deg", "camera");
      cfg.camera.lateral_m = optional_number(c, "lateral_m", "camera");
      cfg.camera.longitudinal_m = optional_number(c, "longitudinal_m", "camera");
    }
    cfg.controller = controller_from_string(doc.value("controller", std::string("fuzzy-pid")));
    if (doc.contains("gains")) {
      const json& g = doc["gains"];
      check_keys(g, {"kp", "ki", "kd"}, "gains");
      cfg.gains = {number(g, "kp", "gains"), number(g, "ki", "gains"), number(g, "kd", "gains")};
    } else if (cfg.controller != ControllerKind::kPurePursuit) {
      throw ConfigError("PID controllers need config.gains");
    }
    if (doc.contains("lookahead_m")) cfg.lookahead_m = number(doc, "lookahead_m", "config");
    if (doc.contains("speed_kmh")) cfg.speed_kmh = number(doc, "speed_kmh", "config");
    if (doc.contains("duration_s")) cfg.duration_s = number(doc, "duration_s", "config");
    if (doc.contains("conditions")) {
      cfg.conditions = lighting_from_string(doc["conditions"].get<std::string>());
    }
    if (doc.contains("seed")) {
      if (!doc["seed"].is_number_unsigned()) {
        throw ConfigError("config.seed must be a non-negative integer");
      }
      cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    if (!(cfg.speed_kmh > 0.0) || !(cfg.duration_s > 0.0)) {
      throw ConfigError("speed_kmh and duration_s must be positive");
    }
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot read config " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const ScenarioConfig& cfg) {
  json doc;
  doc["name"] = cfg.name;
  json track = json::array();
  for (const TrackSegment& seg : cfg.track) {
    if (seg.kind == TrackSegment::Kind::kStraight) {
      track.push_back({{"kind", "straight"}, {"length_m", seg.length}});
    } else {
      track.push_back({{"kind", "arc"}, {"radius_m", seg.radius}, {"sweep_deg", rad2deg(seg.sweep)}});
    }
  }
  doc["track"] = track;
  json cam = json::object();
  auto put = [&cam](const char* key, const std::optional<double>& v) {
    if (v) cam[key] = *v;
  };
  put("height_m", cfg.camera.height_m);
  put("pitch_deg", cfg.camera.pitch_deg);
  put("yaw_deg", cfg.camera.yaw_deg);
  put("hfov_deg", cfg.camera.hfov_deg);
  put("vfov_deg", cfg.camera.vfov_deg);
  put("lateral_m", cfg.camera.lateral_m);
  put("longitudinal_m", cfg.camera.longitudinal_m);
  if (!cam.empty()) {
    doc["camera"] = cam;
  }
  doc["controller"] = to_string(cfg.controller);
  doc["gains"] = {{"kp", cfg.gains.kp}, {"ki", cfg.gains.ki}, {"kd", cfg.gains.kd}};
  doc["lookahead_m"] = cfg.lookahead_m;
  doc["speed_kmh"] = cfg.speed_kmh;
  doc["duration_s"] = cfg.duration_s;
  doc["conditions"] = to_string(cfg.conditions);
  doc["seed"] = cfg.seed;
  return doc.dump(2) + "\n";
}

Scenario to_scenario(const ScenarioConfig& cfg) {
  Scenario sc;
  sc.name = cfg.name;
  try {
    sc.track = build_track(cfg.track);
  } catch (const InvalidSegment& e) {
    throw ConfigError(e.what());
  }
  CameraModel& cam = sc.camera;
  const CameraOverrides& o = cfg.camera;
  if (o.height_m) cam.height = *o.height_m;
  if (o.pitch_deg) cam.pitch = deg2rad(*o.pitch_deg);
  if (o.yaw_deg) cam.yaw = deg2rad(*o.yaw_deg);
  if (o.lateral_m) cam.lateral = *o.lateral_m;
  if (o.longitudinal_m) cam.longitudinal = *o.longitudinal_m;
  if (o.hfov_deg) {
    cam.half_fov_u = deg2rad(*o.hfov_deg / 2.0);
    cam.half_fov_v = std::atan(std::tan(cam.half_fov_u) * cam.res_v / cam.res_u);
  }
  if (o.vfov_deg) cam.half_fov_v = deg2rad(*o.vfov_deg / 2.0);

  sc.controller = cfg.controller;
  sc.gains = cfg.gains;
  sc.pure_pursuit.lookahead_m = cfg.lookahead_m;
  sc.speed_mps = cfg.speed_kmh / 3.6;
  sc.duration_s = cfg.duration_s;
  sc.finish_margin_m = std::max(sc.finish_margin_m, cfg.lookahead_m);
  sc.conditions = cfg.conditions == Lighting::kDay ? SceneConditions::day(cfg.seed)
                                                   : SceneConditions::night(cfg.seed);
  sc.validate();
  return sc;
}

namespace {

void put_value(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  line += buf;
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
  out << kCsvHeader << '\n';
  std::string line;
  for (const TraceRecord& r : trace) {
    line = std::to_string(r.frame);
    for (double v : {r.t_s, r.x_m, r.y_m, r.heading_rad, r.speed_mps, r.eod_px, r.eoa_deg, r.cte,
                     r.steer_deg, r.lat_err_m, r.proc_ms}) {
      line += ',';
      put_value(line, v);
    }
    line += '\n';
    out << line;
  }
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRecord>& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  write_trace_csv(out, trace);
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

std::string format_summary(const std::string& name, const RunSummary& s) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "[%s]\n  completed:              %s\n  max_lat_err_m:          %.4f\n"
                "  mean_abs_lat_err_m:     %.4f\n  steering_variance_deg2: %.4f\n"
                "  mean_proc_ms:           %.3f\n",
                name.c_str(), s.completed ? "yes" : "no", s.max_lat_err_m, s.mean_abs_lat_err_m,
                s.steering_variance_deg2, s.mean_proc_ms);
  os << buf;
  return os.str();
}

}  // namespace vpt
