#include "beaconcap/scenario_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace beaconcap {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw Error(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw Error("unknown field '" + (where.empty() ? "" : where + ".") + it.key() + "'");
    }
  }
}

template <class T>
T read(const json& j, const std::string& key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error("field '" + (where.empty() ? "" : where + ".") + key + "' has the wrong type");
  }
}

std::string path_of(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

}  // namespace

LossModel loss_from_json(const json& j, const LossModel& defaults) {
  reject_unknown(j,
                 {"rssi_threshold_dbm", "rssi_slope_db", "traffic_loss_prob", "stress_gain",
                  "transient"},
                 "loss");
  LossModel m = defaults;
  m.rssi_threshold_dbm = read(j, "rssi_threshold_dbm", m.rssi_threshold_dbm, "loss");
  m.rssi_slope_db = read(j, "rssi_slope_db", m.rssi_slope_db, "loss");
  m.traffic_loss_prob = read(j, "traffic_loss_prob", m.traffic_loss_prob, "loss");
  m.stress_gain = read(j, "stress_gain", m.stress_gain, "loss");
  if (j.contains("transient")) {
    const auto& t = j.at("transient");
    reject_unknown(t, {"p_good_to_bad", "p_bad_to_good", "capture_prob_bad"}, "loss.transient");
    m.transient.p_good_to_bad = read(t, "p_good_to_bad", m.transient.p_good_to_bad, "loss.transient");
    m.transient.p_bad_to_good = read(t, "p_bad_to_good", m.transient.p_bad_to_good, "loss.transient");
    m.transient.capture_prob_bad =
        read(t, "capture_prob_bad", m.transient.capture_prob_bad, "loss.transient");
  }
  m.validate();
  return m;
}

json loss_to_json(const LossModel& loss) {
  return {{"rssi_threshold_dbm", loss.rssi_threshold_dbm},
          {"rssi_slope_db", loss.rssi_slope_db},
          {"traffic_loss_prob", loss.traffic_loss_prob},
          {"stress_gain", loss.stress_gain},
          {"transient",
           {{"p_good_to_bad", loss.transient.p_good_to_bad},
            {"p_bad_to_good", loss.transient.p_bad_to_good},
            {"capture_prob_bad", loss.transient.capture_prob_bad}}}};
}

SimScenario scenario_from_json(const json& j) {
  reject_unknown(j,
                 {"name", "mode", "duration_s", "runs", "seed", "report_interval_tu",
                  "cpu_load_factor", "rng", "aps", "loss", "reference_points", "calibration"},
                 "");
  SimScenario s;
  s.name = read<std::string>(j, "name", "", "");
  if (j.contains("mode")) s.mode = parse_capture_mode(read<std::string>(j, "mode", "", ""));
  s.duration_s = read(j, "duration_s", s.duration_s, "");
  s.runs = read(j, "runs", s.runs, "");
  s.seed = read(j, "seed", s.seed, "");
  s.report_interval_tu = read(j, "report_interval_tu", s.report_interval_tu, "");
  s.cpu_load_factor = read(j, "cpu_load_factor", s.cpu_load_factor, "");
  const auto rng = read<std::string>(j, "rng", std::string(CounterRng::kAlgorithm), "");
  if (rng != CounterRng::kAlgorithm) {
    throw Error("field 'rng': unsupported generator '" + rng + "'");
  }
  if (!j.contains("aps") || !j.at("aps").is_array()) throw Error("field 'aps' must be a list");
  const auto& aps = j.at("aps");
  for (std::size_t i = 0; i < aps.size(); ++i) {
    const std::string where = "aps[" + std::to_string(i) + "]";
    const auto& a = aps[i];
    reject_unknown(a,
                   {"bssid", "ssid", "beacon_interval_tu", "phase_offset_us", "mean_rssi_dbm",
                    "rssi_jitter_db", "traffic_loss_prob", "channel"},
                   where);
    ApSpec ap;
    if (!a.contains("bssid")) throw Error("field '" + path_of(where, "bssid") + "' is required");
    try {
      ap.identity.bssid = MacAddress::parse(read<std::string>(a, "bssid", "", where));
    } catch (const Error&) {
      throw Error("field '" + path_of(where, "bssid") + "' is not a MAC address");
    }
    ap.identity.ssid = read<std::string>(a, "ssid", "", where);
    ap.beacon_interval_tu = read(a, "beacon_interval_tu", ap.beacon_interval_tu, where);
    ap.phase_offset_us = read(a, "phase_offset_us", ap.phase_offset_us, where);
    ap.mean_rssi_dbm = read(a, "mean_rssi_dbm", ap.mean_rssi_dbm, where);
    ap.rssi_jitter_db = read(a, "rssi_jitter_db", ap.rssi_jitter_db, where);
    if (a.contains("traffic_loss_prob")) ap.traffic_loss_prob = read(a, "traffic_loss_prob", 0.0, where);
    if (a.contains("channel")) ap.channel = static_cast<std::uint8_t>(read(a, "channel", 0, where));
    s.aps.push_back(std::move(ap));
  }
  if (j.contains("loss")) s.loss = loss_from_json(j.at("loss"));
  if (j.contains("reference_points")) {
    const auto& rps = j.at("reference_points");
    if (!rps.is_array()) throw Error("field 'reference_points' must be a list");
    for (std::size_t i = 0; i < rps.size(); ++i) {
      const std::string where = "reference_points[" + std::to_string(i) + "]";
      const auto& r = rps[i];
      reject_unknown(r, {"id", "x", "y", "floor", "rssi_offset_db"}, where);
      SimReferencePoint rp;
      rp.point.id = read<std::string>(r, "id", "", where);
      if (rp.point.id.empty()) throw Error("field '" + path_of(where, "id") + "' is required");
      rp.point.x_m = read(r, "x", 0.0, where);
      rp.point.y_m = read(r, "y", 0.0, where);
      rp.point.floor = read<std::string>(r, "floor", "", where);
      if (r.contains("rssi_offset_db")) {
        const auto& off = r.at("rssi_offset_db");
        if (!off.is_object()) throw Error("field '" + path_of(where, "rssi_offset_db") + "' must be an object");
        for (auto it = off.begin(); it != off.end(); ++it) {
          rp.rssi_offset_db[MacAddress::parse(it.key())] = it.value().get<double>();
        }
      }
      s.reference_points.push_back(std::move(rp));
    }
  }
  s.validate();
  return s;
}

json scenario_to_json(const SimScenario& s) {
  json aps = json::array();
  for (const auto& ap : s.aps) {
    json a = {{"bssid", ap.identity.bssid.str()},
              {"ssid", ap.identity.ssid},
              {"beacon_interval_tu", ap.beacon_interval_tu},
              {"phase_offset_us", ap.phase_offset_us},
              {"mean_rssi_dbm", ap.mean_rssi_dbm},
              {"rssi_jitter_db", ap.rssi_jitter_db}};
    if (ap.traffic_loss_prob) a["traffic_loss_prob"] = *ap.traffic_loss_prob;
    if (ap.channel) a["channel"] = *ap.channel;
    aps.push_back(std::move(a));
  }
  json j = {{"name", s.name},
            {"mode", to_string(s.mode)},
            {"duration_s", s.duration_s},
            {"runs", s.runs},
            {"seed", s.seed},
            {"report_interval_tu", s.report_interval_tu},
            {"cpu_load_factor", s.cpu_load_factor},
            {"rng", CounterRng::kAlgorithm},
            {"aps", aps},
            {"loss", loss_to_json(s.loss)}};
  if (!s.reference_points.empty()) {
    json rps = json::array();
    for (const auto& rp : s.reference_points) {
      json off = json::object();
      for (const auto& [bssid, db] : rp.rssi_offset_db) off[bssid.str()] = db;
      rps.push_back({{"id", rp.point.id},
                     {"x", rp.point.x_m},
                     {"y", rp.point.y_m},
                     {"floor", rp.point.floor},
                     {"rssi_offset_db", off}});
    }
    j["reference_points"] = rps;
  }
  return j;
}

SimScenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(path + ": " + e.what());
  }
  return scenario_from_json(j);
}

void save_scenario(const SimScenario& scenario, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << scenario_to_json(scenario).dump(2) << '\n';
}

CalibrationRequest calibration_request_from_json(const json& j) {
  reject_unknown(j, {"tolerance", "free", "seed", "start", "targets", "max_iterations"}, "");
  CalibrationRequest req;
  req.options.tolerance = read(j, "tolerance", req.options.tolerance, "");
  req.options.seed = read(j, "seed", req.options.seed, "");
  req.options.max_iterations = read(j, "max_iterations", req.options.max_iterations, "");
  if (j.contains("free")) {
    req.options.free.clear();
    for (const auto& p : j.at("free")) req.options.free.push_back(parse_loss_param(p.get<std::string>()));
  }
  if (j.contains("start")) {
    req.start = loss_from_json(j.at("start"));
    req.start_given = true;
  }
  if (!j.contains("targets") || !j.at("targets").is_array()) throw Error("field 'targets' must be a list");
  const auto& targets = j.at("targets");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const std::string where = "targets[" + std::to_string(i) + "]";
    const auto& t = targets[i];
    reject_unknown(t, {"preset", "scenario", "mode", "rate", "miss_rate_pct"}, where);
    CalibrationTarget target;
    if (t.contains("scenario")) {
      target.scenario = scenario_from_json(t.at("scenario"));
    } else if (t.contains("preset")) {
      const auto mode = parse_capture_mode(read<std::string>(t, "mode", "monitor", where));
      target.scenario = preset(read<std::string>(t, "preset", "", where), mode);
    } else {
      throw Error("field '" + where + "' needs 'preset' or 'scenario'");
    }
    if (t.contains("miss_rate_pct")) target.miss_rate_pct = read(t, "miss_rate_pct", 0.0, where);
    if (t.contains("rate")) {
      target.rate = read(t, "rate", 0.0, where);
    } else if (target.miss_rate_pct) {
      const auto& s = target.scenario;
      target.rate = theoretical_rate(s.mode, s.aps.front().beacon_interval_tu, s.report_interval_tu) *
                    (1.0 - *target.miss_rate_pct / 100.0);
    } else {
      throw Error("field '" + path_of(where, "rate") + "' is required");
    }
    req.targets.push_back(std::move(target));
  }
  return req;
}

std::vector<CalibrationTarget> signal_strength_targets(CaptureMode mode) {
  // Published averages for the strong (-60 dBm) and weak (-80 dBm) hallway AP.
  std::vector<CalibrationTarget> out;
  if (mode == CaptureMode::Normal) {
    out.push_back({preset("distance-strong", mode), 0.91, 7.04});
    out.push_back({preset("distance-weak", mode), 0.57, 41.67});
  } else {
    out.push_back({preset("distance-strong", mode), 9.68, 0.86});
    out.push_back({preset("distance-weak", mode), 9.22, 5.63});
  }
  return out;
}

}  // namespace beaconcap
