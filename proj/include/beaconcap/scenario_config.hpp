#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "beaconcap/simulator.hpp"

namespace beaconcap {

// Scenario files are JSON objects with the sections
//   name, mode, duration_s, runs, seed, report_interval_tu, cpu_load_factor,
//   rng, aps[], loss{...}, reference_points[]
// Every field except `aps` has a default. Errors name the offending field.
SimScenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const SimScenario& scenario);

SimScenario load_scenario(const std::string& path);
void save_scenario(const SimScenario& scenario, const std::string& path);

LossModel loss_from_json(const nlohmann::json& j, const LossModel& defaults = {});
nlohmann::json loss_to_json(const LossModel& loss);

// Calibration request files:
//   { "tolerance": 0.02, "free": ["rssi_threshold_dbm", ...], "seed": 7,
//     "start": { loss }, "targets": [ { "preset": "distance-weak", "mode": "normal",
//     "rate": 0.57, "miss_rate_pct": 41.67 } | { "scenario": {...}, "rate": ... } ] }
struct CalibrationRequest {
  std::vector<CalibrationTarget> targets;
  CalibrationOptions options;
  LossModel start;
  bool start_given = false;
};

CalibrationRequest calibration_request_from_json(const nlohmann::json& j);

// The four signal-strength rows (-60 / -80 dBm, both modes) as calibration
// targets, grouped by mode.
std::vector<CalibrationTarget> signal_strength_targets(CaptureMode mode);

}  // namespace beaconcap
