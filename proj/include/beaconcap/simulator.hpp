#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "beaconcap/capture_model.hpp"
#include "beaconcap/rng.hpp"

namespace beaconcap {

struct ApSpec {
  ApIdentity identity;
  std::uint32_t beacon_interval_tu = kDefaultBeaconIntervalTu;
  std::int64_t phase_offset_us = 0;
  double mean_rssi_dbm = -60.0;
  double rssi_jitter_db = 0.0;
  std::optional<double> traffic_loss_prob;  // overrides LossModel::traffic_loss_prob
  std::optional<std::uint8_t> channel;

  bool operator==(const ApSpec&) const = default;
};

// Two-state bursty loss chain modelling NIC transients.
struct TransientModel {
  double p_good_to_bad = 0.0;
  double p_bad_to_good = 1.0;
  double capture_prob_bad = 0.0;

  bool operator==(const TransientModel&) const = default;
};

struct LossModel {
  // Logistic decode probability in RSS: 0.5 at the threshold.
  double rssi_threshold_dbm = -1000.0;
  double rssi_slope_db = 1.0;
  double traffic_loss_prob = 0.0;
  TransientModel transient;
  // p_good_to_bad is multiplied by (1 + cpu_load_factor * stress_gain).
  double stress_gain = 0.0;

  static LossModel none() { return {}; }
  double signal_probability(double rssi_dbm) const;
  double good_to_bad(double cpu_load_factor) const;
  void validate() const;

  bool operator==(const LossModel&) const = default;
};

// Per-location RSS shifts applied to the AP means when a scenario surveys
// several reference points.
struct SimReferencePoint {
  ReferencePoint point;
  std::map<MacAddress, double> rssi_offset_db;

  bool operator==(const SimReferencePoint&) const = default;
};

struct SimScenario {
  std::string name;
  std::vector<ApSpec> aps;
  CaptureMode mode = CaptureMode::Monitor;
  LossModel loss;
  std::uint32_t report_interval_tu = kDefaultReportIntervalTu;
  double cpu_load_factor = 0.0;
  double duration_s = 200.0;
  int runs = 10;
  std::uint64_t seed = 1;
  std::vector<SimReferencePoint> reference_points;

  // Throws Error naming the offending field.
  void validate() const;
  bool operator==(const SimScenario&) const = default;
};

std::vector<std::int64_t> beacon_schedule(const ApSpec& ap, double duration_s);

enum class ChainState { Good, Bad };

struct CaptureOutcome {
  bool captured = false;
  ChainState next_state = ChainState::Good;
};

// Probability that one beacon is captured in the given chain state.
double capture_probability_for(double rssi_dbm, ChainState state, const LossModel& loss);

// One beacon: decides capture in the current state, then advances the chain.
// Consumes exactly two draws from `rng`.
CaptureOutcome capture_decision(double rssi_dbm, ChainState state, const LossModel& loss,
                                CounterRng& rng, double cpu_load_factor = 0.0);

// Indices into `captured_us` of the events that reach the capture tool.
// Monitor mode delivers everything. Normal mode delivers the first capture in
// each report slot, so a slot with no capture defers to the next one.
std::vector<std::size_t> delivered_indices(CaptureMode mode,
                                           const std::vector<std::int64_t>& captured_us,
                                           std::uint32_t report_interval_tu);

std::vector<std::int64_t> apply_mode_delivery(CaptureMode mode,
                                              const std::vector<std::int64_t>& captured_us,
                                              std::uint32_t report_interval_tu);

// Absolute epoch given to t = 0 of simulated sessions.
inline constexpr std::int64_t kSimulatedEpochUs = 1'600'000'000LL * 1'000'000LL;

// Deterministic in (scenario, seed). With reference points, every run is
// repeated at each point and labelled with its id.
RunSet simulate(const SimScenario& scenario);

// Highest per-AP rate (averaged over APs) the scenario can reach with no loss
// over its finite duration.
double max_achievable_rate(const SimScenario& scenario);

// ---------------------------------------------------------------------------
// Calibration

enum class LossParam {
  RssiThreshold,
  RssiSlope,
  TrafficLoss,
  GoodToBad,
  BadToGood,
  CaptureProbBad,
  StressGain,
};

std::string_view to_string(LossParam param);
LossParam parse_loss_param(std::string_view text);

struct CalibrationTarget {
  SimScenario scenario;  // loss model is replaced during the search
  double rate = 0.0;     // packets per second, averaged over the scenario's APs
  std::optional<double> miss_rate_pct;
};

struct CalibrationOptions {
  std::vector<LossParam> free{LossParam::RssiThreshold, LossParam::RssiSlope};
  double tolerance = 0.02;  // relative rate error every target must meet
  int max_iterations = 200;
  std::uint64_t seed = 0xCA11B8A7E;
};

struct CalibrationResult {
  LossModel loss;
  std::vector<double> achieved_rate;
  std::vector<double> achieved_miss_rate_pct;
  double objective = 0.0;  // sum of squared relative rate errors
  int evaluations = 0;
  bool converged = false;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

// Fits one loss model to every target. Throws Infeasible when a target rate
// exceeds what its template can deliver; otherwise returns the best model
// found with `converged` telling whether all targets met the tolerance.
CalibrationResult calibrate(const std::vector<CalibrationTarget>& targets,
                            const LossModel& start, const CalibrationOptions& options = {});

// Mean per-AP rate of a scenario under a given loss model.
double simulated_rate(const SimScenario& scenario);

// ---------------------------------------------------------------------------
// Presets

std::vector<std::string> preset_names();
// Throws Error for unknown names.
SimScenario preset(std::string_view name, CaptureMode mode);

}  // namespace beaconcap
