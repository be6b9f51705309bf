#include "beaconcap/simulator.hpp"

#include "beaconcap/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace beaconcap {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

double LossModel::signal_probability(double rssi_dbm) const {
  return 1.0 / (1.0 + std::exp(-(rssi_dbm - rssi_threshold_dbm) / rssi_slope_db));
}

double LossModel::good_to_bad(double cpu_load_factor) const {
  return std::min(1.0, transient.p_good_to_bad * (1.0 + cpu_load_factor * stress_gain));
}

void LossModel::validate() const {
  if (!(rssi_slope_db > 0)) throw Error("loss.rssi_slope_db must be positive");
  if (!std::isfinite(rssi_threshold_dbm)) throw Error("loss.rssi_threshold_dbm must be finite");
  if (!is_probability(traffic_loss_prob)) throw Error("loss.traffic_loss_prob must be in [0, 1]");
  if (!is_probability(transient.p_good_to_bad)) throw Error("loss.transient.p_good_to_bad must be in [0, 1]");
  if (!is_probability(transient.p_bad_to_good)) throw Error("loss.transient.p_bad_to_good must be in [0, 1]");
  if (!is_probability(transient.capture_prob_bad)) throw Error("loss.transient.capture_prob_bad must be in [0, 1]");
  if (!(stress_gain >= 0)) throw Error("loss.stress_gain must not be negative");
}

void SimScenario::validate() const {
  if (!(duration_s > 0)) throw Error("duration_s must be positive");
  if (runs < 1) throw Error("runs must be at least 1");
  if (report_interval_tu == 0) throw Error("report_interval_tu must be positive");
  if (!(cpu_load_factor >= 0.0 && cpu_load_factor <= 1.0)) throw Error("cpu_load_factor must be in [0, 1]");
  loss.validate();
  std::vector<MacAddress> seen;
  for (std::size_t i = 0; i < aps.size(); ++i) {
    const auto& ap = aps[i];
    const std::string where = "aps[" + std::to_string(i) + "]";
    if (ap.beacon_interval_tu == 0) throw Error(where + ".beacon_interval_tu must be positive");
    if (!(ap.rssi_jitter_db >= 0)) throw Error(where + ".rssi_jitter_db must not be negative");
    if (ap.phase_offset_us < 0) throw Error(where + ".phase_offset_us must not be negative");
    if (ap.identity.ssid.size() > 32) throw Error(where + ".ssid longer than 32 bytes");
    if (ap.traffic_loss_prob && !is_probability(*ap.traffic_loss_prob)) {
      throw Error(where + ".traffic_loss_prob must be in [0, 1]");
    }
    if (std::find(seen.begin(), seen.end(), ap.identity.bssid) != seen.end()) {
      throw Error(where + ".bssid duplicates another AP");
    }
    seen.push_back(ap.identity.bssid);
  }
  for (std::size_t i = 0; i < reference_points.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (reference_points[i].point.id == reference_points[j].point.id) {
        throw Error("reference_points[" + std::to_string(i) + "].id is not unique");
      }
    }
  }
}

std::vector<std::int64_t> beacon_schedule(const ApSpec& ap, double duration_s) {
  if (!(duration_s > 0)) throw Error("duration must be positive");
  const std::int64_t limit = std::llround(duration_s * 1e6);
  const std::int64_t step = static_cast<std::int64_t>(ap.beacon_interval_tu) * kMicrosPerTu;
  std::vector<std::int64_t> times;
  if (step <= 0) return times;
  for (std::int64_t t = ap.phase_offset_us; t < limit; t += step) times.push_back(t);
  return times;
}

double capture_probability_for(double rssi_dbm, ChainState state, const LossModel& loss) {
  const double state_factor = state == ChainState::Good ? 1.0 : loss.transient.capture_prob_bad;
  return loss.signal_probability(rssi_dbm) * (1.0 - loss.traffic_loss_prob) * state_factor;
}

CaptureOutcome capture_decision(double rssi_dbm, ChainState state, const LossModel& loss,
                                CounterRng& rng, double cpu_load_factor) {
  CaptureOutcome out;
  out.captured = rng.uniform() < capture_probability_for(rssi_dbm, state, loss);
  const double u = rng.uniform();
  if (state == ChainState::Good) {
    out.next_state = u < loss.good_to_bad(cpu_load_factor) ? ChainState::Bad : ChainState::Good;
  } else {
    out.next_state = u < loss.transient.p_bad_to_good ? ChainState::Good : ChainState::Bad;
  }
  return out;
}

std::vector<std::size_t> delivered_indices(CaptureMode mode,
                                           const std::vector<std::int64_t>& captured_us,
                                           std::uint32_t report_interval_tu) {
  std::vector<std::size_t> out;
  if (mode == CaptureMode::Monitor) {
    out.resize(captured_us.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
    return out;
  }
  if (report_interval_tu == 0) throw Error("report interval must be positive");
  const std::int64_t slot_us = static_cast<std::int64_t>(report_interval_tu) * kMicrosPerTu;
  std::int64_t last_slot = -1;
  for (std::size_t i = 0; i < captured_us.size(); ++i) {
    const std::int64_t slot = captured_us[i] / slot_us;
    if (slot != last_slot) {
      out.push_back(i);
      last_slot = slot;
    }
  }
  return out;
}

std::vector<std::int64_t> apply_mode_delivery(CaptureMode mode,
                                              const std::vector<std::int64_t>& captured_us,
                                              std::uint32_t report_interval_tu) {
  std::vector<std::int64_t> out;
  for (auto i : delivered_indices(mode, captured_us, report_interval_tu)) out.push_back(captured_us[i]);
  return out;
}

namespace {

struct Capture {
  std::int64_t t_us;
  double rssi;
  std::uint16_t seq;
};

// Every beacon consumes the same four draws (two for RSS, two for the
// capture decision) so loss parameters never shift later draws.
std::vector<Capture> capture_ap(const SimScenario& scenario, const ApSpec& ap, double rssi_offset,
                                CounterRng rng) {
  LossModel loss = scenario.loss;
  if (ap.traffic_loss_prob) loss.traffic_loss_prob = *ap.traffic_loss_prob;
  const double mean = ap.mean_rssi_dbm + rssi_offset;
  ChainState state = ChainState::Good;
  std::vector<Capture> captured;
  std::uint16_t seq = static_cast<std::uint16_t>(rng.next_u64() & 0x0fff);
  for (const std::int64_t t : beacon_schedule(ap, scenario.duration_s)) {
    const double rssi = mean + ap.rssi_jitter_db * rng.normal(0.0, 1.0);
    const auto outcome = capture_decision(rssi, state, loss, rng, scenario.cpu_load_factor);
    if (outcome.captured) captured.push_back({t, rssi, seq});
    state = outcome.next_state;
    seq = static_cast<std::uint16_t>((seq + 1) & 0x0fff);
  }
  return captured;
}

CaptureSession simulate_session(const SimScenario& scenario, int run, std::size_t rp_index) {
  const SimReferencePoint* rp =
      scenario.reference_points.empty() ? nullptr : &scenario.reference_points[rp_index];
  CaptureSession session;
  session.mode = scenario.mode;
  session.duration_s = scenario.duration_s;
  session.metadata.source = scenario.name;
  session.metadata.run_index = run;
  session.metadata.start_epoch_us = kSimulatedEpochUs;
  if (rp) session.metadata.rp_id = rp->point.id;

  for (const auto& ap : scenario.aps) {
    double offset = 0;
    if (rp) {
      if (auto it = rp->rssi_offset_db.find(ap.identity.bssid); it != rp->rssi_offset_db.end()) {
        offset = it->second;
      }
    }
    const CounterRng rng(CounterRng::derive(scenario.seed, static_cast<std::uint64_t>(run), rp_index,
                                            ap.identity.bssid.as_u64()));
    const auto captured = capture_ap(scenario, ap, offset, rng);
    std::vector<std::int64_t> times;
    times.reserve(captured.size());
    for (const auto& c : captured) times.push_back(c.t_us);
    for (auto i : delivered_indices(scenario.mode, times, scenario.report_interval_tu)) {
      BeaconRecord rec;
      rec.t_us = captured[i].t_us;
      rec.rssi_dbm = std::clamp(static_cast<int>(std::lround(captured[i].rssi)), kMinRssiDbm, kMaxRssiDbm);
      rec.ap = ap.identity;
      rec.beacon_interval_tu = ap.beacon_interval_tu;
      rec.sequence_number = captured[i].seq;
      rec.channel = ap.channel;
      session.records.push_back(std::move(rec));
    }
  }
  normalize_records(session.records);
  return session;
}

}  // namespace

RunSet simulate(const SimScenario& scenario) {
  scenario.validate();
  RunSet out;
  out.label = scenario.name;
  const std::size_t points = std::max<std::size_t>(1, scenario.reference_points.size());
  out.runs.reserve(static_cast<std::size_t>(scenario.runs) * points);
  for (std::size_t rp = 0; rp < points; ++rp) {
    for (int run = 0; run < scenario.runs; ++run) out.runs.push_back(simulate_session(scenario, run, rp));
  }
  return out;
}

double simulated_rate(const SimScenario& scenario) {
  if (scenario.aps.empty()) return 0.0;
  const RunSet runs = simulate(scenario);
  double total = 0;
  for (const auto& s : runs.runs) total += static_cast<double>(s.records.size()) / s.duration_s;
  return total / static_cast<double>(runs.runs.size() * scenario.aps.size());
}

double max_achievable_rate(const SimScenario& scenario) {
  SimScenario ideal = scenario;
  ideal.loss = LossModel::none();
  for (auto& ap : ideal.aps) ap.traffic_loss_prob.reset();
  ideal.runs = 1;
  ideal.reference_points.clear();
  return simulated_rate(ideal);
}

// ---------------------------------------------------------------------------
// Calibration

std::string_view to_string(LossParam param) {
  switch (param) {
    case LossParam::RssiThreshold: return "rssi_threshold_dbm";
    case LossParam::RssiSlope: return "rssi_slope_db";
    case LossParam::TrafficLoss: return "traffic_loss_prob";
    case LossParam::GoodToBad: return "p_good_to_bad";
    case LossParam::BadToGood: return "p_bad_to_good";
    case LossParam::CaptureProbBad: return "capture_prob_bad";
    case LossParam::StressGain: return "stress_gain";
  }
  return "unknown";
}

LossParam parse_loss_param(std::string_view text) {
  for (auto p : {LossParam::RssiThreshold, LossParam::RssiSlope, LossParam::TrafficLoss,
                 LossParam::GoodToBad, LossParam::BadToGood, LossParam::CaptureProbBad,
                 LossParam::StressGain}) {
    if (to_string(p) == text) return p;
  }
  throw Error("unknown loss parameter '" + std::string(text) + "'");
}

namespace {

struct ParamSpace {
  double lo, hi, initial_step, min_step;
};

ParamSpace space_for(LossParam p) {
  switch (p) {
    case LossParam::RssiThreshold: return {-160.0, 20.0, 8.0, 0.01};
    case LossParam::RssiSlope: return {0.2, 40.0, 2.0, 0.005};
    case LossParam::TrafficLoss: return {0.0, 0.99, 0.1, 1e-4};
    case LossParam::GoodToBad: return {0.0, 1.0, 0.02, 1e-5};
    case LossParam::BadToGood: return {0.001, 1.0, 0.1, 1e-4};
    case LossParam::CaptureProbBad: return {0.0, 1.0, 0.1, 1e-4};
    case LossParam::StressGain: return {0.0, 100.0, 2.0, 1e-3};
  }
  return {0, 1, 0.1, 1e-4};
}

double& field(LossModel& m, LossParam p) {
  switch (p) {
    case LossParam::RssiThreshold: return m.rssi_threshold_dbm;
    case LossParam::RssiSlope: return m.rssi_slope_db;
    case LossParam::TrafficLoss: return m.traffic_loss_prob;
    case LossParam::GoodToBad: return m.transient.p_good_to_bad;
    case LossParam::BadToGood: return m.transient.p_bad_to_good;
    case LossParam::CaptureProbBad: return m.transient.capture_prob_bad;
    case LossParam::StressGain: return m.stress_gain;
  }
  return m.rssi_threshold_dbm;
}

struct Evaluation {
  double objective = 0;
  std::vector<double> rates;
  bool within_tolerance = false;
};

class Objective {
 public:
  Objective(const std::vector<CalibrationTarget>& targets, const CalibrationOptions& options)
      : targets_(targets), options_(options) {}

  Evaluation operator()(const LossModel& loss) {
    ++evaluations;
    Evaluation e;
    e.within_tolerance = true;
    for (const auto& target : targets_) {
      SimScenario s = target.scenario;
      s.loss = loss;
      s.seed = options_.seed;
      const double rate = simulated_rate(s);
      const double rel = (rate - target.rate) / target.rate;
      e.objective += rel * rel;
      e.rates.push_back(rate);
      if (std::abs(rel) > options_.tolerance) e.within_tolerance = false;
    }
    return e;
  }

  int evaluations = 0;

 private:
  const std::vector<CalibrationTarget>& targets_;
  const CalibrationOptions& options_;
};

}  // namespace

CalibrationResult calibrate(const std::vector<CalibrationTarget>& targets, const LossModel& start,
                            const CalibrationOptions& options) {
  if (targets.empty()) throw Error("calibration needs at least one target");
  if (options.free.empty()) throw Error("calibration needs at least one free parameter");
  for (const auto& t : targets) {
    t.scenario.validate();
    if (t.scenario.aps.empty()) throw Error("calibration template '" + t.scenario.name + "' has no APs");
    if (!(t.rate > 0)) throw Infeasible("target rate must be positive");
    const double cap = max_achievable_rate(t.scenario);
    if (t.rate > cap + 1e-9) {
      throw Infeasible("target rate " + std::to_string(t.rate) + " exceeds the " +
                       std::string(to_string(t.scenario.mode)) + "-mode maximum " +
                       std::to_string(cap) + " for '" + t.scenario.name + "'");
    }
  }

  Objective objective(targets, options);
  LossModel best = start;
  best.validate();
  Evaluation best_eval = objective(best);

  auto try_candidate = [&](const LossModel& candidate) {
    auto e = objective(candidate);
    if (e.objective < best_eval.objective) {
      best = candidate;
      best_eval = std::move(e);
      return true;
    }
    return false;
  };

  // Coarse scan of the first free parameter to escape flat regions (a
  // saturated logistic has no slope to follow).
  {
    const LossParam p = options.free.front();
    const auto sp = space_for(p);
    const LossModel anchor = best;
    for (int i = 0; i <= 24; ++i) {
      LossModel c = anchor;
      field(c, p) = sp.lo + (sp.hi - sp.lo) * i / 24.0;
      try_candidate(c);
    }
  }

  // Pattern search over the axes and the pairwise diagonals (threshold and
  // slope trade off along a valley, which pure axis moves crawl through).
  const std::size_t n = options.free.size();
  std::vector<std::vector<double>> directions;
  for (std::size_t i = 0; i < n; ++i) {
    for (double s : {+1.0, -1.0}) {
      std::vector<double> d(n, 0.0);
      d[i] = s;
      directions.push_back(d);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (double si : {+1.0, -1.0}) {
        for (double sj : {+1.0, -1.0}) {
          std::vector<double> d(n, 0.0);
          d[i] = si;
          d[j] = sj;
          directions.push_back(d);
        }
      }
    }
  }
  double scale = 1.0;
  for (int iter = 0; iter < options.max_iterations && !best_eval.within_tolerance; ++iter) {
    bool improved = false;
    for (const auto& d : directions) {
      LossModel c = best;
      bool moved = false;
      for (std::size_t k = 0; k < n; ++k) {
        if (d[k] == 0.0) continue;
        const auto sp = space_for(options.free[k]);
        auto& v = field(c, options.free[k]);
        const double before = v;
        v = std::clamp(v + d[k] * scale * sp.initial_step, sp.lo, sp.hi);
        moved |= v != before;
      }
      if (moved && try_candidate(c)) {
        improved = true;
        break;
      }
    }
    if (improved) {
      scale = std::min(1.0, scale * 2.0);
      continue;
    }
    scale *= 0.5;
    bool any_left = false;
    for (auto p : options.free) {
      any_left |= scale * space_for(p).initial_step >= space_for(p).min_step;
    }
    if (!any_left) break;
  }

  CalibrationResult result;
  result.loss = best;
  result.achieved_rate = best_eval.rates;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto& s = targets[i].scenario;
    const double theo = theoretical_rate(s.mode, s.aps.front().beacon_interval_tu, s.report_interval_tu);
    result.achieved_miss_rate_pct.push_back(miss_rate(best_eval.rates[i], theo));
  }
  result.objective = best_eval.objective;
  result.evaluations = objective.evaluations;
  result.converged = best_eval.within_tolerance;
  return result;
}

}  // namespace beaconcap
