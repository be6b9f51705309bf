#include "beaconcap/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "beaconcap/frame_codec.hpp"
#include "beaconcap/metrics.hpp"
#include "beaconcap/radiomap.hpp"
#include "beaconcap/scenario_config.hpp"
#include "beaconcap/simulator.hpp"

namespace fs = std::filesystem;

namespace beaconcap::cli {

namespace {

// Raised for bad input data (as opposed to bad flags).
struct InputError : Error {
  using Error::Error;
};

struct CommonOptions {
  std::string out_dir;
  std::string windows = "1,2";
  double bin_width_ms = kDefaultBinWidthMs;
  double window_offset_s = 0.0;
  double report_interval_tu = kDefaultReportIntervalTu;
  std::string format;  // empty: every format
  bool no_header_timestamp = false;
};

std::vector<double> parse_windows(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string cell; std::getline(ss, cell, ',');) {
    std::size_t used = 0;
    double w = 0;
    try {
      w = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != cell.size() || !(w > 0)) throw CLI::ValidationError("--windows", "'" + cell + "' is not a positive number");
    out.push_back(w);
  }
  if (out.empty()) throw CLI::ValidationError("--windows", "at least one window is required");
  return out;
}

std::string timestamp_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return ".";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoFailure("cannot write " + path.string());
  out << text;
  if (!out) throw IoFailure("write failed on " + path.string());
}

// Writes report.{csv,json,txt} plus histogram.csv and gaps.csv.
void write_report_files(const ScenarioReport& report, const fs::path& dir, const CommonOptions& opts,
                        std::ostream& out) {
  fs::create_directories(dir);
  const std::string stamp = opts.no_header_timestamp ? std::string{} : timestamp_now();
  const bool all = opts.format.empty();
  if (all || opts.format == "csv") write_text(dir / "report.csv", report_to_csv(report, stamp));
  if (all || opts.format == "json") write_text(dir / "report.json", report_to_json(report, stamp));
  if (all || opts.format == "text") write_text(dir / "report.txt", report_to_text(report, stamp));
  write_text(dir / "histogram.csv", histogram_to_csv(report));
  write_text(dir / "gaps.csv", gaps_to_csv(report));
  out << report_to_text(report) << "written to " << dir.string() << '\n';
}

AnalysisOptions analysis_options(const CommonOptions& c) {
  AnalysisOptions a;
  a.windows_s = parse_windows(c.windows);
  a.bin_width_ms = c.bin_width_ms;
  a.window_offset_s = c.window_offset_s;
  a.report_interval_tu = c.report_interval_tu;
  if (!(a.bin_width_ms > 0)) throw CLI::ValidationError("--bin-width-ms", "must be positive");
  return a;
}

void add_common(CLI::App* app, CommonOptions& c) {
  app->add_option("--out", c.out_dir, std::string("Output directory (default $") + kOutputDirEnv + " or .)");
  app->add_option("--windows", c.windows, "Capture-probability windows in seconds, comma separated")
      ->capture_default_str();
  app->add_option("--bin-width-ms", c.bin_width_ms, "Delay histogram bin width")->capture_default_str();
  app->add_option("--window-offset-s", c.window_offset_s, "Offset of the first analysis window");
  app->add_option("--report-interval-tu", c.report_interval_tu, "Normal-mode report interval")
      ->capture_default_str();
  app->add_option("--format", c.format, "Write only this report format")
      ->check(CLI::IsMember({"csv", "json", "text"}));
  app->add_flag("--no-header-timestamp", c.no_header_timestamp, "Omit the generation timestamp");
}

constexpr std::string_view kCaptureCsvHeader = "timestamp_us,bssid,ssid,rssi_dbm,channel,beacon_interval_tu";

// Directory scans skip CSV files that are not captures (reports, histograms).
bool is_capture_file(const fs::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".pcap" || ext == ".cap") return true;
  if (ext != ".csv") return false;
  std::ifstream in(p);
  std::string first;
  std::getline(in, first);
  if (!first.empty() && first.back() == '\r') first.pop_back();
  return first == kCaptureCsvHeader;
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.is_regular_file() && is_capture_file(e.path())) found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  return files;
}

// Normal mode reports about once per second, monitor mode about ten times.
CaptureMode infer_mode(const std::vector<CaptureSession>& sessions) {
  std::vector<std::int64_t> deltas;
  for (const auto& s : sessions) {
    std::map<MacAddress, std::int64_t> last;
    for (const auto& r : s.records) {
      if (auto it = last.find(r.ap.bssid); it != last.end()) deltas.push_back(r.t_us - it->second);
      last[r.ap.bssid] = r.t_us;
    }
  }
  if (deltas.empty()) return CaptureMode::Monitor;
  std::nth_element(deltas.begin(), deltas.begin() + deltas.size() / 2, deltas.end());
  return deltas[deltas.size() / 2] >= 512'000 ? CaptureMode::Normal : CaptureMode::Monitor;
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
  CommonOptions common;
  std::vector<std::string> inputs;
  std::string mode;
  std::string clock = "capture";
  std::optional<double> duration_s;
  bool group_by_rp = false;
  std::string label = "analysis";
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  const auto analysis = analysis_options(a.common);
  const auto files = expand_inputs(a.inputs);
  if (files.empty()) {
    err << "error: no input files\n";
    return kInputError;
  }
  ReadOptions ro;
  ro.clock = a.clock == "tsft" ? ReceiverClock::RadiotapTsft : ReceiverClock::CaptureHeader;
  ro.duration_s = a.duration_s;

  std::vector<CaptureSession> sessions;
  std::size_t failed = 0;
  for (const auto& f : files) {
    try {
      auto s = read_any_capture(f.string(), ro);
      s.metadata.rp_id = f.parent_path().filename().string();
      if (s.metadata.empty_capture) err << "warning: " << f.string() << ": no valid beacons\n";
      if (s.metadata.skipped || s.metadata.duplicates) {
        err << "note: " << f.string() << ": skipped " << s.metadata.skipped << ", duplicates "
            << s.metadata.duplicates << '\n';
      }
      sessions.push_back(std::move(s));
    } catch (const Error& e) {
      err << "error: " << f.string() << ": " << e.what() << '\n';
      ++failed;
    }
  }
  if (sessions.empty()) {
    err << "error: none of the " << files.size() << " input files could be read\n";
    return kInputError;
  }

  const CaptureMode mode = a.mode.empty() ? infer_mode(sessions) : parse_capture_mode(a.mode);
  double duration = 0;
  for (const auto& s : sessions) duration = std::max(duration, s.duration_s);
  RunSet runs;
  runs.label = a.label;
  for (auto& s : sessions) {
    s.mode = mode;
    s.duration_s = duration;
    runs.runs.push_back(std::move(s));
  }
  const auto report = aggregate_runs(runs, a.group_by_rp, analysis);
  write_report_files(report, resolve_out_dir(a.common.out_dir), a.common, out);
  if (failed) err << failed << " of " << files.size() << " files could not be read\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  CommonOptions common;
  std::string scenario_path;
  std::string preset_name;
  std::string mode;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<double> duration_s;
  std::string emit = "pcap";
};

std::vector<SimScenario> scenarios_for(const std::string& scenario_path, const std::string& preset_name,
                                       const std::string& mode) {
  std::vector<SimScenario> out;
  if (!scenario_path.empty()) {
    try {
      out.push_back(load_scenario(scenario_path));
    } catch (const Error& e) {
      throw InputError(std::string("invalid scenario: ") + e.what());
    }
    if (!mode.empty()) out.back().mode = parse_capture_mode(mode);
    return out;
  }
  const std::vector<CaptureMode> modes =
      mode.empty() ? std::vector<CaptureMode>{CaptureMode::Normal, CaptureMode::Monitor}
                   : std::vector<CaptureMode>{parse_capture_mode(mode)};
  for (auto m : modes) out.push_back(preset(preset_name, m));
  return out;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  auto scenarios = scenarios_for(a.scenario_path, a.preset_name, a.mode);
  const fs::path root = resolve_out_dir(a.common.out_dir);
  const auto analysis = analysis_options(a.common);
  for (auto& s : scenarios) {
    if (a.seed) s.seed = *a.seed;
    if (a.runs) s.runs = *a.runs;
    if (a.duration_s) s.duration_s = *a.duration_s;
    try {
      s.validate();
    } catch (const Error& e) {
      throw InputError(std::string("invalid scenario: ") + e.what());
    }
    const auto runset = simulate(s);
    const fs::path dir = root / (s.name.empty() ? "scenario" : s.name) / std::string(to_string(s.mode));
    fs::create_directories(dir);
    for (const auto& run : runset.runs) {
      char stem[64];
      std::snprintf(stem, sizeof stem, "run_%02d", run.metadata.run_index);
      const std::string prefix = run.metadata.rp_id.empty() ? "" : run.metadata.rp_id + "_";
      if (a.emit == "pcap" || a.emit == "both") write_capture_file(run, (dir / (prefix + stem + ".pcap")).string());
      if (a.emit == "csv" || a.emit == "both") write_capture_csv(run, (dir / (prefix + stem + ".csv")).string());
    }
    save_scenario(s, (dir / "scenario.json").string());
    const auto report = aggregate_runs(runset, !s.reference_points.empty(), analysis);
    write_report_files(report, dir, a.common, out);
  }
  (void)err;
  return kOk;
}

// ---------------------------------------------------------------------------

struct CalibrateArgs {
  CommonOptions common;
  std::string request_path;
  std::string preset_name;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
};

int cmd_calibrate(const CalibrateArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<CalibrationRequest> requests;
  if (!a.request_path.empty()) {
    std::ifstream in(a.request_path);
    if (!in) throw InputError("cannot open " + a.request_path);
    try {
      requests.push_back(calibration_request_from_json(nlohmann::json::parse(in)));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(a.request_path + ": " + e.what());
    } catch (const Error& e) {
      throw InputError(a.request_path + ": " + e.what());
    }
  } else if (a.preset_name == "signal-strength") {
    for (auto mode : {CaptureMode::Normal, CaptureMode::Monitor}) {
      CalibrationRequest r;
      r.targets = signal_strength_targets(mode);
      requests.push_back(std::move(r));
    }
  } else {
    throw CLI::ValidationError("--preset", "unknown target set '" + a.preset_name + "'");
  }

  const fs::path dir = resolve_out_dir(a.common.out_dir);
  fs::create_directories(dir);
  bool all_converged = true;
  for (auto& req : requests) {
    if (a.tolerance) req.options.tolerance = *a.tolerance;
    if (a.seed) req.options.seed = *a.seed;
    const LossModel start = req.start_given ? req.start : req.targets.front().scenario.loss;
    CalibrationResult result;
    try {
      result = calibrate(req.targets, start, req.options);
    } catch (const Infeasible& e) {
      err << "error: infeasible calibration: " << e.what() << '\n';
      return kCalibrationFailed;
    }
    all_converged &= result.converged;
    for (std::size_t i = 0; i < req.targets.size(); ++i) {
      SimScenario s = req.targets[i].scenario;
      s.loss = result.loss;
      auto j = scenario_to_json(s);
      j["calibration"] = {{"target_rate_pps", req.targets[i].rate},
                          {"achieved_rate_pps", result.achieved_rate[i]},
                          {"achieved_miss_rate_pct", result.achieved_miss_rate_pct[i]},
                          {"tolerance", req.options.tolerance},
                          {"seed", req.options.seed},
                          {"converged", result.converged},
                          {"evaluations", result.evaluations}};
      if (req.targets[i].miss_rate_pct) j["calibration"]["target_miss_rate_pct"] = *req.targets[i].miss_rate_pct;
      if (!a.common.no_header_timestamp) j["calibration"]["generated_at"] = timestamp_now();
      const std::string file = (s.name.empty() ? "target" + std::to_string(i) : s.name) + "-" +
                               std::string(to_string(s.mode)) + ".json";
      write_text(dir / file, j.dump(2) + "\n");
      char line[256];
      std::snprintf(line, sizeof line, "%-24s %-8s target %8.4f  achieved %8.4f  miss %6.2f%%\n",
                    s.name.c_str(), std::string(to_string(s.mode)).c_str(), req.targets[i].rate,
                    result.achieved_rate[i], result.achieved_miss_rate_pct[i]);
      out << line;
    }
    out << "loss model: " << loss_to_json(result.loss).dump() << (result.converged ? "" : "  [not converged]")
        << '\n';
  }
  if (!all_converged) {
    err << "error: calibration did not reach the tolerance; best parameters were written\n";
    return kCalibrationFailed;
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct RadiomapArgs {
  CommonOptions common;
  std::vector<std::string> inputs;  // RP[@x,y]=path
  std::string scenario_path;
  std::string preset_name;
  std::string mode;
  std::uint64_t samples_needed = 100;
  std::uint64_t min_samples = kDefaultMinSamples;
};

ReferencePoint parse_rp_spec(const std::string& spec, std::string& path) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw CLI::ValidationError("--input", "expected RP[@x,y]=path, got '" + spec + "'");
  }
  path = spec.substr(eq + 1);
  std::string head = spec.substr(0, eq);
  ReferencePoint rp;
  const auto at = head.find('@');
  rp.id = head.substr(0, at);
  if (at != std::string::npos) {
    const std::string coords = head.substr(at + 1);
    const auto comma = coords.find(',');
    if (comma == std::string::npos) throw CLI::ValidationError("--input", "coordinates must be x,y");
    rp.x_m = std::stod(coords.substr(0, comma));
    rp.y_m = std::stod(coords.substr(comma + 1));
  }
  return rp;
}

int cmd_radiomap(const RadiomapArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<std::pair<ReferencePoint, CaptureSession>> sessions;
  if (!a.inputs.empty()) {
    for (const auto& spec : a.inputs) {
      std::string path;
      const auto rp = parse_rp_spec(spec, path);
      const auto files = expand_inputs({path});
      if (files.empty()) throw InputError("no input files for " + rp.id);
      for (const auto& f : files) {
        try {
          sessions.emplace_back(rp, read_any_capture(f.string()));
        } catch (const Error& e) {
          err << "error: " << f.string() << ": " << e.what() << '\n';
        }
      }
    }
  } else {
    for (const auto& s : scenarios_for(a.scenario_path, a.preset_name, a.mode.empty() ? "monitor" : a.mode)) {
      const auto runset = simulate(s);
      std::map<std::string, ReferencePoint> points;
      for (const auto& rp : s.reference_points) points[rp.point.id] = rp.point;
      for (const auto& run : runset.runs) {
        ReferencePoint rp = run.metadata.rp_id.empty() ? ReferencePoint{"RP1", 0, 0, {}} : points[run.metadata.rp_id];
        sessions.emplace_back(rp, run);
      }
    }
  }
  if (sessions.empty()) throw InputError("no sessions to build a radio map from");

  const auto map = build_radiomap(sessions, a.min_samples);
  const fs::path dir = resolve_out_dir(a.common.out_dir);
  fs::create_directories(dir);
  export_radiomap(map, (dir / "radiomap.csv").string());

  // Survey time per entry from the observed rate at that point.
  std::map<std::string, double> seconds_per_rp;
  for (const auto& [rp, session] : sessions) seconds_per_rp[rp.id] += session.duration_s;
  std::ostringstream survey;
  survey << "rp_id,bssid,rate_pps,samples_needed,survey_time_s\n";
  for (const auto& [key, e] : map.entries) {
    const double rate = static_cast<double>(e.sample_count) / seconds_per_rp[key.first];
    survey << key.first << ',' << key.second.str() << ',' << rate << ',' << a.samples_needed << ',';
    try {
      survey << survey_time_estimate(rate, a.samples_needed);
    } catch (const Unreachable&) {
      survey << "inf";
    }
    survey << '\n';
    if (e.sparse) err << "warning: " << key.first << " / " << key.second.str() << " has only " << e.sample_count << " samples\n";
  }
  write_text(dir / "survey.csv", survey.str());
  out << map.entries.size() << " radio-map entries over " << map.points.size() << " reference points written to "
      << dir.string() << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct ReportArgs {
  std::string input;
  std::string format = "text";
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
  std::ifstream in(a.input);
  if (!in) throw InputError("cannot open " + a.input);
  std::stringstream buf;
  buf << in.rdbuf();
  ScenarioReport report;
  try {
    report = report_from_json(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(a.input + ": " + e.what());
  }
  if (a.format == "csv") {
    out << report_to_csv(report);
  } else if (a.format == "json") {
    out << report_to_json(report);
  } else {
    out << report_to_text(report);
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Beacon capture analysis and capture-mode simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "beaconcap 0.1.0");

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "Compute rate, miss-rate, delay and gap metrics from captures");
  an->add_option("--input", analyze.inputs, "Capture files or directories (pcap or CSV)")->required();
  an->add_option("--mode", analyze.mode, "Capture mode (inferred from arrival spacing when omitted)")
      ->check(CLI::IsMember({"normal", "monitor"}));
  an->add_option("--clock", analyze.clock, "Receiver clock")->check(CLI::IsMember({"capture", "tsft"}));
  an->add_option("--duration-s", analyze.duration_s, "Session duration (default: covering the capture)");
  an->add_option("--label", analyze.label, "Scenario label for the report");
  an->add_flag("--group-by-rp", analyze.group_by_rp, "Average per reference point (parent directory name) first");
  add_common(an, analyze.common);

  SimulateArgs simulate_args;
  auto* sim = app.add_subcommand("simulate", "Simulate capture sessions from a scenario or preset");
  auto* sim_scn = sim->add_option("--scenario", simulate_args.scenario_path, "Scenario file (JSON)");
  auto* sim_pre = sim->add_option("--preset", simulate_args.preset_name, "Built-in scenario")
                      ->check(CLI::IsMember(preset_names()));
  sim_scn->excludes(sim_pre);
  sim->add_option("--mode", simulate_args.mode, "Capture mode (presets default to both)")
      ->check(CLI::IsMember({"normal", "monitor"}));
  sim->add_option("--seed", simulate_args.seed, "Override the scenario seed");
  sim->add_option("--runs", simulate_args.runs, "Override the run count");
  sim->add_option("--duration-s", simulate_args.duration_s, "Override the run duration");
  sim->add_option("--emit", simulate_args.emit, "Per-run capture files")
      ->check(CLI::IsMember({"pcap", "csv", "both", "none"}))
      ->capture_default_str();
  add_common(sim, simulate_args.common);

  CalibrateArgs cal;
  auto* ca = app.add_subcommand("calibrate", "Fit loss-model parameters to target rates");
  auto* ca_scn = ca->add_option("--scenario", cal.request_path, "Calibration request file (JSON)");
  auto* ca_pre = ca->add_option("--preset", cal.preset_name, "Built-in target set")
                     ->check(CLI::IsMember({"signal-strength"}));
  ca_scn->excludes(ca_pre);
  ca->add_option("--tolerance", cal.tolerance, "Relative rate tolerance");
  ca->add_option("--seed", cal.seed, "Calibration seed");
  add_common(ca, cal.common);

  RadiomapArgs rm;
  auto* rmc = app.add_subcommand("radiomap", "Build a radio map and survey-time estimates");
  auto* rm_in = rmc->add_option("--input", rm.inputs, "RP[@x,y]=capture file or directory");
  auto* rm_scn = rmc->add_option("--scenario", rm.scenario_path, "Scenario with reference points");
  auto* rm_pre = rmc->add_option("--preset", rm.preset_name, "Built-in scenario")->check(CLI::IsMember(preset_names()));
  rm_in->excludes(rm_scn)->excludes(rm_pre);
  rm_scn->excludes(rm_pre);
  rmc->add_option("--mode", rm.mode, "Capture mode for simulated input")->check(CLI::IsMember({"normal", "monitor"}));
  rmc->add_option("--samples-needed", rm.samples_needed, "Samples wanted per AP and point")->capture_default_str();
  rmc->add_option("--min-samples", rm.min_samples, "Entries below this count are flagged")->capture_default_str();
  add_common(rmc, rm.common);

  ReportArgs rep;
  auto* rp = app.add_subcommand("report", "Render a saved report.json");
  rp->add_option("--input", rep.input, "report.json")->required();
  rp->add_option("--format", rep.format, "Output format")->check(CLI::IsMember({"csv", "json", "text"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (sim->parsed() && simulate_args.scenario_path.empty() && simulate_args.preset_name.empty()) {
      throw CLI::RequiredError("--scenario or --preset");
    }
    if (ca->parsed() && cal.request_path.empty() && cal.preset_name.empty()) {
      throw CLI::RequiredError("--scenario or --preset");
    }
    if (rmc->parsed() && rm.inputs.empty() && rm.scenario_path.empty() && rm.preset_name.empty()) {
      throw CLI::RequiredError("--input, --scenario or --preset");
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << "beaconcap 0.1.0\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (an->parsed()) return cmd_analyze(analyze, out, err);
    if (sim->parsed()) return cmd_simulate(simulate_args, out, err);
    if (ca->parsed()) return cmd_calibrate(cal, out, err);
    if (rmc->parsed()) return cmd_radiomap(rm, out, err);
    if (rp->parsed()) return cmd_report(rep, out);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kUsageError;
}

}  // namespace beaconcap::cli
