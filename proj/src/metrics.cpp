#include "beaconcap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace beaconcap {

namespace {

std::int64_t to_us(double seconds) { return std::llround(seconds * 1e6); }

std::vector<std::int64_t> times_for(const CaptureSession& session, const MacAddress& bssid) {
  std::vector<std::int64_t> t;
  for (const auto& r : session.records) {
    if (r.ap.bssid == bssid) t.push_back(r.t_us);
  }
  return t;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string window_label(double w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", w);
  return buf;
}

}  // namespace

double measurement_rate(const CaptureSession& session, const MacAddress& bssid) {
  if (!(session.duration_s > 0)) throw Error("session duration must be positive");
  const auto n = std::count_if(session.records.begin(), session.records.end(),
                               [&](const BeaconRecord& r) { return r.ap.bssid == bssid; });
  return static_cast<double>(n) / session.duration_s;
}

double miss_rate(double rate, double theoretical) {
  if (!(theoretical > 0)) throw Error("non-positive theoretical rate");
  return std::max(0.0, 1.0 - rate / theoretical) * 100.0;
}

double ap_theoretical_rate(const CaptureSession& session, const MacAddress& bssid,
                           double report_interval_tu) {
  if (session.mode == CaptureMode::Normal) {
    return theoretical_rate(CaptureMode::Normal, kDefaultBeaconIntervalTu, report_interval_tu);
  }
  std::map<std::uint32_t, std::size_t> votes;
  for (const auto& r : session.records) {
    if (r.ap.bssid == bssid && r.beacon_interval_tu > 0) ++votes[r.beacon_interval_tu];
  }
  std::uint32_t interval = kDefaultBeaconIntervalTu;
  std::size_t best = 0;
  for (auto [tu, n] : votes) {
    if (n > best) {
      best = n;
      interval = tu;
    }
  }
  return theoretical_rate(CaptureMode::Monitor, interval, report_interval_tu);
}

void DelayHistogram::merge(const DelayHistogram& other) {
  if (bin_width_ms != other.bin_width_ms) throw Error("histogram bin widths differ");
  for (auto [bin, n] : other.bins) bins[bin] += n;
  n_deltas += other.n_deltas;
}

DelayHistogram arrival_delay_histogram(const CaptureSession& session, const MacAddress& bssid,
                                       double bin_width_ms) {
  const std::int64_t width_us = std::llround(bin_width_ms * 1000.0);
  if (width_us <= 0) throw Error("bin width must be positive");
  DelayHistogram h;
  h.bin_width_ms = bin_width_ms;
  const auto t = times_for(session, bssid);
  for (std::size_t i = 1; i < t.size(); ++i) {
    ++h.bins[(t[i] - t[i - 1]) / width_us];
    ++h.n_deltas;
  }
  return h;
}

std::vector<bool> window_occupancy(const CaptureSession& session, const MacAddress& bssid,
                                   const WindowGrid& grid) {
  const std::int64_t window_us = to_us(grid.window_s);
  const std::int64_t offset_us = to_us(grid.offset_s);
  if (window_us <= 0) throw Error("window must be positive");
  if (offset_us < 0) throw Error("window offset must not be negative");
  const std::int64_t count = (session.duration_us() - offset_us) / window_us;
  if (count < 1) throw Error("session shorter than one window");
  std::vector<bool> occupied(static_cast<std::size_t>(count), false);
  for (const auto& r : session.records) {
    if (r.ap.bssid != bssid || r.t_us < offset_us) continue;
    const std::int64_t k = (r.t_us - offset_us) / window_us;
    if (k < count) occupied[static_cast<std::size_t>(k)] = true;
  }
  return occupied;
}

double capture_probability(const CaptureSession& session, const MacAddress& bssid,
                           double window_s, double offset_s) {
  const auto occupied = window_occupancy(session, bssid, {window_s, offset_s});
  const auto hits = std::count(occupied.begin(), occupied.end(), true);
  return static_cast<double>(hits) / static_cast<double>(occupied.size());
}

std::int64_t GapReport::empty_windows() const {
  std::int64_t n = 0;
  for (const auto& run : empty_runs) n += run.length;
  return n;
}

GapReport gap_report(const CaptureSession& session, const MacAddress& bssid, double window_s,
                     double offset_s) {
  const auto occupied = window_occupancy(session, bssid, {window_s, offset_s});
  GapReport report;
  report.window_s = window_s;
  report.window_count = static_cast<std::int64_t>(occupied.size());
  std::int64_t k = 0;
  const auto n = report.window_count;
  while (k < n) {
    if (occupied[static_cast<std::size_t>(k)]) {
      ++k;
      continue;
    }
    const std::int64_t start = k;
    while (k < n && !occupied[static_cast<std::size_t>(k)]) ++k;
    report.empty_runs.push_back({start, k - start});
    report.max_run = std::max(report.max_run, k - start);
  }
  return report;
}

// ---------------------------------------------------------------------------

const ApReport* ScenarioReport::find(const MacAddress& bssid) const {
  for (const auto& a : aps) {
    if (a.ap.bssid == bssid) return &a;
  }
  return nullptr;
}

ScenarioReport aggregate_runs(const RunSet& runset, bool group_by_rp,
                              const AnalysisOptions& options) {
  if (runset.runs.empty()) throw EmptyRunSet("run set '" + runset.label + "' has no runs");
  if (options.windows_s.empty()) throw Error("at least one analysis window is required");
  validate_runset(runset);

  ScenarioReport report;
  report.label = runset.label;
  report.mode = runset.runs.front().mode;
  report.run_count = runset.runs.size();
  report.duration_s = runset.runs.front().duration_s;
  report.options = options;

  std::map<MacAddress, std::string> names;
  for (const auto& run : runset.runs) {
    for (const auto& r : run.records) names.emplace(r.ap.bssid, r.ap.ssid);
  }

  for (const auto& [bssid, ssid] : names) {
    ApReport ap;
    ap.ap = {bssid, ssid};
    ap.histogram.bin_width_ms = options.bin_width_ms;
    ap.capture_probability.assign(options.windows_s.size(), 0.0);

    std::map<std::string, std::pair<double, std::size_t>> by_rp;  // rp -> (sum, n)
    double theo_sum = 0;
    for (const auto& run : runset.runs) {
      const double rate = measurement_rate(run, bssid);
      auto& slot = by_rp[group_by_rp ? run.metadata.rp_id : std::string{}];
      slot.first += rate;
      ++slot.second;
      theo_sum += ap_theoretical_rate(run, bssid, options.report_interval_tu);
      ap.histogram.merge(arrival_delay_histogram(run, bssid, options.bin_width_ms));
      for (std::size_t w = 0; w < options.windows_s.size(); ++w) {
        ap.capture_probability[w] +=
            capture_probability(run, bssid, options.windows_s[w], options.window_offset_s);
      }
      auto gaps = gap_report(run, bssid, options.windows_s.front(), options.window_offset_s);
      ap.max_gap_windows = std::max(ap.max_gap_windows, gaps.max_run);
      ap.gaps.push_back(std::move(gaps));
      ap.total_records += static_cast<std::size_t>(std::llround(rate * run.duration_s));
    }
    double rp_mean_sum = 0;
    for (const auto& [rp, acc] : by_rp) rp_mean_sum += acc.first / static_cast<double>(acc.second);
    const double runs = static_cast<double>(runset.runs.size());
    ap.avg_rate = rp_mean_sum / static_cast<double>(by_rp.size());
    ap.theoretical_rate = theo_sum / runs;
    ap.miss_rate_pct = miss_rate(ap.avg_rate, ap.theoretical_rate);
    for (auto& p : ap.capture_probability) p /= runs;
    report.aps.push_back(std::move(ap));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Rendering

std::string report_to_csv(const ScenarioReport& report, const std::string& generated_at) {
  std::ostringstream out;
  if (!generated_at.empty()) out << "# generated " << generated_at << '\n';
  out << "ap,mode,avg_rate_pps,miss_rate_pct";
  for (double w : report.options.windows_s) out << ",p_capture_" << window_label(w) << 's';
  out << ",max_gap_s\n";
  const double gap_window = report.options.windows_s.empty() ? 1.0 : report.options.windows_s[0];
  for (const auto& a : report.aps) {
    out << a.ap.bssid.str() << ',' << to_string(report.mode) << ',' << fixed(a.avg_rate, 4) << ','
        << fixed(a.miss_rate_pct, 2);
    for (double p : a.capture_probability) out << ',' << fixed(p, 4);
    out << ',' << window_label(static_cast<double>(a.max_gap_windows) * gap_window) << '\n';
  }
  return out.str();
}

namespace {

nlohmann::json histogram_json(const DelayHistogram& h) {
  nlohmann::json bins = nlohmann::json::array();
  for (auto [bin, n] : h.bins) bins.push_back({bin, n});
  return {{"bin_width_ms", h.bin_width_ms}, {"n_deltas", h.n_deltas}, {"bins", bins}};
}

}  // namespace

std::string report_to_json(const ScenarioReport& report, const std::string& generated_at) {
  nlohmann::json j;
  if (!generated_at.empty()) j["generated_at"] = generated_at;
  j["label"] = report.label;
  j["mode"] = to_string(report.mode);
  j["runs"] = report.run_count;
  j["duration_s"] = report.duration_s;
  j["windows_s"] = report.options.windows_s;
  j["window_offset_s"] = report.options.window_offset_s;
  j["bin_width_ms"] = report.options.bin_width_ms;
  j["report_interval_tu"] = report.options.report_interval_tu;
  nlohmann::json aps = nlohmann::json::array();
  for (const auto& a : report.aps) {
    nlohmann::json gaps = nlohmann::json::array();
    for (const auto& g : a.gaps) {
      nlohmann::json runs = nlohmann::json::array();
      for (const auto& r : g.empty_runs) runs.push_back({r.start_window, r.length});
      gaps.push_back({{"window_s", g.window_s},
                      {"window_count", g.window_count},
                      {"max_run", g.max_run},
                      {"empty_runs", runs}});
    }
    aps.push_back({{"bssid", a.ap.bssid.str()},
                   {"ssid", a.ap.ssid},
                   {"avg_rate_pps", a.avg_rate},
                   {"theoretical_rate_pps", a.theoretical_rate},
                   {"miss_rate_pct", a.miss_rate_pct},
                   {"capture_probability", a.capture_probability},
                   {"max_gap_windows", a.max_gap_windows},
                   {"total_records", a.total_records},
                   {"histogram", histogram_json(a.histogram)},
                   {"gaps", gaps}});
  }
  j["aps"] = aps;
  return j.dump(2) + "\n";
}

ScenarioReport report_from_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  ScenarioReport report;
  report.label = j.value("label", "");
  report.mode = parse_capture_mode(j.at("mode").get<std::string>());
  report.run_count = j.at("runs").get<std::size_t>();
  report.duration_s = j.at("duration_s").get<double>();
  report.options.windows_s = j.at("windows_s").get<std::vector<double>>();
  report.options.window_offset_s = j.value("window_offset_s", 0.0);
  report.options.bin_width_ms = j.at("bin_width_ms").get<double>();
  report.options.report_interval_tu = j.value("report_interval_tu", double(kDefaultReportIntervalTu));
  for (const auto& ja : j.at("aps")) {
    ApReport a;
    a.ap = {MacAddress::parse(ja.at("bssid").get<std::string>()), ja.value("ssid", "")};
    a.avg_rate = ja.at("avg_rate_pps").get<double>();
    a.theoretical_rate = ja.at("theoretical_rate_pps").get<double>();
    a.miss_rate_pct = ja.at("miss_rate_pct").get<double>();
    a.capture_probability = ja.at("capture_probability").get<std::vector<double>>();
    a.max_gap_windows = ja.at("max_gap_windows").get<std::int64_t>();
    a.total_records = ja.value("total_records", std::size_t{0});
    const auto& jh = ja.at("histogram");
    a.histogram.bin_width_ms = jh.at("bin_width_ms").get<double>();
    a.histogram.n_deltas = jh.at("n_deltas").get<std::uint64_t>();
    for (const auto& b : jh.at("bins")) {
      a.histogram.bins[b.at(0).get<std::int64_t>()] = b.at(1).get<std::uint64_t>();
    }
    for (const auto& jg : ja.at("gaps")) {
      GapReport g;
      g.window_s = jg.at("window_s").get<double>();
      g.window_count = jg.at("window_count").get<std::int64_t>();
      g.max_run = jg.at("max_run").get<std::int64_t>();
      for (const auto& r : jg.at("empty_runs")) {
        g.empty_runs.push_back({r.at(0).get<std::int64_t>(), r.at(1).get<std::int64_t>()});
      }
      a.gaps.push_back(std::move(g));
    }
    report.aps.push_back(std::move(a));
  }
  return report;
}

std::string report_to_text(const ScenarioReport& report, const std::string& generated_at) {
  std::ostringstream out;
  if (!generated_at.empty()) out << "generated: " << generated_at << '\n';
  out << "scenario: " << (report.label.empty() ? "-" : report.label) << '\n'
      << "mode: " << to_string(report.mode) << '\n'
      << "runs: " << report.run_count << " x " << window_label(report.duration_s) << " s\n\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-17s  %-12s  %9s  %9s  %9s", "bssid", "ssid", "rate/s",
                "theory/s", "miss %");
  out << line;
  for (double w : report.options.windows_s) {
    std::snprintf(line, sizeof line, "  %8s", ("p(" + window_label(w) + "s)").c_str());
    out << line;
  }
  out << "  max gap\n";
  const double gap_window = report.options.windows_s.empty() ? 1.0 : report.options.windows_s[0];
  for (const auto& a : report.aps) {
    std::snprintf(line, sizeof line, "%-17s  %-12.12s  %9.2f  %9s  %8.2f%%", a.ap.bssid.str().c_str(),
                  a.ap.ssid.c_str(), a.avg_rate, format_rate(a.theoretical_rate).c_str(),
                  a.miss_rate_pct);
    out << line;
    for (double p : a.capture_probability) {
      std::snprintf(line, sizeof line, "  %7.1f%%", p * 100.0);
      out << line;
    }
    out << "  " << window_label(static_cast<double>(a.max_gap_windows) * gap_window) << " s\n";
  }
  return out.str();
}

std::string histogram_to_csv(const ScenarioReport& report) {
  std::ostringstream out;
  out << "ap,bin_start_ms,bin_end_ms,count\n";
  for (const auto& a : report.aps) {
    const double w = a.histogram.bin_width_ms;
    for (auto [bin, n] : a.histogram.bins) {
      out << a.ap.bssid.str() << ',' << window_label(static_cast<double>(bin) * w) << ','
          << window_label(static_cast<double>(bin + 1) * w) << ',' << n << '\n';
    }
  }
  return out.str();
}

std::string gaps_to_csv(const ScenarioReport& report) {
  std::ostringstream out;
  out << "ap,run,window_s,start_window,length_windows\n";
  for (const auto& a : report.aps) {
    for (std::size_t run = 0; run < a.gaps.size(); ++run) {
      for (const auto& g : a.gaps[run].empty_runs) {
        out << a.ap.bssid.str() << ',' << run << ',' << window_label(a.gaps[run].window_s) << ','
            << g.start_window << ',' << g.length << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace beaconcap
