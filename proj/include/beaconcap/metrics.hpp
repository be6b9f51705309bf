#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "beaconcap/capture_model.hpp"

namespace beaconcap {

inline constexpr double kDefaultBinWidthMs = 25.0;

// Records per second for one AP over the whole session.
double measurement_rate(const CaptureSession& session, const MacAddress& bssid);

// Percentage shortfall against the theoretical rate, clamped at 0.
double miss_rate(double rate, double theoretical);

// Theoretical rate for one AP in a session: monitor mode uses the AP's
// advertised interval (100 TU when absent), normal mode the report interval.
double ap_theoretical_rate(const CaptureSession& session, const MacAddress& bssid,
                           double report_interval_tu = kDefaultReportIntervalTu);

struct DelayHistogram {
  double bin_width_ms = kDefaultBinWidthMs;
  std::map<std::int64_t, std::uint64_t> bins;  // floor(delta / width) -> count
  std::uint64_t n_deltas = 0;

  void merge(const DelayHistogram& other);
  bool operator==(const DelayHistogram&) const = default;
};

// Deltas between consecutive records of one AP. Fewer than two records give
// an empty histogram.
DelayHistogram arrival_delay_histogram(const CaptureSession& session, const MacAddress& bssid,
                                       double bin_width_ms = kDefaultBinWidthMs);

struct WindowGrid {
  double window_s = 1.0;
  double offset_s = 0.0;  // first window starts here, relative to session start
};

// Occupancy of disjoint windows [offset + kW, offset + (k+1)W) that fit in the
// session. Throws Error when no window fits.
std::vector<bool> window_occupancy(const CaptureSession& session, const MacAddress& bssid,
                                   const WindowGrid& grid);

double capture_probability(const CaptureSession& session, const MacAddress& bssid,
                           double window_s, double offset_s = 0.0);

struct GapRun {
  std::int64_t start_window = 0;
  std::int64_t length = 0;
  bool operator==(const GapRun&) const = default;
};

struct GapReport {
  double window_s = 1.0;
  std::int64_t window_count = 0;
  std::vector<GapRun> empty_runs;
  std::int64_t max_run = 0;

  std::int64_t empty_windows() const;
};

GapReport gap_report(const CaptureSession& session, const MacAddress& bssid, double window_s,
                     double offset_s = 0.0);

// ---------------------------------------------------------------------------
// Aggregation

struct AnalysisOptions {
  std::vector<double> windows_s{1.0, 2.0};
  double bin_width_ms = kDefaultBinWidthMs;
  double window_offset_s = 0.0;
  double report_interval_tu = kDefaultReportIntervalTu;
};

struct ApReport {
  ApIdentity ap;
  double avg_rate = 0;
  double theoretical_rate = 0;
  double miss_rate_pct = 0;
  DelayHistogram histogram;
  std::vector<double> capture_probability;  // one per configured window
  std::vector<GapReport> gaps;              // per run, at the first window
  std::int64_t max_gap_windows = 0;
  std::size_t total_records = 0;
};

struct ScenarioReport {
  std::string label;
  CaptureMode mode = CaptureMode::Monitor;
  std::size_t run_count = 0;
  double duration_s = 0;
  AnalysisOptions options;
  std::vector<ApReport> aps;  // BSSID order

  const ApReport* find(const MacAddress& bssid) const;
};

class EmptyRunSet : public Error {
 public:
  using Error::Error;
};

// Per-AP mean of per-run rates. With group_by_rp, runs are first averaged
// within each reference point (metadata.rp_id), then across reference points.
// Miss-rate is recomputed from the aggregated rate.
ScenarioReport aggregate_runs(const RunSet& runset, bool group_by_rp = false,
                              const AnalysisOptions& options = {});

// Report rendering. `generated_at` is written as a header line when non-empty.
std::string report_to_csv(const ScenarioReport& report, const std::string& generated_at = {});
std::string report_to_json(const ScenarioReport& report, const std::string& generated_at = {});
std::string report_to_text(const ScenarioReport& report, const std::string& generated_at = {});
std::string histogram_to_csv(const ScenarioReport& report);
std::string gaps_to_csv(const ScenarioReport& report);

ScenarioReport report_from_json(const std::string& json_text);

}  // namespace beaconcap
