#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "beaconcap/capture_model.hpp"

namespace beaconcap {

// Single-pass mean / variance (Welford), mergeable across partitions.
class RunningStats {
 public:
  void push(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  void merge(const RunningStats& other);

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  // Sample variance; zero below two samples.
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double stddev() const;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

inline constexpr std::uint64_t kDefaultMinSamples = 10;

struct RadioMapEntry {
  double mean_rssi_dbm = 0;
  double stddev_db = 0;
  std::uint64_t sample_count = 0;
  double availability = 0;  // capture probability in 1 s windows
  bool sparse = false;      // fewer than the minimum sample count

  bool operator==(const RadioMapEntry&) const = default;
};

struct RadioMap {
  std::map<std::string, ReferencePoint> points;
  std::map<std::pair<std::string, MacAddress>, RadioMapEntry> entries;

  bool operator==(const RadioMap&) const = default;
};

RadioMap build_radiomap(const std::vector<std::pair<ReferencePoint, CaptureSession>>& sessions,
                        std::uint64_t min_samples = kDefaultMinSamples);

class Unreachable : public Error {
 public:
  using Error::Error;
};

// Seconds needed to collect `samples_needed` measurements at `rate` per second.
double survey_time_estimate(double rate, std::uint64_t samples_needed);

// rp_id,x,y,bssid,mean_rssi,stddev,count,availability
void export_radiomap(const RadioMap& map, const std::string& path);
std::string radiomap_to_csv(const RadioMap& map);
RadioMap radiomap_from_csv(const std::string& text, std::uint64_t min_samples = kDefaultMinSamples);
RadioMap import_radiomap(const std::string& path, std::uint64_t min_samples = kDefaultMinSamples);

}  // namespace beaconcap
