#include "beaconcap/radiomap.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "beaconcap/metrics.hpp"

namespace beaconcap {

void RunningStats::merge(const RunningStats& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const auto n = n_ + other.n_;
  const double delta = other.mean_ - mean_;
  mean_ += delta * static_cast<double>(other.n_) / static_cast<double>(n);
  m2_ += other.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(other.n_) /
                         static_cast<double>(n);
  n_ = n;
}

double RunningStats::stddev() const { return std::sqrt(variance()); }

RadioMap build_radiomap(const std::vector<std::pair<ReferencePoint, CaptureSession>>& sessions,
                        std::uint64_t min_samples) {
  struct Acc {
    RunningStats stats;
    double availability_sum = 0;
    int sessions = 0;
  };
  RadioMap map;
  std::map<std::pair<std::string, MacAddress>, Acc> acc;
  std::map<std::string, int> sessions_per_rp;

  for (const auto& [rp, session] : sessions) {
    if (auto [it, fresh] = map.points.emplace(rp.id, rp); !fresh && !(it->second == rp)) {
      throw Error("reference point '" + rp.id + "' defined twice with different coordinates");
    }
    ++sessions_per_rp[rp.id];
    std::map<MacAddress, RunningStats> per_ap;
    for (const auto& r : session.records) per_ap[r.ap.bssid].push(r.rssi_dbm);
    for (const auto& [bssid, stats] : per_ap) {
      auto& a = acc[{rp.id, bssid}];
      a.stats.merge(stats);
      a.availability_sum += session.duration_s >= 1.0 ? capture_probability(session, bssid, 1.0) : 0.0;
      ++a.sessions;
    }
  }
  for (const auto& [key, a] : acc) {
    RadioMapEntry e;
    e.mean_rssi_dbm = a.stats.mean();
    e.stddev_db = a.stats.stddev();
    e.sample_count = a.stats.count();
    // Sessions at this RP that never saw the AP count as zero availability.
    e.availability = a.availability_sum / static_cast<double>(sessions_per_rp[key.first]);
    e.sparse = e.sample_count < min_samples;
    map.entries.emplace(key, e);
  }
  return map;
}

double survey_time_estimate(double rate, std::uint64_t samples_needed) {
  if (samples_needed < 1) throw Error("samples_needed must be at least 1");
  if (!(rate > 0)) throw Unreachable("measurement rate must be positive");
  return static_cast<double>(samples_needed) / rate;
}

namespace {

constexpr std::string_view kHeader = "rp_id,x,y,bssid,mean_rssi,stddev,count,availability";

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

std::string radiomap_to_csv(const RadioMap& map) {
  std::ostringstream out;
  out << kHeader << '\n';
  for (const auto& [key, e] : map.entries) {
    const auto& rp = map.points.at(key.first);
    out << rp.id << ',' << fmt("%.3f", rp.x_m) << ',' << fmt("%.3f", rp.y_m) << ','
        << key.second.str() << ',' << fmt("%.2f", e.mean_rssi_dbm) << ',' << fmt("%.2f", e.stddev_db)
        << ',' << e.sample_count << ',' << fmt("%.4f", e.availability) << '\n';
  }
  return out.str();
}

void export_radiomap(const RadioMap& map, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << radiomap_to_csv(map);
  if (!out) throw Error("write failed on " + path);
}

RadioMap radiomap_from_csv(const std::string& text, std::uint64_t min_samples) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw Error("radio map CSV header mismatch");
  RadioMap map;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 8) throw Error("radio map row " + std::to_string(row) + " has " + std::to_string(f.size()) + " columns");
    ReferencePoint rp{f[0], std::stod(f[1]), std::stod(f[2]), {}};
    map.points.emplace(rp.id, rp);
    RadioMapEntry e;
    e.mean_rssi_dbm = std::stod(f[4]);
    e.stddev_db = std::stod(f[5]);
    e.sample_count = std::stoull(f[6]);
    e.availability = std::stod(f[7]);
    e.sparse = e.sample_count < min_samples;
    map.entries[{rp.id, MacAddress::parse(f[3])}] = e;
  }
  return map;
}

RadioMap import_radiomap(const std::string& path, std::uint64_t min_samples) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return radiomap_from_csv(buf.str(), min_samples);
}

}  // namespace beaconcap
