#include "beaconcap/capture_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <utility>

namespace beaconcap {

std::string_view to_string(CaptureMode mode) {
  return mode == CaptureMode::Normal ? "normal" : "monitor";
}

CaptureMode parse_capture_mode(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "normal") return CaptureMode::Normal;
  if (lower == "monitor") return CaptureMode::Monitor;
  throw Error("unknown capture mode '" + std::string(text) + "'");
}

MacAddress MacAddress::parse(std::string_view text) {
  MacAddress mac;
  unsigned int b[6];
  char trailing = 0;
  const std::string s(text);
  if (std::sscanf(s.c_str(), "%2x:%2x:%2x:%2x:%2x:%2x%c", &b[0], &b[1], &b[2], &b[3], &b[4],
                  &b[5], &trailing) != 6 ||
      s.size() != 17) {
    throw Error("malformed MAC address '" + s + "'");
  }
  for (int i = 0; i < 6; ++i) mac.bytes[i] = static_cast<std::uint8_t>(b[i]);
  return mac;
}

std::string MacAddress::str() const {
  char buf[18];
  std::snprintf(buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x", bytes[0], bytes[1], bytes[2],
                bytes[3], bytes[4], bytes[5]);
  return buf;
}

std::uint64_t MacAddress::as_u64() const {
  std::uint64_t v = 0;
  for (auto b : bytes) v = (v << 8) | b;
  return v;
}

std::int64_t CaptureSession::duration_us() const {
  return std::llround(duration_s * 1e6);
}

std::vector<ApIdentity> CaptureSession::access_points() const {
  std::map<MacAddress, std::string> seen;
  for (const auto& r : records) seen.emplace(r.ap.bssid, r.ap.ssid);
  std::vector<ApIdentity> out;
  out.reserve(seen.size());
  for (auto& [bssid, ssid] : seen) out.push_back({bssid, ssid});
  return out;
}

std::size_t normalize_records(std::vector<BeaconRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const BeaconRecord& a, const BeaconRecord& b) { return a.t_us < b.t_us; });
  std::set<std::pair<std::int64_t, std::uint64_t>> seen;
  std::vector<BeaconRecord> kept;
  kept.reserve(records.size());
  std::size_t removed = 0;
  for (auto& r : records) {
    if (!seen.emplace(r.t_us, r.ap.bssid.as_u64()).second) {
      ++removed;
      continue;
    }
    kept.push_back(std::move(r));
  }
  records = std::move(kept);
  return removed;
}

void validate_session(const CaptureSession& session) {
  if (!(session.duration_s > 0)) throw Error("session duration must be positive");
  const auto limit = session.duration_us();
  std::map<MacAddress, std::int64_t> last_per_ap;
  std::int64_t last = -1;
  for (const auto& r : session.records) {
    if (r.t_us < 0 || r.t_us >= limit) throw Error("record timestamp outside session");
    if (r.t_us < last) throw Error("records are not sorted by time");
    if (r.rssi_dbm < kMinRssiDbm || r.rssi_dbm > kMaxRssiDbm) throw Error("rssi out of range");
    auto [it, fresh] = last_per_ap.emplace(r.ap.bssid, r.t_us);
    if (!fresh) {
      if (r.t_us <= it->second) throw Error("duplicate timestamp for " + r.ap.bssid.str());
      it->second = r.t_us;
    }
    last = r.t_us;
  }
}

void validate_runset(const RunSet& runset) {
  if (runset.runs.empty()) return;
  const auto& first = runset.runs.front();
  for (const auto& run : runset.runs) {
    if (run.mode != first.mode || run.duration_s != first.duration_s) {
      throw Error("runs in a run set must share mode and duration");
    }
  }
}

double tu_to_ms(double tu) {
  if (tu < 0) throw Error("negative TU count");
  return tu * 1.024;
}

double theoretical_rate(CaptureMode mode, double beacon_interval_tu, double report_interval_tu) {
  const double interval = mode == CaptureMode::Monitor ? beacon_interval_tu : report_interval_tu;
  if (!(interval > 0)) throw Error("non-positive interval");
  return 1000.0 / tu_to_ms(interval);
}

std::string format_rate(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", rate);
  return buf;
}

std::uint16_t channel_to_freq_mhz(std::uint8_t channel) {
  if (channel >= 1 && channel <= 13) return static_cast<std::uint16_t>(2407 + 5 * channel);
  if (channel == 14) return 2484;
  if (channel >= 32 && channel <= 177) return static_cast<std::uint16_t>(5000 + 5 * channel);
  return 0;
}

std::uint8_t freq_mhz_to_channel(std::uint16_t freq_mhz) {
  if (freq_mhz == 2484) return 14;
  if (freq_mhz >= 2412 && freq_mhz <= 2472 && (freq_mhz - 2407) % 5 == 0) {
    return static_cast<std::uint8_t>((freq_mhz - 2407) / 5);
  }
  if (freq_mhz >= 5160 && freq_mhz <= 5885 && freq_mhz % 5 == 0) {
    return static_cast<std::uint8_t>((freq_mhz - 5000) / 5);
  }
  return 0;
}

}  // namespace beaconcap
