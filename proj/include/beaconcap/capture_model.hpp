#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace beaconcap {

// Base class for every error this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 802.11 time unit in microseconds.
inline constexpr std::int64_t kMicrosPerTu = 1024;
inline constexpr std::uint32_t kDefaultBeaconIntervalTu = 100;
inline constexpr std::uint32_t kDefaultReportIntervalTu = 1000;
inline constexpr int kMinRssiDbm = -120;
inline constexpr int kMaxRssiDbm = 0;

enum class CaptureMode { Normal, Monitor };

std::string_view to_string(CaptureMode mode);
// Accepts "normal" / "monitor" (case-insensitive). Throws Error otherwise.
CaptureMode parse_capture_mode(std::string_view text);

struct MacAddress {
  std::array<std::uint8_t, 6> bytes{};

  static MacAddress parse(std::string_view text);  // "aa:bb:cc:dd:ee:ff"
  std::string str() const;
  std::uint64_t as_u64() const;

  auto operator<=>(const MacAddress&) const = default;
};

struct ApIdentity {
  MacAddress bssid;
  std::string ssid;  // informational only, never part of the key

  bool operator==(const ApIdentity& other) const { return bssid == other.bssid; }
};

struct BeaconRecord {
  std::int64_t t_us = 0;  // receiver time since session start
  int rssi_dbm = 0;
  ApIdentity ap;
  std::uint32_t beacon_interval_tu = kDefaultBeaconIntervalTu;
  std::optional<std::uint16_t> sequence_number;
  std::optional<std::uint8_t> channel;

  bool operator==(const BeaconRecord& other) const {
    return t_us == other.t_us && rssi_dbm == other.rssi_dbm && ap == other.ap &&
           ap.ssid == other.ap.ssid && beacon_interval_tu == other.beacon_interval_tu &&
           sequence_number == other.sequence_number && channel == other.channel;
  }
};

struct SessionMetadata {
  std::string source;              // file path or scenario name
  std::string rp_id;               // reference point label, empty if none
  int run_index = 0;
  std::int64_t start_epoch_us = 0; // absolute time of t = 0
  std::size_t skipped = 0;         // packets that were not usable beacons
  std::size_t duplicates = 0;
  bool empty_capture = false;

  bool operator==(const SessionMetadata&) const = default;
};

struct CaptureSession {
  CaptureMode mode = CaptureMode::Monitor;
  double duration_s = 200.0;
  std::vector<BeaconRecord> records;
  SessionMetadata metadata;

  std::int64_t duration_us() const;
  // Distinct APs in BSSID order.
  std::vector<ApIdentity> access_points() const;

  bool operator==(const CaptureSession&) const = default;
};

// Sorts by time (stable, so equal timestamps keep arrival order) and drops
// repeated (t, bssid) pairs. Returns the number of records removed.
std::size_t normalize_records(std::vector<BeaconRecord>& records);

// Throws Error when records are unsorted, collide per AP, fall outside
// [0, duration) or carry out-of-range RSS.
void validate_session(const CaptureSession& session);

struct RunSet {
  std::string label;
  std::vector<CaptureSession> runs;

  bool operator==(const RunSet&) const = default;
};

void validate_runset(const RunSet& runset);

// A surveyed location.
struct ReferencePoint {
  std::string id;
  double x_m = 0;
  double y_m = 0;
  std::string floor;

  bool operator==(const ReferencePoint&) const = default;
};

double tu_to_ms(double tu);

// Packets per second a capture mode can deliver at most. Monitor mode is
// bounded by the beacon interval, normal mode by the driver's report interval.
double theoretical_rate(CaptureMode mode,
                        double beacon_interval_tu = kDefaultBeaconIntervalTu,
                        double report_interval_tu = kDefaultReportIntervalTu);

// Three significant digits, the way rates are tabulated: 9.77, 0.977.
std::string format_rate(double rate);

// 802.11 channel <-> centre frequency (2.4 and 5 GHz bands). Zero when unknown.
std::uint16_t channel_to_freq_mhz(std::uint8_t channel);
std::uint8_t freq_mhz_to_channel(std::uint16_t freq_mhz);

}  // namespace beaconcap
