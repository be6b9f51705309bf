#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "beaconcap/capture_model.hpp"

namespace beaconcap {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// Why a packet could not be turned into a beacon measurement. None of these
// is fatal: capture readers count them and move on.
enum class DecodeError {
  TruncatedHeader,
  BadRadiotapVersion,
  MissingRssi,
  RssiOutOfRange,
  MissingTsft,
  NotABeacon,
  TruncatedFrame,
  MalformedTaggedElement,
};

std::string_view to_string(DecodeError error);

template <class T>
class Decoded {
 public:
  Decoded(T value) : state_(std::move(value)) {}
  Decoded(DecodeError error) : state_(error) {}

  bool ok() const { return std::holds_alternative<T>(state_); }
  explicit operator bool() const { return ok(); }
  const T& value() const { return std::get<T>(state_); }
  T& value() { return std::get<T>(state_); }
  const T& operator*() const { return value(); }
  const T* operator->() const { return &value(); }
  DecodeError error() const { return std::get<DecodeError>(state_); }

 private:
  std::variant<T, DecodeError> state_;
};

struct RadiotapInfo {
  int rssi_dbm = 0;
  std::optional<std::uint64_t> tsft_us;
  std::optional<std::uint16_t> channel_freq_mhz;
  std::uint16_t header_len = 8;
  bool fcs_at_end = false;

  // header_len and the FCS flag describe the encoding, not the measurement.
  bool operator==(const RadiotapInfo& other) const {
    return rssi_dbm == other.rssi_dbm && tsft_us == other.tsft_us &&
           channel_freq_mhz == other.channel_freq_mhz;
  }
};

struct BeaconFrame {
  MacAddress bssid;
  MacAddress source_addr;
  std::string ssid;
  std::uint16_t beacon_interval_tu = kDefaultBeaconIntervalTu;
  std::uint64_t tsf_timestamp_us = 0;
  std::uint16_t sequence_number = 0;
  std::uint16_t capability = 0x0001;  // ESS
  std::optional<std::uint8_t> ds_channel;

  bool operator==(const BeaconFrame&) const = default;
};

// Thrown by encode_frame when a field violates its invariant.
class InvalidField : public Error {
 public:
  using Error::Error;
};

Decoded<RadiotapInfo> decode_radiotap(ByteView raw);

// `raw` starts at the 802.11 MAC header and must not include an FCS.
Decoded<BeaconFrame> decode_beacon(ByteView raw);

// Radiotap header (TSFT, channel, dBm antenna signal) followed by the beacon.
Bytes encode_frame(const BeaconFrame& frame, const RadiotapInfo& radio);

struct DecodedPacket {
  RadiotapInfo radio;
  BeaconFrame beacon;
};

// decode_radiotap, FCS stripping, then decode_beacon.
Decoded<DecodedPacket> decode_packet(ByteView raw);

// ---------------------------------------------------------------------------
// Capture files

enum class ReceiverClock { CaptureHeader, RadiotapTsft };

struct ReadOptions {
  ReceiverClock clock = ReceiverClock::CaptureHeader;
  CaptureMode mode = CaptureMode::Monitor;
  // Absolute time of t = 0. Defaults to the first usable timestamp floored to
  // a whole second.
  std::optional<std::int64_t> start_epoch_us;
  // Defaults to the smallest whole number of seconds covering every record.
  std::optional<double> duration_s;
};

struct CaptureStats {
  std::size_t packets = 0;
  std::map<DecodeError, std::size_t> skipped_by_reason;
};

class UnsupportedLinkType : public Error {
 public:
  using Error::Error;
};
class UnreadableFile : public Error {
 public:
  using Error::Error;
};
class IoFailure : public Error {
 public:
  using Error::Error;
};

inline constexpr std::uint32_t kLinkTypeRadiotap = 127;

// Classic pcap with radiotap link type. Malformed packets are skipped and
// counted in the session metadata.
CaptureSession read_capture_file(const std::string& path, const ReadOptions& options = {},
                                 CaptureStats* stats = nullptr);
CaptureSession read_capture_bytes(ByteView file, const ReadOptions& options = {},
                                  CaptureStats* stats = nullptr);

// Microsecond pcap; packet time and radiotap TSFT both equal start + t.
void write_capture_file(const CaptureSession& session, const std::string& path);
Bytes write_capture_bytes(const CaptureSession& session);

// Plain-text alternative to pcap:
// timestamp_us,bssid,ssid,rssi_dbm,channel,beacon_interval_tu
CaptureSession read_capture_csv(const std::string& path, const ReadOptions& options = {});
void write_capture_csv(const CaptureSession& session, const std::string& path);

// Dispatches on extension (.csv) or pcap magic.
CaptureSession read_any_capture(const std::string& path, const ReadOptions& options = {});

}  // namespace beaconcap
