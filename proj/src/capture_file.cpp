#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "beaconcap/frame_codec.hpp"

namespace beaconcap {

namespace {

constexpr std::uint32_t kMagicMicros = 0xA1B2C3D4;
constexpr std::uint32_t kMagicNanos = 0xA1B23C4D;
constexpr std::size_t kGlobalHeaderLen = 24;
constexpr std::size_t kPacketHeaderLen = 16;
constexpr std::uint32_t kSnapLen = 65535;

std::uint32_t bswap32(std::uint32_t v) {
  return (v >> 24) | ((v >> 8) & 0xff00) | ((v << 8) & 0xff0000) | (v << 24);
}

std::uint32_t load32(ByteView b, std::size_t at, bool swap) {
  std::uint32_t v = static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
                    (static_cast<std::uint32_t>(b[at + 2]) << 16) |
                    (static_cast<std::uint32_t>(b[at + 3]) << 24);
  return swap ? bswap32(v) : v;
}

void put32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

Bytes slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UnreadableFile("cannot open " + path);
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw UnreadableFile("read error on " + path);
  return data;
}

constexpr std::int64_t kMicrosPerSecond = 1'000'000;

std::int64_t floor_to_second(std::int64_t us) {
  return us >= 0 ? us / kMicrosPerSecond * kMicrosPerSecond
                 : -((-us + kMicrosPerSecond - 1) / kMicrosPerSecond) * kMicrosPerSecond;
}

// Shared tail of the pcap and CSV readers: absolute times to session time.
CaptureSession finish_session(std::vector<std::pair<std::int64_t, BeaconRecord>> stamped,
                              const ReadOptions& options, std::size_t skipped,
                              std::string source) {
  CaptureSession session;
  session.mode = options.mode;
  session.metadata.source = std::move(source);
  session.metadata.skipped = skipped;

  std::int64_t start = 0;
  if (options.start_epoch_us) {
    start = *options.start_epoch_us;
  } else if (!stamped.empty()) {
    const auto earliest = std::min_element(stamped.begin(), stamped.end(), [](auto& a, auto& b) {
      return a.first < b.first;
    });
    start = floor_to_second(earliest->first);
  }
  session.metadata.start_epoch_us = start;

  std::vector<BeaconRecord> records;
  records.reserve(stamped.size());
  for (auto& [abs_us, rec] : stamped) {
    if (abs_us < start) {
      ++session.metadata.skipped;
      continue;
    }
    rec.t_us = abs_us - start;
    records.push_back(std::move(rec));
  }
  session.metadata.duplicates = normalize_records(records);

  if (options.duration_s) {
    session.duration_s = *options.duration_s;
    const auto limit = session.duration_us();
    const auto before = records.size();
    std::erase_if(records, [limit](const BeaconRecord& r) { return r.t_us >= limit; });
    session.metadata.skipped += before - records.size();
  } else {
    const std::int64_t last = records.empty() ? 0 : records.back().t_us;
    session.duration_s = static_cast<double>(std::max<std::int64_t>(1, last / kMicrosPerSecond + 1));
  }
  session.records = std::move(records);
  session.metadata.empty_capture = session.records.empty();
  return session;
}

}  // namespace

CaptureSession read_capture_bytes(ByteView file, const ReadOptions& options, CaptureStats* stats) {
  if (file.size() < kGlobalHeaderLen) throw UnreadableFile("file shorter than pcap header");
  const std::uint32_t raw_magic = load32(file, 0, false);
  bool swap = false;
  bool nanos = false;
  if (raw_magic == kMagicMicros || raw_magic == kMagicNanos) {
    nanos = raw_magic == kMagicNanos;
  } else if (bswap32(raw_magic) == kMagicMicros || bswap32(raw_magic) == kMagicNanos) {
    swap = true;
    nanos = bswap32(raw_magic) == kMagicNanos;
  } else {
    throw UnreadableFile("not a classic pcap file (pcapng is not supported)");
  }
  const std::uint32_t link_type = load32(file, 20, swap) & 0x0fffffff;
  if (link_type != kLinkTypeRadiotap) {
    throw UnsupportedLinkType("link type " + std::to_string(link_type) + " is not radiotap (127)");
  }

  CaptureStats local;
  CaptureStats& st = stats ? *stats : local;
  std::vector<std::pair<std::int64_t, BeaconRecord>> stamped;
  std::size_t skipped = 0;
  std::size_t offset = kGlobalHeaderLen;
  while (offset + kPacketHeaderLen <= file.size()) {
    const std::int64_t ts_sec = load32(file, offset, swap);
    const std::int64_t ts_frac = load32(file, offset + 4, swap);
    const std::uint32_t incl_len = load32(file, offset + 8, swap);
    offset += kPacketHeaderLen;
    if (incl_len > file.size() - offset) {
      // Truncated final packet: count it and stop.
      ++st.packets;
      ++st.skipped_by_reason[DecodeError::TruncatedFrame];
      ++skipped;
      break;
    }
    const ByteView packet = file.subspan(offset, incl_len);
    offset += incl_len;
    ++st.packets;

    auto decoded = decode_packet(packet);
    if (!decoded) {
      ++st.skipped_by_reason[decoded.error()];
      ++skipped;
      continue;
    }
    std::int64_t abs_us = ts_sec * kMicrosPerSecond + (nanos ? ts_frac / 1000 : ts_frac);
    if (options.clock == ReceiverClock::RadiotapTsft) {
      if (!decoded->radio.tsft_us) {
        ++st.skipped_by_reason[DecodeError::MissingTsft];
        ++skipped;
        continue;
      }
      abs_us = static_cast<std::int64_t>(*decoded->radio.tsft_us);
    }
    const auto& beacon = decoded->beacon;
    BeaconRecord rec;
    rec.rssi_dbm = decoded->radio.rssi_dbm;
    rec.ap = {beacon.bssid, beacon.ssid};
    rec.beacon_interval_tu = beacon.beacon_interval_tu;
    rec.sequence_number = beacon.sequence_number;
    if (beacon.ds_channel) {
      rec.channel = beacon.ds_channel;
    } else if (decoded->radio.channel_freq_mhz) {
      if (auto ch = freq_mhz_to_channel(*decoded->radio.channel_freq_mhz)) rec.channel = ch;
    }
    stamped.emplace_back(abs_us, std::move(rec));
  }
  return finish_session(std::move(stamped), options, skipped, {});
}

CaptureSession read_capture_file(const std::string& path, const ReadOptions& options,
                                 CaptureStats* stats) {
  const Bytes data = slurp(path);
  auto session = read_capture_bytes(data, options, stats);
  session.metadata.source = path;
  return session;
}

Bytes write_capture_bytes(const CaptureSession& session) {
  Bytes out;
  put32(out, kMagicMicros);
  put16(out, 2);
  put16(out, 4);
  put32(out, 0);  // thiszone
  put32(out, 0);  // sigfigs
  put32(out, kSnapLen);
  put32(out, kLinkTypeRadiotap);
  for (const auto& r : session.records) {
    const std::int64_t abs_us = session.metadata.start_epoch_us + r.t_us;
    if (abs_us < 0) throw IoFailure("negative absolute timestamp");
    BeaconFrame frame;
    frame.bssid = r.ap.bssid;
    frame.source_addr = r.ap.bssid;
    frame.ssid = r.ap.ssid;
    frame.beacon_interval_tu = static_cast<std::uint16_t>(r.beacon_interval_tu);
    frame.tsf_timestamp_us = static_cast<std::uint64_t>(r.t_us);
    frame.sequence_number = r.sequence_number.value_or(0);
    frame.ds_channel = r.channel;
    RadiotapInfo radio;
    radio.rssi_dbm = r.rssi_dbm;
    radio.tsft_us = static_cast<std::uint64_t>(abs_us);
    if (r.channel) {
      if (auto f = channel_to_freq_mhz(*r.channel)) radio.channel_freq_mhz = f;
    }
    const Bytes packet = encode_frame(frame, radio);
    put32(out, static_cast<std::uint32_t>(abs_us / kMicrosPerSecond));
    put32(out, static_cast<std::uint32_t>(abs_us % kMicrosPerSecond));
    put32(out, static_cast<std::uint32_t>(packet.size()));
    put32(out, static_cast<std::uint32_t>(packet.size()));
    out.insert(out.end(), packet.begin(), packet.end());
  }
  return out;
}

void write_capture_file(const CaptureSession& session, const std::string& path) {
  const Bytes data = write_capture_bytes(session);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoFailure("write failed on " + path);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

constexpr std::string_view kCsvHeader = "timestamp_us,bssid,ssid,rssi_dbm,channel,beacon_interval_tu";

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

CaptureSession read_capture_csv(const std::string& path, const ReadOptions& options) {
  std::ifstream in(path);
  if (!in) throw UnreadableFile("cannot open " + path);
  std::string line;
  bool saw_header = false;
  std::size_t skipped = 0;
  std::vector<std::pair<std::int64_t, BeaconRecord>> stamped;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!saw_header) {
      if (line != kCsvHeader) throw UnreadableFile(path + ": expected header '" + std::string(kCsvHeader) + "'");
      saw_header = true;
      continue;
    }
    const auto f = split_csv_line(line);
    try {
      if (f.size() != 6) throw Error("wrong column count");
      BeaconRecord rec;
      const std::int64_t ts = std::stoll(f[0]);
      rec.ap = {MacAddress::parse(f[1]), f[2]};
      rec.rssi_dbm = std::stoi(f[3]);
      if (rec.rssi_dbm < kMinRssiDbm || rec.rssi_dbm > kMaxRssiDbm) throw Error("rssi");
      if (!f[4].empty()) rec.channel = static_cast<std::uint8_t>(std::stoi(f[4]));
      if (!f[5].empty()) rec.beacon_interval_tu = static_cast<std::uint32_t>(std::stoul(f[5]));
      if (rec.beacon_interval_tu == 0) throw Error("interval");
      stamped.emplace_back(ts, std::move(rec));
    } catch (const std::exception&) {
      ++skipped;
    }
  }
  if (!saw_header) throw UnreadableFile(path + ": missing CSV header");
  return finish_session(std::move(stamped), options, skipped, path);
}

void write_capture_csv(const CaptureSession& session, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoFailure("cannot open " + path + " for writing");
  out << kCsvHeader << '\n';
  for (const auto& r : session.records) {
    out << session.metadata.start_epoch_us + r.t_us << ',' << r.ap.bssid.str() << ','
        << quote_csv(r.ap.ssid) << ',' << r.rssi_dbm << ',';
    if (r.channel) out << static_cast<int>(*r.channel);
    out << ',' << r.beacon_interval_tu << '\n';
  }
  if (!out) throw IoFailure("write failed on " + path);
}

CaptureSession read_any_capture(const std::string& path, const ReadOptions& options) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
    return read_capture_csv(path, options);
  }
  return read_capture_file(path, options);
}

}  // namespace beaconcap
