#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "beaconcap/frame_codec.hpp"
#include "test_util.hpp"

using namespace beaconcap;

namespace {

void put32(Bytes& b, std::uint32_t v, bool big = false) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * (big ? 3 - i : i))));
}
void put16(Bytes& b, std::uint16_t v, bool big = false) {
  b.push_back(static_cast<std::uint8_t>(big ? v >> 8 : v));
  b.push_back(static_cast<std::uint8_t>(big ? v : v >> 8));
}

Bytes pcap_header(std::uint32_t magic = 0xa1b2c3d4, std::uint32_t linktype = 127, bool big = false) {
  Bytes b;
  put32(b, magic, big);
  put16(b, 2, big);
  put16(b, 4, big);
  put32(b, 0, big);
  put32(b, 0, big);
  put32(b, 65535, big);
  put32(b, linktype, big);
  return b;
}

void add_packet(Bytes& file, std::int64_t abs_us, const Bytes& packet, bool big = false, bool nanos = false) {
  put32(file, static_cast<std::uint32_t>(abs_us / 1'000'000), big);
  put32(file, static_cast<std::uint32_t>(abs_us % 1'000'000 * (nanos ? 1000 : 1)), big);
  put32(file, static_cast<std::uint32_t>(packet.size()), big);
  put32(file, static_cast<std::uint32_t>(packet.size()), big);
  file.insert(file.end(), packet.begin(), packet.end());
}

Bytes beacon_packet(const char* bssid, int rssi, std::uint16_t seq = 0) {
  BeaconFrame f;
  f.bssid = testutil::mac(bssid);
  f.source_addr = f.bssid;
  f.ssid = "NET";
  f.sequence_number = seq;
  RadiotapInfo r;
  r.rssi_dbm = rssi;
  return encode_frame(f, r);
}

Bytes data_packet() {
  auto p = beacon_packet("aa:bb:cc:dd:ee:09", -50);
  p[9] = 0x08;  // frame control byte 0 sits right after the 9-byte radiotap header
  return p;
}

// Independent reader: walks the record headers without the library.
struct OracleRecord {
  std::int64_t abs_us;
  std::uint32_t len;
  int rssi;
  std::string bssid_hex;
};

std::vector<OracleRecord> oracle_walk(const Bytes& f) {
  auto le32 = [&](std::size_t at) {
    return std::uint32_t(f[at]) | std::uint32_t(f[at + 1]) << 8 | std::uint32_t(f[at + 2]) << 16 |
           std::uint32_t(f[at + 3]) << 24;
  };
  std::vector<OracleRecord> out;
  std::size_t at = 24;
  while (at + 16 <= f.size()) {
    OracleRecord r;
    r.abs_us = std::int64_t(le32(at)) * 1'000'000 + le32(at + 4);
    r.len = le32(at + 8);
    const std::size_t p = at + 16;
    const std::size_t rt_len = f[p + 2] | (f[p + 3] << 8);
    // Header written with TSFT (8 at offset 8), optional channel (4), then signal.
    r.rssi = static_cast<std::int8_t>(f[p + rt_len - 1]);
    char hex[18];
    const std::size_t a3 = p + rt_len + 16;
    std::snprintf(hex, sizeof hex, "%02x:%02x:%02x:%02x:%02x:%02x", f[a3], f[a3 + 1], f[a3 + 2], f[a3 + 3],
                  f[a3 + 4], f[a3 + 5]);
    r.bssid_hex = hex;
    out.push_back(r);
    at = p + r.len;
  }
  return out;
}

CaptureSession random_session(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 gen(seed);
  CaptureSession s;
  s.duration_s = 1000;
  s.metadata.start_epoch_us = 1'600'000'000'000'000;
  std::int64_t t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    t += 1 + static_cast<std::int64_t>(gen() % 50'000);
    BeaconRecord r;
    r.t_us = t;
    r.rssi_dbm = -static_cast<int>(gen() % 121);
    r.ap = {MacAddress::parse(i % 3 == 0 ? "00:11:22:33:44:55" : "00:11:22:33:44:66"), i % 3 ? "B" : "A,\"q\""};
    r.sequence_number = static_cast<std::uint16_t>(gen() % 4096);
    if (gen() % 2) r.channel = static_cast<std::uint8_t>(1 + gen() % 11);
    s.records.push_back(r);
  }
  s.duration_s = static_cast<double>(t / 1'000'000 + 1);
  return s;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("beaconcap_test_" + name);
}

}  // namespace

TEST_CASE("non-beacon packets are counted as skipped") {
  auto file = pcap_header();
  const std::int64_t t0 = 1'000'000'000'000;
  add_packet(file, t0 + 100, beacon_packet("aa:bb:cc:dd:ee:01", -60, 1));
  add_packet(file, t0 + 150, data_packet());
  add_packet(file, t0 + 200, beacon_packet("aa:bb:cc:dd:ee:01", -61, 2));
  add_packet(file, t0 + 250, data_packet());
  add_packet(file, t0 + 300, beacon_packet("aa:bb:cc:dd:ee:02", -62, 3));
  CaptureStats stats;
  const auto s = read_capture_bytes(file, {}, &stats);
  CHECK(s.records.size() == 3);
  CHECK(s.metadata.skipped == 2);
  CHECK(stats.packets == 5);
  CHECK(stats.skipped_by_reason.at(DecodeError::NotABeacon) == 2);
  CHECK(s.metadata.start_epoch_us == t0);
  CHECK(s.records[0].t_us == 100);
}

TEST_CASE("identical beacons are deduplicated") {
  auto file = pcap_header();
  add_packet(file, 5'000'000, beacon_packet("aa:bb:cc:dd:ee:01", -60, 9));
  add_packet(file, 5'000'000, beacon_packet("aa:bb:cc:dd:ee:01", -60, 9));
  const auto s = read_capture_bytes(file);
  CHECK(s.records.size() == 1);
  CHECK(s.metadata.duplicates == 1);
}

TEST_CASE("big-endian and nanosecond captures") {
  auto file = pcap_header(0xa1b23c4d, 127, true);
  add_packet(file, 7'000'123, beacon_packet("aa:bb:cc:dd:ee:01", -60), true, true);
  const auto s = read_capture_bytes(file);
  REQUIRE(s.records.size() == 1);
  CHECK(s.metadata.start_epoch_us == 7'000'000);
  CHECK(s.records[0].t_us == 123);
}

TEST_CASE("unsupported files") {
  CHECK_THROWS_AS(read_capture_bytes(pcap_header(0xa1b2c3d4, 105)), UnsupportedLinkType);
  auto ng = pcap_header(0x0a0d0d0a);
  CHECK_THROWS_AS(read_capture_bytes(ng), UnreadableFile);
  CHECK_THROWS_AS(read_capture_bytes(Bytes{1, 2, 3}), UnreadableFile);
  CHECK_THROWS_AS(read_capture_file("/nonexistent/capture.pcap"), UnreadableFile);
}

TEST_CASE("truncated final packet is skipped") {
  auto file = pcap_header();
  add_packet(file, 1'000'000, beacon_packet("aa:bb:cc:dd:ee:01", -60));
  add_packet(file, 1'100'000, beacon_packet("aa:bb:cc:dd:ee:01", -60));
  file.resize(file.size() - 10);
  const auto s = read_capture_bytes(file);
  CHECK(s.records.size() == 1);
  CHECK(s.metadata.skipped == 1);
}

TEST_CASE("empty session writes a header-only capture") {
  CaptureSession s;
  const auto bytes = write_capture_bytes(s);
  CHECK(bytes.size() == 24);
  const auto back = read_capture_bytes(bytes);
  CHECK(back.records.empty());
  CHECK(back.metadata.empty_capture);
}

TEST_CASE("pcap write/read round trip") {
  const auto s = random_session(3, 500);
  ReadOptions opts;
  opts.start_epoch_us = s.metadata.start_epoch_us;
  opts.duration_s = s.duration_s;
  const auto path = temp_path("roundtrip.pcap");
  write_capture_file(s, path.string());
  const auto back = read_capture_file(path.string(), opts);
  CHECK(back.records == s.records);
  CHECK(back.duration_s == s.duration_s);

  opts.clock = ReceiverClock::RadiotapTsft;
  CHECK(read_capture_file(path.string(), opts).records == s.records);
  std::filesystem::remove(path);
}

TEST_CASE("written captures agree with an independent record walker") {
  const auto s = random_session(11, 10'000);
  const auto bytes = write_capture_bytes(s);
  const auto walked = oracle_walk(bytes);
  REQUIRE(walked.size() == s.records.size());
  for (std::size_t i = 0; i < walked.size(); ++i) {
    CHECK(walked[i].abs_us == s.metadata.start_epoch_us + s.records[i].t_us);
    CHECK(walked[i].rssi == s.records[i].rssi_dbm);
    CHECK(walked[i].bssid_hex == s.records[i].ap.bssid.str());
  }
}

TEST_CASE("CSV round trip and bad rows") {
  const auto s = random_session(5, 300);
  const auto path = temp_path("roundtrip.csv");
  write_capture_csv(s, path.string());
  ReadOptions opts;
  opts.duration_s = s.duration_s;
  opts.start_epoch_us = s.metadata.start_epoch_us;
  const auto back = read_capture_csv(path.string(), opts);
  CHECK(back.records.size() == s.records.size());
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    CHECK(back.records[i].t_us == s.records[i].t_us);
    CHECK(back.records[i].ap.ssid == s.records[i].ap.ssid);
    CHECK(back.records[i].rssi_dbm == s.records[i].rssi_dbm);
    CHECK(back.records[i].channel == s.records[i].channel);
  }
  {
    std::ofstream out(path, std::ios::app);
    out << "garbage,row\n";
    out << "5,00:11:22:33:44:55,X,40,1,100\n";
  }
  const auto bad = read_any_capture(path.string(), opts);
  CHECK(bad.metadata.skipped == 2);
  std::filesystem::remove(path);
}
