#include "beaconcap/frame_codec.hpp"

#include <array>

namespace beaconcap {

namespace {

std::uint16_t load_le16(ByteView b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t load_le32(ByteView b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint64_t load_le64(ByteView b, std::size_t at) {
  return static_cast<std::uint64_t>(load_le32(b, at)) |
         (static_cast<std::uint64_t>(load_le32(b, at + 4)) << 32);
}

void put_le16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_le32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_le64(Bytes& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void pad_to(Bytes& out, std::size_t base, std::size_t align) {
  while ((out.size() - base) % align != 0) out.push_back(0);
}

// Radiotap namespace fields 0..27: {alignment, size} from the public field
// registry. Bit 28 (TLV list) and anything higher has no fixed layout.
struct FieldLayout {
  std::uint8_t align;
  std::uint8_t size;
};

constexpr std::array<FieldLayout, 28> kRadiotapFields{{
    {8, 8},   // 0  TSFT
    {1, 1},   // 1  Flags
    {1, 1},   // 2  Rate
    {2, 4},   // 3  Channel
    {1, 2},   // 4  FHSS
    {1, 1},   // 5  dBm antenna signal
    {1, 1},   // 6  dBm antenna noise
    {2, 2},   // 7  Lock quality
    {2, 2},   // 8  TX attenuation
    {2, 2},   // 9  dB TX attenuation
    {1, 1},   // 10 dBm TX power
    {1, 1},   // 11 Antenna
    {1, 1},   // 12 dB antenna signal
    {1, 1},   // 13 dB antenna noise
    {2, 2},   // 14 RX flags
    {2, 2},   // 15 TX flags
    {1, 1},   // 16 RTS retries
    {1, 1},   // 17 data retries
    {4, 8},   // 18 XChannel
    {1, 3},   // 19 MCS
    {4, 8},   // 20 A-MPDU status
    {2, 12},  // 21 VHT
    {8, 12},  // 22 timestamp
    {2, 12},  // 23 HE
    {2, 12},  // 24 HE-MU
    {2, 6},   // 25 HE-MU-other-user
    {1, 1},   // 26 0-length PSDU
    {2, 4},   // 27 L-SIG
}};

constexpr int kBitTsft = 0;
constexpr int kBitFlags = 1;
constexpr int kBitChannel = 3;
constexpr int kBitAntennaSignal = 5;
constexpr int kBitRadiotapNamespace = 29;
constexpr int kBitVendorNamespace = 30;
constexpr int kBitExtended = 31;
constexpr std::uint8_t kFlagFcsAtEnd = 0x10;

constexpr std::size_t kMacHeaderLen = 24;
constexpr std::size_t kFixedFieldsLen = 12;
constexpr std::uint8_t kTagSsid = 0;
constexpr std::uint8_t kTagDsParams = 3;

}  // namespace

std::string_view to_string(DecodeError error) {
  switch (error) {
    case DecodeError::TruncatedHeader: return "truncated_header";
    case DecodeError::BadRadiotapVersion: return "bad_radiotap_version";
    case DecodeError::MissingRssi: return "missing_rssi";
    case DecodeError::RssiOutOfRange: return "rssi_out_of_range";
    case DecodeError::MissingTsft: return "missing_tsft";
    case DecodeError::NotABeacon: return "not_a_beacon";
    case DecodeError::TruncatedFrame: return "truncated_frame";
    case DecodeError::MalformedTaggedElement: return "malformed_tagged_element";
  }
  return "unknown";
}

Decoded<RadiotapInfo> decode_radiotap(ByteView raw) {
  if (raw.size() < 8) return DecodeError::TruncatedHeader;
  if (raw[0] != 0) return DecodeError::BadRadiotapVersion;
  const std::uint16_t header_len = load_le16(raw, 2);
  if (header_len < 8 || header_len > raw.size()) return DecodeError::TruncatedHeader;
  const ByteView header = raw.first(header_len);

  // Collect the chain of present words first; fields start after the last.
  std::vector<std::uint32_t> present_words;
  std::size_t offset = 4;
  while (true) {
    if (offset + 4 > header.size()) return DecodeError::TruncatedHeader;
    const std::uint32_t word = load_le32(header, offset);
    present_words.push_back(word);
    offset += 4;
    if (!(word & (1u << kBitExtended))) break;
  }

  RadiotapInfo info;
  info.header_len = header_len;
  std::optional<int> rssi;
  bool in_radiotap_ns = true;
  int field_base = 0;  // radiotap field index of bit 0 in the current word

  for (std::size_t w = 0; w < present_words.size(); ++w) {
    const std::uint32_t word = present_words[w];
    if (in_radiotap_ns) {
      for (int bit = 0; bit < 29; ++bit) {
        if (!(word & (1u << bit))) continue;
        const int field = field_base + bit;
        if (field >= static_cast<int>(kRadiotapFields.size())) {
          // TLVs or an unregistered field: the rest of the header cannot be
          // walked, so settle for what has been read.
          goto done;
        }
        const auto [align, size] = kRadiotapFields[field];
        offset = (offset + align - 1) / align * align;
        if (offset + size > header.size()) return DecodeError::TruncatedHeader;
        switch (field) {
          case kBitTsft:
            if (!info.tsft_us) info.tsft_us = load_le64(header, offset);
            break;
          case kBitFlags:
            if (w == 0) info.fcs_at_end = (header[offset] & kFlagFcsAtEnd) != 0;
            break;
          case kBitChannel:
            if (!info.channel_freq_mhz) info.channel_freq_mhz = load_le16(header, offset);
            break;
          case kBitAntennaSignal:
            // First occurrence is the combined signal; later ones are per antenna.
            if (!rssi) rssi = static_cast<int>(static_cast<std::int8_t>(header[offset]));
            break;
          default: break;
        }
        offset += size;
      }
    }
    if (word & (1u << kBitVendorNamespace)) {
      // Vendor namespace header: OUI(3) sub-namespace(1) skip_length(2).
      offset = (offset + 1) / 2 * 2;
      if (offset + 6 > header.size()) return DecodeError::TruncatedHeader;
      const std::uint16_t skip = load_le16(header, offset + 4);
      offset += 6 + skip;
      if (offset > header.size()) return DecodeError::TruncatedHeader;
      in_radiotap_ns = false;
      field_base = 0;
    } else if (word & (1u << kBitRadiotapNamespace)) {
      in_radiotap_ns = true;
      field_base = 0;
    } else {
      field_base += 32;
    }
  }
done:

  if (!rssi) return DecodeError::MissingRssi;
  if (*rssi < kMinRssiDbm || *rssi > kMaxRssiDbm) return DecodeError::RssiOutOfRange;
  info.rssi_dbm = *rssi;
  return info;
}

Decoded<BeaconFrame> decode_beacon(ByteView raw) {
  if (raw.size() < 2) return DecodeError::TruncatedFrame;
  // Beacon: type 0 (management), subtype 8. Only retry and order may be set.
  if (raw[0] != 0x80 || (raw[1] & ~0x88) != 0) return DecodeError::NotABeacon;
  std::size_t offset = kMacHeaderLen;
  if (raw[1] & 0x80) offset += 4;  // +HTC: HT control field follows the header
  if (raw.size() < offset + kFixedFieldsLen) return DecodeError::TruncatedFrame;

  BeaconFrame frame;
  std::copy_n(raw.begin() + 10, 6, frame.source_addr.bytes.begin());
  std::copy_n(raw.begin() + 16, 6, frame.bssid.bytes.begin());
  frame.sequence_number = static_cast<std::uint16_t>(load_le16(raw, 22) >> 4);
  frame.tsf_timestamp_us = load_le64(raw, offset);
  frame.beacon_interval_tu = load_le16(raw, offset + 8);
  frame.capability = load_le16(raw, offset + 10);
  offset += kFixedFieldsLen;
  if (frame.beacon_interval_tu == 0) return DecodeError::MalformedTaggedElement;

  bool have_ssid = false;
  while (offset < raw.size()) {
    if (offset + 2 > raw.size()) return DecodeError::MalformedTaggedElement;
    const std::uint8_t tag = raw[offset];
    const std::uint8_t len = raw[offset + 1];
    offset += 2;
    if (offset + len > raw.size()) return DecodeError::MalformedTaggedElement;
    if (tag == kTagSsid && !have_ssid) {
      if (len > 32) return DecodeError::MalformedTaggedElement;
      frame.ssid.assign(reinterpret_cast<const char*>(raw.data() + offset), len);
      have_ssid = true;
    } else if (tag == kTagDsParams && !frame.ds_channel) {
      if (len != 1) return DecodeError::MalformedTaggedElement;
      frame.ds_channel = raw[offset];
    }
    offset += len;
  }
  return frame;
}

Bytes encode_frame(const BeaconFrame& frame, const RadiotapInfo& radio) {
  if (frame.ssid.size() > 32) throw InvalidField("ssid longer than 32 bytes");
  if (frame.beacon_interval_tu == 0) throw InvalidField("beacon interval must be positive");
  if (frame.sequence_number > 4095) throw InvalidField("sequence number exceeds 12 bits");
  if (radio.rssi_dbm < kMinRssiDbm || radio.rssi_dbm > kMaxRssiDbm) {
    throw InvalidField("rssi outside [-120, 0] dBm");
  }

  Bytes out;
  out.reserve(64 + frame.ssid.size());
  std::uint32_t present = 1u << kBitAntennaSignal;
  if (radio.tsft_us) present |= 1u << kBitTsft;
  if (radio.channel_freq_mhz) present |= 1u << kBitChannel;
  out.push_back(0);  // version
  out.push_back(0);  // pad
  put_le16(out, 0);  // length, patched below
  put_le32(out, present);
  if (radio.tsft_us) {
    pad_to(out, 0, 8);
    put_le64(out, *radio.tsft_us);
  }
  if (radio.channel_freq_mhz) {
    pad_to(out, 0, 2);
    put_le16(out, *radio.channel_freq_mhz);
    put_le16(out, *radio.channel_freq_mhz < 3000 ? 0x0080 : 0x0100);  // 2 GHz / 5 GHz
  }
  out.push_back(static_cast<std::uint8_t>(static_cast<std::int8_t>(radio.rssi_dbm)));
  const auto header_len = static_cast<std::uint16_t>(out.size());
  out[2] = static_cast<std::uint8_t>(header_len);
  out[3] = static_cast<std::uint8_t>(header_len >> 8);

  out.push_back(0x80);
  out.push_back(0x00);
  put_le16(out, 0);  // duration
  for (int i = 0; i < 6; ++i) out.push_back(0xff);  // addr1: broadcast
  out.insert(out.end(), frame.source_addr.bytes.begin(), frame.source_addr.bytes.end());
  out.insert(out.end(), frame.bssid.bytes.begin(), frame.bssid.bytes.end());
  put_le16(out, static_cast<std::uint16_t>(frame.sequence_number << 4));
  put_le64(out, frame.tsf_timestamp_us);
  put_le16(out, frame.beacon_interval_tu);
  put_le16(out, frame.capability);
  out.push_back(kTagSsid);
  out.push_back(static_cast<std::uint8_t>(frame.ssid.size()));
  out.insert(out.end(), frame.ssid.begin(), frame.ssid.end());
  if (frame.ds_channel) {
    out.push_back(kTagDsParams);
    out.push_back(1);
    out.push_back(*frame.ds_channel);
  }
  return out;
}

Decoded<DecodedPacket> decode_packet(ByteView raw) {
  auto radio = decode_radiotap(raw);
  if (!radio) return radio.error();
  ByteView mpdu = raw.subspan(radio->header_len);
  if (radio->fcs_at_end) {
    if (mpdu.size() < 4) return DecodeError::TruncatedFrame;
    mpdu = mpdu.first(mpdu.size() - 4);
  }
  auto beacon = decode_beacon(mpdu);
  if (!beacon) return beacon.error();
  return DecodedPacket{radio.value(), beacon.value()};
}

}  // namespace beaconcap
