#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "beaconcap/capture_model.hpp"

namespace testutil {

inline beaconcap::MacAddress mac(const char* text) { return beaconcap::MacAddress::parse(text); }

inline const beaconcap::MacAddress kAp = beaconcap::MacAddress::parse("aa:bb:cc:dd:ee:01");

// Session with one AP seen at the given times (microseconds).
inline beaconcap::CaptureSession session_at(const std::vector<std::int64_t>& times_us, double duration_s,
                                            beaconcap::CaptureMode mode = beaconcap::CaptureMode::Monitor,
                                            const beaconcap::MacAddress& bssid = kAp) {
  beaconcap::CaptureSession s;
  s.mode = mode;
  s.duration_s = duration_s;
  for (auto t : times_us) {
    beaconcap::BeaconRecord r;
    r.t_us = t;
    r.rssi_dbm = -60;
    r.ap = {bssid, "TEST"};
    s.records.push_back(r);
  }
  return s;
}

}  // namespace testutil
