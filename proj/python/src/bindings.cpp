#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "beaconcap/capture_model.hpp"
#include "beaconcap/frame_codec.hpp"
#include "beaconcap/metrics.hpp"
#include "beaconcap/radiomap.hpp"
#include "beaconcap/scenario_config.hpp"
#include "beaconcap/simulator.hpp"

namespace py = pybind11;
using namespace beaconcap;

namespace {

MacAddress mac(const std::string& text) { return MacAddress::parse(text); }

ReadOptions read_options(const std::string& clock, std::optional<std::string> mode, std::optional<double> duration_s,
                         std::optional<std::int64_t> start_epoch_us) {
  ReadOptions o;
  if (clock == "tsft") {
    o.clock = ReceiverClock::RadiotapTsft;
  } else if (clock != "capture") {
    throw Error("clock must be 'capture' or 'tsft'");
  }
  if (mode) o.mode = parse_capture_mode(*mode);
  o.duration_s = duration_s;
  o.start_epoch_us = start_epoch_us;
  return o;
}

SimScenario scenario_for(std::optional<std::string> preset_name, std::optional<std::string> scenario_json,
                         const std::string& mode) {
  if (preset_name && scenario_json) throw Error("give either preset or scenario_json, not both");
  if (scenario_json) return scenario_from_json(nlohmann::json::parse(*scenario_json));
  if (!preset_name) throw Error("a preset name or scenario_json is required");
  return preset(*preset_name, parse_capture_mode(mode));
}

py::dict histogram_dict(const DelayHistogram& h) {
  py::dict bins;
  for (auto [bin, n] : h.bins) bins[py::int_(bin)] = n;
  py::dict d;
  d["bin_width_ms"] = h.bin_width_ms;
  d["n_deltas"] = h.n_deltas;
  d["bins"] = bins;
  return d;
}

py::dict packet_dict(const DecodedPacket& p) {
  py::dict d;
  d["rssi_dbm"] = p.radio.rssi_dbm;
  d["tsft_us"] = p.radio.tsft_us ? py::cast(*p.radio.tsft_us) : py::none();
  d["channel_freq_mhz"] = p.radio.channel_freq_mhz ? py::cast(*p.radio.channel_freq_mhz) : py::none();
  d["bssid"] = p.beacon.bssid.str();
  d["source_addr"] = p.beacon.source_addr.str();
  d["ssid"] = py::bytes(p.beacon.ssid);
  d["beacon_interval_tu"] = p.beacon.beacon_interval_tu;
  d["tsf_timestamp_us"] = p.beacon.tsf_timestamp_us;
  d["sequence_number"] = p.beacon.sequence_number;
  d["capability"] = p.beacon.capability;
  d["ds_channel"] = p.beacon.ds_channel ? py::cast(*p.beacon.ds_channel) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Beacon capture analysis and capture-mode simulation";

  static auto error = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<Infeasible>(m, "Infeasible", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const nlohmann::json::exception& e) {
      py::set_error(error, e.what());
    }
  });

  py::enum_<CaptureMode>(m, "CaptureMode")
      .value("NORMAL", CaptureMode::Normal)
      .value("MONITOR", CaptureMode::Monitor);

  py::class_<BeaconRecord>(m, "BeaconRecord")
      .def_readonly("t_us", &BeaconRecord::t_us)
      .def_readonly("rssi_dbm", &BeaconRecord::rssi_dbm)
      .def_property_readonly("bssid", [](const BeaconRecord& r) { return r.ap.bssid.str(); })
      .def_property_readonly("ssid", [](const BeaconRecord& r) { return r.ap.ssid; })
      .def_readonly("beacon_interval_tu", &BeaconRecord::beacon_interval_tu)
      .def_readonly("sequence_number", &BeaconRecord::sequence_number)
      .def_readonly("channel", &BeaconRecord::channel)
      .def("__repr__", [](const BeaconRecord& r) {
        return "BeaconRecord(t_us=" + std::to_string(r.t_us) + ", bssid='" + r.ap.bssid.str() +
               "', rssi_dbm=" + std::to_string(r.rssi_dbm) + ")";
      });

  py::class_<CaptureSession>(m, "CaptureSession")
      .def_readonly("mode", &CaptureSession::mode)
      .def_readonly("duration_s", &CaptureSession::duration_s)
      .def_readonly("records", &CaptureSession::records)
      .def_property_readonly("source", [](const CaptureSession& s) { return s.metadata.source; })
      .def_property_readonly("rp_id", [](const CaptureSession& s) { return s.metadata.rp_id; })
      .def_property_readonly("run_index", [](const CaptureSession& s) { return s.metadata.run_index; })
      .def_property_readonly("start_epoch_us", [](const CaptureSession& s) { return s.metadata.start_epoch_us; })
      .def_property_readonly("skipped", [](const CaptureSession& s) { return s.metadata.skipped; })
      .def_property_readonly("duplicates", [](const CaptureSession& s) { return s.metadata.duplicates; })
      .def_property_readonly("access_points", [](const CaptureSession& s) {
        std::vector<std::string> out;
        for (const auto& ap : s.access_points()) out.push_back(ap.bssid.str());
        return out;
      })
      .def("__len__", [](const CaptureSession& s) { return s.records.size(); })
      .def("__eq__", [](const CaptureSession& a, const CaptureSession& b) { return a == b; });

  m.def("tu_to_ms", &tu_to_ms, py::arg("tu"));
  m.def("theoretical_rate", [](CaptureMode mode, double bi, double ri) { return theoretical_rate(mode, bi, ri); },
        py::arg("mode"), py::arg("beacon_interval_tu") = kDefaultBeaconIntervalTu,
        py::arg("report_interval_tu") = kDefaultReportIntervalTu);
  m.def("format_rate", &format_rate, py::arg("rate"));
  m.def("miss_rate", &miss_rate, py::arg("rate"), py::arg("theoretical"));

  m.def(
      "decode_packet",
      [](py::bytes data) -> py::object {
        const std::string raw = data;
        const auto* p = reinterpret_cast<const std::uint8_t*>(raw.data());
        auto d = decode_packet(ByteView(p, raw.size()));
        if (!d) return py::str(std::string(to_string(d.error())));
        return packet_dict(d.value());
      },
      py::arg("data"), "Decode one radiotap + beacon packet; returns a dict, or the error name as a string.");

  m.def(
      "read_capture",
      [](const std::string& path, const std::string& clock, std::optional<std::string> mode,
         std::optional<double> duration_s, std::optional<std::int64_t> start_epoch_us) {
        return read_any_capture(path, read_options(clock, mode, duration_s, start_epoch_us));
      },
      py::arg("path"), py::arg("clock") = "capture", py::arg("mode") = py::none(),
      py::arg("duration_s") = py::none(), py::arg("start_epoch_us") = py::none());
  m.def(
      "write_capture",
      [](const CaptureSession& s, const std::string& path) {
        if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
          write_capture_csv(s, path);
        } else {
          write_capture_file(s, path);
        }
      },
      py::arg("session"), py::arg("path"));

  m.def("measurement_rate", [](const CaptureSession& s, const std::string& b) { return measurement_rate(s, mac(b)); },
        py::arg("session"), py::arg("bssid"));
  m.def(
      "capture_probability",
      [](const CaptureSession& s, const std::string& b, double w, double off) {
        return capture_probability(s, mac(b), w, off);
      },
      py::arg("session"), py::arg("bssid"), py::arg("window_s") = 1.0, py::arg("offset_s") = 0.0);
  m.def(
      "gap_runs",
      [](const CaptureSession& s, const std::string& b, double w, double off) {
        std::vector<std::pair<std::int64_t, std::int64_t>> out;
        for (const auto& r : gap_report(s, mac(b), w, off).empty_runs) out.emplace_back(r.start_window, r.length);
        return out;
      },
      py::arg("session"), py::arg("bssid"), py::arg("window_s") = 1.0, py::arg("offset_s") = 0.0,
      "Maximal runs of empty windows as (start_window, length) pairs.");
  m.def(
      "delay_histogram",
      [](const CaptureSession& s, const std::string& b, double width) {
        return histogram_dict(arrival_delay_histogram(s, mac(b), width));
      },
      py::arg("session"), py::arg("bssid"), py::arg("bin_width_ms") = kDefaultBinWidthMs);

  m.def(
      "analyze_json",
      [](const std::vector<CaptureSession>& sessions, std::vector<double> windows_s, double bin_width_ms,
         double window_offset_s, bool group_by_rp, const std::string& label) {
        RunSet rs;
        rs.label = label;
        rs.runs = sessions;
        AnalysisOptions o;
        o.windows_s = std::move(windows_s);
        o.bin_width_ms = bin_width_ms;
        o.window_offset_s = window_offset_s;
        return report_to_json(aggregate_runs(rs, group_by_rp, o));
      },
      py::arg("sessions"), py::arg("windows_s") = std::vector<double>{1.0, 2.0},
      py::arg("bin_width_ms") = kDefaultBinWidthMs, py::arg("window_offset_s") = 0.0, py::arg("group_by_rp") = false,
      py::arg("label") = "analysis");

  m.def("preset_names", &preset_names);
  m.def(
      "scenario_json",
      [](const std::string& name, const std::string& mode) {
        return scenario_to_json(preset(name, parse_capture_mode(mode))).dump(2);
      },
      py::arg("preset"), py::arg("mode") = "monitor");
  m.def(
      "simulate",
      [](std::optional<std::string> preset_name, std::optional<std::string> scenario_json, const std::string& mode,
         std::optional<std::uint64_t> seed, std::optional<int> runs, std::optional<double> duration_s) {
        auto s = scenario_for(preset_name, scenario_json, mode);
        if (seed) s.seed = *seed;
        if (runs) s.runs = *runs;
        if (duration_s) s.duration_s = *duration_s;
        py::gil_scoped_release release;
        return simulate(s).runs;
      },
      py::arg("preset") = py::none(), py::arg("scenario_json") = py::none(), py::arg("mode") = "monitor",
      py::arg("seed") = py::none(), py::arg("runs") = py::none(), py::arg("duration_s") = py::none());
  m.def(
      "calibrate_signal_strength",
      [](const std::string& mode, std::optional<std::uint64_t> seed) {
        CalibrationOptions o;
        if (seed) o.seed = *seed;
        const auto targets = signal_strength_targets(parse_capture_mode(mode));
        CalibrationResult r;
        {
          py::gil_scoped_release release;
          r = calibrate(targets, targets.front().scenario.loss, o);
        }
        py::dict d;
        d["loss_json"] = loss_to_json(r.loss).dump();
        d["achieved_rate"] = r.achieved_rate;
        d["achieved_miss_rate_pct"] = r.achieved_miss_rate_pct;
        d["converged"] = r.converged;
        d["evaluations"] = r.evaluations;
        return d;
      },
      py::arg("mode"), py::arg("seed") = py::none());

  m.def(
      "radiomap_csv",
      [](const std::vector<std::tuple<std::string, double, double, CaptureSession>>& points,
         std::uint64_t min_samples) {
        std::vector<std::pair<ReferencePoint, CaptureSession>> in;
        for (const auto& [id, x, y, s] : points) in.emplace_back(ReferencePoint{id, x, y, {}}, s);
        return radiomap_to_csv(build_radiomap(in, min_samples));
      },
      py::arg("points"), py::arg("min_samples") = kDefaultMinSamples,
      "Build a radio map from (rp_id, x, y, session) tuples and render it as CSV.");
  m.def("survey_time_estimate", &survey_time_estimate, py::arg("rate"), py::arg("samples_needed"));
}
