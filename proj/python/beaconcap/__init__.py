"""Beacon capture analysis and capture-mode simulation."""

import json

from ._core import (
    BeaconRecord,
    CaptureMode,
    CaptureSession,
    Error,
    Infeasible,
    calibrate_signal_strength,
    capture_probability,
    decode_packet,
    delay_histogram,
    format_rate,
    gap_runs,
    measurement_rate,
    miss_rate,
    preset_names,
    radiomap_csv,
    read_capture,
    scenario_json,
    simulate,
    survey_time_estimate,
    theoretical_rate,
    tu_to_ms,
    write_capture,
)
from ._core import analyze_json as _analyze_json

__version__ = "0.1.0"


def analyze(sessions, windows_s=(1.0, 2.0), bin_width_ms=25.0, window_offset_s=0.0, group_by_rp=False,
            label="analysis"):
    """Aggregate sessions into a report dict (same schema as report.json)."""
    return json.loads(_analyze_json(list(sessions), list(windows_s), bin_width_ms, window_offset_s, group_by_rp,
                                    label))


__all__ = [
    "BeaconRecord",
    "CaptureMode",
    "CaptureSession",
    "Error",
    "Infeasible",
    "analyze",
    "calibrate_signal_strength",
    "capture_probability",
    "decode_packet",
    "delay_histogram",
    "format_rate",
    "gap_runs",
    "measurement_rate",
    "miss_rate",
    "preset_names",
    "radiomap_csv",
    "read_capture",
    "scenario_json",
    "simulate",
    "survey_time_estimate",
    "theoretical_rate",
    "tu_to_ms",
    "write_capture",
]
