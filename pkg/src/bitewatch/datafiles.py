"""Plain-file persistence: motion CSV, labels/detections JSONL, JSON helpers.

All writers produce byte-reproducible output: UTF-8, LF line endings,
sorted JSON keys, and fixed timestamp precision (3-decimal seconds for
event times, 6 decimals for sample clocks).
"""

from __future__ import annotations

import json
from dataclasses import replace
from pathlib import Path

import numpy as np

from .detector import Detection, DetectorParams
from .errors import DatasetError
from .groundtruth import BiteLabel
from .signals import MotionTrace

MOTION_HEADER = "t,gx,gy,gz,ax,ay,az"


def fmt_event_t(t: float) -> float:
    """Quantize an event timestamp to the 3-decimal serialization grid."""
    return round(float(t), 3)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def write_motion_csv(path, trace: MotionTrace) -> None:
    lines = [MOTION_HEADER]
    channels = np.hstack([trace.gyro, trace.accel])
    for i in range(len(trace)):
        vals = ",".join(repr(float(v)) for v in channels[i])
        lines.append(f"{trace.t[i]:.6f},{vals}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_motion_csv(path, nominal_rate_hz: float = 15.0) -> MotionTrace:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines or lines[0].strip() != MOTION_HEADER:
        raise DatasetError(f"{path}: expected header {MOTION_HEADER!r}")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 7:
            raise DatasetError(f"{path}: expected 7 columns, got {len(parts)}")
        rows.append([float(p) for p in parts])
    if not rows:
        return MotionTrace.empty(nominal_rate_hz)
    arr = np.asarray(rows)
    return MotionTrace(arr[:, 0], arr[:, 1:4], arr[:, 4:7], nominal_rate_hz)


def label_to_json(label: BiteLabel) -> dict:
    return {
        "t": fmt_event_t(label.t),
        "food_id": label.food_id,
        "hand": label.hand,
        "utensil": label.utensil,
        "container": label.container,
        "rater_id": label.rater_id,
    }


def label_from_json(obj: dict) -> BiteLabel:
    return BiteLabel(
        t=float(obj["t"]),
        food_id=str(obj["food_id"]),
        hand=str(obj["hand"]),
        utensil=str(obj["utensil"]),
        container=str(obj["container"]),
        rater_id=str(obj["rater_id"]),
    )


def write_labels_jsonl(path, labels) -> None:
    lines = [_dump(label_to_json(l)) for l in labels]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8", newline="\n")


def read_labels_jsonl(path) -> list[BiteLabel]:
    path = Path(path)
    labels = []
    for ln in path.read_text(encoding="utf-8").split("\n"):
        if ln.strip():
            labels.append(label_from_json(json.loads(ln)))
    return labels


def params_to_json(params: DetectorParams) -> dict:
    return {"t1": params.t1, "t2": params.t2, "t3": params.t3, "t4": params.t4}


def write_detections_jsonl(path, course_id: str, detections, params: DetectorParams) -> None:
    payload = params_to_json(params)
    lines = [
        _dump({"course_id": course_id, "t": fmt_event_t(d.t), "params": payload})
        for d in detections
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8", newline="\n")


def read_detections_jsonl(path) -> list[Detection]:
    out = []
    for ln in Path(path).read_text(encoding="utf-8").split("\n"):
        if ln.strip():
            out.append(Detection(float(json.loads(ln)["t"])))
    return out


def write_json(path, obj) -> None:
    Path(path).write_text(
        json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8", newline="\n"
    )


def read_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def quantize_labels(labels) -> list[BiteLabel]:
    """Labels with event times snapped to the serialization grid."""
    return [replace(l, t=fmt_event_t(l.t)) for l in labels]
