"""Detection scoring (T/F/U), sensitivity/PPV, stratified reports, and sweeps.

Each detection is scored against the interval from the previous detection to
the following one (course start/end for the first/last). The earliest actual
bite inside that window not yet paired becomes a true detection (T); a
windowless detection is false (F); leftover bites are undetected (U).
Sensitivity = T/(T+U), PPV = T/(T+F). Metrics with empty denominators are
flagged undefined (None) so reports can render them as "-".
"""

from __future__ import annotations

import math
from bisect import bisect_left
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .detector import Detection, DetectorParams, detect_course
from .errors import ContractViolation
from .groundtruth import BiteLabel, GroundTruth
from .signals import MotionTrace, SmoothingSpec, smooth

GROUP_KEYS = ("age", "gender", "ethnicity", "container", "utensil", "hand_used", "food")

AGE_BANDS = ((18, 23), (24, 30), (31, 40), (41, 50), (51, 75))


@dataclass(frozen=True)
class Participant:
    id: str
    gender: str
    age: int
    ethnicity: str
    dominant_hand: str
    height_cm: float | None = None
    weight_kg: float | None = None

    def __post_init__(self):
        if self.age <= 0:
            raise ValueError(f"age must be > 0, got {self.age}")


@dataclass
class EvalOutcome:
    """Paired/unpaired classification of one course's detections."""

    pairs: list[tuple[Detection, BiteLabel]]
    false_detections: list[Detection]
    undetected: list[BiteLabel]
    sensitivity: float | None
    ppv: float | None

    @property
    def t_count(self) -> int:
        return len(self.pairs)

    @property
    def f_count(self) -> int:
        return len(self.false_detections)

    @property
    def u_count(self) -> int:
        return len(self.undetected)


def classify(
    detections: Sequence[Detection],
    actual: GroundTruth | Sequence[BiteLabel],
    course_start: float = float("-inf"),
    course_end: float = float("inf"),
) -> EvalOutcome:
    """Score detections against actual bites with the neighbor-window rule.

    Windows are open at detection endpoints (a bite exactly at a neighboring
    detection's time belongs to that neighbor's earlier pass) and inclusive
    at the course edges so no bite is unpairable by construction.
    """
    bites = list(actual.bites) if isinstance(actual, GroundTruth) else list(actual)
    det_ts = [d.t for d in detections]
    bite_ts = [b.t for b in bites]
    if any(b <= a for a, b in zip(det_ts, det_ts[1:])):
        raise ContractViolation("detections must be strictly increasing in time")
    if any(b <= a for a, b in zip(bite_ts, bite_ts[1:])):
        raise ContractViolation("actual bites must be strictly increasing in time")

    paired = [False] * len(bites)
    pairs: list[tuple[Detection, BiteLabel]] = []
    false_detections: list[Detection] = []
    nd = len(detections)
    for i, det in enumerate(detections):
        first = i == 0
        last = i == nd - 1
        lo = course_start if first else det_ts[i - 1]
        hi = course_end if last else det_ts[i + 1]
        chosen = None
        for j in range(bisect_left(bite_ts, lo), len(bites)):
            bt = bite_ts[j]
            if bt > hi or (bt == hi and not last):
                break
            if paired[j] or bt < lo or (bt == lo and not first):
                continue
            chosen = j
            break
        if chosen is None:
            false_detections.append(det)
        else:
            paired[chosen] = True
            pairs.append((det, bites[chosen]))

    undetected = [b for j, b in enumerate(bites) if not paired[j]]
    n_actual = len(bites)
    sensitivity = len(pairs) / n_actual if n_actual else None
    ppv = len(pairs) / nd if nd else None
    return EvalOutcome(pairs, false_detections, undetected, sensitivity, ppv)


def seconds_per_bite(duration_s: float, n_bites: int) -> float | None:
    """Average eating rate for one course; None when there are no bites."""
    if n_bites <= 0:
        return None
    if duration_s <= 0:
        raise ValueError(f"duration_s must be > 0, got {duration_s}")
    return duration_s / n_bites


def pearson_correlation(x: Sequence[float], y: Sequence[float]) -> float | None:
    """Sample Pearson coefficient; None for degenerate input (zero variance, n < 2)."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.shape != ya.shape:
        raise ValueError(f"length mismatch: {xa.shape} vs {ya.shape}")
    if xa.size < 2:
        return None
    dx = xa - xa.mean()
    dy = ya - ya.mean()
    sx = float(np.sqrt((dx**2).sum()))
    sy = float(np.sqrt((dy**2).sum()))
    if sx == 0.0 or sy == 0.0:
        return None
    return float((dx @ dy) / (sx * sy))


def motion_amount(trace: MotionTrace, bite_t: float, window_s: float = 2.0) -> float | None:
    """Mean gyro-vector norm (deg/s) over samples within +/- window_s/2 of bite_t."""
    if window_s <= 0:
        raise ValueError(f"window_s must be > 0, got {window_s}")
    half = window_s / 2.0
    mask = np.abs(trace.t - bite_t) <= half
    if not mask.any():
        return None
    norms = np.linalg.norm(trace.gyro[mask], axis=1)
    return float(norms.mean())


@dataclass
class CourseEval:
    """One evaluated course: merged ground truth plus its detection outcome."""

    course_id: str
    participant_id: str
    bites: list[BiteLabel]
    outcome: EvalOutcome
    duration_s: float

    def detected_times(self) -> set[float]:
        return {label.t for _, label in self.outcome.pairs}

    @property
    def spb(self) -> float | None:
        return seconds_per_bite(self.duration_s, len(self.bites)) if self.bites else None


@dataclass(frozen=True)
class StratumRow:
    key: str
    n_bites: int
    n_detected: int
    sensitivity: float | None
    spb: float | None

    @property
    def sensitivity_pct(self) -> int | None:
        # multiply before dividing so exact halves stay exact in float
        return round(100 * self.n_detected / self.n_bites) if self.n_bites else None

    @property
    def spb_display(self) -> int | None:
        return round(self.spb) if self.spb is not None else None


def _age_band(age: int) -> str:
    for lo, hi in AGE_BANDS:
        if lo <= age <= hi:
            return f"{lo}-{hi}"
    return "unbanded"


def _hand_used_key(dominant: str, hand: str) -> str:
    prefix = "l-handed" if dominant == "left" else "r-handed"
    suffix = "hands" if hand == "both" else "hand"
    return f"{prefix} using {hand} {suffix}"


def _bite_key(group_by: str, bite: BiteLabel, participant: Participant) -> str:
    if group_by == "age":
        return _age_band(participant.age)
    if group_by == "gender":
        return participant.gender
    if group_by == "ethnicity":
        return participant.ethnicity
    if group_by == "container":
        return bite.container
    if group_by == "utensil":
        return bite.utensil
    if group_by == "hand_used":
        return _hand_used_key(participant.dominant_hand, bite.hand)
    if group_by == "food":
        return bite.food_id.lower()
    raise ValueError(f"group_by must be one of {GROUP_KEYS}, got {group_by!r}")


def stratified_report(
    courses: Sequence[CourseEval],
    participants: dict[str, Participant],
    group_by: str,
    participant_weighted: bool = False,
) -> list[StratumRow]:
    """Pool bites per stratum of a demographic or bite variable.

    Sensitivity per stratum is detected/total over the pooled bites. SPB is
    the bite-weighted mean of course SPB values by default; with
    participant_weighted=True each participant's pooled SPB counts once.
    Rows sort by sensitivity descending, then key ascending (stable output).
    """
    if group_by not in GROUP_KEYS:
        raise ValueError(f"group_by must be one of {GROUP_KEYS}, got {group_by!r}")

    n_bites: dict[str, int] = {}
    n_detected: dict[str, int] = {}
    spb_sum: dict[str, float] = {}  # per-bite sums of the owning course's SPB
    spb_n: dict[str, int] = {}
    per_participant: dict[str, dict[str, list[float]]] = {}  # key -> pid -> [spb_sum, n]

    for course in courses:
        if course.participant_id not in participants:
            raise KeyError(f"unknown participant reference {course.participant_id!r}")
        participant = participants[course.participant_id]
        detected = course.detected_times()
        course_spb = course.spb
        for bite in course.bites:
            key = _bite_key(group_by, bite, participant)
            n_bites[key] = n_bites.get(key, 0) + 1
            if bite.t in detected:
                n_detected[key] = n_detected.get(key, 0) + 1
            if course_spb is not None:
                spb_sum[key] = spb_sum.get(key, 0.0) + course_spb
                spb_n[key] = spb_n.get(key, 0) + 1
                acc = per_participant.setdefault(key, {}).setdefault(participant.id, [0.0, 0.0])
                acc[0] += course_spb
                acc[1] += 1.0

    rows = []
    for key in n_bites:
        bites = n_bites[key]
        detected = n_detected.get(key, 0)
        if participant_weighted:
            accs = per_participant.get(key, {})
            vals = [total / n for total, n in accs.values() if n]
            spb = sum(vals) / len(vals) if vals else None
        else:
            spb = spb_sum[key] / spb_n[key] if spb_n.get(key) else None
        rows.append(StratumRow(key, bites, detected, detected / bites if bites else None, spb))

    rows.sort(key=lambda r: (-(r.sensitivity if r.sensitivity is not None else -1.0), r.key))
    return rows


@dataclass(frozen=True)
class FoodRow:
    food: str
    n_bites: int
    n_detected: int
    sensitivity: float | None
    spb: float | None
    mean_motion: float | None


@dataclass
class FoodReport:
    rows: list[FoodRow]
    corr_sensitivity_spb: float | None
    corr_sensitivity_motion: float | None


def per_food_analysis(
    courses: Sequence[CourseEval],
    traces: dict[str, MotionTrace],
    min_bites: int = 100,
    window_s: float = 2.0,
) -> FoodReport:
    """Per-food sensitivity/SPB/motion for foods with more than min_bites bites.

    Also reports the across-food correlation of sensitivity with SPB and
    with the mean bite-window motion amount.
    """
    bites_n: dict[str, int] = {}
    det_n: dict[str, int] = {}
    spb_sum: dict[str, float] = {}
    spb_w: dict[str, float] = {}
    motion_sum: dict[str, float] = {}
    motion_n: dict[str, int] = {}

    for course in courses:
        detected = course.detected_times()
        course_spb = course.spb
        trace = traces.get(course.course_id)
        for bite in course.bites:
            food = bite.food_id.lower()
            bites_n[food] = bites_n.get(food, 0) + 1
            if bite.t in detected:
                det_n[food] = det_n.get(food, 0) + 1
            if course_spb is not None:
                spb_sum[food] = spb_sum.get(food, 0.0) + course_spb
                spb_w[food] = spb_w.get(food, 0.0) + 1.0
            if trace is not None:
                amount = motion_amount(trace, bite.t, window_s)
                if amount is not None:
                    motion_sum[food] = motion_sum.get(food, 0.0) + amount
                    motion_n[food] = motion_n.get(food, 0) + 1

    rows = []
    for food in sorted(bites_n):
        n = bites_n[food]
        if n <= min_bites:
            continue
        d = det_n.get(food, 0)
        spb = spb_sum[food] / spb_w[food] if spb_w.get(food) else None
        motion = motion_sum[food] / motion_n[food] if motion_n.get(food) else None
        rows.append(FoodRow(food, n, d, d / n, spb, motion))

    def corr(attr: str) -> float | None:
        pts = [(r.sensitivity, getattr(r, attr)) for r in rows
               if r.sensitivity is not None and getattr(r, attr) is not None]
        if len(pts) < 2:
            return None
        return pearson_correlation([p[0] for p in pts], [p[1] for p in pts])

    return FoodReport(rows, corr("spb"), corr("mean_motion"))


@dataclass(frozen=True)
class SweepRow:
    params: DetectorParams
    t: int
    f: int
    u: int
    sensitivity: float | None
    ppv: float | None


def parameter_sweep(
    courses: Sequence[tuple[MotionTrace, Sequence[BiteLabel]]],
    grid: Sequence[DetectorParams],
    smoothing: SmoothingSpec | None = SmoothingSpec(),
) -> list[SweepRow]:
    """Re-run the detector per grid point and pool classification over courses.

    Rows come back in grid order. Traces are smoothed once up front (the
    smoothing stage does not depend on detector parameters).
    """
    if not grid:
        raise ValueError("parameter grid must be non-empty")
    prepared = []
    for trace, bites in courses:
        smoothed = smooth(trace, smoothing) if smoothing is not None else trace
        start = float(trace.t[0]) if len(trace) else 0.0
        end = float(trace.t[-1]) if len(trace) else 0.0
        prepared.append((smoothed, list(bites), start, end))

    rows = []
    for params in grid:
        t = f = u = 0
        for smoothed, bites, start, end in prepared:
            detections = detect_course(smoothed, params, smoothing=None)
            outcome = classify(detections, bites, course_start=start, course_end=end)
            t += outcome.t_count
            f += outcome.f_count
            u += outcome.u_count
        sensitivity = t / (t + u) if (t + u) else None
        ppv = t / (t + f) if (t + f) else None
        rows.append(SweepRow(params, t, f, u, sensitivity, ppv))
    return rows
