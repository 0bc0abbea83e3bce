"""Synthetic wrist-motion corpora with schedulable bite gestures.

Rendered courses are the oracle for detector and evaluation tests: every
bite contributes a raised-cosine positive roll lobe followed by a negative
lobe, with the ground-truth bite time at the negative-lobe peak. Distractor
blips are single lobes that can arm the detector without completing the
gesture unless deliberately scripted in pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import SynthError
from .evaluation import Participant
from .groundtruth import BiteLabel, GroundTruth, MERGED_RATER_ID

# Survives the default Gaussian smoothing with a ~2x margin over t1=10
# while spanning <= 3 s so cohort gestures fit the 3 s minimum interval.
DEFAULT_COHORT_TEMPLATE_ARGS = dict(pos_amp=50.0, neg_amp=50.0, lobe_dur_s=0.4, lobe_gap_s=2.2)


@dataclass(frozen=True)
class GestureTemplate:
    """Shape of one bite gesture on the roll channel.

    Each lobe is a raised-cosine pulse amp*cos^2(pi*tau/(2*lobe_dur_s))
    supported on +/- lobe_dur_s around its peak; lobe_gap_s separates the
    positive-lobe peak from the negative-lobe peak.
    """

    pos_amp: float = 40.0
    neg_amp: float = 40.0
    lobe_dur_s: float = 0.5
    lobe_gap_s: float = 2.5

    def __post_init__(self):
        if self.pos_amp <= 0 or self.neg_amp <= 0:
            raise ValueError("lobe amplitudes must be > 0")
        if self.lobe_gap_s <= 0:
            raise ValueError("lobe_gap_s must be > 0")
        if self.lobe_dur_s <= 0:
            raise ValueError("lobe_dur_s must be > 0")

    @property
    def span_s(self) -> float:
        """Total gesture extent: positive-lobe start to negative-lobe end."""
        return self.lobe_gap_s + 2.0 * self.lobe_dur_s


@dataclass(frozen=True)
class ScriptedBite:
    """One scheduled bite; t is the negative-lobe peak (= ground-truth time)."""

    t: float
    template: GestureTemplate = GestureTemplate()
    food_id: str = "synthetic meal"
    hand: str = "right"
    utensil: str = "fork"
    container: str = "plate"


@dataclass(frozen=True)
class Distractor:
    """A single roll lobe (napkin/phone-like blip); polarity +1 or -1."""

    t: float
    amp: float = 30.0
    dur_s: float = 0.5
    polarity: int = 1


@dataclass
class MealScript:
    course_id: str = "course"
    duration_s: float = 60.0
    bites: list[ScriptedBite] = field(default_factory=list)
    noise_std: float = 0.0
    distractors: list[Distractor] = field(default_factory=list)


def _add_lobe(roll: np.ndarray, t: np.ndarray, center: float, amp: float, half_width: float):
    lo = int(np.searchsorted(t, center - half_width, side="left"))
    hi = int(np.searchsorted(t, center + half_width, side="right"))
    tau = t[lo:hi] - center
    roll[lo:hi] += amp * np.cos(np.pi * tau / (2.0 * half_width)) ** 2


def _validate_script(script: MealScript) -> None:
    if script.duration_s <= 0:
        raise SynthError(f"duration_s must be > 0, got {script.duration_s}")
    if script.noise_std < 0:
        raise SynthError("noise_std must be >= 0")
    prev_end = None
    prev_t = None
    for bite in script.bites:
        if prev_t is not None and bite.t <= prev_t:
            raise SynthError(f"bite times must be strictly increasing (t={bite.t})")
        tpl = bite.template
        start = bite.t - tpl.lobe_gap_s - tpl.lobe_dur_s
        end = bite.t + tpl.lobe_dur_s
        if start < 0 or end > script.duration_s:
            raise SynthError(f"bite at t={bite.t} does not fit inside the course")
        if prev_end is not None and start < prev_end:
            raise SynthError(f"overlapping gestures around t={bite.t}")
        prev_end = end
        prev_t = bite.t


def render(script: MealScript, rate_hz: float = 15.0, seed: int = 0):
    """Render a script into (MotionTrace, GroundTruth). Deterministic per seed."""
    if rate_hz <= 0:
        raise SynthError(f"rate_hz must be > 0, got {rate_hz}")
    _validate_script(script)

    n = int(math.floor(script.duration_s * rate_hz)) + 1
    t = np.arange(n) / rate_hz
    roll = np.zeros(n)
    for bite in script.bites:
        tpl = bite.template
        _add_lobe(roll, t, bite.t - tpl.lobe_gap_s, tpl.pos_amp, tpl.lobe_dur_s)
        _add_lobe(roll, t, bite.t, -tpl.neg_amp, tpl.lobe_dur_s)
    for blip in script.distractors:
        _add_lobe(roll, t, blip.t, blip.polarity * blip.amp, blip.dur_s)

    gyro = np.zeros((n, 3))
    gyro[:, 0] = roll
    accel = np.zeros((n, 3))
    if script.noise_std > 0:
        rng = np.random.default_rng(seed)
        gyro += rng.normal(0.0, script.noise_std, (n, 3))
        accel += rng.normal(0.0, script.noise_std, (n, 3))

    from . import signals

    trace = signals.MotionTrace(t, gyro, accel, rate_hz)
    labels = [
        BiteLabel(b.t, b.food_id, b.hand, b.utensil, b.container, MERGED_RATER_ID)
        for b in script.bites
    ]
    return trace, GroundTruth(script.course_id, labels)


@dataclass(frozen=True)
class CohortProfile:
    """One participant's eating-rate profile for corpus generation."""

    participant: Participant
    spb_mean: float
    spb_std: float = 0.0
    n_bites: int = 20
    n_courses: int = 1
    template: GestureTemplate = GestureTemplate(**DEFAULT_COHORT_TEMPLATE_ARGS)
    menu: tuple[str, ...] = ("synthetic meal",)
    noise_std: float = 0.0

    def __post_init__(self):
        if self.spb_mean <= 0:
            raise ValueError(f"spb_mean must be > 0, got {self.spb_mean}")
        if self.spb_std < 0:
            raise ValueError("spb_std must be >= 0")
        if self.n_bites < 0 or self.n_courses < 0:
            raise ValueError("counts must be >= 0")


MIN_INTERVAL_S = 3.0


def _draw_interval(rng: np.random.Generator, mean: float, std: float, floor: float) -> float:
    if std == 0.0:
        return max(mean, floor)
    # truncated normal via redraw; quantized to ms so files round-trip exactly
    for _ in range(1000):
        x = rng.normal(mean, std)
        if x >= floor:
            return round(x, 3)
    return floor


def cohort(
    profiles: list[CohortProfile], seed: int = 0, rate_hz: float = 15.0
) -> list[tuple[Participant, MealScript]]:
    """Expand profiles into meal scripts with truncated-normal bite intervals.

    Intervals never go below max(3 s, gesture span); end padding is chosen
    so a zero-variance profile lands exactly on its target seconds-per-bite.
    """
    rng = np.random.default_rng(seed)
    out: list[tuple[Participant, MealScript]] = []
    for profile in profiles:
        tpl = profile.template
        floor = max(MIN_INTERVAL_S, tpl.span_s)
        lead_in = round(tpl.lobe_gap_s + tpl.lobe_dur_s + 0.5, 3)
        for course_idx in range(profile.n_courses):
            times: list[float] = []
            cursor = lead_in
            for _ in range(profile.n_bites):
                times.append(round(cursor, 3))
                cursor += _draw_interval(rng, profile.spb_mean, profile.spb_std, floor)
            bites = [
                ScriptedBite(
                    t=t,
                    template=tpl,
                    food_id=profile.menu[i % len(profile.menu)],
                    hand=profile.participant.dominant_hand,
                )
                for i, t in enumerate(times)
            ]
            if times:
                tail = max(profile.spb_mean - lead_in, tpl.lobe_dur_s + 0.25)
                duration = round(times[-1] + tail, 3)
            else:
                duration = max(profile.spb_mean, 2.0 * lead_in)
            script = MealScript(
                course_id=f"{profile.participant.id}-c{course_idx + 1}",
                duration_s=duration,
                bites=bites,
                noise_std=profile.noise_std,
            )
            out.append((profile.participant, script))
    return out


def rater_views(
    truth: GroundTruth, rater_ids: tuple[str, str] = ("rater_a", "rater_b")
) -> tuple[list[BiteLabel], list[BiteLabel]]:
    """Two identical rater label lists derived from rendered ground truth."""
    a = [replace(b, rater_id=rater_ids[0]) for b in truth.bites]
    b = [replace(b, rater_id=rater_ids[1]) for b in truth.bites]
    return a, b


def template_from_json(obj: dict | None) -> GestureTemplate:
    if not obj:
        return GestureTemplate()
    return GestureTemplate(
        pos_amp=float(obj.get("pos_amp", 40.0)),
        neg_amp=float(obj.get("neg_amp", 40.0)),
        lobe_dur_s=float(obj.get("lobe_dur_s", 0.5)),
        lobe_gap_s=float(obj.get("lobe_gap_s", 2.5)),
    )


def script_from_json(obj: dict) -> MealScript:
    """Parse the documented meal-script JSON schema."""
    bites = [
        ScriptedBite(
            t=float(b["t"]),
            template=template_from_json(b.get("template")),
            food_id=str(b.get("food_id", "synthetic meal")),
            hand=str(b.get("hand", "right")),
            utensil=str(b.get("utensil", "fork")),
            container=str(b.get("container", "plate")),
        )
        for b in obj.get("bites", [])
    ]
    distractors = [
        Distractor(
            t=float(d["t"]),
            amp=float(d.get("amp", 30.0)),
            dur_s=float(d.get("dur_s", 0.5)),
            polarity=int(d.get("polarity", 1)),
        )
        for d in obj.get("distractors", [])
    ]
    return MealScript(
        course_id=str(obj.get("course_id", "course")),
        duration_s=float(obj["duration_s"]),
        bites=bites,
        noise_std=float(obj.get("noise_std", 0.0)),
        distractors=distractors,
    )
