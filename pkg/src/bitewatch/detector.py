"""Four-event wrist-roll bite detector.

The machine watches the (smoothed) roll velocity of the wrist. A bite is
the sequence: roll velocity exceeds +t1, at least t3 seconds pass, velocity
drops below -t2 (bite emitted), then the machine stays refractory until t4
seconds have passed. Thresholds are deg/s; t3/t4 are seconds, compared on
sample timestamps, so the detector is sample-rate independent. Inequalities
are strict; ties never trigger.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractViolation
from .signals import MotionTrace, SmoothingSpec, require_valid, smooth

IDLE = 0
ROLLED_POSITIVE = 1
REFRACTORY = 2

EVENT_NAMES = {IDLE: "idle", ROLLED_POSITIVE: "rolled_positive", REFRACTORY: "refractory"}


@dataclass(frozen=True)
class DetectorParams:
    """Thresholds of the state machine. Defaults are the tuned operating point."""

    t1: float = 10.0  # positive roll threshold, deg/s
    t2: float = 10.0  # negative roll threshold magnitude, deg/s
    t3: float = 2.0   # min seconds between positive and negative roll
    t4: float = 8.0   # min seconds between bites (refractory)

    def __post_init__(self):
        if self.t1 <= 0 or self.t2 <= 0:
            raise ValueError(f"t1 and t2 must be > 0, got t1={self.t1}, t2={self.t2}")
        if self.t3 < 0 or self.t4 < 0:
            raise ValueError(f"t3 and t4 must be >= 0, got t3={self.t3}, t4={self.t4}")


@dataclass(frozen=True)
class Detection:
    """One detected bite; t is the timestamp of the negative-roll trigger sample."""

    t: float


@dataclass(frozen=True)
class DetectorState:
    """Streaming state: the EVENT phase plus the time of its last transition.

    s is None on a fresh/reset state; the first step() call seeds it to
    first_t - (max(t3, t4) + 1) so the time guards can neither fire nor
    block spuriously at course start. last_t enforces strictly increasing
    call times within one course.
    """

    event: int = IDLE
    s: float | None = None
    last_t: float | None = None


def reset(state: DetectorState | None = None) -> DetectorState:
    """Fresh Idle state (models the start-of-meal button). Idempotent."""
    return DetectorState(IDLE, None, None)


def step(
    state: DetectorState, t: float, vt: float, params: DetectorParams = DetectorParams()
) -> tuple[DetectorState, Detection | None]:
    """Advance the machine by one sample; emits at most one Detection.

    Transition order within a sample is fixed: arm on +t1 from Idle, then
    detect on -t2 after t3 from RolledPositive, then re-arm to Idle after t4.
    """
    if state.last_t is not None and t <= state.last_t:
        raise ContractViolation(f"step times must be strictly increasing: {t} after {state.last_t}")

    s = state.s if state.s is not None else t - (max(params.t3, params.t4) + 1.0)
    event = state.event
    detection = None

    if vt > params.t1 and event == IDLE:
        event = ROLLED_POSITIVE
        s = t
    if vt < -params.t2 and t - s > params.t3 and event == ROLLED_POSITIVE:
        detection = Detection(t)
        s = t
        event = REFRACTORY
    if event == REFRACTORY and t - s > params.t4:
        event = IDLE

    return DetectorState(event, s, t), detection


def detect_course(
    trace: MotionTrace,
    params: DetectorParams = DetectorParams(),
    smoothing: SmoothingSpec | None = SmoothingSpec(),
) -> list[Detection]:
    """Run the full detector over one course.

    Equivalent to folding step() over the smoothed trace in time order from
    a fresh state. Pass smoothing=None to detect on the trace as-is (already
    smoothed or deliberately raw). Raises TraceValidationError on bad input.
    """
    require_valid(trace)
    if len(trace) == 0:
        return []
    if smoothing is not None:
        trace = smooth(trace, smoothing)

    # Tight local-variable loop; semantics identical to step() (tested).
    times = trace.t.tolist()
    rolls = trace.roll.tolist()
    t1 = params.t1
    neg_t2 = -params.t2
    t3 = params.t3
    t4 = params.t4
    event = IDLE
    s = times[0] - (max(t3, t4) + 1.0)
    out: list[Detection] = []
    for t, vt in zip(times, rolls):
        if vt > t1 and event == IDLE:
            event = ROLLED_POSITIVE
            s = t
        if vt < neg_t2 and t - s > t3 and event == ROLLED_POSITIVE:
            out.append(Detection(t))
            s = t
            event = REFRACTORY
        if event == REFRACTORY and t - s > t4:
            event = IDLE
    return out
