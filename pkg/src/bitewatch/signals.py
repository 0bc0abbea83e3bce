"""Wrist-motion time series: containers, validation, and Gaussian pre-smoothing.

Traces hold 6-axis samples (3-axis angular velocity in deg/s, 3-axis
acceleration in g) at a nominal 15 Hz. The roll axis of the gyro (channel 0,
``gx`` in CSV files) is the channel the bite detector consumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation

GYRO_AXES = ("roll", "pitch", "yaw")
ACCEL_AXES = ("ax", "ay", "az")
CHANNELS = GYRO_AXES + ACCEL_AXES

# Tolerance for deciding a sample sits inside the kernel half-window.
_EDGE_EPS = 1e-12


@dataclass(frozen=True)
class MotionSample:
    """One timestamped 6-axis reading.

    t is seconds since course start; gyro is (roll, pitch, yaw) in deg/s;
    accel is (ax, ay, az) in g units.
    """

    t: float
    gyro: tuple[float, float, float]
    accel: tuple[float, float, float]

    def __post_init__(self):
        if not math.isfinite(self.t) or self.t < 0:
            raise ValueError(f"sample time must be finite and non-negative, got {self.t}")
        for v in (*self.gyro, *self.accel):
            if not math.isfinite(v):
                raise ValueError("sample channels must be finite")


@dataclass
class MotionTrace:
    """A time-ordered course of motion samples stored as arrays.

    t: (n,) seconds, strictly increasing; gyro: (n, 3) deg/s; accel: (n, 3) g.
    """

    t: np.ndarray
    gyro: np.ndarray
    accel: np.ndarray
    nominal_rate_hz: float = 15.0

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float).reshape(-1)
        n = self.t.shape[0]
        self.gyro = np.asarray(self.gyro, dtype=float).reshape(n, 3)
        self.accel = np.asarray(self.accel, dtype=float).reshape(n, 3)
        if self.nominal_rate_hz <= 0:
            raise ValueError(f"nominal_rate_hz must be > 0, got {self.nominal_rate_hz}")

    def __len__(self) -> int:
        return self.t.shape[0]

    @property
    def roll(self) -> np.ndarray:
        return self.gyro[:, 0]

    @property
    def duration_s(self) -> float:
        return float(self.t[-1] - self.t[0]) if len(self) >= 2 else 0.0

    def sample(self, i: int) -> MotionSample:
        return MotionSample(float(self.t[i]), tuple(self.gyro[i]), tuple(self.accel[i]))

    @classmethod
    def empty(cls, nominal_rate_hz: float = 15.0) -> "MotionTrace":
        return cls(np.empty(0), np.empty((0, 3)), np.empty((0, 3)), nominal_rate_hz)

    @classmethod
    def from_samples(cls, samples, nominal_rate_hz: float = 15.0) -> "MotionTrace":
        samples = list(samples)
        if not samples:
            return cls.empty(nominal_rate_hz)
        t = np.array([s.t for s in samples])
        gyro = np.array([s.gyro for s in samples])
        accel = np.array([s.accel for s in samples])
        return cls(t, gyro, accel, nominal_rate_hz)


@dataclass(frozen=True)
class SmoothingSpec:
    """Gaussian smoothing window: total support window_width_s, std sigma_s."""

    window_width_s: float = 1.0
    sigma_s: float = 2.0 / 3.0

    def __post_init__(self):
        if self.window_width_s <= 0:
            raise ValueError(f"window_width_s must be > 0, got {self.window_width_s}")
        if self.sigma_s <= 0:
            raise ValueError(f"sigma_s must be > 0, got {self.sigma_s}")


@dataclass(frozen=True)
class Anomaly:
    """One data problem found in a trace. Anomalies are data, not errors."""

    kind: str  # non_finite_time | negative_time | non_monotonic | non_finite_value | gap
    index: int
    message: str

    def __str__(self) -> str:
        return f"{self.kind}@{self.index}: {self.message}"


def validate_trace(trace: MotionTrace, max_gap_factor: float = 3.0) -> list[Anomaly]:
    """Scan a trace for gaps, non-monotonic times, and non-finite values.

    Returns an empty list iff the trace satisfies all invariants and its
    largest inter-sample gap is at most max_gap_factor / nominal_rate_hz.
    """
    anomalies: list[Anomaly] = []
    t = trace.t
    n = len(trace)
    if n == 0:
        return anomalies

    finite_t = np.isfinite(t)
    for i in np.flatnonzero(~finite_t):
        anomalies.append(Anomaly("non_finite_time", int(i), f"t={t[i]!r}"))
    for i in np.flatnonzero(finite_t & (t < 0)):
        anomalies.append(Anomaly("negative_time", int(i), f"t={t[i]!r}"))

    dt = np.diff(t)
    for i in np.flatnonzero(dt <= 0):
        anomalies.append(
            Anomaly("non_monotonic", int(i + 1), f"t[{i}]={t[i]:.6f} -> t[{i + 1}]={t[i + 1]:.6f}")
        )
    max_gap = max_gap_factor / trace.nominal_rate_hz
    for i in np.flatnonzero(dt > max_gap):
        anomalies.append(
            Anomaly("gap", int(i + 1), f"gap {dt[i]:.3f}s exceeds {max_gap:.3f}s")
        )

    values = np.hstack([trace.gyro, trace.accel])
    bad = ~np.isfinite(values)
    for i in np.flatnonzero(bad.any(axis=1)):
        chans = ",".join(CHANNELS[j] for j in np.flatnonzero(bad[i]))
        anomalies.append(Anomaly("non_finite_value", int(i), f"channels: {chans}"))

    anomalies.sort(key=lambda a: (a.index, a.kind))
    return anomalies


def smoothing_kernel(times: np.ndarray, spec: SmoothingSpec, index: int):
    """Kernel used for output sample `index`: (sample indices, normalized weights).

    Support is the samples within +/- window_width_s / 2 of times[index];
    weights are Gaussian in the actual time offsets and renormalized to sum
    to 1, which is also how boundaries are handled (truncate-and-renormalize).
    """
    times = np.asarray(times, dtype=float)
    half = spec.window_width_s / 2.0
    ti = times[index]
    lo = int(np.searchsorted(times, ti - half - _EDGE_EPS, side="left"))
    hi = int(np.searchsorted(times, ti + half + _EDGE_EPS, side="right"))
    idx = np.arange(lo, hi)
    w = np.exp(-((times[lo:hi] - ti) ** 2) / (2.0 * spec.sigma_s**2))
    return idx, w / w.sum()


def smooth(trace: MotionTrace, spec: SmoothingSpec = SmoothingSpec()) -> MotionTrace:
    """Convolve every channel with a truncated, renormalized Gaussian window.

    Output keeps the input timestamps and length. The kernel is evaluated on
    actual timestamps so jitter in the sample clock is tolerated; a fast
    convolution path is used when the clock is exactly uniform.
    """
    n = len(trace)
    if n == 0:
        return MotionTrace.empty(trace.nominal_rate_hz)

    channels = np.hstack([trace.gyro, trace.accel])
    out = _smooth_channels(trace.t, channels, spec)
    return MotionTrace(trace.t.copy(), out[:, :3], out[:, 3:], trace.nominal_rate_hz)


def _smooth_channels(t: np.ndarray, channels: np.ndarray, spec: SmoothingSpec) -> np.ndarray:
    n = t.shape[0]
    if n == 1:
        return channels.copy()

    dt = np.diff(t)
    uniform = np.all(np.abs(dt - dt[0]) <= 1e-9 * max(abs(dt[0]), 1e-9))
    if uniform:
        step = float(t[-1] - t[0]) / (n - 1)
        m = int(math.floor(spec.window_width_s / 2.0 / step + _EDGE_EPS))
        taps = 2 * m + 1
        if taps <= n:
            offsets = np.arange(-m, m + 1) * step
            w = np.exp(-(offsets**2) / (2.0 * spec.sigma_s**2))
            norm = np.convolve(np.ones(n), w, mode="same")
            out = np.empty_like(channels)
            for c in range(channels.shape[1]):
                out[:, c] = np.convolve(channels[:, c], w, mode="same") / norm
            return out

    out = np.empty_like(channels)
    half = spec.window_width_s / 2.0
    lo = np.searchsorted(t, t - half - _EDGE_EPS, side="left")
    hi = np.searchsorted(t, t + half + _EDGE_EPS, side="right")
    inv_two_sigma_sq = 1.0 / (2.0 * spec.sigma_s**2)
    for i in range(n):
        w = np.exp(-((t[lo[i]:hi[i]] - t[i]) ** 2) * inv_two_sigma_sq)
        out[i] = w @ channels[lo[i]:hi[i]] / w.sum()
    return out


def require_valid(trace: MotionTrace, max_gap_factor: float = 3.0) -> None:
    """Raise TraceValidationError if validate_trace finds anything."""
    from .errors import TraceValidationError

    anomalies = validate_trace(trace, max_gap_factor)
    if anomalies:
        raise TraceValidationError(anomalies)


def check_strictly_increasing(values, what: str) -> None:
    arr = np.asarray(values, dtype=float)
    if arr.size >= 2 and not np.all(np.diff(arr) > 0):
        raise ContractViolation(f"{what} must be strictly increasing in time")
