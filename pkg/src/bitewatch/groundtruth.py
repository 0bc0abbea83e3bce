"""Rater bite labels: two-rater matching, conflict classification, adjudication.

Two raters label each course independently. Labels are paired within a
+/- window (default 1 s); clean pairs merge at the average time. Pairs that
disagree raise IdentityError (food) and/or DataEntryError (hand, utensil,
container) conflicts; a counterpart found only in the (window, 2*window]
band raises a TimeError conflict; anything unpaired is a MissedBite. A
third rater's adjudications turn open conflicts into merged bites.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, replace

from .errors import AdjudicationError, ContractViolation

HANDS = ("left", "right", "both")
UTENSILS = ("fork", "spoon", "chopsticks", "hand")
CONTAINERS = ("plate", "bowl", "glass", "mug")

MISSED_BITE = "missed_bite"
TIME_ERROR = "time_error"
IDENTITY_ERROR = "identity_error"
DATA_ENTRY_ERROR = "data_entry_error"
CONFLICT_KINDS = (MISSED_BITE, TIME_ERROR, IDENTITY_ERROR, DATA_ENTRY_ERROR)

RESOLUTIONS = ("keep_a", "keep_b", "custom", "discard")

MERGED_RATER_ID = "merged"


@dataclass(frozen=True)
class BiteLabel:
    """One ground-truth bite event as recorded by a rater."""

    t: float
    food_id: str
    hand: str
    utensil: str
    container: str
    rater_id: str

    def __post_init__(self):
        if not math.isfinite(self.t) or self.t < 0:
            raise ValueError(f"bite time must be finite and non-negative, got {self.t}")
        if self.hand not in HANDS:
            raise ValueError(f"hand {self.hand!r} not in {HANDS}")
        if self.utensil not in UTENSILS:
            raise ValueError(f"utensil {self.utensil!r} not in {UTENSILS}")
        if self.container not in CONTAINERS:
            raise ValueError(f"container {self.container!r} not in {CONTAINERS}")


@dataclass(frozen=True)
class Conflict:
    """A disagreement between the two raters needing third-rater judgment.

    MissedBite conflicts have exactly one side present; the other kinds have
    both. Conflicts raised from the same label pairing share pair_id.
    """

    conflict_id: str
    kind: str
    course_id: str
    a: BiteLabel | None
    b: BiteLabel | None
    pair_id: str | None = None

    def __post_init__(self):
        if self.kind not in CONFLICT_KINDS:
            raise ValueError(f"unknown conflict kind {self.kind!r}")
        present = (self.a is not None) + (self.b is not None)
        if self.kind == MISSED_BITE and present != 1:
            raise ValueError("missed_bite conflict must have exactly one side")
        if self.kind != MISSED_BITE and present != 2:
            raise ValueError(f"{self.kind} conflict must have both sides")


@dataclass(frozen=True)
class Adjudication:
    """Third-rater decision for one conflict.

    resolution: keep_a | keep_b | custom | discard. For custom, fields may
    override any of t, food_id, hand, utensil, container; the rest fall back
    to the conflict's natural base record.
    """

    conflict_id: str
    resolution: str
    judge_id: str
    fields: dict | None = None

    def __post_init__(self):
        if self.resolution not in RESOLUTIONS:
            raise ValueError(f"resolution {self.resolution!r} not in {RESOLUTIONS}")
        if self.resolution == "custom" and not self.fields:
            raise ValueError("custom resolution requires fields")


@dataclass
class GroundTruth:
    """Merged bite list for one course, time-ordered, rater_id='merged'."""

    course_id: str
    bites: list[BiteLabel]

    def validate(self) -> None:
        ts = [b.t for b in self.bites]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ContractViolation(f"ground truth times not strictly increasing ({self.course_id})")


def _check_sorted(labels, what: str) -> None:
    ts = [l.t for l in labels]
    if any(b < a for a, b in zip(ts, ts[1:])):
        raise ContractViolation(f"{what} must be time-sorted")


def _nearest_unpaired(b_times, used, t, radius):
    """Index of the nearest unused label within +/- radius, ties to the earlier one."""
    lo = bisect_left(b_times, t - radius)
    hi = bisect_right(b_times, t + radius)
    best = None
    best_d = None
    for j in range(lo, hi):
        if used[j]:
            continue
        d = abs(b_times[j] - t)
        if best is None or d < best_d:
            best, best_d = j, d
    return best


def _merge_pair(a: BiteLabel, b: BiteLabel) -> BiteLabel:
    food = a.food_id if a.food_id == b.food_id else a.food_id.lower()
    return BiteLabel(
        t=(a.t + b.t) / 2.0,
        food_id=food,
        hand=a.hand,
        utensil=a.utensil,
        container=a.container,
        rater_id=MERGED_RATER_ID,
    )


def match_raters(
    labels_a: list[BiteLabel],
    labels_b: list[BiteLabel],
    window_s: float = 1.0,
    course_id: str = "course",
) -> tuple[GroundTruth, list[Conflict]]:
    """Pair two raters' labels and classify disagreements.

    Processing rater A's labels in time order, each is paired to the nearest
    unpaired B label within +/- window_s (ties to the earlier B label).
    Matching pairs merge at the average time; disagreeing pairs raise
    IdentityError and/or DataEntryError; a nearest counterpart only in the
    (window, 2*window] band raises TimeError; leftovers are MissedBites.
    Food identity comparison is exact but case-insensitive.
    """
    if window_s <= 0:
        raise ValueError(f"window_s must be > 0, got {window_s}")
    _check_sorted(labels_a, "labels_a")
    _check_sorted(labels_b, "labels_b")

    b_times = [b.t for b in labels_b]
    used = [False] * len(labels_b)
    merged: list[BiteLabel] = []
    conflicts: list[Conflict] = []
    seq = 0
    pair_seq = 0

    def cid() -> str:
        nonlocal seq
        seq += 1
        return f"{course_id}-c{seq:04d}"

    for a in labels_a:
        j = _nearest_unpaired(b_times, used, a.t, window_s)
        if j is not None:
            used[j] = True
            b = labels_b[j]
            food_match = a.food_id.lower() == b.food_id.lower()
            entry_match = (a.hand, a.utensil, a.container) == (b.hand, b.utensil, b.container)
            if food_match and entry_match:
                merged.append(_merge_pair(a, b))
            else:
                pair_seq += 1
                pid = f"{course_id}-p{pair_seq:04d}"
                if not food_match:
                    conflicts.append(Conflict(cid(), IDENTITY_ERROR, course_id, a, b, pid))
                if not entry_match:
                    conflicts.append(Conflict(cid(), DATA_ENTRY_ERROR, course_id, a, b, pid))
            continue
        j = _nearest_unpaired(b_times, used, a.t, 2.0 * window_s)
        if j is not None:
            used[j] = True
            pair_seq += 1
            pid = f"{course_id}-p{pair_seq:04d}"
            conflicts.append(Conflict(cid(), TIME_ERROR, course_id, a, labels_b[j], pid))
        else:
            conflicts.append(Conflict(cid(), MISSED_BITE, course_id, a, None))

    for j, b in enumerate(labels_b):
        if not used[j]:
            conflicts.append(Conflict(cid(), MISSED_BITE, course_id, None, b))

    merged.sort(key=lambda x: x.t)
    return GroundTruth(course_id, merged), conflicts


def _base_label(conflict: Conflict) -> BiteLabel:
    base = conflict.a if conflict.a is not None else conflict.b
    if conflict.a is not None and conflict.b is not None and conflict.kind != TIME_ERROR:
        base = replace(base, t=(conflict.a.t + conflict.b.t) / 2.0)
    return base


def _resolve_single(conflict: Conflict, decision: Adjudication) -> BiteLabel | None:
    if decision.resolution == "discard":
        return None
    if decision.resolution == "keep_a":
        if conflict.a is None:
            raise AdjudicationError(f"{conflict.conflict_id}: keep_a but side A is absent")
        return replace(conflict.a, rater_id=MERGED_RATER_ID)
    if decision.resolution == "keep_b":
        if conflict.b is None:
            raise AdjudicationError(f"{conflict.conflict_id}: keep_b but side B is absent")
        return replace(conflict.b, rater_id=MERGED_RATER_ID)
    base = _base_label(conflict)
    fields = dict(decision.fields or {})
    return BiteLabel(
        t=float(fields.get("t", base.t)),
        food_id=str(fields.get("food_id", base.food_id)),
        hand=str(fields.get("hand", base.hand)),
        utensil=str(fields.get("utensil", base.utensil)),
        container=str(fields.get("container", base.container)),
        rater_id=MERGED_RATER_ID,
    )


def _resolve_pair_group(group: list[tuple[Conflict, Adjudication]]) -> BiteLabel | None:
    """Assemble the merged bite for a pairing that raised identity and/or entry conflicts."""
    if any(d.resolution == "discard" for _, d in group):
        return None
    first = group[0][0]
    a, b = first.a, first.b
    bite = _merge_pair(a, b)
    for conflict, decision in group:
        if decision.resolution == "keep_a":
            src = a
        elif decision.resolution == "keep_b":
            src = b
        else:
            src = None
        fields = dict(decision.fields or {})
        if conflict.kind == IDENTITY_ERROR:
            food = src.food_id if src is not None else fields.get("food_id", bite.food_id)
            bite = replace(bite, food_id=str(food))
        else:  # DATA_ENTRY_ERROR covers hand/utensil/container collectively
            if src is not None:
                bite = replace(bite, hand=src.hand, utensil=src.utensil, container=src.container)
            else:
                bite = replace(
                    bite,
                    hand=str(fields.get("hand", bite.hand)),
                    utensil=str(fields.get("utensil", bite.utensil)),
                    container=str(fields.get("container", bite.container)),
                )
        if "t" in fields:
            bite = replace(bite, t=float(fields["t"]))
    return bite


def apply_adjudications(
    draft: GroundTruth,
    conflicts: list[Conflict],
    decisions: list[Adjudication],
) -> GroundTruth:
    """Fold third-rater decisions into the draft ground truth.

    Each decision must target a distinct known conflict. Conflicts sharing a
    pair materialize one bite only once every conflict of the pair is
    decided; a discard anywhere in the pair drops the bite. Conflicts
    without decisions simply stay open (see open_conflicts()).
    """
    by_id = {c.conflict_id: c for c in conflicts}
    decided: dict[str, Adjudication] = {}
    for d in decisions:
        if d.conflict_id not in by_id:
            raise AdjudicationError(f"decision targets unknown conflict {d.conflict_id!r}")
        if d.conflict_id in decided:
            raise AdjudicationError(f"duplicate decision for conflict {d.conflict_id!r}")
        decided[d.conflict_id] = d

    groups: dict[str, list[Conflict]] = {}
    for c in conflicts:
        groups.setdefault(c.pair_id or c.conflict_id, []).append(c)

    new_bites: list[BiteLabel] = []
    for members in groups.values():
        if not all(c.conflict_id in decided for c in members):
            continue
        if len(members) == 1 and members[0].pair_id is None:
            bite = _resolve_single(members[0], decided[members[0].conflict_id])
        elif members[0].kind == TIME_ERROR:
            bite = _resolve_single(members[0], decided[members[0].conflict_id])
        else:
            bite = _resolve_pair_group([(c, decided[c.conflict_id]) for c in members])
        if bite is not None:
            new_bites.append(bite)

    bites = sorted(draft.bites + new_bites, key=lambda x: x.t)
    return GroundTruth(draft.course_id, bites)


def open_conflicts(conflicts: list[Conflict], decisions: list[Adjudication]) -> list[Conflict]:
    decided = {d.conflict_id for d in decisions}
    return [c for c in conflicts if c.conflict_id not in decided]


@dataclass(frozen=True)
class ErrorReportRow:
    kind: str
    count: int
    percent: float


def error_report(conflicts: list[Conflict], total_bites: int) -> list[ErrorReportRow]:
    """Per-kind conflict counts with percent of total bites, one-decimal rounding."""
    if total_bites <= 0:
        raise ValueError(f"total_bites must be > 0, got {total_bites}")
    counts = {k: 0 for k in CONFLICT_KINDS}
    for c in conflicts:
        counts[c.kind] += 1
    return [
        ErrorReportRow(kind, counts[kind], round(100 * counts[kind] / total_bites, 1))
        for kind in CONFLICT_KINDS
    ]
