"""HTTP service backing the adjudication UI.

Read endpoints are side-effect free and always reflect the decision log as
of the request; decisions are validated, appended to a JSONL log (the only
mutable state), and visible to subsequent reads immediately. All routes
live under /v1.
"""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Literal

import numpy as np
from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import datafiles, pipeline
from .dataset import Dataset, participant_to_json
from .detector import DetectorParams, detect_course
from .errors import AdjudicationError, BitewatchError
from .groundtruth import Adjudication, MERGED_RATER_ID, apply_adjudications, open_conflicts
from .signals import SmoothingSpec, smooth

CHANNEL_INDEX = {"roll": 0, "pitch": 1, "yaw": 2, "ax": 3, "ay": 4, "az": 5}


class DecisionIn(BaseModel):
    resolution: Literal["keep_a", "keep_b", "custom", "discard"]
    judge_id: str
    fields: dict | None = None


class ReviewState:
    """Dataset plus the append-only decision log; single logical writer."""

    def __init__(self, dataset: Dataset, state_dir, smoothing: SmoothingSpec = SmoothingSpec()):
        self.dataset = dataset
        self.smoothing = smoothing
        self.state_dir = Path(state_dir)
        self.state_dir.mkdir(parents=True, exist_ok=True)
        self.log_path = self.state_dir / "decisions.jsonl"
        self._lock = threading.Lock()
        self._decisions: list[Adjudication] = pipeline.read_decisions_jsonl(self.log_path)
        self._smoothed_cache: dict[str, object] = {}
        # drafts/conflicts are deterministic per course given the label files
        self._matches = {}
        for course in dataset.courses:
            draft, conflicts, _ = pipeline.merge_course(course, [])
            self._matches[course.spec.course_id] = (draft, conflicts)

    def decisions_snapshot(self) -> list[Adjudication]:
        with self._lock:
            return list(self._decisions)

    def conflicts(self, status: str = "all", course_id: str | None = None):
        decided = {d.conflict_id for d in self.decisions_snapshot()}
        out = []
        for cid, (_, conflicts) in self._matches.items():
            if course_id is not None and cid != course_id:
                continue
            for c in conflicts:
                resolved = c.conflict_id in decided
                if status == "open" and resolved:
                    continue
                if status == "resolved" and not resolved:
                    continue
                obj = pipeline.conflict_to_json(c)
                obj["status"] = "resolved" if resolved else "open"
                out.append(obj)
        return out

    def _course_of_conflict(self, conflict_id: str) -> str:
        for cid, (_, conflicts) in self._matches.items():
            if any(c.conflict_id == conflict_id for c in conflicts):
                return cid
        raise LookupError(conflict_id)

    def decide(self, conflict_id: str, decision: DecisionIn) -> dict:
        course_id = self._course_of_conflict(conflict_id)
        adjudication = Adjudication(
            conflict_id=conflict_id,
            resolution=decision.resolution,
            judge_id=decision.judge_id,
            fields=decision.fields,
        )
        with self._lock:
            if any(d.conflict_id == conflict_id for d in self._decisions):
                raise AdjudicationError(f"duplicate decision for conflict {conflict_id!r}")
            # validate against the course state before persisting
            draft, conflicts = self._matches[course_id]
            ids = {c.conflict_id for c in conflicts}
            relevant = [d for d in self._decisions if d.conflict_id in ids]
            merged = apply_adjudications(draft, conflicts, relevant + [adjudication])
            self._decisions.append(adjudication)
            pipeline.append_decision_jsonl(self.log_path, adjudication)
        return {
            "conflict_id": conflict_id,
            "status": "resolved",
            "merged_count": len(merged.bites),
        }

    def merged(self, course_id: str):
        if course_id not in self._matches:
            raise LookupError(course_id)
        draft, conflicts = self._matches[course_id]
        decisions = self.decisions_snapshot()
        ids = {c.conflict_id for c in conflicts}
        relevant = [d for d in decisions if d.conflict_id in ids]
        merged = apply_adjudications(draft, conflicts, relevant)
        still_open = open_conflicts(conflicts, relevant)
        return merged, still_open

    def smoothed_trace(self, course_id: str):
        if course_id not in self._smoothed_cache:
            course = self.dataset.course(course_id)
            self._smoothed_cache[course_id] = smooth(course.trace, self.smoothing)
        return self._smoothed_cache[course_id]


def _decimate(t: np.ndarray, v: np.ndarray, max_points: int):
    """Min/max-per-bucket decimation preserving extremes, time-ordered."""
    n = t.shape[0]
    if n <= max_points:
        return [[datafiles.fmt_event_t(float(a)), float(b)] for a, b in zip(t, v)]
    n_buckets = max(max_points // 2, 1)
    edges = np.linspace(0, n, n_buckets + 1, dtype=int)
    pts = []
    for i in range(n_buckets):
        lo, hi = edges[i], edges[i + 1]
        if hi <= lo:
            continue
        seg = v[lo:hi]
        a, b = int(np.argmin(seg)) + lo, int(np.argmax(seg)) + lo
        for j in sorted({a, b}):
            pts.append([datafiles.fmt_event_t(float(t[j])), float(v[j])])
    return pts


def create_app(
    dataset: Dataset, state_dir, smoothing: SmoothingSpec = SmoothingSpec()
) -> FastAPI:
    state = ReviewState(dataset, state_dir, smoothing)
    app = FastAPI(title="bitewatch review service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.review = state

    @app.get("/v1/dataset")
    def get_dataset():
        return {
            "dataset_id": dataset.dataset_id,
            "participants": [participant_to_json(p) for p in dataset.participants.values()],
        }

    @app.get("/v1/courses")
    def get_courses():
        decided = {d.conflict_id for d in state.decisions_snapshot()}
        out = []
        for course in dataset.courses:
            cid = course.spec.course_id
            _, conflicts = state._matches[cid]
            n_open = sum(1 for c in conflicts if c.conflict_id not in decided)
            out.append(
                {
                    "course_id": cid,
                    "participant_id": course.spec.participant_id,
                    "n_samples": len(course.trace),
                    "duration_s": datafiles.fmt_event_t(course.trace.duration_s),
                    "raters": sorted(course.labels),
                    "menu": list(course.spec.menu),
                    "open_conflicts": n_open,
                }
            )
        return out

    def _course_or_404(course_id: str):
        try:
            return dataset.course(course_id)
        except BitewatchError:
            raise HTTPException(status_code=404, detail=f"unknown course {course_id!r}")

    @app.get("/v1/courses/{course_id}/signal")
    def get_signal(
        course_id: str,
        channel: str = Query("roll"),
        smoothed: bool = Query(True),
        max_points: int = Query(2000, ge=2, le=100000),
        t0: float | None = None,
        t1: float | None = None,
    ):
        course = _course_or_404(course_id)
        if channel not in CHANNEL_INDEX:
            raise HTTPException(status_code=400, detail=f"unknown channel {channel!r}")
        trace = state.smoothed_trace(course_id) if smoothed else course.trace
        idx = CHANNEL_INDEX[channel]
        values = trace.gyro[:, idx] if idx < 3 else trace.accel[:, idx - 3]
        t = trace.t
        mask = np.ones(len(trace), dtype=bool)
        if t0 is not None:
            mask &= t >= t0
        if t1 is not None:
            mask &= t <= t1
        return {
            "course_id": course_id,
            "channel": channel,
            "smoothed": smoothed,
            "n_total": int(mask.sum()),
            "points": _decimate(t[mask], values[mask], max_points),
        }

    @app.get("/v1/courses/{course_id}/labels")
    def get_labels(course_id: str, rater: str = Query(...)):
        course = _course_or_404(course_id)
        if rater == MERGED_RATER_ID:
            merged, still_open = state.merged(course_id)
            return {
                "course_id": course_id,
                "rater": rater,
                "open_conflicts": len(still_open),
                "labels": [datafiles.label_to_json(l) for l in merged.bites],
            }
        if rater not in course.labels:
            raise HTTPException(status_code=404, detail=f"unknown rater {rater!r}")
        return {
            "course_id": course_id,
            "rater": rater,
            "labels": [datafiles.label_to_json(l) for l in course.labels[rater]],
        }

    @app.get("/v1/courses/{course_id}/detections")
    def get_detections(
        course_id: str,
        t1: float = Query(10.0, gt=0),
        t2: float = Query(10.0, gt=0),
        t3: float = Query(2.0, ge=0),
        t4: float = Query(8.0, ge=0),
    ):
        _course_or_404(course_id)
        params = DetectorParams(t1=t1, t2=t2, t3=t3, t4=t4)
        trace = state.smoothed_trace(course_id)
        detections = detect_course(trace, params, smoothing=None)
        return {
            "course_id": course_id,
            "params": datafiles.params_to_json(params),
            "detections": [datafiles.fmt_event_t(d.t) for d in detections],
        }

    @app.get("/v1/conflicts")
    def get_conflicts(
        status: Literal["open", "resolved", "all"] = Query("open"),
        course: str | None = None,
    ):
        return {"conflicts": state.conflicts(status, course)}

    @app.post("/v1/conflicts/{conflict_id}/decision")
    def post_decision(conflict_id: str, decision: DecisionIn):
        try:
            return state.decide(conflict_id, decision)
        except LookupError:
            raise HTTPException(status_code=404, detail=f"unknown conflict {conflict_id!r}")
        except AdjudicationError as exc:
            if "duplicate" in str(exc):
                raise HTTPException(status_code=409, detail=str(exc))
            raise HTTPException(status_code=400, detail=str(exc))
        except (ValueError, BitewatchError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    return app
