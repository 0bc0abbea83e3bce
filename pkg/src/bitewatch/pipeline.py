"""End-to-end dataset processing: detect, merge, adjudicate, evaluate, report.

Artifacts are written to an output directory and are byte-reproducible for
unchanged inputs; a content fingerprint lets reruns skip work. Courses with
undecided rater conflicts are reported as blocked and excluded from
evaluation rather than silently scored against draft ground truth.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace
from pathlib import Path

from . import dataset as ds
from . import datafiles
from .detector import DetectorParams, detect_course
from .errors import BitewatchError, DatasetError
from .evaluation import (
    CourseEval,
    GROUP_KEYS,
    StratumRow,
    classify,
    stratified_report,
)
from .groundtruth import (
    Adjudication,
    Conflict,
    GroundTruth,
    MERGED_RATER_ID,
    apply_adjudications,
    error_report,
    match_raters,
    open_conflicts,
)
from .signals import SmoothingSpec, smooth
from .synth import MealScript, render, rater_views


def conflict_to_json(conflict: Conflict) -> dict:
    def side(label):
        return None if label is None else datafiles.label_to_json(label)

    center = conflict.a.t if conflict.a is not None else conflict.b.t
    return {
        "conflict_id": conflict.conflict_id,
        "kind": conflict.kind,
        "course_id": conflict.course_id,
        "a": side(conflict.a),
        "b": side(conflict.b),
        "pair_id": conflict.pair_id,
        "excerpt": {
            "channel": "roll",
            "smoothed": True,
            "start": datafiles.fmt_event_t(max(center - 5.0, 0.0)),
            "end": datafiles.fmt_event_t(center + 5.0),
        },
    }


def decision_to_json(decision: Adjudication) -> dict:
    return {
        "conflict_id": decision.conflict_id,
        "resolution": decision.resolution,
        "fields": decision.fields,
        "judge_id": decision.judge_id,
    }


def decision_from_json(obj: dict) -> Adjudication:
    return Adjudication(
        conflict_id=str(obj["conflict_id"]),
        resolution=str(obj["resolution"]),
        judge_id=str(obj["judge_id"]),
        fields=obj.get("fields"),
    )


def read_decisions_jsonl(path) -> list[Adjudication]:
    path = Path(path)
    if not path.exists():
        return []
    out = []
    for ln in path.read_text(encoding="utf-8").split("\n"):
        if ln.strip():
            out.append(decision_from_json(json.loads(ln)))
    return out


def append_decision_jsonl(path, decision: Adjudication) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps(decision_to_json(decision), sort_keys=True, separators=(",", ":")) + "\n")


@dataclass
class CourseArtifacts:
    course_id: str
    detections: list
    merged: GroundTruth | None
    conflicts: list[Conflict]
    open: list[Conflict]
    evaluation: CourseEval | None


@dataclass
class PipelineResult:
    out_dir: Path
    summary: dict
    courses: list[CourseArtifacts]
    reports: dict[str, list[StratumRow]]
    skipped: bool = False

    @property
    def blocked(self) -> list[str]:
        return [b["course_id"] for b in self.summary.get("blocked", [])]


def merge_course(course: ds.LoadedCourse, decisions, window_s: float = 1.0):
    """Two-rater merge plus adjudications for one loaded course.

    Courses with a single rater file adopt that file as merged truth.
    Returns (merged ground truth, all conflicts, still-open conflicts).
    """
    raters = sorted(course.labels)
    course_id = course.spec.course_id
    if len(raters) == 1:
        labels = [replace(l, rater_id=MERGED_RATER_ID) for l in course.labels[raters[0]]]
        return GroundTruth(course_id, labels), [], []
    if len(raters) != 2:
        raise DatasetError(f"{course_id}: expected 1 or 2 rater label files, got {len(raters)}")
    draft, conflicts = match_raters(
        course.labels[raters[0]], course.labels[raters[1]], window_s, course_id
    )
    ids = {c.conflict_id for c in conflicts}
    relevant = [d for d in decisions if d.conflict_id in ids]
    merged = apply_adjudications(draft, conflicts, relevant)
    return merged, conflicts, open_conflicts(conflicts, relevant)


def _fingerprint(dataset: ds.Dataset, params, smoothing, decisions, participant_weighted) -> str:
    h = hashlib.sha256()
    h.update(json.dumps(datafiles.params_to_json(params), sort_keys=True).encode())
    h.update(f"|{smoothing.window_width_s}|{smoothing.sigma_s}|{participant_weighted}".encode())
    for d in decisions:
        h.update(json.dumps(decision_to_json(d), sort_keys=True).encode())
    for spec in dataset.manifest.courses:
        h.update(spec.course_id.encode())
        h.update((dataset.root / spec.motion_csv).read_bytes())
        for rel in sorted(spec.labels.values()):
            h.update((dataset.root / rel).read_bytes())
    return h.hexdigest()


def _rows_to_json(rows: list[StratumRow]) -> list[dict]:
    return [
        {
            "key": r.key,
            "n_bites": r.n_bites,
            "n_detected": r.n_detected,
            "sensitivity": None if r.sensitivity is None else round(r.sensitivity, 6),
            "sensitivity_pct": r.sensitivity_pct,
            "spb": None if r.spb is None else round(r.spb, 6),
            "spb_display": r.spb_display,
        }
        for r in rows
    ]


def rows_to_tsv(rows: list[StratumRow]) -> str:
    lines = ["key\tn_bites\tn_detected\tsensitivity_pct\tspb"]
    for r in rows:
        pct = "-" if r.sensitivity_pct is None else str(r.sensitivity_pct)
        spb = "-" if r.spb_display is None else str(r.spb_display)
        lines.append(f"{r.key}\t{r.n_bites}\t{r.n_detected}\t{pct}\t{spb}")
    return "\n".join(lines) + "\n"


def run_pipeline(
    dataset: ds.Dataset,
    out_dir,
    params: DetectorParams = DetectorParams(),
    smoothing: SmoothingSpec = SmoothingSpec(),
    decisions: list[Adjudication] | None = None,
    force: bool = False,
    participant_weighted: bool = False,
) -> PipelineResult:
    """Process every course and persist detections, ground truth, and reports."""
    decisions = list(decisions or [])
    out_dir = Path(out_dir)
    state_dir = out_dir / ".state"
    fingerprint = _fingerprint(dataset, params, smoothing, decisions, participant_weighted)
    fp_path = state_dir / "fingerprint"
    summary_path = out_dir / "reports" / "summary.json"
    if not force and fp_path.exists() and summary_path.exists():
        if fp_path.read_text(encoding="utf-8").strip() == fingerprint:
            summary = datafiles.read_json(summary_path)
            return PipelineResult(out_dir, summary, [], {}, skipped=True)

    for sub in ("detections", "groundtruth", "conflicts", "reports"):
        (out_dir / sub).mkdir(parents=True, exist_ok=True)
    state_dir.mkdir(parents=True, exist_ok=True)

    course_artifacts: list[CourseArtifacts] = []
    evals: list[CourseEval] = []
    all_conflicts: list[Conflict] = []
    all_open: list[Conflict] = []
    blocked = []
    course_rows = []
    for course in dataset.courses:
        course_id = course.spec.course_id
        try:
            smoothed = smooth(course.trace, smoothing)
            detections = detect_course(smoothed, params, smoothing=None)
            datafiles.write_detections_jsonl(
                out_dir / "detections" / f"{course_id}.jsonl", course_id, detections, params
            )

            merged, conflicts, still_open = merge_course(course, decisions)
            all_conflicts.extend(conflicts)
            all_open.extend(still_open)

            if still_open:
                blocked.append({"course_id": course_id, "open_conflicts": len(still_open)})
                course_artifacts.append(
                    CourseArtifacts(course_id, detections, None, conflicts, still_open, None)
                )
                continue

            datafiles.write_labels_jsonl(
                out_dir / "groundtruth" / f"{course_id}.jsonl", datafiles.quantize_labels(merged.bites)
            )
            outcome = classify(
                detections,
                merged,
                course_start=float(course.trace.t[0]) if len(course.trace) else 0.0,
                course_end=float(course.trace.t[-1]) if len(course.trace) else 0.0,
            )
        except BitewatchError as exc:
            exc.args = (f"[course {course_id}] {exc}",)
            raise
        ev = CourseEval(
            course_id=course_id,
            participant_id=course.spec.participant_id,
            bites=merged.bites,
            outcome=outcome,
            duration_s=course.trace.duration_s,
        )
        evals.append(ev)
        course_artifacts.append(CourseArtifacts(course_id, detections, merged, conflicts, [], ev))
        course_rows.append(
            {
                "course_id": course_id,
                "participant_id": course.spec.participant_id,
                "n_detections": len(detections),
                "n_bites": len(merged.bites),
                "t": outcome.t_count,
                "f": outcome.f_count,
                "u": outcome.u_count,
                "duration_s": round(course.trace.duration_s, 3),
            }
        )

    datafiles.write_json(out_dir / "conflicts" / "open.json", [conflict_to_json(c) for c in all_open])

    t = sum(e.outcome.t_count for e in evals)
    f = sum(e.outcome.f_count for e in evals)
    u = sum(e.outcome.u_count for e in evals)
    total_bites = sum(len(e.bites) for e in evals)
    total_duration = sum(e.duration_s for e in evals)
    summary = {
        "dataset_id": dataset.dataset_id,
        "params": datafiles.params_to_json(params),
        "smoothing": {"window_width_s": smoothing.window_width_s, "sigma_s": smoothing.sigma_s},
        "n_courses": len(dataset.courses),
        "n_evaluated": len(evals),
        "blocked": blocked,
        "totals": {"t": t, "f": f, "u": u, "bites": total_bites},
        "sensitivity": round(t / (t + u), 6) if (t + u) else None,
        "ppv": round(t / (t + f), 6) if (t + f) else None,
        "spb": round(total_duration / total_bites, 6) if total_bites else None,
        "courses": course_rows,
    }
    datafiles.write_json(summary_path, summary)

    if all_conflicts and total_bites:
        rows = error_report(all_conflicts, total_bites)
        datafiles.write_json(
            out_dir / "reports" / "error_report.json",
            [{"kind": r.kind, "count": r.count, "percent": r.percent} for r in rows],
        )

    reports: dict[str, list[StratumRow]] = {}
    for key in GROUP_KEYS:
        rows = stratified_report(evals, dataset.participants, key, participant_weighted)
        reports[key] = rows
        datafiles.write_json(out_dir / "reports" / f"by_{key}.json", _rows_to_json(rows))
        (out_dir / "reports" / f"by_{key}.tsv").write_text(
            rows_to_tsv(rows), encoding="utf-8", newline="\n"
        )

    fp_path.write_text(fingerprint + "\n", encoding="utf-8", newline="\n")
    return PipelineResult(out_dir, summary, course_artifacts, reports)


def write_synth_dataset(
    out_dir,
    courses: list[tuple],
    dataset_id: str = "synth",
    rate_hz: float = 15.0,
    seed: int = 0,
    rater_ids: tuple[str, str] = ("rater_a", "rater_b"),
    perturb_b=None,
) -> Path:
    """Render (participant, script) pairs into an on-disk dataset.

    Both rater files default to the rendered truth; perturb_b(labels) may
    derail rater B's copy to provoke conflicts. Returns the manifest path.
    """
    out_dir = Path(out_dir)
    (out_dir / "motion").mkdir(parents=True, exist_ok=True)
    (out_dir / "labels").mkdir(parents=True, exist_ok=True)

    participants: dict[str, object] = {}
    specs = []
    for idx, (participant, script) in enumerate(courses):
        participants[participant.id] = participant
        trace, truth = render(script, rate_hz, seed=seed + idx)
        course_id = script.course_id
        motion_rel = f"motion/{course_id}.csv"
        datafiles.write_motion_csv(out_dir / motion_rel, trace)
        a, b = rater_views(truth, rater_ids)
        if perturb_b is not None:
            b = perturb_b(b)
        label_rels = {}
        for rater, labels in ((rater_ids[0], a), (rater_ids[1], b)):
            rel = f"labels/{course_id}.{rater}.jsonl"
            datafiles.write_labels_jsonl(out_dir / rel, datafiles.quantize_labels(labels))
            label_rels[rater] = rel
        menu = tuple(sorted({bite.food_id for bite in script.bites})) or ("synthetic meal",)
        specs.append(
            ds.CourseSpec(
                course_id=course_id,
                participant_id=participant.id,
                motion_csv=motion_rel,
                labels=label_rels,
                menu=menu,
            )
        )

    manifest = ds.DatasetManifest(dataset_id, participants, specs)
    manifest_path = out_dir / "manifest.json"
    ds.write_manifest(manifest_path, manifest)
    return manifest_path


def build_scripts_from_labels(course_id: str, duration_s: float, labels) -> MealScript:
    """Convenience for tests/demos: a script whose bites mirror given labels."""
    from .synth import ScriptedBite

    bites = [
        ScriptedBite(t=l.t, food_id=l.food_id, hand=l.hand, utensil=l.utensil, container=l.container)
        for l in labels
    ]
    return MealScript(course_id=course_id, duration_s=duration_s, bites=bites)
