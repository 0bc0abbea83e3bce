"""bitewatch command line: validate, detect, merge, evaluate, report, sweep, synth, serve.

Exit codes: 0 ok, 1 data error, 2 usage error. The output root defaults to
the BITEWATCH_OUT environment variable (falling back to ./bitewatch-out).
"""

from __future__ import annotations

import itertools
import os
import sys
from pathlib import Path

import click

from . import datafiles, dataset as ds, pipeline
from .detector import DetectorParams, detect_course
from .errors import BitewatchError
from .evaluation import GROUP_KEYS, parameter_sweep, stratified_report
from .groundtruth import error_report as build_error_report
from .signals import SmoothingSpec, smooth, validate_trace
from .synth import CohortProfile, cohort as build_cohort, script_from_json, template_from_json


def _out_root(value: str | None) -> Path:
    return Path(value or os.environ.get("BITEWATCH_OUT", "bitewatch-out"))


def parse_axis(spec: str) -> list[float]:
    """Grid axis syntax: '6,8' (list), '8:12:1' (inclusive range), or '10'."""
    spec = spec.strip()
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise click.UsageError(f"range axis must be lo:hi:step, got {spec!r}")
        lo, hi, step = (float(p) for p in parts)
        if step <= 0 or hi < lo:
            raise click.UsageError(f"bad range axis {spec!r}")
        vals = []
        x = lo
        while x <= hi + 1e-9:
            vals.append(round(x, 9))
            x += step
        return vals
    return [float(p) for p in spec.split(",") if p.strip()]


def _params_options(fn):
    for opt, default in (("--t4", 8.0), ("--t3", 2.0), ("--t2", 10.0), ("--t1", 10.0)):
        fn = click.option(opt, type=float, default=default, show_default=True)(fn)
    return fn


def _smoothing_options(fn):
    fn = click.option("--sigma", type=float, default=2.0 / 3.0, show_default=True,
                      help="Gaussian std in seconds")(fn)
    fn = click.option("--window", type=float, default=1.0, show_default=True,
                      help="smoothing window width in seconds")(fn)
    return fn


@click.group()
def cli():
    """Wrist-motion bite counting workbench."""


@cli.command()
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
def validate(manifest):
    """Load a dataset manifest and report trace anomalies."""
    data = ds.load_dataset(manifest)
    n_anomalies = 0
    for course in data.courses:
        for anomaly in course.anomalies:
            click.echo(f"{course.spec.course_id}: {anomaly}")
            n_anomalies += 1
    click.echo(f"{len(data.courses)} courses, {n_anomalies} anomalies")
    if n_anomalies:
        sys.exit(1)


@cli.command("smooth")
@click.option("--motion", "motion_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@_smoothing_options
@click.option("--rate", type=float, default=15.0, show_default=True)
def smooth_cmd(motion_path, out_path, window, sigma, rate):
    """Gaussian-smooth a motion CSV into a new CSV."""
    trace = datafiles.read_motion_csv(motion_path, rate)
    smoothed = smooth(trace, SmoothingSpec(window, sigma))
    datafiles.write_motion_csv(out_path, smoothed)
    click.echo(f"wrote {out_path} ({len(smoothed)} samples)")


@cli.command()
@click.argument("manifest", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--motion", "motion_path", type=click.Path(exists=True, dir_okay=False),
              help="detect on a single motion CSV instead of a manifest")
@click.option("--out", "out_path", type=click.Path(), default=None)
@_params_options
@_smoothing_options
@click.option("--no-smoothing", is_flag=True, help="detect on the raw signal")
def detect(manifest, motion_path, out_path, t1, t2, t3, t4, window, sigma, no_smoothing):
    """Run the bite detector and write detections JSONL."""
    params = DetectorParams(t1, t2, t3, t4)
    spec = None if no_smoothing else SmoothingSpec(window, sigma)
    if motion_path:
        trace = datafiles.read_motion_csv(motion_path)
        detections = detect_course(trace, params, spec)
        out = Path(out_path or (Path(motion_path).with_suffix(".detections.jsonl")))
        datafiles.write_detections_jsonl(out, Path(motion_path).stem, detections, params)
        click.echo(f"wrote {out} ({len(detections)} detections)")
        return
    if not manifest:
        raise click.UsageError("pass a MANIFEST or --motion CSV")
    data = ds.load_dataset(manifest)
    out_dir = _out_root(out_path) / "detections"
    out_dir.mkdir(parents=True, exist_ok=True)
    total = 0
    for course in data.courses:
        detections = detect_course(course.trace, params, spec)
        datafiles.write_detections_jsonl(
            out_dir / f"{course.spec.course_id}.jsonl", course.spec.course_id, detections, params
        )
        total += len(detections)
    click.echo(f"wrote {len(data.courses)} files to {out_dir} ({total} detections)")


@cli.command()
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", type=click.Path(), default=None)
@click.option("--window", type=float, default=1.0, show_default=True,
              help="rater pairing window in seconds")
@click.option("--decisions", "decisions_path", type=click.Path(exists=True, dir_okay=False))
def merge(manifest, out_path, window, decisions_path):
    """Merge the two raters' labels per course; write drafts and conflicts."""
    data = ds.load_dataset(manifest)
    decisions = pipeline.read_decisions_jsonl(decisions_path) if decisions_path else []
    out_dir = _out_root(out_path)
    (out_dir / "groundtruth").mkdir(parents=True, exist_ok=True)
    (out_dir / "conflicts").mkdir(parents=True, exist_ok=True)
    n_conflicts = 0
    all_open = []
    for course in data.courses:
        merged, conflicts, still_open = pipeline.merge_course(course, decisions, window)
        datafiles.write_labels_jsonl(
            out_dir / "groundtruth" / f"{course.spec.course_id}.jsonl",
            datafiles.quantize_labels(merged.bites),
        )
        n_conflicts += len(conflicts)
        all_open.extend(pipeline.conflict_to_json(c) for c in still_open)
    datafiles.write_json(out_dir / "conflicts" / "open.json", all_open)
    click.echo(f"merged {len(data.courses)} courses: {n_conflicts} conflicts, {len(all_open)} open")


@cli.command("error-report")
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
@click.option("--decisions", "decisions_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--total-bites", type=int, default=None,
              help="denominator; defaults to the pooled merged bite count")
def error_report_cmd(manifest, decisions_path, total_bites):
    """Print rater-disagreement counts and rates."""
    data = ds.load_dataset(manifest)
    decisions = pipeline.read_decisions_jsonl(decisions_path) if decisions_path else []
    conflicts = []
    merged_total = 0
    for course in data.courses:
        merged, course_conflicts, _ = pipeline.merge_course(course, decisions)
        conflicts.extend(course_conflicts)
        merged_total += len(merged.bites)
    total = total_bites if total_bites is not None else merged_total
    if total <= 0:
        raise BitewatchError("no bites to report against; pass --total-bites")
    for row in build_error_report(conflicts, total):
        click.echo(f"{row.kind}\t{row.count}\t{row.percent}%")


def _evaluated(data, params, spec, decisions, participant_weighted, out_dir, force):
    return pipeline.run_pipeline(
        data, out_dir, params, spec, decisions,
        force=force, participant_weighted=participant_weighted,
    )


@cli.command()
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", type=click.Path(), default=None)
@_params_options
@_smoothing_options
@click.option("--decisions", "decisions_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--participant-weighted", is_flag=True, help="SPB averaged per participant")
@click.option("--force", is_flag=True, help="recompute even if inputs are unchanged")
def evaluate(manifest, out_path, t1, t2, t3, t4, window, sigma, decisions_path,
             participant_weighted, force):
    """Run the full pipeline and persist detections, ground truth, and reports."""
    data = ds.load_dataset(manifest)
    decisions = pipeline.read_decisions_jsonl(decisions_path) if decisions_path else []
    result = _evaluated(
        data, DetectorParams(t1, t2, t3, t4), SmoothingSpec(window, sigma),
        decisions, participant_weighted, _out_root(out_path), force,
    )
    s = result.summary
    if result.skipped:
        click.echo("inputs unchanged; reusing existing artifacts")
    if s["blocked"]:
        ids = ", ".join(b["course_id"] for b in s["blocked"])
        click.echo(f"blocked courses (unresolved conflicts): {ids}")
    sens = "-" if s["sensitivity"] is None else f"{s['sensitivity']:.3f}"
    ppv = "-" if s["ppv"] is None else f"{s['ppv']:.3f}"
    click.echo(
        f"courses={s['n_evaluated']}/{s['n_courses']} bites={s['totals']['bites']} "
        f"T={s['totals']['t']} F={s['totals']['f']} U={s['totals']['u']} "
        f"sensitivity={sens} ppv={ppv}"
    )
    click.echo(f"artifacts in {result.out_dir}")


@cli.command()
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
@click.option("--by", "group_by", required=True, type=click.Choice(GROUP_KEYS))
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="write TSV here instead of stdout")
@_params_options
@_smoothing_options
@click.option("--decisions", "decisions_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--participant-weighted", is_flag=True)
def report(manifest, group_by, out_path, t1, t2, t3, t4, window, sigma,
           decisions_path, participant_weighted):
    """Print a stratified sensitivity/SPB table."""
    data = ds.load_dataset(manifest)
    decisions = pipeline.read_decisions_jsonl(decisions_path) if decisions_path else []
    evals = []
    from .evaluation import CourseEval, classify

    params = DetectorParams(t1, t2, t3, t4)
    spec = SmoothingSpec(window, sigma)
    blocked = []
    for course in data.courses:
        merged, _, still_open = pipeline.merge_course(course, decisions)
        if still_open:
            blocked.append(course.spec.course_id)
            continue
        detections = detect_course(course.trace, params, spec)
        outcome = classify(
            detections, merged,
            course_start=float(course.trace.t[0]) if len(course.trace) else 0.0,
            course_end=float(course.trace.t[-1]) if len(course.trace) else 0.0,
        )
        evals.append(CourseEval(course.spec.course_id, course.spec.participant_id,
                                merged.bites, outcome, course.trace.duration_s))
    if blocked:
        click.echo(f"# blocked courses excluded: {', '.join(blocked)}", err=True)
    rows = stratified_report(evals, data.participants, group_by, participant_weighted)
    text = pipeline.rows_to_tsv(rows)
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8", newline="\n")
        click.echo(f"wrote {out_path}")
    else:
        click.echo(text, nl=False)


@cli.command()
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
@click.option("--t1", default="10", show_default=True, help="axis: list a,b or range lo:hi:step")
@click.option("--t2", default="10", show_default=True)
@click.option("--t3", default="2", show_default=True)
@click.option("--t4", default="8", show_default=True)
@_smoothing_options
@click.option("--decisions", "decisions_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
def sweep(manifest, t1, t2, t3, t4, window, sigma, decisions_path, out_path):
    """Grid-sweep detector parameters; rows pooled over all courses."""
    data = ds.load_dataset(manifest)
    decisions = pipeline.read_decisions_jsonl(decisions_path) if decisions_path else []
    courses = []
    for course in data.courses:
        merged, _, still_open = pipeline.merge_course(course, decisions)
        if still_open:
            raise BitewatchError(f"course {course.spec.course_id} has unresolved conflicts")
        courses.append((course.trace, merged.bites))
    grid = [
        DetectorParams(a, b, c, d)
        for a, b, c, d in itertools.product(
            parse_axis(t1), parse_axis(t2), parse_axis(t3), parse_axis(t4)
        )
    ]
    rows = parameter_sweep(courses, grid, SmoothingSpec(window, sigma))
    lines = ["t1\tt2\tt3\tt4\tT\tF\tU\tsensitivity\tppv"]
    for r in rows:
        sens = "-" if r.sensitivity is None else f"{r.sensitivity:.4f}"
        ppv = "-" if r.ppv is None else f"{r.ppv:.4f}"
        p = r.params
        lines.append(f"{p.t1:g}\t{p.t2:g}\t{p.t3:g}\t{p.t4:g}\t{r.t}\t{r.f}\t{r.u}\t{sens}\t{ppv}")
    text = "\n".join(lines) + "\n"
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8", newline="\n")
        click.echo(f"wrote {out_path}")
    else:
        click.echo(text, nl=False)


@cli.group()
def synth():
    """Generate synthetic corpora."""


@synth.command("render")
@click.option("--script", "script_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(file_okay=False), required=True)
@click.option("--rate", type=float, default=15.0, show_default=True)
def synth_render(script_path, seed, out_path, rate):
    """Render one meal script into a single-course dataset."""
    from .evaluation import Participant

    obj = datafiles.read_json(script_path)
    script = script_from_json(obj)
    participant = (
        ds.participant_from_json(obj["participant"])
        if "participant" in obj
        else Participant("p1", "female", 30, "Caucasian", "right")
    )
    manifest_path = pipeline.write_synth_dataset(
        out_path, [(participant, script)], dataset_id=script.course_id, rate_hz=rate, seed=seed
    )
    click.echo(f"wrote {manifest_path}")


@synth.command("cohort")
@click.option("--profiles", "profiles_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(file_okay=False), required=True)
@click.option("--rate", type=float, default=15.0, show_default=True)
def synth_cohort(profiles_path, seed, out_path, rate):
    """Render a multi-participant cohort described by a profiles JSON."""
    obj = datafiles.read_json(profiles_path)
    profiles = []
    for p in obj["profiles"]:
        profiles.append(
            CohortProfile(
                participant=ds.participant_from_json(p["participant"]),
                spb_mean=float(p["spb_mean"]),
                spb_std=float(p.get("spb_std", 0.0)),
                n_bites=int(p.get("n_bites", 20)),
                n_courses=int(p.get("n_courses", 1)),
                template=template_from_json(p.get("template")),
                menu=tuple(p.get("menu", ["synthetic meal"])),
                noise_std=float(p.get("noise_std", 0.0)),
            )
        )
    courses = build_cohort(profiles, seed=seed, rate_hz=rate)
    manifest_path = pipeline.write_synth_dataset(
        out_path, courses, dataset_id=str(obj.get("dataset_id", "cohort")), rate_hz=rate, seed=seed
    )
    click.echo(f"wrote {manifest_path} ({len(courses)} courses)")


@cli.command()
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8141, show_default=True)
@click.option("--state-dir", type=click.Path(file_okay=False), default=None,
              help="where the decision log lives [default: <out root>/review]")
@click.option("--check", is_flag=True, help="build the app and exit without serving")
def serve(manifest, host, port, state_dir, check):
    """Serve the /v1 review API for the adjudication UI."""
    from .server import create_app

    data = ds.load_dataset(manifest)
    state = Path(state_dir) if state_dir else _out_root(None) / "review"
    app = create_app(data, state)
    if check:
        click.echo(f"ok: {len(app.routes)} routes, state dir {state}")
        return
    import uvicorn

    uvicorn.run(app, host=host, port=port)


def main():
    try:
        cli.main(standalone_mode=True)
    except BitewatchError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
