"""End to end: synth corpus on disk -> pipeline artifacts -> review service.

Writes a two-participant dataset (with rater B disagreeing on one container
per course), runs the pipeline once to show blocked courses, adjudicates,
and reruns to produce the full report set. Prints how to browse the same
dataset through the HTTP review service.
"""

import json
import tempfile
from dataclasses import replace
from pathlib import Path

from bitewatch import Adjudication, CohortProfile, Participant, cohort
from bitewatch.dataset import load_dataset
from bitewatch.pipeline import run_pipeline, write_synth_dataset

workdir = Path(tempfile.mkdtemp(prefix="bitewatch-demo-"))
profiles = [
    CohortProfile(Participant("dana", "female", 47, "Caucasian", "right"),
                  spb_mean=15.0, spb_std=2.0, n_bites=14, menu=("pasta tour of italy",)),
    CohortProfile(Participant("eli", "male", 26, "Other", "left"),
                  spb_mean=11.0, spb_std=1.0, n_bites=16, menu=("custom sandwich",)),
]


def sloppy_rater_b(labels):
    return [replace(l, container="bowl") if i == 0 else l for i, l in enumerate(labels)]


manifest = write_synth_dataset(workdir / "dataset", cohort(profiles, seed=3), seed=3,
                               perturb_b=sloppy_rater_b)
print(f"dataset written under {workdir / 'dataset'}")

dataset = load_dataset(manifest)
result = run_pipeline(dataset, workdir / "artifacts")
print(f"first run: {len(result.blocked)} courses blocked on open conflicts")

decisions = []
for artifacts in result.courses:
    decisions.extend(Adjudication(c.conflict_id, "keep_a", judge_id="demo-judge")
                     for c in artifacts.open)
result = run_pipeline(dataset, workdir / "artifacts", decisions=decisions)
print(f"after adjudication: sensitivity={result.summary['sensitivity']}, "
      f"ppv={result.summary['ppv']}")

print("\nartifacts:")
for p in sorted((workdir / "artifacts").rglob("*")):
    if p.is_file():
        print(f"  {p.relative_to(workdir)}")

gender_rows = json.loads((workdir / "artifacts" / "reports" / "by_gender.json").read_text())
print("\nby_gender.json:", json.dumps(gender_rows, indent=2)[:400], "...")

print(f"""
to review conflicts interactively:
  bitewatch serve {manifest} --port 8141
then open the adjudication UI (frontend/) against http://127.0.0.1:8141
""")
