"""Dataset manifests: participants, courses, and validated loading.

A manifest is a JSON file listing participants and courses; each course
references one motion CSV, one labels JSONL per rater, and the menu of
foods available during that course. Loading verifies every reference and
reports problems with distinct error types.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from . import datafiles
from .errors import DanglingReferenceError, DatasetError, EnumValueError, MissingFileError
from .evaluation import Participant
from .groundtruth import BiteLabel, CONTAINERS, HANDS, UTENSILS
from .signals import Anomaly, MotionTrace, validate_trace

GENDERS = ("female", "male")
DOMINANT_HANDS = ("left", "right")


@dataclass
class CourseSpec:
    course_id: str
    participant_id: str
    motion_csv: str
    labels: dict[str, str]  # rater id -> JSONL path
    menu: tuple[str, ...]


@dataclass
class DatasetManifest:
    dataset_id: str
    participants: dict[str, Participant]
    courses: list[CourseSpec]


@dataclass
class LoadedCourse:
    spec: CourseSpec
    trace: MotionTrace
    labels: dict[str, list[BiteLabel]]
    anomalies: list[Anomaly] = field(default_factory=list)


@dataclass
class Dataset:
    root: Path
    manifest: DatasetManifest
    courses: list[LoadedCourse]

    @property
    def dataset_id(self) -> str:
        return self.manifest.dataset_id

    @property
    def participants(self) -> dict[str, Participant]:
        return self.manifest.participants

    def course(self, course_id: str) -> LoadedCourse:
        for c in self.courses:
            if c.spec.course_id == course_id:
                return c
        raise DanglingReferenceError("course", course_id)


def participant_to_json(p: Participant) -> dict:
    return {
        "id": p.id,
        "gender": p.gender,
        "age": p.age,
        "ethnicity": p.ethnicity,
        "dominant_hand": p.dominant_hand,
        "height_cm": p.height_cm,
        "weight_kg": p.weight_kg,
    }


def participant_from_json(obj: dict) -> Participant:
    gender = str(obj["gender"])
    if gender not in GENDERS:
        raise EnumValueError("gender", gender, GENDERS)
    dominant = str(obj["dominant_hand"])
    if dominant not in DOMINANT_HANDS:
        raise EnumValueError("dominant_hand", dominant, DOMINANT_HANDS)
    return Participant(
        id=str(obj["id"]),
        gender=gender,
        age=int(obj["age"]),
        ethnicity=str(obj["ethnicity"]),
        dominant_hand=dominant,
        height_cm=obj.get("height_cm"),
        weight_kg=obj.get("weight_kg"),
    )


def read_manifest(path) -> DatasetManifest:
    path = Path(path)
    if not path.exists():
        raise MissingFileError(path)
    obj = datafiles.read_json(path)
    participants = {}
    for p in obj.get("participants", []):
        participant = participant_from_json(p)
        participants[participant.id] = participant
    courses = []
    seen = set()
    for c in obj.get("courses", []):
        course_id = str(c["course_id"])
        if course_id in seen:
            raise DatasetError(f"duplicate course id {course_id!r}")
        seen.add(course_id)
        courses.append(
            CourseSpec(
                course_id=course_id,
                participant_id=str(c["participant_id"]),
                motion_csv=str(c["motion_csv"]),
                labels={str(k): str(v) for k, v in c["labels"].items()},
                menu=tuple(str(m) for m in c.get("menu", [])),
            )
        )
    return DatasetManifest(str(obj["dataset_id"]), participants, courses)


def write_manifest(path, manifest: DatasetManifest) -> None:
    obj = {
        "dataset_id": manifest.dataset_id,
        "participants": [participant_to_json(p) for p in manifest.participants.values()],
        "courses": [
            {
                "course_id": c.course_id,
                "participant_id": c.participant_id,
                "motion_csv": c.motion_csv,
                "labels": c.labels,
                "menu": list(c.menu),
            }
            for c in manifest.courses
        ],
    }
    datafiles.write_json(path, obj)


def _check_label_enums(label_obj: dict, menu: tuple[str, ...], path: Path) -> None:
    hand = str(label_obj["hand"])
    if hand not in HANDS:
        raise EnumValueError("hand", hand, HANDS)
    utensil = str(label_obj["utensil"])
    if utensil not in UTENSILS:
        raise EnumValueError("utensil", utensil, UTENSILS)
    container = str(label_obj["container"])
    if container not in CONTAINERS:
        raise EnumValueError("container", container, CONTAINERS)
    if menu:
        food = str(label_obj["food_id"]).lower()
        if food not in {m.lower() for m in menu}:
            raise DatasetError(f"{path}: food {label_obj['food_id']!r} not on course menu {list(menu)}")


def load_dataset(manifest_path) -> Dataset:
    """Load and verify a dataset; raises distinct errors per problem kind.

    Trace anomalies (gaps etc.) are collected per course as data, not errors.
    """
    manifest_path = Path(manifest_path)
    manifest = read_manifest(manifest_path)
    root = manifest_path.parent

    courses: list[LoadedCourse] = []
    for spec in manifest.courses:
        if spec.participant_id not in manifest.participants:
            raise DanglingReferenceError("participant", spec.participant_id)
        motion_path = root / spec.motion_csv
        if not motion_path.exists():
            raise MissingFileError(motion_path)
        trace = datafiles.read_motion_csv(motion_path)
        labels: dict[str, list[BiteLabel]] = {}
        for rater, rel in spec.labels.items():
            label_path = root / rel
            if not label_path.exists():
                raise MissingFileError(label_path)
            loaded = []
            for ln in label_path.read_text(encoding="utf-8").split("\n"):
                if not ln.strip():
                    continue
                obj = json.loads(ln)
                _check_label_enums(obj, spec.menu, label_path)
                loaded.append(datafiles.label_from_json(obj))
            labels[rater] = loaded
        courses.append(LoadedCourse(spec, trace, labels, validate_trace(trace)))
    return Dataset(root, manifest, courses)
