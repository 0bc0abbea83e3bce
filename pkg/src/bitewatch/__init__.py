"""bitewatch: a workbench for wrist-motion bite counting experiments.

Core surface: motion traces and Gaussian smoothing (signals), the roll
threshold state machine (detector), two-rater label merging and
adjudication (groundtruth), detection scoring and stratified reports
(evaluation), synthetic corpora (synth), and file/dataset/pipeline/service
plumbing (datafiles, dataset, pipeline, server, cli).
"""

from .detector import Detection, DetectorParams, DetectorState, detect_course, reset, step
from .errors import BitewatchError
from .evaluation import (
    CourseEval,
    EvalOutcome,
    Participant,
    StratumRow,
    classify,
    motion_amount,
    parameter_sweep,
    pearson_correlation,
    per_food_analysis,
    seconds_per_bite,
    stratified_report,
)
from .groundtruth import (
    Adjudication,
    BiteLabel,
    Conflict,
    GroundTruth,
    apply_adjudications,
    error_report,
    match_raters,
)
from .signals import (
    Anomaly,
    MotionSample,
    MotionTrace,
    SmoothingSpec,
    smooth,
    smoothing_kernel,
    validate_trace,
)
from .synth import CohortProfile, Distractor, GestureTemplate, MealScript, ScriptedBite, cohort, render

__version__ = "0.1.0"

__all__ = [
    "Adjudication",
    "Anomaly",
    "BiteLabel",
    "BitewatchError",
    "CohortProfile",
    "Conflict",
    "CourseEval",
    "Detection",
    "DetectorParams",
    "DetectorState",
    "Distractor",
    "EvalOutcome",
    "GestureTemplate",
    "GroundTruth",
    "MealScript",
    "MotionSample",
    "MotionTrace",
    "Participant",
    "ScriptedBite",
    "SmoothingSpec",
    "StratumRow",
    "apply_adjudications",
    "classify",
    "cohort",
    "detect_course",
    "error_report",
    "match_raters",
    "motion_amount",
    "parameter_sweep",
    "pearson_correlation",
    "per_food_analysis",
    "render",
    "reset",
    "seconds_per_bite",
    "smooth",
    "smoothing_kernel",
    "stratified_report",
    "step",
    "validate_trace",
]
