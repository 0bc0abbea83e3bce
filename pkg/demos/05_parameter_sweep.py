"""Tuning the refractory period: the sensitivity / PPV tradeoff.

On a fast-paced corpus (bites 8-10 s apart) a long refractory period (t4=8)
sits through every other bite. Shortening it to 6 s recovers those bites at
the cost of re-arming in time for distractor motions: sensitivity rises,
positive predictive value falls.
"""

import numpy as np

from bitewatch import DetectorParams, Distractor, GestureTemplate, MealScript, ScriptedBite, parameter_sweep, render

rng = np.random.default_rng(5)
template = GestureTemplate(pos_amp=40, neg_amp=40, lobe_dur_s=0.5, lobe_gap_s=2.5)

courses = []
for c in range(20):
    times, cursor = [], 4.0
    for _ in range(20):
        times.append(round(cursor, 3))
        cursor += rng.uniform(8.0, 10.0)
    last = times[-1]
    script = MealScript(
        course_id=f"c{c}",
        duration_s=last + 12.0,
        bites=[ScriptedBite(t=t, template=template) for t in times],
        distractors=[  # napkin-like pair in the course tail
            Distractor(t=round(last + 6.8, 3), amp=40.0),
            Distractor(t=round(last + 9.3, 3), amp=40.0, polarity=-1),
        ],
    )
    trace, truth = render(script, seed=c)
    courses.append((trace, truth.bites))

grid = [DetectorParams(t4=t4) for t4 in (6.0, 8.0)]
print(f"{'t4':>4}{'T':>6}{'F':>5}{'U':>6}{'sensitivity':>13}{'ppv':>8}")
for row in parameter_sweep(courses, grid):
    print(f"{row.params.t4:>4.0f}{row.t:>6}{row.f:>5}{row.u:>6}"
          f"{row.sensitivity:>13.3f}{row.ppv:>8.3f}")
