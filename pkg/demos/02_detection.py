"""The four-event wrist-roll state machine on a scripted meal.

Two real gestures plus a napkin-like distractor blip. The distractor arms
the machine (roll exceeds +t1) but never completes the negative roll, so
only the true bites are detected.
"""

from bitewatch import (
    DetectorParams,
    Distractor,
    MealScript,
    ScriptedBite,
    detect_course,
    render,
    reset,
    smooth,
    step,
)

script = MealScript(
    course_id="demo",
    duration_s=60.0,
    bites=[ScriptedBite(t=15.0), ScriptedBite(t=40.0)],
    distractors=[Distractor(t=27.0, amp=35.0)],
)
trace, truth = render(script)

params = DetectorParams()  # t1=t2=10 deg/s, t3=2 s, t4=8 s
detections = detect_course(trace, params)
print("true bites:  ", [b.t for b in truth.bites])
print("detections:  ", [round(d.t, 2) for d in detections])

# the same thing, streamed sample by sample with visible state transitions
smoothed = smooth(trace)
state = reset()
last_event = state.event
names = {0: "idle", 1: "rolled_positive", 2: "refractory"}
print("\nstate transitions while streaming:")
for t, vt in zip(smoothed.t, smoothed.roll):
    state, det = step(state, float(t), float(vt), params)
    if state.event != last_event:
        print(f"  t={t:6.2f}s  {names[last_event]:>15} -> {names[state.event]}"
              + ("   BITE" if det else ""))
        last_event = state.event
