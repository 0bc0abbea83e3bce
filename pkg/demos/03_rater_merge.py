"""Two-rater label merging, conflict classification, and adjudication.

Rater B disagrees with rater A three different ways: a renamed food, a
mislabeled container, and a bite A never marked. Matching surfaces each as
a typed conflict; a third rater's decisions produce the final merged truth.
"""

from bitewatch import Adjudication, BiteLabel, apply_adjudications, error_report, match_raters
from bitewatch.groundtruth import open_conflicts


def bite(t, food="cheese pizza", container="plate", rater="a"):
    return BiteLabel(t=t, food_id=food, hand="right", utensil="fork",
                     container=container, rater_id=rater)


rater_a = [bite(10.0), bite(25.0), bite(42.0, food="sweet tea", container="glass")]
rater_b = [
    bite(10.4, rater="b"),                        # clean match, 0.4 s apart
    bite(25.2, food="hamburger", rater="b"),      # identity disagreement
    bite(33.0, rater="b"),                        # bite A missed entirely
    bite(41.8, food="sweet tea", container="mug", rater="b"),  # container slip
]

draft, conflicts = match_raters(rater_a, rater_b, window_s=1.0, course_id="lunch")
print("merged immediately:", [b.t for b in draft.bites])
for c in conflicts:
    sides = f"A@{c.a.t}" if c.a else ""
    sides += f" B@{c.b.t}" if c.b else ""
    print(f"  {c.conflict_id}  {c.kind:>16}  {sides}")

for row in error_report(conflicts, total_bites=4):
    print(f"  {row.kind:>16}: {row.count} ({row.percent}%)")

decisions = [
    Adjudication(conflicts[0].conflict_id, "keep_a", judge_id="judge"),   # food was pizza
    Adjudication(conflicts[1].conflict_id, "keep_b", judge_id="judge"),   # bite was real
    Adjudication(conflicts[2].conflict_id, "keep_b", judge_id="judge"),   # mug was right
]
merged = apply_adjudications(draft, conflicts, decisions)
print("\nafter adjudication:")
for b in merged.bites:
    print(f"  t={b.t:5.1f}  {b.food_id:<12} {b.utensil}/{b.container}")
print("open conflicts left:", len(open_conflicts(conflicts, decisions)))
