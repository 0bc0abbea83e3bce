"""Gaussian pre-smoothing: what the detector actually sees.

Renders one noisy bite gesture, smooths it with the default 1 s /
(2/3) s Gaussian window, and saves a before/after plot plus the kernel.
"""

import numpy as np

from bitewatch import GestureTemplate, MealScript, ScriptedBite, SmoothingSpec, render, smooth, smoothing_kernel

script = MealScript(
    course_id="demo",
    duration_s=20.0,
    bites=[ScriptedBite(t=10.0, template=GestureTemplate(pos_amp=30, neg_amp=30))],
    noise_std=4.0,
)
raw, truth = render(script, seed=1)
smoothed = smooth(raw)

print(f"raw roll range:      [{raw.roll.min():7.2f}, {raw.roll.max():7.2f}] deg/s")
print(f"smoothed roll range: [{smoothed.roll.min():7.2f}, {smoothed.roll.max():7.2f}] deg/s")

# the kernel at an interior sample: 15 taps covering +/- 0.5 s
idx, weights = smoothing_kernel(raw.t, SmoothingSpec(), len(raw) // 2)
print(f"kernel taps: {len(weights)}, weight sum: {weights.sum():.12f}")
print("center weights:", np.round(weights[len(weights) // 2 - 2 : len(weights) // 2 + 3], 4))

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(9, 6), sharex=True)
    ax1.plot(raw.t, raw.roll, lw=0.7, alpha=0.7, label="raw roll")
    ax1.plot(smoothed.t, smoothed.roll, lw=1.5, label="smoothed")
    ax1.axvline(truth.bites[0].t, color="purple", ls="--", label="true bite")
    ax1.legend()
    ax1.set_ylabel("roll velocity (deg/s)")
    ax2.stem(raw.t[idx] - raw.t[len(raw) // 2], weights)
    ax2.set_xlim(raw.t[0], raw.t[-1])
    ax2.set_xlabel("seconds")
    ax2.set_ylabel("kernel weight")
    from pathlib import Path

    out = Path(__file__).parent / "out"
    out.mkdir(exist_ok=True)
    fig.savefig(out / "smoothing.png", dpi=110)
    print(f"plot saved to {out / 'smoothing.png'}")
except ImportError:
    print("matplotlib not installed; skipping plot")
