#!/usr/bin/env python3
"""Generate the bundled sample gaze trace (data/sample_gaze.csv).

500 samples at 100 Hz: a fixation/saccade trajectory on a 1920x1080 screen
with measurement jitter and a few blink runs. Fully seeded, so rerunning
this script reproduces the committed file byte for byte.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from gazekf.gazeio import GazeSample, emit_gaze_csv  # noqa: E402

N = 500
HZ = 100.0
SEED = 20240901
JITTER_PX = 2.0
BLINK_RUNS = ((120, 8), (260, 12), (404, 6))  # (start index, length)


def smoothstep(u: np.ndarray) -> np.ndarray:
    u = np.clip(u, 0.0, 1.0)
    return u * u * (3.0 - 2.0 * u)


def main() -> None:
    rng = np.random.default_rng(SEED)
    t = np.arange(N) / HZ

    # Fixation targets visited via 60 ms smoothstep saccades.
    targets = np.array(
        [[960, 540], [400, 300], [1500, 350], [1400, 800], [700, 900], [960, 540]],
        dtype=float,
    )
    onsets = np.array([0.8, 1.6, 2.4, 3.2, 4.2])
    pos = np.tile(targets[0], (N, 1))
    for k, onset in enumerate(onsets):
        u = smoothstep((t - onset) / 0.06)[:, None]
        pos = pos * (1.0 - u) + targets[k + 1] * u

    pos = pos + rng.normal(0.0, JITTER_PX, size=(N, 2))

    blink = np.zeros(N, dtype=bool)
    for start, length in BLINK_RUNS:
        blink[start : start + length] = True

    samples = []
    for i in range(N):
        if blink[i]:
            samples.append(GazeSample(t=t[i], x=None, y=None, blink=True))
        else:
            samples.append(GazeSample(t=t[i], x=pos[i, 0], y=pos[i, 1], blink=False))

    out = Path(__file__).resolve().parents[1] / "data" / "sample_gaze.csv"
    out.parent.mkdir(exist_ok=True)
    emit_gaze_csv(samples, out)
    print(f"wrote {out} ({N} samples, {int(blink.sum())} blink rows)")


if __name__ == "__main__":
    main()
