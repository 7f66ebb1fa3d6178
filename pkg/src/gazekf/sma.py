"""Simple-moving-average baseline filter."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EDGE_POLICIES = ("partial", "hold")


@dataclass(frozen=True)
class SmaConfig:
    """Window size and edge policy for the moving-average filter.

    ``partial`` averages over whatever prefix is available before the first
    full window; ``hold`` backfills the head with the first full-window
    value (so output length still equals input length).
    """

    window: int = 5
    edge_policy: str = "partial"

    def __post_init__(self):
        if self.window < 1:
            raise ValueError(f"window must be at least 1, got {self.window}")
        if self.edge_policy not in EDGE_POLICIES:
            raise ValueError(
                f"edge_policy must be one of {EDGE_POLICIES}, got {self.edge_policy!r}"
            )


def sma_filter(series, config: SmaConfig) -> list:
    """Moving average of a series that may contain missing (None) entries.

    Output length equals input length. Missing entries are excluded from
    both the numerator and the count; a window with only missing values
    carries the previous output forward (NaN if there is none yet).
    """
    entries = [None if z is None else np.asarray(z, dtype=float) for z in series]
    if not entries:
        raise ValueError("series must be non-empty")
    w = config.window

    shape = next((z.shape for z in entries if z is not None), ())
    out: list[np.ndarray] = []
    for t in range(len(entries)):
        window = [z for z in entries[max(0, t - w + 1) : t + 1] if z is not None]
        if window:
            out.append(sum(window) / len(window))
        elif out:
            out.append(out[-1].copy())
        else:
            out.append(np.full(shape, np.nan))

    if config.edge_policy == "hold" and len(entries) >= w:
        for t in range(w - 1):
            out[t] = out[w - 1].copy()
    return out
