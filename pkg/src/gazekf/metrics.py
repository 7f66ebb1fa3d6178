"""Evaluation: per-channel RMSE and innovation-consistency diagnostics."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .ekf import FilterNumericsError, StepRecord, _COND_LIMIT
from .models import MeasurementModel, symmetrize


@dataclass(frozen=True)
class RmseReport:
    """Per-channel RMSE plus how many indices were usable.

    ``skipped`` counts indices excluded because truth or estimate was
    missing; n_samples + skipped equals the series length.
    """

    per_channel: tuple
    n_samples: int
    skipped: int

    def __post_init__(self):
        object.__setattr__(
            self,
            "per_channel",
            tuple((str(name), float(value)) for name, value in self.per_channel),
        )
        for name, value in self.per_channel:
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"rmse for {name} must be finite and >= 0, got {value}")

    def value(self, channel: str) -> float:
        for name, v in self.per_channel:
            if name == channel:
                return v
        raise KeyError(channel)

    def to_json(self) -> str:
        """Flat JSON object: one key per channel, plus n_samples and skipped."""
        obj = {name: value for name, value in self.per_channel}
        obj["n_samples"] = self.n_samples
        obj["skipped"] = self.skipped
        return json.dumps(obj)

    def csv_header(self) -> str:
        names = sorted(name for name, _ in self.per_channel)
        return ",".join(names + ["n_samples", "skipped"])

    def to_csv_row(self) -> str:
        """One CSV row; columns are sorted channel names, n_samples, skipped."""
        values = {name: value for name, value in self.per_channel}
        cells = [format(values[name], ".12g") for name in sorted(values)]
        return ",".join(cells + [str(self.n_samples), str(self.skipped)])


def _present(entry) -> Optional[np.ndarray]:
    if entry is None:
        return None
    arr = np.atleast_1d(np.asarray(entry, dtype=float))
    return arr if np.all(np.isfinite(arr)) else None


def rmse(
    truth: Sequence,
    estimate: Sequence,
    channel_names: Optional[Sequence[str]] = None,
) -> RmseReport:
    """Per-channel root mean square error over jointly-present indices.

    Entries that are None or contain non-finite values on either side are
    skipped (and counted). Raises on length mismatch or when no index is
    usable.
    """
    if len(truth) != len(estimate):
        raise ValueError(
            f"length mismatch: truth has {len(truth)}, estimate has {len(estimate)}"
        )
    diffs = []
    skipped = 0
    for ref, est in zip(truth, estimate):
        ref = _present(ref)
        est = _present(est)
        if ref is None or est is None:
            skipped += 1
            continue
        if ref.shape != est.shape:
            raise ValueError(f"channel mismatch: {ref.shape} vs {est.shape}")
        diffs.append(est - ref)
    if not diffs:
        raise ValueError("no index where both truth and estimate are present")
    deltas = np.vstack(diffs)
    values = np.sqrt(np.mean(deltas**2, axis=0))
    if channel_names is None:
        channel_names = [f"ch{i}" for i in range(deltas.shape[1])]
    if len(channel_names) != deltas.shape[1]:
        raise ValueError(
            f"{len(channel_names)} channel names for {deltas.shape[1]} channels"
        )
    return RmseReport(
        per_channel=tuple(zip(channel_names, values)),
        n_samples=len(diffs),
        skipped=skipped,
    )


def nis_value(innovation: np.ndarray, s: np.ndarray) -> float:
    """Quadratic form nu^T S^{-1} nu for one innovation."""
    innovation = np.atleast_1d(np.asarray(innovation, dtype=float))
    s = np.atleast_2d(np.asarray(s, dtype=float))
    if not np.all(np.isfinite(s)) or np.linalg.cond(s) > _COND_LIMIT:
        raise FilterNumericsError("innovation covariance is numerically singular")
    return float(innovation @ np.linalg.solve(s, innovation))


def nis(records: Sequence[StepRecord], measurement: MeasurementModel) -> list[float]:
    """Normalized innovation squared for each updated step.

    For a well-specified filter these are chi-square distributed with the
    measurement dimension as mean; prediction-only steps are skipped.
    """
    values = []
    for record in records:
        if not record.updated:
            continue
        hjac = np.asarray(measurement.jacobian_h(record.prior.mean), dtype=float)
        s = symmetrize(hjac @ record.prior.cov @ hjac.T + measurement.r)
        values.append(nis_value(record.innovation, s))
    return values
