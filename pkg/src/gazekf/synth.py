"""Seeded sine/cosine synthetic data for the filter experiments.

Truth is [sin(t), cos(t)] sampled on a uniform grid; measurements add
independent per-channel Gaussian noise. The RNG is numpy's default_rng
(PCG64) with Gaussian draws from its ziggurat normal(), so a given seed
reproduces the dataset bit-for-bit across runs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

CSV_HEADER = ("t", "pos_true", "vel_true", "pos_meas", "vel_meas")


@dataclass(frozen=True)
class SynthConfig:
    n: int = 100
    dt: float = 1.0
    sigma_pos: float = 0.1
    sigma_vel: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be at least 1, got {self.n}")
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.sigma_pos < 0 or self.sigma_vel < 0:
            raise ValueError("noise sigmas must be non-negative")


@dataclass(frozen=True)
class SynthDataset:
    """times (n,), truth (n, 2) = [sin, cos], noisy (n, 2) = truth + noise."""

    times: np.ndarray
    truth: np.ndarray
    noisy: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        truth = np.asarray(self.truth, dtype=float)
        noisy = np.asarray(self.noisy, dtype=float)
        n = times.size
        if truth.shape != (n, 2) or noisy.shape != (n, 2):
            raise ValueError("times, truth, noisy must share length and be 2-channel")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "truth", truth)
        object.__setattr__(self, "noisy", noisy)

    def __len__(self) -> int:
        return self.times.size


def generate_synthetic(config: SynthConfig) -> SynthDataset:
    """Deterministic dataset: same config (including seed) -> same bytes."""
    rng = np.random.default_rng(config.seed)
    times = np.arange(config.n) * config.dt
    truth = np.column_stack([np.sin(times), np.cos(times)])
    scale = np.array([config.sigma_pos, config.sigma_vel])
    noisy = truth + rng.normal(0.0, 1.0, size=(config.n, 2)) * scale
    return SynthDataset(times=times, truth=truth, noisy=noisy)


def write_dataset_csv(dataset: SynthDataset, dest) -> None:
    """Write the dataset with >= 9 significant digits per value."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            write_dataset_csv(dataset, fh)
        return
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for t, (pt, vt), (pm, vm) in zip(dataset.times, dataset.truth, dataset.noisy):
        writer.writerow([format(v, ".12g") for v in (t, pt, vt, pm, vm)])


def read_dataset_csv(source) -> SynthDataset:
    """Inverse of write_dataset_csv."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return read_dataset_csv(fh)
    reader = csv.reader(source)
    header = tuple(col.strip() for col in next(reader, []))
    if header != CSV_HEADER:
        raise ValueError(f"bad header {header!r} (expected {','.join(CSV_HEADER)})")
    rows = [[float(cell) for cell in row] for row in reader if row]
    if not rows:
        raise ValueError("dataset CSV has no data rows")
    data = np.asarray(rows)
    return SynthDataset(times=data[:, 0], truth=data[:, 1:3], noisy=data[:, 3:5])
