"""Extended Kalman filter: prediction, update, blink-aware stepping.

Prediction propagates the mean through f and the covariance through the
Jacobian (F P F^T + Q). The update computes the gain from the innovation
covariance via a linear solve (never an explicit inverse) and applies the
textbook covariance form (I - K H) P followed by symmetrization. A missing
measurement yields a prediction-only step, which is how blink dropouts are
compensated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .models import (
    MeasurementModel,
    ProcessModel,
    StateEstimate,
    symmetrize,
)

# Condition number past which the innovation covariance is treated as
# singular: all significant digits would be lost at double precision.
_COND_LIMIT = 1e12


class FilterNumericsError(RuntimeError):
    """The filter arithmetic degenerated (singular innovation covariance or
    non-finite values); results past this point would be garbage."""


@dataclass(frozen=True)
class FilterConfig:
    """Initial condition plus the two models that define one filter run."""

    x0: np.ndarray
    p0: np.ndarray
    process: ProcessModel
    measurement: MeasurementModel

    def __post_init__(self):
        initial = StateEstimate(self.x0, self.p0)
        object.__setattr__(self, "x0", initial.mean)
        object.__setattr__(self, "p0", initial.cov)
        n = initial.dim
        if self.process.dim != n:
            raise ValueError(
                f"process model dimension {self.process.dim} != state dimension {n}"
            )
        z0 = np.asarray(self.measurement.h(initial.mean), dtype=float)
        if z0.size != self.measurement.dim:
            raise ValueError(
                f"h output dimension {z0.size} != r dimension {self.measurement.dim}"
            )

    @property
    def initial_state(self) -> StateEstimate:
        return StateEstimate(self.x0, self.p0)


@dataclass(frozen=True)
class StepRecord:
    """One filter step: prior (post-prediction) and posterior beliefs.

    When the measurement was missing, ``updated`` is false, the innovation
    and gain are absent, and the posterior is identical to the prior.
    """

    t: float
    prior: StateEstimate
    posterior: StateEstimate
    innovation: Optional[np.ndarray]
    gain: Optional[np.ndarray]
    updated: bool

    def __post_init__(self):
        if self.updated != (self.innovation is not None) or self.updated != (
            self.gain is not None
        ):
            raise ValueError("innovation/gain must be present iff updated")


def numerical_jacobian(
    fn: Callable[[np.ndarray], np.ndarray], x: np.ndarray, eps: float = 1e-6
) -> np.ndarray:
    """Central-difference Jacobian of fn at x.

    Column i is (fn(x + eps*e_i) - fn(x - eps*e_i)) / (2*eps).
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    x = np.asarray(x, dtype=float)
    columns = []
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = eps
        hi = np.asarray(fn(x + step), dtype=float)
        lo = np.asarray(fn(x - step), dtype=float)
        if not (np.all(np.isfinite(hi)) and np.all(np.isfinite(lo))):
            raise FilterNumericsError(
                f"fn returned non-finite values near x={x.tolist()}"
            )
        columns.append((hi - lo) / (2.0 * eps))
    return np.column_stack(columns)


def predict(state: StateEstimate, model: ProcessModel) -> StateEstimate:
    """Propagate the belief one step: mean through f, covariance F P F^T + Q."""
    mean = np.asarray(model.f(state.mean), dtype=float)
    if not np.all(np.isfinite(mean)):
        raise FilterNumericsError(
            f"state transition produced non-finite values at state {state.mean.tolist()}"
        )
    fjac = np.asarray(model.jacobian_f(state.mean), dtype=float)
    cov = symmetrize(fjac @ state.cov @ fjac.T + model.q)
    return StateEstimate(mean, cov)


def update(
    state: StateEstimate, model: MeasurementModel, z: np.ndarray
) -> tuple[StateEstimate, np.ndarray, np.ndarray]:
    """Fold measurement z into a predicted belief.

    Returns (posterior, innovation, gain). Raises FilterNumericsError when
    the innovation covariance H P H^T + R is numerically singular.
    """
    z = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z)):
        raise ValueError(f"measurement contains non-finite values: {z.tolist()}")
    predicted = np.asarray(model.h(state.mean), dtype=float)
    if z.shape != predicted.shape:
        raise ValueError(
            f"measurement dimension {z.size} != model output dimension {predicted.size}"
        )
    hjac = np.asarray(model.jacobian_h(state.mean), dtype=float)
    innovation = z - predicted
    s = symmetrize(hjac @ state.cov @ hjac.T + model.r)
    if not np.all(np.isfinite(s)) or np.linalg.cond(s) > _COND_LIMIT:
        raise FilterNumericsError(
            "innovation covariance is numerically singular (degenerate R or collapsed P)"
        )
    # K = P H^T S^{-1}, via solve: (S^{-1} H P)^T with P symmetric.
    gain = np.linalg.solve(s, hjac @ state.cov).T
    mean = state.mean + gain @ innovation
    cov = symmetrize((np.eye(state.dim) - gain @ hjac) @ state.cov)
    return StateEstimate(mean, cov), innovation, gain


def step(
    state: StateEstimate,
    config: FilterConfig,
    z: Optional[np.ndarray],
    t: float,
) -> StepRecord:
    """Predict, then update if a measurement is present.

    A missing z (blink/dropout) keeps the prediction as the posterior.
    """
    prior = predict(state, config.process)
    if z is None:
        return StepRecord(
            t=t, prior=prior, posterior=prior, innovation=None, gain=None, updated=False
        )
    posterior, innovation, gain = update(prior, config.measurement, z)
    return StepRecord(
        t=t, prior=prior, posterior=posterior, innovation=innovation, gain=gain,
        updated=True,
    )


def run_filter(series, config: FilterConfig) -> list[StepRecord]:
    """Filter a whole series; one StepRecord per input sample, in order.

    ``series`` is a TimedSeries or any sequence of (t, z-or-None) pairs with
    strictly increasing timestamps. The first step predicts from (x0, p0).
    """
    samples: Sequence = getattr(series, "samples", series)
    prev_t = None
    for t, _ in samples:
        if prev_t is not None and t <= prev_t:
            raise ValueError(
                f"timestamps must be strictly increasing ({t} after {prev_t})"
            )
        prev_t = t

    state = config.initial_state
    records: list[StepRecord] = []
    for i, (t, z) in enumerate(samples):
        try:
            record = step(state, config, z, t)
        except (ValueError, FilterNumericsError) as exc:
            raise type(exc)(f"step {i} (t={t}): {exc}") from exc
        records.append(record)
        state = record.posterior
    return records


def initial_state_from_measurement(
    z0: np.ndarray, n: int, p0_scale: float = 10.0
) -> StateEstimate:
    """Default initial belief: first measurement lifted into the state.

    For an identity-like h the leading state components are set to z0 and
    any remaining (velocity) components to 0. The deliberately large
    p0_scale * I covariance makes the filter trust early measurements, so
    results are insensitive to this choice.
    """
    z0 = np.asarray(z0, dtype=float)
    if z0.size > n:
        raise ValueError(f"measurement dimension {z0.size} exceeds state dimension {n}")
    mean = np.zeros(n)
    mean[: z0.size] = z0
    return StateEstimate(mean, p0_scale * np.eye(n))
