"""Core state-space types: Gaussian beliefs and process/measurement models.

All types are immutable values after construction and safe to share between
threads. Model functions (``f``, ``h`` and their Jacobians) must be pure:
same input, same output, no hidden state. That contract also applies to
user-supplied models passed through the same interfaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

VectorFn = Callable[[np.ndarray], np.ndarray]
MatrixFn = Callable[[np.ndarray], np.ndarray]

# Maximum tolerated asymmetry in any covariance matrix.
SYMMETRY_TOL = 1e-9
# Smallest eigenvalue a covariance may have and still count as PSD.
PSD_EIG_TOL = -1e-9


def symmetrize(m: np.ndarray) -> np.ndarray:
    """Average a matrix with its transpose to strip round-off asymmetry."""
    return 0.5 * (m + m.T)


def _as_finite_array(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def _check_cov(m: np.ndarray, name: str, positive_definite: bool = False) -> np.ndarray:
    """Validate a covariance matrix: square, symmetric, PSD (or PD)."""
    m = _as_finite_array(m, name)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {m.shape}")
    if not np.allclose(m, m.T, atol=SYMMETRY_TOL, rtol=0.0):
        raise ValueError(f"{name} is not symmetric")
    m = symmetrize(m)
    if positive_definite:
        try:
            np.linalg.cholesky(m)
        except np.linalg.LinAlgError:
            raise ValueError(f"{name} must be positive definite") from None
    else:
        smallest = float(np.linalg.eigvalsh(m)[0])
        if smallest < PSD_EIG_TOL:
            raise ValueError(
                f"{name} must be positive semi-definite "
                f"(smallest eigenvalue {smallest:.3e})"
            )
    return m


@dataclass(frozen=True)
class StateEstimate:
    """Gaussian belief over the hidden state: mean vector and covariance.

    The covariance is symmetrized at construction, so any sequence of
    operations that rebuilds estimates through this type keeps asymmetry
    below ``SYMMETRY_TOL``.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = _as_finite_array(self.mean, "mean")
        if mean.ndim != 1 or mean.size < 1:
            raise ValueError(f"mean must be a 1-d vector, got shape {mean.shape}")
        cov = _as_finite_array(self.cov, "cov")
        if cov.shape != (mean.size, mean.size):
            raise ValueError(
                f"cov shape {cov.shape} does not match state dimension {mean.size}"
            )
        if not np.allclose(cov, cov.T, atol=SYMMETRY_TOL, rtol=0.0):
            raise ValueError("cov is not symmetric")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", symmetrize(cov))

    @property
    def dim(self) -> int:
        return self.mean.size


@dataclass(frozen=True)
class ProcessModel:
    """Nonlinear state transition x_t = f(x_{t-1}) + w_t with w ~ N(0, q).

    ``f`` maps an n-vector to an n-vector; ``jacobian_f`` returns the n x n
    Jacobian of ``f`` at a point. ``q`` is the process-noise covariance and
    ``dt`` the step size the model was discretized at.
    """

    f: VectorFn
    jacobian_f: MatrixFn
    q: np.ndarray
    dt: float

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        object.__setattr__(self, "q", _check_cov(self.q, "q"))
        object.__setattr__(self, "dt", float(self.dt))

    @property
    def dim(self) -> int:
        return self.q.shape[0]


@dataclass(frozen=True)
class MeasurementModel:
    """Observation z_t = h(x_t) + v_t with v ~ N(0, r).

    ``r`` must be positive definite: it has to keep the innovation
    covariance invertible inside the gain computation.
    """

    h: VectorFn
    jacobian_h: MatrixFn
    r: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "r", _check_cov(self.r, "r", positive_definite=True))

    @property
    def dim(self) -> int:
        return self.r.shape[0]


def make_constant_velocity_model(dt: float, q_scale: float) -> ProcessModel:
    """Constant-velocity transition: f([p, v]) = [p + v*dt, v].

    Linear, so the Jacobian is the constant matrix [[1, dt], [0, 1]] and the
    extended filter reduces exactly to the classic Kalman filter.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if q_scale < 0:
        raise ValueError(f"q_scale must be non-negative, got {q_scale}")
    dt = float(dt)
    fmat = np.array([[1.0, dt], [0.0, 1.0]])

    def f(x: np.ndarray) -> np.ndarray:
        return fmat @ np.asarray(x, dtype=float)

    def jacobian_f(x: np.ndarray) -> np.ndarray:
        return fmat.copy()

    return ProcessModel(f=f, jacobian_f=jacobian_f, q=q_scale * np.eye(2), dt=dt)


def make_pendulum_model(dt: float, q_scale: float) -> ProcessModel:
    """Pendulum-like transition: f([p, v]) = [p + v*dt, v - sin(p)*dt].

    Genuinely nonlinear, so it exercises the linearization path; the
    analytic Jacobian is [[1, dt], [-cos(p)*dt, 1]].
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if q_scale < 0:
        raise ValueError(f"q_scale must be non-negative, got {q_scale}")
    dt = float(dt)

    def f(x: np.ndarray) -> np.ndarray:
        p, v = np.asarray(x, dtype=float)
        return np.array([p + v * dt, v - np.sin(p) * dt])

    def jacobian_f(x: np.ndarray) -> np.ndarray:
        p = float(np.asarray(x, dtype=float)[0])
        return np.array([[1.0, dt], [-np.cos(p) * dt, 1.0]])

    return ProcessModel(f=f, jacobian_f=jacobian_f, q=q_scale * np.eye(2), dt=dt)


def make_identity_measurement(m: int, r_scale: float) -> MeasurementModel:
    """Identity observation h(x) = x with r = r_scale * I_m.

    ``r_scale`` must be strictly positive so the innovation covariance stays
    invertible.
    """
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    if r_scale <= 0:
        raise ValueError(f"r_scale must be positive, got {r_scale}")
    eye = np.eye(m)

    def h(x: np.ndarray) -> np.ndarray:
        return np.asarray(x, dtype=float).copy()

    def jacobian_h(x: np.ndarray) -> np.ndarray:
        return eye.copy()

    return MeasurementModel(h=h, jacobian_h=jacobian_h, r=r_scale * eye)
