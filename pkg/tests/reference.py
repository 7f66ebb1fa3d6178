"""Independent oracles the tests check the library against.

Deliberately naive implementations on a separate code path: the classic
Kalman filter uses explicit matrix inverses straight from the textbook
equations, and the windowed mean is recomputed from scratch at every index.
"""

from __future__ import annotations

import numpy as np


def classic_kalman_filter(fmat, q, hmat, r, x0, p0, measurements):
    """Textbook linear Kalman filter.

    ``measurements`` may contain None (prediction-only step). Returns
    (means, covs) lists with one entry per input, post-update.
    """
    fmat = np.asarray(fmat, float)
    q = np.asarray(q, float)
    hmat = np.asarray(hmat, float)
    r = np.asarray(r, float)
    x = np.asarray(x0, float).copy()
    p = np.asarray(p0, float).copy()
    n = x.size
    means, covs = [], []
    for z in measurements:
        # predict
        x = fmat @ x
        p = fmat @ p @ fmat.T + q
        p = 0.5 * (p + p.T)
        # update
        if z is not None:
            z = np.asarray(z, float)
            s = hmat @ p @ hmat.T + r
            k = p @ hmat.T @ np.linalg.inv(s)
            x = x + k @ (z - hmat @ x)
            p = (np.eye(n) - k @ hmat) @ p
            p = 0.5 * (p + p.T)
        means.append(x.copy())
        covs.append(p.copy())
    return means, covs


def brute_force_windowed_mean(series, window):
    """Mean over the trailing window, recomputed from scratch at each index.

    Missing (None) entries are excluded; an empty window repeats the
    previous output (NaN before any output exists).
    """
    out = []
    shape = next(
        (np.asarray(v, float).shape for v in series if v is not None), ()
    )
    for t in range(len(series)):
        values = [
            np.asarray(v, float)
            for v in series[max(0, t - window + 1) : t + 1]
            if v is not None
        ]
        if values:
            total = np.zeros(shape)
            for v in values:
                total = total + v
            out.append(total / len(values))
        elif out:
            out.append(out[-1])
        else:
            out.append(np.full(shape, np.nan))
    return out


def random_psd(rng, n, scale=1.0):
    a = rng.normal(size=(n, n))
    return scale * (a @ a.T) / n


def random_pd(rng, n, scale=1.0):
    return random_psd(rng, n, scale) + 0.1 * scale * np.eye(n)
