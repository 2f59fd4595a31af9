"""Backend selection and the test-construction helpers built on it.

The compiled extension is used when it imports; otherwise the numpy
fallback is used.  Setting ``HTGAME_BACKEND=python`` forces the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _kernels_py

if os.environ.get("HTGAME_BACKEND", "").lower() == "python":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _kernels_py
        BACKEND = "python"

# relative tolerance used to pool likelihood-ratio ties into one atom
RATIO_RTOL = 1e-9


def _vec(p):
    return np.ascontiguousarray(p, dtype=np.float64)


# masses closer than this are treated as identical
UNINFORMATIVE_ATOL = 1e-14


def is_uninformative(p_null, p_alt) -> bool:
    """True when both hypotheses put the same mass on every signal."""
    p_null = np.asarray(p_null)
    p_alt = np.asarray(p_alt)
    return p_null.shape == p_alt.shape and bool(np.all(np.abs(p_null - p_alt) <= UNINFORMATIVE_ATOL))


def np_power(p_null, p_alt, alpha: float) -> float:
    """Power of the most powerful size-alpha test."""
    return float(_impl.np_power(_vec(p_null), _vec(p_alt), float(alpha)))


def np_power_product(pa_null, pa_alt, pb_null, pb_alt, alpha: float) -> float:
    """Power on the product of two independent experiments.

    An uninformative factor leaves every likelihood ratio unchanged, so it
    is dropped before the product is formed.
    """
    if is_uninformative(pb_null, pb_alt):
        return np_power(pa_null, pa_alt, alpha)
    if is_uninformative(pa_null, pa_alt):
        return np_power(pb_null, pb_alt, alpha)
    return float(_impl.np_power_product(_vec(pa_null), _vec(pa_alt), _vec(pb_null), _vec(pb_alt),
                                        float(alpha)))


def np_power_product_rows(rows_null, rows_alt, pb_null, pb_alt, alpha: float) -> np.ndarray:
    """Powers for a stack of first factors sharing one second factor."""
    rows_null = np.ascontiguousarray(np.atleast_2d(rows_null), dtype=np.float64)
    rows_alt = np.ascontiguousarray(np.atleast_2d(rows_alt), dtype=np.float64)
    if is_uninformative(pb_null, pb_alt):
        pb_null = pb_alt = np.ones(1)
    return np.asarray(_impl.np_power_product_rows(rows_null, rows_alt, _vec(pb_null), _vec(pb_alt),
                                                  float(alpha)))


@dataclass(frozen=True)
class NPTest:
    """Randomized most powerful test on a finite signal space.

    ``weights[j]`` is the rejection probability at signal ``j``: one above
    the critical ratio, ``q`` on it, zero below and off both supports.
    """

    critical: float
    q: float
    weights: np.ndarray
    size: float
    power: float


def _ratio_groups(p_null, p_alt):
    """Signals with positive null mass, sorted by decreasing ratio, with tie labels."""
    idx = np.flatnonzero(p_null > 0.0)
    ratio = p_alt[idx] / p_null[idx]
    order = np.argsort(-ratio, kind="stable")
    idx = idx[order]
    ratio = ratio[order]
    # a new group starts wherever the ratio drops by more than the tolerance
    step = ratio[:-1] - ratio[1:]
    breaks = step > RATIO_RTOL * np.maximum(np.abs(ratio[:-1]), 1.0)
    labels = np.concatenate(([0], np.cumsum(breaks))).astype(np.int64) if ratio.size else breaks.astype(np.int64)
    return idx, ratio, labels


def np_test(p_null, p_alt, alpha: float) -> NPTest:
    """Build the randomized size-alpha likelihood-ratio test.

    The critical value is the smallest nonnegative ratio whose strict upper
    set has null mass at most alpha; boundary atoms (ties pooled) are
    rejected with the probability that makes the size exactly alpha.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"size alpha={alpha} outside [0, 1]")
    p_null = np.asarray(p_null, dtype=float)
    p_alt = np.asarray(p_alt, dtype=float)
    w = np.zeros(p_null.size)
    w[(p_null == 0.0) & (p_alt > 0.0)] = 1.0
    idx, ratio, labels = _ratio_groups(p_null, p_alt)
    ngroups = int(labels[-1]) + 1 if labels.size else 0
    gnull = np.bincount(labels, weights=p_null[idx], minlength=ngroups)
    cum = np.cumsum(gnull)
    k = int(np.searchsorted(cum, alpha, side="right"))
    if k >= ngroups:
        # everything fits inside the size budget
        w[idx] = 1.0
        crit, q = 0.0, (1.0 if ngroups and ratio[-1] == 0.0 else 0.0)
    else:
        before = float(cum[k - 1]) if k > 0 else 0.0
        q = (alpha - before) / float(gnull[k])
        if q < 1e-12:
            q = 0.0
        elif q > 1.0 - 1e-12:
            q = 1.0
        members = labels == k
        crit = float(ratio[members][0])
        w[idx[labels < k]] = 1.0
        w[idx[members]] = q
    size = float(np.dot(w, p_null))
    power = float(np.dot(w, p_alt))
    return NPTest(critical=crit, q=q, weights=w, size=size, power=power)


def roc_points(p_null, p_alt):
    """Vertices of the power curve: cumulative null mass vs cumulative alt mass."""
    p_null = np.asarray(p_null, dtype=float)
    p_alt = np.asarray(p_alt, dtype=float)
    a_inf = float(p_alt[(p_null == 0.0) & (p_alt > 0.0)].sum())
    idx, _ratio, labels = _ratio_groups(p_null, p_alt)
    ngroups = int(labels[-1]) + 1 if labels.size else 0
    gnull = np.bincount(labels, weights=p_null[idx], minlength=ngroups)
    galt = np.bincount(labels, weights=p_alt[idx], minlength=ngroups)
    xs = np.concatenate(([0.0], np.cumsum(gnull)))
    ys = np.concatenate(([a_inf], a_inf + np.cumsum(galt)))
    return xs, ys


def power_at(p_null, p_alt, alphas) -> np.ndarray:
    """Power curve evaluated at the given sizes (exact piecewise-linear interpolation)."""
    xs, ys = roc_points(p_null, p_alt)
    return np.interp(np.asarray(alphas, dtype=float), xs, ys)
