"""Stage payoffs and grid maximization.

Own-output utility ``u(y, e)`` and the externality ``v(y) = beta * y``.
Three forms of ``u`` are supported:

* ``quadratic``: ``y - c e^2 / 2``
* ``exponential``: ``(exp(a y) - 1) / a - c e^2 / 2`` (convex in output)
* ``table``: values on an output-by-effort grid, bilinear in between
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .views import DomainError, TechnologyViewPair

TIE_RTOL = 1e-12
REFINE = 10


@dataclass(frozen=True)
class PayoffSpec:
    kind: str = "quadratic"
    c: float = 4.0
    beta: float = 2.0
    a: float = 0.0
    table_outputs: tuple = ()
    table_efforts: tuple = ()
    table_values: tuple = ()

    def __post_init__(self):
        if self.kind not in ("quadratic", "exponential", "table"):
            raise DomainError(f"unknown payoff kind {self.kind!r}")
        if self.kind != "table" and not self.c > 0:
            raise DomainError("effort cost c must be positive")
        if self.kind == "exponential" and not self.a > 0:
            raise DomainError("exponential utility needs a > 0")
        if self.kind == "table":
            y = np.asarray(self.table_outputs, dtype=float)
            e = np.asarray(self.table_efforts, dtype=float)
            u = np.asarray(self.table_values, dtype=float)
            if u.shape != (y.size, e.size) or y.size < 2 or e.size < 2:
                raise DomainError("table_values must be len(table_outputs) x len(table_efforts)")
            if np.any(np.diff(y) <= 0) or np.any(np.diff(e) <= 0):
                raise DomainError("table grids must be strictly increasing")
            if np.any(np.diff(u, axis=0) <= 0):
                raise DomainError("tabulated u must be strictly increasing in output")
            if np.any(np.diff(u, axis=1) >= 0):
                raise DomainError("tabulated u must be strictly decreasing in effort")

    @property
    def externality_sign(self) -> int:
        return int(np.sign(self.beta))

    def _interp(self):
        return RegularGridInterpolator(
            (np.asarray(self.table_outputs, float), np.asarray(self.table_efforts, float)),
            np.asarray(self.table_values, float), bounds_error=False, fill_value=None)

    def u(self, y, e):
        y = np.asarray(y, dtype=float)
        e = np.asarray(e, dtype=float)
        if self.kind == "quadratic":
            return y - 0.5 * self.c * e * e
        if self.kind == "exponential":
            return np.expm1(self.a * y) / self.a - 0.5 * self.c * e * e
        yb, eb = np.broadcast_arrays(y, e)
        pts = np.stack([yb.ravel(), eb.ravel()], axis=1)
        return self._interp()(pts).reshape(yb.shape)

    def v(self, y):
        return self.beta * np.asarray(y, dtype=float)

    def expected_u(self, support, probs, efforts):
        """``E[u(Y, e)]`` row by row: ``support``/``probs`` are (n_e, n) or (n,)."""
        support = np.atleast_2d(support)
        probs = np.atleast_2d(probs)
        efforts = np.atleast_1d(np.asarray(efforts, dtype=float))
        if self.kind == "quadratic":
            return np.einsum("ij,ij->i", support, probs) - 0.5 * self.c * efforts ** 2
        return np.einsum("ij,ij->i", self.u(support, efforts[:, None]), probs)

    def describe(self) -> dict:
        out = {"kind": self.kind, "c": self.c, "beta": self.beta}
        if self.kind == "exponential":
            out["a"] = self.a
        return out


@dataclass(frozen=True)
class ArgmaxResult:
    effort: float
    value: float
    tie: bool  # another coarse-grid point was within tie tolerance and not adjacent


def _best(efforts, values):
    vmax = float(np.max(values))
    tol = TIE_RTOL * (1.0 + abs(vmax))
    idx = np.flatnonzero(values >= vmax - tol)
    j = idx[np.argmin(efforts[idx])]
    return j, idx


def grid_argmax(objective, b: float, points: int = 401, refine: int = REFINE) -> ArgmaxResult:
    """Maximize ``objective`` (vectorized over efforts) on ``[0, b]``.

    A uniform grid is scanned, then a grid ``refine`` times finer is scanned
    within one coarse step of the incumbent.  Ties within a relative
    tolerance go to the lowest effort.
    """
    if points < 2:
        raise DomainError("effort grid needs at least two points")
    grid = np.linspace(0.0, b, points)
    vals = np.asarray(objective(grid), dtype=float)
    j, idx = _best(grid, vals)
    tie = bool(idx.size > 1 and np.ptp(idx) > 1)
    h = grid[1] - grid[0]
    fine = grid[j] + (h / refine) * np.arange(-refine, refine + 1)
    fine = fine[(fine >= 0.0) & (fine <= b)]
    fine = fine[np.abs(fine - grid[j]) > 0.0]
    if fine.size:
        fvals = np.asarray(objective(fine), dtype=float)
        cand_e = np.concatenate([grid, fine])
        cand_v = np.concatenate([vals, fvals])
        k, _ = _best(cand_e, cand_v)
        return ArgmaxResult(float(cand_e[k]), float(cand_v[k]), tie)
    return ArgmaxResult(float(grid[j]), float(vals[j]), tie)


def static_optimum(pair: TechnologyViewPair, label: str, payoff: PayoffSpec,
                   points: int = 401) -> ArgmaxResult:
    """Effort maximizing ``E_view[u(Y, e)]``, the single-period optimum of a view."""
    return _static_optimum(pair, label, payoff, points)


def _expected_u_fn(pair, label, payoff):
    def f(efforts):
        x, ph, pl = pair.grid_masses(efforts)
        return payoff.expected_u(x, ph if label == "H" else pl, efforts)
    return f


_STATIC_CACHE: dict = {}


def _static_optimum(pair, label, payoff, points):
    key = (pair, label, payoff, points)
    hit = _STATIC_CACHE.get(key)
    if hit is None:
        hit = grid_argmax(_expected_u_fn(pair, label, payoff), pair.b, points)
        _STATIC_CACHE[key] = hit
    return hit
