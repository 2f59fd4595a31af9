"""Finite dichotomous experiments, most powerful tests and the Blackwell order.

For two-state experiments, one experiment is Blackwell more informative
than another exactly when its Neyman-Pearson power curve lies weakly above
the other's at every size.  Power curves here are exact piecewise-linear
functions, so comparing them at every breakpoint of both curves (plus a
uniform size grid) decides the order without sampling error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .views import DomainError, TechnologyViewPair

SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DichotomousExperiment:
    """Signal space with its distribution under each of two states.

    ``p_null`` is the law under the first state and ``p_alt`` under the
    second; they need not be hypotheses of any particular test.
    """

    support: np.ndarray
    p_null: np.ndarray
    p_alt: np.ndarray

    def __post_init__(self):
        sup = np.asarray(self.support)
        pn = np.asarray(self.p_null, dtype=float)
        pa = np.asarray(self.p_alt, dtype=float)
        if pn.shape != pa.shape or pn.ndim != 1 or len(sup) != pn.size:
            raise DomainError("support and both probability vectors must have equal length")
        if np.any(pn < 0) or np.any(pa < 0):
            raise DomainError("probabilities must be nonnegative")
        if abs(pn.sum() - 1.0) > SUM_TOL or abs(pa.sum() - 1.0) > SUM_TOL:
            raise DomainError("each probability vector must sum to 1")
        object.__setattr__(self, "support", sup)
        object.__setattr__(self, "p_null", pn)
        object.__setattr__(self, "p_alt", pa)

    @classmethod
    def from_pair(cls, pair: TechnologyViewPair, e: float, swap: bool = False):
        """Experiment ``(H(.|e), L(.|e))`` of a view pair, or ``(L, H)`` when swapped."""
        x, ph, pl = pair.masses(e)
        return cls(x, pl, ph) if swap else cls(x, ph, pl)

    def swapped(self) -> "DichotomousExperiment":
        return DichotomousExperiment(self.support, self.p_alt, self.p_null)

    @property
    def is_uninformative(self) -> bool:
        return kernels.is_uninformative(self.p_null, self.p_alt)

    def __len__(self):
        return self.p_null.size


def product(a: DichotomousExperiment, b: DichotomousExperiment) -> DichotomousExperiment:
    """Independent product: signals are pairs and masses multiply state by state."""
    ia, ib = np.meshgrid(np.arange(len(a)), np.arange(len(b)), indexing="ij")
    support = np.empty(ia.size, dtype=object)
    support[:] = list(zip(np.asarray(a.support, dtype=object)[ia.ravel()],
                          np.asarray(b.support, dtype=object)[ib.ravel()]))
    pn = np.outer(a.p_null, b.p_null).ravel()
    pa = np.outer(a.p_alt, b.p_alt).ravel()
    # renormalize away rounding so the sum check holds for long products
    return DichotomousExperiment(support, pn / pn.sum(), pa / pa.sum())


def power_curve(x: DichotomousExperiment, alphas) -> np.ndarray:
    """Neyman-Pearson maximal power at each size in ``alphas``."""
    alphas = np.asarray(alphas, dtype=float)
    if np.any(alphas < 0) or np.any(alphas > 1):
        raise DomainError("sizes must lie in [0, 1]")
    return kernels.power_at(x.p_null, x.p_alt, alphas)


def breakpoints(x: DichotomousExperiment) -> np.ndarray:
    xs, _ = kernels.roc_points(x.p_null, x.p_alt)
    return np.clip(xs, 0.0, 1.0)


@dataclass(frozen=True)
class BlackwellResult:
    dominates: bool
    equivalent: bool
    margin: float  # min over sizes and null choices of power(a) - power(b)


def _comparison_sizes(exps, alpha_points):
    grids = [np.linspace(0.0, 1.0, alpha_points)]
    grids += [breakpoints(x) for x in exps]
    return np.unique(np.concatenate(grids))


def blackwell_geq(a: DichotomousExperiment, b: DichotomousExperiment, alpha_grid=None,
                  tol: float = 1e-9, alpha_points: int = 1001) -> BlackwellResult:
    """Whether ``a`` is Blackwell at least as informative as ``b``.

    Both choices of which state is the null are checked.  ``alpha_grid``
    overrides the uniform grid; breakpoints of all four curves are always
    added.
    """
    a_s, b_s = a.swapped(), b.swapped()
    exps = (a, b, a_s, b_s)
    if alpha_grid is None:
        sizes = _comparison_sizes(exps, alpha_points)
    else:
        sizes = np.unique(np.concatenate([np.asarray(alpha_grid, dtype=float)]
                                         + [breakpoints(x) for x in exps]))
    d1 = power_curve(a, sizes) - power_curve(b, sizes)
    d2 = power_curve(a_s, sizes) - power_curve(b_s, sizes)
    fwd = min(float(d1.min()), float(d2.min()))
    back = min(float((-d1).min()), float((-d2).min()))
    dom = fwd >= -tol
    return BlackwellResult(dominates=dom, equivalent=dom and back >= -tol, margin=fwd)


def check_equal_falsifiability(pair: TechnologyViewPair, effort_grid=None, tol: float = 1e-9,
                               alpha_points: int = 1001) -> bool:
    """True when ``(H, L)`` and ``(L, H)`` are Blackwell equivalent at every grid effort."""
    if effort_grid is None:
        effort_grid = np.linspace(0.0, pair.b, 101)
    for e in np.asarray(effort_grid, dtype=float):
        x = DichotomousExperiment.from_pair(pair, e)
        y = DichotomousExperiment.from_pair(pair, e, swap=True)
        if not blackwell_geq(x, y, tol=tol, alpha_points=alpha_points).equivalent:
            return False
    return True


def curve_is_valid(x: DichotomousExperiment, alphas=None, tol: float = 1e-12) -> bool:
    """Power curve is nondecreasing, concave, bounded below by the size and above by 1."""
    if alphas is None:
        alphas = np.linspace(0.0, 1.0, 201)
    alphas = np.asarray(alphas, dtype=float)
    pw = power_curve(x, alphas)
    if np.any(np.diff(pw) < -tol) or np.any(pw < alphas - tol) or np.any(pw > 1 + tol):
        return False
    slopes = np.diff(pw) / np.diff(alphas)
    return bool(np.all(np.diff(slopes) <= 1e-7 * (1 + np.abs(slopes[:-1]))))
