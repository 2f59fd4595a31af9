"""Technology-view families, the objective process, and assumption checks.

A technology view maps effort to an output distribution.  Each family here
holds the optimistic view ``H`` and the skeptical view ``L`` of one
technology and returns both distributions on a shared finite support.

Continuous families are binned onto a lattice anchored at the midpoint of
the two view means, with atoms spaced ``delta`` apart.  The spacing is
fixed for the family while the lattice moves with effort.  With symmetric
noise the ``L`` masses are the mirror image of the ``H`` masses, so the
discretized experiment depends on effort only through the gap between the
two means.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import ClassVar

import numpy as np
from scipy.special import ndtr

LABELS = ("H", "L")
GAUSS_TRUNC = 4.0  # Gaussian noise is truncated at this many standard deviations


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


def _check_label(label: str) -> str:
    if label not in LABELS:
        raise DomainError(f"unknown view label {label!r}; expected 'H' or 'L'")
    return label


# ---------------------------------------------------------------------------
# noise laws
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Noise:
    """Symmetric log-concave noise with bounded support ``[-half_width, half_width]``.

    ``kind`` is ``gaussian`` (``scale`` is sigma, truncated at four sigma),
    ``triangular`` or ``uniform`` (``scale`` is the half-width).
    """

    kind: str
    scale: float

    def __post_init__(self):
        if self.kind not in ("gaussian", "triangular", "uniform"):
            raise DomainError(f"unknown noise kind {self.kind!r}")
        if not self.scale > 0:
            raise DomainError("noise scale must be positive")

    @property
    def half_width(self) -> float:
        return GAUSS_TRUNC * self.scale if self.kind == "gaussian" else self.scale

    def cdf(self, z):
        z = np.asarray(z, dtype=float)
        s = self.scale
        if self.kind == "uniform":
            return np.clip((z + s) / (2.0 * s), 0.0, 1.0)
        if self.kind == "triangular":
            zc = np.clip(z, -s, s)
            return np.where(zc <= 0.0, (zc + s) ** 2 / (2 * s * s), 1.0 - (s - zc) ** 2 / (2 * s * s))
        lo = ndtr(-GAUSS_TRUNC)
        return np.clip((ndtr(z / s) - lo) / (ndtr(GAUSS_TRUNC) - lo), 0.0, 1.0)


# ---------------------------------------------------------------------------
# view pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TechnologyViewPair:
    """Base class: the ``H`` and ``L`` views of one technology on ``[0, b]``."""

    family: ClassVar[str] = ""
    b: float = 1.0

    def check_effort(self, e: float) -> float:
        e = float(e)
        if not (0.0 <= e <= self.b * (1 + 1e-12)) or math.isnan(e):
            raise DomainError(f"effort {e} outside [0, {self.b}]")
        return min(e, self.b)

    # subclasses provide ``_masses`` (vectorized over efforts) and ``analytic_mean``
    def masses(self, e: float):
        """Support and the two mass vectors ``(support, p_H, p_L)`` at effort ``e``."""
        return _cached_masses(self, self.check_effort(e))

    def grid_masses(self, efforts):
        """Stacked ``(support, p_H, p_L)`` arrays with one row per effort."""
        efforts = np.asarray(efforts, dtype=float)
        for e in (efforts.min(initial=0.0), efforts.max(initial=0.0)):
            self.check_effort(e)
        return self._masses(np.clip(efforts, 0.0, self.b))

    def probs(self, label: str, e: float) -> np.ndarray:
        _, ph, pl = self.masses(e)
        return ph if _check_label(label) == "H" else pl

    def mean(self, label: str, e: float) -> float:
        """Mean output of a view on the finite support."""
        x, ph, pl = self.masses(e)
        return float(np.dot(x, ph if _check_label(label) == "H" else pl))

    def grid_means(self, label: str, efforts) -> np.ndarray:
        x, ph, pl = self.grid_masses(efforts)
        return np.einsum("ij,ij->i", x, ph if _check_label(label) == "H" else pl)

    def cdf(self, label: str, e: float, y):
        """Analytic CDF of a view, used by the dominance checks."""
        raise NotImplementedError

    def cdf_points(self) -> np.ndarray:
        """Output points at which CDFs are compared."""
        raise NotImplementedError

    def locate(self, e: float, y) -> np.ndarray:
        """Index of the support atom (or lattice cell) holding ``y``; ``-1`` if none."""
        raise NotImplementedError

    @property
    def symmetric(self) -> bool:
        """True when the noise is symmetric (mirror-image masses)."""
        return False

    def describe(self) -> dict:
        return {"family": self.family, "b": self.b}


@lru_cache(maxsize=4096)
def _cached_masses(pair: TechnologyViewPair, e: float):
    x, ph, pl = pair._masses(np.array([e]))
    out = (x[0].copy(), ph[0].copy(), pl[0].copy())
    for arr in out:
        arr.setflags(write=False)
    return out


@dataclass(frozen=True)
class DiscreteBandit(TechnologyViewPair):
    """Breakthrough technology: output ``R`` (view H) or ``r`` (view L) with
    probability ``F(e) = min(1, lam * e)``, else zero.  With ``r = 0`` the two
    zero atoms merge and the support is ``{0, R}``.
    """

    family: ClassVar[str] = "DiscreteBandit"
    r: float = 0.0
    R: float = 1.0
    lam: float = 1.0

    def __post_init__(self):
        if not self.b > 0:
            raise DomainError("effort bound b must be positive")
        if self.r < 0 or not self.R > self.r:
            raise DomainError(f"need R > r >= 0, got r={self.r}, R={self.R}")
        if not self.lam > 0:
            raise DomainError("success slope lambda must be positive")

    def success(self, e):
        return np.minimum(1.0, self.lam * np.asarray(e, dtype=float))

    @property
    def support(self) -> np.ndarray:
        return np.array([0.0, self.R]) if self.r == 0 else np.array([0.0, self.r, self.R])

    def _masses(self, efforts):
        f = self.success(efforts)
        n = efforts.size
        if self.r == 0:
            ph = np.stack([1.0 - f, f], axis=1)
            pl = np.stack([np.ones(n), np.zeros(n)], axis=1)
        else:
            z = np.zeros(n)
            ph = np.stack([1.0 - f, z, f], axis=1)
            pl = np.stack([1.0 - f, f, z], axis=1)
        x = np.broadcast_to(self.support, ph.shape).copy()
        return x, ph, pl

    def analytic_mean(self, label: str, e: float) -> float:
        top = self.R if _check_label(label) == "H" else self.r
        return float(top * self.success(e))

    def cdf(self, label, e, y):
        y = np.asarray(y, dtype=float)
        f = float(self.success(e))
        top = self.R if _check_label(label) == "H" else self.r
        if top == 0:
            return np.where(y >= 0, 1.0, 0.0)
        return np.where(y < 0, 0.0, np.where(y < top, 1.0 - f, 1.0))

    def cdf_points(self):
        pts = {0.0, self.r, self.R}
        return np.array(sorted(pts))

    def locate(self, e, y):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        sup = self.support
        out = np.full(y.shape, -1, dtype=np.int64)
        for j, s in enumerate(sup):
            out[np.isclose(y, s, rtol=0, atol=1e-12 * max(1.0, abs(self.R)))] = j
        return out

    @property
    def symmetric(self) -> bool:
        return self.r > 0

    def describe(self):
        return {"family": self.family, "b": self.b, "r": self.r, "R": self.R, "lambda": self.lam}


@dataclass(frozen=True)
class LatticePair(TechnologyViewPair):
    """Continuous view pair ``Y = mu_view(e) + noise`` binned onto a moving lattice."""

    output_atoms: int = 201

    # --- subclass interface
    def mu(self, label: str, e):
        raise NotImplementedError

    @property
    def noise(self) -> Noise:
        raise NotImplementedError

    # --- lattice geometry
    def _validate_lattice(self):
        if not self.b > 0:
            raise DomainError("effort bound b must be positive")
        if self.output_atoms < 5 or self.output_atoms % 2 == 0:
            raise DomainError("output_atoms must be an odd integer >= 5")

    @property
    def half_atoms(self) -> int:
        return (self.output_atoms - 1) // 2

    @property
    def max_gap(self) -> float:
        # means are affine in effort, so the gap peaks at an endpoint
        return max(abs(self.gap(0.0)), abs(self.gap(self.b)))

    def gap(self, e):
        return self.mu("H", e) - self.mu("L", e)

    @property
    def delta(self) -> float:
        """Lattice spacing; an integer number of cells spans the noise support."""
        w = self.noise.half_width
        cells = max(2, int(math.floor(2.0 * w * self.half_atoms / (0.5 * self.max_gap + w))))
        return 2.0 * w / cells

    def lattice(self, e):
        e = np.asarray(e, dtype=float)
        mid = 0.5 * (self.mu("H", e) + self.mu("L", e))
        j = np.arange(-self.half_atoms, self.half_atoms + 1)
        return mid[..., None] + j * self.delta

    def _bin(self, offsets):
        """Masses of the noise over cells centred at ``offsets`` (last axis), renormalized."""
        d = self.delta
        n = offsets.shape[-1]
        edges = np.concatenate([offsets - 0.5 * d, offsets[..., -1:] + 0.5 * d], axis=-1)
        g = self.noise.cdf(edges)
        g[..., 0] = 0.0
        g[..., n] = 1.0
        p = np.diff(g, axis=-1)
        return p / p.sum(axis=-1, keepdims=True)

    def _masses(self, efforts):
        x = self.lattice(efforts)
        j = np.arange(-self.half_atoms, self.half_atoms + 1) * self.delta
        gap = np.asarray(self.gap(efforts), dtype=float)
        ph = self._bin(j[None, :] - 0.5 * gap[:, None])
        flat = gap == 0.0
        if np.any(flat):
            ph[flat] = 0.5 * (ph[flat] + ph[flat, ::-1])
        pl = ph[:, ::-1].copy()
        return x, ph, pl

    def analytic_mean(self, label, e):
        return float(self.mu(_check_label(label), e))

    def cdf(self, label, e, y):
        return self.noise.cdf(np.asarray(y, dtype=float) - self.mu(_check_label(label), e))

    def cdf_points(self, n: int = 401):
        lo = min(self.mu("H", 0.0), self.mu("L", 0.0), self.mu("H", self.b), self.mu("L", self.b))
        hi = max(self.mu("H", 0.0), self.mu("L", 0.0), self.mu("H", self.b), self.mu("L", self.b))
        w = self.noise.half_width
        return np.linspace(lo - w, hi + w, n)

    def locate(self, e, y):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        mid = 0.5 * (self.mu("H", e) + self.mu("L", e))
        j = np.floor((y - mid) / self.delta + 0.5).astype(np.int64)
        out = j + self.half_atoms
        out[(j < -self.half_atoms) | (j > self.half_atoms)] = -1
        return out

    @property
    def symmetric(self) -> bool:
        return True


@dataclass(frozen=True)
class AdditiveNoise(LatticePair):
    """Linear means ``slope_H * e`` and ``slope_L * e`` plus symmetric noise."""

    family: ClassVar[str] = "AdditiveNoise"
    slope_H: float = 1.0
    slope_L: float = 0.5
    noise_kind: str = "gaussian"
    noise_scale: float = 0.25

    def __post_init__(self):
        self._validate_lattice()
        Noise(self.noise_kind, self.noise_scale)
        if not self.slope_H > self.slope_L >= 0:
            raise DomainError("need slope_H > slope_L >= 0 (increasing means, widening gap)")

    @property
    def noise(self):
        return Noise(self.noise_kind, self.noise_scale)

    def mu(self, label, e):
        return (self.slope_H if label == "H" else self.slope_L) * np.asarray(e, dtype=float)

    def describe(self):
        return {"family": self.family, "b": self.b, "slope_H": self.slope_H, "slope_L": self.slope_L,
                "noise": self.noise_kind, "noise_scale": self.noise_scale,
                "output_atoms": self.output_atoms}


@dataclass(frozen=True)
class UniformLinear(LatticePair):
    """View H: ``gamma_H * e + U[-psi, psi]``; view L: ``U[-psi, psi]``."""

    family: ClassVar[str] = "UniformLinear"
    gamma_H: float = 1.0
    psi: float = 5.0

    def __post_init__(self):
        self._validate_lattice()
        if not (self.gamma_H > 0 and self.psi > 0):
            raise DomainError("need gamma_H > 0 and psi > 0")

    @property
    def noise(self):
        return Noise("uniform", self.psi)

    def mu(self, label, e):
        e = np.asarray(e, dtype=float)
        return self.gamma_H * e if label == "H" else 0.0 * e

    def describe(self):
        return {"family": self.family, "b": self.b, "gamma_H": self.gamma_H, "psi": self.psi,
                "output_atoms": self.output_atoms}


@dataclass(frozen=True)
class InverseInfoLinear(LatticePair):
    """View H: ``gamma0 + gamma1 * e + N(0, sigma^2)``; view L: ``gamma2 * e + N(0, sigma^2)``.

    The gap ``gamma0 + (gamma1 - gamma2) e`` shrinks with effort, so more
    effort makes the views harder to tell apart.
    """

    family: ClassVar[str] = "InverseInfoLinear"
    gamma0: float = 5.0
    gamma1: float = 0.5
    gamma2: float = 1.0
    sigma: float = 1.0

    def __post_init__(self):
        self._validate_lattice()
        if not self.sigma > 0:
            raise DomainError("sigma must be positive")
        if not self.gamma2 > self.gamma1 > 0:
            raise DomainError("need gamma2 > gamma1 > 0")
        if not self.gamma2 * self.b < self.gamma0 + self.gamma1 * self.b:
            raise DomainError("need gamma2 * b < gamma0 + gamma1 * b")

    @property
    def noise(self):
        return Noise("gaussian", self.sigma)

    def mu(self, label, e):
        e = np.asarray(e, dtype=float)
        return self.gamma0 + self.gamma1 * e if label == "H" else self.gamma2 * e

    def describe(self):
        return {"family": self.family, "b": self.b, "gamma0": self.gamma0, "gamma1": self.gamma1,
                "gamma2": self.gamma2, "sigma": self.sigma, "output_atoms": self.output_atoms}


FAMILIES = {cls.family: cls for cls in (DiscreteBandit, AdditiveNoise, UniformLinear, InverseInfoLinear)}


# ---------------------------------------------------------------------------
# single views
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TechnologyView:
    """One member (``H`` or ``L``) of a view pair."""

    pair: TechnologyViewPair
    label: str

    def __post_init__(self):
        _check_label(self.label)

    def distribution(self, e: float):
        x, ph, pl = self.pair.masses(e)
        return x, (ph if self.label == "H" else pl)


def evaluate_likelihood(view: TechnologyView, e: float, y: float) -> float:
    """Probability mass of output ``y`` at effort ``e``; zero when ``y`` is not an atom."""
    x, p = view.distribution(e)
    hit = np.flatnonzero(np.isclose(x, y, rtol=0.0, atol=1e-9 * max(1.0, float(np.abs(x).max()))))
    return float(p[hit[0]]) if hit.size else 0.0


def expected_output(source, e: float) -> float:
    """Mean output of a view or a true process at effort ``e``."""
    if isinstance(source, TechnologyView):
        return source.pair.mean(source.label, e)
    if isinstance(source, TrueProcess):
        return source.mean(e)
    raise TypeError(f"cannot take the mean of {type(source).__name__}")


# ---------------------------------------------------------------------------
# objective process
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QDist:
    """Output law under the true process at one effort.

    ``cells[j]`` is the index of the test signal that output ``values[j]``
    maps to, or ``-1`` when it falls outside every view's support.
    """

    values: np.ndarray
    probs: np.ndarray
    cells: np.ndarray

    @property
    def mean(self) -> float:
        return float(np.dot(self.values, self.probs))

    def on_cells(self, n: int) -> np.ndarray:
        """Mass per test signal (length ``n``); off-support mass is dropped."""
        out = np.zeros(n)
        ok = self.cells >= 0
        np.add.at(out, self.cells[ok], self.probs[ok])
        return out


@dataclass(frozen=True)
class TrueProcess:
    """Objective effort-to-output law of one technology.

    ``kind`` is ``H`` or ``L`` (a member of the pair), ``law`` (same noise
    as the pair with mean ``intercept + slope * e``; for the bandit,
    breakthrough value ``R`` with probability ``min(1, lam * e)``) or
    ``table`` (atoms with probabilities given on an effort grid and
    interpolated linearly in between).
    """

    pair: TechnologyViewPair
    kind: str = "H"
    params: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in ("H", "L", "law", "table"):
            raise DomainError(f"unknown true-process kind {self.kind!r}")
        p = dict(self.params)
        if self.kind == "table":
            atoms = np.asarray(p.get("atoms", ()), dtype=float)
            efforts = np.asarray(p.get("efforts", ()), dtype=float)
            probs = np.asarray(p.get("probs", ()), dtype=float)
            if atoms.ndim != 1 or efforts.ndim != 1 or probs.shape != (efforts.size, atoms.size):
                raise DomainError("table needs atoms[n], efforts[m] and probs[m][n]")
            if efforts.size < 2 or np.any(np.diff(efforts) <= 0):
                raise DomainError("table efforts must be strictly increasing with at least two points")
            if efforts[0] > 0 or efforts[-1] < self.pair.b:
                raise DomainError("table efforts must cover [0, b]")
            if np.any(probs < 0) or np.any(np.abs(probs.sum(axis=1) - 1.0) > 1e-12):
                raise DomainError("each table row must be a probability vector")
        if self.kind == "law":
            if isinstance(self.pair, DiscreteBandit):
                if "R" not in p or "lam" not in p:
                    raise DomainError("bandit law needs R and lam")
            elif "slope" not in p:
                raise DomainError("law needs a slope (and optional intercept)")

    @classmethod
    def member(cls, pair, label):
        return cls(pair, _check_label(label))

    @classmethod
    def law(cls, pair, **kw):
        return cls(pair, "law", tuple(sorted(kw.items())))

    @classmethod
    def table(cls, pair, atoms, efforts, probs):
        return cls(pair, "table", (("atoms", tuple(map(float, atoms))),
                                   ("efforts", tuple(map(float, efforts))),
                                   ("probs", tuple(tuple(map(float, row)) for row in probs))))

    @property
    def p(self) -> dict:
        return dict(self.params)

    def dist(self, e: float) -> QDist:
        return _cached_qdist(self, self.pair.check_effort(e))

    def _dist(self, e: float) -> QDist:
        pair = self.pair
        if self.kind in ("H", "L"):
            x, ph, pl = pair.masses(e)
            p = ph if self.kind == "H" else pl
            return QDist(x, p, np.arange(x.size))
        p = self.p
        if self.kind == "table":
            atoms = np.asarray(p["atoms"])
            rows = np.asarray(p["probs"])
            grid = np.asarray(p["efforts"])
            probs = np.array([np.interp(e, grid, rows[:, j]) for j in range(atoms.size)])
            probs = probs / probs.sum()
            return QDist(atoms, probs, pair.locate(e, atoms))
        if isinstance(pair, DiscreteBandit):
            f = min(1.0, p["lam"] * e)
            vals = np.array([0.0, p["R"]])
            return QDist(vals, np.array([1.0 - f, f]), pair.locate(e, vals))
        # continuous law binned on the pair's lattice; mass outside it is one rest atom
        mu = p.get("intercept", 0.0) + p["slope"] * e
        x = pair.lattice(np.array([e]))[0]
        d = pair.delta
        edges = np.concatenate([x - 0.5 * d, [x[-1] + 0.5 * d]])
        g = pair.noise.cdf(edges - mu)
        probs = np.diff(g)
        rest = float(g[0] + (1.0 - g[-1]))
        cells = np.arange(x.size)
        if rest > 1e-14:
            val = (mu - float(np.dot(x, probs))) / rest
            return QDist(np.append(x, val), np.append(probs, rest), np.append(cells, -1))
        return QDist(x, probs / probs.sum(), cells)

    def mean(self, e: float) -> float:
        return self.dist(e).mean

    def cdf(self, e: float, y):
        y = np.asarray(y, dtype=float)
        if self.kind in ("H", "L"):
            return self.pair.cdf(self.kind, e, y)
        p = self.p
        if self.kind == "law" and not isinstance(self.pair, DiscreteBandit):
            return self.pair.noise.cdf(y - (p.get("intercept", 0.0) + p["slope"] * e))
        q = self.dist(e)
        return np.array([q.probs[q.values <= yy].sum() for yy in np.atleast_1d(y)])

    def cdf_points(self) -> np.ndarray:
        pts = self.pair.cdf_points()
        if self.kind == "table":
            pts = np.union1d(pts, np.asarray(self.p["atoms"]))
        if self.kind == "law" and isinstance(self.pair, DiscreteBandit):
            pts = np.union1d(pts, [self.p["R"]])
        return pts

    def describe(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "law":
            out.update(self.p)
        return out


@lru_cache(maxsize=4096)
def _cached_qdist(process: TrueProcess, e: float) -> QDist:
    return process._dist(e)


# ---------------------------------------------------------------------------
# assumption checks
# ---------------------------------------------------------------------------


def _fosd_chain(cdf_rows: np.ndarray, tol: float):
    """(weak, strict) FOSD monotonicity along consecutive rows of a CDF table."""
    diff = cdf_rows[1:] - cdf_rows[:-1]  # later row minus earlier row
    weak = bool(np.all(diff <= tol))
    strict = weak and bool(np.all(diff.min(axis=1) < -tol))
    return weak, strict


def fosd_report(cdf_fn, efforts, points, tol: float = 1e-12):
    rows = np.array([np.asarray(cdf_fn(e, points), dtype=float) for e in efforts])
    return _fosd_chain(rows, tol)


def validate_assumptions(pair: TechnologyViewPair, payoff=None, grid: int = 401,
                         true_process: TrueProcess | None = None, alpha_points: int = 1001) -> dict:
    """Check the structural assumptions on a view pair; failures go in the report.

    Flags: FOSD monotonicity in effort (strict for Q and H, weak for L); H dominating L
    at every positive effort; unique static optima with ``b > e_H > e_L >= 0``;
    Blackwell monotonicity of the H-vs-L experiment in effort (``increasing``,
    ``decreasing`` or ``neither``).
    """
    from .experiments import DichotomousExperiment, blackwell_geq
    from .payoffs import PayoffSpec, static_optimum

    if grid < 3:
        raise DomainError("grid resolution must be at least 3 points")
    payoff = payoff if payoff is not None else PayoffSpec()
    efforts = np.linspace(0.0, pair.b, grid)
    pts = pair.cdf_points()
    q = true_process if true_process is not None else TrueProcess.member(pair, "H")

    _, fosd_h = fosd_report(lambda e, y: pair.cdf("H", e, y), efforts, pts)
    fosd_l, _ = fosd_report(lambda e, y: pair.cdf("L", e, y), efforts, pts)
    _, fosd_q = fosd_report(q.cdf, efforts, q.cdf_points())
    # dominance: CDF_H <= CDF_L everywhere, strictly somewhere, at each e > 0
    dom = not np.any(pair.cdf("H", 0.0, pts) - pair.cdf("L", 0.0, pts) > 1e-12)
    for e in efforts[1:]:
        if not dom:
            break
        d = pair.cdf("H", e, pts) - pair.cdf("L", e, pts)
        dom = not (np.any(d > 1e-12) or not np.any(d < -1e-12))

    opt_h = static_optimum(pair, "H", payoff, grid)
    opt_l = static_optimum(pair, "L", payoff, grid)
    e_h, e_l = opt_h.effort, opt_l.effort
    unique = (not opt_h.tie) and (not opt_l.tie)
    ordered = pair.b > e_h > e_l >= 0.0

    # informativeness along the effort grid
    inc = dec = True
    for e0, e1 in zip(efforts[:-1], efforts[1:]):
        x0 = DichotomousExperiment.from_pair(pair, e0)
        x1 = DichotomousExperiment.from_pair(pair, e1)
        up = blackwell_geq(x1, x0, alpha_points=alpha_points)
        inc = inc and up.dominates and not up.equivalent
        dec = dec and blackwell_geq(x0, x1, alpha_points=alpha_points).dominates and not up.equivalent
        if not inc and not dec:
            break
    if inc and not dec:
        direction = "increasing"
    elif dec and not inc:
        direction = "decreasing"
    else:
        direction = "neither"
    x_zero = DichotomousExperiment.from_pair(pair, 0.0)
    return {
        "family": pair.family,
        "fosd_Q": fosd_q,
        "fosd_H": fosd_h,
        "fosd_L": fosd_l,
        "dominance_H_over_L": dom,
        "unique_maximizers": unique,
        "e_H": e_h,
        "e_L": e_l,
        "efforts_ordered": ordered,
        "informativeness": direction,
        "informativeness_monotone": direction == "increasing",
        "uninformative_at_zero": x_zero.is_uninformative,
    }
