"""Model-switching rule: a size-alpha likelihood-ratio test on first-period output.

A player holding model ``m_own`` tests it (null) against the rival's model
``m_rival`` (alternative) using both players' first-period outputs.  The
test rejects, and the player adopts the rival's model, when the likelihood
ratio exceeds the critical value; on the boundary it rejects with
probability ``q``.  Outputs impossible under both models never trigger a
switch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .views import DomainError, TechnologyViewPair, TrueProcess

Model = tuple  # one view label per technology, e.g. ("H",) or ("H", "L")


def check_model(model, n_tech: int) -> tuple:
    model = tuple(model)
    if len(model) != n_tech or any(m not in ("H", "L") for m in model):
        raise DomainError(f"model {model!r} must give 'H' or 'L' for each of {n_tech} technologies")
    return model


@dataclass(frozen=True, eq=False)
class SwitchTest:
    """Randomized likelihood-ratio test over joint first-period outputs.

    ``weights[i, j]`` is the switch probability when Ann's output is
    signal ``i`` and Bob's is signal ``j``.
    """

    owner: tuple
    rival: tuple
    efforts: tuple
    techs: tuple
    alpha: float
    critical: float
    q: float
    weights: np.ndarray
    p_null: np.ndarray
    p_alt: np.ndarray
    views: tuple

    @property
    def degenerate(self) -> bool:
        return self.owner == self.rival

    @property
    def size(self) -> float:
        return float(np.sum(self.weights * self.p_null))

    @property
    def power(self) -> float:
        return float(np.sum(self.weights * self.p_alt))

    def factor(self, player: int):
        k = self.techs[player]
        return self.views[k], self.efforts[player]


def build_test(m_own, m_rival, efforts, techs, views: Sequence[TechnologyViewPair],
               alpha: float) -> SwitchTest:
    """Construct the switch test of the player holding ``m_own``.

    ``efforts`` and ``techs`` are the first-period actions of (Ann, Bob);
    ``techs`` index into ``views``.
    """
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"size alpha={alpha} outside [0, 1]")
    views = tuple(views)
    m_own = check_model(m_own, len(views))
    m_rival = check_model(m_rival, len(views))
    techs = tuple(int(k) for k in techs)
    efforts = tuple(views[k].check_effort(e) for k, e in zip(techs, efforts))
    fa_null = views[techs[0]].probs(m_own[techs[0]], efforts[0])
    fa_alt = views[techs[0]].probs(m_rival[techs[0]], efforts[0])
    fb_null = views[techs[1]].probs(m_own[techs[1]], efforts[1])
    fb_alt = views[techs[1]].probs(m_rival[techs[1]], efforts[1])
    p_null = np.outer(fa_null, fb_null)
    p_alt = np.outer(fa_alt, fb_alt)
    if m_own == m_rival:
        w = np.zeros_like(p_null)
        return SwitchTest(m_own, m_rival, efforts, techs, alpha, float("inf"), 0.0, w, p_null, p_alt, views)
    t = kernels.np_test(p_null.ravel(), p_alt.ravel(), alpha)
    return SwitchTest(m_own, m_rival, efforts, techs, alpha, t.critical, t.q,
                      t.weights.reshape(p_null.shape), p_null, p_alt, views)


def factor_masses(test: SwitchTest, under, player: int) -> np.ndarray:
    """Mass on one player's test signals under a model or a true process."""
    pair, e = test.factor(player)
    k = test.techs[player]
    if isinstance(under, str) and under in ("null", "alt"):
        model = test.owner if under == "null" else test.rival
        return pair.probs(model[k], e)
    under = tuple(under)
    if all(isinstance(u, TrueProcess) for u in under):
        if len(under) != len(test.views):
            raise DomainError("true process must give one law per technology")
        return under[k].dist(e).on_cells(pair.probs("H", e).size)
    model = check_model(under, len(test.views))
    return pair.probs(model[k], e)


def switch_probability(test: SwitchTest, under) -> float:
    """Exact probability that the test switches.

    ``under`` is ``"null"``, ``"alt"``, a model (tuple of labels), a tuple
    of :class:`TrueProcess` (one per technology), or an explicit pair of
    mass vectors on the two players' signals.
    """
    if isinstance(under, tuple) and len(under) == 2 and all(isinstance(u, np.ndarray) for u in under):
        pa, pb = under
        if pa.shape != (test.weights.shape[0],) or pb.shape != (test.weights.shape[1],):
            raise DomainError("mass vectors do not match the test's signal spaces")
    else:
        pa = factor_masses(test, under, 0)
        pb = factor_masses(test, under, 1)
    return float(pa @ test.weights @ pb)


def locate_outcomes(test: SwitchTest, outcomes):
    """Signal indices of output pairs ``(y_A, y_B)``; ``-1`` marks off-support output."""
    ia = test.views[test.techs[0]].locate(test.efforts[0], np.atleast_1d(outcomes[0]))
    ib = test.views[test.techs[1]].locate(test.efforts[1], np.atleast_1d(outcomes[1]))
    return ia, ib


def switch_weights_at(test: SwitchTest, ia, ib) -> np.ndarray:
    """Rejection probability at signal indices; zero wherever either index is ``-1``."""
    ia = np.asarray(ia)
    ib = np.asarray(ib)
    ok = (ia >= 0) & (ib >= 0)
    out = np.zeros(np.broadcast(ia, ib).shape)
    out[ok] = test.weights[ia[ok], ib[ok]]
    return out


def apply_test(test: SwitchTest, outcomes, rng: np.random.Generator) -> bool:
    """Realize the rule on one outcome pair; the boundary draw uses ``rng``."""
    ia, ib = locate_outcomes(test, outcomes)
    w = float(switch_weights_at(test, ia, ib)[0])
    if w <= 0.0:
        return False
    if w >= 1.0:
        return True
    return bool(rng.random() < w)


def power_vs_effort(m_own, m_rival, player: int, efforts, rival_effort: float, techs,
                    views: Sequence[TechnologyViewPair], alpha: float) -> np.ndarray:
    """Power of the ``m_own``-vs-``m_rival`` test as one player's effort varies.

    Computed with the fast kernel.  ``player`` (0 for Ann, 1 for Bob) is the
    one whose effort runs over ``efforts``; the other plays ``rival_effort``.
    """
    views = tuple(views)
    m_own = check_model(m_own, len(views))
    m_rival = check_model(m_rival, len(views))
    efforts = np.asarray(efforts, dtype=float)
    if m_own == m_rival:
        return np.zeros(efforts.size)
    k_self, k_other = techs[player], techs[1 - player]
    pair = views[k_self]
    x, ph, pl = pair.grid_masses(efforts)
    rows_null = ph if m_own[k_self] == "H" else pl
    rows_alt = ph if m_rival[k_self] == "H" else pl
    other = views[k_other]
    o_null = other.probs(m_own[k_other], rival_effort)
    o_alt = other.probs(m_rival[k_other], rival_effort)
    return kernels.np_power_product_rows(rows_null, rows_alt, o_null, o_alt, alpha)
