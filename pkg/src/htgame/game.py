"""Game configuration, second-period optima and the equilibrium solver.

In the second period each player simply maximizes expected own utility
under the model it then holds.  In the first period a player whose
rival disagrees also values the chance that its own output converts the rival:

    E_own[u(Y, e) | e, k] + 1{models differ} * delta * phi * Delta

where ``phi`` is the power of the rival's switch test computed under the
player's own model and ``Delta`` is the gain in expected externality if
the rival adopts the player's model.  ``myopic`` mode sets ``delta = 0``;
``unaware`` mode drops the term and disables switching altogether.

First-period equilibria are found by simultaneous best-response
iteration on the effort grid from several starting profiles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Sequence

import numpy as np

from .payoffs import TIE_RTOL, ArgmaxResult, PayoffSpec, grid_argmax, static_optimum
from .switching import check_model, power_vs_effort
from .views import DomainError, TechnologyViewPair, TrueProcess

MODES = ("full", "myopic", "unaware")
MAX_ITER = 500
TECH_NAMES = ("x", "y")


class NonConvergence(RuntimeError):
    """Best-response iteration cycled without reaching a pure equilibrium."""

    def __init__(self, message: str, cycles: list):
        super().__init__(message)
        self.cycles = cycles


@dataclass(frozen=True)
class Action:
    effort: float
    tech: int

    def key(self):
        return (round(self.effort, 12), self.tech)


@dataclass(frozen=True)
class GameConfig:
    """Everything needed to solve and evaluate one game.

    ``views`` and ``truth`` hold one entry per technology; ``models`` is the
    pair of initial models (Ann, Bob); ``assignment`` optionally fixes the
    first-period technologies when there are two.
    """

    views: tuple
    truth: tuple
    payoff: PayoffSpec
    models: tuple
    alpha: float = 0.0
    delta: float = 1.0
    mode: str = "full"
    assignment: tuple | None = None
    effort_points: int = 401
    seed: int = 0

    def __post_init__(self):
        views = tuple(self.views)
        object.__setattr__(self, "views", views)
        object.__setattr__(self, "truth", tuple(self.truth))
        if len(views) not in (1, 2):
            raise DomainError("a game has one or two technologies")
        if len(self.truth) != len(views):
            raise DomainError("need one true process per technology")
        for t, v in zip(self.truth, views):
            if t.pair is not v:
                raise DomainError("each true process must be built on its technology's view pair")
        ma, mb = self.models
        object.__setattr__(self, "models", (check_model(ma, len(views)), check_model(mb, len(views))))
        if not 0.0 <= self.alpha <= 1.0:
            raise DomainError("alpha must lie in [0, 1]")
        if not 0.0 <= self.delta <= 1.0:
            raise DomainError("delta must lie in [0, 1]")
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}")
        if self.assignment is not None:
            if len(views) != 2:
                raise DomainError("a fixed first-period assignment needs two technologies")
            a = tuple(int(k) for k in self.assignment)
            if len(a) != 2 or any(k not in (0, 1) for k in a):
                raise DomainError("assignment must name a technology for each player")
            object.__setattr__(self, "assignment", a)
        if self.effort_points < 3:
            raise DomainError("effort grid needs at least 3 points")

    @property
    def n_tech(self) -> int:
        return len(self.views)

    @property
    def disagree(self) -> bool:
        return self.models[0] != self.models[1]

    @property
    def effective_delta(self) -> float:
        return 0.0 if self.mode == "myopic" else self.delta

    def with_(self, **kw) -> "GameConfig":
        return replace(self, **kw)

    def all_models(self):
        return [tuple(m) for m in itertools.product("HL", repeat=self.n_tech)]


# ---------------------------------------------------------------------------
# second period
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SecondPeriodChoice:
    effort: float
    tech: int
    value: float
    tie: bool


def solve_second_period(model, payoff: PayoffSpec, views: Sequence[TechnologyViewPair],
                        grid: int = 401) -> SecondPeriodChoice:
    """Static optimum of a model: best technology and its optimal effort.

    Technologies are ranked by their maximized expected utility; ties go to
    the first technology.
    """
    views = tuple(views)
    model = check_model(model, len(views))
    best = None
    tie = False
    for k, pair in enumerate(views):
        r = static_optimum(pair, model[k], payoff, grid)
        tie = tie or r.tie
        if best is None or r.value > best[1].value + TIE_RTOL * (1 + abs(best[1].value)):
            best = (k, r)
    k, r = best
    return SecondPeriodChoice(r.effort, k, r.value, tie)


def view_mean(views, model, action: Action) -> float:
    """Mean output of an action under a model's view of the chosen technology."""
    return views[action.tech].mean(model[action.tech], action.effort)


def persuasion_gain(config: GameConfig, player: int, grid: int | None = None) -> float:
    """``Delta``: subjective externality gain if the rival adopts the player's model."""
    grid = grid or config.effort_points
    own = config.models[player]
    rival = config.models[1 - player]
    convert = solve_second_period(own, config.payoff, config.views, grid)
    stay = solve_second_period(rival, config.payoff, config.views, grid)
    gain = (view_mean(config.views, own, Action(convert.effort, convert.tech))
            - view_mean(config.views, own, Action(stay.effort, stay.tech)))
    return float(config.payoff.beta * gain)


def persuasion_weight(config: GameConfig, player: int) -> float:
    """Coefficient multiplying the rival's switch probability in the objective."""
    if not config.disagree or config.mode == "unaware":
        return 0.0
    d = config.effective_delta
    if d == 0.0:
        return 0.0
    return d * persuasion_gain(config, player)


# ---------------------------------------------------------------------------
# first period
# ---------------------------------------------------------------------------


@lru_cache(maxsize=256)
def _grid_expected_u(pair: TechnologyViewPair, label: str, payoff: PayoffSpec, points: int):
    efforts = np.linspace(0.0, pair.b, points)
    x, ph, pl = pair.grid_masses(efforts)
    vals = payoff.expected_u(x, ph if label == "H" else pl, efforts)
    vals.setflags(write=False)
    return efforts, vals


def _expected_u(pair, label, payoff, efforts, points):
    grid, vals = _grid_expected_u(pair, label, payoff, points)
    efforts = np.asarray(efforts, dtype=float)
    if efforts.shape == grid.shape and np.array_equal(efforts, grid):
        return vals
    x, ph, pl = pair.grid_masses(efforts)
    return payoff.expected_u(x, ph if label == "H" else pl, efforts)


def rival_switch_probability(config: GameConfig, player: int, efforts, tech: int,
                             rival: Action) -> np.ndarray:
    """``phi``: chance the rival's test switches to the player's model, under that model."""
    own = config.models[player]
    other = config.models[1 - player]
    techs = (tech, rival.tech) if player == 0 else (rival.tech, tech)
    return power_vs_effort(other, own, player, efforts, rival.effort, techs, config.views, config.alpha)


def first_period_objective(player: int, efforts, tech: int, rival: Action, config: GameConfig,
                           weight: float | None = None) -> np.ndarray:
    """Player's first-period objective at each effort in ``efforts`` on technology ``tech``."""
    efforts = np.atleast_1d(np.asarray(efforts, dtype=float))
    own = config.models[player]
    pair = config.views[tech]
    base = _expected_u(pair, own[tech], config.payoff, efforts, config.effort_points)
    w = persuasion_weight(config, player) if weight is None else weight
    if w == 0.0:
        return np.array(base, dtype=float)
    return base + w * rival_switch_probability(config, player, efforts, tech, rival)


def allowed_techs(config: GameConfig, player: int):
    if config.assignment is not None:
        return (config.assignment[player],)
    return tuple(range(config.n_tech))


class _Responder:
    """Memoized best responses for one configuration."""

    def __init__(self, config: GameConfig):
        self.config = config
        self.weights = (persuasion_weight(config, 0), persuasion_weight(config, 1))
        self.cache: dict = {}
        self.ties: list = []

    def __call__(self, player: int, rival: Action) -> Action:
        key = (player, rival.key())
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        cfg = self.config
        w = self.weights[player]
        best: tuple[int, ArgmaxResult] | None = None
        for k in allowed_techs(cfg, player):
            if w == 0.0:
                r = static_optimum(cfg.views[k], cfg.models[player][k], cfg.payoff, cfg.effort_points)
            else:
                r = grid_argmax(lambda e, k=k: first_period_objective(player, e, k, rival, cfg, w),
                                cfg.views[k].b, cfg.effort_points)
            if r.tie:
                self.ties.append((player, rival.key(), k))
            if best is None or r.value > best[1].value + TIE_RTOL * (1 + abs(best[1].value)):
                best = (k, r)
        out = Action(best[1].effort, best[0])
        self.cache[key] = out
        return out


@dataclass
class Equilibrium:
    ann: Action
    bob: Action
    start: tuple
    iterations: int
    method: str

    @property
    def actions(self):
        return (self.ann, self.bob)


@dataclass
class StrategyProfile:
    """Solved strategies for one configuration.

    ``second_period[model]`` is the static optimum of every model (it does
    not depend on the rival's model).  ``first_period`` lists the distinct
    pure first-period equilibria found.
    """

    config: GameConfig
    second_period: dict
    first_period: list
    cycles: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    def second_action(self, model) -> Action:
        c = self.second_period[tuple(model)]
        return Action(c.effort, c.tech)


def _iterate(respond: _Responder, start: tuple, gauss_seidel: bool):
    state = start
    seen = {(state[0].key(), state[1].key()): 0}
    history = [state]
    for it in range(1, MAX_ITER + 1):
        a, b = state
        if gauss_seidel:
            na = respond(0, b)
            nb = respond(1, na)
        else:
            na = respond(0, b)
            nb = respond(1, a)
        new = (na, nb)
        if new[0].key() == a.key() and new[1].key() == b.key():
            return new, it, None
        key = (na.key(), nb.key())
        if key in seen:
            return None, it, history[seen[key]:]
        seen[key] = len(history)
        history.append(new)
        state = new
    return None, MAX_ITER, history[-10:]


def starting_profiles(config: GameConfig, second: dict) -> list:
    """Static optima of the initial models, then the effort-box corners."""
    sa = second[config.models[0]]
    sb = second[config.models[1]]
    ka = config.assignment[0] if config.assignment else sa.tech
    kb = config.assignment[1] if config.assignment else sb.tech
    starts = [(Action(sa.effort, ka), Action(sb.effort, kb))]
    ba, bb = config.views[ka].b, config.views[kb].b
    for ea, eb in ((0.0, 0.0), (0.0, bb), (ba, 0.0), (ba, bb)):
        starts.append((Action(ea, ka), Action(eb, kb)))
    return starts


def solve_equilibrium(config: GameConfig, starts: list | None = None) -> StrategyProfile:
    """Pure first-period equilibria by best-response iteration.

    Jacobi (simultaneous) updates are tried first from every starting
    profile; a start that cycles is retried with Gauss-Seidel updates.  If
    no start reaches a fixed point, :class:`NonConvergence` is raised with
    the cycles found.
    """
    grid = config.effort_points
    second = {m: solve_second_period(m, config.payoff, config.views, grid) for m in config.all_models()}
    respond = _Responder(config)
    if starts is None:
        starts = starting_profiles(config, second)
    found: dict = {}
    cycles = []
    for start in starts:
        for method in ("jacobi", "gauss-seidel"):
            fp, its, cyc = _iterate(respond, start, gauss_seidel=(method == "gauss-seidel"))
            if fp is not None:
                key = (fp[0].key(), fp[1].key())
                if key not in found:
                    found[key] = Equilibrium(fp[0], fp[1], (start[0].key(), start[1].key()), its, method)
                break
            cycles.append({"start": (start[0].key(), start[1].key()), "method": method,
                           "cycle": [(s[0].key(), s[1].key()) for s in cyc]})
    if not found:
        raise NonConvergence("best-response iteration cycled from every starting profile", cycles)
    diagnostics = {
        "weights": respond.weights,
        "second_period_ties": any(c.tie for c in second.values()),
        "first_period_ties": respond.ties,
        "best_responses": len(respond.cache),
    }
    return StrategyProfile(config, second, list(found.values()), cycles, diagnostics)


def lemma_effort_check(config: GameConfig) -> dict:
    """Compare first-period efforts of a disagreeing pair with like-minded pairs.

    Needs one technology and initial models (H, L).  Checks that the
    optimist works at least as hard as with a like-minded partner and the
    skeptic no harder; all equilibria found must satisfy it.
    """
    if config.n_tech != 1 or config.models != (("H",), ("L",)):
        raise DomainError("effort comparison needs one technology and models (H, L)")
    dis = solve_equilibrium(config)
    hh = solve_equilibrium(config.with_(models=(("H",), ("H",))))
    ll = solve_equilibrium(config.with_(models=(("L",), ("L",))))
    ann_hl = [eq.ann.effort for eq in dis.first_period]
    bob_hl = [eq.bob.effort for eq in dis.first_period]
    ann_hh = hh.first_period[0].ann.effort
    bob_ll = ll.first_period[0].bob.effort
    step = config.views[0].b / (config.effort_points - 1) / 10
    return {
        "ann_disagree": ann_hl,
        "ann_like_minded": ann_hh,
        "bob_disagree": bob_hl,
        "bob_like_minded": bob_ll,
        "optimist_works_harder": all(a >= ann_hh - 1e-12 for a in ann_hl),
        "optimist_strictly": all(a > ann_hh + 0.5 * step for a in ann_hl),
        "skeptic_works_less": all(b <= bob_ll + 1e-12 for b in bob_hl),
        "skeptic_strictly": all(b < bob_ll - 0.5 * step for b in bob_hl),
    }
