"""Expected team output under the true process and the comparison verifiers.

Total output adds both players' expected output over both periods.  A
player's second-period output depends on first-period outcomes only
through whether that player switched models, so the exact evaluation needs each
player's switch probability under the true process and the true mean
output of each model's static optimum.  The Monte Carlo evaluator draws
whole sample paths instead and serves as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .game import (TECH_NAMES, Action, GameConfig, NonConvergence, StrategyProfile, persuasion_gain,
                   rival_switch_probability, solve_equilibrium)
from .experiments import check_equal_falsifiability
from .payoffs import static_optimum
from .switching import build_test, switch_probability, switch_weights_at
from .views import DomainError, InverseInfoLinear, TrueProcess

STRICT_TOL = 1e-9


@dataclass
class TeamOutcome:
    """Expected outputs, switch probabilities and payoffs of one equilibrium.

    ``outputs[i][t]`` is player ``i``'s expected output in period ``t + 1``.
    ``switch`` holds Ann's, Bob's and the joint switch probability.
    """

    actions: tuple
    outputs: tuple
    total: float
    switch: tuple
    payoffs: tuple
    method: str
    n: int | None = None
    seed: int | None = None
    std_error: float | None = None
    second_actions: dict = field(default_factory=dict)


def _q_u(config, tech, action: Action):
    q = config.truth[tech].dist(action.effort)
    return float(np.dot(q.probs, config.payoff.u(q.values, action.effort)))


def _tests(config: GameConfig, first: tuple):
    (a, b) = first
    ma, mb = config.models
    e = (a.effort, b.effort)
    k = (a.tech, b.tech)
    if config.mode == "unaware" or ma == mb:
        return None, None
    return (build_test(ma, mb, e, k, config.views, config.alpha),
            build_test(mb, ma, e, k, config.views, config.alpha))


def expected_team_output(config: GameConfig, profile: StrategyProfile, equilibrium: int = 0,
                         method: str = "exact", n: int | None = None, seed: int | None = None,
                         ) -> TeamOutcome:
    """Evaluate one equilibrium of ``profile`` under ``config.truth``.

    ``method`` is ``exact`` (enumeration of outcomes and switch events) or
    ``monte_carlo`` (``n`` seeded sample paths).
    """
    if method not in ("exact", "monte_carlo"):
        raise DomainError(f"unknown evaluation method {method!r}")
    eq = profile.first_period[equilibrium]
    first = eq.actions
    ma, mb = config.models
    after = {"stay": (profile.second_action(ma), profile.second_action(mb)),
             "switch": (profile.second_action(mb), profile.second_action(ma))}
    test_a, test_b = _tests(config, first)
    if method == "monte_carlo":
        if seed is None:
            raise DomainError("Monte Carlo evaluation needs a seed")
        return _monte_carlo(config, first, after, test_a, test_b, int(n or 1_000_000), int(seed))

    def mean(act: Action):
        return config.truth[act.tech].mean(act.effort)

    if test_a is None:
        pa = pb = pab = 0.0
    else:
        pa = switch_probability(test_a, config.truth)
        pb = switch_probability(test_b, config.truth)
        qa = config.truth[first[0].tech].dist(first[0].effort)
        qb = config.truth[first[1].tech].dist(first[1].effort)
        na, nb = test_a.weights.shape
        pab = float(qa.on_cells(na) @ (test_a.weights * test_b.weights) @ qb.on_cells(nb))
    y1 = (mean(first[0]), mean(first[1]))
    y2a = pa * mean(after["switch"][0]) + (1 - pa) * mean(after["stay"][0])
    y2b = pb * mean(after["switch"][1]) + (1 - pb) * mean(after["stay"][1])
    beta = config.payoff.beta
    u1 = (_q_u(config, first[0].tech, first[0]), _q_u(config, first[1].tech, first[1]))
    u2a = pa * _q_u(config, after["switch"][0].tech, after["switch"][0]) + (1 - pa) * _q_u(
        config, after["stay"][0].tech, after["stay"][0])
    u2b = pb * _q_u(config, after["switch"][1].tech, after["switch"][1]) + (1 - pb) * _q_u(
        config, after["stay"][1].tech, after["stay"][1])
    d = config.delta
    payoffs = (u1[0] + beta * y1[1] + d * (u2a + beta * y2b),
               u1[1] + beta * y1[0] + d * (u2b + beta * y2a))
    outputs = ((y1[0], y2a), (y1[1], y2b))
    total = y1[0] + y1[1] + y2a + y2b
    return TeamOutcome(first, outputs, total, (pa, pb, pab), payoffs, "exact",
                       second_actions={k: v for k, v in after.items()})


def _draw(rng, qdist, size):
    idx = rng.choice(qdist.values.size, size=size, p=qdist.probs)
    return qdist.values[idx], qdist.cells[idx]


def _monte_carlo(config, first, after, test_a, test_b, n, seed):
    # independent streams per task, derived from the root seed by fixed offsets
    streams = [np.random.default_rng([seed, k]) for k in range(6)]
    qa = config.truth[first[0].tech].dist(first[0].effort)
    qb = config.truth[first[1].tech].dist(first[1].effort)
    y1a, ca = _draw(streams[0], qa, n)
    y1b, cb = _draw(streams[1], qb, n)
    if test_a is None:
        sa = np.zeros(n, dtype=bool)
        sb = np.zeros(n, dtype=bool)
    else:
        # boundary randomization is independent across players
        sa = streams[2].random(n) < switch_weights_at(test_a, ca, cb)
        sb = streams[3].random(n) < switch_weights_at(test_b, ca, cb)
    y2 = []
    for player, switched, rng in ((0, sa, streams[4]), (1, sb, streams[5])):
        out = np.empty(n)
        for flag, key in ((False, "stay"), (True, "switch")):
            mask = switched == flag
            act = after[key][player]
            out[mask], _ = _draw(rng, config.truth[act.tech].dist(act.effort), int(mask.sum()))
        y2.append(out)
    paths = y1a + y1b + y2[0] + y2[1]
    outputs = ((float(y1a.mean()), float(y2[0].mean())), (float(y1b.mean()), float(y2[1].mean())))
    total = float(paths.mean())
    se = float(paths.std(ddof=1) / np.sqrt(n))
    switch = (float(sa.mean()), float(sb.mean()), float((sa & sb).mean()))
    return TeamOutcome(first, outputs, total, switch, (float("nan"), float("nan")), "monte_carlo",
                       n=n, seed=seed, std_error=se, second_actions=dict(after))


# ---------------------------------------------------------------------------
# most productive equilibrium
# ---------------------------------------------------------------------------


def _solve_key(config: GameConfig):
    return (config.views, config.payoff, config.models, config.alpha, config.delta, config.mode,
            config.assignment, config.effort_points)


@lru_cache(maxsize=512)
def _solve_cached(key, config: GameConfig) -> StrategyProfile:
    return solve_equilibrium(config)


def solve(config: GameConfig) -> StrategyProfile:
    """Solve with memoization; the true process does not affect strategies."""
    return _solve_cached(_solve_key(config), config)


@dataclass
class TeamValue:
    value: float
    outcome: TeamOutcome
    profile: StrategyProfile
    all_totals: list


def team_output(config: GameConfig, models=None, truth=None, mode=None, assignment="keep") -> TeamValue:
    """``Y-hat``: expected output of the most productive equilibrium found."""
    kw = {}
    if models is not None:
        kw["models"] = tuple(tuple(m) for m in models)
    if truth is not None:
        kw["truth"] = tuple(truth)
    if mode is not None:
        kw["mode"] = mode
    if assignment != "keep":
        kw["assignment"] = assignment
    cfg = config.with_(**kw) if kw else config
    profile = solve(cfg)
    outs = [expected_team_output(cfg, profile, i) for i in range(len(profile.first_period))]
    best = max(range(len(outs)), key=lambda i: outs[i].total)
    return TeamValue(outs[best].total, outs[best], profile, [o.total for o in outs])


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------


@dataclass
class Verdict:
    """One checked (or reported) inequality ``lhs relation rhs``."""

    name: str
    lhs: float
    relation: str
    rhs: float
    holds: bool | None
    strict: bool | None = None
    note: str = ""

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    def line(self) -> str:
        status = {True: "HOLDS", False: "FAILS", None: "INFO"}[self.holds]
        strict = "" if self.strict is None else (" (strict)" if self.strict else " (not strict)")
        note = f"  [{self.note}]" if self.note else ""
        return (f"{status:5s} {self.name}: {self.lhs:.12g} {self.relation} {self.rhs:.12g}"
                f"  margin={self.margin:.6g}{strict}{note}")


def _relation(lhs, rhs, tol=STRICT_TOL):
    if lhs > rhs + tol:
        return ">"
    if lhs < rhs - tol:
        return "<"
    return "="


def _geq(name, lhs, rhs, note="", tol=STRICT_TOL):
    return Verdict(name, lhs, ">=", rhs, lhs >= rhs - tol, lhs > rhs + tol, note)


def _leq(name, lhs, rhs, note="", tol=STRICT_TOL):
    return Verdict(name, lhs, "<=", rhs, lhs <= rhs + tol, lhs < rhs - tol, note)


def _report(name, lhs, rhs, note=""):
    return Verdict(name, lhs, _relation(lhs, rhs), rhs, None, None, note)


def _one_tech_truths(config):
    pair = config.views[0]
    return {"H": (TrueProcess.member(pair, "H"),), "L": (TrueProcess.member(pair, "L"),)}


def effort_target(config: GameConfig, truth: tuple, factor: float = 4.0):
    """Effort at which true mean output is ``factor`` times its value at ``e_H`` (bisection)."""
    pair = config.views[0]
    e_h = static_optimum(pair, "H", config.payoff, config.effort_points).effort
    q = truth[0]
    target = factor * q.mean(e_h)
    lo, hi = e_h, pair.b
    if q.mean(hi) < target:
        return None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if q.mean(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-14:
            break
    return hi


def effort_slopes(config: GameConfig, efforts, bob_effort: float):
    """Slopes in Ann's effort of Ann's expected utility under H and of Bob's switch probability.

    Central differences with a step of one effort-grid cell, one-sided at
    the ends of ``[0, b]``.  Ann holds H and Bob holds L.
    """
    cfg = config.with_(models=(("H",), ("L",)))
    pair = cfg.views[0]
    h = pair.b / (cfg.effort_points - 1)
    ea = np.atleast_1d(np.asarray(efforts, dtype=float))
    lo = np.maximum(ea - h, 0.0)
    hi = np.minimum(ea + h, pair.b)

    def eu(e):
        x, ph, _ = pair.grid_masses(e)
        return cfg.payoff.expected_u(x, ph, e)

    bob = Action(float(bob_effort), 0)
    d_u = (eu(hi) - eu(lo)) / (hi - lo)
    d_phi = (rival_switch_probability(cfg, 0, hi, 0, bob) - rival_switch_probability(cfg, 0, lo, 0, bob)) / (hi - lo)
    return d_u, d_phi


def strong_externality_condition(config: GameConfig, truth: tuple) -> dict:
    """Sufficient condition for a disagreeing team to beat two optimists.

    Compares ``Delta`` with the largest ratio
    ``-(d/de E_H[u]) / (d/de phi)`` over optimist efforts from ``e_H`` to
    the output-quadrupling effort and skeptic efforts in ``[0, e_L]``,
    with slopes from :func:`effort_slopes`.
    """
    cfg = config.with_(models=(("H",), ("L",)))
    pair = cfg.views[0]
    n = cfg.effort_points
    h = pair.b / (n - 1)
    e_h = static_optimum(pair, "H", cfg.payoff, n).effort
    e_l = static_optimum(pair, "L", cfg.payoff, n).effort
    e_hat = effort_target(cfg, truth)
    gain = persuasion_gain(cfg, 0)
    if truth[0].mean(e_h) <= 0.0:
        return {"delta": gain, "bound": float("nan"), "e_hat": None, "holds": None,
                "note": "expected output is zero at e_H, so the quadrupling effort is degenerate"}
    if e_hat is None:
        return {"delta": gain, "bound": float("nan"), "e_hat": None, "holds": None,
                "note": "no effort in [0, b] quadruples expected output"}
    grid = np.linspace(0.0, pair.b, n)
    ea = grid[(grid >= e_h - 1e-12) & (grid <= e_hat + 1e-12)]
    if ea.size == 0:
        ea = np.array([e_h])
    eb = grid[grid <= e_l + 1e-12]
    bound = -np.inf
    worst = None
    for b_eff in eb:
        d_u, d_phi = effort_slopes(cfg, ea, float(b_eff))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(d_phi > 0, -d_u / d_phi, np.where(-d_u > 0, np.inf, -np.inf))
        j = int(np.argmax(ratio))
        if ratio[j] > bound:
            bound = float(ratio[j])
            worst = (float(ea[j]), float(b_eff), float(d_u[j]), float(d_phi[j]))
    return {"delta": gain, "bound": bound, "e_hat": e_hat, "holds": bool(gain > bound),
            "argmax": worst, "step": h}


def verify_team_comparisons(config: GameConfig) -> dict:
    """One-technology comparisons of disagreeing and like-minded teams.

    For each true process ``Q`` in ``{H, L}``: the team-formation
    inequality (premise ``e_L = 0``), disagreement vs two optimists, the
    strong-externality sufficient condition, and the unaware and myopic
    benchmarks.
    """
    if config.n_tech != 1:
        raise DomainError("team comparisons need one technology")
    pair = config.views[0]
    e_l = static_optimum(pair, "L", config.payoff, config.effort_points).effort
    premise = e_l == 0.0
    verdicts = []
    values = {}
    conditions = {}
    teams = []
    hl, hh, ll = (("H",), ("L",)), (("H",), ("H",)), (("L",), ("L",))
    for qname, truth in _one_tech_truths(config).items():
        y = {}
        for mode in ("full", "myopic", "unaware"):
            for tag, models in (("HL", hl), ("HH", hh), ("LL", ll)):
                tv = team_output(config, models=models, truth=truth, mode=mode)
                y[(mode, tag)] = tv.value
                teams.append(({"Q": qname, "mode": mode}, tv))
        values[qname] = y
        lhs = 2 * y[("full", "HL")]
        rhs = y[("full", "HH")] + y[("full", "LL")]
        note = "" if premise else "premise e_L = 0 fails"
        if qname == "H":
            v = _geq(f"team formation, Q=H: 2Y(H,L) vs Y(H,H)+Y(L,L)", lhs, rhs, note)
            if not premise:
                v.holds = None
            verdicts.append(v)
        else:
            verdicts.append(_report("team formation, Q=L: 2Y(H,L) vs Y(H,H)+Y(L,L)", lhs, rhs, note))
        verdicts.append(_report(f"disagreement vs optimists, Q={qname}: Y(H,L) vs Y(H,H)",
                                y[("full", "HL")], y[("full", "HH")]))
        cond = strong_externality_condition(config, truth)
        conditions[qname] = cond
        if cond["holds"] is None:
            verdicts.append(Verdict(f"strong externalities, Q={qname}", float("nan"), "n/a",
                                    float("nan"), None, note=cond["note"]))
        else:
            note = f"sufficient condition {'met' if cond['holds'] else 'not met'}: Delta={cond['delta']:.6g}, bound={cond['bound']:.6g}"
            if cond["holds"]:
                verdicts.append(Verdict(f"strong externalities, Q={qname}: Y(H,L) > Y(H,H)",
                                        y[("full", "HL")], ">", y[("full", "HH")],
                                        y[("full", "HL")] > y[("full", "HH")] + STRICT_TOL, True, note))
            else:
                verdicts.append(_report(f"strong externalities, Q={qname}: Y(H,L) vs Y(H,H)",
                                        y[("full", "HL")], y[("full", "HH")], note))
        # benchmarks
        verdicts.append(Verdict(f"unaware, Q={qname}: 2Y_u(H,L) = Y_u(H,H)+Y_u(L,L)",
                                2 * y[("unaware", "HL")], "=", y[("unaware", "HH")] + y[("unaware", "LL")],
                                abs(2 * y[("unaware", "HL")] - y[("unaware", "HH")] - y[("unaware", "LL")]) <= 1e-12))
        bench = (_geq if qname == "H" else _leq)
        verdicts.append(bench(f"myopic, Q={qname}: 2Y_o(H,L) vs Y_o(H,H)+Y_o(L,L)",
                              2 * y[("myopic", "HL")], y[("myopic", "HH")] + y[("myopic", "LL")]))
        for tag in ("HH", "LL"):
            vals = [y[(mode, tag)] for mode in ("full", "myopic", "unaware")]
            verdicts.append(Verdict(f"like-minded {tag}, Q={qname}: equal across modes",
                                    max(vals), "=", min(vals), max(vals) - min(vals) <= 1e-12))
        for mode, tag in (("unaware", "u"), ("myopic", "o")):
            for other in ("HL", "LL"):
                verdicts.append(_geq(f"{mode}, Q={qname}: Y_{tag}(H,H) vs Y_{tag}({other[0]},{other[1]})",
                                     y[(mode, "HH")], y[(mode, other)]))
    return {"premise_e_L_zero": premise, "values": values, "conditions": conditions,
            "verdicts": verdicts, "teams": teams}


def _model_label(model) -> str:
    if len(model) == 1:
        return model[0]
    return "(" + ",".join(f"{lab}_{TECH_NAMES[k]}" for k, lab in enumerate(model)) + ")"


def _same_truth(config):
    qx, qy = config.truth
    return qx.kind == qy.kind and qx.params == qy.params and qx.pair == qy.pair


def verify_two_tech(config: GameConfig) -> dict:
    """Two-technology comparisons of horizontal disagreement and like-minded teams.

    Fixed assignment: horizontal disagreement with each player on the
    technology that player favours vs every like-minded team and assignment.
    Endogenous choice (equal falsifiability required): the same
    comparison without assignment, and the comparison averaged over the
    two opposing true processes with probability one half each.
    """
    if config.n_tech != 2:
        raise DomainError("two-technology comparisons need two technologies")
    horizontal = (("H", "L"), ("L", "H"))
    models = config.all_models()
    verdicts = []
    info = {}
    e_h = max(static_optimum(p, "H", config.payoff, config.effort_points).effort for p in config.views)
    same_q = _same_truth(config)
    base = config.with_(assignment=None)
    teams = []

    # fixed assignment
    hv = team_output(base, models=horizontal, assignment=(0, 1))
    info["fixed_horizontal"] = hv
    teams.append(({"Q": "config", "mode": base.mode}, hv))
    eq = hv.outcome.actions
    verdicts.append(_geq("fixed assignment: Ann's first-period effort vs e_H", eq[0].effort, e_h))
    verdicts.append(_geq("fixed assignment: Bob's first-period effort vs e_H", eq[1].effort, e_h))
    if same_q:
        worst = None
        for m in models:
            for asg in ((0, 0), (0, 1), (1, 0), (1, 1)):
                tv = team_output(base, models=(m, m), assignment=asg)
                teams.append(({"Q": "config", "mode": base.mode}, tv))
                v = tv.value
                if worst is None or v > worst[0]:
                    worst = (v, m, asg)
        verdicts.append(_geq(f"fixed assignment: Y(x,y,horizontal) vs best like-minded Y({_model_label(worst[1])} twice,"
                             f" on {TECH_NAMES[worst[2][0]]},{TECH_NAMES[worst[2][1]]})",
                             hv.value, worst[0]))
    else:
        verdicts.append(Verdict("fixed assignment comparison", float("nan"), "n/a", float("nan"), None,
                                note="needs Q_x = Q_y"))

    ef = all(check_equal_falsifiability(p, np.linspace(0.0, p.b, 41)) for p in config.views)
    info["equally_falsifiable"] = ef
    if not ef:
        verdicts.append(Verdict("endogenous choice", float("nan"), "n/a", float("nan"), None,
                                note="views are not equally falsifiable"))
        return {"verdicts": verdicts, "info": info, "teams": teams}

    hv_end = team_output(base, models=horizontal)
    info["endogenous_horizontal"] = hv_end
    teams.append(({"Q": "config", "mode": base.mode}, hv_end))
    for i, who in enumerate(("Ann", "Bob")):
        effs = [eqm.actions[i].effort for eqm in hv_end.profile.first_period]
        verdicts.append(_geq(f"endogenous: {who}'s first-period effort vs e_H", min(effs), e_h))
    if same_q:
        like_minded = [team_output(base, models=(m, m)) for m in models]
        teams.extend(({"Q": "config", "mode": base.mode}, tv) for tv in like_minded)
        best = max((tv.value, m) for tv, m in zip(like_minded, models))
        verdicts.append(_geq(f"endogenous: Y(horizontal) vs best like-minded Y({_model_label(best[1])} twice)", hv_end.value, best[0]))

    # opposing truths, each with probability one half
    px, py = config.views
    q1 = (TrueProcess.member(px, "H"), TrueProcess.member(py, "L"))
    q2 = (TrueProcess.member(px, "L"), TrueProcess.member(py, "H"))

    def mixture(models_pair):
        cfg = base.with_(models=models_pair)
        prof = solve(cfg)
        vals = []
        for i in range(len(prof.first_period)):
            a = expected_team_output(cfg.with_(truth=q1), prof, i).total
            b = expected_team_output(cfg.with_(truth=q2), prof, i).total
            vals.append(0.5 * (a + b))
        return vals

    h_vals = mixture(horizontal)
    like = max((max(mixture((m, m))), m) for m in models)
    info["mixture"] = {"horizontal": h_vals, "best_like_minded": like}
    verdicts.append(_geq(f"mixture p=1/2: E_p[Y(horizontal)] vs best like-minded E_p[Y({_model_label(like[1])} twice)]",
                         min(h_vals), like[0]))
    return {"verdicts": verdicts, "info": info, "teams": teams}


def verify_claim1_direction(config: GameConfig) -> dict:
    """Direction of the optimist's first-period effort when more effort is less informative.

    With negative externalities the optimist should work at least as hard
    as the static optimum; with positive ones at most as hard; with none,
    exactly as hard.
    """
    pair = config.views[0]
    if config.n_tech != 1 or not isinstance(pair, InverseInfoLinear):
        return {"applicable": False, "teams": [], "verdicts": [
            Verdict("optimist effort direction", float("nan"), "n/a", float("nan"), None,
                    note="needs one InverseInfoLinear technology")]}
    cfg = config.with_(models=(("H",), ("L",)))
    prof = solve(cfg)
    e_h = prof.second_period[("H",)].effort
    effs = [eq.ann.effort for eq in prof.first_period]
    beta = cfg.payoff.beta
    if beta < 0:
        v = _geq("negative externalities (beta < 0): first-period effort vs e_H", min(effs), e_h)
    elif beta > 0:
        v = _leq("positive externalities (beta > 0): first-period effort vs e_H", max(effs), e_h)
    else:
        v = Verdict("no externalities (beta = 0): first-period effort = e_H", max(effs), "=", e_h,
                    all(abs(e - e_h) <= 1e-12 for e in effs))
    teams = [({"Q": "config", "mode": cfg.mode}, team_output(cfg))]
    return {"applicable": True, "efforts": effs, "e_H": e_h, "verdicts": [v], "teams": teams}
