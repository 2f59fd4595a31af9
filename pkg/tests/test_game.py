import numpy as np
import pytest

from conftest import HH, HL, LL, one_tech, two_tech
from htgame import game
from htgame.game import (Action, GameConfig, NonConvergence, first_period_objective, lemma_effort_check,
                         persuasion_gain, solve_equilibrium, solve_second_period)
from htgame.payoffs import PayoffSpec
from htgame.views import AdditiveNoise, DiscreteBandit, DomainError, TrueProcess, UniformLinear

STEP = 1.0 / 400 / 10  # one fine-grid step on [0, 1]


def dense_best_response(config, player, rival, points=20001):
    """Exhaustive scan of the player's objective on a dense grid."""
    best = None
    for k in game.allowed_techs(config, player):
        grid = np.linspace(0, config.views[k].b, points)
        vals = first_period_objective(player, grid, k, rival, config)
        j = int(np.argmax(vals))
        if best is None or vals[j] > best[0]:
            best = (vals[j], grid[j], k)
    return best


def test_second_period_choices(bandit):
    p = PayoffSpec(c=4.0)
    assert solve_second_period(("H",), p, (bandit,)).effort == pytest.approx(0.25)
    assert solve_second_period(("L",), p, (bandit,)).effort == 0.0
    two = (DiscreteBandit(), DiscreteBandit())
    c = solve_second_period(("L", "H"), p, two)
    assert (c.tech, c.effort) == (1, pytest.approx(0.25))
    assert solve_second_period(("H", "H"), p, two).tech == 0


def test_illustration_equilibrium(illustration):
    prof = solve_equilibrium(illustration)
    assert len(prof.first_period) == 1
    eq = prof.first_period[0]
    assert eq.ann.effort == pytest.approx(0.375, abs=STEP)
    assert eq.bob.effort == 0.0
    assert prof.second_action(("H",)).effort == pytest.approx(0.25)


def test_illustration_objective_closed_form(illustration):
    # e R - c e^2 / 2 + beta e R e_H when Bob idles
    e = np.linspace(0, 1, 11)
    got = first_period_objective(0, e, 0, Action(0.0, 0), illustration)
    want = e - 2 * e ** 2 + 2 * e * 0.25
    np.testing.assert_allclose(got, np.where(e <= 1, want, want), atol=1e-12)


def test_equilibrium_is_a_dense_grid_best_response(illustration, uniform_example):
    for cfg, b in ((illustration, 1.0), (uniform_example, 4.0)):
        prof = solve_equilibrium(cfg)
        eq = prof.first_period[0]
        for player in (0, 1):
            own, rival = eq.actions[player], eq.actions[1 - player]
            val = first_period_objective(player, [own.effort], own.tech, rival, cfg)[0]
            best, e_best, _ = dense_best_response(cfg, player, rival)
            assert val >= best - 1e-6
            assert abs(own.effort - e_best) <= b / 400 / 10 + 1e-12


def test_like_minded_static(bandit):
    p = PayoffSpec(c=4.0, beta=2.0)
    eq = solve_equilibrium(one_tech(bandit, p, HH)).first_period[0]
    assert eq.ann.effort == pytest.approx(0.25) and eq.bob.effort == pytest.approx(0.25)
    eq = solve_equilibrium(one_tech(bandit, p, LL)).first_period[0]
    assert eq.ann.effort == 0.0 and eq.bob.effort == 0.0


def test_uniform_example_effort(uniform_example):
    eq = solve_equilibrium(uniform_example).first_period[0]
    # first-order condition gamma + beta gamma^3 / (2 psi)
    assert eq.ann.effort == pytest.approx(1.2, abs=4.0 / 4000)


def test_uniform_objective_closed_form(uniform_example):
    e = np.linspace(0, 4, 17)
    got = first_period_objective(0, e, 0, Action(0.0, 0), uniform_example)
    want = e - 0.5 * e ** 2 + 2.0 * (0.05 + e / 10.0)
    np.testing.assert_allclose(got, want, atol=1e-9)


@pytest.mark.parametrize("mode", ["unaware", "myopic"])
def test_benchmarks_play_static_optima(bandit, mode):
    cfg = one_tech(bandit, PayoffSpec(c=4.0, beta=2.0), mode=mode)
    eq = solve_equilibrium(cfg).first_period[0]
    assert eq.ann.effort == pytest.approx(0.25)
    assert eq.bob.effort == 0.0


def test_second_period_independent_of_rival_model():
    b = DiscreteBandit(r=0.5)
    p = PayoffSpec(c=4.0, beta=2.0)
    sols = [solve_equilibrium(one_tech(b, p, m)).second_period for m in (HL, HH, LL, (("L",), ("H",)))]
    for s in sols[1:]:
        assert {m: (c.effort, c.tech) for m, c in s.items()} == {m: (c.effort, c.tech) for m, c in sols[0].items()}


@pytest.mark.parametrize("pair, payoff", [
    (DiscreteBandit(), PayoffSpec(c=4.0, beta=2.0)),
    (DiscreteBandit(r=0.5), PayoffSpec(c=4.0, beta=2.0)),
    (UniformLinear(b=4.0), PayoffSpec(c=1.0, beta=2.0)),
    (AdditiveNoise(b=2.0), PayoffSpec(c=1.0, beta=1.0)),
], ids=lambda v: getattr(v, "family", ""))
def test_persuasion_gain_signs(pair, payoff):
    hl = one_tech(pair, payoff, HL)
    lh = one_tech(pair, payoff, (("L",), ("H",)))
    assert persuasion_gain(hl, 0) > 0
    assert persuasion_gain(lh, 0) <= 1e-12  # zero up to rounding in the uniform family


def test_grid_refinement_is_stable(uniform_example, illustration):
    for cfg in (illustration, uniform_example):
        coarse = solve_equilibrium(cfg).first_period[0]
        fine = solve_equilibrium(cfg.with_(effort_points=801)).first_period[0]
        step = cfg.views[0].b / 400
        assert abs(coarse.ann.effort - fine.ann.effort) <= step
        assert abs(coarse.bob.effort - fine.bob.effort) <= step


def test_lemma_check_illustration(illustration):
    rep = lemma_effort_check(illustration)
    assert rep["optimist_works_harder"] and rep["optimist_strictly"]
    assert rep["skeptic_works_less"] and not rep["skeptic_strictly"]


def test_lemma_check_full_size_test_is_flat(bandit):
    rep = lemma_effort_check(one_tech(bandit, PayoffSpec(c=4.0, beta=2.0), alpha=1.0))
    assert rep["ann_disagree"] == [pytest.approx(0.25)]
    assert not rep["optimist_strictly"]


def test_lemma_check_skeptic_shades_down():
    rep = lemma_effort_check(one_tech(DiscreteBandit(r=0.5), PayoffSpec(c=4.0, beta=2.0)))
    assert rep["skeptic_works_less"] and rep["skeptic_strictly"]
    assert rep["optimist_works_harder"]


def test_lemma_check_needs_disagreement(bandit):
    with pytest.raises(DomainError):
        lemma_effort_check(one_tech(bandit, PayoffSpec(), HH))


def test_two_tech_horizontal_choose_own_technology():
    px, py = DiscreteBandit(r=0.5), DiscreteBandit(r=0.5)
    prof = solve_equilibrium(two_tech(px, py, PayoffSpec(c=4.0, beta=2.0)))
    for eq in prof.first_period:
        assert (eq.ann.tech, eq.bob.tech) == (0, 1)
        assert eq.ann.effort >= 0.25 and eq.bob.effort >= 0.25


def test_two_tech_fixed_assignment_illustration():
    px, py = DiscreteBandit(), DiscreteBandit()
    eq = solve_equilibrium(two_tech(px, py, PayoffSpec(c=4.0, beta=2.0), assignment=(0, 1))).first_period[0]
    assert eq.ann.effort == pytest.approx(0.375, abs=STEP)
    assert eq.bob.effort == pytest.approx(0.375, abs=STEP)


def test_solver_is_deterministic(uniform_example):
    a = solve_equilibrium(uniform_example)
    b = solve_equilibrium(uniform_example)
    assert [(e.ann, e.bob) for e in a.first_period] == [(e.ann, e.bob) for e in b.first_period]


def test_cycling_best_responses_raise(monkeypatch, illustration):
    # matching pennies on efforts {0, 1}: Ann copies Bob, Bob does the opposite
    def respond(self, player, rival):
        e = rival.effort if player == 0 else 1.0 - rival.effort
        return Action(e, 0)

    monkeypatch.setattr(game._Responder, "__call__", respond)
    with pytest.raises(NonConvergence) as info:
        solve_equilibrium(illustration)
    assert info.value.cycles


def test_config_validation(bandit):
    p = PayoffSpec()
    with pytest.raises(DomainError):
        GameConfig(views=(bandit,), truth=(TrueProcess.member(bandit, "H"),), payoff=p, models=HL, alpha=1.5)
    with pytest.raises(DomainError):
        GameConfig(views=(bandit,), truth=(TrueProcess.member(bandit, "H"),), payoff=p, models=HL,
                   assignment=(0, 0))
    with pytest.raises(DomainError):
        GameConfig(views=(bandit,), truth=(TrueProcess.member(bandit, "H"),), payoff=p, models=HL, mode="lazy")
    with pytest.raises(DomainError):
        GameConfig(views=(bandit,), truth=(TrueProcess.member(DiscreteBandit(r=0.5), "H"),), payoff=p,
                   models=HL)
    with pytest.raises(DomainError):
        GameConfig(views=(), truth=(), payoff=p, models=((), ()))
