import numpy as np
import pytest

from conftest import HH, HL, LL, one_tech, two_tech
from htgame.cli import _resolve_config
from htgame.config import load_config
from htgame.evaluate import (effort_slopes, expected_team_output, solve, strong_externality_condition, team_output,
                             verify_claim1_direction, verify_team_comparisons, verify_two_tech)
from htgame.payoffs import PayoffSpec
from htgame.views import DiscreteBandit, DomainError, TrueProcess

LH = (("L",), ("H",))


def bundled(name):
    return load_config(_resolve_config(name)).game


# Hand enumeration for the bandit team (R=1, c=4, beta=2, alpha=0, truth H):
# Ann works 3/8, Bob idles; Bob switches exactly when Ann succeeds.
# Y = 3/8 + 1/4 + (3/8)(1/4) = 23/32.
def test_disagreeing_bandit_team(illustration):
    tv = team_output(illustration)
    assert tv.value == pytest.approx(0.71875, abs=1e-12)
    o = tv.outcome
    assert o.switch[0] == 0.0
    assert o.switch[1] == pytest.approx(0.375, abs=1e-12)
    assert o.total == pytest.approx(sum(o.outputs[0]) + sum(o.outputs[1]), abs=1e-15)


def test_like_minded_bandit_teams(illustration):
    assert team_output(illustration, models=HH).value == pytest.approx(1.0, abs=1e-12)
    assert team_output(illustration, models=LL).value == 0.0


def test_role_symmetry(illustration):
    assert team_output(illustration, models=LH).value == pytest.approx(0.71875, abs=1e-12)


def test_stronger_externality_raises_output(bandit):
    # Ann's first-order condition 1 - 4e + 6/4 = 0 gives e = 5/8
    cfg = one_tech(bandit, PayoffSpec(c=4.0, beta=6.0))
    assert team_output(cfg).value == pytest.approx(1.03125, abs=1e-12)


def test_uniform_example_value(uniform_example):
    tv = team_output(uniform_example)
    assert tv.outcome.actions[0].effort == pytest.approx(1.2, abs=1e-3)
    # truth H: Ann keeps the H model unless the size-alpha test rejects, Bob
    # converts with probability alpha + 1.2/10; both then play e_H = 1 or e_L = 0
    assert tv.outcome.switch[0] == pytest.approx(0.05, abs=1e-9)
    assert tv.outcome.switch[1] == pytest.approx(0.17, abs=1e-3)
    assert tv.value == pytest.approx(1.2 + (1 - 0.05) * 1.0 + 0.0 + 0.17 * 1.0, abs=1e-3)
    assert tv.value == pytest.approx(2.32, abs=1e-3)


def test_unaware_mode_never_switches(illustration):
    tv = team_output(illustration, mode="unaware")
    assert tv.outcome.switch == (0.0, 0.0, 0.0)
    assert tv.value == pytest.approx(0.5)


def test_payoffs_include_rival_output(illustration):
    o = team_output(illustration).outcome
    # Bob: no effort cost, rival output 3/8 + 1/4, own second period 3/8 * (1/4 - 4/32)
    assert o.payoffs[1] == pytest.approx(2 * (0.375 + 0.25) + 0.375 * (0.25 - 2 * 0.25 ** 2), abs=1e-9)


def test_monte_carlo_agrees_with_exact(illustration):
    prof = solve(illustration)
    exact = expected_team_output(illustration, prof)
    mc = expected_team_output(illustration, prof, method="monte_carlo", n=200_000, seed=7)
    assert abs(mc.total - exact.total) <= 4 * mc.std_error
    assert abs(mc.switch[1] - exact.switch[1]) <= 0.01
    again = expected_team_output(illustration, prof, method="monte_carlo", n=200_000, seed=7)
    assert again.total == mc.total


def test_monte_carlo_on_continuous_family(uniform_example):
    prof = solve(uniform_example)
    exact = expected_team_output(uniform_example, prof)
    mc = expected_team_output(uniform_example, prof, method="monte_carlo", n=100_000, seed=11)
    assert abs(mc.total - exact.total) <= 4 * mc.std_error


def test_monte_carlo_needs_seed(illustration):
    with pytest.raises(DomainError):
        expected_team_output(illustration, solve(illustration), method="monte_carlo", n=10)
    with pytest.raises(DomainError):
        expected_team_output(illustration, solve(illustration), method="bootstrap")


def test_truth_does_not_change_strategies(illustration):
    low = team_output(illustration, truth=(TrueProcess.member(illustration.views[0], "L"),))
    assert low.outcome.actions == team_output(illustration).outcome.actions
    assert low.value == 0.0


def test_team_comparisons_bandit(illustration):
    rep = verify_team_comparisons(illustration)
    assert rep["premise_e_L_zero"]
    y = rep["values"]["H"]
    assert 2 * y[("full", "HL")] == pytest.approx(1.4375)
    assert y[("full", "HH")] + y[("full", "LL")] == pytest.approx(1.0)
    assert not [v.name for v in rep["verdicts"] if v.holds is False]
    formation = [v for v in rep["verdicts"] if v.name.startswith("team formation, Q=H")][0]
    assert formation.holds and formation.strict


def test_strong_externality_condition_is_only_sufficient(illustration):
    cond = strong_externality_condition(illustration, illustration.truth)
    assert cond["delta"] == pytest.approx(0.5)
    assert cond["bound"] > cond["delta"]
    assert not cond["holds"]
    low = strong_externality_condition(illustration, (TrueProcess.member(illustration.views[0], "L"),))
    assert low["holds"] is None


def test_slopes_match_bandit_derivatives(illustration):
    # E_H[u] = R lam e - c e^2 / 2 and Bob's switch probability is lam e
    e = np.linspace(0.1, 0.9, 17)
    d_u, d_phi = effort_slopes(illustration, e, 0.0)
    np.testing.assert_allclose(d_u, 1.0 - 4.0 * e, atol=1e-6)
    np.testing.assert_allclose(d_phi, 1.0, atol=1e-6)


def test_myopic_benchmark(illustration):
    rep = verify_team_comparisons(illustration)
    y = rep["values"]["H"]
    assert 2 * y[("myopic", "HL")] == pytest.approx(1.125)
    assert y[("unaware", "HL")] == pytest.approx(0.5)


def test_two_tech_fixed_assignment():
    cfg = bundled("illustration_two_tech")
    rep = verify_two_tech(cfg)
    hv = rep["info"]["fixed_horizontal"]
    assert hv.value == pytest.approx(1.25, abs=1e-3)
    assert [a.effort for a in hv.outcome.actions] == [pytest.approx(0.375, abs=1e-3)] * 2
    assert not rep["info"]["equally_falsifiable"]
    assert not [v.name for v in rep["verdicts"] if v.holds is False]


def test_two_tech_endogenous_choice():
    rep = verify_two_tech(bundled("bandit_r05_two_tech"))
    assert rep["info"]["equally_falsifiable"]
    assert rep["info"]["endogenous_horizontal"].value == pytest.approx(1.088, abs=2e-3)
    assert min(rep["info"]["mixture"]["horizontal"]) == pytest.approx(0.8787, abs=2e-3)
    assert not [v.name for v in rep["verdicts"] if v.holds is False]
    assert all(v.holds for v in rep["verdicts"] if v.name.startswith("mixture"))


def test_two_tech_needs_two_technologies(illustration):
    with pytest.raises(DomainError):
        verify_two_tech(illustration)
    with pytest.raises(DomainError):
        verify_team_comparisons(two_tech(DiscreteBandit(), DiscreteBandit(), PayoffSpec()))


def test_effort_direction_inverse_information():
    cfg = bundled("inverse_info_sigma2")
    rep = verify_claim1_direction(cfg)
    assert rep["applicable"]
    assert rep["verdicts"][0].holds and rep["verdicts"][0].strict
    pos = verify_claim1_direction(cfg.with_(payoff=PayoffSpec(kind="exponential", a=cfg.payoff.a,
                                                              c=cfg.payoff.c, beta=5.0)))
    assert pos["verdicts"][0].holds and pos["verdicts"][0].strict
    zero = verify_claim1_direction(cfg.with_(payoff=PayoffSpec(kind="exponential", a=cfg.payoff.a,
                                                               c=cfg.payoff.c, beta=0.0)))
    assert zero["verdicts"][0].holds


def test_effort_direction_needs_inverse_family(illustration):
    rep = verify_claim1_direction(illustration)
    assert not rep["applicable"]
    assert rep["verdicts"][0].holds is None
