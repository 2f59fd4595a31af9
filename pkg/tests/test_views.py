import numpy as np
import pytest
from scipy import stats

from htgame.payoffs import PayoffSpec
from htgame.views import (AdditiveNoise, DiscreteBandit, DomainError, InverseInfoLinear, TechnologyView,
                          TrueProcess, UniformLinear, evaluate_likelihood, expected_output,
                          validate_assumptions)

PAIRS = [
    DiscreteBandit(),
    DiscreteBandit(r=0.5),
    AdditiveNoise(b=2.0),
    AdditiveNoise(b=2.0, noise_kind="triangular", noise_scale=0.5),
    UniformLinear(b=4.0),
    InverseInfoLinear(b=8.0),
]


@pytest.mark.parametrize("pair", PAIRS, ids=lambda p: p.family)
@pytest.mark.parametrize("frac", [0.0, 0.13, 0.5, 1.0])
def test_masses_are_distributions(pair, frac):
    x, ph, pl = pair.masses(frac * pair.b)
    for p in (ph, pl):
        assert np.all(p >= 0)
        assert p.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(x) > 0)


def test_bandit_likelihoods():
    pair = DiscreteBandit()
    h = TechnologyView(pair, "H")
    assert evaluate_likelihood(h, 0.3, 1.0) == pytest.approx(0.3)
    assert evaluate_likelihood(h, 0.0, 0.0) == 1.0
    assert evaluate_likelihood(h, 0.3, 0.7) == 0.0  # not an atom


def test_bandit_atoms():
    assert list(DiscreteBandit().masses(0.2)[0]) == [0.0, 1.0]
    assert list(DiscreteBandit(r=0.5).masses(0.2)[0]) == [0.0, 0.5, 1.0]
    with pytest.raises(DomainError):
        DiscreteBandit(r=1.0, R=1.0)


def test_uniform_density_on_the_lattice():
    pair = UniformLinear(b=4.0, gamma_H=1.0, psi=5.0)
    x = pair.masses(2.0)[0]
    step = x[1] - x[0]
    lview = TechnologyView(pair, "L")
    # interior atoms carry density 1 / (2 psi) times the lattice step
    assert evaluate_likelihood(lview, 2.0, x[np.argmin(np.abs(x))]) == pytest.approx(step / 10.0, rel=1e-9)


def test_effort_outside_domain_raises():
    with pytest.raises(DomainError):
        DiscreteBandit().masses(1.5)
    with pytest.raises(DomainError):
        expected_output(TechnologyView(DiscreteBandit(), "H"), -0.1)


def test_expected_outputs():
    assert expected_output(TechnologyView(DiscreteBandit(), "H"), 0.25) == pytest.approx(0.25)
    assert expected_output(TechnologyView(DiscreteBandit(), "L"), 0.25) == 0.0
    u = UniformLinear(b=4.0)
    assert expected_output(TechnologyView(u, "H"), 1.2) == pytest.approx(1.2, abs=1e-12)
    g = InverseInfoLinear(b=8.0)
    # lattice means of the truncated Gaussian differ from the exact mean by tail mass only
    assert g.mean("H", 2.0) == pytest.approx(6.0, abs=1e-7)
    assert g.mean("L", 2.0) == pytest.approx(2.0, abs=1e-7)


def test_gaussian_masses_match_normal_cdf():
    g = InverseInfoLinear(b=8.0)
    x, ph, _ = g.masses(1.0)
    d = x[1] - x[0]
    # cell mass compared with the normal law truncated at four standard deviations
    z = stats.norm(loc=5.5, scale=1.0)
    want = z.cdf(x + d / 2) - z.cdf(x - d / 2)
    want /= want.sum()
    np.testing.assert_allclose(ph, want, atol=5e-3)


def test_views_symmetric_in_the_gap():
    pair = AdditiveNoise(b=2.0)
    x, ph, pl = pair.masses(1.3)
    np.testing.assert_allclose(ph, pl[::-1], atol=1e-15)


@pytest.mark.parametrize("pair", PAIRS[:5], ids=lambda p: p.family)
def test_mean_nondecreasing_in_effort(pair):
    e = np.linspace(0, pair.b, 41)
    for lab in ("H", "L"):
        m = [pair.mean(lab, v) for v in e]
        assert np.all(np.diff(m) >= -1e-12)


def test_inverse_info_constraint():
    with pytest.raises(DomainError):
        InverseInfoLinear(b=20.0)  # gamma2 b exceeds gamma0 + gamma1 b
    with pytest.raises(DomainError):
        InverseInfoLinear(gamma1=1.5, gamma2=1.0)


def test_validate_bandit_illustration():
    rep = validate_assumptions(DiscreteBandit(), PayoffSpec(c=4.0, beta=2.0))
    for key in ("fosd_Q", "fosd_H", "fosd_L", "dominance_H_over_L", "unique_maximizers", "efforts_ordered",
                "informativeness_monotone"):
        assert rep[key], key
    assert rep["e_H"] == pytest.approx(0.25)
    assert rep["e_L"] == 0.0
    assert rep["informativeness"] == "increasing"


class _IdenticalViews(AdditiveNoise):
    """Both views share one mean; the constructor check is skipped on purpose."""

    def __post_init__(self):
        self._validate_lattice()


def test_validate_identical_views_fail_dominance():
    pair = _IdenticalViews(b=2.0, slope_H=1.0, slope_L=1.0)
    rep = validate_assumptions(pair, PayoffSpec(c=1.0))
    assert not rep["dominance_H_over_L"]
    assert rep["fosd_H"] and rep["fosd_L"]


def test_validate_inverse_info_reversed():
    rep = validate_assumptions(InverseInfoLinear(b=8.0), PayoffSpec(kind="exponential", a=0.2, c=2.0))
    assert not rep["informativeness_monotone"]
    assert rep["informativeness"] == "decreasing"
    assert rep["e_H"] == pytest.approx(0.748, abs=2.5e-3)
    assert rep["e_L"] == pytest.approx(0.572, abs=2.5e-3)


def test_validate_uniform_reports_uninformative_start():
    rep = validate_assumptions(UniformLinear(b=4.0), PayoffSpec(c=1.0))
    assert rep["uninformative_at_zero"]
    assert rep["informativeness_monotone"]


def test_validate_small_grid_rejected():
    with pytest.raises(DomainError):
        validate_assumptions(DiscreteBandit(), grid=2)


@pytest.mark.parametrize("pair", PAIRS, ids=lambda p: p.family)
def test_h_dominates_l_pointwise(pair):
    pts = pair.cdf_points()
    for e in np.linspace(0.05, 1, 5) * pair.b:
        assert np.all(pair.cdf("H", e, pts) <= pair.cdf("L", e, pts) + 1e-12)


def test_true_process_law_matches_mean():
    u = UniformLinear(b=4.0)
    q = TrueProcess.law(u, slope=0.8)
    for e in (0.0, 1.0, 3.3):
        assert q.mean(e) == pytest.approx(0.8 * e, abs=1e-12)
        assert q.dist(e).probs.sum() == pytest.approx(1.0)


def test_true_process_table_interpolates():
    b = DiscreteBandit()
    q = TrueProcess.table(b, [0.0, 1.0], [0.0, 1.0], [[1.0, 0.0], [0.5, 0.5]])
    assert q.mean(0.5) == pytest.approx(0.25)


def test_members_equal_their_view():
    b = DiscreteBandit(r=0.5)
    for lab in ("H", "L"):
        q = TrueProcess.member(b, lab)
        assert q.mean(0.4) == pytest.approx(b.mean(lab, 0.4))
