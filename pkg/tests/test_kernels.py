import itertools
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from htgame import _kernels_py, kernels

BACKENDS = [_kernels_py]
try:
    from htgame import _kernels as _compiled

    BACKENDS.append(_compiled)
except ImportError:  # pragma: no cover
    pass


def lp_power(p_null, p_alt, alpha):
    """Most powerful size-alpha test as a linear program over rejection weights."""
    p_null = np.asarray(p_null, float)
    p_alt = np.asarray(p_alt, float)
    res = linprog(-p_alt, A_ub=[p_null], b_ub=[alpha], bounds=[(0, 1)] * p_null.size, method="highs")
    assert res.status == 0
    return -res.fun


def brute_power(p_null, p_alt, alpha):
    """Best over all rejection regions plus one randomized boundary signal."""
    n = len(p_null)
    best = 0.0
    for mask in itertools.product((0, 1), repeat=n):
        region = np.array(mask, dtype=bool)
        size = p_null[region].sum()
        if size > alpha + 1e-15:
            continue
        power = p_alt[region].sum()
        best = max(best, power)
        for j in np.flatnonzero(~region):
            if p_null[j] == 0:
                best = max(best, power + p_alt[j])
            else:
                w = min(1.0, (alpha - size) / p_null[j])
                best = max(best, power + w * p_alt[j])
    return best


def dist(draw, n):
    raw = draw(st.lists(st.integers(0, 6), min_size=n, max_size=n))
    raw = np.array(raw, float)
    if raw.sum() == 0:
        raw[0] = 1
    return raw / raw.sum()


@st.composite
def experiment(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    return dist(draw, n), dist(draw, n), draw(st.sampled_from([0.0, 0.05, 0.1, 0.25, 0.5, 1.0]))


def test_backend_name_is_reported():
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.parametrize("impl", BACKENDS)
def test_bandit_power_three_atoms(impl):
    # r = 0.5, e = 0.3: L puts 0.3 on r, H puts 0.3 on R; null L
    pl = np.array([0.7, 0.3, 0.0])
    ph = np.array([0.7, 0.0, 0.3])
    assert impl.np_power(pl, ph, 0.1) == pytest.approx(0.4, abs=1e-12)
    assert brute_power(pl, ph, 0.1) == pytest.approx(0.4, abs=1e-12)


@pytest.mark.parametrize("impl", BACKENDS)
@settings(max_examples=150, deadline=None)
@given(experiment())
def test_power_matches_linear_program(impl, exp):
    pn, pa, alpha = exp
    assert impl.np_power(pn, pa, alpha) == pytest.approx(lp_power(pn, pa, alpha), abs=1e-9)


@settings(max_examples=80, deadline=None)
@given(experiment(max_n=5))
def test_power_matches_region_enumeration(exp):
    pn, pa, alpha = exp
    assert kernels.np_power(pn, pa, alpha) == pytest.approx(brute_power(pn, pa, alpha), abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(experiment(max_n=4), experiment(max_n=4))
def test_product_power_backends_agree(a, b):
    pan, paa, alpha = a
    pbn, pba, _ = b
    joint = lp_power(np.outer(pan, pbn).ravel(), np.outer(paa, pba).ravel(), alpha)
    for impl in BACKENDS:
        got = impl.np_power_product(pan, paa, pbn, pba, alpha)
        assert got == pytest.approx(joint, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(experiment(max_n=4), st.integers(1, 5))
def test_rows_kernel_matches_single_product(b, nrows):
    pbn, pba, alpha = b
    r = np.random.default_rng(nrows)
    rows_n = r.dirichlet(np.ones(3), size=nrows)
    rows_a = r.dirichlet(np.ones(3), size=nrows)
    for impl in BACKENDS:
        got = impl.np_power_product_rows(rows_n, rows_a, pbn, pba, alpha)
        want = [impl.np_power_product(rows_n[i], rows_a[i], pbn, pba, alpha) for i in range(nrows)]
        np.testing.assert_allclose(got, want, atol=1e-12)


@settings(max_examples=150, deadline=None)
@given(experiment())
def test_test_weights_have_exact_size_and_reported_power(exp):
    pn, pa, alpha = exp
    t = kernels.np_test(pn, pa, alpha)
    assert t.size <= alpha + 1e-12
    assert t.power == pytest.approx(lp_power(pn, pa, alpha), abs=1e-9)
    assert np.all((t.weights >= 0) & (t.weights <= 1))
    # weights strictly between 0 and 1 sit on one likelihood ratio, and equal q
    mid = (t.weights > 0) & (t.weights < 1)
    assert np.allclose(t.weights[mid], t.q)
    # size is exactly alpha whenever the null mass on finite ratios can absorb it
    finite = pn > 0
    if pn[finite].sum() >= alpha:
        assert t.size == pytest.approx(alpha, abs=1e-12)


def test_identical_distributions_power_equals_size():
    p = np.array([0.2, 0.3, 0.5])
    for alpha in (0.0, 0.3, 1.0):
        assert kernels.np_power(p, p, alpha) == pytest.approx(alpha, abs=1e-12)


def test_null_impossible_signals_always_reject():
    t = kernels.np_test([1.0, 0.0], [0.4, 0.6], 0.0)
    assert list(t.weights) == [0.0, 1.0]
    assert t.power == pytest.approx(0.6)


def test_off_support_signals_never_reject():
    t = kernels.np_test([0.5, 0.5, 0.0], [0.5, 0.5, 0.0], 1.0)
    assert t.weights[2] == 0.0


def test_boundary_ties_are_pooled_into_one_atom():
    # two signals share ratio 2; size 0.15 rejects half of their pooled null mass
    pn = np.array([0.1, 0.2, 0.1, 0.6])
    pa = np.array([0.4, 0.4, 0.2, 0.0])
    t = kernels.np_test(pn, pa, 0.15 + 0.0)
    assert t.critical == pytest.approx(2.0)
    assert t.weights[1] == pytest.approx(t.weights[2])
    assert t.size == pytest.approx(0.15)


def test_invalid_size_rejected():
    with pytest.raises(ValueError):
        kernels.np_test([1.0], [1.0], 1.5)


def test_power_at_interpolates_roc():
    pn = np.array([0.5, 0.5])
    pa = np.array([0.9, 0.1])
    np.testing.assert_allclose(kernels.power_at(pn, pa, [0.0, 0.25, 0.5, 1.0]), [0.0, 0.45, 0.9, 1.0])


def test_fallback_selected_by_environment():
    code = "from htgame import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, HTGAME_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
