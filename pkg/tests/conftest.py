import numpy as np
import pytest

from htgame.game import GameConfig
from htgame.payoffs import PayoffSpec
from htgame.views import DiscreteBandit, InverseInfoLinear, TrueProcess, UniformLinear

HL = (("H",), ("L",))
HH = (("H",), ("H",))
LL = (("L",), ("L",))


def one_tech(pair, payoff, models=HL, q="H", **kw):
    return GameConfig(views=(pair,), truth=(TrueProcess.member(pair, q),), payoff=payoff,
                      models=models, **kw)


def two_tech(px, py, payoff, models=(("H", "L"), ("L", "H")), qx="H", qy="H", **kw):
    return GameConfig(views=(px, py), truth=(TrueProcess.member(px, qx), TrueProcess.member(py, qy)),
                      payoff=payoff, models=models, **kw)


@pytest.fixture
def bandit():
    return DiscreteBandit()


@pytest.fixture
def illustration(bandit):
    """One bandit technology, R=1, c=4, beta=2, alpha=0, true process H."""
    return one_tech(bandit, PayoffSpec(c=4.0, beta=2.0))


@pytest.fixture
def uniform_example():
    pair = UniformLinear(b=4.0, gamma_H=1.0, psi=5.0)
    return one_tech(pair, PayoffSpec(c=1.0, beta=2.0), alpha=0.05)


@pytest.fixture
def inverse_info():
    return InverseInfoLinear(b=8.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
