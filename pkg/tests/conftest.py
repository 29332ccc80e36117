import numpy as np
import pytest

from chaindecoherence.analysis import RunConfig
from chaindecoherence.spectrum import ChainParams, CouplingParams
from chaindecoherence.xstate import BellDiagonalCoeffs, evolve_state


def random_xstates(rng, n):
    """States from the Bell-diagonal simplex (uniform weights) with |F| uniform in [0, 1]."""
    out = []
    for w in rng.dirichlet(np.ones(4), size=n):
        c = BellDiagonalCoeffs.from_bell_weights(w)
        f14, f23 = rng.uniform(0, 1, 2)
        out.append(evolve_state(c, f14, f23))
    return out


def make_config(n_sites=400, lam=1.0, gamma=1.0, alpha=0.0, g=0.05, delta=0.0,
                coeffs=(1.0, -1.0, 1.0), t_max=20.0, steps=2000):
    return RunConfig(
        chain=ChainParams(n_sites, lam, gamma, alpha),
        coupling=CouplingParams(g, delta),
        coeffs=BellDiagonalCoeffs(*coeffs),
        t_max=t_max,
        steps=steps,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20121)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
