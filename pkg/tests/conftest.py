import warnings

import numpy as np
import pytest

from entangle_bench.exceptions import ReeConvergenceWarning
from entangle_bench.measures import measure_all
from entangle_bench.qfi import OptimizeConfig, batch_optimize
from entangle_bench.ree import ReeConfig, ree
from entangle_bench.states import EnsembleSpec, sample_ensemble, state_rng

ENSEMBLE_SEED = 20240601
QUTRIT_SEED = 2024

_ACCEPTANCE = {}


def record_acceptance(number, passed, detail):
    _ACCEPTANCE[number] = (bool(passed), detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def hs_states():
    """1000 complex Hilbert-Schmidt two-qubit states."""
    return list(sample_ensemble(EnsembleSpec(1000, seed=ENSEMBLE_SEED)))


@pytest.fixture(scope="session")
def hs_records(hs_states):
    return [measure_all(r, include_ree=False, include_qfi=True) for r in hs_states]


@pytest.fixture(scope="session")
def hs_optimized(hs_states):
    return batch_optimize(hs_states, OptimizeConfig())


@pytest.fixture(scope="session")
def qutrit_results():
    """Real 2x3 HS states with negativity and REE."""
    spec = EnsembleSpec(1000, seed=QUTRIT_SEED, field="real", dims=(2, 3))
    cfg = ReeConfig()
    out = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ReeConvergenceWarning)
        for k, rho in enumerate(sample_ensemble(spec)):
            res = ree(rho, cfg, rng=state_rng(QUTRIT_SEED, k))
            out.append((rho, res))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
