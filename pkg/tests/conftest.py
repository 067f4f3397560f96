import numpy as np
import pytest

from annihilate import SimulationParams, SystemKind, complete, run_trajectory, star


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Touch every kernel specialization once so compile time is paid before
    any timed acceptance test runs (the jit cache persists afterwards)."""
    for topo in (complete(2), star(2)):
        for system in (SystemKind.ONE_TYPE, SystemKind.TWO_TYPE):
            p = 0.5 if system is SystemKind.ONE_TYPE else 0.75
            for record in (False, True):
                params = SimulationParams(topo, system, p=p, record_series=record)
                run_trajectory(params, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(987654321)
