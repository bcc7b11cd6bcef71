"""Session-scoped trial banks shared by the acceptance tests.

The exact oracle dominates runtime, so each random trial set is built
once and the criteria that quote the same set reuse it.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from diskpack import objective_power
from diskpack.oracle import solve_exact
from diskpack.perimeter import approx_mpdp, approx_nn4

from helpers import random_unit_instance


def _trial_bank(seed, count, n_max, dimension):
    out = []
    for t in range(count):
        inst = random_unit_instance(seed, t, n_max, dimension)
        oracle_power = objective_power(solve_exact(inst).assignment)
        mpdp_power = objective_power(approx_mpdp(inst).assignment)
        nn4_power = objective_power(approx_nn4(inst))
        out.append((inst, oracle_power, mpdp_power, nn4_power))
    return out


@pytest.fixture(scope="session")
def planar_trials():
    """200 planar instances with n <= 7: (instance, oracle, mpdp, nn4)."""
    return _trial_bank(seed=20260705, count=200, n_max=7, dimension=2)


@pytest.fixture(scope="session")
def spatial_trials():
    """100 three-dimensional instances with n <= 5."""
    return _trial_bank(seed=20260706, count=100, n_max=5, dimension=3)
