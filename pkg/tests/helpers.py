"""Shared random-instance recipes for the test suite.

All randomness is seeded through numpy SeedSequence([base, index]) so
every run of the suite sees identical instances.
"""

import numpy as np

from diskpack import Instance


def rng_for(base_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([base_seed, index]))


def random_line_coords(base_seed: int, index: int, n_max: int = 7):
    """Strictly increasing coordinates with gaps in (0.1, 2)."""
    rng = rng_for(base_seed, index)
    n = int(rng.integers(2, n_max + 1))
    gaps = rng.uniform(0.1, 2.0, n - 1)
    return np.concatenate([[0.0], np.cumsum(gaps)])


def random_unit_instance(base_seed: int, index: int, n_max: int, dimension: int = 2) -> Instance:
    rng = rng_for(base_seed, index)
    n = int(rng.integers(2, n_max + 1))
    return Instance(rng.uniform(0.0, 1.0, (n, dimension)))


def line_instance_2d(xs) -> Instance:
    xs = np.asarray(xs, dtype=float)
    return Instance(np.stack([xs, np.zeros(len(xs))], axis=1))
