

import pytest

import numpy as np

from psdiophantine.primes import (
    ps_enumerate_oracle, ps_primes_in, load_or_build,
)

from . import TABLE_LIMIT


@pytest.mark.parametrize('gamma', [0.76, 0.9, 37 / 38 + 1e-4, 0.98])
def test_indicator_matches_enumeration(table, gamma):

    found = ps_primes_in(0, TABLE_LIMIT, gamma, table)
    oracle = ps_enumerate_oracle(TABLE_LIMIT, gamma, table)

    assert len(found) > 0
    assert np.array_equal(found.primes, oracle.primes)


def test_cached_prefix(table, tmp_path):

    built = load_or_build(0.98, TABLE_LIMIT, table, str(tmp_path))
    loaded = load_or_build(0.98, TABLE_LIMIT, table, str(tmp_path))

    assert np.array_equal(built.primes, loaded.primes)
    assert loaded.restrict(5e5, 1e6) == ps_primes_in(5e5, 1e6, 0.98, table)


@pytest.mark.parametrize('X', [1e4, 1e5, 1e6])
def test_count_against_density(table, X):
    """#PS primes up to X over X^γ / log X stays in [1/2, 2].
    """
    gamma = 0.9
    count = len(ps_primes_in(0, X, gamma, table))

    assert 0.5 <= count / (X ** gamma / np.log(X)) <= 2
