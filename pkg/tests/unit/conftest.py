

import pytest
import os

os.environ['PSD_ENV'] = 'test'

from psdiophantine.params import Coefficients, derive_parameters
from psdiophantine.primes import ps_primes_for, sieve_primes
from psdiophantine.kernel import make_kernel

from . import SQRT2, Q0_SMALL, TABLE_LIMIT


@pytest.fixture(scope='session')
def table():
    return sieve_primes(TABLE_LIMIT)


@pytest.fixture(scope='session')
def coefficients():
    """λ = (1, √2, −2), already canonical.
    """
    return Coefficients(1, SQRT2, -2, irrationality_asserted=True)


@pytest.fixture(scope='session')
def params():
    """X ≈ 979, γ = 0.9, working ε = 0.05.
    """
    return derive_parameters(Q0_SMALL, 0.9, 0.5, 0.05)


@pytest.fixture(scope='session')
def ps_set(params, table):
    return ps_primes_for(params, table)


@pytest.fixture(scope='session')
def wide_params():
    """Same X with ε = 5, so the Γ sweeps stay short and Γ₃ is nonzero.
    """
    return derive_parameters(Q0_SMALL, 0.9, 0.5, 5)


@pytest.fixture(scope='session')
def wide_kernel(wide_params):
    return make_kernel(wide_params.epsilon_work, wide_params.k)
