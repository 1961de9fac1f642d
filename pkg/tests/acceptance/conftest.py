

import pytest
import os

os.environ['PSD_ENV'] = 'test'

from psdiophantine.params import Coefficients
from psdiophantine.primes import sieve_primes

from . import SQRT2, TABLE_LIMIT


@pytest.fixture(scope='session')
def table():
    return sieve_primes(TABLE_LIMIT, threads=2)


@pytest.fixture(scope='session')
def sqrt2_coefficients():
    """λ₁/λ₂ = √2.
    """
    return Coefficients(SQRT2, 1, -2, irrationality_asserted=True)
