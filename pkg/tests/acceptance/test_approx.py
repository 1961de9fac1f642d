

import pytest
import math

from fractions import Fraction

import numpy as np

from psdiophantine.approx import (
    dichotomy_probe, dirichlet_approx, convergent_at,
)
from psdiophantine.params import derive_parameters

from . import SQRT2


@pytest.mark.parametrize('seed', range(1000))
def test_dirichlet(seed):

    rng = np.random.RandomState(seed)

    x = float(rng.uniform(-10, 10))
    Q = int(rng.randint(1, 501))

    r = dirichlet_approx(x, Q)

    assert 1 <= r.q <= Q
    assert math.gcd(abs(r.a), r.q) == 1
    assert abs(Fraction(x) - r.fraction) < Fraction(1, r.q * Q)


@pytest.mark.parametrize('index,q0', [(4, 29), (5, 70), (6, 169)])
def test_dichotomy_sweep(sqrt2_coefficients, index, q0):
    """Every t in [Δ, H] lands in an estimable or excluded case.
    """
    convergent = convergent_at(SQRT2, index)
    assert convergent.q == q0

    params = derive_parameters(q0, 0.98, 0.5, 0.05)

    ts = np.logspace(math.log10(params.Delta), math.log10(params.H_work), 1000)
    ts = np.clip(ts, params.Delta, params.H_work)

    for t in ts:

        report = dichotomy_probe(sqrt2_coefficients, convergent, params, float(t))

        assert report.case != 'unexplained'
        assert report.ai_bound_ok
        assert report.zero_excluded
