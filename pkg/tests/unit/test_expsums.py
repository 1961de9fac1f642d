

import pytest
import math

import numpy as np

from scipy.integrate import quad

from psdiophantine.errors import DomainError, PrecisionError
from psdiophantine.expsums import (
    SUM_KINDS, SumTable, box_integral, decomposition_report,
    decomposition_residual, integer_phases, integral_I, l2_integral,
    minor_arc_check, phase_sum, product_identity_residual, s_minus_i_residual,
    sawtooth, split_weights, sum_grid, sum_Omega, sum_Psi, sum_S, sum_Sigma,
    unit_phase,
)
from psdiophantine.primes import ps_primes_in

from tests.utils import read_yaml


cases = read_yaml(__file__, 'test_expsums.yml')


@pytest.mark.parametrize('t,value', cases['sawtooth'])
def test_sawtooth(t, value):
    assert sawtooth(t) == value


@pytest.mark.parametrize('case', cases['phases'])
def test_unit_phase(case):

    value = unit_phase(case['t'])

    assert value.re == pytest.approx(case['re'], abs=1e-12)
    assert value.im == pytest.approx(case['im'], abs=1e-12)
    assert abs(value) == pytest.approx(1)


def test_integer_phases_reduce_alpha():
    """e(αn) depends on α mod 1 only.
    """
    n = np.arange(1, 1000)
    assert np.array_equal(integer_phases(5.25, n), integer_phases(0.25, n))


def test_integer_phases_precision():
    with pytest.raises(PrecisionError):
        integer_phases(1.0, np.array([2 ** 53]))


def test_phase_sum_empty():
    result = phase_sum(0.3, np.array([], dtype=np.int64), np.array([]))
    assert result.value == 0 and result.term_count == 0


def test_S_at_zero(params, ps_set):

    result = sum_S(0, params, ps_set)

    assert result.re == pytest.approx(ps_set.weight_total, rel=1e-14)
    assert result.im == 0
    assert result.term_count == len(ps_set)


def test_S_periodic(params, ps_set):
    assert sum_S(1.25, params, ps_set).value == sum_S(0.25, params, ps_set).value


def test_S_conjugate(params, ps_set):
    a = sum_S(0.3, params, ps_set).value
    b = sum_S(-0.3, params, ps_set).value
    assert b == pytest.approx(a.conjugate(), rel=1e-9)


def test_S_set_mismatch(params, table):

    other = ps_primes_in(params.lo, params.X, 0.91, table)

    with pytest.raises(DomainError):
        sum_S(0.1, params, other)


def test_Sigma_at_zero(params, table):

    p = table.between(params.lo, params.X)
    expected = 0.9 * math.fsum(math.log(q) for q in p.tolist())

    assert sum_Sigma(0, params, table).re == pytest.approx(expected, rel=1e-14)


def test_Psi(table):

    expected = math.fsum(math.log(p) for p in (2, 3, 5, 7))

    assert sum_Psi(0, 10, table).re == pytest.approx(expected)
    assert sum_Psi(0.5, 1.5, table).term_count == 0


def test_split_weights(params, table):
    """indicator = middle + omega per prime, to one rounding.
    """
    w = split_weights(params, table)

    assert np.allclose(w.indicator, w.middle + w.omega, rtol=0, atol=1e-12)
    assert (w.indicator[w.indicator != 0] > 0).all()


@pytest.mark.parametrize('alpha', cases['alphas'])
def test_decomposition_exact(params, table, alpha):

    residual, gap = decomposition_residual(alpha, params, table)

    assert residual <= 1e-8
    assert gap <= params.log_X ** 2


def test_decomposition_report_uses_ps_sum(params, table, ps_set):
    report = decomposition_report(0.1234, params, table)
    assert report.S == pytest.approx(sum_S(0.1234, params, ps_set).value, rel=1e-12)


def test_Omega_matches_split(params, table):
    report = decomposition_report(0.37, params, table)
    assert sum_Omega(0.37, params, table).value == report.Omega


def weighted_quad(lo, hi, alpha, weight):
    """∫_lo^hi cos or sin of 2παy, by QUADPACK's oscillatory rule.
    """
    return quad(
        lambda y: 1.0, lo, hi, weight=weight, wvar=2 * math.pi * alpha,
        epsabs=0, epsrel=1e-12, limit=200,
    )[0]


@pytest.mark.parametrize('alpha', [0.0, 1e-4, 0.01, 0.3])
def test_integral_I(params, alpha):

    lo, hi, gamma = params.lo, params.X, params.gamma.value
    value = complex(integral_I(alpha, params))

    if alpha == 0:
        assert value == pytest.approx(gamma * (hi - lo))
        return

    re = gamma * weighted_quad(lo, hi, alpha, 'cos')
    im = gamma * weighted_quad(lo, hi, alpha, 'sin')

    assert abs(value - complex(re, im)) <= 1e-9 * max(abs(complex(re, im)), 1)


def test_box_integral_vectorized():
    alphas = np.array([0, 0.1, 0.2])
    values = box_integral(alphas, 0, 10)
    assert values[0] == 10
    assert values[1] == pytest.approx(box_integral(0.1, 0, 10))


def test_s_minus_i(params, ps_set):
    assert 0 <= s_minus_i_residual(0, params, ps_set) < 0.5


def test_product_identity(params, ps_set, coefficients):
    residual = product_identity_residual(0.0123, coefficients, params, ps_set)
    assert residual <= 1e-12 * ps_set.weight_total ** 3


@pytest.mark.parametrize('kind', SUM_KINDS)
def test_sum_grid(params, table, ps_set, kind):

    alphas = np.array([0.0, 0.1, 0.25])
    values = sum_grid(kind, alphas, params, table)

    assert values.shape == (3,)

    if kind == 'S':
        assert values[1] == pytest.approx(sum_S(0.1, params, ps_set).value, rel=1e-12)

    if kind == 'I':
        assert values[2] == pytest.approx(complex(integral_I(0.25, params)))


@pytest.mark.parametrize('kind', ['Sigma', 'Omega', 'Psi', 'I'])
@pytest.mark.parametrize('alpha', [0.001, 0.1234, 0.70710678])
def test_sum_grid_conjugate(params, table, kind, alpha):
    """Real coefficients: the value at −α is the conjugate of the value at α.
    """
    plus, minus = sum_grid(kind, [alpha, -alpha], params, table)

    if kind == 'Omega':
        scale = float(np.abs(split_weights(params, table).omega).sum())
    else:
        scale = abs(sum_grid(kind, [0.0], params, table)[0])

    assert abs(minus - plus.conjugate()) <= 1e-12 * scale


def test_sum_grid_unknown_kind(params, table):
    with pytest.raises(DomainError):
        sum_grid('T', [0.1], params, table)


def test_parseval(params, ps_set):

    result = l2_integral('S', 1, params, ps_set, period=True)

    assert result.kind == 'S-period'
    assert result.exact_error <= 1e-6
    assert result.ratio > 0


def test_l2_I(params):

    result = l2_integral('I', 2.0, params)

    assert 0 < result.value <= result.bound
    assert result.exact_error is None


def test_l2_S(params, ps_set):
    result = l2_integral('S', 1.0, params, ps_set)
    assert result.value > 0


@pytest.mark.parametrize('kind,inputs,lam', [
    ('S', None, 1.0),
    ('Q', None, 1.0),
    ('I', None, 0),
])
def test_l2_errors(params, kind, inputs, lam):
    with pytest.raises(DomainError):
        l2_integral(kind, lam, params, inputs)


def test_minor_arc_outside_window(params, table):

    report = minor_arc_check(1, 1, params, table)

    assert not report.in_window
    assert report.status == 'not estimable: q outside window'


def test_minor_arc_inside_window(params, table):

    report = minor_arc_check(3, 7, params, table)

    assert report.in_window
    assert report.status == 'estimable'
    assert report.Sigma >= 0 and report.sigma_ratio >= 0


@pytest.mark.parametrize('a,q', [(2, 4), (1, 0)])
def test_minor_arc_errors(params, table, a, q):
    with pytest.raises(DomainError):
        minor_arc_check(a, q, params, table)


def test_sum_table(ps_set):

    table = SumTable(ps_set)
    alphas = np.random.RandomState(2).uniform(-3, 3, 200)

    error = np.abs(table(alphas) - table.direct(alphas)).max()

    assert error <= 1e-6 * ps_set.weight_total


def test_sum_table_on_grid(ps_set):
    """Exact at the sample points.
    """
    table = SumTable(ps_set, size=1 << 12)
    alphas = np.arange(0, 64) / (1 << 12)

    assert np.allclose(table(alphas), table.direct(alphas), rtol=0, atol=1e-8)


def test_sum_table_aliasing(ps_set):
    with pytest.raises(DomainError):
        SumTable(ps_set, size=16)
