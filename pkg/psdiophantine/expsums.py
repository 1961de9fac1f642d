

import math

import attr
import numpy as np

from scipy.interpolate import CubicSpline
from tqdm import tqdm

from . import logger
from .errors import DomainError, PrecisionError
from .primes import PSPrimeSet, guarded_ceils, ps_primes_for
from .quadrature import adaptive_simpson
from .utils import compensated_sum


# Past this, α·p mod 1 has no fractional bits left in a double.
PHASE_LIMIT = 2.0 ** 52

# α rows evaluated together on vectorized grids.
GRID_ROWS = 256

TABLE_MIN = 1 << 12

TABLE_MAX = 1 << 22


@attr.s(frozen=True)
class PhaseValue:

    re = attr.ib(converter=float)

    im = attr.ib(converter=float)

    @classmethod
    def from_complex(cls, z):
        return cls(z.real, z.imag)

    def __complex__(self):
        return complex(self.re, self.im)

    def __abs__(self):
        return math.hypot(self.re, self.im)


@attr.s(frozen=True)
class SumResult:

    value = attr.ib()

    term_count = attr.ib()

    compensation_residual = attr.ib(default=0.0)

    @property
    def re(self):
        return self.value.real

    @property
    def im(self):
        return self.value.imag

    def __abs__(self):
        return abs(self.value)

    def __complex__(self):
        return complex(self.value)


def sawtooth(t):
    """ψ(t) = {t} − 1/2, with {t} = t − floor(t) in [0, 1). Vectorized.
    """
    t = np.asarray(t, dtype=float)
    out = t - np.floor(t) - 0.5
    return out if out.ndim else float(out)


def _frac(t):
    return t - np.floor(t)


def unit_phase(t):
    """e(t) = exp(2πit), reducing t mod 1 first.

    Returns: PhaseValue
    """
    r = 2 * math.pi * float(_frac(t))
    return PhaseValue(math.cos(r), math.sin(r))


def phases(t):
    """Vectorized e(t) as a complex array, t reduced mod 1.
    """
    r = 2 * np.pi * _frac(np.asarray(t, dtype=float))
    return np.cos(r) + 1j * np.sin(r)


def _check_precision(alpha, top):
    if abs(alpha) * top > PHASE_LIMIT:
        raise PrecisionError(
            'alpha*X = %.6g exceeds 2^52; phases have no precision left.' % (
                abs(alpha) * top,
            )
        )


def integer_phases(alpha, n):
    """e(αn) for integer n: α is reduced mod 1 before multiplying.
    """
    n = np.asarray(n)

    if len(n):
        _check_precision(alpha, float(np.abs(n).max()))

    return phases(_frac(alpha) * n.astype(np.float64))


def phase_sum(alpha, points, coefficients):
    """Σ c_n e(αn), ascending n, Neumaier-compensated on both components.

    Returns: SumResult
    """
    if not len(points):
        return SumResult(0j, 0, 0.0)

    e = integer_phases(alpha, points)

    re, re_res = compensated_sum(coefficients * e.real)
    im, im_res = compensated_sum(coefficients * e.imag)

    return SumResult(complex(re, im), len(points), re_res + im_res)


def phase_sum_grid(alphas, points, coefficients, progress=False):
    """Σ c_n e(αn) for every α in a grid; plain dot products by row block.

    Returns: complex np.ndarray
    """
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    out = np.zeros(len(alphas), dtype=complex)

    if not len(points) or not len(alphas):
        return out

    _check_precision(np.abs(alphas).max(), float(np.abs(points).max()))

    n = np.asarray(points, dtype=np.float64)
    c = np.asarray(coefficients, dtype=np.float64)

    blocks = range(0, len(alphas), GRID_ROWS)
    for start in tqdm(blocks, disable=not progress):
        rows = _frac(alphas[start:start + GRID_ROWS])
        out[start:start + GRID_ROWS] = phases(np.outer(rows, n)).dot(c)

    return out


def _check_set(params, ps_set):
    if not ps_set.matches(params.gamma, params.lo, params.X):
        raise DomainError(
            'PS set %r was not built for (%g, %g], gamma=%r.' % (
                ps_set, params.lo, params.X, params.gamma.value,
            )
        )


def sum_S(alpha, params, ps_set):
    """S(α, X) = Σ_{PS p in (λ₀X, X]} p^(1−γ) e(αp) log p.

    Returns: SumResult
    """
    _check_set(params, ps_set)
    return phase_sum(alpha, ps_set.primes, ps_set.weights)


def _window_primes(params, table):
    return table.between(params.lo, params.X)


def sum_Sigma(alpha, params, table):
    """Σ(α, X) = γ Σ_{λ₀X < p <= X} e(αp) log p.

    Returns: SumResult
    """
    p = _window_primes(params, table)
    weights = params.gamma.value * np.log(p.astype(np.float64))
    return phase_sum(alpha, p, weights)


@attr.s(frozen=True)
class SplitWeights:
    """Per-prime coefficients of the exact split S = Σ′ + Ω.
    """

    primes = attr.ib(repr=False)

    indicator = attr.ib(repr=False)

    middle = attr.ib(repr=False)

    omega = attr.ib(repr=False)


def split_weights(params, table):
    """Coefficients over all primes in (λ₀X, X]:

        indicator  p^(1−γ) ([−p^γ] − [−(p+1)^γ]) log p
        middle     p^(1−γ) ((p+1)^γ − p^γ) log p
        omega      p^(1−γ) (ψ(−(p+1)^γ) − ψ(−p^γ)) log p

    ψ(−u) is taken as ceil(u) − u − 1/2 with the guarded ceiling, so the
    three agree term by term up to one rounding per product.

    Returns: SplitWeights
    """
    p = _window_primes(params, table)
    gamma = params.gamma.value

    u, v, ceil_u, ceil_v = guarded_ceils(p, gamma)

    pf = p.astype(np.float64)
    scale = np.power(pf, 1 - gamma) * np.log(pf)

    psi_u = (ceil_u - u) - 0.5
    psi_v = (ceil_v - v) - 0.5

    return SplitWeights(
        primes=p,
        indicator=scale * (ceil_v - ceil_u),
        middle=scale * (v - u),
        omega=scale * (psi_v - psi_u),
    )


def sum_Omega(alpha, params, table):
    """Ω(α, X) = Σ_{λ₀X < p <= X} p^(1−γ) (ψ(−(p+1)^γ) − ψ(−p^γ)) e(αp) log p.

    Returns: SumResult
    """
    w = split_weights(params, table)
    return phase_sum(alpha, w.primes, w.omega)


def box_integral(alpha, lo, hi, scale=1.0):
    """scale · ∫_lo^hi e(αy) dy, in the stable form
    scale · e(α(lo+hi)/2) sin(πα(hi−lo)) / (πα). Vectorized over α.

    Returns: complex (or complex np.ndarray)
    """
    alpha = np.asarray(alpha, dtype=float)
    scalar = not alpha.ndim
    alpha = np.atleast_1d(alpha)

    out = np.full(alpha.shape, scale * (hi - lo), dtype=complex)
    nz = alpha != 0

    a = alpha[nz]
    out[nz] = (
        scale * phases(a * (lo + hi) / 2) *
        np.sin(np.pi * a * (hi - lo)) / (np.pi * a)
    )

    return complex(out[0]) if scalar else out


def integral_I(alpha, params):
    """I(α, X) = γ ∫_{λ₀X}^X e(αy) dy; γ(1−λ₀)X at α = 0.

    Returns: PhaseValue
    """
    return PhaseValue.from_complex(
        box_integral(alpha, params.lo, params.X, params.gamma.value)
    )


def sum_Psi(alpha, X, table):
    """Ψ(α, X) = Σ_{p <= X} e(αp) log p.

    Returns: SumResult
    """
    if X < 2:
        return SumResult(0j, 0, 0.0)

    p = table.between(0, X)
    return phase_sum(alpha, p, np.log(p.astype(np.float64)))


@attr.s(frozen=True)
class DecompositionReport:

    S = attr.ib()

    Sigma = attr.ib()

    Sigma_exact = attr.ib()

    Omega = attr.ib()

    @property
    def residual(self):
        """|S − Σ′ − Ω|; zero up to rounding.
        """
        return abs(self.S - self.Sigma_exact - self.Omega)

    @property
    def gap(self):
        """|Σ′ − Σ|, the O(log²X) difference.
        """
        return abs(self.Sigma_exact - self.Sigma)


def decomposition_report(alpha, params, table):
    """S, Σ, Σ′ and Ω at one α, on the same phases.

    Returns: DecompositionReport
    """
    w = split_weights(params, table)
    sigma = params.gamma.value * np.log(w.primes.astype(np.float64))

    return DecompositionReport(
        S=phase_sum(alpha, w.primes, w.indicator).value,
        Sigma=phase_sum(alpha, w.primes, sigma).value,
        Sigma_exact=phase_sum(alpha, w.primes, w.middle).value,
        Omega=phase_sum(alpha, w.primes, w.omega).value,
    )


def decomposition_residual(alpha, params, table):
    """Returns: (|S − Σ′ − Ω|, |Σ′ − Σ|)
    """
    report = decomposition_report(alpha, params, table)
    return report.residual, report.gap


def s_minus_i_residual(alpha, params, ps_set):
    """|S(α) − I(α)| / X.
    """
    S = sum_S(alpha, params, ps_set).value
    I = complex(integral_I(alpha, params))
    return abs(S - I) / params.X


def product_identity_residual(t, c, params, ps_set):
    """|S₁S₂S₃ − (I₁I₂I₃ + (S₁−I₁)I₂I₃ + S₁(S₂−I₂)I₃ + S₁S₂(S₃−I₃))| at
    Sᵢ = S(λᵢt), Iᵢ = I(λᵢt).
    """
    S1, S2, S3 = [sum_S(l * t, params, ps_set).value for l in c.lambdas]
    I1, I2, I3 = [complex(integral_I(l * t, params)) for l in c.lambdas]

    split = (
        I1 * I2 * I3 +
        (S1 - I1) * I2 * I3 +
        S1 * (S2 - I2) * I3 +
        S1 * S2 * (S3 - I3)
    )

    return abs(S1 * S2 * S3 - split)


SUM_KINDS = ('S', 'Sigma', 'Omega', 'I', 'Psi')


def sum_grid(kind, alphas, params, table, progress=False):
    """One of S, Σ, Ω, I, Ψ over an α grid.

    Returns: complex np.ndarray
    """
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))

    if kind == 'I':
        return box_integral(alphas, params.lo, params.X, params.gamma.value)

    if kind == 'S':
        ps_set = ps_primes_for(params, table)
        points, coefficients = ps_set.primes, ps_set.weights

    elif kind == 'Sigma':
        points = _window_primes(params, table)
        coefficients = params.gamma.value * np.log(points.astype(np.float64))

    elif kind == 'Omega':
        w = split_weights(params, table)
        points, coefficients = w.primes, w.omega

    elif kind == 'Psi':
        points = table.between(0, params.X)
        coefficients = np.log(points.astype(np.float64))

    else:
        raise DomainError('Unknown sum kind %r; expected one of %s.' % (
            kind, ', '.join(SUM_KINDS),
        ))

    return np.array([
        phase_sum(alpha, points, coefficients).value
        for alpha in tqdm(alphas, disable=not progress)
    ])


@attr.s(frozen=True)
class L2Result:

    kind = attr.ib()

    value = attr.ib()

    panels = attr.ib()

    reference = attr.ib()

    exact = attr.ib(default=None)

    bound = attr.ib(default=None)

    @property
    def ratio(self):
        """value / reference bound shape.
        """
        return self.value / self.reference

    @property
    def exact_error(self):
        if self.exact is None:
            return None
        return abs(self.value - self.exact) / abs(self.exact)


def l2_integral(kind, lam, params, inputs=None, period=False, rtol=1e-6):
    """Squared-modulus integrals by adaptive Simpson.

        kind S:           ∫_{−Δ}^{Δ} |S(λα)|² dα, reference X log³X
        kind S, period:   ∫_0^1 |S(α)|² dα, reference X^(2−γ) log²X, plus the
                          exact Σ (p^(1−γ) log p)²
        kind I:           ∫_{−Δ}^{Δ} |I(λα)|² dα, reference X log X, plus the
                          trivial bound γ²·2Δ((1−λ₀)X)²

    Args:
        kind (str): 'S' or 'I'.
        lam (float): λ, ignored when period is set.
        inputs (PSPrimeSet): The set, for kind S.

    Returns: L2Result
    """
    X, log_X = params.X, params.log_X

    if kind == 'S':

        if not isinstance(inputs, PSPrimeSet):
            raise DomainError('Kind S needs the PS set as inputs.')

        _check_set(params, inputs)

        points, coefficients = inputs.primes, inputs.weights

        def integrand_at(alpha):
            return np.abs(phase_sum_grid(alpha, points, coefficients)) ** 2

        if period:
            # Simpson is exact on trig polynomials once n/2 exceeds the degree.
            spread = float(points[-1] - points[0]) if len(points) else 0.0
            value, panels = adaptive_simpson(
                integrand_at, 0, 1, min_panels=max(16, 2 * spread + 2), rtol=rtol,
            )
            return L2Result(
                kind='S-period',
                value=float(value),
                panels=panels,
                reference=X ** (2 - params.gamma.value) * log_X ** 2,
                exact=math.fsum(inputs.weights ** 2),
            )

        def integrand(alpha):
            return integrand_at(lam * alpha)

        reference = X * log_X ** 3

    elif kind == 'I':

        def integrand(alpha):
            return np.abs(box_integral(
                lam * alpha, params.lo, X, params.gamma.value,
            )) ** 2

        reference = X * log_X

    else:
        raise DomainError('Unknown L2 kind %r; expected S or I.' % kind)

    if lam == 0:
        raise DomainError('lambda must be nonzero.')

    min_panels = max(16, 16 * abs(lam) * X * params.Delta)

    value, panels = adaptive_simpson(
        integrand, -params.Delta, params.Delta, min_panels=min_panels, rtol=rtol,
    )

    bound = None
    if kind == 'I':
        bound = params.gamma.value ** 2 * 2 * params.Delta * (X - params.lo) ** 2

    return L2Result(
        kind=kind,
        value=float(value),
        panels=panels,
        reference=reference,
        bound=bound,
    )


@attr.s(frozen=True)
class MinorArcReport:

    a = attr.ib()

    q = attr.ib()

    in_window = attr.ib()

    Sigma = attr.ib()

    S = attr.ib()

    Psi = attr.ib()

    sigma_ratio = attr.ib()

    s_ratio = attr.ib()

    psi_ratio = attr.ib()

    @property
    def status(self):
        return 'estimable' if self.in_window else 'not estimable: q outside window'


def minor_arc_check(a, q, params, table):
    """Evaluate Σ, S and Ψ at α = a/q against the minor-arc bound shapes.

    Returns: MinorArcReport
    """
    if q < 1 or math.gcd(a, q) != 1:
        raise DomainError('Need q >= 1 and gcd(a, q) = 1, got a=%r, q=%r.' % (a, q))

    alpha = a / q
    X, log_X = params.X, params.log_X
    gamma = params.gamma.value

    lo, hi = params.window
    in_window = lo <= q <= hi

    if not in_window:
        logger.info('q=%d lies outside [%.4g, %.4g].' % (q, lo, hi))

    Sigma = abs(sum_Sigma(alpha, params, table))
    S = abs(sum_S(alpha, params, ps_primes_for(params, table)))
    Psi = abs(sum_Psi(alpha, X, table))

    return MinorArcReport(
        a=a,
        q=q,
        in_window=in_window,
        Sigma=Sigma,
        S=S,
        Psi=Psi,
        sigma_ratio=Sigma / (X ** (25 / 26) * log_X ** 4),
        s_ratio=S / (X ** ((37 - 12 * gamma) / 26) * log_X ** 5),
        psi_ratio=Psi / ((X / math.sqrt(q) + X ** 0.8 + math.sqrt(X * q)) * log_X ** 4),
    )


def _table_size(X):
    size = 1 << max(0, math.ceil(math.log2(64 * X)))
    return min(max(size, TABLE_MIN), TABLE_MAX)


class SumTable:

    def __init__(self, ps_set, size=None):
        """S(α) over one period, sampled by FFT and spline-interpolated.

        S(α) = e(cα) G(α), with c the integer midpoint of the primes. G only
        carries frequencies in [−D, D]; it is sampled at j/M for M > 2D and
        interpolated with periodic cubic splines on each component.

        Args:
            ps_set (PSPrimeSet)
            size (int): Samples per period. Defaults to 64X, as a power of 2
                clipped to [2^12, 2^22].
        """
        self.ps_set = ps_set
        primes = ps_set.primes

        self.center = int((int(primes[0]) + int(primes[-1])) // 2) if len(primes) else 0
        self.spread = int(np.abs(primes - self.center).max()) if len(primes) else 0

        self.size = size or _table_size(ps_set.hi)

        if self.size <= 2 * self.spread:
            raise DomainError('Table size %d aliases frequencies up to %d.' % (
                self.size, self.spread,
            ))

        coefficients = np.zeros(self.size, dtype=complex)
        np.add.at(coefficients, (primes - self.center) % self.size, ps_set.weights)

        samples = np.fft.ifft(coefficients) * self.size
        samples = np.append(samples, samples[0])

        grid = np.linspace(0, 1, self.size + 1)

        self.real = CubicSpline(grid, samples.real, bc_type='periodic')
        self.imag = CubicSpline(grid, samples.imag, bc_type='periodic')

        logger.debug('S table: %d samples, spread %d.' % (self.size, self.spread))

    def __call__(self, alpha):
        """Interpolated S(α). Vectorized.

        Returns: complex np.ndarray
        """
        alpha = np.asarray(alpha, dtype=float)

        if alpha.size:
            _check_precision(np.abs(alpha).max(), self.ps_set.hi)

        frac = _frac(alpha)
        G = self.real(frac) + 1j * self.imag(frac)

        return G * phases(frac * self.center)

    def direct(self, alpha):
        """Exact S(α) by summation, for comparisons.
        """
        return phase_sum_grid(alpha, self.ps_set.primes, self.ps_set.weights)
