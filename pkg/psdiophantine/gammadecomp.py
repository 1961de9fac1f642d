

import math

import attr
import numpy as np

from boltons.iterutils import chunked_iter
from cached_property import cached_property
from multiprocessing import Pool
from tqdm import tqdm

from . import logger
from .errors import DomainError
from .expsums import SumTable, box_integral, phase_sum_grid, phases
from .kernel import make_kernel, theta, theta_double_integral, theta_transform
from .params import form_range, feasible_box_check
from .primes import ps_indicator
from .quadrature import (
    SimpsonSweep, adaptive_simpson, log_segments, simpson, simpson_weights,
)


# p₁ rows per meet-in-the-middle job.
PAIR_ROWS = 64

# Window hits expanded at once; larger windows are refused.
MAX_HITS = 1 << 26

# Relative widening of the searchsorted window before the exact filter.
WINDOW_SLACK = 1e-9

# Γ₃ stops where the third bound branch drops below this times X^(3−3γ).
TAIL_CUTOFF = 1e-12

# Samples per period of the fastest phase.
FINE_SAMPLES = 64

SWEEP_SAMPLES = 8


@attr.s(frozen=True)
class TripleRecord:

    p1 = attr.ib()

    p2 = attr.ib()

    p3 = attr.ib()

    form_value = attr.ib()

    weight = attr.ib()

    threshold = attr.ib()

    verified = attr.ib(default=False)

    @property
    def theorem_ok(self):
        """|form| < (max p)^((37−38γ)/26) (log max p)^10.
        """
        return abs(self.form_value) < self.threshold

    @property
    def vacuous(self):
        return self.threshold > 1

    def row(self):
        return (self.p1, self.p2, self.p3, self.form_value, self.weight)


@attr.s(frozen=True)
class PairData:
    """Everything a meet-in-the-middle job needs.
    """

    primes = attr.ib(repr=False)

    lambdas = attr.ib()

    eta = attr.ib()

    epsilon = attr.ib()

    @cached_property
    def values(self):
        return self.primes.astype(np.float64)

    @cached_property
    def order(self):
        """Indices sorting λ₃p₃.
        """
        return np.argsort(self.lambdas[2] * self.values, kind='stable')

    @cached_property
    def sorted_third(self):
        return (self.lambdas[2] * self.values)[self.order]


def _window_hits(data, rows):
    """All (i₁, i₂, i₃) with |(λ₁p₁ + λ₂p₂ + η) + λ₃p₃| < ε, p₁ over `rows`.

    Returns: (i1, i2, i3, form) arrays
    """
    l1, l2, l3 = data.lambdas
    p = data.values

    rows = np.asarray(rows)
    pairs = (l1 * p[rows][:, None] + l2 * p[None, :]) + data.eta
    pairs = pairs.ravel()

    slack = WINDOW_SLACK * (np.abs(pairs) + data.epsilon)

    lo = np.searchsorted(data.sorted_third, -data.epsilon - pairs - slack, side='left')
    hi = np.searchsorted(data.sorted_third, data.epsilon - pairs + slack, side='right')

    counts = hi - lo
    total = int(counts.sum())

    if total > MAX_HITS:
        raise DomainError(
            'Window holds %d candidates for %d rows; lower eps_search.' % (total, len(rows))
        )

    pair_idx = np.repeat(np.arange(len(pairs)), counts)
    offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)

    i3 = data.order[lo[pair_idx] + offsets]
    form = pairs[pair_idx] + l3 * p[i3]

    keep = np.abs(form) < data.epsilon
    pair_idx, i3, form = pair_idx[keep], i3[keep], form[keep]

    i1 = rows[pair_idx // len(p)]
    i2 = pair_idx % len(p)

    return i1, i2, i3, form


def _weighted_chunk(args):
    """θ(form)·w₁w₂w₃ for every hit of one row chunk.
    """
    data, kernel, weights, rows = args

    i1, i2, i3, form = _window_hits(data, rows)

    return theta(kernel, form) * weights[i1] * weights[i2] * weights[i3]


def _pair_data(c, ps_set, epsilon):
    return PairData(
        primes=ps_set.primes,
        lambdas=c.lambdas,
        eta=c.eta,
        epsilon=float(epsilon),
    )


def big_gamma_direct(params, c, kernel, ps_set, eps_search, threads=1, progress=False):
    """Γ = Σ θ(λ₁p₁ + λ₂p₂ + λ₃p₃ + η) w₁w₂w₃ over PS triples, by
    meet-in-the-middle: λ₃p₃ sorted once, each (p₁, p₂) window found by two
    binary searches.

    The weights are the S(α) coefficients w = p^(1−γ) log p, so that Γ equals
    ∫ Θ(t) S(λ₁t) S(λ₂t) S(λ₃t) e(ηt) dt.
    They replace the bare θ · log p₁ log p₂ log p₃ of the plain
    triple count. TripleRecord.weight keeps that product for each triple.

    Row chunks are fixed, so the total (an exact fsum) does not depend on
    the worker count.

    Returns: (value, triples_found)
    """
    if not math.isclose(kernel.epsilon, eps_search, rel_tol=1e-12):
        raise DomainError('Kernel epsilon %r differs from eps_search %r.' % (
            kernel.epsilon, eps_search,
        ))

    if len(ps_set) == 0:
        logger.warning('Empty PS set; Gamma is 0.')
        return 0.0, 0

    data = _pair_data(c, ps_set, eps_search)

    jobs = [
        (data, kernel, ps_set.weights, rows)
        for rows in chunked_iter(range(len(ps_set)), PAIR_ROWS)
    ]

    if threads > 1 and len(jobs) > 1:
        with Pool(threads) as pool:
            parts = list(tqdm(
                pool.imap(_weighted_chunk, jobs),
                total=len(jobs),
                disable=not progress,
            ))
    else:
        parts = [
            _weighted_chunk(job)
            for job in tqdm(jobs, disable=not progress)
        ]

    weights = np.concatenate(parts)

    return math.fsum(weights), len(weights)


def big_gamma_brute(params, c, kernel, ps_set, eps_search):
    """Γ by the full n³ broadcast. Test oracle for small sets.

    Returns: (value, triples_found)
    """
    p = ps_set.primes.astype(np.float64)
    w = ps_set.weights

    l1, l2, l3 = c.lambdas

    form = (
        (l1 * p[:, None, None] + l2 * p[None, :, None]) + c.eta
    ) + l3 * p[None, None, :]

    i1, i2, i3 = np.nonzero(np.abs(form) < eps_search)
    weights = theta(kernel, form[i1, i2, i3]) * w[i1] * w[i2] * w[i3]

    return math.fsum(weights), len(weights)


def _is_prime(n):
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def theorem_threshold(p, gamma):
    """(max pⱼ)^((37−38γ)/26) (log max pⱼ)^10.
    """
    return p ** ((37 - 38 * gamma) / 26) * math.log(p) ** 10


def verify_triple(record, c, gamma, eps_search):
    """Re-check a triple from scratch: primality, PS indicator, window.
    """
    primes = (record.p1, record.p2, record.p3)

    return (
        all(_is_prime(p) for p in primes) and
        all(ps_indicator(p, gamma) == 1 for p in primes) and
        abs(c.form(*primes)) < eps_search
    )


def find_triples(params, c, ps_set, eps_search, max_results=100, kernel=None,
    progress=False):
    """Triples of PS primes with |form| < eps_search, smallest |form| first.

    Every record is verified independently before it is returned.

    Returns: list of TripleRecord
    """
    if len(ps_set) < 3:
        return []

    if kernel is None:
        kernel = make_kernel(eps_search, params.k)

    data = _pair_data(c, ps_set, eps_search)

    best = None

    for rows in tqdm(list(chunked_iter(range(len(ps_set)), PAIR_ROWS)), disable=not progress):

        hits = np.column_stack(_window_hits(data, rows))

        if best is not None:
            hits = np.vstack([best, hits])

        if len(hits) > max_results:
            keep = np.argsort(np.abs(hits[:, 3]), kind='stable')[:max_results]
            hits = hits[keep]

        best = hits

    best = best[np.argsort(np.abs(best[:, 3]), kind='stable')]

    primes = ps_set.primes
    gamma = params.gamma.value

    records = []
    for i1, i2, i3, form in best:

        p1, p2, p3 = (int(primes[int(i)]) for i in (i1, i2, i3))
        logs = math.log(p1) * math.log(p2) * math.log(p3)

        record = TripleRecord(
            p1=p1,
            p2=p2,
            p3=p3,
            form_value=float(form),
            weight=float(theta(kernel, form)) * logs,
            threshold=theorem_threshold(max(p1, p2, p3), gamma),
        )

        records.append(attr.evolve(
            record, verified=verify_triple(record, c, gamma, eps_search),
        ))

    failed = [r for r in records if not r.verified]
    if failed:
        logger.warning('%d triples failed re-verification.' % len(failed))

    if records and all(r.vacuous for r in records):
        logger.info('Theorem threshold exceeds 1 for every triple; vacuous at this scale.')

    return records


def form_bandwidth(params, c, epsilon):
    """Largest frequency in Θ(t) S(λ₁t) S(λ₂t) S(λ₃t) e(ηt): max |form| + ε.
    """
    lo, hi = form_range(c, params.lambda0, params.X)
    return max(abs(lo), abs(hi)) + epsilon


def tail_cutoff(params, kernel):
    """Smallest T (doubling from H) where the third bound branch is below
    1e-12 · X^(3−3γ).
    """
    k, eps = kernel.k, kernel.epsilon
    target = math.log(TAIL_CUTOFF) + (3 - 3 * params.gamma.value) * params.log_X

    def log_third(t):
        return -math.log(math.pi * t) + k * math.log(4 * k / (math.pi * eps * t))

    T = params.H_work
    while log_third(T) >= target:
        T *= 2

    return T


@attr.s(frozen=True)
class BoundValue:

    value = attr.ib()

    shape = attr.ib()

    @property
    def ratio(self):
        return self.value / self.shape


@attr.s(frozen=True)
class TailBound:

    k = attr.ib()

    base = attr.ib()

    theory_shape = attr.ib()

    majorant = attr.ib()

    @property
    def is_small(self):
        """Γ₃ ≪ 1 in the closed form.
        """
        return self.theory_shape <= 1


def check_kernel_order(params, kernel):
    if kernel.k != params.k:
        raise DomainError('Kernel order k=%d differs from the instance k=%d.' % (
            kernel.k, params.k,
        ))


def tail_shape(params, k, epsilon, weight_total=None):
    """Bounds on Γ₃ = ∫_{|t|>H} Θ S S S e(ηt) dt for a kernel of order k and
    width ε, in log space.

        theory shape  X^(3−3γ)/k · (4k/(πεH))^k
        majorant      2W³/(πk) · (4k/(πεH))^k,  W = S(0, X)

    The majorant follows from |S| <= W and the third branch of the Θ bound.
    Without a set, W is bounded by X^(1−γ) log X (X+1)^γ.

    Returns: TailBound
    """
    eps, H = epsilon, params.H_work
    gamma = params.gamma.value

    log_base = math.log(4 * k / (math.pi * eps * H))

    log_shape = (3 - 3 * gamma) * params.log_X - math.log(k) + k * log_base

    if weight_total is None:
        weight_total = (
            params.X ** (1 - gamma) * params.log_X * (params.X + 1) ** gamma
        )

    log_majorant = (
        math.log(2) + 3 * math.log(weight_total) - math.log(math.pi * k) + k * log_base
    )

    return TailBound(
        k=k,
        base=math.exp(log_base),
        theory_shape=math.exp(min(log_shape, 700)),
        majorant=math.exp(min(log_majorant, 700)),
    )


def tail_bound_gamma3(params, kernel, weight_total=None):
    """tail_shape() for the instance kernel. Its order must be params.k.

    Returns: TailBound
    """
    check_kernel_order(params, kernel)
    return tail_shape(params, kernel.k, kernel.epsilon, weight_total)


def phi_bound(params, kernel, c, samples=16):
    """Majorant of |J − B|:

        2 ∫_Δ^T |Θ(t)| Π γ min((1−λ₀)X, 1/(π|λᵢ|t)) dt
          + (7ε/4) γ³ / (π³ |λ₁λ₂λ₃| T²)

    reported against ε/Δ².

    Returns: BoundValue
    """
    gamma = params.gamma.value
    eps = kernel.epsilon
    width = params.X - params.lo

    lambdas = np.abs(np.array(c.lambdas))

    def integrand(t):
        I = gamma * np.minimum(width, 1 / (math.pi * np.outer(t, lambdas)))
        return np.abs(theta_transform(kernel, t)) * I.prod(axis=1)

    T = 1000 * max(params.Delta, 1 / eps)

    sweep = SimpsonSweep(log_segments(params.Delta, T), 1 / (samples * eps))

    value = math.fsum(
        float(np.dot(w, integrand(t))) for t, w in sweep.chunks()
    )

    tail = (7 * eps / 4) * gamma ** 3 / (math.pi ** 3 * lambdas.prod() * T ** 2)

    return BoundValue(value=2 * value + tail, shape=eps / params.Delta ** 2)


def box_integral_B(params, c, kernel):
    """B = γ³ ∫∫∫_{(λ₀X, X]³} θ(λ₁y₁ + λ₂y₂ + λ₃y₃ + η) dy.

    The y₂ and y₃ integrals are exact through the second antiderivative D of
    θ; what is left is a 1-D integral over y₁, split where the corner values
    cross ±ε.

    Returns: float (0 when the box misses the window)
    """
    eps = kernel.epsilon
    gamma = params.gamma.value
    lo, hi = params.lo, params.X
    l1, l2, l3 = c.lambdas

    if not feasible_box_check(c, params.lambda0, params.X, eps):
        return 0.0

    ends2 = sorted((l2 * lo, l2 * hi))
    ends3 = sorted((l3 * lo, l3 * hi))

    corners = [
        (ends2[1] + ends3[1], 1),
        (ends2[0] + ends3[1], -1),
        (ends2[1] + ends3[0], -1),
        (ends2[0] + ends3[0], 1),
    ]

    def integrand(y1):
        s = l1 * y1 + c.eta
        return sum(
            sign * theta_double_integral(kernel, s + corner)
            for corner, sign in corners
        )

    # y₁ where some corner value crosses ±ε.
    breaks = {lo, hi}
    for corner, _ in corners:
        for edge in (-eps, eps):
            y1 = (edge - corner - c.eta) / l1
            if lo < y1 < hi:
                breaks.add(y1)

    edges = sorted(breaks)

    total = math.fsum(
        adaptive_simpson(integrand, a, b, min_panels=64, rtol=1e-10)[0]
        for a, b in zip(edges[:-1], edges[1:])
    )

    return gamma ** 3 * total / (abs(l2) * abs(l3))


def lower_bound_ratio(gamma_value, params, epsilon):
    """Γ / (εX²).
    """
    return gamma_value / (epsilon * params.X ** 2)


class GammaPieces:

    def __init__(self, params, c, kernel, ps_set, progress=False):
        """Γ₁, Γ₂, Γ₃ and the integrals around them for one instance.

        Quadrature over |t| < Δ samples the fastest phase 64 times per
        period with direct sums; [Δ, H] and [H, T] use 8 samples per period
        against an interpolated S table, over logarithmic segments.
        """
        self.params = params
        self.c = c
        self.kernel = kernel
        self.ps_set = ps_set
        self.progress = progress

        check_kernel_order(params, kernel)

        self.bandwidth = form_bandwidth(params, c, kernel.epsilon)

    def _S(self, t, table=None):
        """S(λᵢt) for i = 1, 2, 3, shape (3, len(t)).
        """
        if table is None:
            return np.array([
                phase_sum_grid(l * t, self.ps_set.primes, self.ps_set.weights)
                for l in self.c.lambdas
            ])

        return np.array([table(l * t) for l in self.c.lambdas])

    def _I(self, t):
        p = self.params
        return np.array([
            box_integral(l * t, p.lo, p.X, p.gamma.value)
            for l in self.c.lambdas
        ])

    def _twist(self, t):
        return theta_transform(self.kernel, t) * phases(self.c.eta * t)

    @cached_property
    def central_nodes(self):
        """Symmetric Simpson nodes on (−Δ, Δ).

        Returns: (t, w)
        """
        D = self.params.Delta
        n = max(2, int(math.ceil(2 * D * FINE_SAMPLES * self.bandwidth)))
        n += n % 2

        t = np.linspace(-D, D, n + 1)
        return t, simpson_weights(n) * (2 * D / n) / 3

    @cached_property
    def central(self):
        """Γ₁, J and the three correction integrals on the same nodes.
        """
        t, w = self.central_nodes

        S1, S2, S3 = self._S(t)
        I1, I2, I3 = self._I(t)
        twist = self._twist(t)

        return {
            'gamma1': np.dot(w, twist * S1 * S2 * S3),
            'J': np.dot(w, twist * I1 * I2 * I3),
            'corrections': (
                np.dot(w, twist * (S1 - I1) * I2 * I3),
                np.dot(w, twist * S1 * (S2 - I2) * I3),
                np.dot(w, twist * S1 * S2 * (S3 - I3)),
            ),
        }

    @cached_property
    def table(self):
        return SumTable(self.ps_set)

    def _sweep(self, lo, hi):
        """Half-line Simpson sweep of the Γ integrand and its majorants.
        """
        step = 1 / (SWEEP_SAMPLES * self.bandwidth)
        sweep = SimpsonSweep(log_segments(lo, hi), step)

        logger.info('Sweeping [%.4g, %.4g] over %d panels.' % (lo, hi, len(sweep)))

        acc = {
            'value': [], 'direct': [], 'line1': [], 'line2': [],
            'T1': [], 'T2': [], 'T3': [],
        }
        sup = 0.0

        for t, w in sweep.chunks(self.progress):

            S = self._S(t, self.table)
            A = np.abs(S)

            theta_t = theta_transform(self.kernel, t)
            small = np.minimum(A[0], A[1])

            acc['value'].append(np.dot(w, theta_t * phases(self.c.eta * t) * S.prod(axis=0)))
            acc['direct'].append(np.dot(w, np.abs(theta_t) * A.prod(axis=0)))
            acc['line1'].append(np.dot(
                w, np.abs(theta_t) * small * (A[0] * A[2] + A[1] * A[2]),
            ))
            acc['line2'].append(np.dot(w, small * (A ** 2).sum(axis=0)))

            for i in range(3):
                acc['T%d' % (i + 1)].append(np.dot(w, A[i] ** 2))

            sup = max(sup, float(small.max()))

        out = {
            # The integrand at −t is the conjugate of the one at t.
            'value': 2 * math.fsum(v.real for v in acc['value']),
            'sup': sup,
        }

        for key in ('direct', 'line1', 'line2', 'T1', 'T2', 'T3'):
            out[key] = math.fsum(acc[key])

        return out

    @cached_property
    def middle(self):
        return self._sweep(self.params.Delta, self.params.H_work)

    @cached_property
    def cutoff(self):
        return tail_cutoff(self.params, self.kernel)

    @cached_property
    def tail(self):
        if self.cutoff <= self.params.H_work:
            return {'value': 0.0}
        return self._sweep(self.params.H_work, self.cutoff)

    def piece(self, n):
        if n == 1:
            return complex(self.central['gamma1'])
        if n == 2:
            return complex(self.middle['value'])
        if n == 3:
            return complex(self.tail['value'])
        raise DomainError('Piece must be 1, 2 or 3, got %r.' % n)

    def majorant(self):
        """The Γ₂ majorant chain, each line bounding the one before:

            direct  2∫ |Θ| |S₁S₂S₃|
            line1   2∫ |Θ| 𝔖 (|S₁S₃| + |S₂S₃|)
            line2   2 (7ε/4) ∫ 𝔖 Σ |Sᵢ|²
            line3   2 (7ε/4) sup 𝔖 Σ T_k

        with 𝔖 = min(|S(λ₁t)|, |S(λ₂t)|) and T_k = ∫_Δ^H |S(λ_k t)|².

        Returns: Gamma2Majorant
        """
        m = self.middle
        p = self.params
        eps = self.kernel.epsilon
        gamma = p.gamma.value

        T = (m['T1'], m['T2'], m['T3'])

        return Gamma2Majorant(
            direct=2 * m['direct'],
            line1=2 * m['line1'],
            line2=2 * (7 * eps / 4) * m['line2'],
            line3=2 * (7 * eps / 4) * m['sup'] * sum(T),
            T=T,
            sup=m['sup'],
            sup_shape=p.X ** ((37 - 12 * gamma) / 26) * p.log_X ** 5,
            T_shape=p.H_work * p.X ** (2 - gamma) * p.log_X ** 2,
            final_shape=eps * p.X ** 2 / p.log_X,
        )


@attr.s(frozen=True)
class Gamma2Majorant:

    direct = attr.ib()

    line1 = attr.ib()

    line2 = attr.ib()

    line3 = attr.ib()

    T = attr.ib()

    sup = attr.ib()

    sup_shape = attr.ib()

    T_shape = attr.ib()

    final_shape = attr.ib()

    @property
    def value(self):
        return self.direct

    @property
    def ratios(self):
        return {
            'sup': self.sup / self.sup_shape,
            'T': [t / self.T_shape for t in self.T],
            'line3': self.line3 / self.final_shape,
        }


def gamma_piece(piece, params, c, kernel, ps_set):
    """Γ₁ (|t| < Δ), Γ₂ (Δ <= |t| <= H) or Γ₃ (H < |t| <= T, truncated).

    Returns: complex
    """
    return GammaPieces(params, c, kernel, ps_set).piece(piece)


def integral_J(params, c, kernel):
    """J = ∫_{|t|<Δ} Θ(t) I(λ₁t) I(λ₂t) I(λ₃t) e(ηt) dt.
    """
    D = params.Delta
    F = form_bandwidth(params, c, kernel.epsilon)

    n = max(2, int(math.ceil(2 * D * FINE_SAMPLES * F)))
    n += n % 2

    def integrand(t):
        value = theta_transform(kernel, t) * phases(c.eta * t)
        for l in c.lambdas:
            value = value * box_integral(l * t, params.lo, params.X, params.gamma.value)
        return value

    return float(simpson(integrand, -D, D, n).real)


@attr.s(frozen=True)
class Gamma1Corrections:

    first = attr.ib()

    second = attr.ib()

    third = attr.ib()

    @property
    def total(self):
        return self.first + self.second + self.third


def gamma1_corrections(params, c, kernel, ps_set):
    """The three integrals that make up Γ₁ − J.

    Returns: Gamma1Corrections
    """
    pieces = GammaPieces(params, c, kernel, ps_set)
    return Gamma1Corrections(*map(complex, pieces.central['corrections']))


def gamma2_majorant(params, c, ps_set, kernel):
    """Returns: Gamma2Majorant
    """
    return GammaPieces(params, c, kernel, ps_set).majorant()


@attr.s(frozen=True)
class DecompositionResult:

    gamma_total = attr.ib()

    gamma1 = attr.ib()

    gamma2 = attr.ib()

    gamma3 = attr.ib()

    J = attr.ib()

    B = attr.ib()

    Phi_bound = attr.ib()

    tail_bound = attr.ib()

    triples_found = attr.ib(default=0)

    gamma2_bound = attr.ib(default=None)

    cutoff = attr.ib(default=None)

    @property
    def fourier_total(self):
        return self.gamma1 + self.gamma2 + self.gamma3

    @property
    def closure(self):
        """|Γ₁ + Γ₂ + Γ₃ − Γ| / Γ.
        """
        if not self.gamma_total:
            return None
        return abs(self.fourier_total - self.gamma_total) / abs(self.gamma_total)

    @property
    def tail_ok(self):
        return abs(self.gamma3) <= self.tail_bound.majorant

    def to_dict(self):

        def split(z):
            return {'re': z.real, 'im': z.imag}

        return {
            'gamma_total': self.gamma_total,
            'triples_found': self.triples_found,
            'gamma1': split(self.gamma1),
            'gamma2': split(self.gamma2),
            'gamma3': split(self.gamma3),
            'closure': self.closure,
            'J': self.J,
            'B': self.B,
            'phi_bound': self.Phi_bound.value,
            'phi_ratio': self.Phi_bound.ratio,
            'tail_cutoff': self.cutoff,
            'tail_bound': self.tail_bound.majorant,
            'tail_theory_shape': self.tail_bound.theory_shape,
            'tail_base': self.tail_bound.base,
            'tail_ok': self.tail_ok,
            'gamma2_majorant': (
                None if self.gamma2_bound is None else self.gamma2_bound.value
            ),
        }


def decompose(params, c, kernel, ps_set, pieces=(1, 2, 3), threads=1, progress=False):
    """Γ directly and through its Fourier split, with the bounds around it.

    Returns: DecompositionResult
    """
    check_kernel_order(params, kernel)

    eps = kernel.epsilon

    total, found = big_gamma_direct(
        params, c, kernel, ps_set, eps, threads=threads, progress=progress,
    )

    split = GammaPieces(params, c, kernel, ps_set, progress=progress)

    values = {n: (split.piece(n) if n in pieces else 0j) for n in (1, 2, 3)}

    return DecompositionResult(
        gamma_total=total,
        gamma1=values[1],
        gamma2=values[2],
        gamma3=values[3],
        J=integral_J(params, c, kernel),
        B=box_integral_B(params, c, kernel),
        Phi_bound=phi_bound(params, kernel, c),
        tail_bound=tail_bound_gamma3(params, kernel, ps_set.weight_total),
        triples_found=found,
        gamma2_bound=split.majorant() if 2 in pieces else None,
        cutoff=split.cutoff,
    )
