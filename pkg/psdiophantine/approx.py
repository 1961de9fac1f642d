

import math

from fractions import Fraction

import attr

from . import logger
from .errors import ApproximationError, DomainError
from .utils import safe_property


# Fractional remainders below this are treated as exhausted precision.
REMAINDER_FLOOR = 1e-12

MAX_TERMS = 64


@attr.s(frozen=True)
class Rational:

    a = attr.ib()

    q = attr.ib()

    @q.validator
    def _check_q(self, attribute, value):
        if value < 1:
            raise DomainError('Denominator must be >= 1, got %r.' % value)

    @classmethod
    def of(cls, a, q):
        """Normalized: q > 0, gcd(|a|, q) = 1.
        """
        if q == 0:
            raise DomainError('Zero denominator.')
        if q < 0:
            a, q = -a, -q
        g = math.gcd(a, q)
        return cls(a // g, q // g)

    @property
    def fraction(self):
        return Fraction(self.a, self.q)

    def __float__(self):
        return self.a / self.q

    def __str__(self):
        return '%d/%d' % (self.a, self.q)


@attr.s(frozen=True)
class ConvergentSeq:

    x = attr.ib()

    partial_quotients = attr.ib()

    convergents = attr.ib()

    rational = attr.ib(default=False)

    @property
    def flag(self):
        return 'rational-at-precision' if self.rational else None

    def __len__(self):
        return len(self.convergents)

    def __iter__(self):
        return iter(self.convergents)


def _expand(value, max_terms, stop=None):
    """Exact CF expansion of a Fraction.

    Yields: (partial quotient, Rational convergent, remainder)
    """
    p_prev, p = 1, math.floor(value)
    q_prev, q = 0, 1

    r = value - p
    yield p, Rational(p, q), r

    for _ in range(max_terms - 1):

        if r == 0 or (stop and stop(p, q, r)):
            return

        value = 1 / r
        a = math.floor(value)
        r = value - a

        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev

        yield a, Rational(p, q), r


def continued_fraction(x, max_terms=MAX_TERMS):
    """Continued fraction of a double, taken as the exact rational it is.

    Stops after max_terms, when the remainder hits zero or falls below
    1e-12, or when the last convergent already rounds to x; the last three
    flag the expansion as rational-at-precision.

    Returns: ConvergentSeq
    """
    if not math.isfinite(x):
        raise DomainError('x must be finite, got %r.' % x)

    if max_terms < 1:
        raise DomainError('max_terms must be >= 1, got %r.' % max_terms)

    x = float(x)

    def exhausted(p, q, r):
        return r < REMAINDER_FLOOR or p / q == x

    quotients, convergents = [], []
    rational = False

    for a, conv, r in _expand(Fraction(x), max_terms, exhausted):
        quotients.append(a)
        convergents.append(conv)
        rational = r == 0 or exhausted(conv.a, conv.q, r)

    return ConvergentSeq(x, quotients, convergents, rational)


def convergent_at(x, index):
    """The index-th convergent (0-based) of x.

    Returns: Rational
    """
    seq = continued_fraction(x, index + 1)

    if index >= len(seq):
        raise ApproximationError(
            '%r has only %d convergents at double precision.' % (x, len(seq))
        )

    return seq.convergents[index]


def _satisfies(value, r, Q):
    return r.q <= Q and abs(value - r.fraction) < Fraction(1, r.q * Q)


def dirichlet_approx(x, Q):
    """a/q with q <= Q and |x − a/q| < 1/(qQ).

    Takes the last convergent with denominator <= Q, falling back to the
    intermediate fractions between the last two. Verified exactly.

    Returns: Rational
    """
    if int(Q) != Q or Q < 1:
        raise DomainError('Q must be a positive integer, got %r.' % Q)

    if not math.isfinite(x):
        raise DomainError('x must be finite, got %r.' % x)

    Q = int(Q)
    value = Fraction(float(x))

    previous = last = None

    for _, conv, _ in _expand(value, 1 << 16, lambda p, q, r: False):
        if conv.q > Q:
            break
        previous, last = last, conv

    if _satisfies(value, last, Q):
        return last

    if previous is not None:

        for j in range(1, (Q - previous.q) // last.q + 1):
            mediant = Rational.of(previous.a + j * last.a, previous.q + j * last.q)
            if _satisfies(value, mediant, Q):
                return mediant

    raise ApproximationError('No a/q with q <= %d verified for x=%r.' % (Q, x))


def classify_denominator(q, X):
    """Where q sits relative to [X^(1/13), X^(12/13)], closed at both ends.

    Compares q^13 against X and X^12 exactly.

    Returns: 'below', 'estimable' or 'above'
    """
    if not X > 1:
        raise DomainError('X must exceed 1, got %r.' % X)

    X = Fraction(X)
    power = Fraction(q) ** 13

    if power < X:
        return 'below'

    if power > X ** 12:
        return 'above'

    return 'estimable'


DICHOTOMY_CASES = (
    'estimable',
    'zero-numerator',
    'a2q1-fails',
    'contradiction',
    'unexplained',
)


@attr.s(frozen=True)
class DichotomyReport:

    t = attr.ib()

    a0 = attr.ib()

    q0 = attr.ib()

    r1 = attr.ib()

    r2 = attr.ib()

    class1 = attr.ib()

    class2 = attr.ib()

    log_X = attr.ib()

    ai_bound_ok = attr.ib()

    zero_excluded = attr.ib()

    @property
    def nonzero(self):
        return self.r1.a != 0 and self.r2.a != 0

    @property
    def both_small(self):
        return self.class1 == 'below' and self.class2 == 'below'

    @property
    def a2q1(self):
        """|a₂|q₁ < q₀ / log X.
        """
        return abs(self.r2.a) * self.r1.q < self.q0 / self.log_X

    @safe_property
    def ratio(self):
        """a₁q₂ / (a₂q₁), the raw value left implicit in the chain.
        """
        return Fraction(self.r1.a * self.r2.q, self.r2.a * self.r1.q)

    @safe_property
    def gap(self):
        """|a₀/q₀ − a₁q₂/(a₂q₁)|.
        """
        return abs(Fraction(self.a0, self.q0) - self.ratio)

    @property
    def contradiction(self):
        """|a₀/q₀ − a₁q₂/(a₂q₁)| > log X / q₀².
        """
        return self.gap is not None and self.gap > self.log_X / self.q0 ** 2

    @property
    def case(self):

        if not self.both_small:
            return 'estimable'

        if not self.nonzero:
            return 'zero-numerator'

        if not self.a2q1:
            return 'a2q1-fails'

        if self.contradiction:
            return 'contradiction'

        return 'unexplained'

    def row(self):
        return (
            self.t, self.r1.a, self.r1.q, self.r2.a, self.r2.q,
            self.class1, self.class2, self.case,
        )


def dichotomy_probe(c, convergent, params, t):
    """Approximate λ₁t and λ₂t with denominators <= q₀² and walk the
    case split: one of q₁, q₂ in the minor-arc window, or the chain of
    inequalities that rules out both being small.

    Args:
        c (Coefficients): Canonical.
        convergent (Rational): a₀/q₀, a convergent of λ₁/λ₂.
        params (RunParameters)
        t (float): Δ <= |t| <= H.

    Returns: DichotomyReport
    """
    if not params.Delta <= abs(t) <= params.H_work:
        raise DomainError('t=%r is outside the band [%.6g, %.6g].' % (
            t, params.Delta, params.H_work,
        ))

    q0 = convergent.q
    Q = q0 ** 2

    l1, l2 = c.lambda1, c.lambda2

    r1 = dirichlet_approx(l1 * t, Q)
    r2 = dirichlet_approx(l2 * t, Q)

    ai_bound_ok = all(
        abs(r.a) <= abs(l) * abs(t) * r.q + 1
        for l, r in ((l1, r1), (l2, r2))
    )

    zero_excluded = all(abs(l) * params.Delta >= 1 / Q for l in (l1, l2))

    report = DichotomyReport(
        t=t,
        a0=convergent.a,
        q0=q0,
        r1=r1,
        r2=r2,
        class1=classify_denominator(r1.q, params.X),
        class2=classify_denominator(r2.q, params.X),
        log_X=params.log_X,
        ai_bound_ok=ai_bound_ok,
        zero_excluded=zero_excluded,
    )

    if report.case == 'unexplained':
        logger.warning('Unexplained both-small case at t=%r.' % t)

    return report
