

import math

import attr

from cached_property import cached_property

from . import logger
from .errors import DomainError


THEOREM_GAMMA_MIN = 37 / 38


@attr.s(frozen=True)
class GammaExponent:

    value = attr.ib(converter=float)

    @value.validator
    def _check_value(self, attribute, value):
        if not 0 < value < 1:
            raise DomainError('gamma must lie in the open interval (0, 1), got %r.' % value)

    @classmethod
    def from_c(cls, c):
        """Exponent given as p = [n^c], c = 1/gamma.
        """
        if not c > 1:
            raise DomainError('c must exceed 1, got %r.' % c)
        return cls(1 / c)

    @property
    def theorem_range(self):
        return THEOREM_GAMMA_MIN < self.value < 1

    def __float__(self):
        return self.value


def _nonzero(instance, attribute, value):
    if value == 0 or not math.isfinite(value):
        raise DomainError('%s must be a nonzero finite real.' % attribute.name)


@attr.s(frozen=True)
class Coefficients:

    lambda1 = attr.ib(converter=float, validator=_nonzero)

    lambda2 = attr.ib(converter=float, validator=_nonzero)

    lambda3 = attr.ib(converter=float, validator=_nonzero)

    eta = attr.ib(converter=float, default=0.0)

    irrationality_asserted = attr.ib(converter=bool, default=False)

    @property
    def lambdas(self):
        return (self.lambda1, self.lambda2, self.lambda3)

    def form(self, p1, p2, p3):
        """λ₁p₁ + λ₂p₂ + λ₃p₃ + η, summed in a fixed order.
        """
        return (self.lambda1 * p1 + self.lambda2 * p2 + self.eta) + self.lambda3 * p3

    def negated(self):
        return attr.evolve(
            self,
            lambda1=-self.lambda1,
            lambda2=-self.lambda2,
            lambda3=-self.lambda3,
            eta=-self.eta,
        )


@attr.s(frozen=True)
class CoefficientReport:

    checks = attr.ib()

    canonical = attr.ib()

    permutation = attr.ib()

    negated = attr.ib()

    @property
    def passed(self):
        return all(self.checks.values())

    @property
    def failures(self):
        return [name for name, ok in self.checks.items() if not ok]

    @property
    def is_canonical(self):
        return self.permutation == (0, 1, 2) and not self.negated


def validate_coefficients(c):
    """Check the sign hypotheses and find the canonical normalization.

    Canonical means λ₁ > 0, λ₂ > 0, λ₃ < 0: negate everything (η too) if two
    coefficients are negative, then move the odd-signed one to the third slot,
    keeping the order of the other two.

    Args:
        c (Coefficients)

    Returns: CoefficientReport
    """
    signs = [math.copysign(1, l) for l in c.lambdas]

    checks = {
        'nonzero': all(l != 0 for l in c.lambdas),
        'mixed_signs': len(set(signs)) > 1,
    }

    if not checks['mixed_signs']:
        return CoefficientReport(checks, None, None, False)

    negate = signs.count(-1) == 2
    source = c.negated() if negate else c

    lambdas = source.lambdas
    odd = next(i for i, l in enumerate(lambdas) if l < 0)
    permutation = tuple([i for i in range(3) if i != odd] + [odd])

    canonical = Coefficients(
        *[lambdas[i] for i in permutation],
        eta=source.eta,
        irrationality_asserted=c.irrationality_asserted,
    )

    return CoefficientReport(checks, canonical, permutation, negate)


@attr.s(frozen=True)
class RunParameters:

    q0 = attr.ib()

    gamma = attr.ib()

    lambda0 = attr.ib()

    X = attr.ib()

    Delta = attr.ib()

    epsilon = attr.ib()

    H = attr.ib()

    epsilon_user = attr.ib(default=None)

    @cached_property
    def log_X(self):
        return math.log(self.X)

    @property
    def epsilon_work(self):
        """The ε actually used for searches and kernels.
        """
        return self.epsilon if self.epsilon_user is None else self.epsilon_user

    @cached_property
    def H_work(self):
        if self.epsilon_user is None:
            return self.H
        return self.log_X ** 2 / self.epsilon_user

    @property
    def k(self):
        """Kernel order [log X].
        """
        return max(1, math.floor(self.log_X))

    @property
    def lo(self):
        return self.lambda0 * self.X

    @property
    def window(self):
        """Minor-arc denominator window [X^(1/13), X^(12/13)].
        """
        return (self.X ** (1 / 13), self.X ** (12 / 13))

    @property
    def theory_epsilon_vacuous(self):
        return self.epsilon > 1

    def to_dict(self):
        return {
            'q0': self.q0,
            'gamma': self.gamma.value,
            'theorem_range': self.gamma.theorem_range,
            'lambda0': self.lambda0,
            'X': self.X,
            'Delta': self.Delta,
            'epsilon': self.epsilon,
            'H': self.H,
            'epsilon_user': self.epsilon_user,
            'epsilon_work': self.epsilon_work,
            'H_work': self.H_work,
            'k': self.k,
        }


def scale_parameters(q0, gamma):
    """X, Δ, ε, H from q0 and γ.

    Returns: (X, Delta, epsilon, H)
    """
    log_X = (13 / 6) * math.log(q0)
    X = math.exp(log_X)

    Delta = X ** (-12 / 13) * log_X
    epsilon = X ** ((37 - 38 * gamma) / 26) * log_X ** 10
    H = log_X ** 2 / epsilon

    return X, Delta, epsilon, H


def derive_parameters(q0, gamma, lambda0, epsilon_user=None):
    """Build a RunParameters instance.

    Args:
        q0 (int)
        gamma (GammaExponent or float)
        lambda0 (float)
        epsilon_user (float): Optional working ε.

    Returns: RunParameters
    """
    if not isinstance(gamma, GammaExponent):
        gamma = GammaExponent(gamma)

    if int(q0) != q0 or q0 < 2:
        raise DomainError('q0 must be an integer >= 2, got %r.' % q0)

    if not 0 < lambda0 < 1:
        raise DomainError('lambda0 must lie in (0, 1), got %r.' % lambda0)

    if epsilon_user is not None and not epsilon_user > 0:
        raise DomainError('epsilon_user must be positive, got %r.' % epsilon_user)

    X, Delta, epsilon, H = scale_parameters(int(q0), gamma.value)

    params = RunParameters(
        q0=int(q0),
        gamma=gamma,
        lambda0=float(lambda0),
        X=X,
        Delta=Delta,
        epsilon=epsilon,
        H=H,
        epsilon_user=None if epsilon_user is None else float(epsilon_user),
    )

    if params.Delta >= params.H_work:
        raise DomainError(
            'Instance too small: Delta=%.6g >= H=%.6g (q0=%d, epsilon=%.6g).' % (
                params.Delta, params.H_work, params.q0, params.epsilon_work,
            )
        )

    if params.theory_epsilon_vacuous:
        logger.debug('Scale epsilon %.4g > 1 at X=%.4g.' % (epsilon, X))

    return params


def form_range(c, lambda0, X):
    """Range of λ₁y₁ + λ₂y₂ + λ₃y₃ + η over the cube (λ₀X, X]^3.

    Returns: (lo, hi)
    """
    lo = hi = c.eta
    for l in c.lambdas:
        ends = (l * lambda0 * X, l * X)
        lo += min(ends)
        hi += max(ends)
    return lo, hi


def feasible_box_check(c, lambda0, X, epsilon):
    """Is {y in (λ₀X, X]^3 : |form(y)| < ε} nonempty?

    Returns: bool
    """
    lo, hi = form_range(c, lambda0, X)
    feasible = lo < epsilon and hi > -epsilon

    if not feasible:
        logger.warning(
            'Form range [%.6g, %.6g] misses (-%g, %g); B(X) vanishes.' % (
                lo, hi, epsilon, epsilon,
            )
        )

    return feasible
