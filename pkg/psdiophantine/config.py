

import attr

from box import Box

from . import logger
from .approx import Rational, continued_fraction, convergent_at
from .errors import ConfigError, DomainError, HypothesisError
from .params import (
    THEOREM_GAMMA_MIN, Coefficients, GammaExponent, derive_parameters,
    validate_coefficients,
)


REQUIRED_KEYS = ('gamma', 'lambda0', 'lambda1', 'lambda2', 'lambda3')

OPTIONAL_KEYS = ('q0', 'eta', 'epsilon_user', 'irrationality_asserted', 'convergent_index')

TRUE_WORDS = ('true', 'yes', 'on', '1')

FALSE_WORDS = ('false', 'no', 'off', '0')


def _parse_value(key, text, line):
    """Cast one raw value by key.
    """
    try:

        if key == 'irrationality_asserted':
            word = text.lower()
            if word in TRUE_WORDS:
                return True
            if word in FALSE_WORDS:
                return False
            raise ValueError(text)

        if key in ('q0', 'convergent_index'):
            return int(text)

        return float(text)

    except ValueError:
        raise ConfigError('bad value %r for %s.' % (text, key), line)


def read_config(text, **overrides):
    """Parse `key = value` lines into a Box.

    Args:
        text (str)
        overrides: Values that replace the file's, applied before the
            required-key checks. None leaves the file value.

    Returns: Box
    """
    known = REQUIRED_KEYS + OPTIONAL_KEYS
    data = {}

    for i, raw in enumerate(text.splitlines(), 1):

        line = raw.split('#', 1)[0].strip()

        if not line:
            continue

        if '=' not in line:
            raise ConfigError('expected `key = value`, got %r.' % raw.strip(), i)

        key, value = (part.strip() for part in line.split('=', 1))

        if key not in known:
            raise ConfigError('unknown key %r.' % key, i)

        if key in data:
            raise ConfigError('duplicate key %r.' % key, i)

        data[key] = _parse_value(key, value, i)

    for key, value in overrides.items():

        if key not in known:
            raise ConfigError('unknown key %r.' % key)

        if value is not None:
            data[key] = value

    for key in REQUIRED_KEYS:
        if key not in data:
            raise ConfigError('required key %r is missing.' % key)

    if 'q0' not in data and 'convergent_index' not in data:
        raise ConfigError('required key \'q0\' (or convergent_index) is missing.')

    data.setdefault('eta', 0.0)
    data.setdefault('irrationality_asserted', False)
    data.setdefault('epsilon_user', None)

    return Box(data)


def matching_convergent(x, q0):
    """The convergent of x with denominator q0, if there is one.
    """
    for conv in continued_fraction(x):
        if conv.q == q0:
            return conv
        if conv.q > q0:
            break


@attr.s(frozen=True)
class Instance:

    config = attr.ib()

    coefficients = attr.ib()

    report = attr.ib()

    params = attr.ib()

    convergent = attr.ib(default=None)

    @property
    def gamma(self):
        return self.params.gamma

    def to_dict(self):
        return {
            'config': self.config.to_dict(),
            'coefficients': {
                'lambda1': self.coefficients.lambda1,
                'lambda2': self.coefficients.lambda2,
                'lambda3': self.coefficients.lambda3,
                'eta': self.coefficients.eta,
                'permutation': list(self.report.permutation),
                'negated': self.report.negated,
            },
            'convergent': None if self.convergent is None else str(self.convergent),
            'parameters': self.params.to_dict(),
        }


def build_instance(config, strict=True):
    """Run every hypothesis check on a parsed config.

    Hypothesis failures (γ outside (37/38, 1), signs not mixed, Δ >= H) are
    collected and raised together.

    Args:
        config (Box)
        strict (bool): If False, γ in (0, 37/38] is allowed.

    Returns: Instance
    """
    gamma = config.gamma

    if not 0 < gamma < 1:
        raise DomainError(
            'gamma=%r outside the theorem range %.6f = 37/38 < gamma < 1.' % (
                gamma, THEOREM_GAMMA_MIN,
            )
        )

    gamma = GammaExponent(gamma)
    failures = []

    if strict and not gamma.theorem_range:
        failures.append('gamma=%r violates 37/38 < gamma < 1' % gamma.value)

    raw = Coefficients(
        config.lambda1, config.lambda2, config.lambda3,
        eta=config.eta,
        irrationality_asserted=config.irrationality_asserted,
    )

    report = validate_coefficients(raw)

    if not report.passed:
        failures.append('lambdas must not all share one sign')

    if not raw.irrationality_asserted:
        logger.warning('lambda1/lambda2 irrationality is not asserted.')

    convergent = None

    if report.passed:

        ratio = report.canonical.lambda1 / report.canonical.lambda2

        if config.get('convergent_index') is not None:
            convergent = convergent_at(ratio, config.convergent_index)
            if config.get('q0') not in (None, convergent.q):
                logger.warning('convergent_index overrides q0=%d.' % config.q0)
            config.q0 = convergent.q

        else:
            convergent = matching_convergent(ratio, config.q0)
            if convergent is None:
                logger.warning('q0=%d is not a convergent denominator.' % config.q0)

    params = None
    q0 = config.get('q0')

    if q0 is None:
        failures.append('q0 undetermined: convergent_index needs mixed-sign lambdas')

    else:
        try:
            params = derive_parameters(
                q0, gamma, config.lambda0, config.epsilon_user,
            )
        except DomainError as e:
            failures.append(str(e))

    if failures:
        raise HypothesisError(failures)

    return Instance(
        config=config,
        coefficients=report.canonical,
        report=report,
        params=params,
        convergent=convergent,
    )


def parse_config(path, strict=True, **overrides):
    """Read, validate and derive an instance from a config file.

    Keyword overrides (epsilon_user, convergent_index) replace the file
    values before anything is derived.

    Returns: Instance
    """
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError('cannot read %s: %s' % (path, e))

    return build_instance(read_config(text, **overrides), strict=strict)
