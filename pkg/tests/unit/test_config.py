

import pytest

from psdiophantine import DEMO_CONFIG_PATH
from psdiophantine.config import (
    matching_convergent, parse_config, read_config,
)
from psdiophantine.errors import ConfigError, DomainError, HypothesisError

from tests.utils import read_yaml, write_config

from . import SQRT2


def yield_cases():
    """Generate malformed config cases from YAML file.
    """
    for case in read_yaml(__file__, 'test_config.yml'):
        yield case['text'], case['line'], case['message']


@pytest.mark.parametrize('text,line,message', yield_cases())
def test_config_errors(text, line, message):

    with pytest.raises(ConfigError) as e:
        read_config(text)

    assert e.value.line == line
    assert message in str(e.value)
    assert e.value.exit_code == 2


def test_read_config_defaults():

    config = read_config('\n'.join([
        'q0 = 70  # convergent 99/70',
        '',
        'gamma = 0.98',
        'lambda0 = 0.5',
        'lambda1 = 1.4142135623730951',
        'lambda2 = 1',
        'lambda3 = -2',
    ]))

    assert config.q0 == 70
    assert config.lambda3 == -2.0
    assert config.eta == 0.0
    assert config.irrationality_asserted is False
    assert config.epsilon_user is None


def test_demo_config():

    instance = parse_config(DEMO_CONFIG_PATH)

    assert instance.params.q0 == 70
    assert instance.params.epsilon_work == 0.05
    assert str(instance.convergent) == '99/70'
    assert instance.gamma.theorem_range
    assert instance.report.is_canonical

    data = instance.to_dict()
    assert data['convergent'] == '99/70'
    assert data['coefficients']['permutation'] == [0, 1, 2]


def fields(**kwargs):
    base = dict(
        q0=70, gamma=0.98, lambda0=0.5,
        lambda1=SQRT2, lambda2=1, lambda3=-2,
        epsilon_user=0.05, irrationality_asserted=True,
    )
    base.update(kwargs)
    return base


def test_canonicalized_instance(tmp_path):
    """Two negative λ: negated, then the odd one moved last.
    """
    path = write_config(
        tmp_path / 'neg.cfg',
        **fields(lambda1=2, lambda2=-SQRT2, lambda3=-1, eta=0.5),
    )

    instance = parse_config(path)

    assert instance.coefficients.lambdas == (SQRT2, 1, -2)
    assert instance.coefficients.eta == -0.5
    assert instance.report.negated
    assert str(instance.convergent) == '99/70'


def test_convergent_index(tmp_path):

    path = write_config(
        tmp_path / 'idx.cfg',
        **fields(q0=12, convergent_index=6),
    )

    instance = parse_config(path)

    assert instance.params.q0 == 169
    assert str(instance.convergent) == '239/169'


def test_not_a_convergent(tmp_path):
    instance = parse_config(write_config(tmp_path / 'q.cfg', **fields(q0=71)))
    assert instance.convergent is None


def test_gamma_outside_unit_interval(tmp_path):

    path = write_config(tmp_path / 'g.cfg', **fields(gamma=1.2))

    with pytest.raises(DomainError) as e:
        parse_config(path)

    assert '37/38' in str(e.value)


def test_hypotheses_collected(tmp_path):
    """γ below 37/38 and same-sign λ are both reported.
    """
    path = write_config(
        tmp_path / 'h.cfg',
        **fields(gamma=0.9, lambda3=2),
    )

    with pytest.raises(HypothesisError) as e:
        parse_config(path)

    assert len(e.value.failures) == 2
    assert e.value.exit_code == 3


def test_loose_gamma(tmp_path):

    path = write_config(tmp_path / 'l.cfg', **fields(gamma=0.9))

    with pytest.raises(HypothesisError):
        parse_config(path)

    assert not parse_config(path, strict=False).gamma.theorem_range


def test_too_small(tmp_path):
    """No working ε: the scale ε makes Δ >= H.
    """
    path = write_config(tmp_path / 's.cfg', **fields(epsilon_user=None))

    with pytest.raises(HypothesisError) as e:
        parse_config(path)

    assert 'too small' in str(e.value)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(str(tmp_path / 'missing.cfg'))


def test_matching_convergent():
    assert str(matching_convergent(SQRT2, 29)) == '41/29'
    assert matching_convergent(SQRT2, 30) is None


def test_epsilon_override(tmp_path):
    """A working ε passed in replaces the missing file value before the
    size check runs.
    """
    path = write_config(tmp_path / 'e.cfg', **fields(epsilon_user=None))

    instance = parse_config(path, epsilon_user=0.05)

    assert instance.params.epsilon_work == 0.05
    assert instance.config.epsilon_user == 0.05


def test_convergent_index_override(tmp_path):

    path = write_config(tmp_path / 'i.cfg', **fields())

    assert parse_config(path, convergent_index=None).params.q0 == 70
    assert parse_config(path, convergent_index=6).params.q0 == 169


def test_unknown_override(tmp_path):

    path = write_config(tmp_path / 'u.cfg', **fields())

    with pytest.raises(ConfigError):
        parse_config(path, kernel_order=3)


def test_convergent_index_same_signs(tmp_path):
    """No canonical ratio, so no q0: reported as a failure, not a crash.
    """
    path = write_config(
        tmp_path / 's.cfg',
        **fields(q0=None, convergent_index=4, lambda1=1, lambda2=2, lambda3=3),
    )

    with pytest.raises(HypothesisError) as e:
        parse_config(path)

    assert len(e.value.failures) == 2
    assert any('q0 undetermined' in f for f in e.value.failures)
