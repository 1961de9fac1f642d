

import csv
import os

import pytest

from psdiophantine import DEMO_CONFIG_PATH
from psdiophantine.approx import DICHOTOMY_CASES
from psdiophantine.cli import main
from psdiophantine.config import parse_config
from psdiophantine.errors import DomainError
from psdiophantine.manifest import STAGE_FUNCS, run_pipeline
from psdiophantine.primes import ps_enumerate_oracle
from psdiophantine.utils import read_json

from tests.utils import write_config

from . import SQRT2


def read_rows(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def demo_fields(**kwargs):
    base = dict(
        q0=70, gamma=0.98, lambda0=0.5,
        lambda1=SQRT2, lambda2=1, lambda3=-2,
        epsilon_user=0.05, irrationality_asserted=True,
    )
    base.update(kwargs)
    return base


def test_cf(tmp_path):

    out = str(tmp_path / 'cf.csv')

    assert main(['cf', '--x', repr(SQRT2), '--terms', '5', '--out', out]) == 0

    rows = read_rows(out)

    assert rows[0] == ['index', 'quotient', 'a', 'q']
    assert rows[1:] == [
        ['0', '1', '1', '1'],
        ['1', '2', '3', '2'],
        ['2', '2', '7', '5'],
        ['3', '2', '17', '12'],
        ['4', '2', '41', '29'],
    ]


def test_cf_stdout(capsys):

    assert main(['cf', '--x', '0.5']) == 0

    # Log records share stdout.
    lines = [l for l in capsys.readouterr().out.splitlines() if ' | ' not in l]
    assert lines == ['index,quotient,a,q', '0,0,0,1', '1,2,1,2']


def test_ps_primes_oracle_check(tmp_path):

    out = str(tmp_path / 'ps.csv')

    code = main([
        'ps-primes', '--gamma', '0.9', '--limit', '2000',
        '--oracle-check', '--out', out,
    ])

    assert code == 0

    rows = read_rows(out)
    oracle = ps_enumerate_oracle(2000, 0.9)

    assert rows[0] == ['p']
    assert [int(r[0]) for r in rows[1:]] == [int(p) for p in oracle.primes]


def test_ps_primes_range(tmp_path):

    out = str(tmp_path / 'ps.csv')

    code = main([
        'ps-primes', '--gamma', '0.9', '--limit', '2000',
        '--range', '1000:1500', '--oracle-check', '--out', out,
    ])

    assert code == 0

    primes = [int(r[0]) for r in read_rows(out)[1:]]
    oracle = ps_enumerate_oracle(2000, 0.9).restrict(1000, 1500)

    assert primes == [int(p) for p in oracle.primes]
    assert all(1000 < p <= 1500 for p in primes)


@pytest.mark.parametrize('span', ['1000', '1500:1000', '1000:3000'])
def test_ps_primes_bad_range(tmp_path, span):

    code = main([
        'ps-primes', '--gamma', '0.9', '--limit', '2000',
        '--range', span, '--out', str(tmp_path / 'ps.csv'),
    ])

    assert code == 2


def test_ps_primes_cache_file(tmp_path):

    cache = str(tmp_path / 'prefix.psp')
    first, second = str(tmp_path / '1.csv'), str(tmp_path / '2.csv')

    args = ['ps-primes', '--gamma', '0.9', '--limit', '2000', '--cache', cache]

    assert main(args + ['--out', first]) == 0
    assert os.path.exists(cache)

    assert main(args + ['--out', second]) == 0
    assert read_rows(first) == read_rows(second)

    # The file only covers (0, 2000].
    args[4] = '3000'
    assert main(args + ['--out', second]) == 2


def test_kernel_mesh(tmp_path):

    out = str(tmp_path / 'theta.csv')

    code = main([
        'kernel', '--epsilon', '0.1', '--k', '3',
        '--mesh-points', '1024', '--out', out,
    ])

    assert code == 0

    rows = read_rows(out)
    assert rows[0] == ['y', 'theta']
    assert all(0 <= float(r[1]) <= 1 for r in rows[1:])


def test_kernel_transform(tmp_path):

    out = str(tmp_path / 'transform.csv')

    code = main([
        'kernel', '--epsilon', '0.1', '--k', '3',
        '--x-grid', '0:100:11', '--out', out,
    ])

    assert code == 0

    rows = read_rows(out)
    assert rows[0] == ['x', 'transform', 'bound']
    assert len(rows) == 12

    for _, transform, bound in rows[1:]:
        assert abs(float(transform)) <= float(bound) * (1 + 1e-9)


def test_kernel_emit_theta_and_verify(tmp_path):

    theta_out = str(tmp_path / 'theta.csv')
    out = str(tmp_path / 'transform.csv')

    code = main([
        'kernel', '--epsilon', '0.1', '--k', '3', '--mesh-points', '1024',
        '--emit-theta', theta_out, '--verify', '--out', out,
    ])

    assert code == 0

    assert read_rows(theta_out)[0] == ['y', 'theta']

    rows = read_rows(out)
    assert rows[0] == ['x', 'transform', 'bound']
    assert len(rows) == 1025


def test_kernel_emit_theta_only(tmp_path):

    theta_out = str(tmp_path / 'theta.csv')
    out = str(tmp_path / 'unused.csv')

    code = main([
        'kernel', '--epsilon', '0.1', '--k', '3', '--mesh-points', '1024',
        '--emit-theta', theta_out, '--out', out,
    ])

    assert code == 0
    assert read_rows(theta_out)[0] == ['y', 'theta']
    assert not os.path.exists(out)


@pytest.mark.parametrize('kind', ['S', 'Psi'])
def test_sums(tmp_path, kind):

    out = str(tmp_path / 'sums.csv')

    code = main([
        'sums', '--config', DEMO_CONFIG_PATH, '--kind', kind,
        '--alpha-grid', '0:1:5', '--out', out,
    ])

    assert code == 0

    rows = read_rows(out)
    assert rows[0] == ['alpha', 're', 'im', 'abs']
    assert len(rows) == 6

    # e(0) = 1 for every term, so the sum at α = 0 is real.
    assert float(rows[1][2]) == 0


def test_dichotomy(tmp_path):

    out = str(tmp_path / 'dichotomy.csv')

    code = main([
        'dichotomy', '--config', DEMO_CONFIG_PATH,
        '--t-grid', '1:10:4', '--out', out,
    ])

    assert code == 0

    rows = read_rows(out)
    assert rows[0][-1] == 'case'
    assert len(rows) == 5
    assert all(r[-1] in DICHOTOMY_CASES for r in rows[1:])


def test_dichotomy_not_a_convergent(tmp_path):

    path = write_config(tmp_path / 'q.cfg', **demo_fields(q0=71))

    code = main([
        'dichotomy', '--config', path, '--t-grid', '1:10:4',
        '--out', str(tmp_path / 'out.csv'),
    ])

    assert code == DomainError.exit_code


def test_bad_config(tmp_path):

    path = tmp_path / 'bad.cfg'
    path.write_text('gamma 0.98\n')

    code = main([
        'sums', '--config', str(path), '--kind', 'S', '--alpha-grid', '0:1:3',
    ])

    assert code == 2


def test_strict_gamma(tmp_path):

    path = write_config(tmp_path / 'g.cfg', **demo_fields(gamma=0.9))
    out = str(tmp_path / 'out.csv')

    args = ['dichotomy', '--config', path, '--t-grid', '1:10:4', '--out', out]

    assert main(args) == 3
    assert main(args[:3] + ['--loose'] + args[3:]) == 0


def test_eps_user_override(tmp_path):
    """--eps-user stands in for a missing epsilon_user before the size
    check runs.
    """
    path = write_config(tmp_path / 'e.cfg', **demo_fields(epsilon_user=None))
    out = str(tmp_path / 'out.csv')

    args = ['dichotomy', '--config', path, '--t-grid', '1:10:4', '--out', out]

    assert main(args) == 3
    assert main(args + ['--eps-user', '0.05']) == 0


def test_convergent_index_flag(tmp_path):

    run_dir = str(tmp_path / 'run')

    code = main([
        'run', '--config', DEMO_CONFIG_PATH, '--convergent-index', '4',
        '--stages', 'kernel', '--run-dir', run_dir,
    ])

    assert code == 0

    manifest = read_json(os.path.join(run_dir, 'manifest.json'))

    assert manifest['parameters']['q0'] == 29
    assert manifest['config']['convergent'] == '41/29'


def test_convergent_index_same_signs(tmp_path):

    path = write_config(
        tmp_path / 's.cfg',
        **demo_fields(q0=None, convergent_index=4, lambda3=2),
    )

    code = main(['run', '--config', path, '--run-dir', str(tmp_path / 'run')])

    assert code == 3


def test_bad_grid(tmp_path):

    code = main([
        'dichotomy', '--config', DEMO_CONFIG_PATH, '--t-grid', '1:10',
        '--out', str(tmp_path / 'out.csv'),
    ])

    assert code == 2


def test_version(capsys):

    with pytest.raises(SystemExit):
        main(['--version'])

    assert capsys.readouterr().out.strip() == '0.1.0'


def test_run_stages(tmp_path):

    run_dir = str(tmp_path / 'run')

    code = main([
        'run', '--config', DEMO_CONFIG_PATH,
        '--stages', 'primes,kernel', '--run-dir', run_dir,
    ])

    assert code == 0

    manifest = read_json(os.path.join(run_dir, 'manifest.json'))

    assert manifest['complete']
    assert manifest['stages'] == ['primes', 'kernel']
    assert manifest['failed_stage'] is None
    assert manifest['version'] == '0.1.0'

    assert set(manifest['digests']) == {
        'ps-primes.csv', 'kernel-theta.csv', 'kernel-transform.csv',
    }

    assert manifest['results']['kernel']['violations'] == 0
    assert manifest['results']['primes']['count'] == len(
        read_rows(os.path.join(run_dir, 'ps-primes.csv'))
    ) - 1

    assert manifest['parameters']['q0'] == 70
    assert manifest['config']['convergent'] == '99/70'


def test_run_stage_order(tmp_path):
    """Stages run in pipeline order whatever order they are passed in.
    """
    instance = parse_config(DEMO_CONFIG_PATH)

    manifest = run_pipeline(
        instance, ['kernel', 'primes'], str(tmp_path / 'run'),
        cache_root=str(tmp_path / 'cache'),
    )

    assert manifest.stages == ['primes', 'kernel']
    assert os.listdir(str(tmp_path / 'cache'))


def test_run_unknown_stage(tmp_path):

    instance = parse_config(DEMO_CONFIG_PATH)

    with pytest.raises(DomainError):
        run_pipeline(instance, ['primes', 'plots'], str(tmp_path / 'run'))


def test_run_failed_stage(tmp_path):
    """The manifest is written and flagged when a stage fails.
    """
    instance = parse_config(write_config(tmp_path / 'q.cfg', **demo_fields(q0=71)))
    run_dir = str(tmp_path / 'run')

    with pytest.raises(DomainError):
        run_pipeline(instance, ['kernel', 'dichotomy'], run_dir)

    manifest = read_json(os.path.join(run_dir, 'manifest.json'))

    assert not manifest['complete']
    assert manifest['failed_stage'] == 'dichotomy'
    assert manifest['stages'] == ['kernel']
    assert 'convergent' in manifest['error']


def test_run_failed_stage_any_error(tmp_path, monkeypatch):
    """Errors from outside the package still leave a flagged manifest.
    """
    def broken(state):
        raise ValueError('mesh exhausted')

    monkeypatch.setitem(STAGE_FUNCS, 'kernel', broken)

    instance = parse_config(DEMO_CONFIG_PATH)
    run_dir = str(tmp_path / 'run')

    with pytest.raises(ValueError):
        run_pipeline(instance, ['kernel'], run_dir)

    manifest = read_json(os.path.join(run_dir, 'manifest.json'))

    assert not manifest['complete']
    assert manifest['failed_stage'] == 'kernel'
    assert manifest['error'] == 'mesh exhausted'
