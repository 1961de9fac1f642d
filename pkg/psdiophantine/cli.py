

import argparse
import os
import sys

from . import logger, __version__
from .approx import continued_fraction, dichotomy_probe
from .config import parse_config
from .errors import DomainError, PrecisionError, PSDError
from .expsums import SUM_KINDS, sum_grid
from .gammadecomp import decompose, find_triples
from .kernel import default_x_grid, emit_rows, make_kernel, verify_bounds
from .manifest import STAGES, run_pipeline
from .primes import (
    load_or_build, ps_enumerate_oracle, ps_primes_in, sieve_primes,
)
from .utils import parse_grid, parse_range, write_csv, write_json


def cmd_ps_primes(args):
    """PS primes up to --limit, cut to --range, optionally checked against
    the oracle.
    """
    lo, hi = parse_range(args.range) if args.range else (0, args.limit)

    if hi > args.limit:
        raise ValueError('Range end %g exceeds --limit %d.' % (hi, args.limit))

    prefix = load_or_build(args.gamma, args.limit, path=args.cache)
    ps_set = prefix.restrict(lo, hi)

    if args.oracle_check:
        oracle = ps_enumerate_oracle(args.limit, args.gamma)
        if oracle.restrict(lo, hi) != ps_set:
            raise DomainError('PS set differs from the enumeration oracle.')
        logger.info('Oracle check passed (%d primes).' % len(ps_set))

    write_csv(args.out, ['p'], ((int(p),) for p in ps_set.primes))


def cmd_kernel(args):
    """θ on its mesh, or Θ against its bound on an x grid.
    """
    kernel = make_kernel(args.epsilon, args.k, args.mesh_points)

    if args.emit_theta:
        write_csv(args.emit_theta, ['y', 'theta'], emit_rows(kernel))

    if args.verify or args.x_grid:

        x = parse_grid(args.x_grid) if args.x_grid else default_x_grid(kernel)
        report = verify_bounds(kernel, x)

        logger.info('%d bound violations, max |Θ|/bound %.6g.' % (
            len(report.violations), report.max_ratio,
        ))

        write_csv(args.out, ['x', 'transform', 'bound'], emit_rows(kernel, x))

        if args.verify and not report.passed:
            raise PrecisionError('|Θ| exceeds its bound at %d points, first x=%.17g.' % (
                len(report.violations), report.violations[0],
            ))

    elif not args.emit_theta:
        write_csv(args.out, ['y', 'theta'], emit_rows(kernel))


def _instance(args):
    return parse_config(
        args.config,
        strict=not args.loose,
        epsilon_user=getattr(args, 'eps_user', None),
        convergent_index=args.convergent_index,
    )


def _table(params, args):
    return sieve_primes(int(params.X), threads=args.threads, progress=args.progress)


def cmd_sums(args):
    instance = _instance(args)
    alphas = parse_grid(args.alpha_grid)

    values = sum_grid(
        args.kind, alphas, instance.params, _table(instance.params, args),
        progress=args.progress,
    )

    write_csv(args.out, ['alpha', 're', 'im', 'abs'], (
        (a, v.real, v.imag, abs(v)) for a, v in zip(alphas, values)
    ))


def cmd_cf(args):
    seq = continued_fraction(args.x, args.terms)

    write_csv(args.out, ['index', 'quotient', 'a', 'q'], (
        (i, a, conv.a, conv.q)
        for i, (a, conv) in enumerate(zip(seq.partial_quotients, seq.convergents))
    ))

    if seq.rational:
        logger.info('Expansion is rational at double precision.')


def cmd_dichotomy(args):
    instance = _instance(args)

    if instance.convergent is None:
        raise DomainError('q0 is not a convergent denominator of lambda1/lambda2.')

    reports = [
        dichotomy_probe(instance.coefficients, instance.convergent, instance.params, t)
        for t in parse_grid(args.t_grid)
    ]

    write_csv(
        args.out,
        ['t', 'a1', 'q1', 'a2', 'q2', 'class1', 'class2', 'case'],
        (r.row() for r in reports),
    )


def cmd_gamma_decomp(args):
    instance = _instance(args)
    params = instance.params

    table = _table(params, args)
    ps_set = ps_primes_in(params.lo, params.X, params.gamma, table)
    kernel = make_kernel(params.epsilon_work, params.k)

    pieces = tuple(int(p) for p in args.pieces.split(','))

    result = decompose(
        params, instance.coefficients, kernel, ps_set,
        pieces=pieces, threads=args.threads, progress=args.progress,
    )

    report = dict(result.to_dict(), parameters=params.to_dict())

    if args.emit_triples:
        records = find_triples(
            params, instance.coefficients, ps_set, params.epsilon_work,
            kernel=kernel, progress=args.progress,
        )
        write_csv(
            args.emit_triples,
            ['p1', 'p2', 'p3', 'form_value', 'weight'],
            (r.row() for r in records),
        )
        report['triples'] = len(records)

    write_json(args.out, report)


def cmd_run(args):
    instance = _instance(args)
    stages = args.stages.split(',') if args.stages else STAGES

    manifest = run_pipeline(
        instance, stages, args.run_dir,
        threads=args.threads, progress=args.progress,
    )

    logger.info('Wrote %s.' % os.path.join(args.run_dir, 'manifest.json'))

    return manifest


def _add_config(parser):
    parser.add_argument('--config', required=True, help='Instance file.')
    parser.add_argument(
        '--loose', action='store_true',
        help='Allow gamma outside (37/38, 1).',
    )
    parser.add_argument(
        '--convergent-index', type=int,
        help='Take q0 from this convergent of lambda1/lambda2.',
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog='psd',
        description='Diophantine inequalities with Piatetski-Shapiro primes.',
    )

    parser.add_argument('--version', action='version', version=__version__)
    parser.add_argument('--threads', type=int, default=1, help='Worker processes.')
    parser.add_argument('--no-progress', dest='progress', action='store_false')

    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('ps-primes', help='Enumerate PS primes.')
    p.add_argument('--gamma', type=float, required=True)
    p.add_argument('--limit', type=int, required=True)
    p.add_argument('--range', help='lo:hi, within (0, limit].')
    p.add_argument('--cache', help='PSP1 file to read, or to write on a miss.')
    p.add_argument('--oracle-check', action='store_true')
    p.add_argument('--out', default='-')
    p.set_defaults(func=cmd_ps_primes)

    p = sub.add_parser('kernel', help='Tabulate θ or Θ against its bound.')
    p.add_argument('--epsilon', type=float, required=True)
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--mesh-points', type=int, default=1 << 14)
    p.add_argument('--emit-theta', metavar='CSV', help='Write θ on its mesh.')
    p.add_argument('--verify', action='store_true', help='Fail on any bound violation.')
    p.add_argument('--x-grid', help='lo:hi:n, default a log grid around 1/ε.')
    p.add_argument('--out', default='-')
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser('sums', help='Exponential sums on an alpha grid.')
    _add_config(p)
    p.add_argument('--kind', choices=SUM_KINDS, required=True)
    p.add_argument('--alpha-grid', required=True, help='lo:hi:n')
    p.add_argument('--out', default='-')
    p.set_defaults(func=cmd_sums)

    p = sub.add_parser('cf', help='Continued fraction convergents.')
    p.add_argument('--x', type=float, required=True)
    p.add_argument('--terms', type=int, default=20)
    p.add_argument('--out', default='-')
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser('dichotomy', help='Probe the minor-arc dichotomy.')
    _add_config(p)
    p.add_argument('--eps-user', type=float)
    p.add_argument('--t-grid', required=True, help='lo:hi:n')
    p.add_argument('--out', default='-')
    p.set_defaults(func=cmd_dichotomy)

    p = sub.add_parser('gamma-decomp', help='Gamma and its Fourier split.')
    _add_config(p)
    p.add_argument('--eps-user', type=float)
    p.add_argument('--emit-triples', help='CSV path for explicit triples.')
    p.add_argument('--pieces', default='1,2,3')
    p.add_argument('--out', default='gamma-decomp.json')
    p.set_defaults(func=cmd_gamma_decomp)

    p = sub.add_parser('run', help='Run pipeline stages into a directory.')
    _add_config(p)
    p.add_argument('--eps-user', type=float)
    p.add_argument('--stages', help=','.join(STAGES))
    p.add_argument('--run-dir', required=True)
    p.set_defaults(func=cmd_run)

    return parser


def main(argv=None):
    """Entry point. Returns the exit code.
    """
    args = build_parser().parse_args(argv)

    try:
        args.func(args)

    except PSDError as e:
        logger.error('%s' % e)
        return e.exit_code

    except ValueError as e:
        logger.error('%s' % e)
        return 2

    return 0


if __name__ == '__main__':
    sys.exit(main())
