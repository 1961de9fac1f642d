

import math
import os
import time

import attr
import numpy as np

from cached_property import cached_property

from . import logger, __version__, CACHE_DIR
from .approx import dichotomy_probe
from .errors import DomainError
from .expsums import (
    SUM_KINDS, decomposition_residual, minor_arc_check, sum_grid,
)
from .gammadecomp import decompose, find_triples
from .kernel import default_x_grid, emit_rows, make_kernel, verify_bounds
from .primes import cache_path, load_or_build, sieve_primes
from .utils import file_digest, write_csv, write_json


STAGES = ('primes', 'kernel', 'sums', 'dichotomy', 'decomp', 'triples')

ALPHA_POINTS = 257

T_POINTS = 256

X_POINTS = 1024

MAX_TRIPLES = 100


@attr.s
class RunManifest:

    config = attr.ib()

    parameters = attr.ib()

    version = attr.ib(default=__version__)

    stages = attr.ib(factory=list)

    wall_times = attr.ib(factory=dict)

    digests = attr.ib(factory=dict)

    results = attr.ib(factory=dict)

    complete = attr.ib(default=False)

    failed_stage = attr.ib(default=None)

    error = attr.ib(default=None)

    def to_dict(self):
        return attr.asdict(self)

    def write(self, path):
        write_json(path, self.to_dict())


class PipelineState:

    def __init__(self, instance, run_dir, threads=1, progress=False, cache_root=CACHE_DIR):
        """Shared inputs of the stages, built once on first use.
        """
        self.instance = instance
        self.params = instance.params
        self.coefficients = instance.coefficients
        self.run_dir = run_dir
        self.threads = threads
        self.progress = progress
        self.cache_root = cache_root

    def path(self, name):
        return os.path.join(self.run_dir, name)

    @cached_property
    def limit(self):
        return int(math.floor(self.params.X))

    @cached_property
    def table(self):
        return sieve_primes(self.limit, threads=self.threads, progress=self.progress)

    @cached_property
    def prefix_set(self):
        return load_or_build(self.params.gamma, self.limit, self.table, self.cache_root)

    @cached_property
    def ps_set(self):
        return self.prefix_set.restrict(self.params.lo, self.params.X)

    @cached_property
    def kernel(self):
        return make_kernel(self.params.epsilon_work, self.params.k)


def stage_primes(state):
    """PS primes on (λ₀X, X], from the prefix cache.
    """
    path = state.path('ps-primes.csv')
    write_csv(path, ['p'], ((int(p),) for p in state.ps_set.primes))

    cache = cache_path(state.params.gamma, state.limit, state.cache_root)

    return {
        'count': len(state.ps_set),
        'weight_total': state.ps_set.weight_total,
        'cache': cache,
        'cache_digest': file_digest(cache),
    }, [path]


def stage_kernel(state):
    """θ on its mesh, Θ against its bound on a log grid.
    """
    kernel = state.kernel

    x = default_x_grid(kernel, X_POINTS)
    report = verify_bounds(kernel, x)

    theta_path = state.path('kernel-theta.csv')
    transform_path = state.path('kernel-transform.csv')

    write_csv(theta_path, ['y', 'theta'], emit_rows(kernel))
    write_csv(transform_path, ['x', 'transform', 'bound'], emit_rows(kernel, x))

    return {
        'epsilon': kernel.epsilon,
        'k': kernel.k,
        'mass': kernel.mass,
        'violations': len(report.violations),
        'max_ratio': report.max_ratio,
    }, [theta_path, transform_path]


def stage_sums(state):
    """S, Σ, Ω, I, Ψ over one period, the split residual and the minor-arc
    ratios at the convergent.
    """
    alphas = np.linspace(0, 1, ALPHA_POINTS)
    paths = []

    for kind in SUM_KINDS:
        values = sum_grid(kind, alphas, state.params, state.table)
        path = state.path('sums-%s.csv' % kind)
        write_csv(path, ['alpha', 're', 'im', 'abs'], (
            (a, v.real, v.imag, abs(v)) for a, v in zip(alphas, values)
        ))
        paths.append(path)

    residuals = [
        decomposition_residual(a, state.params, state.table)
        for a in alphas[::16]
    ]

    results = {
        'split_residual_max': max(r for r, _ in residuals),
        'split_gap_max': max(g for _, g in residuals),
    }

    conv = state.instance.convergent
    if conv is not None:
        report = minor_arc_check(conv.a, conv.q, state.params, state.table)
        results['minor_arc'] = {
            'q': conv.q,
            'status': report.status,
            'sigma_ratio': report.sigma_ratio,
            's_ratio': report.s_ratio,
            'psi_ratio': report.psi_ratio,
        }

    return results, paths


def stage_dichotomy(state):
    """Probe a log-spaced t grid across [Δ, H].
    """
    conv = state.instance.convergent

    if conv is None:
        raise DomainError('Dichotomy needs q0 to be a convergent denominator of lambda1/lambda2.')

    p = state.params
    ts = np.logspace(math.log10(p.Delta), math.log10(p.H_work), T_POINTS)
    ts = np.clip(ts, p.Delta, p.H_work)

    reports = [dichotomy_probe(state.coefficients, conv, p, float(t)) for t in ts]

    path = state.path('dichotomy.csv')
    write_csv(
        path,
        ['t', 'a1', 'q1', 'a2', 'q2', 'class1', 'class2', 'case'],
        (r.row() for r in reports),
    )

    cases = {}
    for r in reports:
        cases[r.case] = cases.get(r.case, 0) + 1

    return {
        'cases': cases,
        'zero_excluded': all(r.zero_excluded for r in reports),
    }, [path]


def stage_decomp(state):
    """Γ directly and through Γ₁ + Γ₂ + Γ₃, with the bounds.
    """
    result = decompose(
        state.params, state.coefficients, state.kernel, state.ps_set,
        threads=state.threads, progress=state.progress,
    )

    return result.to_dict(), []


def stage_triples(state):
    """Explicit triples at the working ε, each re-verified.
    """
    p = state.params
    records = find_triples(
        p, state.coefficients, state.ps_set, p.epsilon_work,
        max_results=MAX_TRIPLES, kernel=state.kernel, progress=state.progress,
    )

    path = state.path('triples.csv')
    write_csv(path, ['p1', 'p2', 'p3', 'form_value', 'weight'], (r.row() for r in records))

    return {
        'found': len(records),
        'verified': all(r.verified for r in records),
        'theory_epsilon': p.epsilon,
        'theory_epsilon_vacuous': p.theory_epsilon_vacuous,
    }, [path]


STAGE_FUNCS = {
    'primes': stage_primes,
    'kernel': stage_kernel,
    'sums': stage_sums,
    'dichotomy': stage_dichotomy,
    'decomp': stage_decomp,
    'triples': stage_triples,
}


def run_pipeline(instance, stages, run_dir, threads=1, progress=False, cache_root=CACHE_DIR):
    """Run stages in dependency order, writing outputs and the manifest to
    `run_dir`. A failing stage leaves a manifest flagged incomplete.

    Args:
        instance (Instance)
        stages (iter of str): Subset of STAGES.
        run_dir (str)

    Returns: RunManifest
    """
    unknown = set(stages) - set(STAGES)
    if unknown:
        raise DomainError('Unknown stages: %s.' % ', '.join(sorted(unknown)))

    os.makedirs(run_dir, exist_ok=True)

    state = PipelineState(instance, run_dir, threads, progress, cache_root)

    manifest = RunManifest(
        config=instance.to_dict(),
        parameters=instance.params.to_dict(),
    )

    manifest_path = os.path.join(run_dir, 'manifest.json')

    for name in [s for s in STAGES if s in stages]:

        logger.info('Stage %s.' % name)
        start = time.time()

        try:
            results, paths = STAGE_FUNCS[name](state)

        except Exception as e:
            manifest.failed_stage = name
            manifest.error = str(e)
            manifest.write(manifest_path)
            raise

        manifest.wall_times[name] = time.time() - start
        manifest.results[name] = results
        manifest.stages.append(name)

        for path in paths:
            manifest.digests[os.path.basename(path)] = file_digest(path)

    manifest.complete = True
    manifest.write(manifest_path)

    return manifest
