

from invoke import task

from psdiophantine import logger, DEMO_CONFIG_PATH
from psdiophantine.config import parse_config
from psdiophantine.manifest import STAGES, run_pipeline
from psdiophantine.primes import load_or_build, sieve_primes


@task
def build_caches(c, gamma=0.98, limit=10 ** 6):
    """Sieve and cache the PS prefix set for one exponent.
    """
    limit = int(limit)

    logger.info('Caching PS primes to %d, gamma=%r.' % (limit, gamma))
    table = sieve_primes(limit, progress=True)
    load_or_build(float(gamma), limit, table)


@task
def demo(c, run_dir='runs/demo', stages=','.join(STAGES)):
    """Run the pipeline on the bundled √2 instance.
    """
    instance = parse_config(DEMO_CONFIG_PATH)
    run_pipeline(instance, stages.split(','), run_dir, progress=True)


@task
def test(c):
    """Run test suite.
    """
    c.run('pytest tests/unit')


@task
def acceptance(c):
    """Run the slow end-to-end checks.
    """
    c.run('pytest tests/acceptance')


@task(test, acceptance)
def build(c):
    """Unit tests, then acceptance.
    """
    pass
