

import math
import os
import struct

import attr
import mpmath
import numpy as np

from multiprocessing import Pool
from cached_property import cached_property
from tqdm import tqdm

from . import logger, CACHE_DIR
from .errors import CacheError, DomainError
from .params import GammaExponent
from .utils import fnv1a64


SEGMENT_SIZE = 1 << 20

MAX_LIMIT = 1 << 40

# p^γ this close to an integer gets recomputed at high precision.
BOUNDARY_GUARD = 1e-9

GUARD_DPS = 50

CACHE_MAGIC = b'PSP1'

CACHE_HEADER = struct.Struct('<4sdQQ')


@attr.s(frozen=True, eq=False)
class PrimeTable:

    limit = attr.ib()

    primes = attr.ib(repr=False)

    def __len__(self):
        return len(self.primes)

    def __repr__(self):
        return '%s<limit=%d, %d primes>' % (
            self.__class__.__name__, self.limit, len(self.primes),
        )

    def between(self, lo, hi):
        """Primes in (lo, hi].
        """
        if math.floor(hi) > self.limit:
            raise DomainError('hi=%g exceeds the table limit %d.' % (hi, self.limit))

        i = np.searchsorted(self.primes, lo, side='right')
        j = np.searchsorted(self.primes, hi, side='right')

        return self.primes[i:j]

    @cached_property
    def is_prime(self):
        """Boolean lookup array over 0..limit.
        """
        flags = np.zeros(self.limit + 1, dtype=bool)
        flags[self.primes] = True
        return flags


def _base_primes(n):
    """Plain sieve up to n.
    """
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if flags[i]:
            flags[i * i::i] = False
    return np.flatnonzero(flags)


def _sieve_segment(args):
    """Primes in [start, stop), crossing off with base primes.
    """
    start, stop, base = args

    flags = np.ones(stop - start, dtype=bool)

    for p in base:
        if p * p >= stop:
            break
        first = max(p * p, ((start + p - 1) // p) * p)
        flags[first - start::p] = False

    if start < 2:
        flags[:2 - start] = False

    return np.flatnonzero(flags) + start


def sieve_primes(limit, threads=1, segment_size=SEGMENT_SIZE, progress=False):
    """Segmented sieve of Eratosthenes.

    Args:
        limit (int): Inclusive upper bound, 2 <= limit <= 2^40.
        threads (int): Worker processes; segments are merged in order.

    Returns: PrimeTable
    """
    if int(limit) != limit or not 2 <= limit <= MAX_LIMIT:
        raise DomainError('Sieve limit must be an integer in [2, 2^40], got %r.' % limit)

    limit = int(limit)

    logger.info('Sieving primes to %d.' % limit)

    base = _base_primes(math.isqrt(limit))

    jobs = [
        (start, min(start + segment_size, limit + 1), base)
        for start in range(0, limit + 1, segment_size)
    ]

    if threads > 1 and len(jobs) > 1:
        with Pool(threads) as pool:
            segments = list(tqdm(
                pool.imap(_sieve_segment, jobs),
                total=len(jobs),
                disable=not progress,
            ))
    else:
        segments = [
            _sieve_segment(job)
            for job in tqdm(jobs, disable=not progress)
        ]

    primes = np.concatenate(segments).astype(np.int64)

    return PrimeTable(limit=limit, primes=primes)


def _gamma_value(gamma):
    return gamma.value if isinstance(gamma, GammaExponent) else float(gamma)


def _mp_power(n, gamma, inverse=False):
    """n^γ (or n^(1/γ)) at GUARD_DPS digits, γ taken as the exact double.
    """
    exponent = mpmath.mpf(gamma)
    if inverse:
        exponent = 1 / exponent
    return mpmath.power(int(n), exponent)


def _guarded_floor(base, gamma, values, inverse=False):
    """Floor of base^γ (already evaluated as `values`), recomputing the
    entries that sit within BOUNDARY_GUARD of an integer.
    """
    floors = np.floor(values)

    near = np.abs(values - np.round(values)) < BOUNDARY_GUARD
    for i in np.flatnonzero(near):
        logger.debug('Boundary guard at n=%d, gamma=%r.' % (base[i], gamma))
        with mpmath.workdps(GUARD_DPS):
            floors[i] = int(mpmath.floor(_mp_power(base[i], gamma, inverse)))

    return floors


def boundary_powers(p, gamma):
    """u = p^γ and v = (p+1)^γ as float arrays.
    """
    p = np.asarray(p, dtype=np.float64)
    return np.power(p, gamma), np.power(p + 1, gamma)


def guarded_ceils(p, gamma):
    """u = p^γ, v = (p+1)^γ and their guarded ceilings.

    Returns: (u, v, ceil_u, ceil_v)
    """
    gamma = _gamma_value(gamma)
    p = np.atleast_1d(np.asarray(p, dtype=np.int64))

    u, v = boundary_powers(p, gamma)

    # ceil(x) = −floor(−x), with the guard applied to the floors of p^γ.
    fu = _guarded_floor(p, gamma, u)
    fv = _guarded_floor(p + 1, gamma, v)

    ceil_u = np.where(_is_integer_power(p, gamma, u, fu), fu, fu + 1)
    ceil_v = np.where(_is_integer_power(p + 1, gamma, v, fv), fv, fv + 1)

    return u, v, ceil_u, ceil_v


def ps_indicators(p, gamma):
    """Vectorized [−p^γ] − [−(p+1)^γ].

    [−u] − [−v] = ceil(v) − ceil(u), the number of integers in [u, v).

    Returns: np.ndarray of 0/1 ints
    """
    _, _, ceil_u, ceil_v = guarded_ceils(p, gamma)
    return (ceil_v - ceil_u).astype(np.int64)


def _is_integer_power(base, gamma, values, floors):
    """Is base^γ exactly the integer `floors`? Only guarded entries can be.
    """
    exact = np.zeros(len(values), dtype=bool)

    near = np.abs(values - np.round(values)) < BOUNDARY_GUARD
    for i in np.flatnonzero(near):
        with mpmath.workdps(GUARD_DPS):
            power = _mp_power(base[i], gamma)
            exact[i] = bool(mpmath.almosteq(power, floors[i], 10 ** -(GUARD_DPS - 5)))

    return exact


def ps_indicator(p, gamma):
    """[−p^γ] − [−(p+1)^γ] for one p ≥ 2.

    Returns: 0 or 1
    """
    if p < 2:
        raise DomainError('p must be >= 2, got %r.' % p)

    return int(ps_indicators([p], gamma)[0])


@attr.s(frozen=True, eq=False)
class PSPrimeSet:

    gamma = attr.ib()

    lo = attr.ib(converter=float)

    hi = attr.ib(converter=float)

    primes = attr.ib(repr=False)

    def __len__(self):
        return len(self.primes)

    def __repr__(self):
        return '%s<gamma=%r, (%g, %g], %d primes>' % (
            self.__class__.__name__, self.gamma.value, self.lo, self.hi, len(self),
        )

    def __eq__(self, other):
        return (
            isinstance(other, PSPrimeSet) and
            self.gamma == other.gamma and
            np.array_equal(self.primes, other.primes)
        )

    def __hash__(self):
        return hash((self.gamma, self.lo, self.hi, len(self)))

    @cached_property
    def weight_w(self):
        """p^(1−γ).
        """
        return np.power(self.primes.astype(np.float64), 1 - self.gamma.value)

    @cached_property
    def weight_log(self):
        return np.log(self.primes.astype(np.float64))

    @cached_property
    def weights(self):
        """p^(1−γ) log p, the S(α, X) coefficients.
        """
        return self.weight_w * self.weight_log

    @cached_property
    def weight_total(self):
        """S(0, X) = Σ p^(1−γ) log p.
        """
        return float(math.fsum(self.weights))

    def entries(self):
        """Yields: (p, p^(1−γ), log p)
        """
        yield from zip(self.primes.tolist(), self.weight_w, self.weight_log)

    def restrict(self, lo, hi):
        """Sub-set on (lo, hi].
        """
        if math.floor(hi) > self.hi:
            raise DomainError('hi=%g exceeds the set bound %g.' % (hi, self.hi))

        i = np.searchsorted(self.primes, lo, side='right')
        j = np.searchsorted(self.primes, hi, side='right')

        return PSPrimeSet(self.gamma, max(lo, self.lo), hi, self.primes[i:j])

    def matches(self, gamma, lo, hi, rtol=1e-12):
        return (
            _gamma_value(gamma) == self.gamma.value and
            math.isclose(self.lo, lo, rel_tol=rtol, abs_tol=rtol) and
            math.isclose(self.hi, hi, rel_tol=rtol)
        )


def ps_primes_in(lo, hi, gamma, table):
    """Piatetski-Shapiro primes in (lo, hi], filtered by the indicator.

    Returns: PSPrimeSet
    """
    if not isinstance(gamma, GammaExponent):
        gamma = GammaExponent(gamma)

    primes = table.between(lo, hi)
    keep = ps_indicators(primes, gamma) == 1

    return PSPrimeSet(gamma, lo, hi, primes[keep].astype(np.int64))


def ps_primes_for(params, table):
    """The PS set on (λ₀X, X] for a RunParameters instance.
    """
    return ps_primes_in(params.lo, params.X, params.gamma, table)


def ps_enumerate_oracle(limit, gamma, table=None):
    """PS primes up to `limit`, straight from p = [n^(1/γ)].

    Walks n = 1 .. ceil((limit+1)^γ); independent of the indicator.

    Returns: PSPrimeSet
    """
    if not isinstance(gamma, GammaExponent):
        gamma = GammaExponent(gamma)

    if limit < 2:
        raise DomainError('limit must be >= 2, got %r.' % limit)

    if table is None or table.limit < limit:
        table = sieve_primes(int(limit))

    n_max = math.ceil((limit + 1) ** gamma.value)

    n = np.arange(1, n_max + 1, dtype=np.int64)
    powers = np.power(n.astype(np.float64), 1 / gamma.value)
    values = _guarded_floor(n, gamma.value, powers, inverse=True)

    values = np.unique(values[values <= limit].astype(np.int64))
    primes = values[table.is_prime[values]]

    return PSPrimeSet(gamma, 0, limit, primes)


def cache_path(gamma, limit, root=CACHE_DIR):
    """Default cache file for a (γ, limit) prefix set.
    """
    gamma = _gamma_value(gamma)
    bits = struct.unpack('<Q', struct.pack('<d', gamma))[0]
    return os.path.join(root, 'ps-%016x-%d.psp' % (bits, limit))


def cache_store(ps_set, path):
    """Write a prefix set (0, limit] in the PSP1 format:

    magic `PSP1` | γ (IEEE-754 LE) | limit (u64) | count (u64) |
    p values (i64 LE) | FNV-1a 64 of everything before (u64).
    """
    if ps_set.lo != 0:
        raise CacheError('Only prefix sets (0, limit] are cached, got lo=%g.' % ps_set.lo)

    header = CACHE_HEADER.pack(
        CACHE_MAGIC,
        ps_set.gamma.value,
        int(ps_set.hi),
        len(ps_set),
    )

    body = header + ps_set.primes.astype('<i8').tobytes()

    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)

    with open(path, 'wb') as fh:
        fh.write(body)
        fh.write(struct.pack('<Q', fnv1a64(body)))


def cache_load(path, gamma=None):
    """Read a PSP1 file. Weights are recomputed from p and γ.

    Args:
        path (str)
        gamma (float): If given, must match the header.

    Returns: PSPrimeSet
    """
    try:
        with open(path, 'rb') as fh:
            data = fh.read()
    except OSError as e:
        raise CacheError('Cannot read %s: %s' % (path, e))

    if len(data) < CACHE_HEADER.size + 8:
        raise CacheError('Checksum mismatch: %s is truncated.' % path)

    body, (checksum,) = data[:-8], struct.unpack('<Q', data[-8:])

    if fnv1a64(body) != checksum:
        raise CacheError('Checksum mismatch in %s.' % path)

    magic, cached_gamma, limit, count = CACHE_HEADER.unpack(body[:CACHE_HEADER.size])

    if magic != CACHE_MAGIC:
        raise CacheError('Bad magic %r in %s.' % (magic, path))

    if gamma is not None and _gamma_value(gamma) != cached_gamma:
        raise CacheError('Gamma mismatch: file has %r, requested %r.' % (
            cached_gamma, _gamma_value(gamma),
        ))

    primes = np.frombuffer(body[CACHE_HEADER.size:], dtype='<i8').astype(np.int64)

    if len(primes) != count:
        raise CacheError('Header count %d != %d stored primes.' % (count, len(primes)))

    return PSPrimeSet(GammaExponent(cached_gamma), 0, limit, primes)


def load_or_build(gamma, limit, table=None, root=CACHE_DIR, path=None):
    """Prefix PS set from the cache, building and storing it on a miss.

    Args:
        path (str): Explicit cache file. Defaults to cache_path() under root.

    Returns: PSPrimeSet
    """
    path = path or cache_path(gamma, limit, root)

    if os.path.exists(path):

        logger.info('Loading PS primes from %s.' % path)
        ps_set = cache_load(path, gamma)

        if ps_set.hi < limit:
            raise CacheError('%s covers (0, %d], requested (0, %d].' % (
                path, ps_set.hi, limit,
            ))

        return ps_set.restrict(0, limit) if ps_set.hi > limit else ps_set

    if table is None or table.limit < limit:
        table = sieve_primes(limit)

    ps_set = ps_primes_in(0, limit, gamma, table)
    cache_store(ps_set, path)

    logger.info('Cached %d PS primes at %s.' % (len(ps_set), path))

    return ps_set
