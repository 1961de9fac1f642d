

import csv
import hashlib
import sys

import numpy as np
import ujson


class safe_property:

    @classmethod
    def cached(cls, func):
        return cls(func, True)

    def __init__(self, func, cached=False):
        self.cached = cached
        self.__doc__ = getattr(func, "__doc__")
        self.func = func

    def __get__(self, obj, cls):
        """Try to compute the property. Errors (zero division, overflow) -> None.
        """
        if obj is None:
            return self

        try:
            value = self.func(obj)
        except Exception as e:
            value = None

        # Replace attribute with computed value.
        if self.cached:
            obj.__dict__[self.func.__name__] = value

        return value


def read_json(path):
    with open(path) as fh:
        return ujson.load(fh)


def write_json(path, data):
    with open(path, 'w') as fh:
        ujson.dump(data, fh, indent=2, sort_keys=True, escape_forward_slashes=False)


class NeumaierSum:

    def __init__(self, shape=()):
        """Running compensated sum, elementwise over `shape`.

        Args:
            shape (tuple)
        """
        self.total = np.zeros(shape)
        self.carry = np.zeros(shape)

    def add(self, value):
        """Add one term (or one array of terms, elementwise).
        """
        value = np.asarray(value, dtype=float)
        t = self.total + value

        big = np.abs(self.total) >= np.abs(value)

        self.carry += np.where(
            big,
            (self.total - t) + value,
            (value - t) + self.total,
        )

        self.total = t

    @property
    def value(self):
        return self.total + self.carry

    @property
    def residual(self):
        """Size of the compensation term.
        """
        return np.abs(self.carry)


def compensated_sum(values, width=1024):
    """Neumaier-sum a 1-D array, ascending order, striped over `width` lanes.

    Rows of the (m, width) reshape are added lane-wise, then the lanes are
    folded left to right.

    Returns: (total, residual)
    """
    values = np.asarray(values, dtype=float).ravel()

    if not len(values):
        return 0.0, 0.0

    width = min(width, len(values))
    pad = (-len(values)) % width

    rows = np.concatenate([values, np.zeros(pad)]).reshape(-1, width)

    lanes = NeumaierSum(width)
    for row in rows:
        lanes.add(row)

    total = NeumaierSum()
    for lane, carry in zip(lanes.total, lanes.carry):
        total.add(lane)
        total.add(carry)

    residual = float(lanes.residual.sum() + total.residual)

    return float(total.value), residual


FNV_OFFSET = 0xcbf29ce484222325

FNV_PRIME = 0x100000001b3


def fnv1a64(data):
    """64-bit FNV-1a of a bytes object.
    """
    h = FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & 0xffffffffffffffff
    return h


def parse_grid(text):
    """Parse `lo:hi:n` into a linspace.

    Args:
        text (str)

    Returns: np.ndarray
    """
    try:
        lo, hi, n = text.split(':')
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise ValueError('Expected lo:hi:n, got %r.' % text)

    if n < 1:
        raise ValueError('Grid needs n >= 1, got %d.' % n)

    return np.linspace(lo, hi, n)


def parse_range(text):
    """Parse `lo:hi` into a pair of floats with lo < hi.

    Returns: (float, float)
    """
    try:
        lo, hi = (float(part) for part in text.split(':'))
    except ValueError:
        raise ValueError('Expected lo:hi, got %r.' % text)

    if not lo < hi:
        raise ValueError('Range needs lo < hi, got %r.' % text)

    return lo, hi


def format_value(value):
    """Locale-free, round-trip exact rendering of a CSV cell.
    """
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'

    if isinstance(value, (int, np.integer)):
        return '%d' % value

    if isinstance(value, (float, np.floating)):
        return '%.17g' % value

    if value is None:
        return ''

    return str(value)


def write_csv(path, header, rows):
    """Write rows of values with a header line.

    Args:
        path (str): File path, or `-` for stdout.
        header (list of str)
        rows (iter of tuples)
    """
    if path == '-':
        _write_rows(sys.stdout, header, rows)
        return

    with open(path, 'w', newline='') as fh:
        _write_rows(fh, header, rows)


def _write_rows(fh, header, rows):
    writer = csv.writer(fh, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow(map(format_value, row))


def file_digest(path):
    """SHA-256 of a file's bytes.
    """
    h = hashlib.sha256()
    with open(path, 'rb') as fh:
        for block in iter(lambda: fh.read(1 << 20), b''):
            h.update(block)
    return h.hexdigest()
