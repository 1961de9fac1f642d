

import math

import attr
import numpy as np

from cached_property import cached_property

from .errors import DomainError
from .quadrature import simpson_weights


DEFAULT_MESH_POINTS = 1 << 14

MAX_ORDER = 64

BOUND_RTOL = 1e-12

X_GRID_POINTS = 1024


@attr.s(frozen=True, eq=False)
class SmoothingKernel:

    epsilon = attr.ib()

    k = attr.ib()

    y = attr.ib(repr=False)

    values = attr.ib(repr=False)

    @property
    def a(self):
        return 7 * self.epsilon / 8

    @property
    def b(self):
        return self.epsilon / (8 * self.k)

    @property
    def plateau(self):
        """a − kb = 3ε/4.
        """
        return 3 * self.epsilon / 4

    @property
    def dy(self):
        return self.y[1] - self.y[0]

    @cached_property
    def cumulative(self):
        """Running trapezoid integral of θ over the mesh.
        """
        steps = (self.values[1:] + self.values[:-1]) * (self.dy / 2)
        return np.concatenate([[0.0], np.cumsum(steps)])

    @cached_property
    def double_cumulative(self):
        """Running trapezoid integral of `cumulative`.
        """
        c = self.cumulative
        steps = (c[1:] + c[:-1]) * (self.dy / 2)
        return np.concatenate([[0.0], np.cumsum(steps)])

    @property
    def mass(self):
        """Mesh quadrature of ∫θ; 7ε/4 up to rounding.
        """
        return float(self.cumulative[-1])

    def __call__(self, y):
        return theta(self, y)


def make_kernel(epsilon, k, mesh_points=DEFAULT_MESH_POINTS):
    """Build θ = 1[−a, a] * (k normalized boxes on [−b, b]).

    The mesh is refined so a and b fall on nodes: it has 16·k·m intervals
    over [−ε, ε] with m = ceil((mesh_points − 1) / 16k), so b is m cells and
    a is 7km cells. Each box convolution uses trapezoid weights, which keeps
    the discrete mass at exactly 2a.

    Args:
        epsilon (float)
        k (int): 1 <= k <= 64.
        mesh_points (int): Minimum mesh size, >= 1024.

    Returns: SmoothingKernel
    """
    if not epsilon > 0 or not math.isfinite(epsilon):
        raise DomainError('epsilon must be a positive finite real, got %r.' % epsilon)

    if int(k) != k or not 1 <= k <= MAX_ORDER:
        raise DomainError('k must be an integer in [1, %d], got %r.' % (MAX_ORDER, k))

    if mesh_points < 1024:
        raise DomainError('mesh_points must be >= 1024, got %r.' % mesh_points)

    k = int(k)
    m = max(1, math.ceil((mesh_points - 1) / (16 * k)))

    center = 8 * k * m
    half_a = 7 * k * m

    idx = np.arange(2 * center + 1) - center
    y = idx * (epsilon / center)

    values = np.where(np.abs(idx) < half_a, 1.0, 0.0)
    values[np.abs(idx) == half_a] = 0.5

    box = np.ones(2 * m + 1)
    box[[0, -1]] = 0.5
    box /= 2 * m

    for _ in range(k):
        values = np.convolve(values, box, mode='same')

    values = np.clip((values + values[::-1]) / 2, 0, 1)
    values[np.abs(idx) <= 6 * k * m] = 1.0
    values[[0, -1]] = 0.0

    return SmoothingKernel(epsilon=float(epsilon), k=k, y=y, values=values)


def theta(kernel, y):
    """θ(y) by linear interpolation on the mesh; exact 1 on |y| <= 3ε/4 and
    exact 0 on |y| >= ε.
    """
    y = np.abs(np.asarray(y, dtype=float))

    out = np.interp(y, kernel.y, kernel.values)
    out = np.where(y <= kernel.plateau, 1.0, out)
    out = np.where(y >= kernel.epsilon, 0.0, out)

    return out if out.ndim else float(out)


def theta_integral(kernel, lo, hi):
    """∫_lo^hi θ, from the cumulative mesh integral. Vectorized.
    """
    def cum(u):
        u = np.asarray(u, dtype=float)
        return np.interp(u, kernel.y, kernel.cumulative, left=0.0, right=kernel.mass)

    return cum(hi) - cum(lo)


def theta_double_integral(kernel, u):
    """D(u) = ∫_{−∞}^u ∫_{−∞}^s θ. Linear in u past ε. Vectorized.
    """
    u = np.asarray(u, dtype=float)

    inside = np.interp(u, kernel.y, kernel.double_cumulative, left=0.0)
    beyond = kernel.double_cumulative[-1] + kernel.mass * (u - kernel.epsilon)

    return np.where(u > kernel.epsilon, beyond, inside)


def theta_transform(kernel, x):
    """Θ(x) = sin(2πax)/(πx) · Π_{j=1..k} sin(2πbx)/(2πbx); Θ(0) = 2a.

    The k-th power goes through logs.
    """
    x = np.asarray(x, dtype=float)
    scalar = not x.ndim
    x = np.atleast_1d(x)

    out = np.full(x.shape, 2 * kernel.a)
    nz = x != 0

    xn = x[nz]
    z = 2 * math.pi * kernel.b * xn
    sinc = np.sin(z) / z

    head = np.sin(2 * math.pi * kernel.a * xn) / (math.pi * xn)

    with np.errstate(divide='ignore'):
        tail = np.exp(kernel.k * np.log(np.abs(sinc)))

    sign = np.where(sinc < 0, (-1.0) ** kernel.k, 1.0)
    out[nz] = head * sign * tail

    return float(out[0]) if scalar else out


def transform_bound(kernel, x):
    """min(7ε/4, 1/(π|x|), (1/(π|x|))·(k/(2π|x|ε/8))^k). Vectorized.
    """
    x = np.abs(np.asarray(x, dtype=float))
    scalar = not x.ndim
    x = np.atleast_1d(x)

    out = np.full(x.shape, 7 * kernel.epsilon / 4)
    nz = x != 0

    xn = x[nz]
    second = 1 / (math.pi * xn)

    log_third = -np.log(math.pi * xn) + kernel.k * np.log(
        kernel.k / (2 * math.pi * xn * kernel.epsilon / 8)
    )
    third = np.exp(np.minimum(log_third, 700))

    out[nz] = np.minimum(out[nz], np.minimum(second, third))

    return float(out[0]) if scalar else out


def bound_branch(kernel, x):
    """Which branch of the min is active: 1, 2 or 3.
    """
    x = abs(x)

    if x == 0:
        return 1

    branches = (
        7 * kernel.epsilon / 4,
        1 / (math.pi * x),
        math.exp(-math.log(math.pi * x) + kernel.k * math.log(
            kernel.k / (2 * math.pi * x * kernel.epsilon / 8)
        )),
    )

    return 1 + min(range(3), key=branches.__getitem__)


@attr.s(frozen=True)
class BoundReport:

    points = attr.ib()

    violations = attr.ib()

    max_ratio = attr.ib()

    max_slack = attr.ib()

    min_slack = attr.ib()

    @property
    def passed(self):
        return not self.violations


def default_x_grid(kernel, points=X_GRID_POINTS):
    """Log grid on [1e-3/ε, 1e3/ε], across every branch of the bound.
    """
    eps = kernel.epsilon
    return np.logspace(math.log10(1e-3 / eps), math.log10(1e3 / eps), points)


def verify_bounds(kernel, x_grid):
    """|Θ(x)| <= transform_bound(x) at every grid point.

    A point is a violation when |Θ| exceeds the bound by more than 1e-12
    relative. Slack is bound − |Θ|.

    Returns: BoundReport
    """
    x = np.asarray(x_grid, dtype=float)

    transform = np.abs(theta_transform(kernel, x))
    bound = transform_bound(kernel, x)

    slack = bound - transform
    bad = transform > bound * (1 + BOUND_RTOL)

    with np.errstate(divide='ignore', invalid='ignore'):
        ratio = np.where(bound > 0, transform / bound, 0.0)

    return BoundReport(
        points=len(x),
        violations=[float(v) for v in x[bad]],
        max_ratio=float(ratio.max()) if len(x) else 0.0,
        max_slack=float(slack.max()) if len(x) else 0.0,
        min_slack=float(slack.min()) if len(x) else 0.0,
    )


def invert_transform(kernel, y, T, samples_per_period=32):
    """∫_{−T}^{T} Θ(x) e(xy) dx = 2∫_0^T Θ(x) cos(2πxy) dx, by Simpson.

    Args:
        y (array): Points to reconstruct θ at.
        T (float): Truncation.

    Returns: np.ndarray
    """
    y = np.atleast_1d(np.asarray(y, dtype=float))

    # Θ oscillates at frequency <= a + kb = ε, the cosine at |y|.
    freq = kernel.epsilon + np.abs(y).max()
    n = int(math.ceil(T * freq * samples_per_period))
    n += n % 2

    def integrand(x):
        return theta_transform(kernel, x)[None, :] * np.cos(
            2 * math.pi * np.outer(y, x)
        )

    x = np.linspace(0, T, n + 1)
    h = T / n

    return 2 * integrand(x).dot(simpson_weights(n)) * h / 3


def emit_rows(kernel, x_grid=None):
    """Plot-ready rows: (y, θ) on the mesh, or (x, Θ, bound) on a grid.
    """
    if x_grid is None:
        return list(zip(kernel.y, kernel.values))

    x = np.asarray(x_grid, dtype=float)
    return list(zip(x, theta_transform(kernel, x), transform_bound(kernel, x)))
