

import math

import numpy as np

from tqdm import tqdm

from .errors import ConvergenceError


MAX_PANELS = 1 << 22

# Nodes evaluated per call of the integrand during long sweeps.
CHUNK_NODES = 1 << 18


def simpson_weights(n):
    """Composite Simpson weights (without the h/3 factor) for n panels.

    Returns: np.ndarray of length n + 1
    """
    if n < 2 or n % 2:
        raise ValueError('Simpson needs an even panel count >= 2, got %d.' % n)

    w = np.ones(n + 1)
    w[1:-1:2] = 4
    w[2:-1:2] = 2
    return w


def simpson(func, a, b, n):
    """Composite Simpson on [a, b] with n (even) panels.

    Args:
        func (callable): Vectorized over a node array; may return complex.

    Returns: float or complex
    """
    t = np.linspace(a, b, n + 1)
    h = (b - a) / n
    return np.dot(simpson_weights(n), func(t)) * h / 3


def adaptive_simpson(func, a, b, min_panels=16, rtol=1e-6, atol=0.0,
    max_panels=MAX_PANELS):
    """Double the panel count until successive results agree.

    Returns: (value, panels)
    """
    n = max(2, int(math.ceil(min_panels)))
    n += n % 2

    if n > max_panels:
        raise ConvergenceError(
            'Quadrature on [%g, %g] needs %d panels, cap is %d.' % (a, b, n, max_panels)
        )

    prev = simpson(func, a, b, n)

    while True:
        n *= 2

        if n > max_panels:
            raise ConvergenceError(
                'No convergence on [%g, %g] within %d panels.' % (a, b, max_panels)
            )

        value = simpson(func, a, b, n)

        if abs(value - prev) <= max(rtol * abs(value), atol):
            return value, n

        prev = value


def log_segments(a, b, ratio=2.0):
    """Split [a, b] (0 < a < b) into pieces [a, ra], [ra, r²a], ..., [.., b].

    Returns: list of (lo, hi)
    """
    edges = [a]
    while edges[-1] * ratio < b:
        edges.append(edges[-1] * ratio)
    edges.append(b)
    return list(zip(edges[:-1], edges[1:]))


class SimpsonSweep:

    def __init__(self, segments, step, max_nodes=1 << 34):
        """Fixed-schedule composite Simpson over several segments.

        Each segment [lo, hi] gets the smallest even panel count whose panel
        width is <= `step`. Nodes are visited in chunks, in ascending order.

        Args:
            segments (list of (lo, hi))
            step (float): Largest admissible panel width.
        """
        self.segments = [(lo, hi) for lo, hi in segments if hi > lo]
        self.step = step

        self.panels = [
            max(2, 2 * int(math.ceil((hi - lo) / step / 2)))
            for lo, hi in self.segments
        ]

        if sum(self.panels) > max_nodes:
            raise ConvergenceError(
                'Sweep needs %d panels (step %.3g), cap is %d.' % (
                    sum(self.panels), step, max_nodes,
                )
            )

    def __len__(self):
        return sum(self.panels)

    def chunks(self, progress=False):
        """Yields: (t, w) node/weight arrays; Σ w f(t) is the integral.
        """
        bar = tqdm(total=len(self), disable=not progress, unit='panel')

        for (lo, hi), n in zip(self.segments, self.panels):

            h = (hi - lo) / n

            for start in range(0, n + 1, CHUNK_NODES):
                stop = min(start + CHUNK_NODES, n + 1)

                i = np.arange(start, stop)
                t = lo + h * i

                w = np.where(i % 2, 4.0, 2.0)
                w[(i == 0) | (i == n)] = 1.0

                if stop == n + 1:
                    t[-1] = hi

                yield t, w * (h / 3)
                bar.update(stop - start)

        bar.close()
