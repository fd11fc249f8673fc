"""Seeded generators of exact rational edge weights.

Every sampler draws small numerators and denominators so that exact
arithmetic stays cheap.  ``rng`` is a :class:`random.Random`.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .model import EdgeWeights


def _rat(rng: random.Random, lo: int, hi: int, den: int = 7) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def u_zero_pair(rng: random.Random, max_den: int = 9):
    """(x, y) on the U=0 manifold from a rational t = tanh J in (0, 1)."""
    b = rng.randint(2, max_den)
    t = Fraction(rng.randint(1, b - 1), b)
    return 2 * t / (1 - t * t), 2 * t * t / (1 - t * t)


def u_zero(m: int, rng: random.Random) -> EdgeWeights:
    xs, ys = zip(*(u_zero_pair(rng) for _ in range(m))) if m else ((), ())
    return EdgeWeights.exact(xs, ys)


def simon_pair(rng: random.Random):
    """(x, y) with x, y >= 0 and 0 < (y+1)^2 - x^2 <= 1: a U=0 point scaled
    by lambda in [1/(y0+1), 1]."""
    x0, y0 = u_zero_pair(rng)
    lo = 1 / (y0 + 1)
    r = Fraction(rng.randint(0, 6), 6)
    lam = lo + r * (1 - lo)
    return lam * x0, lam * (y0 + 1) - 1


def simon_region(m: int, rng: random.Random) -> EdgeWeights:
    xs, ys = zip(*(simon_pair(rng) for _ in range(m))) if m else ((), ())
    return EdgeWeights.exact(xs, ys)


def nonnegative(m: int, rng: random.Random) -> EdgeWeights:
    return EdgeWeights.exact([_rat(rng, 0, 9) for _ in range(m)], [_rat(rng, 0, 9) for _ in range(m)])


def general(m: int, rng: random.Random) -> EdgeWeights:
    """Signed rationals; U != 0 almost surely and y may be negative."""
    return EdgeWeights.exact([_rat(rng, -6, 9) for _ in range(m)], [_rat(rng, -6, 9) for _ in range(m)])


SAMPLERS = {
    "u_zero": u_zero,
    "simon": simon_region,
    "nonneg": nonnegative,
    "general": general,
}


def sample(kind: str, g, rng: random.Random, nonzero=None, tries: int = 50) -> EdgeWeights:
    """Draw weights of the given kind; ``nonzero(w)`` may reject samples
    (typically those with a vanishing partition function)."""
    draw = SAMPLERS[kind]
    for _ in range(tries):
        w = draw(g.m, rng)
        if nonzero is None or nonzero(w):
            return w
    raise RuntimeError(f"no admissible {kind} sample after {tries} tries")
