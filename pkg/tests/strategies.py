"""Shared hypothesis strategies: small exact weights and family graphs."""

from fractions import Fraction

from hypothesis import strategies as st

from atlab import families
from atlab.model import EdgeWeights

SMALL_PLANAR = ("path3", "path4", "C4", "C6", "theta", "grid2x3", "C4chord")


def rationals(lo=-6, hi=9, den=7):
    return st.builds(Fraction, st.integers(lo, hi), st.integers(1, den))


def u_zero_values():
    """(x, y) with (y+1)^2 - x^2 = 1 from t = tanh J in (0, 1)."""
    def pair(ab):
        a, b = ab
        t = Fraction(a, b)
        return 2 * t / (1 - t * t), 2 * t * t / (1 - t * t)

    return st.integers(2, 9).flatmap(lambda b: st.integers(1, b - 1).map(lambda a: (a, b))).map(pair)


def weights_for(m, kind="general"):
    if kind == "u_zero":
        return st.lists(u_zero_values(), min_size=m, max_size=m).map(
            lambda ps: EdgeWeights.exact([p[0] for p in ps], [p[1] for p in ps]))
    lo = 0 if kind == "nonneg" else -6
    return st.tuples(st.lists(rationals(lo), min_size=m, max_size=m),
                     st.lists(rationals(lo), min_size=m, max_size=m)).map(lambda xy: EdgeWeights.exact(*xy))


@st.composite
def graph_and_weights(draw, names=SMALL_PLANAR, kind="general"):
    g = families.by_name(draw(st.sampled_from(names)))
    w = draw(weights_for(g.m, kind))
    return g, w


def subset(draw, items):
    return [v for v in items if draw(st.booleans())]
