"""Weight regions and the correlation inequalities checked on them.

Each check returns an :class:`InequalityResult` holding both exact sides,
truthy when the inequality holds.  Inputs outside the hypotheses raise
:class:`RegionViolation` unless ``strict=False``, in which case the outcome
is computed but carries no guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotASeparator, OddSet, RegionViolation
from .graph import Graph
from .model import EdgeWeights, SpinEnumerator
from .pfaffian import pairings


@dataclass(frozen=True)
class WeightRegion:
    nonneg: bool  # x >= 0 and y >= 0 on every edge
    simon_region: bool  # additionally 0 < (y+1)^2 - x^2 <= 1, i.e. J >= 0, U <= 0
    u_zero: bool  # (y+1)^2 - x^2 = 1 on every edge


def region_check(w: EdgeWeights) -> WeightRegion:
    nonneg = all(x >= 0 and y >= 0 for x, y in zip(w.x, w.y))
    q = [(y + 1) ** 2 - x ** 2 for x, y in zip(w.x, w.y)]
    return WeightRegion(
        nonneg=nonneg,
        simon_region=nonneg and all(0 < v <= 1 for v in q),
        u_zero=all(v == 1 for v in q),
    )


@dataclass(frozen=True)
class InequalityResult:
    lhs: object
    rhs: object
    holds: bool
    relation: str  # ">=" or "<="
    in_region: bool = True

    def __bool__(self):
        return self.holds


def _enum(g, w, enum):
    return enum if enum is not None else SpinEnumerator(g, w)


def _require(w: EdgeWeights, flag: str, strict: bool) -> bool:
    ok = getattr(region_check(w), flag)
    if strict and not ok:
        raise RegionViolation(f"weights outside the required region ({flag})")
    return ok


def _xor(*groups):
    out = set()
    for grp in groups:
        out ^= set(grp)
    return out


def check_griffiths_pair(g: Graph, w: EdgeWeights, A, B, enum=None, strict: bool = True) -> InequalityResult:
    """<sigma_A sigma_B> >= <sigma_A sigma~_B> for nonnegative weights."""
    ok = _require(w, "nonneg", strict)
    e = _enum(g, w, enum)
    lhs = e.correlation(_xor(A, B), ())
    rhs = e.correlation(A, B)
    return InequalityResult(lhs, rhs, lhs >= rhs, ">=", ok)


def check_negative_association(g: Graph, w: EdgeWeights, u, v, x, enum=None, strict: bool = True) -> InequalityResult:
    """<s_u s_x><s_x s_v> >= <s_u s_x s~_x s~_v>, with x the middle vertex."""
    ok = _require(w, "simon_region", strict)
    e = _enum(g, w, enum)
    lhs = e.correlation(_xor([u], [x]), ()) * e.correlation(_xor([x], [v]), ())
    rhs = e.correlation(_xor([u], [x]), _xor([x], [v]))
    return InequalityResult(lhs, rhs, lhs >= rhs, ">=", ok)


def separates(g: Graph, u, v, W) -> bool:
    """Every path from u to v meets W (endpoints included)."""
    W = set(W)
    if u in W or v in W:
        return True
    keep = [i for i in range(g.n) if g.vertices[i] not in W]
    kept = set(keep)
    seen, stack = {g.index[u]}, [g.index[u]]
    while stack:
        i = stack.pop()
        for j in g.incident(i):
            k = g.other_end(j, i)
            if k in kept and k not in seen:
                seen.add(k)
                stack.append(k)
    return g.index[v] not in seen


def check_simon(g: Graph, w: EdgeWeights, u, v, W, enum=None, strict: bool = True) -> InequalityResult:
    """<s_u s_v> <= sum over x in W of <s_u s_x><s_x s_v>."""
    if not separates(g, u, v, W):
        raise NotASeparator(f"{sorted(map(repr, W))} does not separate {u!r} from {v!r}")
    ok = _require(w, "simon_region", strict)
    e = _enum(g, w, enum)
    lhs = e.correlation(_xor([u], [v]), ())
    rhs = sum(e.correlation(_xor([u], [x]), ()) * e.correlation(_xor([x], [v]), ()) for x in W)
    return InequalityResult(lhs, rhs, lhs <= rhs, "<=", ok)


def check_gaussian(g: Graph, w: EdgeWeights, S, enum=None, strict: bool = True) -> InequalityResult:
    """<sigma_S> <= sum over pairings of S of products of two-point functions."""
    S = sorted(set(S), key=g.index.__getitem__)
    if len(S) & 1:
        raise OddSet(f"|S| = {len(S)} is odd")
    ok = _require(w, "simon_region", strict)
    e = _enum(g, w, enum)
    lhs = e.correlation(S, ())
    two = {}
    rhs = 0
    for pi in pairings(S):
        term = 1
        for a, b in pi:
            if (a, b) not in two:
                two[a, b] = e.correlation({a, b}, ())
            term *= two[a, b]
        rhs += term
    return InequalityResult(lhs, rhs, lhs <= rhs, "<=", ok)
