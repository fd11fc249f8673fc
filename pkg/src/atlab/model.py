"""Couplings, edge weights and the brute-force spin oracle.

Weights live in the (x, y) parametrisation

    x = e^{2U} sinh 2J,    y = e^{2U} cosh 2J - 1,

in which the Gibbs factor of an edge is 1 + [tau_u = tau_v](x s_u s_v + y)
with tau = sigma * sigma_tilde.  Every correlation is then a ratio of
polynomials in (x, y), so exact rational inputs give exact outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterable

from . import kernels
from .errors import InverseUndefined, SetsNotDisjoint, SpecInvalid, TooLarge
from .graph import OUTER, Corner, DualPathRegistry, Graph, bits

# -- couplings and weights ------------------------------------------------------


def to_scalar(v, exact: bool = True):
    """Parse "p/q" strings, ints and Fractions; floats pass through unless exact."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, int):
        return Fraction(v)
    if exact:
        return Fraction(v)
    return float(v)


@dataclass(frozen=True)
class Couplings:
    J: tuple
    U: tuple

    def __post_init__(self):
        if len(self.J) != len(self.U):
            raise ValueError("J and U must have one entry per edge")
        if not all(math.isfinite(float(v)) for v in (*self.J, *self.U)):
            raise ValueError("couplings must be finite")


@dataclass(frozen=True)
class EdgeWeights:
    """Per-edge (x, y), either all Fractions (exact) or all floats."""

    x: tuple
    y: tuple
    _scaled: list = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if len(self.x) != len(self.y):
            raise ValueError("x and y must have one entry per edge")
        kinds = {isinstance(v, Fraction) for v in (*self.x, *self.y)}
        if len(kinds) > 1:
            raise ValueError("mixing exact and float weights")

    @classmethod
    def uniform(cls, m: int, x, y) -> "EdgeWeights":
        x, y = to_scalar(x), to_scalar(y)
        return cls((x,) * m, (y,) * m)

    @classmethod
    def exact(cls, xs: Iterable, ys: Iterable) -> "EdgeWeights":
        return cls(tuple(to_scalar(v) for v in xs), tuple(to_scalar(v) for v in ys))

    @property
    def m(self) -> int:
        return len(self.x)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in (*self.x, *self.y))

    def scaled_integers(self):
        """Integers (X, Y, D) with x = X/D and y = Y/D edge by edge."""
        if self._scaled is None:
            X, Y, D = [], [], []
            for x, y in zip(self.x, self.y):
                d = lcm(x.denominator, y.denominator)
                X.append(int(x * d))
                Y.append(int(y * d))
                D.append(d)
            object.__setattr__(self, "_scaled", [X, Y, D])
        return self._scaled

    def kernel_triplet(self):
        """(X, Y, D) for the kernels: scaled integers or raw floats."""
        if self.is_exact:
            return self.scaled_integers()
        return list(self.x), list(self.y), [1.0] * self.m

    def to_json(self) -> list:
        return [{"x": str(x), "y": str(y)} for x, y in zip(self.x, self.y)]


def couplings_to_weights(c: Couplings) -> EdgeWeights:
    xs = tuple(math.exp(2 * u) * math.sinh(2 * j) for j, u in zip(c.J, c.U))
    ys = tuple(math.exp(2 * u) * math.cosh(2 * j) - 1 for j, u in zip(c.J, c.U))
    return EdgeWeights(xs, ys)


def weights_to_couplings(w: EdgeWeights) -> Couplings:
    """Inverse map: e^{4U} = (y+1)^2 - x^2 and tanh 2J = x / (y+1)."""
    Js, Us = [], []
    for x, y in zip(w.x, w.y):
        disc = (y + 1) ** 2 - x ** 2
        if disc <= 0 or y + 1 == 0:
            raise InverseUndefined(f"(y+1)^2 - x^2 = {disc} is not positive")
        Us.append(math.log(float(disc)) / 4)
        Js.append(math.atanh(float(x) / float(y + 1)) / 2)
    return Couplings(tuple(Js), tuple(Us))


def edge_factor(x, y, s_u: int, s_v: int, st_u: int, st_v: int, eps: int = 1, epst: int = 1):
    """Gibbs factor of one edge in the (x, y) form, with disorder signs."""
    if eps * epst * s_u * s_v * st_u * st_v == 1:
        return 1 + x * eps * s_u * s_v + y
    return 1 if isinstance(x, Fraction) else 1.0


def gibbs_factor(J: float, U: float, s_u, s_v, st_u, st_v, eps: int = 1, epst: int = 1) -> float:
    """The same factor computed from the exponential definition."""
    return math.exp(J * (eps * s_u * s_v + epst * st_u * st_v) + U * (eps * epst * s_u * s_v * st_u * st_v + 1))


# -- correlator requests ---------------------------------------------------------


def _fs(v) -> frozenset:
    return frozenset(v or ())


@dataclass(frozen=True)
class SigmaTilde:
    """<sigma_A sigma~_B>."""

    A: frozenset = frozenset()
    B: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "A", _fs(self.A))
        object.__setattr__(self, "B", _fs(self.B))


def _check_disjoint(*sets):
    seen = set()
    for s in sets:
        if seen & s:
            raise SetsNotDisjoint("insertion sets must be pairwise disjoint")
        seen |= s


@dataclass(frozen=True)
class Phi:
    """<phi_{A1} phi^2_{A2} phi~_{B1} phi~^2_{B2}>."""

    A1: frozenset = frozenset()
    A2: frozenset = frozenset()
    B1: frozenset = frozenset()
    B2: frozenset = frozenset()

    def __post_init__(self):
        for name in ("A1", "A2", "B1", "B2"):
            object.__setattr__(self, name, _fs(getattr(self, name)))
        _check_disjoint(self.A1, self.A2, self.B1, self.B2)

    @property
    def A(self):
        return self.A1 | self.A2

    @property
    def B(self):
        return self.B1 | self.B2


@dataclass(frozen=True)
class Disorder:
    """<sigma_A sigma~_B mu_C mu~_D> with C, D sets of faces."""

    A: frozenset = frozenset()
    B: frozenset = frozenset()
    C: frozenset = frozenset()
    D: frozenset = frozenset()

    def __post_init__(self):
        for name in ("A", "B", "C", "D"):
            object.__setattr__(self, name, _fs(getattr(self, name)))


@dataclass(frozen=True)
class Chi:
    """<chi_{A1} chi^2_{A2} chi~_{B1} chi~^2_{B2}> over corners."""

    A1: frozenset = frozenset()
    A2: frozenset = frozenset()
    B1: frozenset = frozenset()
    B2: frozenset = frozenset()

    def __post_init__(self):
        for name in ("A1", "A2", "B1", "B2"):
            val = frozenset(c if isinstance(c, Corner) else Corner(*c) for c in (getattr(self, name) or ()))
            object.__setattr__(self, name, val)
        _check_disjoint(self.A1, self.A2, self.B1, self.B2)

    @property
    def A(self):
        return self.A1 | self.A2

    @property
    def B(self):
        return self.B1 | self.B2

    @property
    def corners(self) -> frozenset:
        return self.A | self.B


def validate_chi(g, spec: Chi, registry: DualPathRegistry) -> None:
    """Check the structural assumptions of corner correlators and register
    edge-disjoint dual paths for their faces."""
    corners = spec.corners
    for c in corners:
        if c.vertex not in g.index or c.face not in g.faces_at(c.vertex):
            raise SpecInvalid(f"{c} is not a corner of the graph")
    verts = [c.vertex for c in corners]
    if len(set(verts)) != len(verts):
        raise SpecInvalid("corners must sit at distinct vertices")
    inner = [c.face for c in corners if c.face != OUTER]
    if len(set(inner)) != len(inner):
        raise SpecInvalid("inner faces of distinct corners must differ (their dual paths would overlap)")
    registry.register_disjoint(inner)


# -- spin oracle -----------------------------------------------------------------


def _factors(w: EdgeWeights):
    X, Y, D = w.kernel_triplet()
    return D, [d + x + y for x, y, d in zip(X, Y, D)], [d - x + y for x, y, d in zip(X, Y, D)]


def _ratio(num, den):
    if isinstance(num, int) and isinstance(den, int):
        if den == 0:
            raise ZeroDivisionError("partition function vanishes at these weights")
        return Fraction(num, den)
    return num / den


class SpinEnumerator:
    """Exact sums over all (sigma, sigma~) configurations of a fixed graph and weights.

    Results of the kernel calls are cached per (disorder masks, windows), so
    many correlators at the same weights share one pass over configurations.
    """

    def __init__(self, g: Graph, w: EdgeWeights, backend: str | None = None, workers: int = 1):
        if g.n > kernels.max_vertices():
            raise TooLarge(f"{g.n} vertices exceeds the spin enumeration cap of {kernels.max_vertices()}")
        if w.m != g.m:
            raise ValueError("weights do not match the edge count")
        self.g, self.w = g, w
        self.backend, self.workers = backend, workers
        self._f = _factors(w)
        self._cache = {}

    def bins(self, ws: tuple, wt: tuple, eps: int = 0, epst: int = 0) -> list:
        key = (ws, wt, eps, epst)
        if key not in self._cache:
            self._cache[key] = kernels.spin_bins(self.g, *self._f, eps, epst, ws, wt,
                                                 backend=self.backend, workers=self.workers)
        return self._cache[key]

    def moments(self, ws: tuple, wt: tuple, eps: int = 0, epst: int = 0) -> list:
        """Unnormalised moments indexed like the bins: entry b is the sum of
        sigma_X sigma~_Y times the weight, X and Y read off the bits of b."""
        key = ("wht", ws, wt, eps, epst)
        if key not in self._cache:
            self._cache[key] = kernels.walsh_hadamard(self.bins(ws, wt, eps, epst))
        return self._cache[key]

    @property
    def Z(self):
        return self.bins((), ())[0]

    def full_table(self) -> "MomentTable":
        """Moment table over all vertices on both sides; once built, plain
        (disorder-free) moments are read from it."""
        if "full" not in self._cache:
            self._cache["full"] = MomentTable(self, self.g.vertices, self.g.vertices)
        return self._cache["full"]

    def raw_moment(self, A, B, eps: int = 0, epst: int = 0):
        """Unnormalised sum of sigma_A sigma~_B (vertex multisets cancel in pairs)."""
        g = self.g
        if not eps and not epst and "full" in self._cache:
            t = self._cache["full"]
            return t.raw[t.index(A, B)]
        ws = tuple(bits(g.vertex_mask(A)))
        wt = tuple(bits(g.vertex_mask(B)))
        # a single moment; the full window transform would be wasted work
        b = self.bins(ws, wt, eps, epst)
        return sum(-v if bin(i).count("1") & 1 else v for i, v in enumerate(b))

    def correlation(self, A=(), B=(), eps: int = 0, epst: int = 0):
        return _ratio(self.raw_moment(A, B, eps, epst), self.Z)


class MomentTable:
    """All moments <sigma_X sigma~_Y> with X inside ``ws`` and Y inside ``wt``."""

    def __init__(self, enum: SpinEnumerator, ws, wt=(), eps: int = 0, epst: int = 0):
        self.g = enum.g
        self.ws, self.wt = tuple(ws), tuple(wt)
        self.pos_s = {v: k for k, v in enumerate(self.ws)}
        self.pos_t = {v: k + len(self.ws) for k, v in enumerate(self.wt)}
        idx = self.g.index
        self.raw = enum.moments(tuple(idx[v] for v in self.ws), tuple(idx[v] for v in self.wt), eps, epst)
        self.Z = enum.Z

    def index(self, X, Y=()) -> int:
        b = 0
        for v in X:
            b ^= 1 << self.pos_s[v]
        for v in Y:
            b ^= 1 << self.pos_t[v]
        return b

    def __call__(self, X, Y=()):
        return _ratio(self.raw[self.index(X, Y)], self.Z)


def _vertex_ids(g, mask):
    return tuple(g.vertices[i] for i in bits(mask))


def spin_oracle(g: Graph, w: EdgeWeights, spec, registry: DualPathRegistry | None = None,
                enum: SpinEnumerator | None = None, backend: str | None = None, workers: int = 1):
    """Exact value of a correlator by summation over all spin configurations."""
    enum = enum or SpinEnumerator(g, w, backend=backend, workers=workers)
    if isinstance(spec, SigmaTilde):
        _known(g, spec.A | spec.B)
        return enum.correlation(spec.A, spec.B)
    if isinstance(spec, Phi):
        _known(g, spec.A | spec.B)
        return phi_direct(enum, spec)
    if isinstance(spec, Disorder):
        _known(g, spec.A | spec.B)
        if registry is None:
            raise SpecInvalid("disorder correlators need a dual-path registry")
        eps, epst = registry.gamma(spec.C), registry.gamma(spec.D)
        return _ratio(enum.raw_moment(spec.A, spec.B, eps, epst), enum.Z)
    if isinstance(spec, Chi):
        if registry is None:
            raise SpecInvalid("corner correlators need a dual-path registry")
        return chi_expansion(enum, spec, registry)
    raise SpecInvalid(f"unknown correlator {spec!r}")


def _known(g, verts):
    for v in verts:
        if v not in g.index:
            raise SpecInvalid(f"unknown vertex {v!r}")


def phi_direct(enum: SpinEnumerator, spec: Phi):
    """Evaluate the product of phi / phi~ factors configuration by configuration."""
    g = enum.g
    support = tuple(sorted((g.index[v] for v in spec.A | spec.B)))
    b = enum.bins(support, support)
    k = len(support)
    roles = []
    for i in support:
        v = g.vertices[i]
        if v in spec.A1:
            roles.append((1, 1))
        elif v in spec.A2:
            roles.append((1, 2))
        elif v in spec.B1:
            roles.append((-1, 1))
        else:
            roles.append((-1, 2))
    num = 0
    for idx, weight in enumerate(b):
        if not weight:
            continue
        obs = 1
        for pos, (kind, power) in enumerate(roles):
            s = -1 if idx >> pos & 1 else 1
            st = -1 if idx >> (k + pos) & 1 else 1
            val = (s + kind * st) // 2  # phi for kind=+1, phi~ for kind=-1
            obs *= val ** power
            if not obs:
                break
        num += obs * weight
    return _ratio(num, enum.Z)


def phi_expansion(enum: SpinEnumerator, spec: Phi, table: MomentTable | None = None):
    """The same correlator through its expansion into sigma / sigma~ moments:
    2^{-|A u B|} sum over even S of (-1)^{|S n B|} <sigma_{(A1 u B1) ^ S} sigma~_S>.

    ``table`` may be any moment table whose windows contain A u B on both
    sides, so that many correlators share one transform."""
    g = enum.g
    AB = sorted(spec.A | spec.B, key=g.index.__getitem__)
    if table is None:
        ws = tuple(g.vertices[i] for i in sorted(g.index[v] for v in AB))
        table = MomentTable(enum, ws, ws)
    odd = spec.A1 | spec.B1
    total = 0
    for r in range(0, len(AB) + 1, 2):
        for S in combinations(AB, r):
            S = frozenset(S)
            sign = -1 if len(S & spec.B) & 1 else 1
            total += sign * table.raw[table.index(odd ^ S, S)]
    return _ratio(total, enum.Z * 2 ** len(AB))


def chi_terms(spec: Chi):
    """Pairs (X, S, sign) of the expansion of a corner correlator into
    psi-correlators <psi_X psi~_S>, X = (A1 u B1) ^ S over even S."""
    corners = sorted(spec.corners, key=lambda c: (repr(c.vertex), c.face))
    odd = spec.A1 | spec.B1
    out = []
    for r in range(0, len(corners) + 1, 2):
        for S in combinations(corners, r):
            S = frozenset(S)
            sign = -1 if len(S & spec.B) & 1 else 1
            out.append((odd ^ S, S, sign))
    return out


def psi_disorder(X, Y) -> Disorder:
    """<psi_X psi~_Y> as an order-disorder correlator."""
    return Disorder(A={c.vertex for c in X}, B={c.vertex for c in Y},
                    C={c.face for c in X}, D={c.face for c in Y})


def chi_expansion(enum: SpinEnumerator, spec: Chi, registry: DualPathRegistry):
    validate_chi(enum.g, spec, registry)
    total = 0
    for X, S, sign in chi_terms(spec):
        d = psi_disorder(X, S)
        total += sign * enum.raw_moment(d.A, d.B, registry.gamma(d.C), registry.gamma(d.D))
    return _ratio(total, enum.Z * 2 ** len(spec.corners))


def partition_function(g: Graph, w: EdgeWeights, backend: str | None = None):
    """Spin-side partition function with the factors of each edge scaled by
    its common denominator (exact mode) - i.e. Z * prod_e D_e."""
    return SpinEnumerator(g, w, backend=backend).Z
