"""Random currents: enumeration, weights, classes, signs and the
current-side evaluation of correlators.

A current is a pair (omega, eta) of edge sets with eta inside omega; its
sources are the odd-degree vertices of eta.  Edge sets are bitmasks over
edge positions throughout.

Two independent evaluation routes are provided.  ``method="kernel"``
tabulates the per-omega coefficient of each correlator with numpy and
hands the enumeration to the kernels; ``method="direct"`` walks the
currents one at a time and applies the per-current predicates below.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import kernels
from .errors import PreconditionViolated, SpecInvalid, TooLarge
from .graph import DualPathRegistry, Graph, bits, cycle_parity
from .model import Chi, Disorder, EdgeWeights, Phi, SigmaTilde, validate_chi


@dataclass(frozen=True)
class Current:
    omega: int
    eta: int

    def __post_init__(self):
        if self.eta & ~self.omega:
            raise ValueError("eta must be a subset of omega")

    def sources(self, g: Graph) -> int:
        return g.boundary_of(self.eta)

    def edges(self, g: Graph):
        return g.edges_of(self.omega), g.edges_of(self.eta)


def enumerate_currents(g: Graph, sources=()):
    """Yield every current whose sources are exactly the given vertices.

    Edges are scanned as trits (absent, in omega only, in eta); nothing is
    materialised.  Sources may be given as vertex ids or as a vertex mask.
    """
    if g.m > kernels.max_edges():
        raise TooLarge(f"{g.m} edges exceeds the enumeration cap of {kernels.max_edges()}")
    target = sources if isinstance(sources, int) else g.vertex_mask(sources)
    if target.bit_count() & 1:
        return
    vm = [(1 << a) | (1 << b) for a, b in g.ends]
    for omega in range(1 << g.m):
        pos = bits(omega)
        eta = delta = 0
        for i in range(1 << len(pos)):
            if i:
                j = pos[(i & -i).bit_length() - 1]
                eta ^= 1 << j
                delta ^= vm[j]
            if delta == target:
                yield Current(omega, eta)


def num_components(g: Graph, omega: int) -> int:
    return max(g.component_labels(omega)) + 1 if g.n else 0


def current_weight(g: Graph, n: Current, w: EdgeWeights):
    """2^{k(omega)} prod_{eta} x prod_{omega - eta} y, isolated vertices included in k."""
    out = 2 ** num_components(g, n.omega)
    for j in bits(n.omega):
        out *= w.x[j] if n.eta >> j & 1 else w.y[j]
    return out


def class_F(g: Graph, omega: int, B) -> bool:
    """Every component of (V, omega) holds an even number of B-vertices."""
    bmask = B if isinstance(B, int) else g.vertex_mask(B)
    labels = g.component_labels(omega)
    parity = {}
    for i in bits(bmask):
        parity[labels[i]] = parity.get(labels[i], 0) ^ 1
    return not any(parity.values())


def in_class_Fstar(g: Graph, omega: int, gamma: int, rng: random.Random | None = None) -> bool:
    return cycle_parity(g, omega, gamma, rng)


def pairing_paths(g: Graph, omega: int, B, rng: random.Random | None = None) -> int:
    """Edge set of forest paths joining the B-vertices in pairs (id order within
    each component).  Paths may share edges; only the symmetric difference
    matters for parities, and that is what is returned."""
    bmask = B if isinstance(B, int) else g.vertex_mask(B)
    if not bmask:
        return 0
    rootpath, _ = g.spanning_forest(omega, rng)
    labels = g.component_labels(omega)
    groups = {}
    for i in bits(bmask):
        groups.setdefault(labels[i], []).append(i)
    out = 0
    for members in groups.values():
        if len(members) & 1:
            raise PreconditionViolated("omega is not in F_B")
        for a, b in zip(members[::2], members[1::2]):
            out ^= rootpath[a] ^ rootpath[b]
    return out


def current_sign(g: Graph, n: Current, B, gamma_c: int, gamma_d: int, rng: random.Random | None = None) -> int:
    """(-1)^{|eta & Gamma_C|} (-1)^{|rho_B & (Gamma_C ^ Gamma_D)|}."""
    bmask = B if isinstance(B, int) else g.vertex_mask(B)
    if not class_F(g, n.omega, bmask):
        raise PreconditionViolated("omega is not in F_B")
    if not cycle_parity(g, n.omega, gamma_c ^ gamma_d):
        raise PreconditionViolated("omega is not in F*_{C^D}")
    rho = pairing_paths(g, n.omega, bmask, rng)
    e = (n.eta & gamma_c).bit_count() + (rho & (gamma_c ^ gamma_d)).bit_count()
    return -1 if e & 1 else 1


def _corner_list(spec: Chi, g: Graph):
    return sorted(spec.corners, key=lambda c: (g.index[c.vertex], c.face))


def is_null(g: Graph, n: Current, spec: Chi, registry: DualPathRegistry,
            rng: random.Random | None = None, witness: bool = False):
    """Whether some even corner set T makes the current cancel in the corner expansion.

    T must satisfy omega in F_{V(T)} and an odd value of
    |T & B| + |eta & Gamma_{F(T)}| + |rho_{V(T)} & Gamma_{F1}|, with F1 the
    faces of the undoubled corners A1 u B1.  With ``witness`` the first such
    T (or None) is returned instead of a boolean.
    """
    corners = _corner_list(spec, g)
    odd = spec.A1 | spec.B1
    v1 = g.vertex_mask(c.vertex for c in odd)
    f1 = registry.gamma({c.face for c in odd})
    if n.sources(g) != v1:
        raise PreconditionViolated("current sources differ from V(A1 u B1)")
    if not cycle_parity(g, n.omega, f1):
        raise PreconditionViolated("omega is not in F*_{F1}")
    for r in range(2, len(corners) + 1, 2):
        for T in combinations(corners, r):
            vt = g.vertex_mask(c.vertex for c in T)
            if not class_F(g, n.omega, vt):
                continue
            ft = registry.gamma({c.face for c in T})
            rho = pairing_paths(g, n.omega, vt, rng)
            e = len(set(T) & spec.B) + (n.eta & ft).bit_count() + (rho & f1).bit_count()
            if e & 1:
                return frozenset(T) if witness else True
    return None if witness else False


# -- coefficient tables -----------------------------------------------------------


class _Tab:
    """Vectorised per-omega predicates on top of the forest tables."""

    def __init__(self, g: Graph):
        self.g = g
        self.t = kernels.forest_tables(g)
        self.cb = np.left_shift(np.int64(1), self.t.labels.astype(np.int64))  # [2^m, n]
        self.size = 1 << g.m

    def vmask(self, verts) -> int:
        return verts if isinstance(verts, int) else self.g.vertex_mask(verts)

    def odd_components(self, verts) -> np.ndarray:
        out = np.zeros(self.size, dtype=np.int64)
        for i in bits(self.vmask(verts)):
            out ^= self.cb[:, i]
        return out

    def touched(self, verts) -> np.ndarray:
        out = np.zeros(self.size, dtype=np.int64)
        for i in bits(self.vmask(verts)):
            out |= self.cb[:, i]
        return out

    def in_F(self, verts) -> np.ndarray:
        return self.odd_components(verts) == 0

    def k_meeting(self, verts) -> np.ndarray:
        return np.bitwise_count(self.touched(verts)).astype(np.int64)

    def rho(self, verts) -> np.ndarray:
        out = np.zeros(self.size, dtype=np.int64)
        for i in bits(self.vmask(verts)):
            out ^= self.t.rootpath[:, i]
        return out

    def in_Fstar(self, gamma: int) -> np.ndarray:
        if not gamma:
            return np.ones(self.size, dtype=bool)
        par = np.bitwise_count(self.t.cycles & np.int64(gamma)) & 1
        return ~np.any(par.astype(bool), axis=1)

    @staticmethod
    def parity(a: np.ndarray, mask: int) -> np.ndarray:
        return (np.bitwise_count(a & np.int64(mask)) & 1).astype(np.int64)

    def two_k(self) -> np.ndarray:
        return np.left_shift(np.int64(1), self.t.ncomp.astype(np.int64))


def coefficient_table(g: Graph, spec, registry: DualPathRegistry | None = None):
    """(sources mask, markers, coefficient array) of a correlator's current expansion.

    The coefficient includes the 2^{k(omega)} factor of the current weight.
    """
    tab = _Tab(g)
    if isinstance(spec, SigmaTilde):
        src = g.vertex_mask(spec.A) ^ g.vertex_mask(spec.B)
        coef = tab.two_k() * tab.in_F(spec.B)
        return src, [], coef[:, None]
    if isinstance(spec, Phi):
        A, B = spec.A, spec.B
        src = g.vertex_mask(spec.A1 | spec.B1)
        apart = (tab.touched(A) & tab.touched(B)) == 0
        shift = tab.t.ncomp.astype(np.int64) - tab.k_meeting(A | B)
        coef = np.left_shift(np.int64(1), shift) * apart
        return src, [], coef[:, None]
    if isinstance(spec, Disorder):
        if registry is None:
            raise SpecInvalid("disorder correlators need a dual-path registry")
        gc, gd = registry.gamma(spec.C), registry.gamma(spec.D)
        src = g.vertex_mask(spec.A) ^ g.vertex_mask(spec.B)
        base = tab.two_k() * tab.in_F(spec.B) * tab.in_Fstar(gc ^ gd)
        s = 1 - 2 * tab.parity(tab.rho(spec.B), gc ^ gd)
        coef = np.stack([base * s, -base * s], axis=1)
        return src, [gc], coef
    if isinstance(spec, Chi):
        if registry is None:
            raise SpecInvalid("corner correlators need a dual-path registry")
        validate_chi(g, spec, registry)
        corners = _corner_list(spec, g)
        K = len(corners)
        odd = spec.A1 | spec.B1
        src = g.vertex_mask(c.vertex for c in odd)
        f1 = registry.gamma({c.face for c in odd})
        markers = [registry.mask(c.face) for c in corners]
        vall = g.vertex_mask(c.vertex for c in corners)
        shift = tab.t.ncomp.astype(np.int64) - tab.k_meeting(vall)
        base = np.left_shift(np.int64(1), shift) * tab.in_Fstar(f1)
        cols = np.arange(1 << K, dtype=np.int64)
        oddbits = sum(1 << k for k, c in enumerate(corners) if c in odd)
        sgn = 1 - 2 * (np.bitwise_count(cols & oddbits) & 1).astype(np.int64)
        null = np.zeros((tab.size, 1 << K), dtype=bool)
        for r in range(2, K + 1, 2):
            for T in combinations(range(K), r):
                tb = sum(1 << k for k in T)
                vt = g.vertex_mask(corners[k].vertex for k in T)
                nb = sum(1 for k in T if corners[k] in spec.B)
                rp = tab.parity(tab.rho(vt), f1)
                par = (nb + rp[:, None] + (np.bitwise_count(cols & tb) & 1)[None, :]) & 1
                null |= tab.in_F(vt)[:, None] & (par == 1)
        coef = base[:, None] * sgn[None, :] * (~null)
        return src, markers, coef
    raise SpecInvalid(f"unknown correlator {spec!r}")


def z_empty(g: Graph, w: EdgeWeights, backend: str | None = None, workers: int = 1):
    """Sourceless partition function Z_0 (scaled by prod_e D_e in exact mode)."""
    tab = _Tab(g)
    X, Y, D = w.kernel_triplet()
    return kernels.current_sum(g, X, Y, D, 0, [], tab.two_k()[:, None], backend=backend, workers=workers)[0]


def _ratio(num, den):
    if isinstance(num, int) and isinstance(den, int):
        if den == 0:
            raise ZeroDivisionError("Z_0 vanishes at these weights")
        return Fraction(num, den)
    return num / den


def current_oracle(g: Graph, w: EdgeWeights, spec, registry: DualPathRegistry | None = None,
                   method: str = "kernel", backend: str | None = None, workers: int = 1):
    """Current-side value of a correlator (normalised by Z_0)."""
    if method == "direct":
        return _direct(g, w, spec, registry)
    src, markers, coef = coefficient_table(g, spec, registry)
    X, Y, D = w.kernel_triplet()
    num, _ = kernels.current_sum(g, X, Y, D, src, markers, coef, backend=backend, workers=workers)
    return _ratio(num, z_empty(g, w, backend=backend, workers=workers))


def _direct(g: Graph, w: EdgeWeights, spec, registry):
    """One current at a time with the per-current predicates (small graphs)."""
    z0 = sum(current_weight(g, n, w) for n in enumerate_currents(g, 0))
    total = 0
    if isinstance(spec, SigmaTilde):
        for n in enumerate_currents(g, g.vertex_mask(spec.A) ^ g.vertex_mask(spec.B)):
            if class_F(g, n.omega, spec.B):
                total += current_weight(g, n, w)
    elif isinstance(spec, Phi):
        A, B = g.vertex_mask(spec.A), g.vertex_mask(spec.B)
        for n in enumerate_currents(g, g.vertex_mask(spec.A1 | spec.B1)):
            labels = g.component_labels(n.omega)
            ca = {labels[i] for i in bits(A)}
            cb = {labels[i] for i in bits(B)}
            if ca & cb:
                continue
            total += current_weight(g, n, w) * Fraction(1, 2 ** len(ca | cb))
    elif isinstance(spec, Disorder):
        gc, gd = registry.gamma(spec.C), registry.gamma(spec.D)
        for n in enumerate_currents(g, g.vertex_mask(spec.A) ^ g.vertex_mask(spec.B)):
            if class_F(g, n.omega, spec.B) and cycle_parity(g, n.omega, gc ^ gd):
                total += current_sign(g, n, spec.B, gc, gd) * current_weight(g, n, w)
    elif isinstance(spec, Chi):
        validate_chi(g, spec, registry)
        odd = spec.A1 | spec.B1
        f1 = registry.gamma({c.face for c in odd})
        vall = g.vertex_mask(c.vertex for c in spec.corners)
        for n in enumerate_currents(g, g.vertex_mask(c.vertex for c in odd)):
            if not cycle_parity(g, n.omega, f1) or is_null(g, n, spec, registry):
                continue
            labels = g.component_labels(n.omega)
            k_marked = len({labels[i] for i in bits(vall)})
            s = -1 if (n.eta & f1).bit_count() & 1 else 1
            total += s * current_weight(g, n, w) * Fraction(1, 2 ** k_marked)
    else:
        raise SpecInvalid(f"unknown correlator {spec!r}")
    if z0 == 0:
        raise ZeroDivisionError("Z_0 vanishes at these weights")
    return total / z0
