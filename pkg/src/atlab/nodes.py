"""Node sequences on the outer boundary, colorings, sources and sinks.

Nodes are numbered 1..2n along the counterclockwise order; internally a
node is addressed by its 0-based position ``p`` so that odd nodes are the
even positions.  A coloring is just a bitmask of blue positions over a
given number of nodes, which keeps exhaustive sweeps cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Iterable, Sequence

from .errors import NotOnBoundary, PatternMismatch, SetsNotDisjoint
from .graph import DualPathRegistry, Graph, PlanarGraph, bits, corner_positions


@dataclass(frozen=True)
class Node:
    site: Hashable  # vertex id or Corner
    copy: str  # "" for simple nodes, "<" / ">" for the two copies of a doubled site
    index: int  # 1-based position

    def __str__(self):
        return f"{self.site}{self.copy}"


@dataclass(frozen=True)
class NodeSequence:
    nodes: tuple

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __getitem__(self, p):
        return self.nodes[p]

    @property
    def odd(self) -> frozenset:
        return frozenset(nd for nd in self.nodes if nd.index & 1)

    @property
    def even(self) -> frozenset:
        return frozenset(nd for nd in self.nodes if not nd.index & 1)

    @property
    def sites(self) -> list:
        return [nd.site for nd in self.nodes]

    def position(self, site, copy: str = "") -> int:
        for p, nd in enumerate(self.nodes):
            if nd.site == site and nd.copy == copy:
                return p
        raise KeyError((site, copy))

    @classmethod
    def from_sites(cls, order: Sequence, doubled: Iterable = ()) -> "NodeSequence":
        doubled = set(doubled)
        out = []
        for s in order:
            if s in doubled:
                out.append(Node(s, "<", len(out) + 1))
                out.append(Node(s, ">", len(out) + 1))
            else:
                out.append(Node(s, "", len(out) + 1))
        return cls(tuple(out))


@dataclass(frozen=True)
class Coloring:
    size: int
    blue: int  # bitmask over positions

    @classmethod
    def from_positions(cls, size: int, blue: Iterable[int]) -> "Coloring":
        mask = 0
        for p in blue:
            mask |= 1 << p
        return cls(size, mask)

    @classmethod
    def from_sources(cls, size: int, sources: Iterable[int]) -> "Coloring":
        """The unique coloring with the given source positions."""
        src = set(sources)
        return cls.from_positions(size, [p for p in range(size) if (p % 2 == 0) == (p in src)])

    def is_blue(self, p: int) -> bool:
        return bool(self.blue >> p & 1)

    def is_source(self, p: int) -> bool:
        # 1-based index p+1 is odd exactly when p is even
        return (p % 2 == 0) == self.is_blue(p)

    @property
    def red(self) -> int:
        return ((1 << self.size) - 1) & ~self.blue

    @property
    def sources(self) -> tuple:
        return tuple(p for p in range(self.size) if self.is_source(p))

    @property
    def sinks(self) -> tuple:
        return tuple(p for p in range(self.size) if not self.is_source(p))


def build_node_sequence(g: Graph, A1=(), A2=(), B1=(), B2=()):
    """Boundary nodes of a vertex correlator with their coloring.

    The order is the counterclockwise outer walk starting at the vertex of
    smallest index; doubled vertices (A2, B2) contribute two adjacent copies.
    """
    A1, A2, B1, B2 = (frozenset(s) for s in (A1, A2, B1, B2))
    _disjoint(A1, A2, B1, B2)
    sites = A1 | A2 | B1 | B2
    if not isinstance(g, PlanarGraph):
        raise NotOnBoundary("node sequences need a plane embedding")
    boundary = g.boundary_order()
    missing = sites - set(boundary)
    if missing:
        raise NotOnBoundary(f"not on the outer face: {sorted(map(repr, missing))}")
    order = [v for v in boundary if v in sites]
    return _finish(order, A2 | B2, B1 | B2)


def build_corner_sequence(g: PlanarGraph, A1=(), A2=(), B1=(), B2=(), registry: DualPathRegistry | None = None):
    """Corner nodes ordered along the outer face of G minus the dual paths."""
    from .model import Chi, validate_chi

    spec = Chi(A1, A2, B1, B2)
    registry = registry or DualPathRegistry(g)
    validate_chi(g, spec, registry)
    corners = sorted(spec.corners, key=lambda c: (g.index[c.vertex], c.face))
    pos = corner_positions(g, corners, registry)
    order = sorted(corners, key=lambda c: pos[c])
    return _finish(order, spec.A2 | spec.B2, spec.B1 | spec.B2)


def _disjoint(*sets):
    seen = set()
    for s in sets:
        if seen & s:
            raise SetsNotDisjoint("insertion sets must be pairwise disjoint")
        seen |= s


def _finish(order, doubled, blue_sites):
    seq = NodeSequence.from_sites(order, doubled)
    col = Coloring.from_positions(len(seq), [p for p, nd in enumerate(seq) if nd.site in blue_sites])
    return seq, col


def is_balanced(c: Coloring) -> bool:
    return 2 * len(c.sources) == c.size


def greedy_pairing(c: Coloring):
    """Planar pairing compatible with ``c`` built by repeatedly matching a
    source with a cyclically adjacent sink, or None when the process stalls."""
    alive = list(range(c.size))
    pairs = []
    while alive:
        k = len(alive)
        if k & 1:
            return None
        for i in range(k):
            u, v = alive[i], alive[(i + 1) % k]
            if c.is_source(u) != c.is_source(v):
                break
        else:
            return None
        if c.is_blue(u) != c.is_blue(v):
            return None
        pairs.append(tuple(sorted((u, v))))
        alive = [p for p in alive if p != u and p != v]
    return sorted(pairs)


def is_realizable(c: Coloring) -> bool:
    return greedy_pairing(c) is not None


@lru_cache(maxsize=None)
def noncrossing_even_partitions(n: int) -> tuple:
    """All noncrossing partitions of range(n) into blocks of even size."""
    return tuple(tuple(p) for p in _nc(0, n))


def _nc(lo, hi):
    if lo == hi:
        yield []
        return
    # the block containing lo
    for rest in _blocks(lo, hi):
        block, gaps = rest
        for parts in _fill(gaps):
            yield [tuple(block)] + parts


def _blocks(first, hi):
    """Even blocks starting at ``first`` inside [first, hi); the gaps between
    consecutive elements and the tail after the last one have even length."""
    out = []

    def rec(block):
        last = block[-1]
        if len(block) % 2 == 0 and (hi - last - 1) % 2 == 0:
            gaps = [(block[i] + 1, block[i + 1]) for i in range(len(block) - 1)] + [(last + 1, hi)]
            out.append((list(block), gaps))
        for q in range(last + 1, hi, 2):
            rec(block + [q])

    rec([first])
    return out


def _fill(gaps):
    if not gaps:
        yield []
        return
    (a, b), rest = gaps[0], gaps[1:]
    for left in _nc(a, b):
        for right in _fill(rest):
            yield left + right


def realizable_by_enumeration(c: Coloring) -> bool:
    """Brute force: does some noncrossing even partition have monochromatic blocks?"""
    return c.blue in realizable_masks(c.size)


@lru_cache(maxsize=None)
def realizable_masks(n: int) -> frozenset:
    out = set()
    for part in noncrossing_even_partitions(n):
        masks = [sum(1 << p for p in block) for block in part]
        for choice in range(1 << len(masks)):
            out.add(sum(m for k, m in enumerate(masks) if choice >> k & 1))
    return frozenset(out)


def parallel_order(c: Coloring):
    """(s_1..s_n, t_1..t_n) positions when the sources form one cyclic arc."""
    n = c.size
    src = [c.is_source(p) for p in range(n)]
    k = sum(src)
    if 2 * k != n:
        raise PatternMismatch("coloring is not balanced")
    if k == 0:
        return (), ()
    for start in range(n):
        if src[start] and not src[start - 1]:
            break
    else:
        raise PatternMismatch("no source arc")
    rot = [(start + i) % n for i in range(n)]
    if not all(src[p] for p in rot[:k]):
        raise PatternMismatch("sources do not form a contiguous arc")
    return tuple(rot[:k]), tuple(reversed(rot[k:]))


def parallel_pattern_check(g: Graph, omega: int, seq: NodeSequence, c: Coloring) -> bool:
    """omega in P_{S+,S-}: s_i joined to t_i only, and omega in F_N."""
    s, t = parallel_order(c)
    labels = g.component_labels(omega)
    if not _in_F_nodes(g, labels, seq):
        return False
    ls = [labels[g.index[seq[p].site]] for p in s]
    lt = [labels[g.index[seq[p].site]] for p in t]
    for i in range(len(s)):
        for j in range(len(t)):
            if (ls[i] == lt[j]) != (i == j):
                return False
    return True


def separated_colors(g: Graph, omega: int, seq: NodeSequence, c: Coloring) -> bool:
    """omega in F_N with no red node joined to a blue node."""
    labels = g.component_labels(omega)
    if not _in_F_nodes(g, labels, seq):
        return False
    red = {labels[g.index[seq[p].site]] for p in bits(c.red)}
    blue = {labels[g.index[seq[p].site]] for p in bits(c.blue)}
    return not red & blue


def _in_F_nodes(g, labels, seq):
    parity = {}
    for nd in seq:
        lab = labels[g.index[nd.site]]
        parity[lab] = parity.get(lab, 0) ^ 1
    return not any(parity.values())
