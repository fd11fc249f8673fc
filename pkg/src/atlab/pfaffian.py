"""Pairings, Pfaffians, source/sink determinants and total positivity.

Matrices are plain lists of lists over exact scalars (int / Fraction);
floats work too but lose the exactness guarantees.  Node positions are
0-based throughout, so the 1-based parity classes of the boundary order
are N_o = even positions and N_e = odd positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import lcm
from typing import Callable, Iterable, Sequence

from .errors import NotSquare, OddDimension
from .nodes import Coloring, NodeSequence, is_balanced

COMBINATORIAL_PF_MAX = 8
COMBINATORIAL_DET_MAX = 6


# -- pairings ----------------------------------------------------------------------


def pairings(items: Sequence):
    """All perfect matchings of ``items`` as lists of 2-tuples (sorted input order kept)."""
    items = list(items)
    if not items:
        yield []
        return
    if len(items) & 1:
        return
    first, rest = items[0], items[1:]
    for i, other in enumerate(rest):
        for tail in pairings(rest[:i] + rest[i + 1:]):
            yield [(first, other)] + tail


def crossing_number(pairs: Iterable[tuple]) -> int:
    """Number of crossing chord pairs when the points sit on a circle in
    increasing order."""
    ps = [tuple(sorted(p)) for p in pairs]
    out = 0
    for (a, b), (c, d) in combinations(ps, 2):
        if a < c < b < d or c < a < d < b:
            out += 1
    return out


def cross_count(pi: Iterable[tuple], pi2: Iterable[tuple]) -> int:
    """Crossings between chords of ``pi`` and chords of ``pi2``."""
    out = 0
    for a, b in (tuple(sorted(p)) for p in pi):
        for c, d in (tuple(sorted(p)) for p in pi2):
            if a < c < b < d or c < a < d < b:
                out += 1
    return out


# -- Pfaffians ---------------------------------------------------------------------


def _check_square(K):
    n = len(K)
    if any(len(row) != n for row in K):
        raise NotSquare(f"matrix is not square ({n} rows)")
    return n


def pfaffian_combinatorial(K) -> object:
    """Sum over pairings of (-1)^xg times the product of upper entries."""
    n = _check_square(K)
    if n & 1:
        raise OddDimension(f"Pfaffian of a {n}x{n} matrix")
    total = 0
    for pi in pairings(range(n)):
        term = -1 if crossing_number(pi) & 1 else 1
        for u, v in pi:
            term *= K[u][v]
            if not term:
                break
        total += term
    return total


def pfaffian_elimination(K) -> object:
    """Skew-symmetric Gaussian elimination with exact rational pivots."""
    n = _check_square(K)
    if n & 1:
        raise OddDimension(f"Pfaffian of a {n}x{n} matrix")
    exact = all(not isinstance(a, float) for row in K for a in row)
    A = [[Fraction(a) if exact else a for a in row] for row in K]
    pf = 1
    for k in range(0, n, 2):
        piv = next((j for j in range(k + 1, n) if A[k][j] != 0), None)
        if piv is None:
            return 0
        if piv != k + 1:
            A[k + 1], A[piv] = A[piv], A[k + 1]
            for row in A:
                row[k + 1], row[piv] = row[piv], row[k + 1]
            pf = -pf
        a = A[k][k + 1]
        pf *= a
        rk, rk1 = A[k], A[k + 1]
        for i in range(k + 2, n):
            ci, di = rk[i], rk1[i]
            if not ci and not di:
                continue
            row = A[i]
            for j in range(k + 2, n):
                row[j] -= (ci * rk1[j] - di * rk[j]) / a
    return _tidy(pf)


def pfaffian(K) -> object:
    """Pfaffian; pairing expansion up to 8x8, elimination beyond."""
    n = _check_square(K)
    if n & 1:
        raise OddDimension(f"Pfaffian of a {n}x{n} matrix")
    if n == 0:
        return 1
    if n <= COMBINATORIAL_PF_MAX:
        return pfaffian_combinatorial(K)
    return pfaffian_elimination(K)


def _tidy(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    return v


# -- determinants ------------------------------------------------------------------


def determinant_bareiss(M) -> object:
    """Fraction-free Bareiss elimination (rows scaled to integers first)."""
    n = _check_square(M)
    if n == 0:
        return 1
    if any(isinstance(a, float) for row in M for a in row):
        return _det_float(M)
    rows, scale = [], Fraction(1)
    for row in M:
        fr = [Fraction(a) for a in row]
        d = lcm(*(f.denominator for f in fr))
        rows.append([int(f * d) for f in fr])
        scale *= d
    A, sign, prev = rows, 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return _tidy(Fraction(sign * A[n - 1][n - 1]) / scale)


def _det_float(M):
    n = len(M)
    A = [list(map(float, row)) for row in M]
    det = 1.0
    for k in range(n):
        p = max(range(k, n), key=lambda i: abs(A[i][k]))
        if A[p][k] == 0:
            return 0.0
        if p != k:
            A[k], A[p] = A[p], A[k]
            det = -det
        det *= A[k][k]
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            for j in range(k + 1, n):
                A[i][j] -= f * A[k][j]
    return det


def determinant_permutations(M) -> object:
    """Leibniz expansion (small matrices only)."""
    n = _check_square(M)
    total = 0
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inv & 1 else 1
        for i, j in enumerate(perm):
            term *= M[i][j]
            if not term:
                break
        total += term
    return total


def determinant(M) -> object:
    return determinant_bareiss(M)


# -- node matrices -----------------------------------------------------------------


def two_point_table(seq: NodeSequence, value: Callable) -> list:
    """Symmetric node x node table of ``value(site_u, site_v)``; two copies of
    the same site get 1."""
    n = len(seq)
    t = [[0] * n for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            a, b = seq[u], seq[v]
            val = 1 if a.site == b.site else value(a.site, b.site)
            t[u][v] = t[v][u] = val
    return t


def antisym_matrix(t: Sequence[Sequence]) -> list:
    """K_{u,v} = t(u,v) for u < v, -t(u,v) for u > v."""
    n = len(t)
    return [[0 if u == v else (t[u][v] if u < v else -t[u][v]) for v in range(n)] for u in range(n)]


def restrict(K, S: Sequence[int]) -> list:
    S = sorted(S)
    return [[K[u][v] for v in S] for u in S]


@dataclass
class SourceSinkMatrix:
    rows: tuple  # source positions in node order
    cols: tuple  # sink positions in node order
    entries: list = field(repr=False)

    def det(self):
        return determinant(self.entries)


def source_sink_matrix(t: Sequence[Sequence], sources: Sequence[int], sinks: Sequence[int]) -> SourceSinkMatrix:
    """Entry (u, v) = (-1)^{#sources strictly between u and v} t(u, v)."""
    src = sorted(sources)
    snk = sorted(sinks)
    is_src = set(src)
    rows = []
    for u in src:
        row = []
        for v in snk:
            lo, hi = min(u, v), max(u, v)
            s = sum(1 for p in range(lo + 1, hi) if p in is_src)
            row.append(-t[u][v] if s & 1 else t[u][v])
        rows.append(row)
    return SourceSinkMatrix(tuple(src), tuple(snk), rows)


def build_matrices(seq: NodeSequence, c: Coloring, t):
    """(K, source/sink matrix or None).  ``t`` is either a node x node table or
    a callable on pairs of sites."""
    table = two_point_table(seq, t) if callable(t) else [list(r) for r in t]
    for u in range(len(seq)):
        for v in range(len(seq)):
            if u != v and seq[u].site == seq[v].site:
                table[u][v] = 1
    K = antisym_matrix(table)
    M = source_sink_matrix(table, c.sources, c.sinks) if is_balanced(c) else None
    return K, M


def det_by_pairings(t: Sequence[Sequence], sources: Sequence[int], sinks: Sequence[int]) -> object:
    """Sum over source-sink pairings of (-1)^xg times the product of t."""
    src, snk = sorted(sources), sorted(sinks)
    if len(src) != len(snk):
        raise NotSquare("sources and sinks differ in number")
    total = 0
    for perm in permutations(snk):
        pi = list(zip(src, perm))
        term = -1 if crossing_number(pi) & 1 else 1
        for u, v in pi:
            term *= t[u][v]
        total += term
    return total


# -- sign rule and Pfaffian-determinant identity ------------------------------------


def sign_concat(n: int, S: Iterable[int], pi: Sequence[tuple], pi2: Sequence[tuple]):
    """Both sides of the sign concatenation rule for pairings of S and of its
    complement in range(n): returns (lhs, rhs, agree)."""
    S = set(S)
    lhs = -1 if crossing_number(list(pi) + list(pi2)) & 1 else 1
    even_idx = sum(1 for p in S if p % 2 == 1)  # 1-based even index
    e = crossing_number(pi) + crossing_number(pi2) - len(S) // 2 - even_idx
    rhs = -1 if e & 1 else 1
    return lhs, rhs, lhs == rhs


@dataclass
class PfDetReport:
    lhs: object
    rhs: object
    balanced: bool
    holds: bool
    recursion: tuple | None = None  # (lhs, rhs) of the Pfaffian recursion when it applies


def _even_subsets(n: int):
    for mask in range(1 << n):
        if not mask.bit_count() & 1:
            yield mask


def pfaffian_products(K) -> dict:
    """pf(K^S) for every even subset mask S of the rows of K."""
    n = len(K)
    out = {}
    for mask in _even_subsets(n):
        S = [p for p in range(n) if mask >> p & 1]
        out[mask] = pfaffian(restrict(K, S))
    return out


def pair_products(pf: dict, n: int):
    """pf(K^S) pf(K^{N-S}) for every even S as integers over one common
    denominator: returns (numerators by mask, denominator)."""
    full = (1 << n) - 1
    prod = {mask: Fraction(pf[mask]) * pf[full ^ mask] for mask in pf}
    den = 1
    for v in prod.values():
        den = lcm(den, v.denominator)
    return {mask: int(v * den) for mask, v in prod.items()}, den


def pf_det_identity(t: Sequence[Sequence], c: Coloring, pf_cache: dict | None = None,
                    products: tuple | None = None) -> PfDetReport:
    """Signed sum of pf(K^S) pf(K^{N-S}) versus 2^{|N|/2} det of the
    source/sink matrix (0 when unbalanced).  ``products`` is the output of
    :func:`pair_products` for the same table, shared across colorings."""
    n = c.size
    if products is None:
        pf = pf_cache if pf_cache is not None else pfaffian_products(antisym_matrix(t))
        products = pair_products(pf, n)
    prod, den = products
    full = (1 << n) - 1
    blue = c.blue
    num = 0
    for mask, v in prod.items():
        num += -v if (mask & blue).bit_count() & 1 else v
    lhs = _tidy(Fraction(num, den))
    bal = is_balanced(c)
    rhs = 2 ** (n // 2) * source_sink_matrix(t, c.sources, c.sinks).det() if bal else 0
    rec = None
    if not bal and blue.bit_count() % 2 == 0 and n % 2 == 0:
        r = 0
        for mask, v in prod.items():
            if mask in (0, full):
                continue
            r += v if (mask & blue).bit_count() & 1 else -v
        rec = (_tidy(Fraction(2 * prod[full], den)), _tidy(Fraction(r, den)))
    holds = lhs == rhs and (rec is None or rec[0] == rec[1])
    return PfDetReport(lhs, rhs, bal, holds, rec)


# -- total positivity --------------------------------------------------------------


@dataclass
class MinorRecord:
    rows: tuple
    cols: tuple
    det: object
    paths: bool
    method: str


@dataclass
class TotPosReport:
    minors: list
    nonnegative: bool
    positivity_matches_paths: bool

    @property
    def holds(self) -> bool:
        return self.nonnegative and self.positivity_matches_paths


def disjoint_paths_exist(g, sources: Sequence, sinks: Sequence, method: str = "auto") -> bool:
    """Are there vertex-disjoint paths joining ``sources`` to ``sinks`` in some bijection?"""
    k = len(sources)
    if k != len(sinks):
        return False
    if k == 0:
        return True
    if method == "auto":
        method = "search" if k <= 3 else "flow"
    if method == "search":
        return _paths_search(g, list(sources), list(sinks))
    return _paths_flow(g, sources, sinks)


def _paths_search(g, sources, sinks) -> bool:
    idx = g.index
    adj = [[g.other_end(j, i) for j in g.incident(i)] for i in range(g.n)]
    terminals = {idx[v] for v in sources} | {idx[v] for v in sinks}
    targets = [idx[v] for v in sinks]

    def route(k, used, free_sinks):
        if k == len(sources):
            return True
        s = idx[sources[k]]
        stack = [(s, used | (1 << s))]
        # depth-first over simple paths from s; reaching a free sink recurses
        while stack:
            v, seen = stack.pop()
            for w in adj[v]:
                if seen >> w & 1:
                    continue
                if w in terminals:
                    if w in free_sinks and route(k + 1, seen | (1 << w), free_sinks - {w}):
                        return True
                    continue
                stack.append((w, seen | (1 << w)))
        return False

    return route(0, 0, frozenset(targets))


def _paths_flow(g, sources, sinks) -> bool:
    import networkx as nx

    D = nx.DiGraph()
    for i in range(g.n):
        D.add_edge(("in", i), ("out", i), capacity=1)
    for j in range(g.m):
        a, b = g.ends[j]
        D.add_edge(("out", a), ("in", b), capacity=1)
        D.add_edge(("out", b), ("in", a), capacity=1)
    for v in sources:
        D.add_edge("S", ("in", g.index[v]), capacity=1)
    for v in sinks:
        D.add_edge(("out", g.index[v]), "T", capacity=1)
    return nx.maximum_flow_value(D, "S", "T") == len(sources)


def total_positivity_scan(M: Sequence[Sequence], g, sources: Sequence, sinks: Sequence,
                          path_method: str = "auto") -> TotPosReport:
    """Every minor of M (rows s_i, columns t_j) is checked for sign and
    compared with the existence of vertex-disjoint connecting paths."""
    n = len(M)
    records = []
    nonneg = match = True
    for k in range(1, n + 1):
        for I in combinations(range(n), k):
            for J in combinations(range(n), k):
                d = determinant([[M[i][j] for j in J] for i in I])
                p = disjoint_paths_exist(g, [sources[i] for i in I], [sinks[j] for j in J], path_method)
                nonneg &= d >= 0
                match &= (d > 0) == p
                records.append(MinorRecord(I, J, d, p, path_method if path_method != "auto" else
                                           ("search" if k <= 3 else "flow")))
    return TotPosReport(records, nonneg, match)


def minor_as_source_sink(t_of: Callable, sources: Sequence, sinks: Sequence, I, J):
    """det of the source/sink matrix on the nodes s_I u t_J placed in the
    parallel order s_1..s_n, t_n..t_1."""
    nodes = [sources[i] for i in I] + [sinks[j] for j in reversed(J)]
    k = len(I)
    t = [[1 if a == b else t_of(a, b) for b in nodes] for a in nodes]
    return source_sink_matrix(t, range(k), range(k, 2 * k)).det()
