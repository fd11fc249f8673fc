"""Backend selection and the exact-arithmetic plumbing around the kernels.

The compiled module works modulo a handful of 62-bit primes; this module
prepares the residue tables, picks enough primes for the a-priori bound on
the result, and lifts the residues back to an exact integer.  Inputs that
are not integers (floats in validation mode) always take the pure-Python
route.  Set ``ATLAB_PURE_PYTHON=1`` to force the fallback everywhere.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import prod

import numpy as np

from . import _pykernels
from .errors import TooLarge

try:  # pragma: no cover - depends on the build
    from . import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None

PRIMES = (
    4611686018427387847, 4611686018427387817, 4611686018427387787, 4611686018427387761,
    4611686018427387751, 4611686018427387737, 4611686018427387733, 4611686018427387709,
    4611686018427387701, 4611686018427387631, 4611686018427387617, 4611686018427387587,
    4611686018427387461, 4611686018427387421, 4611686018427387409, 4611686018427387329,
    4611686018427387323, 4611686018427387301, 4611686018427387271, 4611686018427387241,
    4611686018427387139, 4611686018427387131, 4611686018427387127, 4611686018427387113,
)
_R = 1 << 64
DEFAULT_MAX_EDGES = 14
DEFAULT_MAX_VERTICES = 12


def compiled_available() -> bool:
    return _ckernels is not None


def default_backend() -> str:
    if os.environ.get("ATLAB_PURE_PYTHON", "") not in ("", "0") or _ckernels is None:
        return "python"
    return "compiled"


def max_edges() -> int:
    return int(os.environ.get("ATLAB_MAX_EDGES", DEFAULT_MAX_EDGES))


def max_vertices() -> int:
    return int(os.environ.get("ATLAB_MAX_VERTICES", DEFAULT_MAX_VERTICES))


# -- modular helpers ----------------------------------------------------------


class _Moduli:
    def __init__(self, k: int):
        if k > len(PRIMES):
            raise TooLarge("result bound exceeds the available moduli")
        self.primes = PRIMES[:k]
        self.p_arr = np.array(self.primes, dtype=np.uint64)
        self.ninv = np.array([(-pow(p, -1, _R)) % _R for p in self.primes], dtype=np.uint64)
        self.rinv = [pow(_R, -1, p) for p in self.primes]
        self.modulus = prod(self.primes)
        # Garner-free CRT: x = sum r_i * c_i mod M
        self.crt = [(self.modulus // p) * pow(self.modulus // p, -1, p) for p in self.primes]

    @classmethod
    def for_bound(cls, bound: int) -> "_Moduli":
        k, acc = 0, 1
        while acc <= 2 * bound:
            acc *= PRIMES[k] if k < len(PRIMES) else 1
            k += 1
            if k > len(PRIMES):
                raise TooLarge("result bound exceeds the available moduli")
        return cls(max(k, 1))

    def mont(self, values) -> np.ndarray:
        """Montgomery residues, shape (nprimes, len(values))."""
        out = np.empty((len(self.primes), len(values)), dtype=np.uint64)
        for q, p in enumerate(self.primes):
            out[q] = [(int(v) % p) * _R % p for v in values]
        return out

    def lift(self, residues) -> int:
        """Signed integer from Montgomery residues (one per prime)."""
        x = 0
        for q, p in enumerate(self.primes):
            x += (int(residues[q]) * self.rinv[q] % p) * self.crt[q]
        x %= self.modulus
        return x - self.modulus if x > self.modulus // 2 else x


# -- per-graph tables -----------------------------------------------------------


@dataclass
class ForestTables:
    """Connectivity data of (V, omega) for every omega, indexed by bitmask."""

    n: int
    m: int
    labels: np.ndarray  # int8 [2^m, n], components ranked by smallest vertex
    ncomp: np.ndarray  # int32 [2^m]
    rootpath: np.ndarray  # int64 [2^m, n], edge mask of the tree path to the root
    cycles: np.ndarray  # int64 [2^m, cmax], fundamental cycle masks
    ncyc: np.ndarray  # int32 [2^m]
    tern_lo: np.ndarray
    tern_hi: np.ndarray
    h: int


_TABLE_CACHE: dict = {}


def forest_tables(g) -> ForestTables:
    key = g.key()
    if key in _TABLE_CACHE:
        return _TABLE_CACHE[key]
    n, m = g.n, g.m
    if m > max_edges():
        raise TooLarge(f"{m} edges exceeds the enumeration cap of {max_edges()}")
    size = 1 << m
    cmax = max(1, m)
    labels = np.zeros((size, n), dtype=np.int8)
    ncomp = np.zeros(size, dtype=np.int32)
    rootpath = np.zeros((size, n), dtype=np.int64)
    cycles = np.zeros((size, cmax), dtype=np.int64)
    ncyc = np.zeros(size, dtype=np.int32)
    ends = g.ends
    for w in range(size):
        parent = list(range(n))
        adj = [[] for _ in range(n)]
        nontree = []
        for j in range(m):
            if not w >> j & 1:
                continue
            a, b = ends[j]
            ra, rb = a, b
            while parent[ra] != ra:
                ra = parent[ra]
            while parent[rb] != rb:
                rb = parent[rb]
            if ra == rb:
                nontree.append(j)
            else:
                if ra < rb:
                    parent[rb] = ra
                else:
                    parent[ra] = rb
                adj[a].append((b, j))
                adj[b].append((a, j))
        rp = [-1] * n
        lab = [0] * n
        comp = 0
        for r in range(n):
            if rp[r] >= 0:
                continue
            rp[r] = 0
            lab[r] = comp
            stack = [r]
            while stack:
                x = stack.pop()
                for y, j in adj[x]:
                    if rp[y] < 0:
                        rp[y] = rp[x] | (1 << j)
                        lab[y] = comp
                        stack.append(y)
            comp += 1
        labels[w] = lab
        rootpath[w] = rp
        ncomp[w] = comp
        ncyc[w] = len(nontree)
        for k, j in enumerate(nontree):
            a, b = ends[j]
            cycles[w, k] = rp[a] ^ rp[b] ^ (1 << j)
    h = (m + 1) // 2
    tern_lo = np.array([sum(3 ** k for k in range(h) if s >> k & 1) for s in range(1 << h)], dtype=np.int64)
    tern_hi = np.array([sum(3 ** k for k in range(m - h) if s >> k & 1) for s in range(1 << (m - h))],
                       dtype=np.int64)
    t = ForestTables(n, m, labels, ncomp, rootpath, cycles, ncyc, tern_lo, tern_hi, h)
    _TABLE_CACHE[key] = t
    return t


def _weight_halves(X, Y, D, h):
    """Flat products over trit strings of the low and high halves of the edges."""

    def build(xs, ys, ds):
        table = [1]
        for x, y, d in zip(xs, ys, ds):
            # trit 0 absent, 1 even, 2 odd; lower positions vary fastest
            table = [t * f for f in (d, y, x) for t in table]
        return table

    return build(X[:h], Y[:h], D[:h]), build(X[h:], Y[h:], D[h:])


def source_join(t: ForestTables, sources: int) -> np.ndarray:
    """An edge set with boundary ``sources`` inside each omega, or -1 if none."""
    size = 1 << t.m
    eta0 = np.zeros(size, dtype=np.int64)
    odd = np.zeros(size, dtype=np.int64)
    for v in range(t.n):
        if sources >> v & 1:
            eta0 ^= t.rootpath[:, v]
            odd ^= np.left_shift(np.int64(1), t.labels[:, v].astype(np.int64))
    eta0[odd != 0] = -1
    return eta0


def _chunks(lo, hi, k):
    step = -(-(hi - lo) // k)
    return [(a, min(a + step, hi)) for a in range(lo, hi, step)]


def current_sum(g, X, Y, D, sources: int, markers, coef, backend: str | None = None, workers: int = 1):
    """Sum over currents (omega, eta) with boundary ``sources`` of
    ``coef[omega, col] * prod_eta X * prod_{omega - eta} Y * prod_{E - omega} D``.

    ``col`` packs the parities of ``|eta & markers[k]|``.  ``coef`` is an
    integer array of shape (2^m, 2^len(markers)).  Returns (sum, #currents).
    """
    t = forest_tables(g)
    backend = backend or default_backend()
    markers = [int(mk) for mk in markers]
    coef = np.asarray(coef, dtype=np.int64).reshape(1 << t.m, 1 << len(markers))
    eta0 = source_join(t, sources)
    active = (np.any(coef != 0, axis=1) & (eta0 >= 0)).astype(np.uint8)
    exact = all(isinstance(v, (int, np.integer)) for v in (*X, *Y, *D))
    blocks = _chunks(0, 1 << t.m, max(1, workers))
    if backend == "compiled" and exact and _ckernels is not None:
        visits = int(np.sum(np.left_shift(np.int64(1), t.ncyc[active.astype(bool)].astype(np.int64))))
        bound = int(np.abs(coef).max(initial=0)) * max(visits, 1) * prod(
            max(abs(int(x)), abs(int(y)), abs(int(d)), 1) for x, y, d in zip(X, Y, D))
        mod = _Moduli.for_bound(bound)
        TLx, THx = _weight_halves([int(v) for v in X], [int(v) for v in Y], [int(v) for v in D], t.h)
        TL, TH = mod.mont(TLx), mod.mont(THx)
        cm = np.empty((len(mod.primes),) + coef.shape, dtype=np.uint64)
        for q, p in enumerate(mod.primes):
            cm[q] = (coef.astype(object) % p * _R % p).astype(np.uint64)
        mk = np.array(markers, dtype=np.uint64)
        args = (TL, TH, t.tern_lo, t.tern_hi, t.h, eta0, t.cycles, t.ncyc, mk, cm, active,
                mod.p_arr, mod.ninv)
        parts = _run(_ckernels.current_sum, args, blocks, workers)
        total = np.zeros(len(mod.primes), dtype=object)
        count = 0
        for res, c in parts:
            total = [(int(a) + int(b)) % p for a, b, p in zip(total, res, mod.primes)]
            count += c
        return mod.lift(total), count
    TLx, THx = _weight_halves(list(X), list(Y), list(D), t.h)
    args = (TLx, THx, t.tern_lo.tolist(), t.tern_hi.tolist(), t.h, eta0.tolist(), t.cycles.tolist(),
            t.ncyc.tolist(), markers, coef.tolist(), active.tolist())
    parts = _run(_pykernels.current_sum, args, blocks, workers)
    return sum(p[0] for p in parts), sum(p[1] for p in parts)


def _run(fn, args, blocks, workers):
    if workers <= 1 or len(blocks) == 1:
        return [fn(*args, lo, hi) for lo, hi in blocks]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        futures = [ex.submit(fn, *args, lo, hi) for lo, hi in blocks]
        return [f.result() for f in futures]  # ordered reduction


def spin_bins(g, F0, F1, F2, eps: int, epst: int, ws, wt, backend: str | None = None, workers: int = 1):
    """Exact configuration weights summed into bins by the spins at ``ws``/``wt``.

    ``F0/F1/F2`` are per-edge factors for: disagreeing tau, agreeing with
    epsilon*sigma*sigma' = +1, agreeing with -1.  Bit k of the bin index is
    1 when sigma at ws[k] is -1; bits after ``len(ws)`` do the same for
    sigma tilde at wt.
    """
    n, m = g.n, g.m
    if n > max_vertices():
        raise TooLarge(f"{n} vertices exceeds the spin enumeration cap of {max_vertices()}")
    backend = backend or default_backend()
    eu = [a for a, _ in g.ends]
    ev = [b for _, b in g.ends]
    F = []
    for j in range(m):
        F += [F0[j], F1[j], F2[j]]
    blocks = _chunks(0, 1 << (2 * n), max(1, workers))
    exact = all(isinstance(v, (int, np.integer)) for v in F)
    if backend == "compiled" and exact and _ckernels is not None:
        bound = (1 << (2 * n)) * prod(max(abs(int(a)), abs(int(b)), abs(int(c)), 1) for a, b, c in zip(F0, F1, F2))
        mod = _Moduli.for_bound(bound)
        Fm = mod.mont(F)
        one = np.array([_R % p for p in mod.primes], dtype=np.uint64)
        args = (n, np.array(eu, dtype=np.int32), np.array(ev, dtype=np.int32), Fm, eps, epst,
                np.array(ws, dtype=np.int32), np.array(wt, dtype=np.int32), mod.p_arr, mod.ninv, one)
        parts = _run(_ckernels.spin_bins, args, blocks, workers)
        res = parts[0].astype(object)
        for extra in parts[1:]:
            res = res + extra.astype(object)
        return [mod.lift([res[q, b] % p for q, p in enumerate(mod.primes)]) for b in range(res.shape[1])]
    parts = _run(_pykernels.spin_bins, (n, eu, ev, F, eps, epst, list(ws), list(wt)), blocks, workers)
    out = parts[0]
    for extra in parts[1:]:
        out = [a + b for a, b in zip(out, extra)]
    return out


def walsh_hadamard(values) -> list:
    """Unnormalised Walsh-Hadamard transform: out[S] = sum_b (-1)^{|S & b|} values[b]."""
    out = list(values)
    n = len(out)
    step = 1
    while step < n:
        for start in range(0, n, 2 * step):
            for i in range(start, start + step):
                a, b = out[i], out[i + step]
                out[i], out[i + step] = a + b, a - b
        step *= 2
    return out


def scan_trits(g, sources: int = 0, backend: str | None = None):
    backend = backend or default_backend()
    eu = [a for a, _ in g.ends]
    ev = [b for _, b in g.ends]
    if backend == "compiled" and _ckernels is not None:
        return _ckernels.scan_trits(g.m, np.array(eu, dtype=np.int32), np.array(ev, dtype=np.int32), sources)
    return _pykernels.scan_trits(g.m, eu, ev, sources)
