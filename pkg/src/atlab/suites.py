"""Verification suites: each identity or inequality checked by comparing
independently computed sides on small graphs with exact rational weights.

A suite is split into independent tasks (one per graph and weight sample,
or per graph for model-free checks).  Tasks seed their own generator from
(seed, suite, graph, sample), may run in a process pool, and are reduced in
task order, so a report depends only on the seed and the configuration.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import combinations, product

from . import __version__, families, sampling
from .currents import current_oracle
from .graph import DualPathRegistry
from .inequalities import (check_gaussian, check_griffiths_pair, check_negative_association, check_simon,
                           separates)
from .model import (Chi, Disorder, MomentTable, Phi, SigmaTilde, SpinEnumerator, couplings_to_weights,
                    edge_factor, gibbs_factor, Couplings, phi_direct, phi_expansion, psi_disorder, spin_oracle)
from .nodes import Coloring, build_corner_sequence, build_node_sequence, is_balanced
from .pfaffian import (antisym_matrix, build_matrices, determinant, det_by_pairings,
                       minor_as_source_sink, pair_products, pairings, pf_det_identity, pfaffian, pfaffian_elimination,
                       pfaffian_products, restrict, sign_concat, source_sink_matrix, total_positivity_scan,
                       two_point_table)

SCHEMA_VERSION = 1
MAX_LISTED_FAILURES = 50


@dataclass
class Record:
    check: str
    graph: str
    sample: int
    lhs: str
    rhs: str
    passed: bool
    cases: int = 1
    runtime: float = 0.0


@dataclass
class SuiteConfig:
    seed: int = 0
    workers: int = 1
    family: tuple = families.DEFAULT_FAMILY
    samples: int = 0  # 0 selects each suite's default
    timings: bool = False

    def n(self, default: int) -> int:
        return self.samples or default


def _s(v) -> str:
    return str(v)


class _Acc:
    """Collects (lhs, rhs, ok) cases into one aggregated record."""

    def __init__(self, check, graph, sample):
        self.check, self.graph, self.sample = check, graph, sample
        self.cases, self.bad, self.last = 0, None, ("", "")
        self.failures = []
        self.t0 = time.perf_counter()

    def add(self, lhs, rhs, ok, label=""):
        self.cases += 1
        self.last = (lhs, rhs)
        if not ok:
            if self.bad is None:
                self.bad = (lhs, rhs)
            self.failures.append({"check": self.check, "graph": self.graph, "sample": self.sample,
                                  "case": label, "lhs": _s(lhs), "rhs": _s(rhs)})

    def record(self) -> Record:
        lhs, rhs = self.bad if self.bad is not None else self.last
        return Record(self.check, self.graph, self.sample, _s(lhs), _s(rhs), self.bad is None,
                      self.cases, time.perf_counter() - self.t0)


def _rng(seed, suite, graph, sample=0):
    return random.Random(f"{seed}:{suite}:{graph}:{sample}")


def _weights(kind, g, rng):
    return sampling.sample(kind, g, rng, nonzero=lambda w: SpinEnumerator(g, w).Z != 0)


def _rand_subset(rng, V, p=0.5):
    return frozenset(v for v in V if rng.random() < p)


def _rand_parts(rng, V):
    parts = [set(), set(), set(), set()]
    for v in V:
        if rng.random() < 0.6:
            parts[rng.randrange(4)].add(v)
    return parts


# -- switching ---------------------------------------------------------------------

SWITCH_KINDS = ("general", "nonneg", "u_zero")


def task_switching(seed, gname, sample):
    rng = _rng(seed, "switching", gname, sample)
    g = families.by_name(gname)
    w = _weights(SWITCH_KINDS[sample % 3], g, rng)
    e = SpinEnumerator(g, w)
    V = list(g.vertices)
    out = []
    for k in range(5):
        spec = SigmaTilde(_rand_subset(rng, V), _rand_subset(rng, V))
        lhs, rhs = spin_oracle(g, w, spec, enum=e), current_oracle(g, w, spec)
        out.append(Record("switching-sigma", gname, sample, _s(lhs), _s(rhs), lhs == rhs))
        if sample % 3 == 1:
            r = check_griffiths_pair(g, w, spec.A, spec.B, enum=e)
            out.append(Record("griffiths-pair", gname, sample, _s(r.lhs), _s(r.rhs), r.holds))
    for k in range(3):
        spec = Phi(*_rand_parts(rng, V))
        lhs, rhs = phi_direct(e, spec), current_oracle(g, w, spec)
        out.append(Record("switching-phi", gname, sample, _s(lhs), _s(rhs), lhs == rhs))
    return out


def switching_tasks(cfg):
    return [(task_switching, cfg.seed, gname, s) for gname in cfg.family for s in range(cfg.n(6))]


# -- planar vanishing --------------------------------------------------------------

VANISH_KINDS = ("general", "u_zero", "nonneg")


def boundary_specs(boundary, max_nodes):
    """Every (A1, A2, B1, B2) on boundary sites with at most ``max_nodes`` nodes."""
    for r in range(1, max_nodes + 1):
        for S in combinations(boundary, r):
            for dbl in product((0, 1), repeat=r):
                if r + sum(dbl) > max_nodes:
                    continue
                for blue in product((0, 1), repeat=r):
                    parts = ([], [], [], [])
                    for v, d, b in zip(S, dbl, blue):
                        parts[2 * b + d].append(v)
                    yield parts


def task_vanishing(seed, gname, sample, max_nodes=6):
    rng = _rng(seed, "planar-vanishing", gname, sample)
    g = families.by_name(gname)
    kind = VANISH_KINDS[sample % 3]
    w = _weights(kind, g, rng)
    e = SpinEnumerator(g, w)
    bd = g.boundary_order()
    table = MomentTable(e, bd, bd)
    acc = _Acc("unbalanced-vanishing", gname, sample)
    direct = _Acc("unbalanced-vanishing-direct", gname, sample)
    rec = _Acc("unbalanced-recursion", gname, sample) if kind == "u_zero" else None
    unbalanced = []
    for parts in boundary_specs(bd, max_nodes):
        seq, col = build_node_sequence(g, *parts)
        if is_balanced(col):
            continue
        spec = Phi(*parts)
        val = phi_expansion(e, spec, table)
        acc.add(val, 0, val == 0, repr(parts))
        unbalanced.append(spec)
        if rec is not None and len(seq) % 2 == 0 and col.blue.bit_count() % 2 == 0:
            lhs, rhs = _recursion_sides(table, seq, col)
            rec.add(lhs, rhs, lhs == rhs, repr(parts))
    for spec in rng.sample(unbalanced, min(20, len(unbalanced))):
        val = phi_direct(e, spec)
        direct.add(val, 0, val == 0, repr(spec))
    return [a.record() for a in (acc, direct, rec) if a is not None] , acc.failures + direct.failures + \
        (rec.failures if rec else [])


def _recursion_sides(table, seq, col):
    """2<sigma_N> against the signed sum of products over proper even S."""
    n = len(seq)
    sites = [nd.site for nd in seq]

    def sig(mask):
        return table(frozenset(_odd_sites(sites, mask)))

    full = (1 << n) - 1
    lhs = 2 * sig(full)
    rhs = 0
    for mask in range(1, full):
        if mask.bit_count() & 1:
            continue
        sign = 1 if (mask & col.blue).bit_count() & 1 else -1
        rhs += sign * sig(mask) * sig(full ^ mask)
    return lhs, rhs


def _odd_sites(sites, mask):
    out = set()
    for p, s in enumerate(sites):
        if mask >> p & 1:
            out ^= {s}
    return out


def vanishing_tasks(cfg):
    return [(task_vanishing, cfg.seed, gname, s) for gname in ("C6", "grid3x3") for s in range(cfg.n(10))]


# -- Pfaffian formula ----------------------------------------------------------------


def task_pfaffian(seed, gname, sample, max_size=8):
    rng = _rng(seed, "pfaffian", gname, sample)
    g = families.by_name(gname)
    w = _weights("u_zero", g, rng)
    e = SpinEnumerator(g, w)
    bd = g.boundary_order()
    table = MomentTable(e, bd)
    acc = _Acc("pfaffian-formula", gname, sample)
    sq = _Acc("pfaffian-squared", gname, sample)
    for r in range(2, min(max_size, len(bd)) + 1, 2):
        for S in combinations(bd, r):
            t = [[1 if a == b else table({a, b}) for b in S] for a in S]
            K = antisym_matrix(t)
            pf = pfaffian(K)
            val = table(frozenset(S))
            acc.add(val, pf, val == pf, repr(S))
            if r == len(bd) or r == max_size:
                d = determinant(K)
                sq.add(pf * pf, d, pf * pf == d, repr(S))
    return [acc.record(), sq.record()], acc.failures + sq.failures


def pfaffian_tasks(cfg):
    return [(task_pfaffian, cfg.seed, gname, s) for gname in ("C6", "C8", "grid3x3") for s in range(cfg.n(10))]


# -- determinant formula and model-free identities -------------------------------------


def task_determinant(seed, gname, sample, max_nodes=6):
    rng = _rng(seed, "determinant", gname, sample)
    g = families.by_name(gname)
    w = _weights("u_zero", g, rng)
    e = SpinEnumerator(g, w)
    bd = g.boundary_order()
    table = MomentTable(e, bd, bd)
    pairs = {(a, b): table({a, b}) for a in bd for b in bd if a != b}
    two = lambda a, b: pairs[a, b]  # noqa: E731
    acc = _Acc("determinant-formula", gname, sample)
    zero = _Acc("determinant-unbalanced", gname, sample)
    comb = _Acc("determinant-pairings", gname, sample)
    direct = _Acc("determinant-formula-direct", gname, sample)
    balanced = []
    for parts in boundary_specs(bd, max_nodes):
        seq, col = build_node_sequence(g, *parts)
        if len(seq) % 2:
            continue
        spec = Phi(*parts)
        val = phi_expansion(e, spec, table)
        t = two_point_table(seq, two)
        K, M = build_matrices(seq, col, t)
        if M is None:
            zero.add(val, 0, val == 0, repr(parts))
            continue
        d = M.det()
        rhs = Fraction(d, 2 ** (len(seq) // 2))
        acc.add(val, rhs, val == rhs, repr(parts))
        dp = det_by_pairings(t, col.sources, col.sinks)
        comb.add(d, dp, d == dp, repr(parts))
        balanced.append((spec, rhs))
    for spec, rhs in rng.sample(balanced, min(10, len(balanced))):
        val = phi_direct(e, spec)
        direct.add(val, rhs, val == rhs, repr(spec))
    accs = (acc, zero, comb, direct)
    return [a.record() for a in accs], [f for a in accs for f in a.failures]


def _rand_table(rng, n):
    t = [[0] * n for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            t[u][v] = t[v][u] = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    return t


def task_pfdet_identity(seed, size, trials=100):
    rng = _rng(seed, "pf-det", size)
    acc = _Acc("pf-det-identity", f"N{size}", 0)
    rec = _Acc("pf-recursion", f"N{size}", 0)
    for k in range(trials):
        t = _rand_table(rng, size)
        prods = pair_products(pfaffian_products(antisym_matrix(t)), size)
        for blue in range(1 << size):
            c = Coloring(size, blue)
            r = pf_det_identity(t, c, products=prods)
            acc.add(r.lhs, r.rhs, r.lhs == r.rhs, f"trial {k} blue {blue:b}")
            if r.recursion is not None:
                rec.add(*r.recursion, r.recursion[0] == r.recursion[1], f"trial {k} blue {blue:b}")
    return [acc.record(), rec.record()], acc.failures + rec.failures


def task_sign_rule(seed, size):
    acc = _Acc("sign-rule", f"N{size}", 0)
    for mask in range(1 << size):
        S = [p for p in range(size) if mask >> p & 1]
        if len(S) & 1:
            continue
        C = [p for p in range(size) if not mask >> p & 1]
        for pi in pairings(S):
            for pi2 in pairings(C):
                lhs, rhs, ok = sign_concat(size, S, pi, pi2)
                acc.add(lhs, rhs, ok, f"S={S} pi={pi} pi'={pi2}")
    return [acc.record()], acc.failures


def task_pf_methods(seed, size, trials=20):
    rng = _rng(seed, "pf-methods", size)
    acc = _Acc("pfaffian-methods", f"N{size}", 0)
    sq = _Acc("pfaffian-squared-random", f"N{size}", 0)
    for k in range(trials):
        K = antisym_matrix(_rand_table(rng, size))
        a = pfaffian_elimination(K)
        if size <= 8:
            from .pfaffian import pfaffian_combinatorial
            b = pfaffian_combinatorial(K)
            acc.add(a, b, a == b, f"trial {k}")
        d = determinant(K)
        sq.add(a * a, d, a * a == d, f"trial {k}")
    return [r.record() for r in (acc, sq) if r.cases], acc.failures + sq.failures


def determinant_tasks(cfg):
    tasks = [(task_determinant, cfg.seed, gname, s) for gname in ("C6", "C8", "grid3x3") for s in range(cfg.n(10))]
    tasks += [(task_pfdet_identity, cfg.seed, n) for n in (2, 4, 6, 8)]
    tasks += [(task_sign_rule, cfg.seed, n) for n in (2, 4, 6, 8)]
    tasks += [(task_pf_methods, cfg.seed, n) for n in (4, 8, 10)]
    return tasks


# -- disorder ----------------------------------------------------------------------

DISORDER_KINDS = ("general", "nonneg", "u_zero")


def task_disorder(seed, gname, sample, cases=6):
    rng = _rng(seed, "disorder", gname, sample)
    g = families.by_name(gname)
    w = _weights(DISORDER_KINDS[sample % 3], g, rng)
    e = SpinEnumerator(g, w)
    reg = DualPathRegistry(g)
    V = list(g.vertices)
    faces = list(range(g.num_faces))
    out = []
    for k in range(cases):
        marked = rng.sample(faces, min(len(faces), rng.randint(1, 2)))
        C = frozenset(f for f in marked if rng.random() < 0.6)
        D = frozenset(f for f in marked if f not in C or rng.random() < 0.3)
        spec = Disorder(_rand_subset(rng, V), _rand_subset(rng, V), C, D)
        lhs = spin_oracle(g, w, spec, reg, enum=e)
        rhs = current_oracle(g, w, spec, reg)
        out.append(Record("disorder-switching", gname, sample, _s(lhs), _s(rhs), lhs == rhs))
    return out


def task_edge_factor(seed, samples=1000, tol=1e-12):
    """Float check of the (x, y) edge factor with disorder signs against
    the exponential Gibbs factor."""
    rng = _rng(seed, "edge-factor", "float")
    acc = _Acc("disorder-edge-factor", "single-edge", 0)
    for k in range(samples):
        J, U = rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)
        w = couplings_to_weights(Couplings((J,), (U,)))
        s = [rng.choice((-1, 1)) for _ in range(6)]
        a = edge_factor(w.x[0], w.y[0], *s)
        b = gibbs_factor(J, U, *s)
        err = abs(a - b) / abs(b)
        acc.add(repr(a), repr(b), err <= tol, f"J={J!r} U={U!r} signs={s}")
    return [acc.record()], acc.failures


def disorder_tasks(cfg):
    tasks = [(task_disorder, cfg.seed, gname, s) for gname in ("C4chord", "theta", "grid3x3") for s in range(cfg.n(4))]
    tasks.append((task_edge_factor, cfg.seed))
    return tasks


# -- corner (Kadanoff-Ceva) correlators ------------------------------------------------


def _pick_corners(g, rng, k):
    cs = []
    pool = g.corners()
    rng.shuffle(pool)
    for c in pool:
        if any(c.vertex == d.vertex for d in cs):
            continue
        if c.face != 0 and any(c.face == d.face for d in cs):
            continue
        cs.append(c)
        if len(cs) == k:
            break
    return cs


def _corner_spec(rng, cs):
    parts = [[], [], [], []]
    for c in cs:
        parts[rng.randrange(4)].append(c)
    return parts


def task_chi(seed, gname, sample, cases=4):
    """General weights: both expansions agree and unbalanced corner colorings vanish.
    U=0 weights: Pfaffian formula for psi and the determinant formula for chi."""
    rng = _rng(seed, "chi", gname, sample)
    g = families.by_name(gname)
    u0 = sample % 2 == 1
    w = _weights("u_zero" if u0 else "general", g, rng)
    e = SpinEnumerator(g, w)
    sw = _Acc("chi-switching", gname, sample)
    unb = _Acc("chi-unbalanced", gname, sample)
    pf = _Acc("psi-pfaffian", gname, sample)
    det = _Acc("chi-determinant", gname, sample)
    for k in range(cases):
        cs = _pick_corners(g, rng, rng.randint(1, 4))
        parts = _corner_spec(rng, cs)
        reg = DualPathRegistry(g)
        spec = Chi(*parts)
        seq, col = build_corner_sequence(g, *parts, registry=reg)
        val = spin_oracle(g, w, spec, reg, enum=e)
        cur = current_oracle(g, w, spec, reg)
        sw.add(val, cur, val == cur, repr(parts))
        if not is_balanced(col):
            unb.add(val, 0, val == 0, repr(parts))
        if not u0 or len(seq) % 2:
            continue

        def psi(X):
            return spin_oracle(g, w, psi_disorder(X, ()), reg, enum=e)

        t = two_point_table(seq, lambda a, b: psi([a, b]))
        K = antisym_matrix(t)
        n = len(seq)
        for mask in range(3, 1 << n):
            if mask.bit_count() & 1:
                continue
            S = [p for p in range(n) if mask >> p & 1]
            X = _odd_sites([nd.site for nd in seq], mask)
            lhs, rhs = psi(X), pfaffian(restrict(K, S))
            pf.add(lhs, rhs, lhs == rhs, f"{parts} S={S}")
        if is_balanced(col):
            rhs = Fraction(source_sink_matrix(t, col.sources, col.sinks).det(), 2 ** (n // 2))
            det.add(val, rhs, val == rhs, repr(parts))
    accs = [a for a in (sw, unb, pf, det) if a.cases]
    return [a.record() for a in accs], [f for a in accs for f in a.failures]


def task_chi_unbalanced(seed, gname, sample, cases=6):
    """Targeted unbalanced corner colorings at general weights."""
    rng = _rng(seed, "chi-unbalanced", gname, sample)
    g = families.by_name(gname)
    w = _weights("general", g, rng)
    e = SpinEnumerator(g, w)
    acc = _Acc("chi-unbalanced-targeted", gname, sample)
    tries = 0
    while acc.cases < cases and tries < 200:
        tries += 1
        cs = _pick_corners(g, rng, rng.randint(2, 4))
        parts = _corner_spec(rng, cs)
        reg = DualPathRegistry(g)
        seq, col = build_corner_sequence(g, *parts, registry=reg)
        if is_balanced(col) or len(seq) % 2:
            continue
        val = spin_oracle(g, w, Chi(*parts), reg, enum=e)
        acc.add(val, 0, val == 0, repr(parts))
    return [acc.record()], acc.failures


def chi_tasks(cfg):
    tasks = [(task_chi, cfg.seed, gname, s) for gname in ("C4chord", "theta", "grid3x3") for s in range(cfg.n(4))]
    tasks += [(task_chi_unbalanced, cfg.seed, "grid3x3", s) for s in range(cfg.n(4))]
    return tasks


# -- total positivity --------------------------------------------------------------


def parallel_patterns(boundary, n):
    """(sources, sinks) with s_1..s_n, t_n..t_1 counterclockwise, for every
    choice of 2n boundary vertices and every rotation of that choice."""
    for S in combinations(boundary, 2 * n):
        for r in range(2 * n):
            rot = S[r:] + S[:r]
            yield rot[:n], tuple(reversed(rot[n:]))


def task_totpos(seed, gname, sample, max_n=3):
    rng = _rng(seed, "totpos", gname, sample)
    g = families.by_name(gname)
    w = _weights("u_zero", g, rng)
    e = SpinEnumerator(g, w)
    bd = g.boundary_order()
    table = MomentTable(e, bd)
    two = lambda a, b: table({a, b})  # noqa: E731
    nonneg = _Acc("totpos-nonnegative", gname, sample)
    paths = _Acc("totpos-paths", gname, sample)
    signs = _Acc("totpos-source-sink", gname, sample)
    for n in range(1, min(max_n, len(bd) // 2) + 1):
        for src, snk in parallel_patterns(bd, n):
            M = [[two(s, t) for t in snk] for s in src]
            rep = total_positivity_scan(M, g, src, snk)
            for m in rep.minors:
                label = f"s={src} t={snk} I={m.rows} J={m.cols}"
                nonneg.add(m.det, 0, m.det >= 0, label)
                paths.add(m.det > 0, m.paths, (m.det > 0) == m.paths, label)
            if n >= 2:
                full = tuple(range(n))
                d1 = rep.minors[-1].det
                d2 = minor_as_source_sink(two, src, snk, full, full)
                signs.add(d1, d2, d1 == d2, f"s={src} t={snk}")
    accs = [a for a in (nonneg, paths, signs) if a.cases]
    return [a.record() for a in accs], [f for a in accs for f in a.failures]


def totpos_tasks(cfg):
    return [(task_totpos, cfg.seed, gname, s) for gname in ("grid2x3", "grid3x3", "path4") for s in range(cfg.n(3))]


# -- inequalities ------------------------------------------------------------------


def task_inequalities(seed, gname, sample):
    rng = _rng(seed, "inequalities", gname, sample)
    g = families.by_name(gname)
    w = _weights("simon", g, rng)
    e = SpinEnumerator(g, w)
    e.full_table()
    V = list(g.vertices)
    simon = _Acc("simon", gname, sample)
    gauss = _Acc("gaussian", gname, sample)
    neg = _Acc("negative-association", gname, sample)
    for u, v in combinations(V, 2):
        nbrs = {g.vertices[g.other_end(j, g.index[u])] for j in g.incident(g.index[u])}
        Ws = [frozenset([x]) for x in V if x not in (u, v) and separates(g, u, v, [x])]
        if v not in nbrs:
            Ws.append(frozenset(nbrs))
        for W in Ws:
            r = check_simon(g, w, u, v, W, enum=e)
            simon.add(r.lhs, r.rhs, r.holds, f"u={u} v={v} W={sorted(W)}")
        for x in V:
            r = check_negative_association(g, w, u, v, x, enum=e)
            neg.add(r.lhs, r.rhs, r.holds, f"u={u} v={v} w={x}")
    for size in (2, 4, 6):
        for S in combinations(V, size):
            r = check_gaussian(g, w, S, enum=e)
            gauss.add(r.lhs, r.rhs, r.holds, f"S={S}")
    accs = [a for a in (simon, gauss, neg) if a.cases]
    return [a.record() for a in accs], [f for a in accs for f in a.failures]


def task_simon_equality(seed, sample):
    """On a path u - x - v at U=0 the Simon bound is attained."""
    rng = _rng(seed, "simon-equality", "path3", sample)
    g = families.path(3)
    w = _weights("u_zero", g, rng)
    r = check_simon(g, w, 0, 2, [1])
    return [Record("simon-equality", "path3", sample, _s(r.lhs), _s(r.rhs), r.lhs == r.rhs)]


def inequalities_tasks(cfg):
    tasks = [(task_inequalities, cfg.seed, gname, s) for gname in cfg.family for s in range(cfg.n(50))]
    tasks += [(task_simon_equality, cfg.seed, s) for s in range(10)]
    return tasks


# -- driver ------------------------------------------------------------------------

SUITES = {
    "switching": switching_tasks,
    "planar-vanishing": vanishing_tasks,
    "pfaffian": pfaffian_tasks,
    "determinant": determinant_tasks,
    "disorder": disorder_tasks,
    "chi": chi_tasks,
    "totpos": totpos_tasks,
    "inequalities": inequalities_tasks,
}


def _call(task):
    fn, *args = task
    t0 = time.perf_counter()
    res = fn(*args)
    recs, fails = res if isinstance(res, tuple) else (res, [])
    dt = time.perf_counter() - t0
    return recs, fails, dt


def run_tasks(tasks, workers: int = 1):
    if workers <= 1:
        return [_call(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_call, tasks))  # map keeps task order


def run_suite(name: str, cfg: SuiteConfig | None = None) -> dict:
    """Run one suite (or "all") and return the report as a dict."""
    cfg = cfg or SuiteConfig()
    names = list(SUITES) if name == "all" else [name]
    for nm in names:
        if nm not in SUITES:
            raise KeyError(f"unknown suite {nm!r}")
    t0 = time.perf_counter()
    tasks, owner = [], []
    for nm in names:
        ts = SUITES[nm](cfg)
        tasks += ts
        owner += [nm] * len(ts)
    results = run_tasks(tasks, cfg.workers)
    records, failures = [], []
    per_suite = {nm: {"records": 0, "cases": 0, "failed": 0} for nm in names}
    for nm, (recs, fails, dt) in zip(owner, results):
        for r in recs:
            d = asdict(r)
            d["suite"] = nm
            if cfg.timings:
                d["runtime"] = round(d["runtime"], 6)
            else:
                del d["runtime"]
            records.append(d)
            per_suite[nm]["records"] += 1
            per_suite[nm]["cases"] += r.cases
            per_suite[nm]["failed"] += 0 if r.passed else 1
        failures += fails
    failed = sum(1 for r in records if not r["passed"])
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "atlab", "version": __version__},
        "suite": name,
        "config": {"seed": cfg.seed, "family": list(cfg.family), "samples": cfg.samples},
        "records": records,
        "failures": failures[:MAX_LISTED_FAILURES],
        "summary": {
            "records": len(records),
            "cases": sum(r["cases"] for r in records),
            "passed": len(records) - failed,
            "failed": failed,
            "all_passed": failed == 0,
            "suites": per_suite,
        },
    }
    if cfg.timings:
        report["runtime_seconds"] = round(time.perf_counter() - t0, 3)
    return report
