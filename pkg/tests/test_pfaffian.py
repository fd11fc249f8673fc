import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from atlab import families
from atlab.errors import NotSquare, OddDimension
from atlab.model import EdgeWeights, SpinEnumerator
from atlab.nodes import Coloring, NodeSequence, build_node_sequence
from atlab.pfaffian import (antisym_matrix, build_matrices, crossing_number, det_by_pairings, determinant,
                            determinant_bareiss, determinant_permutations, disjoint_paths_exist, pairings,
                            pf_det_identity, pfaffian, pfaffian_combinatorial, pfaffian_elimination, restrict,
                            sign_concat, source_sink_matrix, total_positivity_scan)

from strategies import rationals

F = Fraction


def random_table(n, rng):
    t = [[0] * n for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            t[u][v] = t[v][u] = F(rng.randint(-9, 9), rng.randint(1, 9))
    return t


def test_crossing_numbers():
    assert crossing_number([(1, 2), (3, 4)]) == 0
    assert crossing_number([(1, 3), (2, 4)]) == 1
    # s1..s4 at 0..3 and t4..t1 at 4..7
    assert crossing_number([(0, 5), (1, 4), (2, 7), (3, 6)]) == 4


def test_small_pfaffians():
    a = F(3, 7)
    assert pfaffian([[0, a], [-a, 0]]) == a
    t = random_table(4, random.Random(1))
    K = antisym_matrix(t)
    expect = t[0][1] * t[2][3] - t[0][2] * t[1][3] + t[0][3] * t[1][2]
    assert pfaffian(K) == expect
    assert pfaffian([]) == 1
    with pytest.raises(OddDimension):
        pfaffian([[0]])
    with pytest.raises(NotSquare):
        pfaffian([[0, 1]])


@given(st.integers(1, 5), st.integers(0, 2 ** 32))
def test_pfaffian_squared_is_determinant(k, seed):
    K = antisym_matrix(random_table(2 * k, random.Random(seed)))
    pf = pfaffian_elimination(K)
    assert pf * pf == determinant(K)
    if k <= 4:
        assert pf == pfaffian_combinatorial(K)


@given(st.lists(rationals(), min_size=9, max_size=9))
def test_determinant_methods_agree(vals):
    M = [vals[0:3], vals[3:6], vals[6:9]]
    assert determinant_bareiss(M) == determinant_permutations(M)


def test_determinant_float_input():
    M = [[1.5, 2.0], [0.5, 4.0]]
    assert abs(determinant(M) - 5.0) < 1e-12


def example_sequence():
    # phi^2_1 phi_2 phi~^2_3 phi_4 on a 4-cycle labelled 1..4
    g = families.cycle(4)
    return build_node_sequence(g, A2=[0], A1=[1, 3], B2=[2])


def test_source_sink_matrix_sign_pattern():
    seq, c = example_sequence()
    primes = {(0, 1): 2, (0, 2): 3, (0, 3): 5, (1, 2): 7, (1, 3): 11, (2, 3): 13}
    K, M = build_matrices(seq, c, lambda a, b: primes[tuple(sorted((a, b)))])
    s = lambda a, b: primes[tuple(sorted((a, b)))]  # noqa: E731
    v1, v2, v3, v4 = 0, 1, 2, 3
    expect = [
        [1, s(v1, v2), s(v1, v3)],
        [-s(v3, v1), s(v3, v2), 1],
        [s(v4, v1), -s(v4, v2), -s(v4, v3)],
    ]
    assert M.entries == expect
    assert M.det() == det_by_pairings(
        [[1 if seq[u].site == seq[v].site else (0 if u == v else s(seq[u].site, seq[v].site))
          for v in range(6)] for u in range(6)], c.sources, c.sinks)


def test_trivial_two_node_matrices():
    seq = NodeSequence.from_sites(["a", "b"])
    c = Coloring(2, 0)
    K, M = build_matrices(seq, c, lambda a, b: F(2, 3))
    assert K == [[0, F(2, 3)], [-F(2, 3), 0]]
    assert M.entries == [[F(2, 3)]]


def test_parallel_two_by_two_determinant():
    t = random_table(4, random.Random(5))
    # s1, s2 at 0, 1 and t2, t1 at 2, 3
    M = source_sink_matrix(t, [0, 1], [2, 3])
    assert M.det() == det_by_pairings(t, [0, 1], [2, 3])
    assert M.det() == t[0][3] * t[1][2] - t[0][2] * t[1][3]


@pytest.mark.parametrize("n", [2, 4, 6])
def test_determinant_equals_pairing_sum(n):
    rng = random.Random(n)
    for _ in range(10):
        t = random_table(n, rng)
        for blue in range(1 << n):
            c = Coloring(n, blue)
            if 2 * len(c.sources) != n:
                continue
            assert source_sink_matrix(t, c.sources, c.sinks).det() == det_by_pairings(t, c.sources, c.sinks)


def test_sign_rule_examples():
    assert sign_concat(4, {0, 1}, [(0, 1)], [(2, 3)])[:2] == (1, 1)
    assert sign_concat(4, {0, 2}, [(0, 2)], [(1, 3)])[:2] == (-1, -1)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_sign_rule_exhaustive(n):
    for r in range(0, n + 1, 2):
        for S in combinations(range(n), r):
            rest = [p for p in range(n) if p not in S]
            for pi in pairings(S):
                for pi2 in pairings(rest):
                    assert sign_concat(n, S, pi, pi2)[2]


@given(st.sampled_from([2, 4, 6]), st.integers(0, 2 ** 32))
def test_pf_det_identity_random_tables(n, seed):
    t = random_table(n, random.Random(seed))
    for blue in range(1 << n):
        rep = pf_det_identity(t, Coloring(n, blue))
        assert rep.holds
        if not rep.balanced:
            assert rep.lhs == 0


def test_pfaffian_of_boundary_spins_at_u_zero():
    g = families.cycle(6)
    w = EdgeWeights.exact(["4/3", "12/5", "3/4", "4/3", "40/9", "24/7"], ["2/3", "8/5", "1/4", "2/3", "32/9", "18/7"])
    e = SpinEnumerator(g, w)
    seq = NodeSequence.from_sites(g.boundary_order())
    K, _ = build_matrices(seq, Coloring(6, 0), lambda a, b: e.correlation({a, b}))
    for S in ([0, 1, 2, 3], [0, 2, 3, 5], list(range(6))):
        assert e.correlation(S) == pfaffian(restrict(K, S))


def test_cut_vertex_blocks_two_paths():
    # path 0-1-2-3-4: sources 0,1 and sinks 3,4 must both pass through 2
    g = families.path(5)
    assert not disjoint_paths_exist(g, [0, 1], [4, 3])
    assert disjoint_paths_exist(g, [0], [4])
    assert not disjoint_paths_exist(g, [0, 1], [4, 3], method="flow")


def test_total_positivity_minor_zero_at_cut_vertex():
    g = families.path(5)
    w = EdgeWeights.exact(["3/4"] * 4, ["1/4"] * 4)
    e = SpinEnumerator(g, w)
    src, snk = [0, 1], [4, 3]
    M = [[e.correlation({s, t}) for t in snk] for s in src]
    assert determinant(M) == 0
    rep = total_positivity_scan(M, g, src, snk)
    assert rep.holds


def test_path_search_and_flow_agree():
    g = families.grid(3, 3)
    b = g.boundary_order()
    rng = random.Random(0)
    for _ in range(60):
        k = rng.randint(1, 3)
        pts = rng.sample(b, 2 * k)
        assert disjoint_paths_exist(g, pts[:k], pts[k:], "search") == disjoint_paths_exist(g, pts[:k], pts[k:], "flow")
