import math
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import assume, given, strategies as st

from atlab import families
from atlab.errors import InverseUndefined, SetsNotDisjoint, TooLarge
from atlab.model import (Couplings, EdgeWeights, Phi, SigmaTilde, SpinEnumerator, couplings_to_weights, edge_factor,
                         gibbs_factor, phi_direct, phi_expansion, spin_oracle, weights_to_couplings)

from strategies import graph_and_weights, weights_for

F = Fraction


def brute(g, w, A=(), B=(), obs=None):
    """Plain sum over the 4^n configurations using the per-edge factor."""
    num = den = 0
    for s in product((1, -1), repeat=g.n):
        for t in product((1, -1), repeat=g.n):
            wt = 1
            for j, (a, b) in enumerate(g.ends):
                wt *= edge_factor(w.x[j], w.y[j], s[a], s[b], t[a], t[b])
            den += wt
            if obs is not None:
                val = obs(s, t)
            else:
                val = 1
                for v in A:
                    val *= s[g.index[v]]
                for v in B:
                    val *= t[g.index[v]]
            num += val * wt
    return F(num) / den if isinstance(num, (int, F)) else num / den


def edge():
    return families.path(2)


def test_couplings_examples():
    w = couplings_to_weights(Couplings((0.0,), (0.0,)))
    assert w.x == (0.0,) and w.y == (0.0,)
    w = couplings_to_weights(Couplings((0.37,), (0.0,)))
    assert math.isclose((w.y[0] + 1) ** 2 - w.x[0] ** 2, 1.0, rel_tol=1e-12)
    c = weights_to_couplings(EdgeWeights.exact(["3/4"], ["1/4"]))
    assert abs(c.U[0]) < 1e-15
    assert math.isclose(math.tanh(2 * c.J[0]), 0.6, rel_tol=1e-12)
    with pytest.raises(InverseUndefined):
        weights_to_couplings(EdgeWeights.exact(["2"], ["0"]))


@given(st.floats(-2, 2), st.floats(-2, 2))
def test_couplings_round_trip(J, U):
    c = weights_to_couplings(couplings_to_weights(Couplings((J,), (U,))))
    assert math.isclose(c.J[0], J, abs_tol=1e-9)
    assert math.isclose(c.U[0], U, abs_tol=1e-9)


def test_edge_factor_examples():
    x, y = F(2, 3), F(1, 5)
    assert edge_factor(x, y, 1, -1, 1, 1) == 1
    assert edge_factor(x, y, 1, 1, 1, 1) == 1 + x + y
    assert edge_factor(x, y, 1, 1, 1, 1, eps=-1, epst=1) == 1


@given(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5), st.lists(st.sampled_from((1, -1)), min_size=6, max_size=6))
def test_edge_factor_matches_exponential(J, U, s):
    w = couplings_to_weights(Couplings((J,), (U,)))
    a = edge_factor(w.x[0], w.y[0], *s)
    b = gibbs_factor(J, U, *s)
    assert abs(a - b) <= 1e-12 * abs(b)


@given(weights_for(1, "nonneg"))
def test_single_edge_values(w):
    g = edge()
    x, y = w.x[0], w.y[0]
    assert spin_oracle(g, w, SigmaTilde({0, 1}, ())) == x / (2 + y)
    assert spin_oracle(g, w, SigmaTilde({0, 1}, {0, 1})) == y / (2 + y)
    assert spin_oracle(g, w, Phi(A1={0, 1})) == x / (4 + 2 * y)
    assert spin_oracle(g, w, SigmaTilde({0}, {1})) == 0


@given(graph_and_weights())
def test_normalisation(gw):
    g, w = gw
    e = SpinEnumerator(g, w)
    assume(e.Z != 0)
    assert e.correlation() == 1


@given(graph_and_weights(names=("path3", "C4", "theta")), st.data())
def test_enumerator_matches_brute_force(gw, data):
    g, w = gw
    e = SpinEnumerator(g, w)
    assume(e.Z != 0)
    A = data.draw(st.sets(st.sampled_from(g.vertices)))
    B = data.draw(st.sets(st.sampled_from(g.vertices)))
    assert e.correlation(A, B) == brute(g, w, A, B)


@given(graph_and_weights(), st.data())
def test_swap_symmetry(gw, data):
    g, w = gw
    e = SpinEnumerator(g, w)
    assume(e.Z != 0)
    A = data.draw(st.sets(st.sampled_from(g.vertices)))
    B = data.draw(st.sets(st.sampled_from(g.vertices)))
    assert e.correlation(A, B) == e.correlation(B, A)


@given(graph_and_weights(kind="u_zero"), st.data())
def test_u_zero_factorisation(gw, data):
    g, w = gw
    e = SpinEnumerator(g, w)
    A = data.draw(st.sets(st.sampled_from(g.vertices)))
    B = data.draw(st.sets(st.sampled_from(g.vertices)))
    assert e.correlation(A, B) == e.correlation(A, ()) * e.correlation(B, ())


@given(graph_and_weights(names=("path3", "C4", "C6", "theta", "grid2x3")), st.data())
def test_phi_direct_equals_expansion(gw, data):
    g, w = gw
    e = SpinEnumerator(g, w)
    assume(e.Z != 0)
    roles = data.draw(st.lists(st.sampled_from(("", "A1", "A2", "B1", "B2")), min_size=g.n, max_size=g.n))
    sets = {k: {v for v, r in zip(g.vertices, roles) if r == k} for k in ("A1", "A2", "B1", "B2")}
    spec = Phi(**sets)
    assert phi_direct(e, spec) == phi_expansion(e, spec)


def test_phi_against_brute_force():
    g = families.path(3)
    w = EdgeWeights.exact(["1/2", "-3/4"], ["2/3", "5"])

    def obs(s, t):
        phi = lambda i: (s[i] + t[i]) // 2  # noqa: E731
        phit = lambda i: (s[i] - t[i]) // 2  # noqa: E731
        return phi(0) ** 2 * phit(1) * phi(2)

    assert spin_oracle(g, w, Phi(A1={2}, A2={0}, B1={1})) == brute(g, w, obs=obs)


def test_phi_sets_must_be_disjoint():
    with pytest.raises(SetsNotDisjoint):
        Phi(A1={1}, B1={1})


def test_float_mode_matches_exact():
    g = families.cycle(4)
    c = Couplings((0.3, 0.2, -0.1, 0.5), (-0.2, 0.1, 0.0, 0.3))
    wf = couplings_to_weights(c)
    wx = EdgeWeights.exact([F(v).limit_denominator(10 ** 12) for v in wf.x],
                           [F(v).limit_denominator(10 ** 12) for v in wf.y])
    a = SpinEnumerator(g, wf).correlation({0, 2}, {1, 3})
    b = SpinEnumerator(g, wx).correlation({0, 2}, {1, 3})
    assert math.isclose(a, float(b), rel_tol=1e-9)


def test_vertex_cap(monkeypatch):
    monkeypatch.setenv("ATLAB_MAX_VERTICES", "4")
    g = families.path(5)
    with pytest.raises(TooLarge):
        SpinEnumerator(g, EdgeWeights.uniform(g.m, 1, 1))


def test_string_labelled_moment_table():
    from atlab.graph import PlanarGraph
    g = PlanarGraph(["c", "a", "b"], [("e", "c", "a"), ("f", "a", "b")],
                    {"c": ["e"], "a": ["f", "e"], "b": ["f"]})
    w = EdgeWeights.exact(["1/3", "2/5"], ["1/7", "3"])
    e = SpinEnumerator(g, w)
    ref = brute(g, w, {"c", "b"}, {"a"})
    assert e.correlation({"c", "b"}, {"a"}) == ref
    e.full_table()
    assert e.correlation({"c", "b"}, {"a"}) == ref
    spec = Phi(A1={"c"}, B1={"b"}, A2={"a"})
    assert phi_direct(e, spec) == phi_expansion(e, spec)
