import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from atlab import families, kernels
from atlab.currents import (Current, class_F, current_oracle, current_sign, current_weight, enumerate_currents,
                            is_null, z_empty)
from atlab.graph import OUTER, Corner, DualPathRegistry, cycle_parity
from atlab.model import Chi, Disorder, EdgeWeights, Phi, SigmaTilde, SpinEnumerator, spin_oracle
from atlab.nodes import build_corner_sequence, is_balanced

from strategies import graph_and_weights, weights_for


def edge():
    return families.path(2)


def test_single_edge_currents():
    g = edge()
    assert set(enumerate_currents(g, ())) == {Current(0, 0), Current(1, 0)}
    assert set(enumerate_currents(g, {0, 1})) == {Current(1, 1)}
    assert list(enumerate_currents(families.cycle(4), {0})) == []


def test_single_edge_weights():
    g = edge()
    w = EdgeWeights.exact(["2/3"], ["1/5"])
    x, y = w.x[0], w.y[0]
    assert current_weight(g, Current(0, 0), w) == 4
    assert current_weight(g, Current(1, 0), w) == 2 * y
    assert current_weight(g, Current(1, 1), w) == 2 * x


def test_class_F_examples():
    g = edge()
    assert class_F(g, 0, ())
    assert class_F(g, 1, {0, 1})
    assert not class_F(g, 0, {0, 1})


def test_single_edge_current_side():
    g = edge()
    w = EdgeWeights.exact(["2/3"], ["1/5"])
    x, y = w.x[0], w.y[0]
    assert current_oracle(g, w, SigmaTilde({0, 1}, ())) == 2 * x / (4 + 2 * y)
    assert current_oracle(g, w, SigmaTilde({0, 1}, {0, 1})) == 2 * y / (4 + 2 * y)
    assert current_oracle(g, w, Phi(A1={0, 1})) == x / (4 + 2 * y)


def test_sign_trivial_without_disorder():
    g = families.cycle(4)
    for n in enumerate_currents(g, {0, 2}):
        if class_F(g, n.omega, {0, 2}):
            assert current_sign(g, n, {0, 2}, 0, 0) == 1


@given(st.sampled_from(("C4chord", "theta", "grid2x3")), st.integers(0, 2 ** 31), st.data())
def test_sign_independent_of_forest(name, seed, data):
    g = families.by_name(name)
    reg = DualPathRegistry(g)
    C = data.draw(st.sets(st.sampled_from(g.inner_faces), max_size=2))
    D = data.draw(st.sets(st.sampled_from(g.inner_faces), max_size=2))
    B = data.draw(st.sets(st.sampled_from(g.vertices), max_size=4))
    gc, gd = reg.gamma(C), reg.gamma(D)
    src = g.vertex_mask(B)
    for n in enumerate_currents(g, src):
        if class_F(g, n.omega, B) and cycle_parity(g, n.omega, gc ^ gd):
            ref = current_sign(g, n, B, gc, gd)
            assert current_sign(g, n, B, gc, gd, random.Random(seed)) == ref


@given(graph_and_weights(), st.data())
def test_switching_sigma(gw, data):
    g, w = gw
    e = SpinEnumerator(g, w)
    assume(e.Z != 0)
    A = data.draw(st.sets(st.sampled_from(g.vertices)))
    B = data.draw(st.sets(st.sampled_from(g.vertices)))
    spec = SigmaTilde(A, B)
    assert spin_oracle(g, w, spec, enum=e) == current_oracle(g, w, spec)


@given(graph_and_weights(), st.data())
def test_switching_phi(gw, data):
    g, w = gw
    e = SpinEnumerator(g, w)
    assume(e.Z != 0)
    roles = data.draw(st.lists(st.sampled_from(("", "A1", "A2", "B1", "B2")), min_size=g.n, max_size=g.n))
    spec = Phi(**{k: {v for v, r in zip(g.vertices, roles) if r == k} for k in ("A1", "A2", "B1", "B2")})
    assert spin_oracle(g, w, spec, enum=e) == current_oracle(g, w, spec)


@given(graph_and_weights(names=("C4chord", "theta", "grid2x3")), st.data())
def test_switching_disorder(gw, data):
    g, w = gw
    e = SpinEnumerator(g, w)
    assume(e.Z != 0)
    reg = DualPathRegistry(g)
    A = data.draw(st.sets(st.sampled_from(g.vertices), max_size=3))
    B = data.draw(st.sets(st.sampled_from(g.vertices), max_size=3))
    C = data.draw(st.sets(st.sampled_from(g.inner_faces), max_size=1))
    D = data.draw(st.sets(st.sampled_from(g.inner_faces), max_size=1))
    spec = Disorder(A, B, C, D)
    assert spin_oracle(g, w, spec, reg, enum=e) == current_oracle(g, w, spec, reg)


@given(graph_and_weights(), st.data())
def test_class_F_of_either_side(gw, data):
    # the restriction to F_B may use A instead: both sums agree
    g, w = gw
    A = data.draw(st.sets(st.sampled_from(g.vertices)))
    B = data.draw(st.sets(st.sampled_from(g.vertices)))
    cur = list(enumerate_currents(g, set(A) ^ set(B)))
    by_a = sum(current_weight(g, n, w) for n in cur if class_F(g, n.omega, A))
    by_b = sum(current_weight(g, n, w) for n in cur if class_F(g, n.omega, B))
    assert by_a == by_b


def test_direct_and_kernel_routes_agree():
    rng = random.Random(3)
    g = families.by_name("C4chord")
    w = EdgeWeights.exact([Fraction(rng.randint(-5, 9), rng.randint(1, 7)) for _ in range(g.m)],
                          [Fraction(rng.randint(-5, 9), rng.randint(1, 7)) for _ in range(g.m)])
    reg = DualPathRegistry(g)
    specs = [SigmaTilde({0, 2}, {1, 3}), Phi(A1={0, 1}, B2={2}), Disorder({0}, {1}, {1}, {2}),
             Chi(A1=[Corner(0, OUTER)], B1=[Corner(2, 1)])]
    for spec in specs:
        assert current_oracle(g, w, spec, reg, method="direct") == current_oracle(g, w, spec, reg)


def test_chi_switching_grid():
    g = families.grid(3, 3)
    w = EdgeWeights.exact(["1/2", "3", "-1/3", "2", "1", "5/2", "1/7", "4", "-2/3", "1", "3/5", "2"],
                          ["1", "-1/2", "2", "3/4", "0", "1", "2", "-1/5", "1", "6/7", "1/2", "3"])
    reg = DualPathRegistry(g)
    spec = Chi(A1=[Corner(4, 1)], B1=[Corner(0, OUTER)], A2=[Corner(8, OUTER)])
    assert spin_oracle(g, w, spec, reg) == current_oracle(g, w, spec, reg)


def test_unbalanced_corner_coloring_makes_every_current_null():
    g = families.grid(3, 3)
    reg = DualPathRegistry(g)
    parts = ([Corner(0, OUTER), Corner(6, OUTER), Corner(8, OUTER)], [], [Corner(2, OUTER)], [])
    seq, col = build_corner_sequence(g, *parts, registry=reg)
    assert not is_balanced(col)
    spec = Chi(*parts)
    v1 = g.vertex_mask([0, 2, 6, 8])
    f1 = reg.gamma([])
    seen = 0
    for n in enumerate_currents(g, v1):
        if cycle_parity(g, n.omega, f1):
            seen += 1
            assert is_null(g, n, spec, reg)
    assert seen > 0


def test_empty_witness_never_nulls():
    # two outer corners joined by one edge: the only candidate T is the pair
    # itself, and it gives an even exponent
    g = families.cycle(4)
    reg = DualPathRegistry(g)
    spec = Chi(A1=[Corner(0, OUTER), Corner(1, OUTER)])
    assert is_null(g, Current(1, 1), spec, reg, witness=True) is None
    assert not is_null(g, Current(1, 1), spec, reg)


@given(weights_for(5, "general"))
def test_backends_agree(w):
    if not kernels.compiled_available():
        pytest.skip("compiled kernels not built")
    g = families.cycle_with_chord()
    assume(SpinEnumerator(g, w, backend="python").Z != 0)
    assert z_empty(g, w, backend="python") == z_empty(g, w, backend="compiled")
    spec = Phi(A1={0, 2}, B1={1, 3})
    assert current_oracle(g, w, spec, backend="python") == current_oracle(g, w, spec, backend="compiled")
    a = SpinEnumerator(g, w, backend="python").correlation({0, 1}, {2})
    b = SpinEnumerator(g, w, backend="compiled").correlation({0, 1}, {2})
    assert a == b


def test_edge_cap(monkeypatch):
    from atlab.errors import TooLarge
    monkeypatch.setenv("ATLAB_MAX_EDGES", "3")
    with pytest.raises(TooLarge):
        list(enumerate_currents(families.cycle(4), ()))
