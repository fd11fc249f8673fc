import random
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from atlab import families, kernels
from atlab.kernels import _Moduli, walsh_hadamard


def test_scan_counts_all_trits():
    g = families.grid(3, 3)
    states, hits = kernels.scan_trits(g, 0, backend="python")
    assert states == 3 ** 12
    assert (states, hits) == kernels.scan_trits(g, 0)


@given(st.lists(st.integers(-10 ** 30, 10 ** 30), min_size=8, max_size=8))
def test_walsh_hadamard_definition(vals):
    out = walsh_hadamard(vals)
    for S in range(8):
        assert out[S] == sum(v * (-1) ** bin(S & b).count("1") for b, v in enumerate(vals))


@given(st.integers(-(10 ** 200), 10 ** 200))
def test_crt_lift_round_trip(v):
    mod = _Moduli.for_bound(abs(v) + 1)
    # lift takes Montgomery residues v * 2^64 mod p
    assert mod.lift([v * 2 ** 64 % p for p in mod.primes]) == v


def test_pure_python_switch():
    code = "import atlab.kernels as k; print(k.default_backend())"
    out = subprocess.run([sys.executable, "-c", code], env={"ATLAB_PURE_PYTHON": "1", "PATH": ""},
                         capture_output=True, text=True, check=True).stdout.strip()
    assert out == "python"


@pytest.mark.skipif(not kernels.compiled_available(), reason="compiled kernels not built")
def test_compiled_and_python_sums_agree():
    from atlab.currents import coefficient_table
    from atlab.model import Phi
    rng = random.Random(9)
    g = families.grid(2, 3)
    X = [rng.randint(-40, 90) for _ in range(g.m)]
    Y = [rng.randint(-40, 90) for _ in range(g.m)]
    D = [rng.randint(1, 30) for _ in range(g.m)]
    src, markers, coef = coefficient_table(g, Phi(A1={0, 5}, B1={2, 3}))
    a = kernels.current_sum(g, X, Y, D, src, markers, coef, backend="python")
    b = kernels.current_sum(g, X, Y, D, src, markers, coef, backend="compiled")
    assert a == b
