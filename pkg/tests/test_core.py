import numpy as np
import pytest

from boolsens import core
from boolsens.core import TruthTable


def tables(n):
    return [TruthTable.from_int(n, w) for w in range(1 << (1 << n))]


def brute_walsh(f, u):
    return sum((-1) ** (int(f.bits[x]) ^ (bin(u & x).count("1") & 1)) for x in range(1 << f.n))


def test_and2_spectrum():
    assert list(core.walsh_transform(core.and_fn(2)).coeffs) == [2, 2, 2, -2]


def test_majority_anf():
    assert core.mobius_anf(core.majority_fn(3)).monomials() == [(1, 2), (1, 3), (2, 3)]


def test_bent_nonlinearity():
    f = TruthTable.from_function(4, lambda x: (x[0] & x[1]) ^ (x[2] & x[3]))
    assert core.nonlinearity(f) == 6
    assert set(np.abs(core.walsh_transform(f).coeffs)) == {4}


def test_parity_profile():
    p = core.profile(core.parity_fn(4))
    assert (p.pdeg, p.adeg, p.resiliency_order, p.sensitivity, p.sensitivity_order) == (4, 1, 3, 4, 1)
    assert p.nonlinearity == 0 and p.balanced


def test_indexing_convention():
    # index(x) = sum x_j 2^(j-1): x_1 is the low bit
    f = core.variable_fn(3, 1)
    assert list(f.bits) == [0, 1] * 4
    assert core.point_index((1, 0, 1)) == 5
    assert core.point_bits(5, 3) == (1, 0, 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_walsh_matches_definition(n):
    for f in tables(n):
        spec = core.walsh_transform(f)
        assert all(int(spec.coeffs[u]) == brute_walsh(f, u) for u in range(1 << n))


def test_inverse_walsh_roundtrip(rng):
    for n in range(1, 9):
        f = TruthTable(n, rng.integers(0, 2, 1 << n, dtype=np.uint8))
        assert core.inverse_walsh(core.walsh_transform(f)) == f
        assert core.anf_to_table(core.mobius_anf(f)) == f


def test_pdeg_is_max_support_weight():
    # multilinear real polynomial of AND_3 is x1 x2 x3
    assert core.pdeg(core.and_fn(3)) == 3
    assert core.pdeg(core.constant(3, 1)) == 0
    assert core.pdeg(core.variable_fn(3, 2)) == 1
    assert core.pdeg(core.majority_fn(3)) == 3


def test_resiliency_order():
    assert core.resiliency_order(core.parity_fn(5)) == 4
    assert core.resiliency_order(core.and_fn(2)) == -1
    x1x2 = TruthTable.from_function(3, lambda x: x[2] ^ (x[0] & x[1]))
    assert core.resiliency_order(x1x2) == 0


def test_sensitivity_brute():
    for f in tables(3):
        best = max(
            sum(f.bits[x] != f.bits[x ^ (1 << i)] for i in range(3)) for x in range(8)
        )
        assert core.sensitivity(f)[0] == best


def test_order_definitions_brute():
    for f in tables(3):
        k, w = core.max_sensitivity_order(f)
        kd, wd = core.max_dual_sensitivity_order(f)
        if k:
            assert core.is_k_order_sensitive_at(f, w, k)
        for x in range(8):
            for kk in range(k + 1, 4):
                assert not core.is_k_order_sensitive_at(f, core.point_bits(x, 3), kk)
        if kd:
            assert core.is_k_order_dual_sensitive_at(f, wd, kd)


def test_dual_order_convention():
    # odd flips keep the value, even flips change it
    g = TruthTable(2, np.array([0, 0, 0, 1], dtype=np.uint8))
    assert core.is_k_order_dual_sensitive_at(g, (0, 0), 2)


def test_hex_and_file_roundtrip(tmp_path):
    f = core.majority_fn(5)
    assert core.from_hex(5, core.to_hex(f)) == f
    path = tmp_path / "f.tt"
    core.write_table(f, path)
    assert core.read_table(path) == f
    assert core.loads_table(core.dumps_table(f)) == f


def test_capacity():
    with pytest.raises(core.CapacityError):
        core.constant(core.MAX_VARS + 1)


def test_bad_tables():
    with pytest.raises(ValueError):
        TruthTable(2, np.array([0, 1, 2, 0]))
    with pytest.raises(ValueError):
        TruthTable(2, np.zeros(3, dtype=np.uint8))
