import pytest

from boolsens import core, mm


def ledger_is_valid(ledger, zeros_needed, sign_factor):
    cubes = [mm.Cube(frozenset(e["ones"]), frozenset(e["zeros"])) for e in ledger.entries]
    for i, a in enumerate(cubes):
        for b in cubes[i + 1:]:
            assert a.disjoint(b)
    for e in ledger.entries:
        assert len(e["zeros"]) == zeros_needed
        assert set(e["zeros"]) <= set(e["cancelled"])
        assert e["eps"] == -e["sign"] * sign_factor
    degrees = [e["degree"] for e in ledger.entries]
    assert degrees == sorted(degrees, reverse=True)
    return True


def test_table2():
    spec = mm.table2_spec()
    f = mm.mm_truth_table(spec)
    assert core.sensitivity(f)[0] == 7
    assert core.pdeg(f) == 6
    assert spec.leaf(mm.bits_to_index("110")) == core.variable_fn(4, 3)
    assert spec.leaf(mm.bits_to_index("100")) == ~core.parity_fn(4)


def test_json_roundtrip():
    spec = mm.build_th1(5, 6)
    back = mm.MMSpec.from_json(spec.to_json())
    assert mm.mm_truth_table(back) == mm.mm_truth_table(spec)


@pytest.mark.parametrize("n1,n2", [(3, 4), (4, 4), (5, 6), (6, 6), (7, 8), (8, 8), (9, 10), (10, 10)])
def test_th1_builder(n1, n2):
    spec = mm.build_th1(n1, n2)
    assert mm.check_mm_family(spec)
    f = mm.mm_truth_table(spec)
    n = n1 + n2
    assert core.sensitivity_at(f, [1] * n) == n
    assert core.pdeg(f) <= n - 1


def test_th1_sizes():
    with pytest.raises(ValueError):
        mm.build_th1(4, 5)
    with pytest.raises(ValueError):
        mm.build_th1(2, 2)


def test_cube_polynomial_matches_points():
    cube = mm.Cube(frozenset({1, 3}), frozenset({2}))
    pts = set(cube.points(4))
    poly = mm.cube_polynomial(cube)
    for a in range(16):
        val = sum(c for mono, c in poly.items() if all((a >> (i - 1)) & 1 for i in mono))
        assert val == (a in pts)


def test_ladder_10_10():
    spec, ledger, z = mm.ladder_reduce(10, 10)
    assert z == 2
    f = mm.mm_truth_table(spec)
    assert core.sensitivity_at(f, [1] * 20) == 20
    assert core.pdeg(f) <= 18
    assert ledger_is_valid(ledger, 2, 1)


@pytest.mark.parametrize("n1,n2,z", [(3, 4, 0), (5, 6, 1), (7, 8, 1)])
def test_ladder_small(n1, n2, z):
    spec, ledger, got = mm.ladder_reduce(n1, n2)
    assert got == z == mm.ladder_budget(n1)
    assert ledger_is_valid(ledger, 2, 1)


def test_sym_k():
    for m in range(1, 13):
        for k in range(1, min(m, 4) + 1):
            assert core.is_k_order_sensitive_at(mm.sym_k(m, k), [0] * m, k)
    monos = core.mobius_anf(mm.sym_k(4, 2)).monomials()
    assert sorted(monos) == sorted([(i,) for i in range(1, 5)] + [(i, j) for i in range(1, 5) for j in range(i + 1, 5)])


@pytest.mark.parametrize("n1,n2,k", [(4, 4, 1), (5, 5, 2), (6, 6, 3), (8, 8, 2), (10, 10, 3)])
def test_build_korder(n1, n2, k):
    f = mm.mm_truth_table(mm.build_korder(n1, n2, k))
    assert core.is_k_order_sensitive_at(f, mm.korder_witness(n1, n2), k)


def test_korder_ladder_k1_cross_check():
    _, ledger, p = mm.ladder_reduce_korder(10, 10, 1)
    assert p == 2
    assert ledger_is_valid(ledger, 2, 1)


def test_korder_budget():
    assert mm.korder_budget(12, 2) == 1
    assert mm.korder_budget(10, 1) == mm.ladder_budget(10) == 2
