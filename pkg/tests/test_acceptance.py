"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Expected values are compared exactly.  A criterion whose expected count does
not match what exhaustive enumeration gives is left failing on purpose.
"""

import itertools
import json
import subprocess
import sys
import time

import numpy as np
import pytest

from boolsens import amplify, circuits, core, feasibility as F, mm, repro, search
from boolsens.core import TruthTable

F3 = TruthTable.from_int(3, 126)  # maj_3 xor parity_3: (3,1,2)-function at 000


@pytest.fixture
def verdict(capsys):
    def report(num, title, ok, detail, seconds=None):
        timing = f" [{seconds:.1f} s]" if seconds is not None else ""
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} #{num} {title}: {detail}{timing}")
        assert ok, detail
    return report


def test_01_four_variable_counts(verdict):
    t0 = time.perf_counter()
    a = search.count_profiles_n4()
    b = search.count_profiles_n4_via_duals()
    dt = time.perf_counter() - t0
    ok = (a[1], a[2], a[3]) == (3760, 256, 0) and a == b and dt < 30
    verdict(1, "[4,k,0] counts", ok, f"{a[1]}/{a[2]}/{a[3]}, pipelines agree={a == b}", dt)


def test_02_five_variable_counts(verdict):
    t0 = time.perf_counter()
    c = search.count_profiles_n5()
    dt = time.perf_counter() - t0
    got = (c[1], c[2], c[3], c[4])
    ok = got == (12304, 2464, 0, 0) and dt < 600
    verdict(2, "[5,k,1] counts", ok, f"expected 12304/2464/0/0, got {'/'.join(map(str, got))}", dt)


def test_03_six_variable_counts(verdict):
    t0 = time.perf_counter()
    r = search.search_n6()
    dt = time.perf_counter() - t0
    got = (r.counts[1], r.counts[2], r.counts[3])
    ok = got == (33632, 192, 0)
    verdict(3, "[6,k,2] counts", ok,
            f"expected 33632/192/0, got {'/'.join(map(str, got))} from {r.candidate_pairs} candidate pairs", dt)


def test_04_feasibility_encoder(verdict):
    t0 = time.perf_counter()
    mismatches = []
    for n in range(2, 6):
        for p in range(n):
            for x in range(1 << n):
                v = F.solve_feasibility(F.encode_existence(n, p, x)).verdict
                if (v == F.FEASIBLE) != F.exists_fully_sensitive(n, p, x):
                    mismatches.append((n, p, x, v))
    v412 = F.solve_feasibility(F.encode_existence(4, 2, 0)).verdict
    s = F.encode_existence(4, 3, 15)
    res = F.solve_feasibility(s)
    f = F.decode_solution(s, res.assignment) if res else None
    decoded = f is not None and core.pdeg(f) <= 3 and core.sensitivity_at(f, (1, 1, 1, 1)) == 4
    dt = time.perf_counter() - t0
    ok = not mismatches and v412 == F.INFEASIBLE and decoded and dt < 300
    verdict(4, "encoder vs oracle, n <= 5", ok,
            f"{len(mismatches)} mismatches, (4,1,2) {v412}, (4,1,3) decoded={decoded}", dt)


@pytest.mark.extended
def test_04b_seven_variable_verdict(verdict):
    t0 = time.perf_counter()
    res = F.solve_feasibility(F.encode_existence(7, 3, 0), budget=10**8)
    ok = res.verdict == F.INFEASIBLE
    verdict("4b", "(7,1,3) internal solver", ok, f"verdict {res.verdict} after {res.nodes} nodes",
            time.perf_counter() - t0)


def test_05a_rotsym_seven(verdict):
    t0 = time.perf_counter()
    found = search.rotsym_search(7, 1, 3)
    dt = time.perf_counter() - t0
    ok = len(found) == 12 and dt < 60
    verdict("5a", "rotation-symmetric [7,1,3]", ok, f"count {len(found)}", dt)


def test_05b_rotsym_eight(verdict):
    t0 = time.perf_counter()
    a = search.rotsym_search(8, 3, 1)
    b = search.rotsym_search(8, 3, 2)
    full = (1 << 256) - 1
    classes = len({min(t.to_int(), t.to_int() ^ full) for t in a})
    ok = len(a) == 12 and len(b) == 0
    verdict("5b", "rotation-symmetric [8,1,3], [8,2,3]", ok,
            f"expected 12 and 0, got {len(a)} ({classes} up to complement) and {len(b)}",
            time.perf_counter() - t0)


@pytest.mark.extended
def test_05c_rotsym_nine_ten(verdict):
    t0 = time.perf_counter()
    a = search.rotsym_search(9, 4, 1)
    b = search.rotsym_search(9, 4, 2)
    nls = sorted({core.nonlinearity(t) for t in a})
    c = search.rotsym_search(10, 5, 1)
    ok = len(a) == 29 and len(b) == 27 and 224 in nls and len(c) == 0
    verdict("5c", "rotation-symmetric n = 9, 10", ok,
            f"[9,1,4]={len(a)}, [9,2,4]={len(b)}, NL {nls}, [10,1,5]={len(c)}", time.perf_counter() - t0)


def test_06_nine_variable_sweep(verdict):
    t0 = time.perf_counter()
    assert core.pdeg(F3) == 2 and core.sensitivity(F3)[0] == 3
    sweep = amplify.g9_sweep(F3)
    res = {r["resiliency"] for r in sweep}
    nls = {r["nonlinearity"] for r in sweep}
    dt = time.perf_counter() - t0
    ok = len(sweep) == 8 and res == {4} and nls == {96, 192} and dt < 10
    verdict(6, "g9 sweep", ok, f"resiliency {sorted(res)}, NL {sorted(nls)}", dt)


def _random_weight_point(rng, n, lo):
    w = int(rng.integers(lo, n + 1))
    return sum(1 << int(i) for i in rng.choice(n, w, replace=False))


def test_07_modified_amplification(verdict):
    t0 = time.perf_counter()
    notes, ok = [], True
    # d = 3: exhaustive on 9 variables
    for k, (f, y) in ((1, amplify.order_k_base(1)), (2, (F3, (0, 0, 0)))):
        assert core.is_k_order_sensitive_at(f, y, k)
        cf = amplify.modified_power(f, 2, y)
        t = cf.truth_table()
        good = core.is_k_order_sensitive_at(t, cf.witness_point(), k) and core.pdeg(t) == core.pdeg(f) ** 2
        ok &= good
        notes.append(f"d=3 k={k}: {good}")
    # d = 6: 36 variables, point evaluation and cascaded Walsh samples
    base = repro.six_variable_base()
    y = (0,) * 6
    pd = core.pdeg(base)
    cf = amplify.modified_power(base, 2, y)
    for k in (1, 2):
        good = core.is_k_order_sensitive_at(base, y, k) and amplify.sensitivity_order_at_witness(cf, k)
        ok &= good
        notes.append(f"d=6 k={k}: {good}")
    rng = np.random.default_rng(36)
    zeros = sum(amplify.composed_spectrum_at(cf, _random_weight_point(rng, 36, pd * pd + 1)) == 0 for _ in range(200))
    ok &= zeros == 200
    notes.append(f"{zeros}/200 zeros above weight {pd * pd}")
    dt = time.perf_counter() - t0
    verdict(7, "modified amplification", ok and dt < 300, ", ".join(notes), dt)


def test_08_circuits(verdict):
    t0 = time.perf_counter()
    base = circuits.synth_from_anf(F3)
    sb = circuits.stats(base)
    amp = circuits.layered_amplify(base, 2)
    sa = circuits.stats(amp)
    g = circuits.append_parity(amp)
    sim = circuits.simulate_table(g) == core.dual(amplify.plain_power(F3, 2).truth_table())
    shape = True
    for d, u in itertools.product((2, 3, 4), (1, 2, 3)):
        if d**u > 20:
            continue
        fb = circuits.synth_from_anf(core.majority_fn(d) if d > 2 else core.and_fn(2))
        net = circuits.layered_amplify(fb, u)
        shape &= net.instances == (d**u - 1) // (d - 1) == circuits.instance_count(d, u)
        shape &= circuits.stats(net).depth == u * circuits.stats(fb).depth
    dt = time.perf_counter() - t0
    ok = ((sb.xor_count, sb.and_count) == (5, 3) and (sa.xor_count, sa.and_count) == (20, 12)
          and circuits.stats(g).total == 41 and sim and shape and dt < 10)
    verdict(8, "layered circuits", ok,
            f"base {sb.xor_count} XOR/{sb.and_count} AND, u=2 {sa.xor_count} XOR/{sa.and_count} AND, "
            f"{circuits.stats(g).total} with parity, simulation={sim}, instances/depth={shape}", dt)


def test_09_cascaded_walsh(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(9)
    bad = 0
    for _ in range(1000):
        s = int(rng.integers(1, 7))
        k = int(rng.integers(1, 12 // s + 1))
        outer = TruthTable(s, rng.integers(0, 2, 1 << s, dtype=np.uint8))
        inners = [TruthTable(k, rng.integers(0, 2, 1 << k, dtype=np.uint8)) for _ in range(s)]
        comps = rng.integers(0, 2, s)
        exact = core.walsh_transform(
            TruthTable(s * k, amplify.compose_tables(outer, [g.bits ^ c for g, c in zip(inners, comps)]))
        ).coeffs
        ws, gs = core.walsh_transform(outer), [core.walsh_transform(g) for g in inners]
        bad += not np.array_equal(amplify.cascaded_spectrum(ws, gs, comps), exact)
        for w in rng.integers(0, 1 << (s * k), 4):
            bad += amplify.cascaded_walsh(ws, gs, comps, int(w)) != exact[w]
    # bounds on every 2- and 3-variable self-composition and on balanced cascades
    bound_bad = 0
    for n in (2, 3):
        for word in range(1 << (1 << n)):
            f = TruthTable.from_int(n, word)
            sp = core.walsh_transform(f)
            m = core.resiliency_order(sp)
            b = amplify.cascade_bounds(core.nonlinearity(sp), n, n, core.nonlinearity(sp), m, core.pdeg(sp) + 1)
            g = amplify.plain_power(f, 2).truth_table()
            bound_bad += core.resiliency_order(core.dual(g)) < b["support_resiliency"]
            if m >= 0:
                bound_bad += core.resiliency_order(g) < b["resiliency_lower"]
                bound_bad += core.nonlinearity(g) < b["nl_lower"]
    bal4 = search.balanced_tables(3)
    nl_viol = {"balanced outer": 0, "unbalanced outer": 0, "unbalanced, w != 0": 0}
    for _ in range(300):
        s, k = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        outer = TruthTable(s, rng.integers(0, 2, 1 << s, dtype=np.uint8))
        inners = [TruthTable.from_int(3, int(rng.choice(bal4))) for _ in range(s)] if k == 3 else \
            [TruthTable(2, np.array(rng.permutation([0, 0, 1, 1]), dtype=np.uint8)) for _ in range(s)]
        h = TruthTable(s * k, amplify.compose_tables(outer, [g.bits for g in inners]))
        lower = amplify.cascade_bounds(core.nonlinearity(outer), s, k, min(map(core.nonlinearity, inners)), 0, 1)
        if core.nonlinearity(h) < lower["nl_lower"]:
            bound_bad += 1
            nl_viol["balanced outer" if core.is_balanced(outer) else "unbalanced outer"] += 1
            away = (1 << (s * k - 1)) - int(np.abs(core.walsh_transform(h).coeffs[1:]).max()) // 2
            nl_viol["unbalanced, w != 0"] += away < lower["nl_lower"]
    dt = time.perf_counter() - t0
    ok = bad == 0 and bound_bad == 0 and dt < 300
    verdict(9, "cascaded Walsh", ok,
            f"{bad} spectrum mismatches, {bound_bad} bound violations (NL bound {nl_viol})", dt)


def test_10_sixteen_variable_profile(verdict):
    t0 = time.perf_counter()
    r = amplify.sixteen_var_sweep()
    word = r["first_base"].get((11, 24576))
    exact = False
    if word is not None:
        g = core.dual(amplify.plain_power(TruthTable.from_int(4, word), 2).truth_table())
        sp = core.walsh_transform(g)
        exact = core.resiliency_order(sp) == 11 and core.nonlinearity(sp) == 24576
    dt = time.perf_counter() - t0
    ok = exact and dt < 900
    verdict(10, "16-variable sweep", ok,
            f"{r['bases_scored']} balanced bases, 11-resilient NL values {r['nl_values_by_resiliency'].get(11)}, "
            f"NL 24576 base {word} verified={exact}", dt)


TABLE2_ROWS = {  # x1x2x3 -> (y-coefficients y1..y4, constant)
    "000": ("0110", 0), "001": ("1000", 0), "010": ("0100", 0), "011": ("1100", 0),
    "100": ("1111", 1), "101": ("1010", 0), "110": ("0010", 0), "111": ("1111", 0),
}


def test_11_table2_and_builder(verdict):
    t0 = time.perf_counter()
    spec = mm.table2_spec()
    f = mm.mm_truth_table(spec)
    rows_ok = True
    for xs, (ys, c) in TABLE2_ROWS.items():
        a = mm.bits_to_index(xs)
        leaf = TruthTable.from_function(4, lambda y: sum(int(b) * v for b, v in zip(ys, y)) % 2 ^ c)
        rows_ok &= np.array_equal(f.bits.reshape(16, 8)[:, a], leaf.bits)
    s7, p7 = core.sensitivity(f)[0], core.pdeg(f)
    built = []
    for n1 in range(3, 12):
        for n2 in (n1, n1 + 1):
            if n2 % 2 or n1 + n2 > 22:
                continue
            g = mm.mm_truth_table(mm.build_th1(n1, n2))
            n = n1 + n2
            built.append((n, core.sensitivity_at(g, [1] * n) == n and core.pdeg(g) <= n - 1))
    dt = time.perf_counter() - t0
    ok = rows_ok and s7 == 7 and p7 == 6 and all(b for _, b in built) and dt < 60
    verdict(11, "MM Table 2 and builder", ok,
            f"rows={rows_ok}, s={s7}, pdeg={p7}, builder n in {[n for n, _ in built]} all ok="
            f"{all(b for _, b in built)}", dt)


def _ledger_valid(ledger, zeros_needed, sign_factor):
    cubes = [mm.Cube(frozenset(e["ones"]), frozenset(e["zeros"])) for e in ledger.entries]
    pairwise = all(a.disjoint(b) for i, a in enumerate(cubes) for b in cubes[i + 1:])
    per_entry = all(
        len(e["zeros"]) == zeros_needed and set(e["zeros"]) <= set(e["cancelled"])
        and e["eps"] == -e["sign"] * sign_factor
        for e in ledger.entries
    )
    return pairwise and per_entry


def test_12_mm_ladder(verdict):
    t0 = time.perf_counter()
    spec, ledger, z = mm.ladder_reduce(10, 10)
    f = mm.mm_truth_table(spec)
    s, p = core.sensitivity_at(f, [1] * 20), core.pdeg(f)
    valid = _ledger_valid(ledger, 2, 1)
    dt = time.perf_counter() - t0
    ok = z == 2 and s == 20 and p <= 18 and valid and dt < 120
    verdict(12, "MM ladder (10,10)", ok, f"z={z}, s={s}, pdeg={p}, ledger valid={valid}", dt)


def test_13_sym_and_korder(verdict):
    t0 = time.perf_counter()
    sym_bad = [(m, k) for m in range(1, 13) for k in range(1, min(m, 4) + 1)
               if not core.is_k_order_sensitive_at(mm.sym_k(m, k), [0] * m, k)]
    kbad, count = [], 0
    for n1 in range(1, 20):
        for n2 in range(1, 21 - n1):
            for k in range(1, min(n1, n2, 3) + 1):
                count += 1
                f = mm.mm_truth_table(mm.build_korder(n1, n2, k))
                if not core.is_k_order_sensitive_at(f, mm.korder_witness(n1, n2), k):
                    kbad.append((n1, n2, k))
    dt = time.perf_counter() - t0
    ok = not sym_bad and not kbad and dt < 120
    verdict(13, "sym_k and k-order MM", ok, f"sym_k failures {sym_bad}, k-order failures {len(kbad)}/{count}", dt)


_KORDER_SCRIPT = """
import json, resource
from boolsens import core, mm
spec, ledger, p = mm.ladder_reduce_korder(12, 12, 2)
f = mm.mm_truth_table(spec)
out = {"p": p, "order2": core.is_k_order_sensitive_at(f, mm.korder_witness(12, 12), 2),
       "pdeg": core.pdeg(core.walsh_transform(f)),
       "rss_mib": resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024}
print(json.dumps(out))
"""


def test_14_korder_ladder(verdict):
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-c", _KORDER_SCRIPT], capture_output=True, text=True, check=True)
    r = json.loads(proc.stdout)
    dt = time.perf_counter() - t0
    ok = r["p"] >= 1 and r["order2"] and r["pdeg"] <= 23 and r["rss_mib"] <= 1024 and dt < 600
    verdict(14, "k-order ladder (12,12,2)", ok,
            f"p={r['p']}, order 2={r['order2']}, pdeg={r['pdeg']}, peak RSS {r['rss_mib']:.0f} MiB", dt)


def _properties(f):
    n = f.n
    sp = core.walsh_transform(f)
    g = core.dual(f)
    return (
        int((sp.coeffs.astype(np.int64) ** 2).sum()) == 1 << (2 * n)
        and core.resiliency_order(g) == n - core.pdeg(sp) - 1
        and core.algebraic_degree(f) <= core.pdeg(sp)
        and core.inverse_walsh(sp) == f
        and core.anf_to_table(core.mobius_anf(f)) == f
    )


def test_15_property_suites(verdict):
    t0 = time.perf_counter()
    bad = 0
    for n in range(1, 5):
        for w in range(1 << (1 << n)):
            f = TruthTable.from_int(n, w)
            bad += not _properties(f)
            k = core.max_sensitivity_order(f)[0]
            bad += core.max_dual_sensitivity_order(core.dual(f))[0] != k
    rng = np.random.default_rng(15)
    for n in range(5, 9):
        for _ in range(2500):
            f = TruthTable(n, rng.integers(0, 2, 1 << n, dtype=np.uint8))
            bad += not _properties(f)
            if n <= 6 and _ < 100:
                bad += core.max_dual_sensitivity_order(core.dual(f))[0] != core.max_sensitivity_order(f)[0]
    lemma = True
    for n in (3, 4):
        best = max(core.max_dual_sensitivity_order(TruthTable.from_int(n, w))[0]
                   for w in range(1 << (1 << n)) if bin(w).count("1") == 1 << (n - 1))
        lemma &= best == (n - 1 if n % 2 else n - 2)
        g = amplify.max_order_balanced(n)
        lemma &= core.is_balanced(g) and core.max_dual_sensitivity_order(g)[0] == best
    spot = amplify.no_high_order_spot_check(d_max=3, u=2)
    dt = time.perf_counter() - t0
    ok = bad == 0 and lemma and not spot and dt < 600
    verdict(15, "property suites", ok,
            f"{bad} property failures, maximal-order lemma={lemma}, composition spot-check violations={len(spot)}", dt)
