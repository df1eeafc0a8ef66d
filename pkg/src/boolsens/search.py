"""Exhaustive and structure-pruned searches over small Boolean functions.

Tables with n <= 6 are handled bit-sliced: one uint64 word per function,
bit i holding f(i).  Walsh conditions are checked with small dense
Hadamard products; dual-sensitivity conditions with word-level flips.
"""

from __future__ import annotations

import itertools
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numba
import numpy as np

from .core import CapacityError, TruthTable, popcounts, walsh_transform

# -- bit-sliced helpers (n <= 6) --------------------------------------------

_U64 = np.uint64


def _full(n: int) -> np.uint64:
    return _U64((1 << (1 << n)) - 1)


def _low_mask(n: int, i: int) -> np.uint64:
    """Points of F_2^n whose i-th coordinate (0-based) is zero."""
    m = 0
    for x in range(1 << n):
        if not (x >> i) & 1:
            m |= 1 << x
    return _U64(m)


def flip_var(tables: np.ndarray, n: int, i: int) -> np.ndarray:
    """Tables of x -> f(x xor e_i)."""
    m = _low_mask(n, i)
    h = _U64(1 << i)
    return ((tables & m) << h) | ((tables >> h) & m)


def flip_set(tables: np.ndarray, n: int, subset) -> np.ndarray:
    for i in subset:
        tables = flip_var(tables, n, i)
    return tables


def dual_order_masks(tables: np.ndarray, n: int, kmax: int) -> list[np.ndarray]:
    """masks[k-1] has bit x set iff the k-th order dual condition holds at x."""
    full = _full(n)
    alive = np.full(tables.shape, full, dtype=_U64)
    out = []
    for k in range(1, kmax + 1):
        for subset in itertools.combinations(range(n), k):
            d = tables ^ flip_set(tables, n, subset)
            alive &= d if k % 2 == 0 else (~d) & full
        out.append(alive.copy())
    return out


def dual_orders(tables: np.ndarray, n: int) -> np.ndarray:
    orders = np.zeros(tables.shape, dtype=np.int8)
    for k, mask in enumerate(dual_order_masks(tables, n, n), start=1):
        orders[mask != 0] = k
    return orders


def _hadamard(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    return 1 - 2 * (popcounts(n)[idx[:, None] & idx[None, :]].astype(np.int64) & 1)


def walsh_rows(tables: np.ndarray, n: int) -> np.ndarray:
    bits = (tables[:, None] >> np.arange(1 << n, dtype=_U64)) & _U64(1)
    return (1 - 2 * bits.astype(np.int64)) @ _hadamard(n)


def _weight_columns(n: int, weights) -> np.ndarray:
    pc = popcounts(n)
    return np.flatnonzero(np.isin(pc, list(weights)))


def all_tables(n: int) -> np.ndarray:
    return np.arange(1 << (1 << n), dtype=_U64)


def balanced_tables(n: int) -> np.ndarray:
    t = all_tables(n)
    return t[walsh_rows(t, n)[:, 0] == 0]


# -- n = 4 --------------------------------------------------------------------

def count_profiles_n4() -> dict[int, int]:
    """#[4,k,0]-functions (dual order at least k) for k = 1..4, all 2^16 tables."""
    tables = balanced_tables(4)
    orders = dual_orders(tables, 4)
    return {k: int((orders >= k).sum()) for k in range(1, 5)}


def count_profiles_n4_via_duals() -> dict[int, int]:
    """Independent route: count (4,k,3)-functions, then map through f -> f xor L_4.

    Works on an explicit 2^16 x 16 bit matrix with per-point flip checks and a
    dense Walsh product; shares no code with the bit-sliced path.
    """
    n, size = 4, 16
    idx = np.arange(size)
    rows = ((np.arange(1 << size)[:, None] >> idx) & 1).astype(np.int8)
    signs = 1 - 2 * rows.astype(np.int64)
    top = (-1) ** popcounts(n).astype(np.int64)
    low_degree = signs @ top == 0  # W_f(1111) = 0  <=>  pdeg <= 3
    counts = {}
    alive = np.ones(rows.shape, dtype=bool)
    for k in range(1, n + 1):
        for subset in itertools.combinations(range(n), k):
            mask = sum(1 << j for j in subset)
            alive &= rows != rows[:, idx ^ mask]
        counts[k] = int((alive.any(axis=1) & low_degree).sum())
    return counts


# -- n = 5 --------------------------------------------------------------------

def _group_by(keys: np.ndarray) -> dict[tuple, np.ndarray]:
    groups = defaultdict(list)
    for i, key in enumerate(map(tuple, keys)):
        groups[key].append(i)
    return {k: np.array(v) for k, v in groups.items()}


def _matched_keys(groups: dict) -> list[tuple]:
    return sorted(k for k in groups if tuple(-v for v in k) in groups)


def _chunks(items: list, parts: int) -> list[list]:
    parts = max(1, min(parts, len(items) or 1))
    return [items[i::parts] for i in range(parts)]


def _run_parts(fn, jobs: list, workers: int) -> list:
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs))
    return [fn(job) for job in jobs]


def _pair_tables(lo: np.ndarray, hi: np.ndarray, half_bits: int) -> np.ndarray:
    return (lo[:, None] | (hi[None, :] << _U64(half_bits))).ravel()


def _one_resilient_part(job) -> np.ndarray:
    tables, groups, keys = job
    out = [_pair_tables(tables[groups[k]], tables[groups[tuple(-v for v in k)]], 16) for k in keys]
    return np.concatenate(out) if out else np.zeros(0, dtype=_U64)


def one_resilient_n5(partitions: int = 1, workers: int = 1) -> np.ndarray:
    """Every 1-resilient 5-variable table, sorted.

    Halves f1 (x5 = 0) and f2 (x5 = 1) must both be balanced with
    W_f2(e_i) = -W_f1(e_i); the join is keyed on the weight-1 spectrum.
    """
    bal = balanced_tables(4)
    w1 = walsh_rows(bal, 4)[:, _weight_columns(4, [1])]
    groups = _group_by(w1)
    keys = _matched_keys(groups)
    jobs = [(bal, groups, part) for part in _chunks(keys, partitions)]
    return np.sort(np.concatenate(_run_parts(_one_resilient_part, jobs, workers)))


def count_profiles_n5(partitions: int = 1, workers: int = 1) -> dict[int, int]:
    """#[5,k,1]-functions (dual order at least k) for k = 1..5."""
    orders = dual_orders(one_resilient_n5(partitions, workers), 5)
    return {k: int((orders >= k).sum()) for k in range(1, 6)}


def complement_classes(tables: np.ndarray, n: int) -> int:
    """Number of classes of the given table set under f ~ f xor 1."""
    full = _full(n)
    return int(np.unique(np.minimum(tables, tables ^ full)).size)


# -- n = 6 --------------------------------------------------------------------

@dataclass
class N6Result:
    counts: dict[int, int]
    case_split: dict[str, int]
    functions: list[int] = field(default_factory=list)
    candidate_pairs: int = 0
    seconds: float = 0.0


def _n6_part(job):
    r1, ds, two_res, groups, keys, keep = job
    counts = np.zeros(7, dtype=np.int64)
    split = {"both_1_resilient": 0, "both_2_resilient": 0}
    found = []
    pairs_seen = 0
    for key in keys:
        a = groups[key]
        b = groups[tuple(-v for v in key)]
        a_ds, a_rest = a[ds[a]], a[~ds[a]]
        blocks = [_pair_tables(r1[a_ds], r1[b], 32), _pair_tables(r1[a_rest], r1[b[ds[b]]], 32)]
        cand = np.concatenate(blocks)
        pairs_seen += cand.size
        if cand.size == 0:
            continue
        masks = dual_order_masks(cand, 6, 1)
        hit = cand[masks[0] != 0]
        if hit.size == 0:
            continue
        orders = dual_orders(hit, 6)
        for k in range(7):
            counts[k] += int((orders >= k).sum())
        split["both_2_resilient" if two_res[a[0]] else "both_1_resilient"] += hit.size
        if keep:
            found.append(hit)
    funcs = np.concatenate(found) if found else np.zeros(0, dtype=_U64)
    return counts, split, funcs, pairs_seen


def search_n6(partitions: int = 1, workers: int = 1, keep_functions: bool = False) -> N6Result:
    """#[6,k,2]-functions via pairs of 1-resilient 5-variable halves.

    f is 2-resilient iff both halves are 1-resilient and W_f2(u) = -W_f1(u) on
    weight-2 points; a fully dual sensitive f needs a fully dual sensitive half
    (the generator only emits such pairs) whose value agrees across x6.
    """
    t0 = time.perf_counter()
    r1 = one_resilient_n5()
    spectra = walsh_rows(r1, 5)
    two_res = np.all(spectra[:, _weight_columns(5, [2])] == 0, axis=1)
    ds = dual_order_masks(r1, 5, 1)[0] != 0
    groups = _group_by(spectra[:, _weight_columns(5, [2])])
    keys = _matched_keys(groups)
    jobs = [(r1, ds, two_res, groups, part, keep_functions) for part in _chunks(keys, partitions)]
    counts = np.zeros(7, dtype=np.int64)
    split = {"both_1_resilient": 0, "both_2_resilient": 0}
    funcs, pairs = [], 0
    for c, s, f, p in _run_parts(_n6_part, jobs, workers):
        counts += c
        for k in split:
            split[k] += s[k]
        funcs.append(f)
        pairs += p
    functions = sorted(int(t) for t in np.concatenate(funcs)) if keep_functions else []
    return N6Result(
        counts={k: int(counts[k]) for k in range(1, 7)},
        case_split=split,
        functions=functions,
        candidate_pairs=pairs,
        seconds=time.perf_counter() - t0,
    )


def table_from_word(word: int, n: int) -> TruthTable:
    return TruthTable.from_int(n, int(word))


# -- rotation symmetric functions ---------------------------------------------

@dataclass(frozen=True)
class RotSymClass:
    n: int
    orbits: list[tuple[int, ...]]
    representatives: list[int]
    orbit_of: np.ndarray


def rotate(x: int, n: int) -> int:
    """Cyclic shift of coordinates: (x_1..x_n) -> (x_n, x_1, .., x_{n-1})."""
    return ((x << 1) | (x >> (n - 1))) & ((1 << n) - 1)


def rotsym_orbits(n: int) -> RotSymClass:
    if not 2 <= n <= 16:
        raise ValueError("rotation orbits are supported for 2 <= n <= 16")
    orbit_of = np.full(1 << n, -1, dtype=np.int64)
    orbits = []
    for x in range(1 << n):
        if orbit_of[x] >= 0:
            continue
        members = []
        y = x
        while orbit_of[y] < 0:
            orbit_of[y] = len(orbits)
            members.append(y)
            y = rotate(y, n)
        orbits.append(tuple(sorted(members)))
    reps = [orb[0] for orb in orbits]
    return RotSymClass(n, orbits, reps, orbit_of)


def necklace_count(n: int) -> int:
    """Binary necklaces of length n: (1/n) sum_{d | n} phi(d) 2^(n/d)."""
    from math import gcd

    return sum(1 << gcd(i, n) for i in range(n)) // n


@numba.njit(cache=True)
def _rotsym_dfs(coef, order, target, node_limit):
    """All s in {+1,-1}^r with coef @ s == target, by DFS in the given order."""
    n_eq, n_orb = coef.shape
    sols = np.zeros((16, n_orb), dtype=np.uint8)
    if n_orb == 0:
        for e in range(n_eq):
            if target[e] != 0:
                return sols[:0], 0, True
        return sols[:1], 0, True
    # suffix sums of |coef| over the branching order
    rest = np.zeros((n_orb + 1, n_eq), dtype=np.int64)
    for d in range(n_orb - 1, -1, -1):
        o = order[d]
        for e in range(n_eq):
            rest[d, e] = rest[d + 1, e] + abs(coef[e, o])
    partial = np.zeros((n_orb + 1, n_eq), dtype=np.int64)
    for e in range(n_eq):
        partial[0, e] = -target[e]
        if abs(partial[0, e]) > rest[0, e]:
            return sols[:0], 0, True
    choice = np.zeros(n_orb, dtype=np.int8)
    n_sol = 0
    nodes = 0
    depth = 0
    choice[0] = -1
    while depth >= 0:
        choice[depth] += 1
        if choice[depth] > 1:
            depth -= 1
            continue
        nodes += 1
        if node_limit > 0 and nodes > node_limit:
            return sols[:n_sol], nodes, False
        o = order[depth]
        sign = 1 - 2 * choice[depth]
        ok = True
        for e in range(n_eq):
            v = partial[depth, e] + sign * coef[e, o]
            partial[depth + 1, e] = v
            if abs(v) > rest[depth + 1, e]:
                ok = False
                break
        if not ok:
            continue
        if depth == n_orb - 1:
            if n_sol == sols.shape[0]:
                grown = np.zeros((2 * n_sol, n_orb), dtype=np.uint8)
                grown[:n_sol] = sols
                sols = grown
            for d in range(n_orb):
                sols[n_sol, order[d]] = choice[d]
            n_sol += 1
            continue
        depth += 1
        choice[depth] = -1
    return sols[:n_sol], nodes, True


def _resiliency_coefficients(cls: RotSymClass, m: int) -> np.ndarray:
    """Row per orbit representative u with wt(u) <= m: orbit-summed signs (-1)^{u.x}."""
    n = cls.n
    pc = popcounts(n)
    us = [u for u in cls.representatives if pc[u] <= m]
    signs = 1 - 2 * (pc[np.bitwise_and.outer(np.array(us, dtype=np.int64), np.arange(1 << n))] & 1).astype(np.int64)
    coef = np.zeros((len(us), len(cls.orbits)), dtype=np.int64)
    np.add.at(coef.T, cls.orbit_of, signs.T)
    return coef


def _solve_classes(coef: np.ndarray, node_limit: int) -> np.ndarray:
    sizes = np.abs(coef).sum(axis=0)
    order = np.array(sorted(range(coef.shape[1]), key=lambda o: (-sizes[o], o)), dtype=np.int64)
    target = np.zeros(coef.shape[0], dtype=np.int64)
    sols, _, complete = _rotsym_dfs(coef, order, target, node_limit)
    if not complete:
        raise RuntimeError("rotation-symmetric search exceeded its node limit")
    return sols


def rotsym_resilient(n: int, m: int, node_limit: int = 0) -> tuple[np.ndarray, RotSymClass]:
    """All m-resilient rotation-symmetric tables on n variables (rows of 2^n bits)."""
    if n > 10:
        raise CapacityError("rotation-symmetric search is limited to n <= 10")
    cls = rotsym_orbits(n)
    sols = _solve_classes(_resiliency_coefficients(cls, m), node_limit)
    return sols[:, cls.orbit_of].astype(np.uint8), cls


def _orbit_links(cls: RotSymClass, x: int, k: int):
    """Parity union-find of orbit values forced by dual order >= k at x.

    Returns (class id per orbit, parity per orbit) or None on a contradiction.
    Odd flip sets keep the value, even flip sets change it.
    """
    r = len(cls.orbits)
    parent = list(range(r))
    par = [0] * r  # value(o) = value(parent) xor par

    def find(o):
        if parent[o] == o:
            return o, 0
        root, p = find(parent[o])
        parent[o] = root
        par[o] ^= p
        return root, par[o]

    base = int(cls.orbit_of[x])
    for size in range(1, k + 1):
        for subset in itertools.combinations(range(cls.n), size):
            y = x ^ sum(1 << j for j in subset)
            o = int(cls.orbit_of[y])
            want = 0 if size % 2 else 1
            ra, pa = find(base)
            rb, pb = find(o)
            if ra == rb:
                if pa ^ pb != want:
                    return None
                continue
            parent[rb] = ra
            par[rb] = pa ^ pb ^ want
    roots, parities = zip(*(find(o) for o in range(r)))
    ids = {root: i for i, root in enumerate(sorted(set(roots)))}
    return np.array([ids[t] for t in roots]), np.array(parities, dtype=np.uint8)


def rotsym_search(n: int, m: int, k: int, node_limit: int = 0) -> list[TruthTable]:
    """Rotation-symmetric [n,k,m]-functions: m-resilient, dual order at least k.

    For each witness orbit the dual-order conditions tie orbit values together
    (equal or opposite); the resiliency DFS then runs over the merged classes.
    k = 0 gives every m-resilient rotation-symmetric function.
    """
    if n > 10:
        raise CapacityError("rotation-symmetric search is limited to n <= 10")
    if k == 0:
        rows, _ = rotsym_resilient(n, m, node_limit)
        return sorted((TruthTable(n, r) for r in rows), key=TruthTable.to_int)
    cls = rotsym_orbits(n)
    coef = _resiliency_coefficients(cls, m)
    found = {}
    for x in cls.representatives:
        links = _orbit_links(cls, x, k)
        if links is None:
            continue
        ids, parity = links
        sign = (1 - 2 * parity.astype(np.int64))
        merged = np.zeros((coef.shape[0], ids.max() + 1), dtype=np.int64)
        np.add.at(merged.T, ids, (coef * sign).T)
        keep = np.any(merged != 0, axis=0)
        # classes with all-zero coefficients are free; enumerate both values
        sols = _solve_classes(merged[:, keep], node_limit)
        free = np.flatnonzero(~keep)
        for row in sols:
            for extra in itertools.product((0, 1), repeat=free.size):
                vals = np.zeros(merged.shape[1], dtype=np.uint8)
                vals[keep] = row
                vals[free] = extra
                orbit_vals = vals[ids] ^ parity
                table = orbit_vals[cls.orbit_of]
                found[table.tobytes()] = table
    if not found:
        return []
    rows = np.array(list(found.values()), dtype=np.uint8)
    rows = rows[_dual_order_rows(rows, n, k) >= k]
    return sorted((TruthTable(n, r) for r in rows), key=TruthTable.to_int)


def _dual_order_rows(rows: np.ndarray, n: int, kmax: int) -> np.ndarray:
    idx = np.arange(1 << n)
    alive = np.ones(rows.shape, dtype=bool)
    orders = np.zeros(rows.shape[0], dtype=np.int64)
    for k in range(1, kmax + 1):
        for subset in itertools.combinations(range(n), k):
            mask = sum(1 << j for j in subset)
            same = rows == rows[:, idx ^ mask]
            alive &= same if k % 2 == 1 else ~same
        orders[alive.any(axis=1)] = k
    return orders


def reverse_concat(f: TruthTable) -> TruthTable:
    """f followed by its reversed table: a function on n + 1 variables."""
    return TruthTable(f.n + 1, np.concatenate([f.bits, f.bits[::-1]]))


def is_rotation_symmetric(f: TruthTable) -> bool:
    idx = np.arange(1 << f.n)
    rot = ((idx << 1) | (idx >> (f.n - 1))) & ((1 << f.n) - 1)
    return bool(np.array_equal(f.bits, f.bits[rot]))


def nonlinearities(tables: list[TruthTable]) -> list[int]:
    from .core import nonlinearity

    return [nonlinearity(walsh_transform(t)) for t in tables]
