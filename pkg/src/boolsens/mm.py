"""Maiorana-McFarland style functions f(x, y) = phi(x).y ^ g(x) and degree ladders.

Points are indexed with x in the low n1 bits and y in the high n2 bits.  A
leaf is the function of y attached to a fixed x = a; by default it is the
affine function phi(a).y ^ g(a), and an override may replace it by any
n2-variable table.

Degree bookkeeping.  Write P_a(x) for the indicator polynomial of x = a.
Every leaf equal to L (the parity of all of y) or its complement
contributes -/+ P_a(x) L(y) / 2 to the real polynomial, where L is the
+-1 form prod (1 - 2 y_i).  So the top-degree part of the polynomial is
C(x) L(y) / 2 with C = sum_a eps_a P_a, eps_a = -1 for leaf L and +1 for
its complement.  All other leaves used here have degree at most 1 in y, so
pdeg(f) = n2 + deg C as soon as deg C >= 2.  The ladders cancel the top
monomials of C by adding sub-cube indicators
X_O prod_{z in Z} (1 - x_z) on points that were still empty.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .core import (
    MAX_VARS,
    CapacityError,
    TruthTable,
    from_hex,
    is_k_order_sensitive_at,
    pdeg,
    popcounts,
    sensitivity_at,
    to_hex,
    walsh_transform,
)


@dataclass
class MMSpec:
    n1: int
    n2: int
    phi: np.ndarray  # (2^n1,) ints, bit j-1 of phi[a] is the coefficient of y_j
    g_bits: np.ndarray  # (2^n1,) uint8
    leaf_override: dict[int, TruthTable] = field(default_factory=dict)

    def __post_init__(self):
        self.phi = np.asarray(self.phi, dtype=np.int64)
        self.g_bits = np.asarray(self.g_bits, dtype=np.uint8)
        if self.phi.shape != (1 << self.n1,) or self.g_bits.shape != (1 << self.n1,):
            raise ValueError("phi and g must have 2^n1 entries")
        for a, leaf in self.leaf_override.items():
            if leaf.n != self.n2:
                raise ValueError(f"override at {a} has the wrong arity")

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    @classmethod
    def empty(cls, n1: int, n2: int) -> "MMSpec":
        return cls(n1, n2, np.zeros(1 << n1, dtype=np.int64), np.zeros(1 << n1, dtype=np.uint8))

    def leaf(self, a: int) -> TruthTable:
        if a in self.leaf_override:
            return self.leaf_override[a]
        ys = np.arange(1 << self.n2)
        bits = (popcounts(self.n2)[ys & int(self.phi[a])] & 1) ^ self.g_bits[a]
        return TruthTable(self.n2, bits.astype(np.uint8))

    def is_empty_at(self, a: int) -> bool:
        return self.phi[a] == 0 and self.g_bits[a] == 0 and a not in self.leaf_override

    def to_json(self, ledger: "TermLedger | None" = None) -> str:
        doc = {
            "n1": self.n1,
            "n2": self.n2,
            "phi": [format(int(v), f"0{self.n2}b")[::-1] for v in self.phi],
            "g": "".join(str(int(b)) for b in self.g_bits),
            "overrides": {str(a): to_hex(t) for a, t in sorted(self.leaf_override.items())},
        }
        if ledger is not None:
            doc["ledger"] = ledger.to_dict()
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "MMSpec":
        doc = json.loads(text)
        n1, n2 = doc["n1"], doc["n2"]
        phi = [int(row[::-1], 2) for row in doc["phi"]]
        g = [int(c) for c in doc["g"]]
        over = {int(a): from_hex(n2, h) for a, h in doc.get("overrides", {}).items()}
        return cls(n1, n2, phi, g, over)


def bits_to_index(bits: str) -> int:
    """'x1x2..' read left to right, x1 first."""
    return sum(1 << j for j, c in enumerate(bits) if c == "1")


def top(n1: int) -> int:
    return (1 << n1) - 1


def critical(n1: int, i: int) -> int:
    """1_{n1} with x_i cleared (i is 1-based)."""
    return top(n1) ^ (1 << (i - 1))


def mm_truth_table(spec: MMSpec) -> TruthTable:
    n1, n2 = spec.n1, spec.n2
    if n1 + n2 > MAX_VARS:
        raise CapacityError("MM table exceeds the materialization cap")
    ys = np.arange(1 << n2, dtype=np.int64)
    pc = popcounts(n2)
    # rows indexed by y (high bits), columns by x (low bits)
    grid = (pc[ys[:, None] & spec.phi[None, :]] & 1) ^ spec.g_bits[None, :]
    for a, leaf in spec.leaf_override.items():
        grid[:, a] = leaf.bits
    return TruthTable(n1 + n2, grid.astype(np.uint8).ravel())


def check_mm_family(spec: MMSpec) -> bool:
    """The four leaf conditions that force s(f) = n at the all-ones point."""
    n1, n2 = spec.n1, spec.n2
    t = top(n1)
    full = (1 << n2) - 1
    if t in spec.leaf_override or spec.phi[t] != full or spec.g_bits[t] != 0:
        return False
    for i in range(1, n1 + 1):
        c = critical(n1, i)
        if c in spec.leaf_override:
            return False
        if bin(int(spec.phi[c])).count("1") % 2 != 1 or spec.g_bits[c] != n2 % 2:
            return False
    return True


def table2_spec() -> MMSpec:
    """The printed 7-variable example; x strings are read as x1 x2 x3."""
    rows = {
        "000": ("0110", 0),
        "001": ("1000", 0),
        "010": ("0100", 0),
        "011": ("1100", 0),
        "100": ("1111", 1),
        "101": ("1010", 0),
        "110": ("0010", 0),
        "111": ("1111", 0),
    }
    spec = MMSpec.empty(3, 4)
    for x, (ybits, c) in rows.items():
        a = bits_to_index(x)
        spec.phi[a] = bits_to_index(ybits)
        spec.g_bits[a] = c
    return spec


def _check_th1_sizes(n1: int, n2: int) -> None:
    if not (n1 <= n2 <= n1 + 1) or n2 % 2 or n1 < 3:
        raise ValueError("need n1 >= 3, n1 <= n2 <= n1 + 1 and n2 even")


def _anchor(n1: int) -> int:
    """1_{n1-2} 0 0."""
    return (1 << (n1 - 2)) - 1


def seed_spec(n1: int, n2: int) -> MMSpec:
    """Sparse seed: L at 1_{n1}, L ^ 1 at 1_{n1-2}00, y_i at the i-th critical point."""
    _check_th1_sizes(n1, n2)
    spec = MMSpec.empty(n1, n2)
    full = (1 << n2) - 1
    spec.phi[top(n1)] = full
    spec.phi[_anchor(n1)] = full
    spec.g_bits[_anchor(n1)] = 1
    for i in range(1, n1 + 1):
        spec.phi[critical(n1, i)] = 1 << (i - 1)
    return spec


def build_th1(n1: int, n2: int) -> MMSpec:
    """The pdeg <= n - 1 member: seed plus weight-1 leaves y_{1 + (a mod n2)} elsewhere."""
    spec = seed_spec(n1, n2)
    for a in range(1 << n1):
        if spec.is_empty_at(a):
            spec.phi[a] = 1 << (a % n2)
    return spec


# -- degree ladders -------------------------------------------------------------

@dataclass(frozen=True)
class Cube:
    ones: frozenset
    zeros: frozenset

    def disjoint(self, other: "Cube") -> bool:
        return bool(self.ones & other.zeros) or bool(self.zeros & other.ones)

    def points(self, n1: int) -> list[int]:
        fixed = sum(1 << (i - 1) for i in self.ones)
        free = [i for i in range(1, n1 + 1) if i not in self.ones and i not in self.zeros]
        out = []
        for r in range(len(free) + 1):
            for sub in combinations(free, r):
                out.append(fixed | sum(1 << (i - 1) for i in sub))
        return sorted(out)


def point_cube(n1: int, a: int) -> Cube:
    ones = frozenset(i for i in range(1, n1 + 1) if (a >> (i - 1)) & 1)
    return Cube(ones, frozenset(range(1, n1 + 1)) - ones)


def cube_polynomial(cube: Cube) -> dict[frozenset, int]:
    """X_O prod_{z in Z} (1 - x_z) as {monomial: coefficient}."""
    out = {}
    zs = sorted(cube.zeros)
    for r in range(len(zs) + 1):
        for sub in combinations(zs, r):
            out[cube.ones | frozenset(sub)] = (-1) ** r
    return out


def add_poly(acc: dict, poly: dict, scale: int) -> None:
    for mono, c in poly.items():
        v = acc.get(mono, 0) + scale * c
        if v:
            acc[mono] = v
        else:
            acc.pop(mono, None)


def poly_degree(poly: dict) -> int:
    return max((len(m) for m in poly), default=-1)


@dataclass
class TermLedger:
    entries: list[dict] = field(default_factory=list)
    consumed_slots: set = field(default_factory=set)
    level: int = 0
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "consumed_slots": sorted(self.consumed_slots),
            "entries": self.entries,
            "notes": self.notes,
        }


class LadderError(RuntimeError):
    def __init__(self, message: str, ledger: TermLedger):
        super().__init__(message)
        self.ledger = ledger


def _choose_cube(mono: frozenset, zeros_needed: int, occupied: list[Cube]) -> Cube | None:
    """Zero positions drawn from the monomial, highest positions first."""
    members = sorted(mono, reverse=True)
    for zs in combinations(members, zeros_needed):
        cube = Cube(mono - frozenset(zs), frozenset(zs))
        if all(cube.disjoint(o) for o in occupied):
            return cube
    return None


def _run_ladder(coeffs: dict, occupied: list[Cube], zeros_needed: int, sign_factor: int,
                max_levels: int, ledger: TermLedger, floor_degree: int):
    """Cancel all top-degree monomials of the coefficient polynomial, level by level.

    Adding eps * cube removes s * X_T when eps * (-1)^{|Z|} = -s.  A level is
    kept only if every top monomial was cancelled; otherwise it is rolled back.
    Returns the list of (cube, eps) additions that were kept.
    """
    kept = []
    for level in range(1, max_levels + 1):
        deg = poly_degree(coeffs)
        if deg <= floor_degree:
            ledger.notes.append(f"level {level}: degree floor reached")
            break
        trial = dict(coeffs)
        trial_occ = list(occupied)
        added, records = [], []
        ok = True
        while poly_degree(trial) == deg:
            # highest degree first, deterministic order among equals
            mono = min((m for m in trial if len(m) == deg), key=lambda m: sorted(m, reverse=True))
            s = trial[mono]
            if abs(s) != 1:
                ok = False
                ledger.notes.append(f"level {level}: coefficient {s} on {sorted(mono)} is not +-1")
                break
            cube = _choose_cube(mono, zeros_needed, trial_occ)
            if cube is None:
                ok = False
                ledger.notes.append(f"level {level}: no free cube for monomial {sorted(mono)}")
                break
            eps = -s * sign_factor
            add_poly(trial, cube_polynomial(cube), eps)
            trial_occ.append(cube)
            added.append((cube, eps))
            records.append({
                "level": level,
                "cancelled": sorted(mono),
                "sign": s,
                "ones": sorted(cube.ones),
                "zeros": sorted(cube.zeros),
                "eps": eps,
                "degree": deg,
            })
        if not ok:
            break
        coeffs.clear()
        coeffs.update(trial)
        occupied[:] = trial_occ
        kept.extend(added)
        ledger.entries.extend(records)
        for cube, _ in added:
            ledger.consumed_slots.update(cube.zeros)
        ledger.level = level
    return kept


def ladder_budget(n1: int) -> int:
    """Levels admitted by 2 * 3^1 + .. + 2 * 3^z <= n1 - 1 read as z <= log_3(n1 - 1)."""
    z = 0
    while 3 ** (z + 1) <= n1 - 1:
        z += 1
    return z


def ladder_reduce(n1: int, n2: int, max_levels: int | None = None, verify: bool = True):
    """Seed spec plus cancelling cubes; returns (spec, ledger, z)."""
    spec = seed_spec(n1, n2)
    budget = ladder_budget(n1) if max_levels is None else max_levels
    t, anchor = top(n1), _anchor(n1)
    occupied = [point_cube(n1, t), point_cube(n1, anchor)]
    occupied += [point_cube(n1, critical(n1, i)) for i in range(1, n1 + 1)]
    coeffs: dict = {}
    add_poly(coeffs, cube_polynomial(point_cube(n1, t)), -1)
    add_poly(coeffs, cube_polynomial(point_cube(n1, anchor)), +1)
    ledger = TermLedger()
    ledger.notes.append(f"budget: {budget} level(s)")
    start_deg = poly_degree(coeffs)
    kept = _run_ladder(coeffs, occupied, 2, 1, budget, ledger, 1)
    full = (1 << n2) - 1
    for cube, eps in kept:
        for a in cube.points(n1):
            if not spec.is_empty_at(a):
                raise LadderError(f"point {a} already carries a leaf", ledger)
            spec.phi[a] = full
            spec.g_bits[a] = 0 if eps == -1 else 1
    z = start_deg - poly_degree(coeffs)
    if verify:
        _verify_first_order(spec, z, ledger)
    return spec, ledger, z


def _verify_first_order(spec: MMSpec, z: int, ledger: TermLedger) -> None:
    if spec.n > MAX_VARS:
        return
    f = mm_truth_table(spec)
    ones = tuple([1] * spec.n)
    if not check_mm_family(spec):
        raise LadderError("output left the MM family", ledger)
    if sensitivity_at(f, ones) != spec.n:
        raise LadderError("sensitivity at 1_n is not n", ledger)
    if pdeg(walsh_transform(f)) > spec.n - 1 - z:
        raise LadderError("polynomial degree above n - 1 - z", ledger)


def sym_k(m: int, k: int) -> TruthTable:
    """Parity of sum_{j=1..k} C(wt(x), j): every monomial of degree 1..k."""
    if not 1 <= k <= m:
        raise ValueError("need 1 <= k <= m")
    pc = popcounts(m).astype(np.int64)
    vals = np.array([sum(comb(w, j) for j in range(1, k + 1)) & 1 for w in range(m + 1)], dtype=np.uint8)
    return TruthTable(m, vals[pc])


def build_korder(n1: int, n2: int, k: int) -> MMSpec:
    """sym^k at 1_{n1}, constant 1 on n1 - k <= wt(a) < n1, constant 0 elsewhere."""
    if not 1 <= k <= min(n1, n2):
        raise ValueError("need 1 <= k <= min(n1, n2)")
    spec = MMSpec.empty(n1, n2)
    spec.leaf_override[top(n1)] = sym_k(n2, k)
    pc = popcounts(n1)
    for a in range(1 << n1):
        if n1 - k <= pc[a] < n1:
            spec.g_bits[a] = 1
    return spec


def korder_witness(n1: int, n2: int) -> tuple[int, ...]:
    return tuple([1] * n1 + [0] * n2)


def korder_budget(n1: int, k: int) -> int:
    """Largest p with k (2^k - 1)^p <= n1 - k; the k = 1 case uses the log_3 budget."""
    if k == 1:
        return ladder_budget(n1)
    p = 0
    while k * (2**k - 1) ** (p + 1) <= n1 - k:
        p += 1
    return p


def ladder_reduce_korder(n1: int, n2: int, k: int, max_levels: int | None = None, verify: bool = True):
    """k-th order ladder: cubes with k + 1 zeros carrying sym^k or its complement."""
    spec = build_korder(n1, n2, k)
    budget = korder_budget(n1, k) if max_levels is None else max_levels
    pc = popcounts(n1)
    occupied = [point_cube(n1, a) for a in range(1 << n1) if pc[a] >= n1 - k]
    coeffs = {frozenset(range(1, n1 + 1)): 1}
    ledger = TermLedger()
    ledger.notes.append(f"budget: {budget} level(s)")
    sign_factor = (-1) ** (k + 1)
    start_deg = poly_degree(coeffs)
    kept = _run_ladder(coeffs, occupied, k + 1, sign_factor, budget, ledger, 1)
    sym = sym_k(n2, k)
    for cube, eps in kept:
        for a in cube.points(n1):
            if not spec.is_empty_at(a):
                raise LadderError(f"point {a} already carries a leaf", ledger)
            spec.leaf_override[a] = sym if eps == 1 else ~sym
    p = start_deg - poly_degree(coeffs)
    if verify and spec.n <= MAX_VARS:
        f = mm_truth_table(spec)
        if not is_k_order_sensitive_at(f, korder_witness(n1, n2), k):
            raise LadderError("order-k sensitivity lost at the witness", ledger)
        if pdeg(walsh_transform(f)) > spec.n - p:
            raise LadderError("polynomial degree above n - p", ledger)
    return spec, ledger, p


def theoretical_korder_reduction(n: int, k: int) -> float:
    """(log(n/2 - k) - log k) / k, base 2."""
    return (math.log2(n / 2 - k) - math.log2(k)) / k
