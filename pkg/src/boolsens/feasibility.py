"""0/1 linear systems for "a fully sensitive function with pdeg <= p exists".

Variables y_i stand for f(i).  For every u with wt(u) >= p + 1 the Walsh
coefficient must vanish; since sum_i (-1)^{u.i} = 0 for u != 0 this is the
equality sum_i (-1)^{u.i} y_i = 0.  The witness x is fixed to 0 and its n
neighbours to 1.
"""

from __future__ import annotations

import re
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from .core import (
    TruthTable,
    is_k_order_sensitive_at,
    pdeg,
    point_bits,
    point_index,
    popcounts,
)

FEASIBLE, INFEASIBLE, UNKNOWN = "Feasible", "Infeasible", "Unknown"


@dataclass
class LinearConstraintSystem:
    num_vars: int
    equalities: list[tuple[tuple[int, ...], int]] = field(default_factory=list)
    fixed: dict[int, int] = field(default_factory=dict)
    n: int | None = None
    pdeg_cap: int | None = None
    witness: tuple[int, ...] | None = None

    def __post_init__(self):
        for coeffs, _ in self.equalities:
            if len(coeffs) != self.num_vars:
                raise ValueError("coefficient vector has the wrong length")
            if not any(coeffs):
                raise ValueError("equality with no nonzero coefficient")

    def fix(self, var: int, bit: int) -> bool:
        """Fix a variable; returns False on a conflicting earlier fix."""
        if self.fixed.get(var, bit) != bit:
            return False
        self.fixed[var] = bit
        return True

    def satisfied_by(self, assignment) -> bool:
        y = np.asarray(assignment, dtype=np.int64)
        if any(y[v] != b for v, b in self.fixed.items()):
            return False
        return all(int(np.dot(c, y)) == r for c, r in self.equalities)


@dataclass
class SolveResult:
    verdict: str
    assignment: np.ndarray | None = None
    nodes: int = 0

    def __bool__(self) -> bool:
        return self.verdict == FEASIBLE


def walsh_row(n: int, u: int) -> tuple[int, ...]:
    pc = popcounts(n)
    return tuple(int(v) for v in 1 - 2 * (pc[np.arange(1 << n) & u].astype(np.int64) & 1))


def encode_existence(n: int, p: int, x) -> LinearConstraintSystem:
    """System whose 0/1 solutions are tables f with pdeg(f) <= p, f(x) = 0, f(x ^ e_i) = 1."""
    if p >= n or p < 0:
        raise ValueError("need 0 <= p < n; p >= n gives a vacuous system")
    if n > 8:
        raise ValueError("materialized systems are limited to n <= 8")
    xi = x if isinstance(x, int) else point_index(x)
    pc = popcounts(n)
    eqs = [(walsh_row(n, u), 0) for u in range(1 << n) if pc[u] >= p + 1]
    system = LinearConstraintSystem(1 << n, eqs, n=n, pdeg_cap=p, witness=tuple(point_bits(xi, n)))
    system.fix(xi, 0)
    for i in range(n):
        system.fix(xi ^ (1 << i), 1)
    return system


# -- LP text --------------------------------------------------------------------

def _term(c: int, var: int) -> str:
    sign = "+" if c > 0 else "-"
    mag = abs(c)
    return f"{sign} y{var}" if mag == 1 else f"{sign} {mag} y{var}"


def export_lp(system: LinearConstraintSystem) -> str:
    lines = ["Minimize", " obj: 0 y0", "Subject To"]
    for j, (coeffs, rhs) in enumerate(system.equalities):
        terms = " ".join(_term(c, i) for i, c in enumerate(coeffs) if c)
        lines.append(f" c{j}: {terms} = {rhs}")
    for var in sorted(system.fixed):
        lines.append(f" y{var} = {system.fixed[var]}")
    lines.append("Binary")
    lines.extend(f" y{i}" for i in range(system.num_vars))
    lines.append("End")
    return "\n".join(lines) + "\n"


_TERM = re.compile(r"([+-])\s*(?:(\d+)\s+)?y(\d+)")


def parse_lp(text: str) -> LinearConstraintSystem:
    """Inverse of export_lp (only our own emission is supported)."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    start = lines.index("Subject To") + 1
    stop = lines.index("Binary")
    num_vars = len(lines) - stop - 2
    eqs, fixed = [], {}
    for ln in lines[start:stop]:
        lhs, rhs = ln.rsplit("=", 1)
        if ":" in lhs:
            coeffs = [0] * num_vars
            for sign, mag, var in _TERM.findall(lhs.split(":", 1)[1]):
                coeffs[int(var)] = (1 if sign == "+" else -1) * int(mag or 1)
            eqs.append((tuple(coeffs), int(rhs)))
        else:
            fixed[int(lhs.strip()[1:])] = int(rhs)
    return LinearConstraintSystem(num_vars, eqs, fixed)


# -- solver ---------------------------------------------------------------------

def _rref_integer(rows: list[list[Fraction]], rhs: list[Fraction], ncols: int):
    """Rational row reduction; returns (pivots, integer rows, integer rhs) or None if inconsistent."""
    m = [r[:] + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [v / pv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    for row in m[r:]:
        if row[-1] != 0:
            return None
    out_rows, out_rhs = [], []
    for row in m[:r]:
        scale = lcm(*(v.denominator for v in row))
        out_rows.append([int(v * scale) for v in row[:-1]])
        out_rhs.append(int(row[-1] * scale))
    return pivots, np.array(out_rows, dtype=np.int64).reshape(r, ncols), np.array(out_rhs, dtype=np.int64)


def solve_feasibility(system: LinearConstraintSystem, budget: int = 10**6) -> SolveResult:
    """Exact 0/1 feasibility by rational elimination plus depth-first branching.

    After elimination each row reads d*y_pivot + sum_j c_j y_j = r over the free
    variables; a branch is cut when no value in {0, 1} is reachable for some
    pivot given the free variables still open.
    """
    nv = system.num_vars
    fixed = dict(system.fixed)
    open_vars = [v for v in range(nv) if v not in fixed]
    rows, rhs = [], []
    for coeffs, b in system.equalities:
        rest = b - sum(coeffs[v] * bit for v, bit in fixed.items())
        rows.append([Fraction(coeffs[v]) for v in open_vars])
        rhs.append(Fraction(rest))
    result = _rref_integer(rows, rhs, len(open_vars)) if open_vars else None
    if not open_vars:
        y = np.zeros(nv, dtype=np.uint8)
        for v, b in fixed.items():
            y[v] = b
        ok = system.satisfied_by(y)
        return _checked(system, SolveResult(FEASIBLE if ok else INFEASIBLE, y if ok else None))
    if result is None:
        return SolveResult(INFEASIBLE)
    pivots, mat, r = result
    d = mat[np.arange(len(pivots)), pivots] if pivots else np.zeros(0, dtype=np.int64)
    free = [j for j in range(len(open_vars)) if j not in set(pivots)]
    c = mat[:, free] if pivots else np.zeros((0, len(free)), dtype=np.int64)
    # branch order: largest absolute coefficient sum first
    order = sorted(range(len(free)), key=lambda j: (-int(np.abs(c[:, j]).sum()), j))
    c = c[:, order]
    free = [free[j] for j in order]
    pos = np.where(c > 0, c, 0)
    neg = np.where(c < 0, c, 0)
    # suffix sums of positive / negative parts over the branching order
    pos_rest = np.concatenate([np.cumsum(pos[:, ::-1], axis=1)[:, ::-1], np.zeros((len(d), 1), np.int64)], axis=1)
    neg_rest = np.concatenate([np.cumsum(neg[:, ::-1], axis=1)[:, ::-1], np.zeros((len(d), 1), np.int64)], axis=1)

    def reachable(partial, depth):
        # d * y_p = r - partial - (rest); rest ranges over [neg_rest, pos_rest]
        lo = r - partial - pos_rest[:, depth]
        hi = r - partial - neg_rest[:, depth]
        zero_ok = (lo <= 0) & (0 <= hi)
        one_ok = (lo <= d) & (d <= hi)
        return bool(np.all(zero_ok | one_ok))

    nodes = 0
    values = np.zeros(len(free), dtype=np.int64)
    partial = np.zeros(len(d), dtype=np.int64)
    stack = [(0, 0, partial)]
    if not reachable(partial, 0):
        return SolveResult(INFEASIBLE)
    while stack:
        depth, bit, part = stack.pop()
        nodes += 1
        if nodes > budget:
            return SolveResult(UNKNOWN, nodes=nodes)
        if depth == len(free):
            piv_vals = (r - part) // np.where(d == 0, 1, d)
            if np.all((r - part) == d * piv_vals) and np.all((piv_vals == 0) | (piv_vals == 1)):
                y = np.zeros(nv, dtype=np.uint8)
                for v, b in fixed.items():
                    y[v] = b
                for j, p in enumerate(pivots):
                    y[open_vars[p]] = piv_vals[j]
                for j, fcol in enumerate(free):
                    y[open_vars[fcol]] = values[j]
                return _checked(system, SolveResult(FEASIBLE, y, nodes))
            continue
        if bit == 0:
            stack.append((depth, 1, part))
        values[depth] = bit
        nxt = part + bit * c[:, depth] if len(d) else part
        if reachable(nxt, depth + 1):
            stack.append((depth + 1, 0, nxt))
    return SolveResult(INFEASIBLE, nodes=nodes)


def _checked(system: LinearConstraintSystem, result: SolveResult) -> SolveResult:
    """Soundness gate: a Feasible verdict must decode to a valid table."""
    if result.verdict != FEASIBLE:
        return result
    if not system.satisfied_by(result.assignment):
        raise AssertionError("solver returned an assignment violating the system")
    if system.n is not None and system.pdeg_cap is not None:
        f = decode_solution(system, result.assignment)
        if pdeg(f) > system.pdeg_cap or not is_k_order_sensitive_at(f, system.witness, 1):
            raise AssertionError("decoded table fails re-verification")
    return result


def decode_solution(system: LinearConstraintSystem, assignment) -> TruthTable:
    y = np.asarray(assignment)
    if y.shape != (system.num_vars,):
        raise ValueError("assignment must cover every variable")
    n = system.num_vars.bit_length() - 1
    return TruthTable(n, y.astype(np.uint8))


def solve_all_witnesses(n: int, p: int, budget: int = 10**6) -> dict[int, str]:
    """The literal procedure: one solve per witness x in F_2^n."""
    return {x: solve_feasibility(encode_existence(n, p, x), budget).verdict for x in range(1 << n)}


# -- exhaustive oracle ----------------------------------------------------------

@lru_cache(maxsize=1)
def _resilient_five():
    from .search import one_resilient_n5, walsh_rows

    g = one_resilient_n5()
    return g, walsh_rows(g, 5)


def exists_fully_sensitive(n: int, p: int, x: int) -> bool:
    """Enumeration oracle for n <= 5, independent of the linear encoding."""
    from .search import all_tables, walsh_rows

    if p >= n:
        raise ValueError("need p < n")
    pc = popcounts(n)
    nbrs = [x ^ (1 << i) for i in range(n)]
    if n <= 4:
        t = all_tables(n)
        spec = walsh_rows(t, n)
        low = np.all(spec[:, pc > p] == 0, axis=1)
        bit = lambda i: (t >> np.uint64(i)) & np.uint64(1)
        ok = low & (bit(x) == 0)
        for y in nbrs:
            ok &= bit(y) == 1
        return bool(ok.any())
    if n != 5:
        raise ValueError("oracle covers n <= 5")
    if p == n - 1:
        # f = g xor parity with g balanced and constant on {x} and its neighbours
        g = np.zeros(1 << n, dtype=np.uint8)
        g[[x] + nbrs] = 1
        rest = [i for i in range(1 << n) if g[i] == 0]
        g[rest[: (1 << (n - 1)) - n - 1]] = 1
        f = TruthTable(n, g ^ (pc & 1))
        if f.bits[x]:
            f = ~f
        return pdeg(f) <= p and is_k_order_sensitive_at(f, point_bits(x, n), 1)
    # pdeg(f) <= p  <=>  g = f xor parity is (n - p - 1)-resilient
    g, spec = _resilient_five()
    ok = np.all(spec[:, pc <= n - p - 1] == 0, axis=1)
    par = int(pc[x] & 1)
    bit = lambda i: (g >> np.uint64(i)) & np.uint64(1)
    ok &= bit(x) == par
    for y in nbrs:
        ok &= bit(y) == par
    return bool(ok.any())
