"""Recursive amplification (function composition) and cascaded Walsh analysis.

A composed function on d^u variables is built level by level:

    h_1 = f,   h_i(x) = f(h_{i-1}(B_1) ^ c_{i,1}, ..., h_{i-1}(B_d) ^ c_{i,d})

where B_j is the j-th block of d^{i-1} consecutive variables (block 1 holds
x_1.., the low bits of the point index) and c_i are per-level constants.
Plain composition has c = 0; the modified variant uses
c_{i,j} = h_{i-1}(y^{i-1}) ^ y_j so that the witness y is carried upward.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import (
    MAX_VARS,
    CapacityError,
    TruthTable,
    WalshSpectrum,
    dual,
    is_k_order_sensitive_at,
    max_sensitivity_order,
    nonlinearity,
    point_index,
    popcounts,
    walsh_transform,
)

PLAIN, MODIFIED, SHIFTED = "plain", "modified", "shifted"


@dataclass(frozen=True)
class ComposedFunction:
    base: TruthTable
    depth: int
    mode: str = PLAIN
    witness: tuple[int, ...] | None = None
    # constants[i] holds the d slot constants applied when building level i + 2
    constants: tuple[tuple[int, ...], ...] = field(default=())

    @property
    def d(self) -> int:
        return self.base.n

    @property
    def n(self) -> int:
        return self.d ** self.depth

    def level_constants(self, level: int) -> tuple[int, ...]:
        """Slot constants used to build level `level` (2 <= level <= depth)."""
        return self.constants[level - 2]

    def evaluate(self, x) -> int:
        """Point evaluation through the composition tree, O(n)."""
        bits = np.asarray(x, dtype=np.uint8).ravel()
        if bits.size != self.n:
            raise ValueError(f"expected {self.n} input bits")
        return self._eval(bits, self.depth)

    def _eval(self, bits: np.ndarray, level: int) -> int:
        f = self.base.bits
        if level == 1:
            return int(f[point_index(bits)])
        m = self.d ** (level - 1)
        c = self.level_constants(level)
        idx = 0
        for j in range(self.d):
            idx |= (self._eval(bits[j * m:(j + 1) * m], level - 1) ^ c[j]) << j
        return int(f[idx])

    def level_table(self, level: int) -> TruthTable:
        """Materialized table of h_level (d^level <= MAX_VARS)."""
        if self.d ** level > MAX_VARS:
            raise CapacityError(f"{self.d ** level} variables exceed the materialization cap")
        table = self.base.bits
        for lv in range(2, level + 1):
            table = compose_tables(self.base, [table ^ c for c in self.level_constants(lv)])
        return TruthTable(self.d ** level, table)

    def truth_table(self) -> TruthTable:
        return self.level_table(self.depth)

    def witness_point(self) -> np.ndarray | None:
        """y^u: d^{u-1} copies of the base witness."""
        if self.witness is None:
            return None
        return np.tile(np.array(self.witness, dtype=np.uint8), self.d ** (self.depth - 1))


def compose_tables(outer: TruthTable, inners: list[np.ndarray]) -> np.ndarray:
    """Table of outer(g_1(B_1), .., g_s(B_s)); g_1 reads the lowest block."""
    acc = np.asarray(inners[0], dtype=np.uint8)
    if outer.n > 8:
        raise ValueError("outer function limited to 8 variables")
    total = int(np.log2(acc.size))
    for j, g in enumerate(inners[1:], start=1):
        total += int(np.log2(len(g)))
        if total > MAX_VARS:
            raise CapacityError("composition exceeds the materialization cap")
        acc = np.add.outer(np.asarray(g, dtype=np.uint8) << j, acc).ravel()
    return outer.bits[acc]


def plain_power(f: TruthTable, u: int) -> ComposedFunction:
    if u < 1:
        raise ValueError("u must be at least 1")
    zeros = tuple(0 for _ in range(f.n))
    return ComposedFunction(f, u, PLAIN, None, tuple(zeros for _ in range(u - 1)))


def modified_power(f: TruthTable, u: int, y) -> ComposedFunction:
    """Composition that keeps k-th order sensitivity at y^u."""
    if u < 1:
        raise ValueError("u must be at least 1")
    y = tuple(int(b) for b in y)
    if len(y) != f.n or not is_k_order_sensitive_at(f, y, 1):
        raise ValueError("y is not a sensitivity witness of the base function")
    consts = []
    value = int(f.bits[point_index(y)])  # h_1(y^1); h_i(y^i) = f(y) at every level
    for _ in range(u - 1):
        consts.append(tuple(value ^ yj for yj in y))
    return ComposedFunction(f, u, MODIFIED, y, tuple(consts))


def shifted_compose(f: TruthTable, a, u: int = 2) -> ComposedFunction:
    """f(f ^ a_1, .., f ^ a_d), repeated for u - 1 levels with the same constants."""
    a = tuple(int(b) for b in a)
    if len(a) != f.n:
        raise ValueError("need one constant per slot")
    return ComposedFunction(f, u, SHIFTED, None, tuple(a for _ in range(u - 1)))


def sensitivity_order_at_witness(cf: ComposedFunction, k: int) -> bool:
    """Check k-th order sensitivity at y^u by point evaluation of every flip set."""
    y = cf.witness_point()
    ref = cf.evaluate(y)
    for size in range(1, k + 1):
        for subset in itertools.combinations(range(cf.n), size):
            z = y.copy()
            z[list(subset)] ^= 1
            if cf.evaluate(z) == ref:
                return False
    return True


# -- cascaded Walsh -------------------------------------------------------------

def _inner_value(spec: WalshSpectrum, complemented: bool, vi: int, w: int) -> int:
    if vi == 0:
        return (1 << spec.n) if w == 0 else 0
    value = int(spec.coeffs[w])
    return -value if complemented else value


def cascaded_walsh(outer: WalshSpectrum, inners: list[WalshSpectrum], complements, w) -> int:
    """W of f(g_1 ^ c_1, .., g_s ^ c_s) at w = (w_1, .., w_s), from component spectra."""
    s = outer.n
    ws = _split_point(w, [g.n for g in inners])
    comps = [bool(c) for c in complements]
    total = 0
    for v in range(1 << s):
        term = int(outer.coeffs[v])
        if term == 0:
            continue
        for i in range(s):
            term *= _inner_value(inners[i], comps[i], (v >> i) & 1, ws[i])
            if term == 0:
                break
        total += term
    if total % (1 << s):
        raise ArithmeticError("cascaded sum not divisible by 2^s")
    return total >> s if total >= 0 else -((-total) >> s)


def cascaded_spectrum(outer: WalshSpectrum, inners: list[WalshSpectrum], complements) -> np.ndarray:
    """Every coefficient of f(g_1 ^ c_1, .., g_s ^ c_s) from component spectra.

    Same sum as cascaded_walsh, evaluated with outer products so the full
    spectrum costs 2^s array products instead of 2^s terms per point.
    """
    s = outer.n
    total = np.zeros(1 << sum(g.n for g in inners), dtype=np.int64)
    for v in range(1 << s):
        if int(outer.coeffs[v]) == 0:
            continue
        term = np.array([int(outer.coeffs[v])], dtype=np.int64)
        for i, g in enumerate(inners):
            if (v >> i) & 1:
                factor = g.coeffs.astype(np.int64) * (-1 if complements[i] else 1)
            else:
                factor = np.zeros(1 << g.n, dtype=np.int64)
                factor[0] = 1 << g.n
            term = np.multiply.outer(factor, term).ravel()
        total += term
    if np.any(total % (1 << s)):
        raise ArithmeticError("cascaded sum not divisible by 2^s")
    return total // (1 << s)


def cascaded_walsh_balanced(outer: WalshSpectrum, inners: list[WalshSpectrum], complements, w) -> int:
    """Single-term closed form valid when every inner function is balanced."""
    if any(int(g.coeffs[0]) != 0 for g in inners):
        raise ValueError("inner functions must be balanced")
    s = outer.n
    ws = _split_point(w, [g.n for g in inners])
    v = sum(1 << i for i in range(s) if ws[i] != 0)
    term = int(outer.coeffs[v])
    for i in range(s):
        term *= _inner_value(inners[i], bool(complements[i]), (v >> i) & 1, ws[i])
    return term >> s if term >= 0 else -((-term) >> s)


def _split_point(w, sizes: list[int]) -> list[int]:
    if not isinstance(w, (int, np.integer)):
        w = point_index(w)
    w = int(w)
    out = []
    for size in sizes:
        out.append(w & ((1 << size) - 1))
        w >>= size
    return out


def composed_spectrum_at(cf: ComposedFunction, w) -> int:
    """W of a two-or-more-level composed function at w via one cascade step."""
    if cf.depth < 2:
        return int(walsh_transform(cf.base).coeffs[int(w) if isinstance(w, (int, np.integer)) else point_index(w)])
    if cf.d ** (cf.depth - 1) > MAX_VARS:
        raise CapacityError("inner level too large to transform")
    inner = walsh_transform(cf.level_table(cf.depth - 1))
    consts = cf.level_constants(cf.depth)
    return cascaded_walsh(walsh_transform(cf.base), [inner] * cf.d, consts, w)


def cascade_bounds(nl_f: int, s: int, k: int, min_nl_g: int, m: int, m_prime: int) -> dict:
    """Nonlinearity and resiliency bounds for f(g_1, .., g_s) with k-variable inners.

    nl_lower assumes balanced inners; resiliency_lower and support_resiliency
    are the self-composition bounds (s = k = n) for an m-resilient f and for
    f with W_f = 0 on weights >= m_prime.

    nl_lower is the published value.  It bounds |W| only away from w = 0;
    with an unbalanced outer f the value W_f(0) * 2^(ks - s) at w = 0 can
    be larger, and the bound then fails (a constant f is the extreme case).
    """
    nl = Fraction(2) ** (k * s - 1) - Fraction(2) ** (k * s - k - s - 1) * (2**s - 2 * nl_f) * (2**k - 2 * min_nl_g)
    return {
        "nl_lower": int(nl) if nl.denominator == 1 else float(nl),
        "resiliency_lower": (m + 1) ** 2 - 1,
        "support_resiliency": s * s - (m_prime - 1) ** 2 - 1,
    }


def nl_recursion_bound(nl_f: int, n: int, i: int) -> int:
    """Lower bound on NL(f^i) for self-composition of an n-variable f."""
    bound = nl_f
    for level in range(2, i + 1):
        ni, nprev = n**level, n ** (level - 1)
        bound = (
            2 ** (ni - nprev) * bound
            + 2 ** (ni - n) * nl_f
            - Fraction(2) ** (ni - nprev - n + 1) * bound * nl_f
        )
    return int(bound)


# -- constant-order constructions ---------------------------------------------

def max_order_balanced(n: int) -> TruthTable:
    """Balanced g with the largest possible dual order at 0: n-1 (odd n), n-2 (even n).

    Flips of odd size keep g(0) = 0, flips of even size give 1.  Odd n: the
    all-ones point gets 1.  Even n: the n + 1 points of weight >= n - 1 are
    free and the two with the lowest indices get 1.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    pc = popcounts(n).astype(np.int64)
    k = n - 1 if n % 2 else n - 2
    g = np.zeros(1 << n, dtype=np.uint8)
    fixed = pc <= k
    g[fixed] = (pc[fixed] % 2 == 0) & (pc[fixed] > 0)
    free = np.flatnonzero(~fixed)
    need = (1 << (n - 1)) - int(g.sum())
    g[free[:need]] = 1
    return TruthTable(n, g)


def order_k_base(k: int) -> tuple[TruthTable, tuple[int, ...]]:
    """A sensitivity-order >= k base with pdeg below its arity, and its witness.

    Uses k + 2 variables for every k: a (k + 1)-variable base of odd order k
    would need dual order k = (k + 1) - 1 with even arity, which the maximal
    order bound rules out.
    """
    f = dual(max_order_balanced(k + 2))
    return f, tuple(0 for _ in range(k + 2))


def constant_order_family(k: int, u: int) -> ComposedFunction:
    """((k+2)^u, k, (k+1)^u)-profile via modified composition."""
    if k < 1 or u < 1:
        raise ValueError("need k >= 1 and u >= 1")
    f, y = order_k_base(k)
    return modified_power(f, u, y)


def no_high_order_spot_check(d_max: int = 3, u: int = 2) -> list[tuple]:
    """Bases on d <= d_max variables with order < d, composed with every
    complement pattern: returns the (base, pattern) pairs reaching order d."""
    bad = []
    for d in range(1, d_max + 1):
        for word in range(1 << (1 << d)):
            f = TruthTable.from_int(d, word)
            if max_sensitivity_order(f)[0] >= d:
                continue
            for a in itertools.product((0, 1), repeat=d):
                g = shifted_compose(f, a, u).truth_table()
                if max_sensitivity_order(g)[0] >= d:
                    bad.append((word, a))
    return bad


def g9_sweep(f3: TruthTable) -> list[dict]:
    """Dual of f3(f3 ^ a_1, f3 ^ a_2, f3 ^ a_3) for all a: resiliency and NL."""
    from .core import resiliency_order

    out = []
    for a in itertools.product((0, 1), repeat=f3.n):
        g = dual(shifted_compose(f3, a).truth_table())
        spec = walsh_transform(g)
        out.append({"a": a, "resiliency": resiliency_order(spec), "nonlinearity": nonlinearity(spec)})
    return out


def sixteen_var_sweep(k: int = 4) -> dict:
    """Score f(f ^ a_1, .., f ^ a_k) ^ L for all k-variable bases f and constants a.

    Uses the balanced closed form, so only balanced bases are scored.  With
    v' the support pattern of w, |W(w)| = 2^-k |W_f(v')| prod_{i in v'} |W_f(w_i)| 2^{k(k-|v'|)},
    which gives max |W| and the largest nonzero weight (hence the dual's
    resiliency) per base; the constants only flip signs.  Returns the best
    record plus the table of the first base attaining it.
    """
    n = k * k
    words = np.arange(1 << (1 << k), dtype=np.uint64)
    bits = ((words[:, None] >> np.arange(1 << k, dtype=np.uint64)) & np.uint64(1)).astype(np.int64)
    idx = np.arange(1 << k)
    pc = popcounts(k).astype(np.int64)
    hadamard = 1 - 2 * (popcounts(k)[idx[:, None] & idx[None, :]].astype(np.int64) & 1)
    spec = (1 - 2 * bits) @ hadamard
    balanced = spec[:, 0] == 0
    mags = np.abs(spec[:, 1:])
    peak = mags.max(axis=1)
    deg = np.where(mags > 0, pc[1:], 0).max(axis=1)
    best_abs = np.zeros(len(words), dtype=np.int64)
    top_weight = np.zeros(len(words), dtype=np.int64)
    for v in range(1, 1 << k):
        r = int(pc[v])
        val = np.abs(spec[:, v]) * peak**r * (1 << (k * (k - r))) >> k
        best_abs = np.maximum(best_abs, val)
        top_weight = np.maximum(top_weight, np.where(spec[:, v] != 0, r * deg, 0))
    nl = (1 << (n - 1)) - best_abs // 2
    res = n - top_weight - 1
    scored = np.flatnonzero(balanced)
    pairs = scored.size * (1 << k)
    order = scored[np.lexsort((scored, -nl[scored], -res[scored]))]
    top = int(order[0])
    return {
        "bases_scored": int(scored.size),
        "pairs_scored": int(pairs),
        "best": {"base": top, "resiliency": int(res[top]), "nonlinearity": int(nl[top])},
        "max_nl_by_resiliency": {
            int(m): int(nl[scored][res[scored] == m].max()) for m in np.unique(res[scored])
        },
        "nl_values_by_resiliency": {
            int(m): sorted({int(v) for v in nl[scored][res[scored] == m]}) for m in np.unique(res[scored])
        },
        "first_base": {
            (int(res[w]), int(nl[w])): int(w) for w in scored[::-1]
        },
    }
