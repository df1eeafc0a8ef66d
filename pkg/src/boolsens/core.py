"""Truth tables, spectral transforms and the per-function property suite.

Points of F_2^n are encoded as integers: index(x) = sum_j x_j * 2^(j-1), so
x_1 is the least-significant bit.  Inner products u.x are taken mod 2.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_VARS = 26


class CapacityError(ValueError):
    """Raised when a table or spectrum would exceed the materialization cap."""


def _check_capacity(n: int) -> None:
    if n > MAX_VARS:
        raise CapacityError(f"n={n} exceeds the {MAX_VARS}-variable table cap")


def popcounts(n: int) -> np.ndarray:
    """Hamming weight of every index in [0, 2^n)."""
    w = np.zeros(1, dtype=np.uint8)
    for _ in range(n):
        w = np.concatenate([w, w + 1])
    return w


def point_index(x) -> int:
    if isinstance(x, (int, np.integer)):
        return int(x)
    return sum(int(b) << j for j, b in enumerate(x))


def point_bits(index: int, n: int) -> tuple[int, ...]:
    return tuple((index >> j) & 1 for j in range(n))


@dataclass(frozen=True, eq=False)
class TruthTable:
    n: int
    bits: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a truth table needs at least one variable")
        _check_capacity(self.n)
        bits = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if bits.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} bits, got shape {bits.shape}")
        if bits.size and bits.max() > 1:
            raise ValueError("truth-table entries must be 0 or 1")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_function(cls, n: int, fn) -> "TruthTable":
        return cls(n, np.array([fn(point_bits(i, n)) & 1 for i in range(1 << n)], dtype=np.uint8))

    @classmethod
    def from_int(cls, n: int, value: int) -> "TruthTable":
        raw = int(value).to_bytes(max(1, (1 << n) // 8), "little")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[: 1 << n]
        return cls(n, bits)

    def to_int(self) -> int:
        return int.from_bytes(np.packbits(self.bits, bitorder="little").tobytes(), "little")

    def __eq__(self, other):
        if not isinstance(other, TruthTable):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((self.n, self.bits.tobytes()))

    def __xor__(self, other: "TruthTable") -> "TruthTable":
        if self.n != other.n:
            raise ValueError("arity mismatch")
        return TruthTable(self.n, self.bits ^ other.bits)

    def __invert__(self) -> "TruthTable":
        return TruthTable(self.n, self.bits ^ 1)

    def __repr__(self):
        return f"TruthTable(n={self.n}, hex={to_hex(self)})"

    def weight(self) -> int:
        return int(self.bits.sum(dtype=np.int64))


@dataclass(frozen=True, eq=False)
class WalshSpectrum:
    n: int
    coeffs: np.ndarray

    def __getitem__(self, u) -> int:
        return int(self.coeffs[point_index(u)])


@dataclass(frozen=True, eq=False)
class AnfPolynomial:
    n: int
    coeffs: np.ndarray

    def monomials(self) -> list[tuple[int, ...]]:
        """Variable sets (1-based) of the monomials with coefficient 1."""
        return [
            tuple(j + 1 for j in range(self.n) if (i >> j) & 1)
            for i in np.flatnonzero(self.coeffs)
        ]


@dataclass
class FunctionProfile:
    n: int
    pdeg: int
    adeg: int
    resiliency_order: int
    nonlinearity: int
    sensitivity: int
    sensitivity_order: int
    dual_sensitivity_order: int
    balanced: bool
    sensitivity_witness: list[int] | None = None
    dual_witness: list[int] | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


# -- constructors -----------------------------------------------------------

def constant(n: int, value: int = 0) -> TruthTable:
    return TruthTable(n, np.full(1 << n, value & 1, dtype=np.uint8))


def parity_fn(n: int) -> TruthTable:
    return TruthTable(n, popcounts(n) & 1)


def and_fn(n: int) -> TruthTable:
    bits = np.zeros(1 << n, dtype=np.uint8)
    bits[-1] = 1
    return TruthTable(n, bits)


def majority_fn(n: int) -> TruthTable:
    return TruthTable(n, (2 * popcounts(n).astype(np.int64) > n).astype(np.uint8))


def variable_fn(n: int, j: int) -> TruthTable:
    """The projection x_j (1-based)."""
    return TruthTable(n, ((np.arange(1 << n) >> (j - 1)) & 1).astype(np.uint8))


# -- evaluation and transforms ---------------------------------------------

def eval_point(f: TruthTable, x) -> int:
    i = point_index(x)
    if not 0 <= i < (1 << f.n):
        raise ValueError(f"point {x!r} out of range for n={f.n}")
    if not isinstance(x, (int, np.integer)) and len(x) != f.n:
        raise ValueError(f"point has {len(x)} coordinates, expected {f.n}")
    return int(f.bits[i])


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard butterfly, in place on a copy."""
    a = np.array(values, copy=True)
    size = a.shape[0]
    h = 1
    while h < size:
        v = a.reshape(-1, 2, h)
        lo = v[:, 0, :]
        hi = v[:, 1, :]
        lo += hi
        hi *= -2
        hi += lo
        h *= 2
    return a


def walsh_transform(f: TruthTable) -> WalshSpectrum:
    _check_capacity(f.n)
    signs = 1 - 2 * f.bits.astype(np.int32)
    return WalshSpectrum(f.n, fwht(signs))


def inverse_walsh(spec: WalshSpectrum) -> TruthTable:
    signs = fwht(spec.coeffs.astype(np.int64)) >> spec.n
    if not np.all(np.abs(signs) == 1):
        raise ValueError("spectrum is not the spectrum of a Boolean function")
    return TruthTable(spec.n, ((1 - signs) // 2).astype(np.uint8))


def _mobius(bits: np.ndarray, n: int) -> np.ndarray:
    a = np.array(bits, dtype=np.uint8, copy=True)
    for i in range(n):
        v = a.reshape(-1, 2, 1 << i)
        v[:, 1, :] ^= v[:, 0, :]
    return a


def mobius_anf(f: TruthTable) -> AnfPolynomial:
    _check_capacity(f.n)
    return AnfPolynomial(f.n, _mobius(f.bits, f.n))


def anf_to_table(p: AnfPolynomial) -> TruthTable:
    return TruthTable(p.n, _mobius(p.coeffs, p.n))


# -- degree, resiliency, nonlinearity --------------------------------------

def _spectrum(f) -> WalshSpectrum:
    return f if isinstance(f, WalshSpectrum) else walsh_transform(f)


def pdeg(f) -> int:
    """Real polynomial degree: largest weight in the Walsh support."""
    spec = _spectrum(f)
    support = np.flatnonzero(spec.coeffs)
    return int(popcounts(spec.n)[support].max())


def algebraic_degree(f: TruthTable) -> int:
    coeffs = mobius_anf(f).coeffs
    support = np.flatnonzero(coeffs)
    if support.size == 0:
        return 0
    return int(popcounts(f.n)[support].max())


def resiliency_order(f) -> int:
    """-1 for unbalanced functions, else the largest m with W zero on weights <= m."""
    spec = _spectrum(f)
    if spec.coeffs[0] != 0:
        return -1
    support = np.flatnonzero(spec.coeffs)
    return int(popcounts(spec.n)[support].min()) - 1


def nonlinearity(f) -> int:
    spec = _spectrum(f)
    return (1 << (spec.n - 1)) - int(np.abs(spec.coeffs).max()) // 2


def is_balanced(f: TruthTable) -> bool:
    return 2 * f.weight() == (1 << f.n)


def dual(f: TruthTable) -> TruthTable:
    return TruthTable(f.n, f.bits ^ parity_fn(f.n).bits)


# -- sensitivity -------------------------------------------------------------

def sensitivity_at(f: TruthTable, x) -> int:
    i = point_index(x)
    return sum(int(f.bits[i] != f.bits[i ^ (1 << j)]) for j in range(f.n))


def sensitivity(f: TruthTable) -> tuple[int, tuple[int, ...]]:
    idx = np.arange(1 << f.n)
    counts = np.zeros(1 << f.n, dtype=np.int32)
    for j in range(f.n):
        counts += f.bits != f.bits[idx ^ (1 << j)]
    best = int(np.argmax(counts))
    return int(counts[best]), point_bits(best, f.n)


def _flip_masks(n: int, k: int) -> Iterable[int]:
    for subset in itertools.combinations(range(n), k):
        yield sum(1 << j for j in subset)


def _order_scan(f: TruthTable, dual_mode: bool) -> tuple[int, tuple[int, ...] | None]:
    """Largest k with a point meeting the k-th order (dual) condition everywhere."""
    idx = np.arange(1 << f.n)
    alive = np.ones(1 << f.n, dtype=bool)
    best, witness = 0, None
    for k in range(1, f.n + 1):
        # flips of odd size must preserve the value in dual mode
        want_change = not (dual_mode and k % 2 == 1)
        for mask in _flip_masks(f.n, k):
            changed = f.bits != f.bits[idx ^ mask]
            alive &= changed if want_change else ~changed
            if not alive.any():
                return best, witness
        best = k
        witness = point_bits(int(np.argmax(alive)), f.n)
    return best, witness


def max_sensitivity_order(f: TruthTable) -> tuple[int, tuple[int, ...] | None]:
    return _order_scan(f, dual_mode=False)


def max_dual_sensitivity_order(f: TruthTable) -> tuple[int, tuple[int, ...] | None]:
    return _order_scan(f, dual_mode=True)


def is_k_order_sensitive_at(f: TruthTable, x, k: int) -> bool:
    i = point_index(x)
    v = f.bits[i]
    for size in range(1, k + 1):
        for mask in _flip_masks(f.n, size):
            if f.bits[i ^ mask] == v:
                return False
    return True


def is_k_order_dual_sensitive_at(f: TruthTable, x, k: int) -> bool:
    i = point_index(x)
    v = f.bits[i]
    for size in range(1, k + 1):
        for mask in _flip_masks(f.n, size):
            if (f.bits[i ^ mask] == v) != (size % 2 == 1):
                return False
    return True


def profile(f: TruthTable) -> FunctionProfile:
    spec = walsh_transform(f)
    s, _ = sensitivity(f)
    order, owit = max_sensitivity_order(f)
    dorder, dwit = max_dual_sensitivity_order(f)
    if order == 0:
        _, owit = sensitivity(f)
    return FunctionProfile(
        n=f.n,
        pdeg=pdeg(spec),
        adeg=algebraic_degree(f),
        resiliency_order=resiliency_order(spec),
        nonlinearity=nonlinearity(spec),
        sensitivity=s,
        sensitivity_order=order,
        dual_sensitivity_order=dorder,
        balanced=bool(spec.coeffs[0] == 0),
        sensitivity_witness=list(owit) if owit is not None else None,
        dual_witness=list(dwit) if dwit is not None else None,
    )


# -- text format ---------------------------------------------------------------

def to_hex(f: TruthTable) -> str:
    return np.packbits(f.bits, bitorder="little").tobytes().hex()


def from_hex(n: int, text: str) -> TruthTable:
    raw = np.frombuffer(bytes.fromhex(text.strip()), dtype=np.uint8)
    bits = np.unpackbits(raw, bitorder="little")
    if bits.size < (1 << n):
        raise ValueError(f"hex string too short for n={n}")
    if bits[1 << n:].any():
        raise ValueError("padding bits beyond 2^n must be zero")
    return TruthTable(n, bits[: 1 << n])


def dumps_table(f: TruthTable) -> str:
    return f"n={f.n}\n{to_hex(f)}\n"


def loads_table(text: str) -> TruthTable:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) != 2 or not lines[0].startswith("n="):
        raise ValueError("truth-table file must be 'n=<k>' followed by one hex line")
    return from_hex(int(lines[0][2:]), lines[1])


def read_table(path) -> TruthTable:
    with open(path) as fh:
        return loads_table(fh.read())


def write_table(f: TruthTable, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_table(f))


def complement_point(x: Sequence[int]) -> tuple[int, ...]:
    return tuple(1 - b for b in x)
