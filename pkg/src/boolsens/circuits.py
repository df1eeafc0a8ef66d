"""Gate-level circuits over {NOT, XOR2, AND2} for amplified functions.

Netlist text format::

    inputs 3
    g3 = AND g0 g1
    g4 = XOR g3 g2
    output g4

Inputs are always g0 .. g(n-1); other gates follow in topological order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .core import TruthTable, mobius_anf

INPUT, CONST0, CONST1, NOT, XOR2, AND2 = "INPUT", "CONST0", "CONST1", "NOT", "XOR", "AND"
_ARITY = {INPUT: 0, CONST0: 0, CONST1: 0, NOT: 1, XOR2: 2, AND2: 2}


class NetlistParseError(ValueError):
    pass


@dataclass(frozen=True)
class Netlist:
    n_inputs: int
    gates: tuple[tuple[str, tuple[int, ...]], ...]  # gate id = position
    output: int
    instances: int = field(default=1, compare=False)

    def __post_init__(self):
        for gid, (kind, fanin) in enumerate(self.gates):
            if kind not in _ARITY or len(fanin) != _ARITY[kind]:
                raise ValueError(f"gate g{gid}: bad kind or arity")
            if (kind == INPUT) != (gid < self.n_inputs):
                raise ValueError(f"gate g{gid}: inputs must come first")
            if any(not 0 <= a < gid for a in fanin):
                raise ValueError(f"gate g{gid}: fan-in must precede the gate")
        if not 0 <= self.output < len(self.gates):
            raise ValueError("output id out of range")


@dataclass(frozen=True)
class CircuitStats:
    and_count: int
    xor_count: int
    not_count: int
    const_count: int
    total: int
    depth: int


class _Builder:
    def __init__(self, n_inputs: int):
        self.n = n_inputs
        self.gates = [(INPUT, ()) for _ in range(n_inputs)]

    def add(self, kind: str, *fanin: int) -> int:
        self.gates.append((kind, tuple(fanin)))
        return len(self.gates) - 1

    def xor_tree(self, ids: list[int]) -> int:
        """Balanced binary XOR tree; pairs adjacent signals level by level."""
        if not ids:
            return self.add(CONST0)
        layer = list(ids)
        while len(layer) > 1:
            nxt = [self.add(XOR2, layer[i], layer[i + 1]) for i in range(0, len(layer) - 1, 2)]
            if len(layer) % 2:
                nxt.append(layer[-1])
            layer = nxt
        return layer[0]

    def and_chain(self, ids: list[int]) -> int:
        """Balanced AND tree (a chain for two or three inputs)."""
        layer = list(ids)
        while len(layer) > 1:
            nxt = [self.add(AND2, layer[i], layer[i + 1]) for i in range(0, len(layer) - 1, 2)]
            if len(layer) % 2:
                nxt.append(layer[-1])
            layer = nxt
        return layer[0]

    def inline(self, net: Netlist, inputs: list[int]) -> int:
        """Copy a netlist with its inputs wired to `inputs`; returns the new output id."""
        remap = list(inputs)
        for kind, fanin in net.gates[net.n_inputs:]:
            remap.append(self.add(kind, *(remap[a] for a in fanin)))
        return remap[net.output]

    def build(self, output: int, instances: int = 1) -> Netlist:
        return Netlist(self.n, tuple(self.gates), output, instances)


def synth_from_anf(f: TruthTable) -> Netlist:
    """AND trees for each ANF monomial, XORed together in a balanced tree."""
    if f.n > 16:
        raise ValueError("synthesis limited to 16 inputs")
    b = _Builder(f.n)
    terms = []
    for mono in mobius_anf(f).monomials():
        if not mono:
            terms.append(b.add(CONST1))
        elif len(mono) == 1:
            terms.append(mono[0] - 1)
        else:
            terms.append(b.and_chain([v - 1 for v in mono]))
    return b.build(b.xor_tree(terms))


def layered_amplify(base: Netlist, u: int, constants=None) -> Netlist:
    """Layered circuit for the u-fold composition of the base.

    constants[i][j] (levels 2..u) is XORed onto the j-th output of the lower
    layer before it feeds level i + 2; a 1 becomes a NOT gate.
    """
    if u < 1:
        raise ValueError("u must be at least 1")
    d = base.n_inputs
    n = d**u
    b = _Builder(n)
    signals = list(range(n))
    instances = 0
    for level in range(1, u + 1):
        if level > 1 and constants is not None:
            c = constants[level - 2]
            signals = [b.add(NOT, s) if c[j % d] else s for j, s in enumerate(signals)]
        outs = []
        for start in range(0, len(signals), d):
            outs.append(b.inline(base, signals[start:start + d]))
            instances += 1
        signals = outs
    return b.build(signals[0], instances)


def instance_count(d: int, u: int) -> int:
    return (d**u - 1) // (d - 1) if d > 1 else u


def append_parity(net: Netlist) -> Netlist:
    """Output XOR (x_1 ^ .. ^ x_n): a balanced n - 1 gate tree plus one combining XOR."""
    b = _Builder(net.n_inputs)
    out = b.inline(net, list(range(net.n_inputs)))
    par = b.xor_tree(list(range(net.n_inputs)))
    return b.build(b.add(XOR2, out, par), net.instances)


def _eval_gates(net: Netlist, inputs: list[np.ndarray]) -> np.ndarray:
    vals: list = list(inputs)
    shape = inputs[0].shape if inputs else (1,)
    for kind, fanin in net.gates[net.n_inputs:]:
        if kind == XOR2:
            vals.append(vals[fanin[0]] ^ vals[fanin[1]])
        elif kind == AND2:
            vals.append(vals[fanin[0]] & vals[fanin[1]])
        elif kind == NOT:
            vals.append(vals[fanin[0]] ^ 1)
        elif kind == CONST0:
            vals.append(np.zeros(shape, dtype=np.uint8))
        else:
            vals.append(np.ones(shape, dtype=np.uint8))
    return vals[net.output]


def simulate(net: Netlist, x) -> int:
    bits = np.asarray(x, dtype=np.uint8).ravel()
    if bits.size != net.n_inputs:
        raise ValueError(f"expected {net.n_inputs} input bits")
    return int(_eval_gates(net, [bits[i:i + 1] for i in range(net.n_inputs)])[0])


def simulate_batch(net: Netlist, points: np.ndarray) -> np.ndarray:
    """Rows of input bits -> output bits."""
    pts = np.asarray(points, dtype=np.uint8)
    return _eval_gates(net, [pts[:, i] for i in range(net.n_inputs)])


def simulate_table(net: Netlist) -> TruthTable:
    n = net.n_inputs
    if n > 24:
        raise ValueError("full simulation limited to 24 inputs")
    idx = np.arange(1 << n)
    cols = [((idx >> i) & 1).astype(np.uint8) for i in range(n)]
    return TruthTable(n, _eval_gates(net, cols).astype(np.uint8))


def stats(net: Netlist) -> CircuitStats:
    counts = {k: 0 for k in _ARITY}
    depth = [0] * len(net.gates)
    for gid, (kind, fanin) in enumerate(net.gates):
        counts[kind] += 1
        if kind != INPUT:
            depth[gid] = 1 + max((depth[a] for a in fanin), default=0)
    consts = counts[CONST0] + counts[CONST1]
    total = counts[AND2] + counts[XOR2] + counts[NOT] + consts
    return CircuitStats(counts[AND2], counts[XOR2], counts[NOT], consts, total, depth[net.output])


def emit(net: Netlist) -> str:
    lines = [f"inputs {net.n_inputs}"]
    for gid, (kind, fanin) in enumerate(net.gates):
        if kind == INPUT:
            continue
        args = "".join(f" g{a}" for a in fanin)
        lines.append(f"g{gid} = {kind}{args}")
    lines.append(f"output g{net.output}")
    return "\n".join(lines) + "\n"


_GATE = re.compile(r"^g(\d+)\s*=\s*([A-Z0-9]+)((?:\s+g\d+)*)\s*$")


def parse(text: str) -> Netlist:
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0][1].startswith("inputs "):
        raise NetlistParseError("line 1: expected 'inputs <n>'")
    try:
        n = int(lines[0][1].split()[1])
    except (IndexError, ValueError):
        raise NetlistParseError(f"line {lines[0][0]}: bad input count") from None
    gates = [(INPUT, ()) for _ in range(n)]
    output = None
    for lineno, ln in lines[1:]:
        if ln.startswith("output"):
            m = re.match(r"^output\s+g(\d+)$", ln)
            if not m:
                raise NetlistParseError(f"line {lineno}: bad output line")
            output = int(m.group(1))
            continue
        m = _GATE.match(ln)
        if not m:
            raise NetlistParseError(f"line {lineno}: cannot parse gate")
        gid, kind = int(m.group(1)), m.group(2)
        if gid != len(gates):
            raise NetlistParseError(f"line {lineno}: gate ids must be consecutive from g{n}")
        if kind not in _ARITY or kind == INPUT:
            raise NetlistParseError(f"line {lineno}: unknown gate kind {kind}")
        fanin = tuple(int(t[1:]) for t in m.group(3).split())
        if len(fanin) != _ARITY[kind] or any(a >= gid for a in fanin):
            raise NetlistParseError(f"line {lineno}: bad fan-in")
        gates.append((kind, fanin))
    if output is None:
        raise NetlistParseError("missing output line")
    try:
        return Netlist(n, tuple(gates), output)
    except ValueError as exc:
        raise NetlistParseError(str(exc)) from None
