"""Gate-level circuit representation and the per-graph qubit layout."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .bigraph import OBJECTIVES, BipartiteGraph, max_objective

GATE_KINDS = ("H", "X", "MCX")
SELF_INVERSE = frozenset(GATE_KINDS)


@dataclass(frozen=True)
class Gate:
    """``controls`` holds ``(qubit, polarity)`` pairs; polarity False is a
    negative (hollow-circle) control that fires on |0>."""

    kind: str
    target: int
    controls: tuple[tuple[int, bool], ...] = ()

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        controls = tuple((int(q), bool(p)) for q, p in self.controls)
        if self.kind != "MCX" and controls:
            raise ValueError(f"{self.kind} takes no controls")
        qs = [q for q, _ in controls]
        if len(set(qs)) != len(qs):
            raise ValueError("duplicate control qubit")
        if self.target in qs:
            raise ValueError("target is also a control")
        object.__setattr__(self, "controls", controls)

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,) + tuple(q for q, _ in self.controls)

    def dump(self) -> str:
        if not self.controls:
            return f"{self.kind} t={self.target}"
        cs = ",".join(f"{'+' if p else '-'}{q}" for q, p in self.controls)
        return f"{self.kind} t={self.target} c={cs}"


def H(target: int) -> Gate:
    return Gate("H", target)


def X(target: int) -> Gate:
    return Gate("X", target)


def MCX(target: int, *controls: tuple[int, bool]) -> Gate:
    return Gate("MCX", target, tuple(controls))


def CNOT(control: int, target: int) -> Gate:
    return Gate("MCX", target, ((control, True),))


@dataclass(frozen=True)
class Circuit:
    qubit_count: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        gates = tuple(self.gates)
        for g in gates:
            if max(g.qubits) >= self.qubit_count or min(g.qubits) < 0:
                raise ValueError(f"gate {g.dump()} outside {self.qubit_count} qubits")
        object.__setattr__(self, "gates", gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def dump(self) -> str:
        return "".join(g.dump() + "\n" for g in self.gates)

    def is_classical(self) -> bool:
        """X/MCX only, the precondition of basis-tracked replay."""
        return all(g.kind in ("X", "MCX") for g in self.gates)

    def gate_table(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Pack an X/MCX circuit into padded arrays for the replay kernels:
        ``(targets, control_qubits, control_polarities, control_counts)``."""
        if not self.is_classical():
            raise ValueError("gate table requires an X/MCX-only circuit")
        width = max((len(g.controls) for g in self.gates), default=0)
        count = len(self.gates)
        targets = np.empty(count, dtype=np.int64)
        ctrl_q = np.zeros((count, max(width, 1)), dtype=np.int64)
        ctrl_pol = np.zeros((count, max(width, 1)), dtype=np.uint8)
        nctrl = np.empty(count, dtype=np.int64)
        for k, g in enumerate(self.gates):
            targets[k] = g.target
            nctrl[k] = len(g.controls)
            for c, (q, p) in enumerate(g.controls):
                ctrl_q[k, c] = q
                ctrl_pol[k, c] = p
        return targets, ctrl_q, ctrl_pol, nctrl


def invert(c: Circuit) -> Circuit:
    for g in c.gates:
        if g.kind not in SELF_INVERSE:
            raise ValueError(f"cannot invert non-self-inverse gate {g.kind}")
    return Circuit(c.qubit_count, c.gates[::-1])


def compose(*circuits: Circuit) -> Circuit:
    if not circuits:
        raise ValueError("nothing to compose")
    width = circuits[0].qubit_count
    gates: list[Gate] = []
    for c in circuits:
        if c.qubit_count != width:
            raise ValueError(f"width mismatch: {c.qubit_count} != {width}")
        gates.extend(c.gates)
    return Circuit(width, tuple(gates))


@dataclass(frozen=True)
class QubitLayout:
    """Role-to-wire map. Pair-keyed roles use 1-based ``(i, j)`` indices; vertex
    wires come first so the vertex register is a prefix of the state index."""

    left_count: int
    right_count: int
    mode: str
    vertex: tuple[int, ...]
    real_edge: dict[tuple[int, int], int]
    virtual_edge: dict[tuple[int, int], int]
    bic: int
    cl: dict[tuple[int, int], int]
    cr: dict[tuple[int, int], int]
    size_flag: dict[int, int]
    oracle_qubit: int
    total_qubits: int
    names: tuple[str, ...] = field(repr=False, compare=False, default=())

    @property
    def n(self) -> int:
        return self.left_count + self.right_count

    def left_vertex(self, i: int) -> int:
        return self.vertex[i - 1]

    def right_vertex(self, j: int) -> int:
        return self.vertex[self.left_count + j - 1]

    @property
    def aux_qubits(self) -> range:
        return range(self.n, self.total_qubits)


def layout(g: BipartiteGraph, mode: str = "edges") -> QubitLayout:
    if mode not in OBJECTIVES:
        raise ValueError(f"unknown mode {mode!r}")
    L, R = g.left_count, g.right_count
    names: list[str] = []

    def take(name: str) -> int:
        names.append(name)
        return len(names) - 1

    vertex = tuple([take(f"v{i}") for i in range(1, L + 1)] + [take(f"u{j}") for j in range(1, R + 1)])
    pairs = [(i, j) for i in range(1, L + 1) for j in range(1, R + 1)]
    real = {p: take(f"e{p[0]},{p[1]}") for p in pairs}
    virtual = {p: take(f"e'{p[0]},{p[1]}") for p in pairs}
    bic = take("bic")
    cl = {(i, j): take(f"cl{i},{j}") for i in range(1, L + 1) for j in range(0, i + 1)}
    cr = {(i, j): take(f"cr{i},{j}") for i in range(1, R + 1) for j in range(0, i + 1)}
    prefix = "ce" if mode == "edges" else "cv"
    flags = {k: take(f"{prefix}{k}") for k in range(1, max_objective_flags(g, mode) + 1)}
    oracle = take("O")
    return QubitLayout(L, R, mode, vertex, real, virtual, bic, cl, cr, flags, oracle, len(names), tuple(names))


def max_objective_flags(g: BipartiteGraph, mode: str) -> int:
    # balanced shares the vertex-count register cv_1..cv_n
    return max_objective(g, "edges") if mode == "edges" else g.n


def circuit_from(layout_: QubitLayout, gates: Iterable[Gate]) -> Circuit:
    return Circuit(layout_.total_qubits, tuple(gates))
