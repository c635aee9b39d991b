"""Builders for the biclique-check, size-count, kickback and diffusion
subcircuits, assembled into a :class:`GroverPlan`."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bigraph import OBJECTIVES, BipartiteGraph
from .circuit import CNOT, MCX, Circuit, Gate, H, QubitLayout, X, circuit_from, compose, invert, layout


@dataclass(frozen=True)
class TargetSpec:
    """Which size flags the kickback reads: exactly ``k``, or every flag
    ``>= k`` when ``threshold`` is set."""

    k: int
    threshold: bool = False

    def __str__(self) -> str:
        return f">={self.k}" if self.threshold else f"={self.k}"


@dataclass(frozen=True)
class GroverPlan:
    layout: QubitLayout
    prep: Circuit
    oracle: Circuit
    diffusion: Circuit
    iterations: int
    target: TargetSpec
    objective: str

    @property
    def n(self) -> int:
        return self.layout.n

    def full_circuit(self) -> Circuit:
        return compose(self.prep, *([self.oracle, self.diffusion] * self.iterations))


def build_ubic(g: BipartiteGraph, lay: QubitLayout) -> Circuit:
    """Biclique check: real edges, virtual edges, XOR into the virtual wires,
    then a negatively controlled AND into ``bic``."""
    _check_layout(g, lay)
    pairs = [(i, j) for i in range(1, g.left_count + 1) for j in range(1, g.right_count + 1)]
    gates: list[Gate] = []
    for i, j in g.sorted_edges():
        gates.append(MCX(lay.real_edge[i, j], (lay.left_vertex(i), True), (lay.right_vertex(j), True)))
    for i, j in pairs:
        gates.append(MCX(lay.virtual_edge[i, j], (lay.left_vertex(i), True), (lay.right_vertex(j), True)))
    for p in pairs:
        gates.append(CNOT(lay.real_edge[p], lay.virtual_edge[p]))
    gates.append(MCX(lay.bic, *((lay.virtual_edge[p], False) for p in pairs)))
    return circuit_from(lay, gates)


def _vertex_count_dp(lay: QubitLayout, side: str) -> list[Gate]:
    # cl[i, j] = cl[i-1, j] & ~v_i ; cl[i, j+1] = cl[i-1, j] & v_i, with bic as cl[0, 0]
    if side == "left":
        size, reg, wire = lay.left_count, lay.cl, lay.left_vertex
    else:
        size, reg, wire = lay.right_count, lay.cr, lay.right_vertex
    gates: list[Gate] = []
    for i in range(1, size + 1):
        sources = [lay.bic] if i == 1 else [reg[i - 1, j] for j in range(i)]
        for j, src in enumerate(sources):
            gates.append(MCX(reg[i, j], (src, True), (wire(i), False)))
        for j, src in enumerate(sources):
            gates.append(MCX(reg[i, j + 1], (src, True), (wire(i), True)))
    return gates


def _usize(g: BipartiteGraph, lay: QubitLayout, mode: str, mapping) -> Circuit:
    _check_layout(g, lay)
    if lay.mode != mode:
        raise ValueError(f"layout built for {lay.mode!r}, need {mode!r}")
    gates = _vertex_count_dp(lay, "left") + _vertex_count_dp(lay, "right")
    L, R = lay.left_count, lay.right_count
    for i in range(1, L + 1):
        for j in range(1, R + 1):
            k = mapping(i, j)
            if k is not None:
                gates.append(MCX(lay.size_flag[k], (lay.cl[L, i], True), (lay.cr[R, j], True)))
    return circuit_from(lay, gates)


def build_usize_edges(g: BipartiteGraph, lay: QubitLayout) -> Circuit:
    """Count both sides, then map ``(i, j) -> ce_{i*j}``."""
    return _usize(g, lay, "edges", lambda i, j: i * j)


def build_usize_vertices(g: BipartiteGraph, lay: QubitLayout) -> Circuit:
    return _usize(g, lay, "vertices", lambda i, j: i + j)


def build_usize_balanced(g: BipartiteGraph, lay: QubitLayout) -> Circuit:
    return _usize(g, lay, "balanced", lambda i, j: 2 * i if i == j else None)


USIZE_BUILDERS = {
    "edges": build_usize_edges,
    "vertices": build_usize_vertices,
    "balanced": build_usize_balanced,
}


def build_kickback(lay: QubitLayout, target: TargetSpec) -> Circuit:
    top = len(lay.size_flag)
    if not 1 <= target.k <= top:
        raise ValueError(f"k={target.k} outside flag range 1..{top}")
    ks = range(target.k, top + 1) if target.threshold else [target.k]
    return circuit_from(lay, [CNOT(lay.size_flag[k], lay.oracle_qubit) for k in ks])


def build_prep(lay: QubitLayout) -> Circuit:
    gates = [H(q) for q in lay.vertex]
    gates += [X(lay.oracle_qubit), H(lay.oracle_qubit)]
    return circuit_from(lay, gates)


def build_diffusion(lay: QubitLayout) -> Circuit:
    """Inversion about the mean on the vertex register only."""
    vs = lay.vertex
    last = vs[-1]
    gates = [H(q) for q in vs] + [X(q) for q in vs]
    gates += [H(last), MCX(last, *((q, True) for q in vs[:-1])), H(last)]
    gates += [X(q) for q in vs] + [H(q) for q in vs]
    return circuit_from(lay, gates)


def build_oracle(g: BipartiteGraph, lay: QubitLayout, target: TargetSpec) -> Circuit:
    ubic = build_ubic(g, lay)
    usize = USIZE_BUILDERS[lay.mode](g, lay)
    return compose(ubic, usize, build_kickback(lay, target), invert(usize), invert(ubic))


def iteration_count(N: int, M: int) -> int:
    """Grover iterations ``floor(pi/4 * sqrt(N/M))``."""
    if M < 1:
        raise ValueError("iteration count needs at least one solution")
    if M > N:
        raise ValueError("more solutions than states")
    return math.floor(math.pi / 4 * math.sqrt(N / M))


def build_plan(g: BipartiteGraph, objective: str, target: TargetSpec, M: int,
               fallback_iterations: int = 0, lay: QubitLayout | None = None) -> GroverPlan:
    """Assemble prep, oracle and diffusion. With ``M == 0`` the iteration
    count is ``fallback_iterations`` (0 measures the equal superposition)."""
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    if M < 0:
        raise ValueError("M must be non-negative")
    lay = lay if lay is not None else layout(g, objective)
    iterations = iteration_count(1 << g.n, M) if M >= 1 else fallback_iterations
    return GroverPlan(
        layout=lay,
        prep=build_prep(lay),
        oracle=build_oracle(g, lay, target),
        diffusion=build_diffusion(lay),
        iterations=iterations,
        target=target,
        objective=objective,
    )


def _check_layout(g: BipartiteGraph, lay: QubitLayout) -> None:
    if (lay.left_count, lay.right_count) != (g.left_count, g.right_count):
        raise ValueError("layout was built for a different graph shape")
