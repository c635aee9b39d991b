"""Dense statevector and basis-tracked execution of a :class:`GroverPlan`,
plus measurement sampling and distribution export."""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .circuit import Circuit, Gate
from .oracle import GroverPlan

DEFAULT_DENSE_CAP = 26
DEFAULT_TRACKED_LIMIT = 20
NORM_TOL = 1e-9


class EngineError(RuntimeError):
    pass


class WidthCapError(EngineError):
    pass


class OracleValidationError(EngineError):
    pass


class AuxNotRestoredError(EngineError):
    pass


def dense_cap() -> int:
    return int(os.environ.get("QMBS_DENSE_CAP", DEFAULT_DENSE_CAP))


@dataclass
class VertexDistribution:
    """Exact measurement probabilities of the n-qubit vertex register."""

    n: int
    probs: np.ndarray

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=np.float64)
        if self.probs.shape != (1 << self.n,):
            raise ValueError("distribution length must be 2**n")

    def label(self, x: int) -> str:
        return format(x, f"0{self.n}b")

    def labels(self) -> list[str]:
        return [self.label(x) for x in range(1 << self.n)]

    def __getitem__(self, label: str) -> float:
        return float(self.probs[int(label, 2)])

    def mass(self, labels) -> float:
        return float(sum(self[lb] for lb in labels))

    def top(self) -> int:
        return int(np.argmax(self.probs))


@dataclass
class Histogram:
    n: int
    counts: np.ndarray
    shots: int
    seed: int | None

    def __getitem__(self, label: str) -> int:
        return int(self.counts[int(label, 2)])

    def as_dict(self) -> dict[str, int]:
        return {format(x, f"0{self.n}b"): int(c) for x, c in enumerate(self.counts) if c}


@dataclass
class RunResult:
    """``state`` is the full statevector (dense) or the vertex-register
    amplitudes (tracked); ``snapshots[t]`` is the distribution after t
    Grover iterations."""

    engine: str
    state: np.ndarray
    snapshots: list[VertexDistribution] = field(default_factory=list)

    @property
    def final(self) -> VertexDistribution:
        return self.snapshots[-1]


# ---------------------------------------------------------------- dense

def zero_state(qubits: int) -> np.ndarray:
    state = np.zeros(1 << qubits, dtype=np.complex128)
    state[0] = 1.0
    return state


def basis_state(qubits: int, bits: dict[int, int] | list[int]) -> np.ndarray:
    """Basis vector with the listed qubits set (mapping or list of 0/1)."""
    items = bits.items() if isinstance(bits, dict) else enumerate(bits)
    index = 0
    for q, b in items:
        if b:
            index |= 1 << (qubits - 1 - q)
    state = np.zeros(1 << qubits, dtype=np.complex128)
    state[index] = 1.0
    return state


def apply_gate(state: np.ndarray, gate: Gate) -> np.ndarray:
    """Apply ``gate`` in place and return ``state``."""
    qubits = state.shape[0].bit_length() - 1
    if max(gate.qubits) >= qubits:
        raise ValueError(f"gate {gate.dump()} does not fit {qubits} qubits")
    if gate.kind == "H":
        _kernels.apply_h(state, qubits, gate.target)
    else:
        controls = [q for q, _ in gate.controls]
        pols = [p for _, p in gate.controls]
        _kernels.apply_mcx(state, qubits, gate.target, controls, pols)
    return state


def apply_circuit(state: np.ndarray, circuit: Circuit, check_norm: bool = False) -> np.ndarray:
    for g in circuit.gates:
        apply_gate(state, g)
        if check_norm:
            _assert_norm(state, g)
    return state


def _assert_norm(state: np.ndarray, g: Gate) -> None:
    norm = float(np.vdot(state, state).real)
    if abs(norm - 1.0) > NORM_TOL:
        raise EngineError(f"norm drifted to {norm!r} after {g.dump()}")


def vertex_marginal(state: np.ndarray, n: int) -> np.ndarray:
    """Probabilities of the leading ``n`` qubits."""
    return (np.abs(state) ** 2).reshape(1 << n, -1).sum(axis=1)


def run_dense(plan: GroverPlan, cap: int | None = None, check_norm: bool = False) -> RunResult:
    cap = dense_cap() if cap is None else cap
    qubits = plan.layout.total_qubits
    if qubits > cap:
        raise WidthCapError(
            f"dense engine needs {qubits} qubits ({16 << qubits} bytes); cap is {cap} (set QMBS_DENSE_CAP)"
        )
    n = plan.n
    state = apply_circuit(zero_state(qubits), plan.prep, check_norm)
    snaps = [VertexDistribution(n, vertex_marginal(state, n))]
    for _ in range(plan.iterations):
        apply_circuit(state, plan.oracle, check_norm)
        apply_circuit(state, plan.diffusion, check_norm)
        snaps.append(VertexDistribution(n, vertex_marginal(state, n)))
    return RunResult("dense", state, snaps)


# ---------------------------------------------------------------- basis-tracked

def validate_oracle(plan: GroverPlan) -> None:
    oracle = plan.oracle
    if not oracle.is_classical():
        raise OracleValidationError("oracle contains non X/MCX gates")
    o = plan.layout.oracle_qubit
    for g in oracle.gates:
        if any(q == o for q, _ in g.controls):
            raise OracleValidationError(f"oracle qubit used as a control in {g.dump()}")
        if g.target == o and g.kind != "MCX":
            raise OracleValidationError("bare X on the oracle qubit is a global phase, not a kickback")


def oracle_phases(plan: GroverPlan) -> np.ndarray:
    """Replay the oracle on every vertex basis state; returns the +-1 phase
    picked up by each, after checking that every aux wire came back to 0."""
    validate_oracle(plan)
    lay = plan.layout
    table = plan.oracle.gate_table()
    sign, restored = _kernels.oracle_replay(lay.n, lay.total_qubits, *table, lay.oracle_qubit)
    if not restored.all():
        bad = int(np.flatnonzero(~restored)[0])
        raise AuxNotRestoredError(f"aux wires not restored for basis {format(bad, f'0{lay.n}b')}")
    return sign


def run_basis_tracked(plan: GroverPlan, limit: int = DEFAULT_TRACKED_LIMIT) -> RunResult:
    """Amplitudes live on the vertex register only. The oracle is a classical
    reversible circuit, so its action is a diagonal sign computed by replay;
    diffusion is applied as the mean inversion ``a -> 2*mean(a) - a``."""
    n = plan.n
    if n > limit:
        raise WidthCapError(f"basis-tracked engine limited to n={limit}, got n={n}")
    sign = oracle_phases(plan)
    amps = np.full(1 << n, 1.0 / np.sqrt(1 << n), dtype=np.complex128)
    snaps = [VertexDistribution(n, np.abs(amps) ** 2)]
    for _ in range(plan.iterations):
        amps *= sign
        amps = 2.0 * amps.mean() - amps
        snaps.append(VertexDistribution(n, np.abs(amps) ** 2))
    return RunResult("tracked", amps, snaps)


ENGINES = {"dense": run_dense, "tracked": run_basis_tracked}


def run(plan: GroverPlan, engine: str = "tracked") -> RunResult:
    try:
        runner = ENGINES[engine]
    except KeyError:
        raise ValueError(f"unknown engine {engine!r}") from None
    return runner(plan)


# ---------------------------------------------------------------- classical replay

def replay_bits(circuit: Circuit, bits: list[int]) -> list[int]:
    """Run an X/MCX circuit on one classical bit list (one entry per wire)."""
    bits = list(bits)
    for g in circuit.gates:
        if g.kind == "H":
            raise ValueError("classical replay cannot apply H")
        if all(bits[q] == int(p) for q, p in g.controls):
            bits[g.target] ^= 1
    return bits


# ---------------------------------------------------------------- sampling / export

def _normalised(probs: np.ndarray) -> np.ndarray:
    p = np.clip(probs, 0.0, None)
    return p / p.sum()


def sample(dist: VertexDistribution, shots: int, seed: int | None = None) -> Histogram:
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, _normalised(dist.probs))
    return Histogram(dist.n, counts, shots, seed)


def measure(dist: VertexDistribution, rng: np.random.Generator) -> int:
    """Draw a single vertex-register outcome."""
    return int(rng.choice(dist.probs.shape[0], p=_normalised(dist.probs)))


def distribution_rows(dist: VertexDistribution, hist: Histogram | None = None) -> list[dict]:
    rows = []
    for x in range(1 << dist.n):
        rows.append({
            "label": dist.label(x),
            "probability": round(float(dist.probs[x]), 9),
            "count": int(hist.counts[x]) if hist is not None else None,
        })
    return rows


def distribution_csv(dist: VertexDistribution, hist: Histogram | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", "probability", "count"])
    for row in distribution_rows(dist, hist):
        count = "" if row["count"] is None else row["count"]
        w.writerow([row["label"], f"{dist.probs[int(row['label'], 2)]:.9f}", count])
    return buf.getvalue()


def distribution_json(dist: VertexDistribution, hist: Histogram | None = None, iterations: int | None = None) -> str:
    doc = {
        "seed": hist.seed if hist is not None else None,
        "shots": hist.shots if hist is not None else None,
        "iterations": iterations,
        "rows": distribution_rows(dist, hist),
    }
    return json.dumps(doc, indent=2) + "\n"
