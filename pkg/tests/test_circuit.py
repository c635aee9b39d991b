from pathlib import Path

import numpy as np
import pytest

from qmbs.bigraph import BipartiteGraph, gen_synthetic
from qmbs.circuit import CNOT, MCX, Circuit, Gate, H, X, compose, invert, layout
from qmbs.oracle import build_ubic
from qmbs.sim import apply_circuit

DATA = Path(__file__).parent / "data"


def derived_total(left, right, mode):
    n = left + right
    counters = sum(i + 1 for i in range(1, left + 1)) + sum(i + 1 for i in range(1, right + 1))
    flags = left * right if mode == "edges" else n
    return n + 2 * left * right + 1 + counters + flags + 1


class TestGate:
    def test_dump(self):
        assert MCX(3, (0, True), (1, False)).dump() == "MCX t=3 c=+0,-1"
        assert CNOT(2, 5).dump() == "MCX t=5 c=+2"
        assert H(1).dump() == "H t=1"
        assert X(0).dump() == "X t=0"

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(kind="MCX", target=1, controls=((1, True),)),
            dict(kind="MCX", target=2, controls=((0, True), (0, False))),
            dict(kind="H", target=0, controls=((1, True),)),
            dict(kind="Z", target=0),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            Gate(**kwargs)

    def test_circuit_width_checked(self):
        with pytest.raises(ValueError):
            Circuit(2, (CNOT(0, 2),))


class TestInvertCompose:
    def test_reverse(self):
        gates = (H(0), X(1), CNOT(0, 1))
        c = Circuit(2, gates)
        assert invert(c).gates == gates[::-1]
        assert invert(invert(c)) == c

    def test_empty(self):
        assert invert(Circuit(3)) == Circuit(3)

    def test_compose(self):
        a = Circuit(2, (H(0),))
        b = Circuit(2, (X(1), CNOT(1, 0)))
        assert compose(a, Circuit(2)) == a
        assert len(compose(a, b)) == len(a) + len(b)
        with pytest.raises(ValueError):
            compose(a, Circuit(3))

    def test_compose_with_inverse_is_identity(self, kernel_backend):
        rng = np.random.default_rng(5)
        gates = []
        for _ in range(30):
            t = int(rng.integers(4))
            if rng.random() < 0.3:
                gates.append(H(t))
            else:
                others = [q for q in range(4) if q != t]
                cs = rng.choice(others, size=int(rng.integers(0, 3)), replace=False)
                gates.append(MCX(t, *((int(q), bool(rng.integers(2))) for q in cs)))
        c = Circuit(4, tuple(gates))
        psi = rng.normal(size=16) + 1j * rng.normal(size=16)
        psi /= np.linalg.norm(psi)
        out = apply_circuit(psi.copy(), compose(c, invert(c)))
        np.testing.assert_allclose(out, psi, atol=1e-12)

    def test_ubic_then_inverse_is_identity(self, toy, kernel_backend):
        lay = layout(toy)
        ubic = build_ubic(toy, lay)
        # U_bic only touches the first 13 wires: vertices, edges, bic
        sub = Circuit(13, ubic.gates)
        rng = np.random.default_rng(0)
        psi = rng.normal(size=1 << 13) + 1j * rng.normal(size=1 << 13)
        psi /= np.linalg.norm(psi)
        out = apply_circuit(psi.copy(), compose(sub, invert(sub)))
        np.testing.assert_allclose(out, psi, atol=1e-12)
        # and it is a permutation of basis states that is not the identity on its own
        assert not np.allclose(apply_circuit(psi.copy(), sub), psi)


class TestLayout:
    def test_toy_total(self, toy):
        lay = layout(toy)
        assert lay.total_qubits == 28
        counts = (len(lay.vertex), len(lay.real_edge), len(lay.virtual_edge), len(lay.cl), len(lay.cr),
                  len(lay.size_flag))
        assert counts == (4, 4, 4, 5, 5, 4)

    def test_toy_counter_wires(self, toy):
        lay = layout(toy)
        assert sorted(lay.cl) == [(1, 0), (1, 1), (2, 0), (2, 1), (2, 2)]
        assert (0, 0) not in lay.cl  # bic plays cl_00

    def test_one_by_one(self):
        lay = layout(BipartiteGraph(1, 1, frozenset()))
        assert lay.total_qubits == 11 == derived_total(1, 1, "edges")

    @pytest.mark.parametrize("mode", ["edges", "vertices", "balanced"])
    def test_roles_distinct_and_contiguous(self, mode):
        g = gen_synthetic(3, 4, 5, seed=2)
        lay = layout(g, mode)
        roles = list(lay.vertex) + list(lay.real_edge.values()) + list(lay.virtual_edge.values())
        roles += [lay.bic] + list(lay.cl.values()) + list(lay.cr.values()) + list(lay.size_flag.values())
        roles.append(lay.oracle_qubit)
        assert sorted(roles) == list(range(lay.total_qubits))
        assert list(lay.vertex) == list(range(g.n))
        assert lay.total_qubits == derived_total(3, 4, mode)

    def test_absent_edges_still_get_wires(self):
        lay = layout(BipartiteGraph(2, 3, frozenset()))
        assert len(lay.real_edge) == 6

    def test_totals_over_random_shapes(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            left, right = (int(v) for v in rng.integers(1, 7, size=2))
            g = gen_synthetic(left, right, int(rng.integers(0, left * right + 1)), seed=1)
            for mode in ("edges", "vertices", "balanced"):
                assert layout(g, mode).total_qubits == derived_total(left, right, mode)


def test_ubic_golden_dump(toy):
    assert build_ubic(toy, layout(toy)).dump() == (DATA / "toy_ubic.txt").read_text()


def test_gate_table_padding():
    c = Circuit(4, (X(0), MCX(3, (0, True), (1, False), (2, True))))
    targets, cq, cp, nc = c.gate_table()
    assert targets.tolist() == [0, 3]
    assert nc.tolist() == [0, 3]
    assert cq[1].tolist() == [0, 1, 2] and cp[1].tolist() == [1, 0, 1]
    with pytest.raises(ValueError):
        Circuit(1, (H(0),)).gate_table()
