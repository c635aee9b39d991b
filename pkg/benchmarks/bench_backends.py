"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_backends.py [--repeat 5]

Each kernel is run once per backend before timing so numba's compile (or
cache load) is excluded. Results are checked for agreement.
"""

import argparse
import time

import numpy as np

from qmbs import _kernels
from qmbs.bigraph import gen_synthetic
from qmbs.oracle import TargetSpec, build_plan
from qmbs.sim import apply_circuit, oracle_phases, zero_state


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases():
    g = gen_synthetic(8, 10, 60, seed=3)
    plan = build_plan(gen_synthetic(7, 7, 30, seed=1), "edges", TargetSpec(8, True), 1)
    dense = build_plan(gen_synthetic(1, 2, 2, seed=0), "edges", TargetSpec(2), 1)

    def profile():
        return _kernels.subset_profile(g.adjacency_masks(), g.left_count, g.right_count)[0]

    def replay():
        return oracle_phases(plan)

    def gates():
        state = zero_state(dense.layout.total_qubits)
        for _ in range(20):
            apply_circuit(state, dense.full_circuit())
        return np.abs(state) ** 2

    return [
        (f"subset profile n={g.n}", profile),
        (f"oracle replay n={plan.n}, {len(plan.oracle)} gates", replay),
        (f"dense gates {dense.layout.total_qubits} qubits", gates),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'kernel':<40} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for name, fn in cases():
        results = {}
        for backend in ("numpy", "numba"):
            with _kernels.backend(backend):
                fn()
                results[backend] = best_of(fn, args.repeat)
        (t_np, a), (t_nb, b) = results["numpy"], results["numba"]
        if not np.allclose(a, b, atol=1e-12):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<40} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
