"""qKBS / qMBS drivers: a Grover run per size probe, classical verification of
every measured subset, and binary search over a monotone threshold oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bigraph import BipartiteGraph, count_bicliques, is_biclique, max_objective, objective_size, side_counts
from .oracle import TargetSpec, build_plan, iteration_count
from .sim import VertexDistribution, measure, run

__all__ = [
    "ProbeRecord",
    "SearchResult",
    "iteration_count",
    "success_probability",
    "error_bound",
    "verify",
    "qkbs",
    "qmbs",
    "qmbs_vertex",
    "qmbs_balanced",
    "search",
]


def success_probability(N: int, M: int, T: int) -> float:
    """Probability of measuring one of ``M`` marked states out of ``N`` after
    ``T`` Grover iterations."""
    if not 0 <= M <= N:
        raise ValueError("need 0 <= M <= N")
    if T == 0:
        return M / N
    theta = math.asin(math.sqrt(M / N))
    return math.sin((2 * T + 1) * theta) ** 2


def error_bound(T: int) -> float:
    """Upper bound pi^2 / (4T)^2 on the failure probability after T >= 1 iterations."""
    if T < 1:
        raise ValueError("bound defined for T >= 1")
    return math.pi ** 2 / (4 * T) ** 2


@dataclass
class ProbeRecord:
    k: int
    threshold: bool
    M: int
    iterations: int
    runs: int
    verified: bool
    size: int

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "threshold": self.threshold,
            "M": self.M,
            "iterations": self.iterations,
            "runs": self.runs,
            "verified": self.verified,
            "size": self.size,
        }


@dataclass
class SearchResult:
    subset: int | None
    size: int
    verified: bool
    iterations_used: int
    repetitions_used: int
    engine: str
    objective: str
    n: int
    probes: list[ProbeRecord] = field(default_factory=list)
    snapshots: list[VertexDistribution] | None = None

    @property
    def label(self) -> str | None:
        return None if self.subset is None else format(self.subset, f"0{self.n}b")

    def as_dict(self) -> dict:
        return {
            "subset": self.label,
            "size": self.size,
            "verified": self.verified,
            "objective": self.objective,
            "engine": self.engine,
            "oracle_calls": self.iterations_used,
            "repetitions": self.repetitions_used,
            "probes": [p.as_dict() for p in self.probes],
        }


def verify(g: BipartiteGraph, x: int, objective: str, target: TargetSpec) -> tuple[bool, int]:
    """Classical check of a measured subset; returns ``(ok, size)``."""
    if not is_biclique(g, x):
        return False, 0
    size = objective_size(*side_counts(g, x), objective)
    ok = size >= target.k if target.threshold else size == target.k
    return ok, size


def _rng(seed, rng):
    return rng if rng is not None else np.random.default_rng(seed)


def qkbs(g: BipartiteGraph, k: int, objective: str = "edges", engine: str = "tracked", seed: int | None = None,
         repeats: int = 3, threshold: bool = False, fallback_iterations: int = 0,
         rng: np.random.Generator | None = None, keep_snapshots: bool = False) -> SearchResult:
    """Search for a biclique of size ``k`` (``>= k`` with ``threshold``).

    The solution count M is taken from exact classical counting. The state
    is measured up to ``repeats`` times, each outcome verified classically;
    the first verified outcome is returned, otherwise an empty result.
    """
    top = max_objective(g, objective)
    if not 1 <= k <= top:
        raise ValueError(f"k={k} outside 1..{top} for objective {objective!r}")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    rng = _rng(seed, rng)
    target = TargetSpec(k, threshold)
    M = count_bicliques(g, objective, k, threshold)
    plan = build_plan(g, objective, target, M, fallback_iterations)
    # every repetition prepares the same state, so one simulation serves all of them
    result = run(plan, engine)
    subset, size, ok, runs = None, 0, False, 0
    for runs in range(1, repeats + 1):
        x = measure(result.final, rng)
        ok, sz = verify(g, x, objective, target)
        if ok:
            subset, size = x, sz
            break
    probe = ProbeRecord(k, threshold, M, plan.iterations, runs, ok, size)
    return SearchResult(
        subset=subset,
        size=size,
        verified=ok,
        iterations_used=plan.iterations * runs,
        repetitions_used=runs,
        engine=engine,
        objective=objective,
        n=g.n,
        probes=[probe],
        snapshots=result.snapshots if keep_snapshots else None,
    )


def search(g: BipartiteGraph, objective: str, candidates: list[int], engine: str = "tracked",
           seed: int | None = None, repeats: int = 3, rng: np.random.Generator | None = None) -> SearchResult:
    """Binary search for the largest candidate size with a verified
    threshold-oracle hit. ``candidates`` must be sorted ascending."""
    rng = _rng(seed, rng)
    best = None
    probes: list[ProbeRecord] = []
    calls = reps = 0
    lo, hi = 0, len(candidates) - 1
    while lo <= hi:
        mid = (lo + hi) // 2
        res = qkbs(g, candidates[mid], objective, engine, repeats=repeats, threshold=True, rng=rng)
        probes.extend(res.probes)
        calls += res.iterations_used
        reps += res.repetitions_used
        if res.verified:
            best = res
            # the hit may already exceed the probed size
            while lo < len(candidates) and candidates[lo] <= res.size:
                lo += 1
        else:
            hi = mid - 1
    if best is None:
        return SearchResult(None, 0, False, calls, reps, engine, objective, g.n, probes)
    return SearchResult(best.subset, best.size, True, calls, reps, engine, objective, g.n, probes)


def qmbs(g: BipartiteGraph, engine: str = "tracked", seed: int | None = None, repeats: int = 3,
         rng: np.random.Generator | None = None) -> SearchResult:
    """Maximum edge biclique; probes k in [1, |L||R|]."""
    ks = list(range(1, g.left_count * g.right_count + 1))
    return search(g, "edges", ks, engine, seed, repeats, rng)


def qmbs_vertex(g: BipartiteGraph, engine: str = "tracked", seed: int | None = None, repeats: int = 3,
                rng: np.random.Generator | None = None) -> SearchResult:
    """Maximum vertex biclique; probes k in [2, n]."""
    return search(g, "vertices", list(range(2, g.n + 1)), engine, seed, repeats, rng)


def qmbs_balanced(g: BipartiteGraph, engine: str = "tracked", seed: int | None = None, repeats: int = 3,
                  rng: np.random.Generator | None = None) -> SearchResult:
    """Maximum balanced biclique; only even vertex counts 2i are probed."""
    ks = [2 * i for i in range(1, min(g.left_count, g.right_count) + 1)]
    return search(g, "balanced", ks, engine, seed, repeats, rng)


SOLVERS = {"edges": qmbs, "vertices": qmbs_vertex, "balanced": qmbs_balanced}
