"""Bipartite graph model, edge-list parsing, synthetic generation and the
exhaustive classical solver used as ground truth for every quantum result.

Vertex subsets are plain integers. With ``n = left + right`` vertices ordered
``v1..v|L|, u1..u|R|``, vertex ``v1`` sits on the most significant bit, so
``format(mask, f"0{n}b")`` reads exactly like the ket label ``|v1 v2 .. u1 u2 ..>``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import _kernels

OBJECTIVES = ("edges", "vertices", "balanced")

EXHAUSTIVE_LIMIT = 24


class GraphFormatError(ValueError):
    """Malformed graph text; ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class LimitExceededError(RuntimeError):
    pass


@dataclass(frozen=True)
class BipartiteGraph:
    left_count: int
    right_count: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.left_count < 1 or self.right_count < 1:
            raise ValueError("both sides need at least one vertex")
        edges = frozenset((int(i), int(j)) for i, j in self.edges)
        for i, j in edges:
            if not (1 <= i <= self.left_count and 1 <= j <= self.right_count):
                raise ValueError(f"edge ({i}, {j}) out of range")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(cls, left: int, right: int, edges: Iterable[tuple[int, int]]) -> "BipartiteGraph":
        edges = list(edges)
        if len(set(edges)) != len(edges):
            raise ValueError("duplicate edge")
        return cls(left, right, frozenset(edges))

    @property
    def n(self) -> int:
        return self.left_count + self.right_count

    @property
    def m(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def left_bit(self, i: int) -> int:
        """Mask bit of left vertex ``v_i`` (1-based)."""
        return 1 << (self.n - i)

    def right_bit(self, j: int) -> int:
        """Mask bit of right vertex ``u_j`` (1-based)."""
        return 1 << (self.right_count - j)

    @property
    def left_mask(self) -> int:
        return ((1 << self.left_count) - 1) << self.right_count

    @property
    def right_mask(self) -> int:
        return (1 << self.right_count) - 1

    def adjacency_masks(self) -> np.ndarray:
        """Row ``i-1`` holds the right-side neighbourhood of ``v_i`` as a mask."""
        adj = np.zeros(self.left_count, dtype=np.int64)
        for i, j in self.edges:
            adj[i - 1] |= self.right_bit(j)
        return adj

    def label(self, mask: int) -> str:
        return format(mask, f"0{self.n}b")

    def split(self, mask: int) -> tuple[list[int], list[int]]:
        """1-based left and right vertex indices contained in ``mask``."""
        left = [i for i in range(1, self.left_count + 1) if mask & self.left_bit(i)]
        right = [j for j in range(1, self.right_count + 1) if mask & self.right_bit(j)]
        return left, right

    def subset(self, left: Iterable[int] = (), right: Iterable[int] = ()) -> int:
        mask = 0
        for i in left:
            mask |= self.left_bit(i)
        for j in right:
            mask |= self.right_bit(j)
        return mask


def parse_graph(text: str) -> BipartiteGraph:
    """Parse the edge-list format: a ``"<left> <right>"`` header, then one
    ``"<i> <j>"`` pair per line (1-based). ``#`` starts a comment."""
    header = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise GraphFormatError(f"expected two integers, got {line!r}", lineno)
        try:
            a, b = int(fields[0]), int(fields[1])
        except ValueError:
            raise GraphFormatError(f"non-integer field in {line!r}", lineno) from None
        if header is None:
            if a < 1 or b < 1:
                raise GraphFormatError("partition sizes must be positive", lineno)
            header = (a, b)
            continue
        if not 1 <= a <= header[0]:
            raise GraphFormatError(f"left index {a} out of range 1..{header[0]}", lineno)
        if not 1 <= b <= header[1]:
            raise GraphFormatError(f"right index {b} out of range 1..{header[1]}", lineno)
        if (a, b) in seen:
            raise GraphFormatError(f"duplicate edge {a} {b}", lineno)
        seen.add((a, b))
        edges.append((a, b))
    if header is None:
        raise GraphFormatError("missing header line")
    return BipartiteGraph(header[0], header[1], frozenset(edges))


def format_graph(g: BipartiteGraph, comment: str | None = None) -> str:
    lines = [f"# {comment}"] if comment else []
    lines.append(f"{g.left_count} {g.right_count}")
    lines.extend(f"{i} {j}" for i, j in g.sorted_edges())
    return "\n".join(lines) + "\n"


def is_biclique(g: BipartiteGraph, c: int) -> bool:
    """True iff every chosen left vertex is adjacent to every chosen right
    vertex. Vacuously true when either side of ``c`` is empty."""
    right = c & g.right_mask
    for i, nbrs in enumerate(g.adjacency_masks(), start=1):
        if c & g.left_bit(i) and right & ~int(nbrs):
            return False
    return True


def is_biclique_xor(g: BipartiteGraph, c: int) -> bool:
    """Same predicate, evaluated pair by pair as the conjunction of
    ``not (real XOR virtual)`` over all |L||R| vertex pairs."""
    ok = True
    for i in range(1, g.left_count + 1):
        for j in range(1, g.right_count + 1):
            virtual = bool(c & g.left_bit(i)) and bool(c & g.right_bit(j))
            real = virtual and (i, j) in g.edges
            ok = ok and not (real ^ virtual)
    return ok


def side_counts(g: BipartiteGraph, c: int) -> tuple[int, int]:
    return (c & g.left_mask).bit_count(), (c & g.right_mask).bit_count()


def edge_size(g: BipartiteGraph, c: int) -> int:
    if not is_biclique(g, c):
        raise ValueError(f"{g.label(c)} is not a biclique; edge size undefined")
    nl, nr = side_counts(g, c)
    return nl * nr


def objective_size(nl: int, nr: int, objective: str) -> int:
    """Size of a biclique with ``nl``/``nr`` vertices per side.

    One-sided subsets have size 0 under every objective; a balanced size is
    only defined for ``nl == nr`` and is -1 otherwise.
    """
    if nl == 0 or nr == 0:
        return 0
    if objective == "edges":
        return nl * nr
    if objective == "vertices":
        return nl + nr
    if objective == "balanced":
        return 2 * nl if nl == nr else -1
    raise ValueError(f"unknown objective {objective!r}")


def max_objective(g: BipartiteGraph, objective: str) -> int:
    """Largest size flag the objective can produce for graphs of this shape."""
    if objective == "edges":
        return g.left_count * g.right_count
    if objective == "vertices":
        return g.n
    if objective == "balanced":
        return 2 * min(g.left_count, g.right_count)
    raise ValueError(f"unknown objective {objective!r}")


@functools.lru_cache(maxsize=64)
def subset_profile(g: BipartiteGraph, limit: int = EXHAUSTIVE_LIMIT) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """For every mask in ``[0, 2**n)``: biclique flag and left/right counts."""
    if g.n > limit:
        raise LimitExceededError(f"n={g.n} exceeds the exhaustive limit {limit}")
    out = _kernels.subset_profile(g.adjacency_masks(), g.left_count, g.right_count)
    for arr in out:
        arr.flags.writeable = False
    return out


def objective_sizes(g: BipartiteGraph, objective: str, limit: int = EXHAUSTIVE_LIMIT) -> np.ndarray:
    """Objective size per mask; -1 marks non-bicliques (and unbalanced
    subsets under the balanced objective)."""
    bic, nl, nr = subset_profile(g, limit)
    nl = nl.astype(np.int64)
    nr = nr.astype(np.int64)
    both = (nl > 0) & (nr > 0)
    if objective == "edges":
        size = np.where(both, nl * nr, 0)
    elif objective == "vertices":
        size = np.where(both, nl + nr, 0)
    elif objective == "balanced":
        size = np.where(both, np.where(nl == nr, 2 * nl, -1), 0)
    else:
        raise ValueError(f"unknown objective {objective!r}")
    return np.where(bic, size, -1)


def brute_force_max(g: BipartiteGraph, objective: str = "edges", limit: int = EXHAUSTIVE_LIMIT) -> tuple[int, int]:
    """Enumerate all 2**n subsets; return ``(mask, size)`` of the smallest mask
    attaining the maximum objective among bicliques."""
    sizes = objective_sizes(g, objective, limit)
    best = int(np.argmax(sizes))  # argmax returns the first, i.e. smallest, mask
    return best, int(sizes[best])


def count_bicliques(g: BipartiteGraph, objective: str, k: int, threshold: bool = False,
                    limit: int = EXHAUSTIVE_LIMIT) -> int:
    """Number of subsets that are bicliques of size exactly ``k`` (or at
    least ``k`` with ``threshold``)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    sizes = objective_sizes(g, objective, limit)
    if threshold:
        return int(np.count_nonzero(sizes >= k))
    return int(np.count_nonzero(sizes == k))


def solution_mask(g: BipartiteGraph, objective: str, k: int, threshold: bool = False) -> np.ndarray:
    """Boolean array over masks marking the subsets the oracle should flip."""
    sizes = objective_sizes(g, objective)
    return sizes >= k if threshold else sizes == k


def gen_synthetic(left: int, right: int, edges: int, seed: int) -> BipartiteGraph:
    """Random bipartite graph with exactly ``edges`` distinct edges, drawn
    uniformly without replacement from ``left * right`` pairs."""
    if left < 1 or right < 1:
        raise ValueError("partition sizes must be positive")
    if not 0 <= edges <= left * right:
        raise ValueError(f"cannot place {edges} edges in a {left}x{right} graph")
    rng = np.random.default_rng(seed)
    picks = rng.choice(left * right, size=edges, replace=False)
    return BipartiteGraph(left, right, frozenset((int(p) // right + 1, int(p) % right + 1) for p in picks))


def split_vertices(n: int) -> tuple[int, int]:
    """Partition ``n`` vertices as evenly as possible, left side smaller."""
    return n // 2, n - n // 2


BENCH_SHAPES = ((6, 3), (6, 6), (7, 6), (7, 11), (8, 5), (8, 14), (9, 4), (9, 18), (10, 7), (10, 23))


def bench_datasets(seed: int = 0) -> dict[str, BipartiteGraph]:
    """Generated graphs matching the (n, m) shapes of the reference benchmark."""
    out = {}
    for n, m in BENCH_SHAPES:
        left, right = split_vertices(n)
        out[f"D_{n}_{m}"] = gen_synthetic(left, right, m, seed)
    return out


TOY_GRAPH = BipartiteGraph(2, 2, frozenset({(1, 1), (2, 1), (2, 2)}))
