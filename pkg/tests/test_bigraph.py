import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmbs import _kernels
from qmbs.bigraph import (
    BipartiteGraph,
    GraphFormatError,
    LimitExceededError,
    brute_force_max,
    count_bicliques,
    edge_size,
    format_graph,
    gen_synthetic,
    is_biclique,
    is_biclique_xor,
    objective_sizes,
    parse_graph,
    side_counts,
    subset_profile,
)

from conftest import small_graphs


@st.composite
def graphs(draw, max_side=4):
    left = draw(st.integers(1, max_side))
    right = draw(st.integers(1, max_side))
    pairs = [(i, j) for i in range(1, left + 1) for j in range(1, right + 1)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return BipartiteGraph(left, right, frozenset(chosen))


class TestParse:
    def test_toy(self, toy):
        g = parse_graph("2 2\n1 1\n2 1\n2 2")
        assert g == toy
        assert (g.left_count, g.right_count, g.n, g.m) == (2, 2, 4, 3)

    def test_no_edges(self):
        g = parse_graph("1 1")
        assert g.n == 2 and g.m == 0

    def test_comments_and_blank_lines(self, toy):
        text = "# example graph\n2 2   # sizes\n\n1 1\n# skip\n2 1\n2 2\n\n"
        assert parse_graph(text) == toy

    @pytest.mark.parametrize(
        "text, lineno, fragment",
        [
            ("2 2\n1 3", 2, "right index 3 out of range"),
            ("2 2\n3 1", 2, "left index 3 out of range"),
            ("2 2\n1 1\n\n1 1", 4, "duplicate edge"),
            ("2 2\n1", 2, "expected two integers"),
            ("2 x", 1, "non-integer"),
            ("0 2", 1, "positive"),
        ],
    )
    def test_errors_carry_line_numbers(self, text, lineno, fragment):
        with pytest.raises(GraphFormatError) as err:
            parse_graph(text)
        assert err.value.lineno == lineno
        assert fragment in str(err.value)

    def test_missing_header(self):
        with pytest.raises(GraphFormatError):
            parse_graph("# nothing\n")

    @given(graphs(), st.randoms())
    def test_roundtrip_is_order_independent(self, g, rnd):
        lines = format_graph(g).splitlines()
        body = lines[1:]
        rnd.shuffle(body)
        assert parse_graph("\n".join([lines[0]] + body)) == g


class TestBiclique:
    def test_toy_examples(self, toy):
        assert is_biclique(toy, 0b1010)
        assert not is_biclique(toy, 0b1001)
        assert is_biclique(toy, 0)

    def test_label_convention(self, toy):
        assert toy.subset(left=[1], right=[1]) == 0b1010
        assert toy.label(0b0111) == "0111"
        assert toy.split(0b0111) == ([2], [1, 2])

    @pytest.mark.parametrize("g", small_graphs(max_n=12, count=8, seed=3) + [BipartiteGraph(6, 6, frozenset())])
    def test_matches_pairwise_xor_form(self, g):
        for c in range(1 << g.n):
            assert is_biclique(g, c) == is_biclique_xor(g, c)

    @given(graphs())
    def test_kernel_profile_matches_python(self, g):
        for name in ("numpy", "numba") if _kernels.HAVE_NUMBA else ("numpy",):
            with _kernels.backend(name):
                bic, nl, nr = _kernels.subset_profile(g.adjacency_masks(), g.left_count, g.right_count)
            for c in range(1 << g.n):
                assert bic[c] == is_biclique(g, c)
                assert (nl[c], nr[c]) == side_counts(g, c)


class TestEdgeSize:
    def test_examples(self, toy):
        assert edge_size(toy, 0b0111) == 2
        assert edge_size(toy, 0b1010) == 1
        assert edge_size(toy, 0b1000) == 0

    def test_non_biclique_is_a_contract_violation(self, toy):
        with pytest.raises(ValueError):
            edge_size(toy, 0b1001)


class TestBruteForce:
    def test_toy_edges(self, toy):
        mask, size = brute_force_max(toy, "edges")
        assert size == 2
        assert mask == 0b0111  # smallest of {0111, 1110}

    def test_toy_balanced(self, toy):
        mask, size = brute_force_max(toy, "balanced")
        assert size == 2
        assert side_counts(toy, mask) == (1, 1)

    def test_toy_vertices(self, toy):
        assert brute_force_max(toy, "vertices")[1] == 3

    def test_empty_graph(self):
        g = BipartiteGraph(3, 2, frozenset())
        for objective in ("edges", "vertices", "balanced"):
            assert brute_force_max(g, objective) == (0, 0)

    def test_limit(self):
        g = BipartiteGraph(2, 3, frozenset())
        with pytest.raises(LimitExceededError):
            brute_force_max(g, "edges", limit=4)

    @given(graphs())
    @settings(max_examples=60)
    def test_against_itertools_enumeration(self, g):
        best = {"edges": 0, "vertices": 0, "balanced": 0}
        for r in range(g.n + 1):
            for combo in itertools.combinations(range(g.n), r):
                left = [v + 1 for v in combo if v < g.left_count]
                right = [v - g.left_count + 1 for v in combo if v >= g.left_count]
                if not left or not right:
                    continue
                if all((i, j) in g.edges for i in left for j in right):
                    best["edges"] = max(best["edges"], len(left) * len(right))
                    best["vertices"] = max(best["vertices"], len(left) + len(right))
                    if len(left) == len(right):
                        best["balanced"] = max(best["balanced"], 2 * len(left))
        for objective, want in best.items():
            assert brute_force_max(g, objective)[1] == want

    @given(graphs())
    def test_edges_dominates_balanced(self, g):
        balanced = brute_force_max(g, "balanced")[1]
        assert brute_force_max(g, "edges")[1] >= (balanced // 2) ** 2


class TestCount:
    @pytest.mark.parametrize("k, want", [(1, 3), (2, 2), (3, 0), (4, 0)])
    def test_toy(self, toy, k, want):
        assert count_bicliques(toy, "edges", k) == want

    def test_threshold(self, toy):
        assert count_bicliques(toy, "edges", 1, threshold=True) == 5
        assert count_bicliques(toy, "edges", 2, threshold=True) == 2

    @given(graphs())
    def test_partition_of_all_subsets(self, g):
        nonbic = sum(not is_biclique(g, c) for c in range(1 << g.n))
        total = sum(count_bicliques(g, "edges", k) for k in range(g.left_count * g.right_count + 1))
        assert total + nonbic == 1 << g.n

    @given(graphs())
    def test_threshold_counts_non_increasing(self, g):
        for objective in ("edges", "vertices", "balanced"):
            counts = [count_bicliques(g, objective, k, threshold=True) for k in range(1, g.n * g.n + 1)]
            assert all(a >= b for a, b in zip(counts, counts[1:]))


class TestGenerate:
    def test_deterministic(self):
        a = gen_synthetic(3, 3, 3, seed=1)
        b = gen_synthetic(3, 3, 3, seed=1)
        assert a == b and a.n == 6 and a.m == 3

    def test_saturated(self):
        g = gen_synthetic(5, 5, 25, seed=123)
        assert g.m == 25
        assert brute_force_max(g, "edges")[1] == 25

    def test_infeasible(self):
        with pytest.raises(ValueError):
            gen_synthetic(2, 2, 5, seed=0)

    def test_bench_shape(self):
        g = gen_synthetic(5, 5, 23, seed=7)
        assert (g.n, g.m) == (10, 23)
        mask, size = brute_force_max(g, "edges")
        assert is_biclique(g, mask) and edge_size(g, mask) == size


def test_profile_is_cached_and_read_only(toy):
    bic, _, _ = subset_profile(toy)
    assert subset_profile(toy)[0] is bic
    with pytest.raises(ValueError):
        bic[0] = False


def test_objective_sizes_marks_non_bicliques(toy):
    sizes = objective_sizes(toy, "edges")
    assert sizes[0b1001] == -1
    assert sizes[0b1100] == 0
    # one-sided subsets such as 1100 and 0011 count as size-0 bicliques
    assert np.flatnonzero(sizes < 0).tolist() == [0b1001, 0b1011, 0b1101, 0b1111]
