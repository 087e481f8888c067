import itertools
from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twobit.graph import (
    AlistError,
    TannerGraph,
    as_subset,
    code_rate,
    find_nonzero_codeword,
    girth,
    gf2_rank,
    neighborhood,
    null_space_basis,
    parse_alist,
    parse_edgelist,
    read_alist,
    serialize_alist,
    serialize_edgelist,
    syndrome,
    variable_neighbors,
    write_alist,
)

from conftest import random_graph

SMALL_ALIST = """3 2
2 2
1 2 1
2 2
1
1 2
2
1 2
2 3
"""


def girth_oracle(g):
    """Shortest cycle via BFS on the explicit node graph, networkx-free."""
    n = g.n_variables
    adj = {("v", v): [("c", c) for c in g.var_adjacency[v]] for v in range(n)}
    adj.update({("c", c): [("v", v) for v in g.check_adjacency[c]] for c in range(g.n_checks)})
    best = None
    for root in adj:
        dist, par = {root: 0}, {root: None}
        q = deque([root])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if w == par[u]:
                    continue
                if w in dist:
                    cyc = dist[u] + dist[w] + 1
                    best = cyc if best is None else min(best, cyc)
                else:
                    dist[w], par[w] = dist[u] + 1, u
                    q.append(w)
    return best


# --------------------------------------------------------------------------
# construction and invariants

def test_small_alist_degrees():
    g = parse_alist(SMALL_ALIST)
    assert g.var_degrees.tolist() == [1, 2, 1]
    assert g.check_degrees.tolist() == [2, 2]
    assert np.array_equal(g.to_matrix(), [[1, 1, 0], [0, 1, 1]])


def test_from_matrix_matches_alist():
    assert TannerGraph.from_matrix([[1, 1, 0], [0, 1, 1]]) == parse_alist(SMALL_ALIST)


def test_degree_sums_equal_edge_count(rng):
    for _ in range(10):
        g = random_graph(rng, 30, 20, 3)
        assert g.var_degrees.sum() == g.check_degrees.sum() == g.n_edges


def test_immutable():
    g = parse_alist(SMALL_ALIST)
    with pytest.raises(AttributeError):
        g.n_variables = 5


def test_duplicate_edge_rejected():
    with pytest.raises(ValueError):
        TannerGraph(1, 2, [[0, 0]])


def test_inconsistent_adjacency_rejected():
    with pytest.raises(ValueError):
        TannerGraph(2, 1, [[0], []], [[0, 1]])


def test_irregular_graph_representable():
    g = parse_alist(SMALL_ALIST)
    assert g.left_degree is None and not g.is_left_regular()


def test_as_subset_validates():
    g = parse_alist(SMALL_ALIST)
    assert as_subset(g, [2, 0]) == (0, 2)
    with pytest.raises(ValueError):
        as_subset(g, [0, 0])
    with pytest.raises(ValueError):
        as_subset(g, [3])


# --------------------------------------------------------------------------
# alist errors and round trip

@pytest.mark.parametrize(
    "text, line",
    [
        ("3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n", 8),                 # missing body line
        ("3 2\n2 2\n1 2\n2 2\n1\n1 2\n2\n1 2\n2 3\n", 3),              # too few degrees
        ("3 2\n2 2\n1 2 1\n2 2\n1\n1 5\n2\n1 2\n2 3\n", 6),            # check 5 with m=2
        ("3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 3\n2 3\n", 8),            # lists disagree
        ("3 2\n2 2\n1 2 1\n2 2\n1\n1 x\n2\n1 2\n2 3\n", 6),            # non-integer
    ],
)
def test_alist_errors_carry_line_numbers(text, line):
    with pytest.raises(AlistError) as err:
        parse_alist(text)
    assert err.value.line == line


def test_check_index_out_of_range_m4():
    text = "4 4\n1 1\n1 1 1 1\n1 1 1 1\n5\n2\n3\n4\n1\n2\n3\n4\n"
    with pytest.raises(AlistError, match="out of range"):
        parse_alist(text)


def test_zero_padding_dropped():
    padded = serialize_alist(parse_alist(SMALL_ALIST), pad=True)
    assert " 0" in padded
    assert parse_alist(padded) == parse_alist(SMALL_ALIST)


def test_round_trip_random_20x40(rng, tmp_path):
    g = random_graph(rng, 40, 20, 3)
    text = serialize_alist(g)
    assert serialize_alist(parse_alist(text)) == text
    write_alist(g, tmp_path / "g.alist")
    assert read_alist(tmp_path / "g.alist") == g


def test_edgelist_round_trip(rng):
    g = random_graph(rng, 15, 9, 3)
    assert parse_edgelist(serialize_edgelist(g), 15, 9) == g


def test_edgelist_errors():
    with pytest.raises(AlistError) as err:
        parse_edgelist("0 1\n# note\n0 1\n")
    assert err.value.line == 3
    with pytest.raises(AlistError):
        parse_edgelist("0 1 2\n")


# --------------------------------------------------------------------------
# girth

def test_girth_four_cycle():
    assert girth(TannerGraph(2, 2, [[0, 1], [0, 1]])) == 4


def test_girth_path_is_acyclic():
    assert girth(TannerGraph(3, 2, [[0], [0, 1], [1]])) is None


def test_girth_fixture_is_six(fix_girth6):
    assert girth(fix_girth6) == 6 == girth_oracle(fix_girth6)


def test_girth_matches_oracle(rng):
    for _ in range(15):
        g = random_graph(rng, int(rng.integers(5, 25)), int(rng.integers(4, 15)), 2)
        assert girth(g) == girth_oracle(g)


def test_girth_four_iff_pair_shares_two_checks(rng):
    for _ in range(10):
        g = random_graph(rng, 60, 90, 3)
        shares = any(
            len(set(g.var_adjacency[a]) & set(g.var_adjacency[b])) >= 2
            for a, b in itertools.combinations(range(g.n_variables), 2)
        )
        assert (girth(g) == 4) == shares


# --------------------------------------------------------------------------
# neighborhoods

def test_neighborhood_counts(fix_girth6):
    g = fix_girth6
    assert len(neighborhood(g, [0])) == 4
    a, b = next(
        (a, b) for a, b in itertools.combinations(range(g.n_variables), 2)
        if len(set(g.var_adjacency[a]) & set(g.var_adjacency[b])) == 1
    )
    assert len(neighborhood(g, [a, b])) == 7


def test_variable_neighbors_inverse(fix_girth6):
    g = fix_girth6
    assert 0 in variable_neighbors(g, neighborhood(g, [0]))


@settings(max_examples=50, deadline=None)
@given(st.sets(st.integers(0, 39), max_size=10), st.sets(st.integers(0, 39), max_size=10))
def test_neighborhood_monotone_and_subadditive(a, b):
    from conftest import fixture_graph

    g = fixture_graph("theorem1_positive", 40, 0)
    na, nb, nab = neighborhood(g, a), neighborhood(g, b), neighborhood(g, a | b)
    assert na <= nab and nb <= nab
    assert len(nab) <= len(na) + len(nb)


# --------------------------------------------------------------------------
# GF(2)

def test_codeword_small_cases():
    assert find_nonzero_codeword(TannerGraph.from_matrix([[1, 1]])).tolist() == [1, 1]
    assert find_nonzero_codeword(TannerGraph.from_matrix(np.eye(4, dtype=int))) is None


def test_codeword_fixture(fix_girth6):
    x = find_nonzero_codeword(fix_girth6)
    assert x is not None and x.any()
    assert not syndrome(fix_girth6, x).any()


def test_null_space_dimension(rng):
    for _ in range(5):
        g = random_graph(rng, 24, 12, 3)
        basis = null_space_basis(g)
        assert basis.shape[0] == g.n_variables - gf2_rank(g)
        assert not syndrome(g, basis).any()
        assert code_rate(g) == pytest.approx(basis.shape[0] / g.n_variables)


def test_rank_deficient_rate():
    # duplicated row: 2 checks, rank 1
    g = TannerGraph.from_matrix([[1, 1, 1], [1, 1, 1]])
    assert gf2_rank(g) == 1
    assert code_rate(g) == pytest.approx(2 / 3)
