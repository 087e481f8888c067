import itertools

import numpy as np
import pytest

from twobit.decoders import (
    AlgorithmE,
    GallagerA,
    GallagerB,
    TwoBitMessage as M,
    TwoBitRule,
    UnresolvedScheduleError,
    algorithm_e_check_update,
    algorithm_e_update,
    check_update,
    count_vectors,
    decide,
    decode,
    decode_batch,
    extract_lookup_tables,
    format_decoder,
    gallager_a_update,
    gallager_b_update,
    iterate_decoder,
    lookup_tables_csv,
    parse_decoder,
    variable_update,
)
from twobit.graph import TannerGraph, find_nonzero_codeword, null_space_basis

from conftest import random_graph

R221 = TwoBitRule(2, 2, 1)

# Published (2,2,1), gamma=4 tables as (n(-S), n(-W), n(W), n(S)) count vectors.
PAPER_UPDATE = {
    (1, "W"): [(0, 0, 2, 1), (0, 0, 3, 0), (0, 1, 0, 2)],
    (1, "S"): [(0, 0, 0, 3), (0, 0, 1, 2)],
    (0, "-S"): [(2, 1, 0, 0), (3, 0, 0, 0)],
    (0, "-W"): [(0, 3, 0, 0), (1, 2, 0, 0), (2, 0, 1, 0)],
    (1, "-S"): [(0, 2, 0, 1), (0, 2, 1, 0), (0, 3, 0, 0), (1, 0, 2, 0), (1, 1, 0, 1), (1, 1, 1, 0),
                (1, 2, 0, 0), (2, 0, 0, 1), (2, 0, 1, 0), (2, 1, 0, 0), (3, 0, 0, 0)],
    (1, "-W"): [(0, 1, 1, 1), (0, 1, 2, 0), (1, 0, 0, 2), (1, 0, 1, 1)],
    (0, "W"): [(0, 2, 1, 0), (1, 1, 0, 1), (1, 1, 1, 0), (2, 0, 0, 1)],
    (0, "S"): [(0, 0, 0, 3), (0, 0, 1, 2), (0, 0, 2, 1), (0, 0, 3, 0), (0, 1, 0, 2), (0, 1, 1, 1),
               (0, 1, 2, 0), (0, 2, 0, 1), (1, 0, 0, 2), (1, 0, 1, 1), (1, 0, 2, 0)],
}
PAPER_DECISION_FLIPS = {
    1: [(0, 0, 0, 4), (0, 0, 1, 3), (0, 0, 2, 2), (0, 0, 3, 1), (0, 0, 4, 0),
        (0, 1, 0, 3), (0, 1, 1, 2), (0, 1, 2, 1), (1, 0, 0, 3), (1, 0, 1, 2)],
    0: [(0, 4, 0, 0), (1, 2, 1, 0), (1, 3, 0, 0), (2, 1, 0, 1), (2, 1, 1, 0),
        (2, 2, 0, 0), (3, 0, 0, 1), (3, 0, 1, 0), (3, 1, 0, 0), (4, 0, 0, 0)],
}


def msgs(counts):
    """Expand a count vector (n(-S), n(-W), n(W), n(S)) into a message list."""
    return [M(k) for k in range(4) for _ in range(counts[k])]


# --------------------------------------------------------------------------
# message alphabet

def test_message_encoding():
    assert [m.bits for m in (M.MINUS_S, M.MINUS_W, M.PLUS_W, M.PLUS_S)] == ["11", "01", "00", "10"]
    assert [m.sign for m in M] == [-1, -1, 1, 1]
    assert [m.strong for m in M] == [True, False, False, True]
    assert [m.value(R221) for m in M] == [-2, -1, 1, 2]
    assert all(M.from_label(m.label) == m and m.negate().negate() == m for m in M)


def test_rule_validation():
    with pytest.raises(ValueError):
        TwoBitRule(0, 2, 1)
    with pytest.raises(ValueError):
        TwoBitRule(2, 1, 2)
    with pytest.raises(UnresolvedScheduleError):
        TwoBitRule(1, 2, 1, dynamic=True).channel_weight(2)
    assert TwoBitRule(1, 2, 1, c_schedule=(1, 3)).channel_weight(7) == 3


# --------------------------------------------------------------------------
# single-node rules against the published examples

@pytest.mark.parametrize(
    "counts, received, expected",
    [
        ((2, 0, 1, 0), 1, "-S"),
        ((1, 1, 0, 1), 0, "W"),
        ((0, 2, 0, 1), 0, "S"),
        ((1, 0, 1, 1), 1, "-W"),
        ((1, 1, 1, 0), 0, "W"),
    ],
)
def test_variable_update_examples(counts, received, expected):
    assert variable_update(R221, msgs(counts), received).label == expected


def test_variable_update_first_iteration_ignores_inputs():
    for received in (0, 1):
        for cv in count_vectors(3):
            out = variable_update(R221, msgs(cv), received, iteration=1)
            assert out == (M.MINUS_W if received else M.PLUS_W)


def test_variable_update_121():
    assert variable_update(TwoBitRule(1, 2, 1), msgs((0, 0, 2, 1)), 1).label == "S"


def test_loose_rule_differs_only_at_override_ties():
    loose = TwoBitRule(2, 2, 1, strict_override=False)
    diff = []
    for received in (0, 1):
        for cv in count_vectors(3):
            a = variable_update(R221, msgs(cv), received)
            b = variable_update(loose, msgs(cv), received)
            if a != b:
                t = sum(m.value(R221) for m in msgs(cv)) + (-2 if received else 2)
                assert abs(t) == 2 and (t < 0) != bool(received)
                assert a.sign == b.sign and not a.strong and b.strong
                diff.append(cv)
    assert diff


def test_check_update_examples():
    assert check_update([M.PLUS_S] * 7) == M.PLUS_S
    assert check_update([M.PLUS_S] * 6 + [M.MINUS_W]) == M.MINUS_W
    assert check_update([M.MINUS_S, M.MINUS_S] + [M.PLUS_S] * 5) == M.PLUS_S


@pytest.mark.parametrize(
    "counts, received, expected",
    [((1, 0, 1, 2), 1, 0), ((2, 1, 0, 1), 0, 1), ((0, 0, 0, 4), 1, 0), ((1, 1, 1, 1), 1, 1)],
)
def test_decide_examples(counts, received, expected):
    assert decide(R221, msgs(counts), received) == expected


def test_baseline_examples():
    assert gallager_a_update([1, 1, 1], 0) == 1
    assert gallager_a_update([1, 1, 0], 0) == 0
    assert gallager_b_update([1, 1, 0], 0, 2) == 1
    assert gallager_b_update([1, 0, 0], 0, 2) == 0
    with pytest.raises(ValueError):
        gallager_b_update([1, 1, 0], 0, 4)
    assert algorithm_e_update([1, 0, -1], 1, 1) == -1
    assert algorithm_e_update([1, -1], 0, 0) == 0
    assert algorithm_e_check_update([1, -1, -1]) == 1
    assert algorithm_e_check_update([1, 0, -1]) == 0


# --------------------------------------------------------------------------
# lookup tables

def test_update_table_matches_published():
    tables = extract_lookup_tables(R221, 4)
    got = {(r, out, tuple(cv)) for *cv, r, out in tables.update}
    want = {(r, out, cv) for (r, out), rows in PAPER_UPDATE.items() for cv in rows}
    assert got == want
    assert len(tables.update) == 40


def test_decision_table_matches_published():
    tables = extract_lookup_tables(R221, 4)
    flips = tables.decision_flips()
    assert len(flips) == 20
    got = {(r, tuple(cv)) for *cv, r, _ in flips}
    want = {(r, cv) for r, rows in PAPER_DECISION_FLIPS.items() for cv in rows}
    assert got == want


def test_lookup_csv_header():
    text = lookup_tables_csv(extract_lookup_tables(R221, 4), "decision")
    lines = text.strip().splitlines()
    assert lines[0] == "n_minusS,n_minusW,n_W,n_S,received,output"
    assert len(lines) == 21


# --------------------------------------------------------------------------
# symmetry properties over exhaustive count vectors

def _negate_counts(cv):
    return (cv[3], cv[2], cv[1], cv[0])


@pytest.mark.parametrize("rule", [R221, TwoBitRule(1, 2, 1), TwoBitRule(3, 3, 1), TwoBitRule(4, 3, 1),
                                  TwoBitRule(2, 2, 1, strict_override=False)])
@pytest.mark.parametrize("gamma", [3, 4, 5, 6])
def test_variable_negation_symmetry(rule, gamma):
    for received in (0, 1):
        for cv in count_vectors(gamma - 1):
            out = variable_update(rule, msgs(cv), received)
            neg = variable_update(rule, msgs(_negate_counts(cv)), 1 - received)
            assert neg == out.negate()
        for cv in count_vectors(gamma):
            d = decide(rule, msgs(cv), received)
            assert decide(rule, msgs(_negate_counts(cv)), 1 - received) == 1 - d


@pytest.mark.parametrize("rho", [2, 5, 8, 16, 32])
def test_check_negation_symmetry(rho):
    # negating all rho-1 inputs flips the output sign iff rho-1 is odd
    for cv in count_vectors(rho - 1):
        out = check_update(msgs(cv))
        neg = check_update(msgs(_negate_counts(cv)))
        assert neg == (out.negate() if (rho - 1) % 2 else out)


def test_permutation_invariance_gamma4():
    for received in (0, 1):
        for seq in itertools.product(list(M), repeat=3):
            outs = {variable_update(R221, p, received) for p in itertools.permutations(seq)}
            assert len(outs) == 1
        for seq in itertools.product(list(M), repeat=4):
            assert len({decide(R221, p, received) for p in itertools.permutations(seq)}) == 1
            assert len({check_update(p) for p in itertools.permutations(seq)}) == 1


# --------------------------------------------------------------------------
# batched decoders against a per-node reference

def reference_decode(rule, g, r, iterations):
    """Plain-loop flooding decoder built from the single-node rules."""
    r = [int(x) for x in r]
    edges = [(v, c) for v in range(g.n_variables) for c in g.var_adjacency[v]]
    gamma = g.left_degree
    c2v = {}
    ests = []
    for j in range(1, iterations + 1):
        v2c = {}
        for v, c in edges:
            ext = [c2v[(v, d)] for d in g.var_adjacency[v] if d != c] if j > 1 else []
            if isinstance(rule, TwoBitRule):
                v2c[(v, c)] = variable_update(rule, ext, r[v], j)
            elif isinstance(rule, GallagerA):
                v2c[(v, c)] = gallager_a_update(ext, r[v]) if j > 1 else r[v]
            elif isinstance(rule, GallagerB):
                v2c[(v, c)] = gallager_b_update(ext, r[v], rule.threshold(j, gamma)) if j > 1 else r[v]
            else:
                w = rule.weight(j)
                v2c[(v, c)] = algorithm_e_update(ext, r[v], w) if j > 1 else 1 - 2 * r[v]
        for v, c in edges:
            ext = [v2c[(u, c)] for u in g.check_adjacency[c] if u != v]
            if isinstance(rule, TwoBitRule):
                c2v[(v, c)] = check_update(ext)
            elif isinstance(rule, AlgorithmE):
                c2v[(v, c)] = algorithm_e_check_update(ext)
            else:
                c2v[(v, c)] = sum(ext) % 2
        est = np.zeros(g.n_variables, dtype=np.uint8)
        for v in range(g.n_variables):
            inc = [c2v[(v, c)] for c in g.var_adjacency[v]]
            if isinstance(rule, TwoBitRule):
                est[v] = decide(rule, inc, r[v], j)
            elif isinstance(rule, AlgorithmE):
                t = sum(inc) + rule.weight(j) * (1 - 2 * r[v])
                est[v] = 0 if t > 0 else 1 if t < 0 else r[v]
            else:
                ones = sum(inc)
                est[v] = 1 if 2 * ones > gamma else 0 if 2 * ones < gamma else r[v]
        ests.append(est)
    return ests


@pytest.mark.parametrize(
    "rule",
    [R221, TwoBitRule(3, 3, 1), TwoBitRule(1, 2, 1, c_schedule=(1, 2, 3)), GallagerA(), GallagerB(2),
     GallagerB((3, 2)), AlgorithmE((2, 1, 1))],
    ids=format_decoder,
)
def test_batched_matches_reference(rule, rng):
    g = random_graph(rng, 18, 12, 4)
    r = (rng.random((6, 18)) < 0.2).astype(np.uint8)
    for b in range(len(r)):
        ref = reference_decode(rule, g, r[b], 5)
        got = [est[0] for _, est, _, _ in iterate_decoder(rule, g, r[b][None, :], 5)]
        for j in range(5):
            assert np.array_equal(got[j], ref[j]), (b, j)


def test_no_minus_strong_in_first_iteration(fix_girth6, rng):
    r = (rng.random((200, fix_girth6.n_variables)) < 0.1).astype(np.uint8)
    _, _, v2c, c2v = next(iterate_decoder(R221, fix_girth6, r, 3))
    assert not (v2c == M.MINUS_S).any() and not (c2v == M.MINUS_S).any()
    assert not (c2v == M.PLUS_S).any()


# --------------------------------------------------------------------------
# decode

def test_zero_input_converges_immediately(fix_girth6):
    res = decode(R221, fix_girth6, np.zeros(fix_girth6.n_variables, dtype=np.uint8))
    assert res.converged and res.iterations_used == 1 and not res.final_estimate.any()


def test_isolated_triple_corrected(fix_girth6):
    g = fix_girth6
    checks = [set(a) for a in g.var_adjacency]
    triple = next(
        t for t in itertools.combinations(range(g.n_variables), 3)
        if not (checks[t[0]] & checks[t[1]] or checks[t[0]] & checks[t[2]] or checks[t[1]] & checks[t[2]])
    )
    r = np.zeros(g.n_variables, dtype=np.uint8)
    r[list(triple)] = 1
    res = decode(R221, g, r, max_iterations=3, record_trajectory=True)
    assert res.converged and res.iterations_used <= 3 and not res.final_estimate.any()
    assert len(res.trajectory) == res.iterations_used


def test_decode_errors():
    g = TannerGraph(3, 2, [[0], [0, 1], [1]])
    with pytest.raises(ValueError, match="left-regular"):
        decode(R221, g, [0, 0, 0])
    g4 = TannerGraph(2, 2, [[0, 1], [0, 1]])
    with pytest.raises(ValueError, match="length"):
        decode(R221, g4, [0, 0, 0])
    with pytest.raises(UnresolvedScheduleError):
        decode(GallagerB(None), g4, [1, 0])


def test_converged_implies_zero_syndrome(fix_girth6, rng):
    from twobit.graph import syndrome

    r = (rng.random((300, fix_girth6.n_variables)) < 0.06).astype(np.uint8)
    res = decode_batch(R221, fix_girth6, r, max_iterations=20)
    assert not syndrome(fix_girth6, res.estimates[res.converged]).any()


@pytest.mark.parametrize("rule", [R221, TwoBitRule(3, 3, 1), GallagerB(2), AlgorithmE((2, 1))], ids=format_decoder)
def test_codeword_shift_invariance(fix_girth6, rng, rule):
    g = fix_girth6
    basis = null_space_basis(g)
    assert find_nonzero_codeword(g) is not None
    trials = 200
    x = (rng.integers(0, 2, (trials, len(basis))) @ basis) % 2
    e = (rng.random((trials, g.n_variables)) < 0.06).astype(np.uint8)
    shifted = decode_batch(rule, g, (x ^ e).astype(np.uint8), max_iterations=15)
    plain = decode_batch(rule, g, e, max_iterations=15)
    assert np.array_equal(shifted.estimates, plain.estimates ^ x.astype(np.uint8))
    assert np.array_equal(shifted.iterations, plain.iterations)
    assert np.array_equal(shifted.converged, plain.converged)


# --------------------------------------------------------------------------
# decoder spec strings

@pytest.mark.parametrize(
    "spec",
    ["twobit:2,2,1", "twobit:2,2,1:loose", "dyntwobit:2,1", "dyntwobit:2,1:c=2,3,3", "gallagerA",
     "gallagerB", "gallagerB:b=3", "gallagerB:b=3,2", "algE", "algE:w=2,1,1"],
)
def test_spec_round_trip(spec):
    assert format_decoder(parse_decoder(spec)) == spec


@pytest.mark.parametrize("spec", ["twobit:2,2", "foo", "gallagerA:b=1", "algE:x=1", "twobit:2,2,1:bad",
                                  "gallagerB:b=", "twobit:0,2,1"])
def test_spec_rejects(spec):
    with pytest.raises(ValueError):
        parse_decoder(spec)
