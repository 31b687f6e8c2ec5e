import time

import pytest

from drbondage.drdf_core import Labeling, is_valid_drdf, weight
from drbondage.exact_solver import (
    BranchAndBound,
    RunContext,
    classify_small_gamma,
    gamma_at_most,
    gamma_bruteforce,
    gamma_exact,
    greedy_drdf,
)
from drbondage.graph_core import (
    BudgetExceeded,
    FamilySpec,
    SizeGuardError,
    enumerate_labeled_connected,
    from_edge_list,
    generate,
    remove_edges,
)


def family(kind, *params):
    return generate(FamilySpec(kind, params))


def test_bruteforce_examples():
    assert gamma_bruteforce(family('complete', 1)).value == 2
    assert gamma_bruteforce(family('empty', 3)).value == 6
    # 6 = 0 mod 3, so gamma(P_6) = 6
    assert gamma_bruteforce(family('path', 6)).value == 6


def test_bruteforce_witness_is_lexicographically_least():
    res = gamma_bruteforce(family('cycle', 4))
    # weight 3 cannot reach the opposite vertex; (0,0,2,2) leaves vertex 0 with one 2
    assert res.value == 4
    assert res.witness == Labeling((0, 2, 0, 2))
    assert res.method == 'oracle'

    full = gamma_bruteforce(family('path', 3), (0, 1, 2, 3))
    assert full.value == 3 and full.witness == Labeling((0, 3, 0))


def test_bruteforce_guards():
    with pytest.raises(SizeGuardError):
        gamma_bruteforce(family('path', 14))
    with pytest.raises(SizeGuardError):
        gamma_bruteforce(family('path', 11), (0, 1, 2, 3))
    with pytest.raises(ValueError):
        gamma_bruteforce(family('path', 3), (0, 2))


def test_exact_examples():
    # 7 = 1 mod 6, so gamma(C_7) = 7 + 1
    assert gamma_exact(family('cycle', 7)).value == 8
    assert gamma_exact(family('complete', 5)).value == 3
    # smallest part has 3 vertices
    assert gamma_exact(generate(FamilySpec('complete_multipartite', (3, 3)))).value == 6


def test_exact_witness_contract():
    for G in (family('cycle', 9), family('path', 10), family('grid', 3, 3)):
        res = gamma_exact(G)
        assert is_valid_drdf(G, res.witness)
        assert weight(res.witness) == res.value
        assert 1 not in res.witness.values


def test_exact_matches_oracle_on_small_connected_graphs():
    for n in range(1, 6):
        for G in enumerate_labeled_connected(n):
            assert gamma_exact(G).value == gamma_bruteforce(G).value


def test_no_ones_alphabet_gives_same_minimum():
    for G in enumerate_labeled_connected(4):
        assert gamma_bruteforce(G, (0, 2, 3)).value == gamma_bruteforce(G, (0, 1, 2, 3)).value


def test_components_are_summed():
    # P_3 plus two isolated vertices: 3 + 2 + 2
    G = from_edge_list(5, [(0, 1), (1, 2)])
    res = gamma_exact(G)
    assert res.value == 7
    assert res.witness == Labeling((0, 3, 0, 2, 2))
    assert res.method == 'closed_form'

    assert gamma_exact(family('empty', 4)).value == 8


def test_edge_deletion_never_lowers_gamma():
    for G in enumerate_labeled_connected(4):
        base = gamma_exact(G).value
        for e in G.edges():
            assert gamma_exact(remove_edges(G, [e])).value >= base


def test_gamma_between_two_and_twice_order():
    assert gamma_exact(family('complete', 1)).value == 2
    for G in enumerate_labeled_connected(5):
        value = gamma_exact(G).value
        assert 2 <= value < 2 * G.n


def test_classifier_examples():
    assert classify_small_gamma(family('wheel', 6)) == 3
    # C_4 is the join of two pairs of nonadjacent vertices
    assert classify_small_gamma(family('cycle', 4)) == 4
    assert classify_small_gamma(family('path', 4)) == 5
    assert classify_small_gamma(family('cycle', 6)) is None


def test_classifier_agrees_with_solver():
    for n in range(3, 6):
        for G in enumerate_labeled_connected(n):
            c = classify_small_gamma(G)
            value = gamma_exact(G).value
            if c is None:
                assert value >= 6
            else:
                assert c == value


def test_classifier_rejects_bad_input():
    with pytest.raises(ValueError):
        classify_small_gamma(family('path', 2))
    with pytest.raises(ValueError):
        classify_small_gamma(from_edge_list(4, [(0, 1), (2, 3)]))


def test_greedy_is_valid():
    for G in enumerate_labeled_connected(5):
        f = greedy_drdf(G)
        assert is_valid_drdf(G, f)
        assert 1 not in f.values


def test_gamma_at_most():
    C7 = family('cycle', 7)
    assert gamma_at_most(C7, 7) is None
    f = gamma_at_most(C7, 8)
    assert f is not None and is_valid_drdf(C7, f) and weight(f) <= 8

    assert gamma_at_most(family('complete', 1), 1) is None
    assert gamma_at_most(family('star', 4), 3) == Labeling((3, 0, 0, 0, 0))
    assert gamma_at_most(from_edge_list(0, []), 0) == Labeling(())


def test_branch_and_bound_finds_optimum_below_incumbent():
    P5 = family('path', 5)
    # gamma(P_5) = 6 since 5 is not a multiple of 3
    bb = BranchAndBound(P5, 10)
    bb.run(bb.root())
    assert bb.found and bb.best == 6
    assert is_valid_drdf(P5, bb.witness_labeling())


def test_parallel_search_matches_sequential():
    for G in (family('cycle', 14), family('path', 15)):
        one = gamma_exact(G, RunContext(threads=1))
        two = gamma_exact(G, RunContext(threads=2))
        assert one.value == two.value
        assert one.witness == two.witness
    # 14 = 2 mod 6 and 15 = 0 mod 3
    assert gamma_exact(family('cycle', 14)).value == 14
    assert gamma_exact(family('path', 15)).value == 15


def test_expired_deadline_raises():
    ctx = RunContext(deadline=time.monotonic() - 1)
    with pytest.raises(BudgetExceeded):
        ctx.check_deadline()
    assert RunContext().check_deadline() is None
