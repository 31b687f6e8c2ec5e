import itertools

import pytest

from drbondage.drdf_core import Labeling, is_valid_drdf, weight
from drbondage.graph_core import is_bipartite, remove_edges
from drbondage.reduction import (
    CnfError,
    CnfFormula,
    UnsatisfiedAssignmentError,
    assignment_from_labeling,
    audit_deletions,
    build_reduction,
    certificate_from_assignment,
    deletion_certificate,
    format_dimacs_cnf,
    parse_dimacs_cnf,
    sat_bruteforce,
    verify_reduction,
    witness_structure,
)

FIGURE = "c three clauses over four variables\np cnf 4 3\n1 -2 4 0\n-1 -2 4 0\n2 3 -4 0\n"
SMALL = CnfFormula(2, ((1, 2, -1),))


def test_parse_dimacs_examples():
    # {1, -2, 2} has three distinct literals
    F = parse_dimacs_cnf("p cnf 2 1\n1 -2 2 0")
    assert F.clauses == ((-2, 1, 2),)

    fig = parse_dimacs_cnf(FIGURE)
    assert fig.num_vars == 4 and fig.num_clauses == 3
    assert fig.clauses == ((-2, 1, 4), (-2, -1, 4), (-4, 2, 3))
    assert parse_dimacs_cnf(format_dimacs_cnf(fig)) == fig


def test_parse_dimacs_rejects_two_literal_clause():
    with pytest.raises(CnfError, match="clause 1") as e:
        parse_dimacs_cnf("p cnf 2 1\n1 2 0")
    assert e.value.line == 2


@pytest.mark.parametrize("text", [
    "1 2 3 0\n",
    "p cnf 3 2\n1 2 3 0\n",
    "p cnf 3 1\n1 2 3\n",
    "p cnf 2 1\n1 2 3 0\n",
    "p cnf 3 1\n1 1 2 0\n",
    "p dnf 3 1\n1 2 3 0\n",
    "",
])
def test_parse_dimacs_errors(text):
    with pytest.raises(CnfError):
        parse_dimacs_cnf(text)


def test_parse_dimacs_stops_at_percent_line():
    F = parse_dimacs_cnf("p cnf 3 1\n1 2 3 0\n%\n0\n")
    assert F.clauses == ((1, 2, 3),)


def test_build_reduction_counts():
    R = build_reduction(parse_dimacs_cnf(FIGURE))
    # 8*4 + 3 + 9 vertices and 12*4 + 5*3 + 10 edges
    assert R.graph.n == 44
    assert R.graph.num_edges() == 73
    assert is_bipartite(R.graph)[0]

    small = build_reduction(SMALL)
    assert (small.graph.n, small.graph.num_edges()) == (26, 39)


def test_build_reduction_roles_and_clause_vertices():
    F = parse_dimacs_cnf(FIGURE)
    R = build_reduction(F)
    assert R.vertex('u1') == 0 and R.vertex('z4') == 31
    assert R.vertex('c1') == 32 and R.vertex('l1') == 35 and R.vertex('l9') == 43
    assert R.role_map()["0"] == "u1"

    G = R.graph
    for j, clause in enumerate(F.clauses, start=1):
        c = R.vertex(f"c{j}")
        expected = {R.vertex('l2'), R.vertex('l4')}
        expected |= {R.vertex(f"u{lit}" if lit > 0 else f"ubar{-lit}") for lit in clause}
        assert set(G.neighbors(c)) == expected

    assert build_reduction(F) == R


def test_sat_bruteforce():
    assert sat_bruteforce(SMALL) is not None
    every_sign = CnfFormula(3, tuple(
        tuple(s * v for s, v in zip(signs, (1, 2, 3))) for signs in itertools.product((1, -1), repeat=3)))
    assert sat_bruteforce(every_sign) is None
    # all-false satisfies each clause through a negative literal
    assert sat_bruteforce(parse_dimacs_cnf(FIGURE)) == (False, False, False, False)


def test_certificate_from_assignment():
    R = build_reduction(SMALL)
    f = certificate_from_assignment(SMALL, sat_bruteforce(SMALL))
    assert is_valid_drdf(R.graph, f)
    assert weight(f) == 20

    F = parse_dimacs_cnf(FIGURE)
    g = certificate_from_assignment(F, (False, False, False, False))
    assert is_valid_drdf(build_reduction(F).graph, g)
    assert weight(g) == 32

    # x1 false, x2 true, x4 false falsifies the first clause
    with pytest.raises(UnsatisfiedAssignmentError):
        certificate_from_assignment(F, (False, True, False, False))


def test_witness_structure_and_assignment_read_back():
    F = parse_dimacs_cnf(FIGURE)
    R = build_reduction(F)
    t = (True, False, True, False)
    f = certificate_from_assignment(F, t)
    assert witness_structure(R, f) == []
    assert assignment_from_labeling(R, f) == t

    problems = witness_structure(R, Labeling((2,) * R.graph.n))
    assert "gadget 1 has weight 16, expected 6" in problems
    assert "c1 is labeled 2" in problems


def test_deletion_certificate_examples():
    F = parse_dimacs_cnf(FIGURE)
    R = build_reduction(F)
    for a, b in (('l1', 'l2'), ('u1', 'v1'), ('c1', 'l4')):
        e = tuple(sorted((R.vertex(a), R.vertex(b))))
        cert = deletion_certificate(R, e)
        assert cert.valid and not cert.fallback
        assert is_valid_drdf(remove_edges(R.graph, [e]), cert.labeling)
        assert weight(cert.labeling) == 6 * 4 + 9

    e = (R.vertex('u1'), R.vertex('v1'))
    cert = deletion_certificate(R, e)
    assert cert.labeling.values[R.vertex('x1')] == 3
    assert cert.labeling.values[R.vertex('z1')] == 3

    with pytest.raises(ValueError):
        deletion_certificate(R, (R.vertex('u1'), R.vertex('w1')))


def test_every_deletion_keeps_weight_six_n_plus_nine():
    for F in (parse_dimacs_cnf(FIGURE), SMALL):
        fallback, invalid = audit_deletions(build_reduction(F))
        assert fallback == []
        assert invalid == []


def test_verify_reduction_beyond_guard_checks_certificates_only():
    report = verify_reduction(parse_dimacs_cnf(FIGURE))
    assert report.vertices == 44 and report.edges == 73 and report.bipartite
    assert report.checks['structure'] and report.checks['deletions_at_most_6n+9']
    assert not report.exact
    assert report.gamma is None
    assert any("not exactly verified" in note for note in report.notes)
    assert report.passed


def test_verify_reduction_small_satisfiable_instance():
    report = verify_reduction(SMALL)
    assert report.exact
    assert report.satisfiable
    # gamma = 6*2 + 8
    assert report.gamma == 20
    assert report.checks['gamma_at_least_6n+8']
    assert report.checks['witness_structure']
    assert report.checks['removing_l1l2_raises_gamma']
    assert report.passed


def test_verify_reduction_unsatisfiable_instance():
    # every sign pattern over three variables: each assignment falsifies one clause
    every_sign = CnfFormula(3, tuple(
        tuple(s * v for s, v in zip(signs, (1, 2, 3))) for signs in itertools.product((1, -1), repeat=3)))
    report = verify_reduction(every_sign)
    # 8*3 + 8 + 9 vertices
    assert report.vertices == 41
    assert report.exact
    assert not report.satisfiable and report.assignment is None
    # gamma = 6*3 + 9
    assert report.gamma == 27
    assert report.checks['gamma_at_least_6n+8']
    assert report.checks['gamma_is_6n+8_iff_satisfiable']
    assert report.checks['no_single_edge_raises_gamma']
    assert 'removing_l1l2_raises_gamma' not in report.checks
    assert all(report.checks.values())
    assert report.passed
