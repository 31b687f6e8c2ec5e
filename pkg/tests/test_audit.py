import random

from drbondage.audit import (
    AuditReport,
    CheckResult,
    _Tally,
    bondage_suite,
    drdf_suite,
    family_suite,
    graph_core_suite,
    reduction_suite,
    run_audit,
    solver_suite,
    tree_suite,
)
from drbondage.exact_solver import RunContext
from drbondage.graph_core import FamilySpec, generate, to_graph6


def assert_all_passed(results):
    failed = [r for r in results if not r.passed]
    assert failed == []
    assert all(r.checked > 0 for r in results)


def test_tally_keeps_first_failure():
    t = _Tally("example")
    t.record(True)
    P3 = generate(FamilySpec('path', (3,)))
    t.record(False, P3, "first")
    t.record(False, None, "second")
    result = t.result()
    assert result == CheckResult("example", False, to_graph6(P3), "first", 3)


def test_report_passes_only_without_failures():
    report = AuditReport(seed=0, checks=[CheckResult("a", True), CheckResult("b", True)])
    assert report.passed
    report.checks.append(CheckResult("c", False, "B?", "boom"))
    assert not report.passed


def test_graph_core_suite():
    assert_all_passed(graph_core_suite(4, 5, RunContext()))


def test_drdf_suite():
    assert_all_passed(drdf_suite(4, random.Random(0), RunContext()))


def test_solver_suite():
    assert_all_passed(solver_suite(4, random.Random(0), RunContext()))


def test_bondage_suite_collects_untrusted_violations():
    discrepancies = []
    assert_all_passed(bondage_suite(4, RunContext(), discrepancies))
    # K_3 breaks the triangle degree-sum bound
    assert any(d.startswith("triangle_degree_sum") for d in discrepancies)


def test_tree_suite():
    assert_all_passed(tree_suite(6, RunContext()))


def test_family_suite():
    discrepancies = []
    assert_all_passed(family_suite(RunContext(), discrepancies))
    assert any(d.startswith("wheel:4") for d in discrepancies)


def test_reduction_suite_without_exact_claims():
    results = reduction_suite(False, RunContext())
    assert [r.name for r in results] == [
        "reduction graph has 8n+m+9 vertices, 12n+5m+10 edges and is bipartite",
        "every edge deletion keeps a DRDF of weight 6n+9",
        "a satisfying assignment gives a DRDF of weight 6n+8",
    ]
    assert_all_passed(results)


def test_run_audit_enumeration_scope():
    report = run_audit(max_n=3, trees=4, families=False, enumerate_graphs=True, seed=3)
    assert report.seed == 3
    assert report.passed
    names = [c.name for c in report.checks]
    assert "branch-and-bound agrees with brute force" in names
    assert "closed-form gamma matches the exact solver" not in names
