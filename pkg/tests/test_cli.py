import json

import pytest

from drbondage import __version__
from drbondage.cli import main
from drbondage.graph_core import FamilySpec, generate, parse_graph6, to_graph6

FIGURE = "p cnf 4 3\n1 -2 4 0\n-1 -2 4 0\n2 3 -4 0\n"


def run(capsys, *argv):
    main(list(argv) + ["--no-progress"])
    return json.loads(capsys.readouterr().out)


def run_failing(capsys, *argv):
    with pytest.raises(SystemExit) as e:
        main(list(argv) + ["--no-progress"])
    return e.value.code, capsys.readouterr()


def test_gamma_family_examples(capsys):
    report = run(capsys, "gamma", "--family", "path:9")
    assert list(report) == ["tool", "version", "command", "input", "results", "statistics", "timing"]
    assert report["tool"] == "drbondage" and report["version"] == __version__
    # 9 = 0 mod 3, so no extra unit is needed
    assert report["results"]["gamma"] == 9
    assert run(capsys, "gamma", "--family", "path:10")["results"]["gamma"] == 11

    report = run(capsys, "gamma", "--family", "complete:6")
    assert report["results"]["gamma"] == 3
    assert report["results"]["method"] == "closed_form"
    assert report["results"]["closed_form"] == 3


def test_gamma_from_graph6_file(capsys, tmp_path):
    path = tmp_path / "c4.g6"
    path.write_text(to_graph6(generate(FamilySpec('cycle', (4,)))) + "\n")
    report = run(capsys, "gamma", "--g6", str(path))
    assert report["results"]["gamma"] == 4
    assert report["input"] == {"g6": str(path), "vertices": 4, "edges": 4}

    oracle = run(capsys, "gamma", "--g6", str(path), "--oracle")
    assert oracle["results"]["method"] == "oracle"
    assert oracle["results"]["witness"] == "0,2,0,2"


def test_gamma_from_edge_list(capsys, tmp_path):
    path = tmp_path / "p3.txt"
    path.write_text("3 2\n0 1\n1 2\n")
    assert run(capsys, "gamma", "--edges", str(path))["results"]["witness"] == "0,3,0"


@pytest.mark.parametrize("family, expected", [
    # 10 = 4 mod 6
    ("cycle:10", 1),
    ("wheel:6", 1),
    ("complete:5", 3),
])
def test_bondage_family_examples(capsys, family, expected):
    report = run(capsys, "bondage", "--family", family)
    assert report["results"]["bondage"] == expected
    assert report["results"]["closed_form"] == expected
    assert len(report["results"]["witness"]) == expected
    assert report["statistics"]["subsets_tested"] >= 1


def test_bondage_certificate_file(capsys, tmp_path):
    cert = tmp_path / "cert.json"
    report = run(capsys, "bondage", "--family", "path:5", "--certificate", str(cert))
    record = json.loads(cert.read_text())
    assert record["removed_edges"] == report["results"]["witness"] == [[0, 1]]
    assert record["gamma_before"] == 6
    # K_1 + P_4: 2 + 5
    assert record["gamma_after"] == 7
    assert parse_graph6(record["graph"]) == generate(FamilySpec('path', (5,)))


def test_bounds_report(capsys):
    report = run(capsys, "bounds", "--family", "star:3")
    rows = {row["name"]: row for row in report["results"]["bounds"]}
    assert rows["path_degree_sum"]["value"] == 2
    assert rows["leaf_cluster_support"]["value"] == 2
    assert not rows["planar"]["applicable"]
    # the two leaves around the hub: 1 + 1 - 1
    assert rows["two_path_endpoints"]["value"] == 1
    assert report["results"]["cap"] == 1


def test_reduce_writes_graph6_and_roles(capsys, tmp_path):
    cnf = tmp_path / "figure.cnf"
    cnf.write_text(FIGURE)
    g6 = tmp_path / "figure.g6"
    roles = tmp_path / "roles.json"
    report = run(capsys, "reduce", "--cnf", str(cnf), "--emit-g6", str(g6), "--roles", str(roles))
    assert report["results"]["vertices"] == 44
    assert report["results"]["edges"] == 73
    assert parse_graph6(g6.read_text()).num_edges() == 73
    assert json.loads(roles.read_text())["43"] == "l9"


def test_reduce_verify_beyond_guard(capsys, tmp_path):
    cnf = tmp_path / "figure.cnf"
    cnf.write_text(FIGURE)
    report = run(capsys, "reduce", "--cnf", str(cnf), "--verify")
    verification = report["results"]["verification"]
    assert verification["checks"]["deletions_at_most_6n+9"]
    assert verification["exact"] is False
    assert verification["invalid_edges"] == []


def test_verify_paper_small_scope(capsys):
    report = run(capsys, "verify-paper", "--max-n", "3", "--trees", "4", "--enumerate")
    assert report["results"]["passed"]
    assert report["input"]["families"] is False
    assert report["statistics"]["cases"] > 0


def test_census(capsys):
    report = run(capsys, "census", "--trees", "4")
    assert report["results"]["counts"] == {"1": 16}
    assert report["statistics"]["trees_checked"] == 16


def test_json_output_file_and_determinism(capsys, tmp_path):
    out = tmp_path / "report.json"
    main(["bondage", "--family", "cycle:6", "--json", str(out), "--no-progress"])
    assert capsys.readouterr().out == ""
    first = json.loads(out.read_text())
    second = run(capsys, "bondage", "--family", "cycle:6")
    first.pop("timing")
    second.pop("timing")
    assert first == second


def test_input_errors_exit_with_code_2(capsys, tmp_path):
    bad = tmp_path / "bad.g6"
    bad.write_text("B?!\n")
    code, captured = run_failing(capsys, "gamma", "--g6", str(bad))
    assert code == 2
    assert "byte offset 2" in captured.err

    code, _ = run_failing(capsys, "gamma", "--g6", str(tmp_path / "missing.g6"))
    assert code == 2

    code, captured = run_failing(capsys, "bondage", "--family", "empty:3")
    assert code == 2
    assert "bondage undefined" in captured.err

    code, _ = run_failing(capsys, "gamma", "--family", "cycle:2")
    assert code == 2


def test_guard_violation_exits_with_code_3(capsys):
    code, captured = run_failing(capsys, "gamma", "--family", "path:14", "--oracle")
    assert code == 3
    assert captured.out == ""


def test_missing_command_prints_help(capsys):
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 2


def test_gamma_report_does_not_depend_on_threads(capsys):
    reports = []
    for threads in ("1", "2", "8"):
        report = run(capsys, "gamma", "--family", "cycle:14", "--threads", threads)
        # node counts vary with scheduling and live next to the wall clock
        assert "nodes_explored" in report.pop("timing")
        reports.append(report)
    assert reports[0] == reports[1] == reports[2]
    assert reports[0]["statistics"] == {}
    # 14 = 2 mod 6
    assert reports[0]["results"]["gamma"] == 14


def test_gamma_reads_first_graph_of_multi_graph_file(capsys, tmp_path):
    path = tmp_path / "many.g6"
    path.write_text(">>graph6<<Bw\nC~\n")
    report = run(capsys, "gamma", "--g6", str(path))
    assert report["input"]["vertices"] == 3
    assert report["results"]["gamma"] == 3
