#!/usr/bin/env python3
"""drbondage: double Roman domination and bondage numbers from the command line.

Usage:
    drbondage gamma (--g6 FILE | --edges FILE | --family SPEC) [--oracle]
    drbondage bondage (--g6 FILE | --edges FILE | --family SPEC) [--certificate PATH]
    drbondage bounds (--g6 FILE | --edges FILE | --family SPEC)
    drbondage reduce --cnf FILE [--emit-g6 PATH] [--roles PATH] [--verify]
    drbondage verify-paper [--max-n N] [--trees N] [--families] [--enumerate] [--seed S]
    drbondage census [--trees N]

Common options:
    --threads K        Worker processes for the exact searches (default 1)
    --budget SECONDS   Wall-clock budget; exceeding it exits with code 3
    --json PATH        Write the JSON report to PATH instead of stdout
    --no-progress      Hide progress bars
    -v, --verbose      Print solver details to stderr

Exit codes: 0 ok, 1 failed check, 2 input error, 3 resource guard.
"""

import argparse
import json
import pathlib
import sys
import time
from dataclasses import asdict

from drbondage import __version__
from drbondage.audit import DEFAULT_MAX_N, DEFAULT_SEED, DEFAULT_TREES, run_audit
from drbondage.bondage import (
    NoClosedFormError,
    bondage_exact,
    bound_catalog,
    closed_form_bondage,
    closed_form_gamma,
    tree_census,
)
from drbondage.drdf_core import format_labeling
from drbondage.exact_solver import RunContext, gamma_bruteforce, gamma_exact
from drbondage.graph_core import (
    MAX_ENUM_TREES,
    MAX_GRAPH6_VERTICES,
    ResourceGuardError,
    SizeGuardError,
    format_family,
    generate,
    parse_edge_list,
    parse_family,
    parse_graph6,
    remove_edges,
    to_graph6,
)
from drbondage.reduction import build_reduction, parse_dimacs_cnf, verify_reduction

TOOL = "drbondage"
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_GUARD = 3
# search effort that depends on worker scheduling; reported next to the wall clock
WORK_COUNTERS = ("nodes_explored",)


def parse_args(argv=None):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="Worker processes (default 1)")
    common.add_argument("--budget", type=float, help="Wall-clock budget in seconds")
    common.add_argument("--json", type=pathlib.Path, help="Write the JSON report here instead of stdout")
    common.add_argument("--no-progress", action="store_true", help="Hide progress bars")
    common.add_argument("-v", "--verbose", action="store_true")

    graph_input = argparse.ArgumentParser(add_help=False)
    source = graph_input.add_mutually_exclusive_group(required=True)
    source.add_argument("--g6", type=pathlib.Path, help="Graph in graph6 format")
    source.add_argument("--edges", type=pathlib.Path, help="Edge list: 'n m' line, then 'u v' lines")
    source.add_argument("--family", help="Named family, e.g. path:9, complete_multipartite:2,3")

    p = argparse.ArgumentParser(prog=TOOL, description="Double Roman domination and bondage numbers")
    p.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")

    g = sub.add_parser("gamma", parents=[common, graph_input], help="Double Roman domination number")
    g.add_argument("--oracle", action="store_true", help="Force exhaustive enumeration")

    b = sub.add_parser("bondage", parents=[common, graph_input], help="Double Roman bondage number")
    b.add_argument("--certificate", type=pathlib.Path, help="Write the witness edge set as JSON")

    sub.add_parser("bounds", parents=[common, graph_input], help="Upper bounds on the bondage number")

    r = sub.add_parser("reduce", parents=[common], help="Build the 3-SAT reduction graph")
    r.add_argument("--cnf", type=pathlib.Path, required=True, help="3-CNF formula in DIMACS format")
    r.add_argument("--emit-g6", type=pathlib.Path, help="Write the reduction graph in graph6")
    r.add_argument("--roles", type=pathlib.Path, help="Write the vertex role map as JSON")
    r.add_argument("--verify", action="store_true", help="Check the reduction's claims on this instance")

    v = sub.add_parser("verify-paper", parents=[common], help="Run every invariant suite")
    v.add_argument("--max-n", type=int, default=DEFAULT_MAX_N,
                   help=f"Enumerate connected graphs up to this order (default {DEFAULT_MAX_N})")
    v.add_argument("--trees", type=int, default=DEFAULT_TREES,
                   help=f"Check all trees up to this order (default {DEFAULT_TREES}, 0 skips)")
    v.add_argument("--families", action="store_true", help="Only the named-family suites")
    v.add_argument("--enumerate", action="store_true", help="Only the enumeration suites")
    v.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Seed for sampled labelings")

    c = sub.add_parser("census", parents=[common], help="Bondage numbers of all labeled trees")
    c.add_argument("--trees", type=int, default=DEFAULT_TREES,
                   help=f"Tree order, at most {MAX_ENUM_TREES} (default {DEFAULT_TREES})")

    args = p.parse_args(argv)
    if args.command is None:
        p.print_help(sys.stderr)
        sys.exit(EXIT_INPUT_ERROR)
    return args


def load_graph(args):
    """Return (graph, input descriptor, family spec or None) for --g6/--edges/--family."""
    if args.family:
        spec = parse_family(args.family)
        return generate(spec), {"family": format_family(spec)}, spec
    if args.g6:
        return parse_graph6(args.g6.read_text()), {"g6": str(args.g6)}, None
    return parse_edge_list(args.edges.read_text()), {"edges": str(args.edges)}, None


def _closed_form(fn, spec):
    if spec is None:
        return None
    try:
        return fn(spec)
    except NoClosedFormError:
        return None


def _describe_graph(G):
    return {"vertices": G.n, "edges": G.num_edges()}


def cmd_gamma(args, ctx):
    G, source, spec = load_graph(args)
    res = gamma_bruteforce(G) if args.oracle else gamma_exact(G, ctx)
    print(f"gamma_dR = {res.value} ({res.method}); witness {format_labeling(res.witness)}", file=sys.stderr)
    results = {
        "gamma": res.value,
        "witness": format_labeling(res.witness),
        "method": res.method,
        "closed_form": _closed_form(closed_form_gamma, spec),
    }
    return {**source, **_describe_graph(G)}, results, {"nodes_explored": res.nodes_explored}, EXIT_OK


def _bound_rows(report):
    return [asdict(e) for e in report.entries]


def _print_bounds(report):
    for e in report.entries:
        if not e.applicable:
            continue
        mark = "" if e.trusted else " (untrusted)"
        print(f"  {e.name:<28} {e.value}{mark}", file=sys.stderr)


def cmd_bondage(args, ctx):
    G, source, spec = load_graph(args)
    res = bondage_exact(G, ctx)
    report = bound_catalog(G)
    print(f"b_dR = {res.value}; witness {res.witness}; gamma_dR = {res.base_gamma}", file=sys.stderr)
    if ctx.verbose:
        _print_bounds(report)
    if args.certificate:
        after = gamma_exact(remove_edges(G, res.witness), ctx)
        record = {
            "graph": to_graph6(G) if G.n <= MAX_GRAPH6_VERTICES else None,
            "removed_edges": [list(e) for e in res.witness],
            "gamma_before": res.base_gamma,
            "gamma_after": after.value,
            "witness_after": format_labeling(after.witness),
        }
        args.certificate.write_text(json.dumps(record, indent=2) + "\n")
    results = {
        "bondage": res.value,
        "witness": [list(e) for e in res.witness],
        "base_gamma": res.base_gamma,
        "cap": res.cap,
        "closed_form": _closed_form(closed_form_bondage, spec),
        "bounds": _bound_rows(report),
    }
    return {**source, **_describe_graph(G)}, results, {"subsets_tested": res.subsets_tested}, EXIT_OK


def cmd_bounds(args, ctx):
    G, source, _ = load_graph(args)
    report = bound_catalog(G)
    _print_bounds(report)
    return {**source, **_describe_graph(G)}, {"cap": report.cap(), "bounds": _bound_rows(report)}, {}, EXIT_OK


def cmd_reduce(args, ctx):
    formula = parse_dimacs_cnf(args.cnf.read_text())
    R = build_reduction(formula)
    G = R.graph
    print(f"Reduction graph: {G.n} vertices, {G.num_edges()} edges", file=sys.stderr)
    if args.emit_g6:
        args.emit_g6.write_text(to_graph6(G) + "\n")
    if args.roles:
        args.roles.write_text(json.dumps(R.role_map(), indent=2) + "\n")
    results = {"num_vars": formula.num_vars, "num_clauses": formula.num_clauses, **_describe_graph(G)}
    code = EXIT_OK
    if args.verify:
        report = verify_reduction(formula, ctx)
        results["verification"] = {
            "satisfiable": report.satisfiable,
            "assignment": report.assignment,
            "gamma": report.gamma,
            "exact": report.exact,
            "bipartite": report.bipartite,
            "checks": report.checks,
            "fallback_edges": [list(e) for e in report.fallback_edges],
            "invalid_edges": [list(e) for e in report.invalid_edges],
            "witness_violations": report.witness_violations,
            "notes": report.notes,
        }
        for name, ok in report.checks.items():
            status = "skipped" if ok is None else ("ok" if ok else "FAIL")
            print(f"  [{status}] {name}", file=sys.stderr)
        for note in report.notes:
            print(f"Warning: {note}", file=sys.stderr)
        if not report.passed:
            code = EXIT_CHECK_FAILED
    return {"cnf": str(args.cnf)}, results, {}, code


def cmd_verify_paper(args, ctx):
    # neither scope flag means both
    families = args.families or not args.enumerate
    enumerate_graphs = args.enumerate or not args.families
    report = run_audit(args.max_n, args.trees, families, enumerate_graphs, args.seed, ctx)
    for c in report.checks:
        if not c.passed:
            print(f"FAILED: {c.name}: {c.detail} [counterexample {c.counterexample}]", file=sys.stderr)
    for d in report.discrepancies:
        print(f"Warning: {d}", file=sys.stderr)
    passed = sum(c.passed for c in report.checks)
    print(f"{passed}/{len(report.checks)} checks passed", file=sys.stderr)
    scope = {"max_n": args.max_n, "trees": args.trees, "families": families,
             "enumerate": enumerate_graphs, "seed": args.seed}
    results = {
        "passed": report.passed,
        "checks": [asdict(c) for c in report.checks],
        "discrepancies": report.discrepancies,
    }
    return scope, results, {"cases": sum(c.checked for c in report.checks)}, \
        EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_census(args, ctx):
    if not 3 <= args.trees <= MAX_ENUM_TREES:
        raise SizeGuardError(f"census needs 3 <= n <= {MAX_ENUM_TREES}, got {args.trees}")
    census = tree_census(args.trees, ctx)
    for b in sorted(census.counts):
        print(f"  b_dR = {b}: {census.counts[b]} trees", file=sys.stderr)
    results = {
        "counts": {str(b): k for b, k in sorted(census.counts.items())},
        "with_leaf_cluster": {str(b): k for b, k in sorted(census.with_leaf_cluster.items())},
        "exceptions": census.exceptions,
    }
    code = EXIT_CHECK_FAILED if census.exceptions else EXIT_OK
    return {"trees": args.trees}, results, {"trees_checked": census.trees}, code


COMMANDS = {
    "gamma": cmd_gamma,
    "bondage": cmd_bondage,
    "bounds": cmd_bounds,
    "reduce": cmd_reduce,
    "verify-paper": cmd_verify_paper,
    "census": cmd_census,
}


def emit_report(report, path=None):
    text = json.dumps(report, indent=2) + "\n"
    if path:
        path.write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    args = parse_args(argv)
    start = time.monotonic()
    ctx = RunContext(
        verbose=args.verbose,
        threads=max(1, args.threads),
        deadline=start + args.budget if args.budget else None,
        show_progress=not args.no_progress,
    )

    # 1. Run the command
    try:
        source, results, statistics, code = COMMANDS[args.command](args, ctx)
    except ResourceGuardError as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(EXIT_GUARD)
    except (ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(EXIT_INPUT_ERROR)

    # 2. Assemble the report; timing stays last so reruns differ only there
    timing = {"seconds": round(time.monotonic() - start, 3)}
    for key in WORK_COUNTERS:
        if key in statistics:
            timing[key] = statistics.pop(key)
    report = {
        "tool": TOOL,
        "version": __version__,
        "command": args.command,
        "input": source,
        "results": results,
        "statistics": statistics,
        "timing": timing,
    }

    # 3. Emit
    emit_report(report, args.json)
    if ctx.verbose:
        print(f"Done in {report['timing']['seconds']}s", file=sys.stderr)
    if code != EXIT_OK:
        sys.exit(code)


if __name__ == "__main__":
    main()
