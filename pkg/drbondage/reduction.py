"""3-SAT to double Roman bondage reduction: gadget graph, certificates and claim checks.

Vertex numbering for a formula with n variables and m clauses:
    8(i-1) .. 8(i-1)+7   gadget of variable i: u, ubar, w, v, vprime, x, y, z
    8n + j - 1           clause vertex c_j
    8n + m + k - 1       l_k for k = 1..9
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from tqdm import tqdm

from drbondage.drdf_core import Labeling, from_masks, is_valid_drdf, weight
from drbondage.exact_solver import RunContext, gamma_at_most
from drbondage.graph_core import (
    Edge,
    Graph,
    ResourceGuardError,
    SizeGuardError,
    from_edge_list,
    is_bipartite,
    remove_edges,
)

GADGET_ROLES = ('u', 'ubar', 'w', 'v', 'vprime', 'x', 'y', 'z')
GADGET_EDGES = (
    ('u', 'z'), ('u', 'v'), ('v', 'w'), ('ubar', 'z'), ('ubar', 'vprime'), ('vprime', 'w'),
    ('w', 'z'), ('y', 'v'), ('y', 'vprime'), ('y', 'z'), ('x', 'v'), ('x', 'vprime'),
)
SAT_LIMIT = 20
VERIFY_MAX_VARS = 3
VERIFY_MAX_CLAUSES = 8

# hub label patterns on l_1..l_9
HUB_258 = (2, 5, 8)
HUB_146 = (1, 4, 6)
# gadget patterns: which two gadget vertices carry 3
GADGET_TRUE = ('u', 'vprime')
GADGET_FALSE = ('ubar', 'v')
GADGET_XZ = ('x', 'z')


class CnfError(ValueError):
    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class UnsatisfiedAssignmentError(ValueError):
    pass


def _normalize_clause(clause, num_vars: int) -> Tuple[int, ...]:
    lits = sorted(set(clause))
    if len(lits) != 3 or len(clause) != 3:
        raise CnfError(f"{list(clause)} must have exactly 3 distinct literals")
    bad = [lit for lit in lits if lit == 0 or abs(lit) > num_vars]
    if bad:
        raise CnfError(f"literal {bad[0]} outside 1..{num_vars}")
    return tuple(lits)


@dataclass(frozen=True)
class CnfFormula:
    """3-CNF over variables 1..num_vars; literal +i is u_i, -i is ubar_i."""
    num_vars: int
    clauses: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise CnfError("a formula needs at least one variable")
        normalized = []
        for j, clause in enumerate(self.clauses, start=1):
            try:
                normalized.append(_normalize_clause(clause, self.num_vars))
            except CnfError as e:
                raise CnfError(f"clause {j}: {e}")
        object.__setattr__(self, 'clauses', tuple(normalized))

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


def parse_dimacs_cnf(text: str) -> CnfFormula:
    """Parse DIMACS CNF where every clause has exactly three distinct literals.

    Comment lines ('c') are skipped and a '%' line ends the clause section.
    """
    num_vars = num_clauses = None
    clauses = []
    current: List[int] = []
    current_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('c'):
            continue
        if line.startswith('%'):
            break
        if line.startswith('p'):
            parts = line.split()
            if len(parts) != 4 or parts[1] != 'cnf':
                raise CnfError(f"invalid problem line {line!r}", lineno)
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise CnfError(f"invalid problem line {line!r}", lineno)
            continue
        if num_vars is None:
            raise CnfError("clause before the 'p cnf' problem line", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise CnfError(f"bad literal {tok!r}", lineno)
            if not current:
                current_line = lineno
            if lit == 0:
                try:
                    clauses.append(_normalize_clause(current, num_vars))
                except CnfError as e:
                    raise CnfError(f"clause {len(clauses) + 1}: {e}", current_line)
                current = []
            else:
                current.append(lit)
    if num_vars is None:
        raise CnfError("missing 'p cnf' problem line")
    if current:
        raise CnfError(f"clause {len(clauses) + 1} is not terminated by 0", current_line)
    if len(clauses) != num_clauses:
        raise CnfError(f"problem line announces {num_clauses} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, tuple(clauses))


def format_dimacs_cnf(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.num_vars} {formula.num_clauses}"]
    lines += [" ".join(str(lit) for lit in clause) + " 0" for clause in formula.clauses]
    return "\n".join(lines) + "\n"


def gadget_vertex(i: int, role: str) -> int:
    return 8 * (i - 1) + GADGET_ROLES.index(role)


def clause_vertex(formula: CnfFormula, j: int) -> int:
    return 8 * formula.num_vars + j - 1


def hub_vertex(formula: CnfFormula, k: int) -> int:
    return 8 * formula.num_vars + formula.num_clauses + k - 1


def literal_vertex(lit: int) -> int:
    return gadget_vertex(abs(lit), 'u' if lit > 0 else 'ubar')


@dataclass(frozen=True)
class ReductionGraph:
    graph: Graph
    roles: Tuple[str, ...]
    source: CnfFormula

    def vertex(self, role: str) -> int:
        return self.roles.index(role)

    def role_map(self) -> Dict[str, str]:
        return {str(v): r for v, r in enumerate(self.roles)}


def build_reduction(formula: CnfFormula) -> ReductionGraph:
    n, m = formula.num_vars, formula.num_clauses
    roles = [f"{r}{i}" for i in range(1, n + 1) for r in GADGET_ROLES]
    roles += [f"c{j}" for j in range(1, m + 1)] + [f"l{k}" for k in range(1, 10)]
    pairs = []
    for i in range(1, n + 1):
        pairs += [(gadget_vertex(i, a), gadget_vertex(i, b)) for a, b in GADGET_EDGES]
    l = [hub_vertex(formula, k) for k in range(10)]
    for j, clause in enumerate(formula.clauses, start=1):
        c = clause_vertex(formula, j)
        pairs += [(c, literal_vertex(lit)) for lit in clause]
        pairs += [(c, l[2]), (c, l[4])]
    pairs += [(l[k], l[k % 8 + 1]) for k in range(1, 9)]
    pairs += [(l[9], l[1]), (l[9], l[5])]
    graph = from_edge_list(len(roles), pairs)
    return ReductionGraph(graph, tuple(roles), formula)


def satisfies(formula: CnfFormula, assignment: Tuple[bool, ...]) -> bool:
    return all(any(assignment[abs(lit) - 1] == (lit > 0) for lit in clause) for clause in formula.clauses)


def sat_bruteforce(formula: CnfFormula) -> Optional[Tuple[bool, ...]]:
    """Lexicographically least satisfying assignment (False before True), or None."""
    if formula.num_vars > SAT_LIMIT:
        raise SizeGuardError(f"brute-force SAT is limited to {SAT_LIMIT} variables, got {formula.num_vars}")
    for assignment in itertools.product((False, True), repeat=formula.num_vars):
        if satisfies(formula, assignment):
            return assignment
    return None


def _pattern(formula: CnfFormula, hub: Tuple[int, ...], gadgets: Dict[int, Tuple[str, str]]) -> Labeling:
    """3 on the hub vertices and on each gadget's chosen pair, 2-free, 0 elsewhere."""
    threes = 0
    for k in hub:
        threes |= 1 << hub_vertex(formula, k)
    for i in range(1, formula.num_vars + 1):
        for role in gadgets.get(i, GADGET_TRUE):
            threes |= 1 << gadget_vertex(i, role)
    return from_masks(hub_vertex(formula, 9) + 1, 0, threes)


def certificate_from_assignment(formula: CnfFormula, assignment: Tuple[bool, ...]) -> Labeling:
    """Weight 6n+8 labeling: 3 on (u_i, vprime_i) or (ubar_i, v_i), 2 on l_1, l_3, l_5, l_7."""
    if len(assignment) != formula.num_vars or not satisfies(formula, assignment):
        raise UnsatisfiedAssignmentError("the assignment does not satisfy every clause")
    threes = twos = 0
    for i, value in enumerate(assignment, start=1):
        for role in (GADGET_TRUE if value else GADGET_FALSE):
            threes |= 1 << gadget_vertex(i, role)
    for k in (1, 3, 5, 7):
        twos |= 1 << hub_vertex(formula, k)
    return from_masks(hub_vertex(formula, 9) + 1, twos, threes)


def assignment_from_labeling(R: ReductionGraph, f: Labeling) -> Tuple[bool, ...]:
    """u_i is true unless ubar_i carries 3."""
    return tuple(f.values[gadget_vertex(i, 'ubar')] != 3 for i in range(1, R.source.num_vars + 1))


def witness_structure(R: ReductionGraph, f: Labeling) -> List[str]:
    """Violations of the structure every weight-(6n+8) DRDF must have."""
    formula = R.source
    vals = f.values
    problems = []
    for i in range(1, formula.num_vars + 1):
        gadget = [vals[gadget_vertex(i, r)] for r in GADGET_ROLES]
        if sum(gadget) != 6:
            problems.append(f"gadget {i} has weight {sum(gadget)}, expected 6")
        lits = (vals[gadget_vertex(i, 'u')], vals[gadget_vertex(i, 'ubar')])
        if lits == (3, 3):
            problems.append(f"u{i} and ubar{i} are both labeled 3")
        if 2 in lits:
            problems.append(f"u{i} or ubar{i} is labeled 2")
    if any(vals[hub_vertex(formula, k)] != 2 for k in (1, 3, 5, 7)):
        problems.append("l1, l3, l5, l7 are not all labeled 2")
    for j in range(1, formula.num_clauses + 1):
        if vals[clause_vertex(formula, j)]:
            problems.append(f"c{j} is labeled {vals[clause_vertex(formula, j)]}")
    return problems


@dataclass
class DeletionCertificate:
    edge: Edge
    labeling: Labeling
    pattern: str
    fallback: bool = False
    valid: bool = True


def _split_role(role: str) -> Tuple[str, int]:
    name = role.rstrip('0123456789')
    return name, int(role[len(name):])


def _choose_pattern(R: ReductionGraph, e: Edge) -> Optional[Tuple[Tuple[int, ...], Dict[int, Tuple[str, str]]]]:
    """The case analysis for G - e, or None when no case covers e."""
    a, b = sorted((_split_role(R.roles[e[0]]), _split_role(R.roles[e[1]])))
    names = {a[0], b[0]}
    if names == {'l'}:
        pair = {a[1], b[1]}
        if pair in ({1, 2}, {1, 8}, {1, 9}, {3, 4}, {6, 7}):
            return HUB_258, {}
        if pair in ({4, 5}, {5, 6}, {5, 9}, {2, 3}, {7, 8}):
            return HUB_146, {}
        return None
    if 'c' in names:
        other = a if a[0] != 'c' else b
        if other[0] == 'l':
            return (HUB_258, {}) if other[1] == 4 else (HUB_146, {}) if other[1] == 2 else None
        return HUB_258, {}
    i = a[1]
    if not names & {'u', 'vprime'}:
        return HUB_146, {}
    if not names & {'ubar', 'v'}:
        return HUB_146, {i: GADGET_FALSE}
    if names in ({'u', 'v'}, {'ubar', 'vprime'}):
        return HUB_146, {i: GADGET_XZ}
    return None


def _describe(hub: Tuple[int, ...], gadgets: Dict[int, Tuple[str, str]]) -> str:
    parts = ["hub l" + ",l".join(str(k) for k in hub)]
    parts += [f"{r1}{i},{r2}{i}" for i, (r1, r2) in sorted(gadgets.items())]
    return " + ".join(parts)


def deletion_certificate(R: ReductionGraph, e: Edge) -> DeletionCertificate:
    """A DRDF of R.graph - e of weight 6n+9 following the case analysis on e's roles.

    Edges no case covers fall back to the first valid combination of patterns.
    """
    u, v = sorted(e)
    G = R.graph
    if not (0 <= u < G.n and 0 <= v < G.n) or not G.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge of the reduction graph")
    H = remove_edges(G, [(u, v)])
    formula = R.source
    chosen = _choose_pattern(R, (u, v))
    if chosen is not None:
        f = _pattern(formula, *chosen)
        return DeletionCertificate((u, v), f, _describe(*chosen), False, is_valid_drdf(H, f))
    touched = sorted({_split_role(R.roles[x])[1] for x in (u, v) if _split_role(R.roles[x])[0] in GADGET_ROLES})
    candidates = [(hub, {i: g for i in touched}) for hub in (HUB_258, HUB_146)
                  for g in (GADGET_TRUE, GADGET_FALSE, GADGET_XZ)]
    for hub, gadgets in candidates:
        f = _pattern(formula, hub, gadgets)
        if is_valid_drdf(H, f):
            return DeletionCertificate((u, v), f, _describe(hub, gadgets), True, True)
    hub, gadgets = candidates[0]
    return DeletionCertificate((u, v), _pattern(formula, hub, gadgets), _describe(hub, gadgets), True, False)


@dataclass
class ReductionReport:
    num_vars: int
    num_clauses: int
    vertices: int
    edges: int
    bipartite: bool
    satisfiable: Optional[bool] = None
    assignment: Optional[List[bool]] = None
    gamma: Optional[int] = None
    exact: bool = False
    checks: Dict[str, Optional[bool]] = field(default_factory=dict)
    fallback_edges: List[Edge] = field(default_factory=list)
    invalid_edges: List[Edge] = field(default_factory=list)
    witness_violations: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v is not False for v in self.checks.values())


def audit_deletions(R: ReductionGraph, ctx: Optional[RunContext] = None) -> Tuple[List[Edge], List[Edge]]:
    """Deletion certificates for every edge; returns (fallback edges, invalid edges)."""
    ctx = ctx or RunContext()
    target = 6 * R.source.num_vars + 9
    fallback, invalid = [], []
    pbar = tqdm(R.graph.edges(), unit="edge", desc="Deletion certificates", disable=not ctx.show_progress, leave=True)
    for e in pbar:
        cert = deletion_certificate(R, e)
        if cert.fallback:
            fallback.append(e)
            pbar.write(f"Warning: edge {R.roles[e[0]]}-{R.roles[e[1]]} needed the fallback pattern", file=sys.stderr)
        if not cert.valid or weight(cert.labeling) > target:
            invalid.append(e)
    return fallback, invalid


def verify_reduction(formula: CnfFormula, ctx: Optional[RunContext] = None) -> ReductionReport:
    """Check the reduction's claims on one instance.

    Structure and the deletion certificates are always checked. The exact statements
    about gamma run only for at most VERIFY_MAX_VARS variables and VERIFY_MAX_CLAUSES
    clauses and stop when the budget runs out.
    """
    ctx = ctx or RunContext()
    n, m = formula.num_vars, formula.num_clauses
    R = build_reduction(formula)
    G = R.graph
    bip, _ = is_bipartite(G)
    report = ReductionReport(n, m, G.n, G.num_edges(), bip)
    report.checks['structure'] = G.n == 8 * n + m + 9 and G.num_edges() == 12 * n + 5 * m + 10 and bip

    report.fallback_edges, report.invalid_edges = audit_deletions(R, ctx)
    report.checks['deletions_at_most_6n+9'] = not report.invalid_edges

    if n > VERIFY_MAX_VARS or m > VERIFY_MAX_CLAUSES:
        report.notes.append(f"instance exceeds n <= {VERIFY_MAX_VARS}, m <= {VERIFY_MAX_CLAUSES}: "
                            "lower bound not exactly verified")
        return report

    t = sat_bruteforce(formula)
    report.satisfiable = t is not None
    report.assignment = list(t) if t is not None else None
    low = 6 * n + 8
    try:
        if ctx.verbose:
            print(f"Proving gamma >= {low} on {G.n} vertices...", file=sys.stderr)
        report.checks['gamma_at_least_6n+8'] = gamma_at_most(G, low - 1, ctx) is None
        witness = gamma_at_most(G, low, ctx)
        if witness is not None:
            report.gamma = low if report.checks['gamma_at_least_6n+8'] else None
            report.witness_violations = witness_structure(R, witness)
            report.checks['witness_structure'] = not report.witness_violations
            report.checks['witness_assignment_satisfies'] = satisfies(formula, assignment_from_labeling(R, witness))
        else:
            fallback = _pattern(formula, HUB_258, {})
            report.gamma = low + 1 if is_valid_drdf(G, fallback) else None
        report.checks['gamma_is_6n+8_iff_satisfiable'] = (report.gamma == low) == report.satisfiable
        if t is not None:
            cert = certificate_from_assignment(formula, t)
            report.checks['assignment_certificate'] = is_valid_drdf(G, cert) and weight(cert) == low
            e = tuple(sorted((R.vertex('l1'), R.vertex('l2'))))
            report.checks['removing_l1l2_raises_gamma'] = gamma_at_most(remove_edges(G, [e]), low, ctx) is None
        else:
            # every G - e has a DRDF of weight 6n+9 = gamma(G), so no single edge raises gamma
            report.checks['no_single_edge_raises_gamma'] = report.gamma == low + 1 and not report.invalid_edges
        report.exact = True
    except ResourceGuardError as e:
        report.notes.append(f"{e}: lower bound not exactly verified")
        for key in ('gamma_at_least_6n+8', 'gamma_is_6n+8_iff_satisfiable'):
            report.checks.setdefault(key, None)
    return report
