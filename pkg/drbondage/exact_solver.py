"""Exact double Roman domination number.

Two solvers share one contract: `gamma_bruteforce` enumerates labelings and serves as
the oracle, `gamma_exact` is a depth-first branch-and-bound that also runs across
worker processes. Both report the same value; `gamma_exact` reports the first optimal
leaf in depth-first order as witness, whatever the worker count.
"""

from __future__ import annotations

import itertools
import multiprocessing
import sys
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from tqdm import tqdm

from drbondage.drdf_core import Labeling, from_masks, is_valid_drdf, normalize_no_ones, weight
from drbondage.graph_core import (
    BudgetExceeded,
    Graph,
    SizeGuardError,
    components,
    induced_subgraph,
    is_connected,
    iter_bits,
    lowest_bit,
    popcount,
)

ORACLE_LIMIT_023 = 13
ORACLE_LIMIT_0123 = 10
PARALLEL_MIN_VERTICES = 14
SPLIT_DEPTH = 4
DEADLINE_CHECK_EVERY = 256

# (undecided, zero, two, three, covered-by-3, covered-by-one-2, covered-by-two-2s, weight)
State = Tuple[int, int, int, int, int, int, int, int]


@dataclass
class RunContext:
    """Knobs threaded through long computations."""
    verbose: bool = False
    threads: int = 1
    deadline: Optional[float] = None
    show_progress: bool = False

    def check_deadline(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded("wall-clock budget exhausted")


@dataclass
class GammaResult:
    value: int
    witness: Labeling
    method: str
    nodes_explored: int = 0


def gamma_bruteforce(G: Graph, alphabet: Sequence[int] = (0, 2, 3)) -> GammaResult:
    """Minimum DRDF weight by exhaustive enumeration over alphabet^n in lexicographic order.

    The witness is the lexicographically least minimum labeling; a {0,1,2,3} witness that
    contains a 1 is passed through normalize_no_ones, which keeps its weight.
    """
    alphabet = tuple(sorted(alphabet))
    if alphabet == (0, 2, 3):
        limit = ORACLE_LIMIT_023
    elif alphabet == (0, 1, 2, 3):
        limit = ORACLE_LIMIT_0123
    else:
        raise ValueError(f"alphabet must be {{0,2,3}} or {{0,1,2,3}}, got {alphabet}")
    if G.n > limit:
        raise SizeGuardError(f"brute force over {alphabet} is limited to n <= {limit}, got n={G.n}")
    best, best_f, tested = None, None, 0
    for values in itertools.product(alphabet, repeat=G.n):
        w = sum(values)
        if best is not None and w >= best:
            continue
        tested += 1
        f = Labeling(values)
        if is_valid_drdf(G, f):
            best, best_f = w, f
    if 1 in best_f.values:
        best_f = normalize_no_ones(G, best_f)
    return GammaResult(best, best_f, 'oracle', tested)


def classify_small_gamma(G: Graph) -> Optional[int]:
    """Return 3, 4 or 5 when gamma_dR(G) is one of them, else None.

    3: a vertex of degree n-1. 4: two nonadjacent vertices both adjacent to all other
    vertices. 5: maximum degree n-2 without the previous form. Checked in that order.
    """
    if G.n < 3 or not is_connected(G):
        raise ValueError("classifier needs a connected graph on at least 3 vertices")
    full = G.full_mask
    if G.max_degree() == G.n - 1:
        return 3
    for u in range(G.n):
        if G.degree(u) != G.n - 2:
            continue
        v = lowest_bit(full & ~G.closed_mask(u))
        if v > u and G.adj[v] == G.adj[u]:
            return 4
    if G.max_degree() == G.n - 2:
        return 5
    return None


def greedy_drdf(G: Graph) -> Labeling:
    """Warm start: place 3s greedily by closed-neighborhood gain, then try to lower each 3."""
    unsecured = G.full_mask
    threes = 0
    while unsecured:
        x = max(range(G.n), key=lambda v: (popcount(G.closed_mask(v) & unsecured), -v))
        threes |= 1 << x
        unsecured &= ~G.closed_mask(x)
    vals = [3 if threes >> v & 1 else 0 for v in range(G.n)]
    for v in iter_bits(threes):
        for lower in (0, 2):
            vals[v] = lower
            if is_valid_drdf(G, Labeling(tuple(vals))):
                break
            vals[v] = 3
    return Labeling(tuple(vals))


class BranchAndBound:
    """Depth-first search over {0,2,3} labelings of a connected graph.

    A vertex is secured when it is labeled 2 or 3, or has a 3-neighbor, or two
    2-neighbors. The search branches on the least-id unsecured vertex v: if v is
    undecided it is labeled 3, 2, 0 in turn; if v is already 0 its least-id undecided
    neighbor is labeled instead. Undecided vertices left at a leaf become 0.
    Leaves lighter than `best` are accepted.
    """

    def __init__(self, G: Graph, best: int, ctx: Optional[RunContext] = None,
                 stop_at_first: bool = False, shared=None):
        self.G = G
        self.adj = G.adj
        self.full = G.full_mask
        self.best = best
        self.ctx = ctx or RunContext()
        self.stop_at_first = stop_at_first
        self.shared = shared
        self.found = False
        self.witness: Optional[Tuple[int, int]] = None
        self.nodes = 0

    def root(self) -> State:
        return (self.full, 0, 0, 0, 0, 0, 0, 0)

    def lower_bound(self, und: int, zero: int, unsec: int, dom2a: int) -> Optional[int]:
        """Extra weight any completion needs, or None when some vertex can no longer be secured."""
        adj = self.adj
        used = 0
        packing = 0
        for u in iter_bits(unsec):
            support = (adj[u] | 1 << u) & und
            if not support:
                return None
            if support & used:
                continue
            used |= support
            packing += 3 if zero >> u & 1 and not dom2a >> u & 1 else 2
        fresh = unsec & ~dom2a
        k = k_fresh = 0
        for x in iter_bits(und):
            closed = adj[x] | 1 << x
            a = popcount(closed & unsec)
            if a > k:
                k = a
            b = popcount(closed & fresh)
            if b > k_fresh:
                k_fresh = b
        lb = max(packing, 2 * -(-popcount(unsec) // k))
        if k_fresh:
            f = popcount(fresh)
            # a 3 secures at most k_fresh fresh vertices; a 2 secures itself and half of each neighbor
            lb = max(lb, min(-(-3 * f // k_fresh), -(-4 * f // (k_fresh + 1))))
        return lb

    def status(self, st: State) -> Tuple[str, int]:
        """Classify a node as ('leaf', 0), ('pruned', 0) or ('open', branching vertex)."""
        und, zero, two, three, dom3, dom2a, dom2b, w = st
        unsec = self.full & ~(two | three | dom3 | dom2b)
        if not unsec:
            return ('leaf', 0) if w < self.best else ('pruned', 0)
        lb = self.lower_bound(und, zero, unsec, dom2a)
        if lb is None or w + lb >= self.best:
            return 'pruned', 0
        v = lowest_bit(unsec)
        if und >> v & 1:
            return 'open', v
        return 'open', lowest_bit(self.adj[v] & und)

    def children(self, st: State, x: int) -> List[State]:
        und, zero, two, three, dom3, dom2a, dom2b, w = st
        bit = 1 << x
        nb = self.adj[x]
        rest = und & ~bit
        return [
            (rest, zero, two, three | bit, dom3 | nb, dom2a, dom2b, w + 3),
            (rest, zero, two | bit, three, dom3, dom2a | nb, dom2b | dom2a & nb, w + 2),
            (rest, zero | bit, two, three, dom3, dom2a, dom2b, w),
        ]

    def _tick(self):
        self.nodes += 1
        if self.nodes % DEADLINE_CHECK_EVERY == 0:
            self.ctx.check_deadline()
            if self.shared is not None:
                self.best = min(self.best, self.shared.value)

    def _record(self, st: State):
        w = st[7]
        self.best = w
        self.witness = (st[2], st[3])
        self.found = True
        if self.shared is not None:
            with self.shared.get_lock():
                if w < self.shared.value:
                    self.shared.value = w

    def run(self, st: State):
        if self.stop_at_first and self.found:
            return
        self._tick()
        kind, x = self.status(st)
        if kind == 'leaf':
            self._record(st)
            return
        if kind == 'pruned':
            return
        for child in self.children(st, x):
            self.run(child)
            if self.stop_at_first and self.found:
                return

    def split(self, st: State, depth: int) -> List[State]:
        """Open nodes and leaves at `depth` below st, in depth-first order."""
        kind, x = self.status(st)
        if kind == 'pruned':
            return []
        if kind == 'leaf' or depth == 0:
            return [st]
        units = []
        for child in self.children(st, x):
            units.extend(self.split(child, depth - 1))
        return units

    def witness_labeling(self) -> Labeling:
        two, three = self.witness
        return from_masks(self.G.n, two, three)


_SHARED_BOUND = None


def _init_worker(shared):
    global _SHARED_BOUND
    _SHARED_BOUND = shared


def _solve_unit(G: Graph, st: State, best: int, deadline: Optional[float]) -> Tuple[Optional[int], int]:
    bb = BranchAndBound(G, min(best, _SHARED_BOUND.value), RunContext(deadline=deadline), shared=_SHARED_BOUND)
    bb.run(st)
    return (bb.best if bb.found else None), bb.nodes


def _incumbent(G: Graph) -> Labeling:
    greedy = greedy_drdf(G)
    if weight(greedy) < 2 * G.n:
        return greedy
    return Labeling((2,) * G.n)


def _solve_connected(G: Graph, ctx: RunContext) -> GammaResult:
    """Exact gamma of a connected graph with at least two vertices."""
    dominating = G.dominating_vertices()
    if dominating:
        return GammaResult(3, from_masks(G.n, 0, 1 << dominating[0]), 'closed_form', 0)
    start = _incumbent(G)
    bb = BranchAndBound(G, weight(start), ctx)
    units = bb.split(bb.root(), SPLIT_DEPTH)
    pbar = tqdm(total=len(units), unit="subtree", desc=f"Branch and bound (n={G.n})",
                disable=not ctx.show_progress, leave=True)
    if ctx.threads <= 1 or G.n < PARALLEL_MIN_VERTICES or len(units) < 2:
        for st in units:
            bb.run(st)
            pbar.set_postfix(best=bb.best, refresh=False)
            pbar.update(1)
        pbar.close()
        witness = bb.witness_labeling() if bb.found else start
        return GammaResult(bb.best, witness, 'branch_and_bound', bb.nodes)

    shared = multiprocessing.Value('i', bb.best)
    best, nodes = bb.best, bb.nodes
    with ProcessPoolExecutor(max_workers=ctx.threads, initializer=_init_worker, initargs=(shared,)) as pool:
        futures = [pool.submit(_solve_unit, G, st, best, ctx.deadline) for st in units]
        for fut in as_completed(futures):
            value, explored = fut.result()
            nodes += explored
            if value is not None and value < best:
                best = value
            pbar.set_postfix(best=best, refresh=False)
            pbar.update(1)
    pbar.close()
    if best == weight(start):
        return GammaResult(best, start, 'branch_and_bound', nodes)
    # first optimal leaf in depth-first order, identical to the sequential witness
    finder = BranchAndBound(G, best + 1, ctx, stop_at_first=True)
    finder.run(finder.root())
    return GammaResult(best, finder.witness_labeling(), 'branch_and_bound', nodes + finder.nodes)


def _lift(n: int, parts: List[Tuple[List[int], Labeling]]) -> Labeling:
    vals = [0] * n
    for verts, f in parts:
        for v, x in zip(verts, f.values):
            vals[v] = x
    return Labeling(tuple(vals))


def gamma_exact(G: Graph, ctx: Optional[RunContext] = None) -> GammaResult:
    """gamma_dR(G) as the sum over connected components."""
    ctx = ctx or RunContext()
    total, nodes = 0, 0
    methods = set()
    parts = []
    for comp in components(G):
        if len(comp) == 1:
            res = GammaResult(2, Labeling((2,)), 'closed_form', 0)
        else:
            res = _solve_connected(induced_subgraph(G, comp), ctx)
        if ctx.verbose and len(comp) > 1:
            print(f"  component of {len(comp)} vertices: gamma={res.value} ({res.method}, {res.nodes_explored} nodes)", file=sys.stderr)
        total += res.value
        nodes += res.nodes_explored
        methods.add(res.method)
        parts.append((comp, res.witness))
    method = 'closed_form' if methods <= {'closed_form'} else 'branch_and_bound'
    return GammaResult(total, _lift(G.n, parts), method, nodes)


def gamma_at_most(G: Graph, bound: int, ctx: Optional[RunContext] = None) -> Optional[Labeling]:
    """A DRDF of weight <= bound, or None when none exists."""
    ctx = ctx or RunContext()
    if G.n == 0:
        return Labeling(()) if bound >= 0 else None
    if not is_connected(G):
        res = gamma_exact(G, RunContext(verbose=False, threads=1, deadline=ctx.deadline))
        return res.witness if res.value <= bound else None
    if G.n == 1:
        return Labeling((2,)) if bound >= 2 else None
    dominating = G.dominating_vertices()
    if dominating:
        return from_masks(G.n, 0, 1 << dominating[0]) if bound >= 3 else None
    start = greedy_drdf(G)
    if weight(start) <= bound:
        return start
    if 2 * G.n <= bound:
        return Labeling((2,) * G.n)
    bb = BranchAndBound(G, bound + 1, ctx, stop_at_first=True)
    bb.run(bb.root())
    return bb.witness_labeling() if bb.found else None
