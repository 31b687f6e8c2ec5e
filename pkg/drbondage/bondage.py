"""Double Roman bondage number: exact subset search, bound catalog, certificates, closed forms."""

from __future__ import annotations

import itertools
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

from drbondage.drdf_core import Labeling, is_valid_drdf
from drbondage.exact_solver import RunContext, classify_small_gamma, gamma_at_most, gamma_exact
from drbondage.graph_core import (
    Edge,
    FamilySpec,
    Graph,
    enumerate_trees,
    generate,
    girth,
    is_connected,
    iter_bits,
    longest_path,
    lowest_bit,
    popcount,
    remove_edges,
    to_graph6,
)

POOL_LIMIT = 64
CHUNK_SIZE = 64


class BondageUndefinedError(ValueError):
    pass


class NoClosedFormError(ValueError):
    pass


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def _edges_at(G: Graph, u: int, skip: int = 0) -> List[Edge]:
    return [_edge(u, t) for t in iter_bits(G.adj[u] & ~skip)]


@dataclass
class BondageResult:
    value: int
    witness: List[Edge]
    base_gamma: int
    subsets_tested: int
    cap: Optional[int] = None


@dataclass
class BoundEntry:
    name: str
    applicable: bool
    value: Optional[int] = None
    certificate: Optional[List[Edge]] = None
    parameters: Dict[str, int] = field(default_factory=dict)
    trusted: bool = True


@dataclass
class BoundReport:
    entries: List[BoundEntry]

    def applicable(self) -> List[BoundEntry]:
        return [e for e in self.entries if e.applicable]

    def cap(self) -> Optional[int]:
        """Smallest applicable trusted bound, None if there is none."""
        values = [e.value for e in self.entries if e.applicable and e.trusted]
        return min(values) if values else None

    def get(self, name: str) -> BoundEntry:
        return next(e for e in self.entries if e.name == name)


# Certificates

def path_certificate(G: Graph, x: int, y: int, z: int) -> List[Edge]:
    """Edges at x, y and z except yz and the edges from y to N(x) & N(y)."""
    if x == z or not G.has_edge(x, y) or not G.has_edge(y, z):
        raise ValueError(f"{x}-{y}-{z} is not a path of length 2")
    keep = {_edge(y, z)} | {_edge(y, t) for t in iter_bits(G.adj[x] & G.adj[y])}
    removed = set()
    for v in (x, y, z):
        removed.update(_edges_at(G, v))
    return sorted(removed - keep)


def edge_certificate(G: Graph, u: int, v: int) -> List[Edge]:
    """All edges at u plus the edges from v to neighbors it does not share with u."""
    if not G.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge")
    return sorted(set(_edges_at(G, u)) | set(_edges_at(G, v, skip=G.adj[u])))


def two_path_certificate(G: Graph, u: int, w: int, v: int) -> List[Edge]:
    """All edges at u plus the edges at v other than vw."""
    if u == v or not G.has_edge(u, w) or not G.has_edge(w, v):
        raise ValueError(f"{u}-{w}-{v} is not a path of length 2")
    return sorted(set(_edges_at(G, u)) | set(_edges_at(G, v, skip=1 << w)))


def leaf_cluster_support(G: Graph) -> Optional[int]:
    """Least vertex of degree >= 3 whose neighbors are all leaves but at most one."""
    leaves = set(G.leaves())
    for v in range(G.n):
        d = G.degree(v)
        if d >= 3 and sum(1 for t in iter_bits(G.adj[v]) if t in leaves) >= d - 1:
            return v
    return None


def leaf_cluster_certificate(G: Graph, v: int) -> List[Edge]:
    leaves = [t for t in G.leaves() if G.has_edge(v, t)]
    if G.degree(v) == 3:
        return path_certificate(G, leaves[0], v, leaves[1])
    return [_edge(v, leaves[0])]


def tree_certificate(G: Graph) -> List[Edge]:
    v = leaf_cluster_support(G)
    if v is not None:
        return leaf_cluster_certificate(G, v)
    p = longest_path(G)
    return sorted([_edge(p[0], p[1]), _edge(p[1], p[2])])


def is_tree(G: Graph) -> bool:
    return G.n >= 1 and G.num_edges() == G.n - 1 and is_connected(G)


# Bound catalog

def _path_triples(G: Graph):
    """Ordered triples (x, y, z) with xy, yz edges and x != z, lexicographic."""
    for x in range(G.n):
        for y in iter_bits(G.adj[x]):
            for z in iter_bits(G.adj[y] & ~(1 << x)):
                yield x, y, z


def bound_catalog(G: Graph) -> BoundReport:
    """Evaluate every upper bound on the bondage number, marking inapplicable ones."""
    entries = []
    connected = G.n >= 2 and is_connected(G)
    delta, Delta = G.min_degree(), G.max_degree()

    best_open, best_tri = None, None
    for x, y, z in _path_triples(G):
        common = popcount(G.adj[x] & G.adj[y])
        s = G.degree(x) + G.degree(y) + G.degree(z)
        if G.has_edge(x, z):
            if best_tri is None or s - 4 - common < best_tri[0]:
                best_tri = (s - 4 - common, x, y, z)
        elif best_open is None or s - 3 - common < best_open[0]:
            best_open = (s - 3 - common, x, y, z)
    if best_open:
        value, x, y, z = best_open
        entries.append(BoundEntry('path_degree_sum', True, value, path_certificate(G, x, y, z),
                                  {'x': x, 'y': y, 'z': z}))
    else:
        entries.append(BoundEntry('path_degree_sum', False))
    if best_tri:
        value, x, y, z = best_tri
        # false on K_3: degree sum 6 - 4 - 1 = 1 while the bondage number is 2
        entries.append(BoundEntry('triangle_degree_sum', True, value, None, {'x': x, 'y': y, 'z': z}, trusted=False))
    else:
        entries.append(BoundEntry('triangle_degree_sum', False, trusted=False))

    if connected and G.n >= 3:
        entries.append(BoundEntry('min_plus_twice_max_degree', True, delta + 2 * Delta - 3, None,
                                  {'delta': delta, 'Delta': Delta}))
    else:
        entries.append(BoundEntry('min_plus_twice_max_degree', False))

    v = leaf_cluster_support(G)
    if v is not None:
        entries.append(BoundEntry('leaf_cluster_support', True, 2, leaf_cluster_certificate(G, v), {'v': v}))
    else:
        entries.append(BoundEntry('leaf_cluster_support', False))

    if is_tree(G) and G.n >= 3:
        entries.append(BoundEntry('tree', True, 2, tree_certificate(G)))
    else:
        entries.append(BoundEntry('tree', False))

    if connected:
        best = None
        for u, w in G.edges():
            value = G.degree(u) + G.degree(w) - 1 - popcount(G.adj[u] & G.adj[w])
            if best is None or value < best[0]:
                best = (value, u, w)
        value, u, w = best
        entries.append(BoundEntry('edge_degree_sum', True, value, edge_certificate(G, u, w), {'u': u, 'v': w}))
        entries.append(BoundEntry('max_plus_min_degree', True, Delta + delta - 1, None,
                                  {'delta': delta, 'Delta': Delta}))
    else:
        entries.append(BoundEntry('edge_degree_sum', False))
        entries.append(BoundEntry('max_plus_min_degree', False))

    best = None
    if connected:
        for u in range(G.n):
            for v in range(u + 1, G.n):
                middle = G.adj[u] & G.adj[v]
                if not middle:
                    continue
                value = G.degree(u) + G.degree(v) - 1
                if best is None or value < best[0]:
                    best = (value, u, lowest_bit(middle), v)
    if best:
        value, u, w, v = best
        entries.append(BoundEntry('two_path_endpoints', True, value, two_path_certificate(G, u, w, v),
                                  {'u': u, 'w': w, 'v': v}))
    else:
        entries.append(BoundEntry('two_path_endpoints', False))

    planar = bool(G.planar_tag) and connected
    g = girth(G) if planar else None
    entries.append(BoundEntry('planar_girth4', True, Delta + 2, None, {'Delta': Delta})
                   if planar and g >= 4 else BoundEntry('planar_girth4', False))
    entries.append(BoundEntry('planar_girth6', True, Delta + 1, None, {'Delta': Delta})
                   if planar and g >= 6 else BoundEntry('planar_girth6', False))
    no_five = all(G.degree(x) != 5 for x in range(G.n))
    entries.append(BoundEntry('planar_no_degree5', True, 7) if planar and no_five
                   else BoundEntry('planar_no_degree5', False))
    entries.append(BoundEntry('planar', True, 8) if planar else BoundEntry('planar', False))
    return BoundReport(entries)


# Exact search

def _increases(G: Graph, removed: Sequence[Edge], base: int, pool: List[Labeling],
               ctx: RunContext) -> bool:
    H = remove_edges(G, removed)
    for f in pool:
        if is_valid_drdf(H, f):
            return False
    f = gamma_at_most(H, base, ctx)
    if f is None:
        return True
    pool.append(f)
    if len(pool) > POOL_LIMIT:
        del pool[1]
    return False


def _first_increase(G: Graph, base: int, edges: List[Edge], combos: List[Tuple[int, ...]],
                    pool: List[Labeling], deadline: Optional[float]) -> Optional[int]:
    """Index of the first combo whose removal raises gamma, or None."""
    ctx = RunContext(deadline=deadline)
    pool = list(pool)
    for i, combo in enumerate(combos):
        ctx.check_deadline()
        if _increases(G, [edges[k] for k in combo], base, pool, ctx):
            return i
    return None


def bondage_exact(G: Graph, ctx: Optional[RunContext] = None) -> BondageResult:
    """Smallest edge set whose removal raises gamma_dR.

    Subsets are tried by size, then in lexicographic order of their edge indices, so the
    witness is the lexicographically least among the smallest sets.
    """
    ctx = ctx or RunContext()
    edges = G.edges()
    m = len(edges)
    if m == 0:
        raise BondageUndefinedError("bondage undefined: the graph has no edges, no deletion can raise gamma")
    base = gamma_exact(G, ctx)
    pool = [base.witness]
    cap = bound_catalog(G).cap()
    if ctx.verbose:
        print(f"gamma = {base.value}; {m} edges; bound cap = {cap if cap is not None else 'none'}", file=sys.stderr)
    tested = 0
    pbar = tqdm(range(1, m + 1), unit="size", desc="Bondage search", disable=not ctx.show_progress, leave=True)
    for size in pbar:
        if cap is not None and size == cap + 1:
            pbar.write(f"Warning: no increasing set of size <= {cap} (the bound cap); continuing", file=sys.stderr)
        pbar.set_postfix(size=size, tested=tested, refresh=False)
        hit = _search_size(G, edges, size, base.value, pool, ctx)
        if hit is not None:
            index, combo = hit
            pbar.close()
            witness = [edges[k] for k in combo]
            return BondageResult(size, witness, base.value, tested + index + 1, cap)
        tested += math.comb(m, size)
    pbar.close()
    raise AssertionError("removing every edge always raises gamma")  # unreachable for m >= 1


def _search_size(G: Graph, edges: List[Edge], size: int, base: int, pool: List[Labeling],
                 ctx: RunContext) -> Optional[Tuple[int, Tuple[int, ...]]]:
    combos = itertools.combinations(range(len(edges)), size)
    if ctx.threads <= 1 or math.comb(len(edges), size) <= CHUNK_SIZE:
        for index, combo in enumerate(combos):
            ctx.check_deadline()
            if _increases(G, [edges[k] for k in combo], base, pool, ctx):
                return index, combo
        return None
    offset = 0
    with ProcessPoolExecutor(max_workers=ctx.threads) as executor:
        while True:
            batch = list(itertools.islice(combos, CHUNK_SIZE * ctx.threads))
            if not batch:
                return None
            chunks = [batch[i:i + CHUNK_SIZE] for i in range(0, len(batch), CHUNK_SIZE)]
            futures = [executor.submit(_first_increase, G, base, edges, chunk, pool, ctx.deadline) for chunk in chunks]
            # chunks are in lexicographic order, so the first chunk with a hit holds the least witness
            for k, fut in enumerate(futures):
                i = fut.result()
                if i is not None:
                    for other in futures[k + 1:]:
                        other.cancel()
                    return offset + k * CHUNK_SIZE + i, chunks[k][i]
            offset += len(batch)


# Closed forms

def dominating_vertex_bondage(G: Graph) -> int:
    """ceil(k/2) for a graph on n >= 3 vertices with exactly k >= 1 vertices of degree n-1."""
    k = len(G.dominating_vertices())
    if G.n < 3 or k == 0:
        raise NoClosedFormError("needs n >= 3 and at least one vertex of degree n-1")
    return -(-k // 2)


def closed_form_gamma(spec: FamilySpec) -> int:
    kind, p = spec.kind, spec.params
    if kind == 'path':
        return p[0] if p[0] % 3 == 0 else p[0] + 1
    if kind == 'cycle':
        return p[0] + 1 if p[0] % 6 in (1, 5) else p[0]
    if kind == 'complete':
        return 3 if p[0] >= 2 else 2
    if kind == 'empty':
        return 2 * p[0]
    if kind in ('wheel', 'star'):
        return 3
    if kind == 'complete_multipartite':
        if len(p) == 1:
            return 2 * p[0]
        return 3 if p[0] == 1 else 4 if p[0] == 2 else 6
    if kind == 'grid' and min(p) == 1:
        n = max(p)
        return n if n % 3 == 0 else n + 1
    G = generate(spec)
    if G.n >= 3 and is_connected(G):
        value = classify_small_gamma(G)
        if value is not None:
            return value
    raise NoClosedFormError(f"no closed form for gamma of {kind}{list(p)}")


def closed_form_bondage(spec: FamilySpec) -> int:
    kind, p = spec.kind, spec.params
    if kind == 'empty' or (kind in ('path', 'complete') and p[0] == 1) or \
            (kind == 'complete_multipartite' and len(p) == 1) or (kind == 'grid' and p == (1, 1)):
        raise BondageUndefinedError(f"bondage undefined: {kind}{list(p)} has no edges")
    if kind == 'path':
        return 1
    if kind == 'cycle':
        return 1 if p[0] % 6 in (2, 4) else 2
    if kind == 'complete':
        return -(-p[0] // 2)
    if kind == 'wheel':
        # W_4 is K_4
        return 2 if p[0] == 4 else 1
    if kind == 'star':
        return 1
    if kind == 'complete_multipartite':
        r = len(p)
        if p[0] == 1:
            l = sum(1 for x in p if x == 1)
            return -(-l // 2)
        if p[0] == 2:
            # all parts of size 2 behave like l = r
            l = sum(1 for x in p if x == 2)
            return -(-l // 2)
        if all(x == 3 for x in p):
            return 3 * (r - 1) + 1
        return sum(p[:-1])
    if kind == 'grid' and min(p) == 1:
        return 1
    G = generate(spec)
    if G.dominating_vertices() and G.n >= 3:
        return dominating_vertex_bondage(G)
    raise NoClosedFormError(f"no closed form for the bondage number of {kind}{list(p)}")


# Tree census

@dataclass
class TreeCensus:
    n: int
    trees: int = 0
    counts: Dict[int, int] = field(default_factory=dict)
    with_leaf_cluster: Dict[int, int] = field(default_factory=dict)
    exceptions: List[str] = field(default_factory=list)


def tree_census(n: int, ctx: Optional[RunContext] = None) -> TreeCensus:
    """Bondage numbers of all labeled trees on n vertices, also split by whether a support
    vertex whose neighbors are all leaves but one exists."""
    ctx = ctx or RunContext()
    census = TreeCensus(n)
    pbar = tqdm(enumerate_trees(n), total=n ** (n - 2), unit="tree", desc=f"Tree census (n={n})",
                disable=not ctx.show_progress, leave=True)
    for T in pbar:
        b = bondage_exact(T, RunContext(deadline=ctx.deadline)).value
        census.trees += 1
        census.counts[b] = census.counts.get(b, 0) + 1
        if leaf_cluster_support(T) is not None:
            census.with_leaf_cluster[b] = census.with_leaf_cluster.get(b, 0) + 1
        if b > 2:
            census.exceptions.append(to_graph6(T))
    return census
