"""Bitset graphs, graph6 / edge-list I/O, named family generators and enumerators.

Every vertex set is an int used as a bitset: bit v set means vertex v is present.
Vertex ids are 0..n-1 and n never exceeds MAX_VERTICES.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

MAX_VERTICES = 64
MAX_GRAPH6_VERTICES = 62
MAX_ENUM_CONNECTED = 7
MAX_ENUM_TREES = 9
GRAPH6_HEADER = ">>graph6<<"

# kind -> (minimum parameter count, maximum parameter count or None)
FAMILY_KINDS = {
    'path': (1, 1),
    'cycle': (1, 1),
    'complete': (1, 1),
    'empty': (1, 1),
    'wheel': (1, 1),
    'star': (1, 1),
    'complete_multipartite': (1, None),
    'join': (0, 0),
    'grid': (2, 2),
    'tree_from_pruefer': (0, None),
}

Edge = Tuple[int, int]


class ResourceGuardError(Exception):
    """A cost guard or the wall-clock budget stopped the computation."""


class SizeGuardError(ResourceGuardError):
    pass


class BudgetExceeded(ResourceGuardError):
    pass


class Graph6Error(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class EdgeListError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class FamilySpecError(ValueError):
    pass


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 0..n-1 stored as neighbor bitsets."""
    n: int
    adj: Tuple[int, ...]
    planar_tag: Optional[bool] = field(default=None, compare=False)

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise SizeGuardError(f"graph order {self.n} outside 0..{MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise ValueError(f"adjacency has {len(self.adj)} rows for n={self.n}")
        for v, row in enumerate(self.adj):
            if row >> self.n:
                raise ValueError(f"vertex {v} has a neighbor outside 0..{self.n - 1}")
            if row >> v & 1:
                raise ValueError(f"self-loop at vertex {v}")
            for u in iter_bits(row):
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency between {v} and {u}")

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def neighbors(self, v: int) -> List[int]:
        return list(iter_bits(self.adj[v]))

    def closed_mask(self, v: int) -> int:
        return self.adj[v] | 1 << v

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> List[Edge]:
        """Edges as (u, v) with u < v, sorted lexicographically."""
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    def num_edges(self) -> int:
        return sum(popcount(row) for row in self.adj) // 2

    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.n)), default=0)

    def min_degree(self) -> int:
        return min((self.degree(v) for v in range(self.n)), default=0)

    def leaves(self) -> List[int]:
        return [v for v in range(self.n) if self.degree(v) == 1]

    def dominating_vertices(self) -> List[int]:
        """Vertices of degree n-1."""
        return [v for v in range(self.n) if self.degree(v) == self.n - 1]


def from_edge_list(n: int, pairs: Iterable[Sequence[int]], planar_tag: Optional[bool] = None) -> Graph:
    """Build a graph from vertex pairs; duplicate pairs collapse into one edge."""
    if not 0 <= n <= MAX_VERTICES:
        raise SizeGuardError(f"graph order {n} outside 0..{MAX_VERTICES}")
    adj = [0] * n
    for pair in pairs:
        u, v = pair
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) references a vertex outside 0..{n - 1}")
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, tuple(adj), planar_tag)


def _to_networkx(G: Graph) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(G.n))
    g.add_edges_from(G.edges())
    return g


def parse_graph6(text: str) -> Graph:
    """Decode the first graph6 line of text (single-byte header, n <= 62).

    The byte layout is checked here so errors carry an offset; the decoding itself is
    done by networkx.
    """
    s = text.strip()
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER):]
    # first graph of a multi-graph file
    s = s.splitlines()[0].strip() if s else s
    if not s:
        raise Graph6Error("empty graph6 string", 0)
    for i, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"character {ch!r} outside the graph6 range 63..126", i)
    n = ord(s[0]) - 63
    if n > MAX_GRAPH6_VERTICES:
        raise Graph6Error(f"multi-byte header (n > {MAX_GRAPH6_VERTICES}) is not supported", 0)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(s) != 1 + nbytes:
        raise Graph6Error(f"expected {1 + nbytes} bytes for n={n}, got {len(s)}", min(len(s), 1 + nbytes))
    pad = 6 * nbytes - nbits
    if pad and (ord(s[-1]) - 63) & ((1 << pad) - 1):
        raise Graph6Error("nonzero padding bits", len(s) - 1)
    g = nx.from_graph6_bytes(s.encode("ascii"))
    return from_edge_list(n, g.edges())


def to_graph6(G: Graph) -> str:
    """Encode G as graph6 without header or trailing newline."""
    if G.n > MAX_GRAPH6_VERTICES:
        raise ValueError(f"graph6 output supports at most {MAX_GRAPH6_VERTICES} vertices, got {G.n}")
    return nx.to_graph6_bytes(_to_networkx(G), header=False).decode("ascii").strip()


def parse_edge_list(text: str) -> Graph:
    """Parse the plain format: a line "n m", then m lines "u v" (0-based).

    Blank lines and lines starting with '#' are ignored.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith('#'):
            rows.append((lineno, line.split()))
    if not rows:
        raise EdgeListError("missing 'n m' header", 1)
    lineno, header = rows[0]
    try:
        n, m = (int(tok) for tok in header)
    except ValueError:
        raise EdgeListError(f"header must be two integers 'n m', got {' '.join(header)!r}", lineno)
    if n < 0 or m < 0:
        raise EdgeListError("negative count in header", lineno)
    if len(rows) - 1 != m:
        raise EdgeListError(f"header announces {m} edges, found {len(rows) - 1}", lineno)
    pairs = []
    for lineno, toks in rows[1:]:
        try:
            u, v = (int(tok) for tok in toks)
        except ValueError:
            raise EdgeListError(f"edge line must be two integers, got {' '.join(toks)!r}", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise EdgeListError(f"vertex out of range 0..{n - 1}", lineno)
        if u == v:
            raise EdgeListError(f"self-loop at vertex {u}", lineno)
        pairs.append((u, v))
    try:
        return from_edge_list(n, pairs)
    except SizeGuardError as e:
        raise EdgeListError(str(e), rows[0][0])


def format_edge_list(G: Graph) -> str:
    edges = G.edges()
    lines = [f"{G.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class FamilySpec:
    """A named graph family instance, e.g. FamilySpec('cycle', (7,)).

    complete_multipartite parts are kept sorted ascending; join carries its two
    operands in `operands` and has no parameters.
    """
    kind: str
    params: Tuple[int, ...] = ()
    operands: Tuple["FamilySpec", ...] = ()

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise FamilySpecError(f"unknown family kind {self.kind!r}; expected one of {', '.join(FAMILY_KINDS)}")
        object.__setattr__(self, 'params', tuple(int(p) for p in self.params))
        if self.kind == 'complete_multipartite':
            object.__setattr__(self, 'params', tuple(sorted(self.params)))
        lo, hi = FAMILY_KINDS[self.kind]
        if len(self.params) < lo or (hi is not None and len(self.params) > hi):
            raise FamilySpecError(f"{self.kind} takes {lo if lo == hi else f'{lo}+'} parameter(s), got {len(self.params)}")
        if self.kind == 'join':
            if len(self.operands) != 2:
                raise FamilySpecError("join needs exactly two operands")
        elif self.operands:
            raise FamilySpecError(f"{self.kind} takes no operands")
        p = self.params
        minimum = {'path': 1, 'cycle': 3, 'complete': 1, 'empty': 1, 'wheel': 4, 'star': 1}
        if self.kind in minimum and p[0] < minimum[self.kind]:
            raise FamilySpecError(f"{self.kind} needs n >= {minimum[self.kind]}, got {p[0]}")
        if self.kind == 'complete_multipartite' and p[0] < 1:
            raise FamilySpecError("multipartite part sizes must be >= 1")
        if self.kind == 'grid' and min(p) < 1:
            raise FamilySpecError("grid dimensions must be >= 1")
        if self.kind == 'tree_from_pruefer':
            n = len(p) + 2
            bad = [x for x in p if not 0 <= x < n]
            if bad:
                raise FamilySpecError(f"Pruefer entries must lie in 0..{n - 1}, got {bad[0]}")
        if self.order() > MAX_VERTICES:
            raise FamilySpecError(f"{format_family(self)} has {self.order()} vertices, limit is {MAX_VERTICES}")

    def order(self) -> int:
        """Number of vertices of the generated graph."""
        p = self.params
        if self.kind == 'star':
            return p[0] + 1
        if self.kind == 'complete_multipartite':
            return sum(p)
        if self.kind == 'join':
            return self.operands[0].order() + self.operands[1].order()
        if self.kind == 'grid':
            return p[0] * p[1]
        if self.kind == 'tree_from_pruefer':
            return len(p) + 2
        return p[0]


def parse_family(text: str) -> FamilySpec:
    """Parse "kind:p1,p2,..." ("join:<left>+<right>", the left operand may not be a join)."""
    kind, sep, rest = text.strip().partition(':')
    if not sep and kind != 'tree_from_pruefer':
        raise FamilySpecError(f"family must look like KIND:PARAMS, got {text!r}")
    if kind == 'join':
        left, plus, right = rest.partition('+')
        if not plus:
            raise FamilySpecError(f"join must look like join:SPEC+SPEC, got {text!r}")
        return FamilySpec('join', (), (parse_family(left), parse_family(right)))
    try:
        params = tuple(int(tok) for tok in rest.split(',') if tok.strip())
    except ValueError:
        raise FamilySpecError(f"non-integer parameter in {text!r}")
    return FamilySpec(kind, params)


def format_family(spec: FamilySpec) -> str:
    if spec.kind == 'join':
        return f"join:{format_family(spec.operands[0])}+{format_family(spec.operands[1])}"
    return f"{spec.kind}:{','.join(str(p) for p in spec.params)}"


def pruefer_to_tree(seq: Sequence[int]) -> List[Edge]:
    """Decode a Pruefer sequence over 0..len+1 into the edges of its labeled tree."""
    n = len(seq) + 2
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = next(v for v in range(n) if degree[v] == 1)
        edges.append((min(leaf, x), max(leaf, x)))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = (w for w in range(n) if degree[w] == 1)
    edges.append((u, v))
    return edges


def generate(spec: FamilySpec) -> Graph:
    """Build the graph for spec with the canonical numbering of its kind.

    path 0..n-1 along the path, cycle 0..n-1 around, wheel hub 0 with rim 1..n-1,
    star center 0, multipartite parts consecutive in ascending size order, join left
    operand first, grid row-major.
    """
    kind, p = spec.kind, spec.params
    n = spec.order()
    planar = None
    if kind == 'path':
        pairs = [(i, i + 1) for i in range(n - 1)]
        planar = True
    elif kind == 'cycle':
        pairs = [(i, (i + 1) % n) for i in range(n)]
        planar = True
    elif kind == 'complete':
        pairs = list(itertools.combinations(range(n), 2))
    elif kind == 'empty':
        pairs = []
    elif kind == 'wheel':
        rim = n - 1
        pairs = [(0, i) for i in range(1, n)] + [(1 + i, 1 + (i + 1) % rim) for i in range(rim)]
        planar = True
    elif kind == 'star':
        pairs = [(0, i) for i in range(1, n)]
    elif kind == 'complete_multipartite':
        part_of = [i for i, size in enumerate(p) for _ in range(size)]
        pairs = [(u, v) for u, v in itertools.combinations(range(n), 2) if part_of[u] != part_of[v]]
    elif kind == 'join':
        left, right = (generate(op) for op in spec.operands)
        k = left.n
        pairs = left.edges() + [(u + k, v + k) for u, v in right.edges()]
        pairs += [(u, k + v) for u in range(k) for v in range(right.n)]
    elif kind == 'grid':
        rows, cols = p
        pairs = [(r * cols + c, r * cols + c + 1) for r in range(rows) for c in range(cols - 1)]
        pairs += [(r * cols + c, (r + 1) * cols + c) for r in range(rows - 1) for c in range(cols)]
        planar = True
    else:
        pairs = pruefer_to_tree(p)
        planar = True
    return from_edge_list(n, pairs, planar_tag=planar)


def remove_edges(G: Graph, edges: Iterable[Edge]) -> Graph:
    """Spanning subgraph G - S; every pair in S must be an edge of G."""
    adj = list(G.adj)
    for u, v in edges:
        if not (0 <= u < G.n and 0 <= v < G.n) or not adj[u] >> v & 1:
            raise ValueError(f"({u}, {v}) is not an edge of the graph")
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
    return Graph(G.n, tuple(adj), G.planar_tag)


def induced_subgraph(G: Graph, vertices: Sequence[int]) -> Graph:
    """Subgraph induced by vertices, relabeled 0..k-1 in the given order."""
    index = {v: i for i, v in enumerate(vertices)}
    pairs = [(index[u], index[v]) for u, v in G.edges() if u in index and v in index]
    return from_edge_list(len(vertices), pairs, planar_tag=G.planar_tag)


def bfs_distances(G: Graph, source: int) -> Dict[int, int]:
    return dict(nx.single_source_shortest_path_length(_to_networkx(G), source))


def components(G: Graph) -> List[List[int]]:
    """Connected components as sorted vertex lists, ordered by least vertex id.

    Stays on the bitsets: the solvers split every graph they see here.
    """
    seen = 0
    result = []
    for s in range(G.n):
        if seen >> s & 1:
            continue
        comp = 1 << s
        frontier = comp
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= G.adj[v]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        result.append(list(iter_bits(comp)))
    return result


def is_connected(G: Graph) -> bool:
    return len(components(G)) <= 1


def is_bipartite(G: Graph) -> Tuple[bool, Optional[List[int]]]:
    """Return (bipartite, 2-coloring by vertex id) as given by networkx."""
    try:
        color = nx.bipartite.color(_to_networkx(G))
    except nx.NetworkXError:
        return False, None
    return True, [color[v] for v in range(G.n)]


def girth(G: Graph) -> float:
    """Length of a shortest cycle, math.inf for forests."""
    return nx.girth(_to_networkx(G))


def longest_path(G: Graph) -> List[int]:
    """A longest path in a forest (diameter path of the component of the least-id vertex with an edge)."""
    start = next((v for v in range(G.n) if G.adj[v]), None)
    if start is None:
        return []
    g = _to_networkx(G)
    dist = nx.single_source_shortest_path_length(g, start)
    far = max(sorted(dist), key=lambda v: dist[v])
    dist = nx.single_source_shortest_path_length(g, far)
    end = max(sorted(dist), key=lambda v: dist[v])
    return nx.shortest_path(g, end, far)


def enumerate_labeled_connected(n: int) -> Iterator[Graph]:
    """Every connected labeled graph on n vertices, in ascending edge-mask order.

    Bit k of the mask selects the k-th pair of itertools.combinations(range(n), 2).
    """
    if not 1 <= n <= MAX_ENUM_CONNECTED:
        raise SizeGuardError(f"enumeration of connected graphs supports 1 <= n <= {MAX_ENUM_CONNECTED}, got {n}")
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        adj = [0] * n
        for k in iter_bits(mask):
            u, v = pairs[k]
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        G = Graph(n, tuple(adj))
        if is_connected(G):
            yield G


def count_labeled_connected(n: int) -> int:
    return sum(1 for _ in enumerate_labeled_connected(n))


def enumerate_trees(n: int) -> Iterator[Graph]:
    """Every labeled tree on n vertices via its Pruefer sequence, in lexicographic sequence order."""
    if not 2 <= n <= MAX_ENUM_TREES:
        raise SizeGuardError(f"tree enumeration supports 2 <= n <= {MAX_ENUM_TREES}, got {n}")
    for seq in itertools.product(range(n), repeat=n - 2):
        yield from_edge_list(n, pruefer_to_tree(seq), planar_tag=True)
