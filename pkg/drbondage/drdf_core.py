"""Double Roman dominating functions: the labeling type, validity and no-ones normalization."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from drbondage.graph_core import Graph, iter_bits, popcount

LABELS = (0, 1, 2, 3)


@dataclass(frozen=True)
class Labeling:
    """Per-vertex labels f(v) in {0, 1, 2, 3}."""
    values: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'values', tuple(self.values))
        bad = [x for x in self.values if x not in LABELS]
        if bad:
            raise ValueError(f"label {bad[0]!r} is not in {{0, 1, 2, 3}}")

    def __len__(self) -> int:
        return len(self.values)

    def mask(self, label: int) -> int:
        """Bitset of the vertices carrying label (V_0, V_1, V_2 or V_3)."""
        m = 0
        for v, x in enumerate(self.values):
            if x == label:
                m |= 1 << v
        return m

    def __str__(self) -> str:
        return format_labeling(self)


def from_masks(n: int, twos: int, threes: int) -> Labeling:
    """Labeling with 2 on `twos`, 3 on `threes` and 0 elsewhere."""
    return Labeling(tuple(3 if threes >> v & 1 else 2 if twos >> v & 1 else 0 for v in range(n)))


def weight(f: Labeling) -> int:
    return sum(f.values)


def _check_length(G: Graph, f: Labeling):
    if len(f) != G.n:
        raise ValueError(f"labeling has {len(f)} entries for a graph on {G.n} vertices")


def undefended(G: Graph, f: Labeling) -> int:
    """Bitset of vertices whose condition fails: 0-vertices without a 3-neighbor or two
    2-neighbors, and 1-vertices without a neighbor labeled 2 or 3."""
    _check_length(G, f)
    twos, threes = f.mask(2), f.mask(3)
    bad = 0
    for v, x in enumerate(f.values):
        nb = G.adj[v]
        if x == 0 and not nb & threes and popcount(nb & twos) < 2:
            bad |= 1 << v
        elif x == 1 and not nb & (twos | threes):
            bad |= 1 << v
    return bad


def is_valid_drdf(G: Graph, f: Labeling) -> bool:
    return undefended(G, f) == 0


def normalize_no_ones(G: Graph, f: Labeling) -> Labeling:
    """Rewrite a valid DRDF into a {0, 2, 3} DRDF that is no heavier.

    1-vertices are handled in ascending id. One with a 3-neighbor drops to 0. Otherwise
    its least-id neighbor labeled 2 is raised to 3, and the vertex plus every other
    1-neighbor of the raised vertex drop to 0.
    """
    if not is_valid_drdf(G, f):
        raise ValueError("normalize_no_ones needs a valid double Roman dominating function")
    vals = list(f.values)
    for v in range(G.n):
        if vals[v] != 1:
            continue
        nbrs = list(iter_bits(G.adj[v]))
        if any(vals[u] == 3 for u in nbrs):
            vals[v] = 0
            continue
        # labels 2 and 3 never decrease, so the 2-neighbor that made v valid is still there
        u = next(u for u in nbrs if vals[u] == 2)
        vals[u] = 3
        for w in iter_bits(G.adj[u]):
            if vals[w] == 1:
                vals[w] = 0
    return Labeling(tuple(vals))


def format_labeling(f: Labeling) -> str:
    return ",".join(str(x) for x in f.values)


def parse_labeling(text: str) -> Labeling:
    """Parse the comma-separated form, e.g. "0,3,0"."""
    text = text.strip()
    if not text:
        return Labeling(())
    try:
        return Labeling(tuple(int(tok) for tok in text.split(',')))
    except ValueError as e:
        raise ValueError(f"bad labeling {text!r}: {e}")
