"""Graphs, hypergraphs and the constructions used throughout the toolkit.

Vertex ids are opaque strings. The order in which vertices are listed is the
canonical iteration order: every search breaks ties by lowest index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping

from .errors import InvalidInput, InvalidParameter


class Graph:
    """Finite simple graph with an ordered vertex list."""

    def __init__(self, vertices: Iterable, edges: Iterable = ()):
        verts = tuple(str(v) for v in vertices)
        if len(set(verts)) != len(verts):
            raise InvalidInput("duplicate vertex ids")
        adj: dict[str, set[str]] = {v: set() for v in verts}
        for e in edges:
            u, v = (str(x) for x in e)
            if u == v:
                raise InvalidInput(f"loop at {u!r}")
            if u not in adj or v not in adj:
                raise InvalidInput(f"edge {u!r}-{v!r} uses an unknown vertex")
            adj[u].add(v)
            adj[v].add(u)
        self.vertices = verts
        self._adj = {v: frozenset(ns) for v, ns in adj.items()}

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def neighbors(self, v: str) -> frozenset[str]:
        return self._adj[v]

    def degree(self, v: str) -> int:
        return len(self._adj[v])

    def has_edge(self, u: str, v: str) -> bool:
        return v in self._adj[u]

    @cached_property
    def edges(self) -> tuple[tuple[str, str], ...]:
        """Edges as (u, v) with u before v in vertex order, sorted canonically."""
        idx = self.index
        out = []
        for u in self.vertices:
            for v in sorted(self._adj[u], key=idx.__getitem__):
                if idx[u] < idx[v]:
                    out.append((u, v))
        return tuple(out)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighborhood bitmask of each vertex, indexed by vertex position."""
        idx = self.index
        return tuple(sum(1 << idx[u] for u in self._adj[v]) for v in self.vertices)

    def mask_of(self, vs: Iterable[str]) -> int:
        idx = self.index
        m = 0
        for v in vs:
            m |= 1 << idx[v]
        return m

    def from_mask(self, mask: int) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.vertices) if mask >> i & 1)

    def subgraph(self, vs: Iterable[str]) -> Graph:
        keep = set(vs)
        order = [v for v in self.vertices if v in keep]
        return Graph(order, [(u, v) for u, v in self.edges if u in keep and v in keep])

    def is_complete_bipartite(self, xs: Iterable[str], ys: Iterable[str]) -> bool:
        xs, ys = set(xs), set(ys)
        if xs & ys:
            return False
        return all(y in self._adj[x] for x in xs for y in ys)

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: Mapping) -> Graph:
        try:
            return cls(data["vertices"], data.get("edges", []))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed graph JSON: {exc}") from exc

    @classmethod
    def from_edge_list(cls, text: str) -> Graph:
        """Parse one edge per line (``u v``); isolated vertices as single tokens."""
        verts: dict[str, None] = {}
        edges = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            toks = line.replace(",", " ").split()
            if len(toks) > 2:
                raise InvalidInput(f"bad edge line: {line!r}")
            for t in toks:
                verts.setdefault(t)
            if len(toks) == 2:
                edges.append(toks)
        return cls(verts, edges)


class Hypergraph:
    """Hypergraph with named edges.

    Two edges with the same vertex set are only allowed when ``multi`` is set.
    """

    def __init__(self, vertices: Iterable, edges: Mapping[str, Iterable], multi: bool = False):
        verts = tuple(str(v) for v in vertices)
        if len(set(verts)) != len(verts):
            raise InvalidInput("duplicate hypergraph vertex ids")
        vset = set(verts)
        es: dict[str, frozenset[str]] = {}
        seen: dict[frozenset[str], str] = {}
        for eid, members in edges.items():
            s = frozenset(str(x) for x in members)
            if not s:
                raise InvalidInput(f"hyperedge {eid!r} is empty")
            if not s <= vset:
                raise InvalidInput(f"hyperedge {eid!r} uses unknown vertices")
            if s in seen and not multi:
                raise InvalidInput(f"hyperedges {seen[s]!r} and {eid!r} coincide")
            seen.setdefault(s, str(eid))
            es[str(eid)] = s
        self.vertices = verts
        self.edges = es
        self.multi = multi

    def __repr__(self) -> str:
        return f"Hypergraph(n={len(self.vertices)}, edges={len(self.edges)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def to_json(self) -> dict:
        order = {v: i for i, v in enumerate(self.vertices)}
        return {
            "vertices": list(self.vertices),
            "edges": {k: sorted(e, key=order.__getitem__) for k, e in self.edges.items()},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> Hypergraph:
        try:
            return cls(data["vertices"], data["edges"], multi=bool(data.get("multi", False)))
        except (KeyError, TypeError, AttributeError) as exc:
            raise InvalidInput(f"malformed hypergraph JSON: {exc}") from exc


@dataclass(frozen=True)
class ColoredGraph:
    graph: Graph
    coloring: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        missing = [v for v in self.graph.vertices if v not in self.coloring]
        if missing:
            raise InvalidInput(f"uncolored vertices: {missing[:5]}")
        for v, c in self.coloring.items():
            if v not in self.graph:
                raise InvalidInput(f"color given for unknown vertex {v!r}")
            if not isinstance(c, int) or c < 1:
                raise InvalidInput(f"color of {v!r} must be a positive integer")

    @property
    def colors(self) -> list[int]:
        return sorted(set(self.coloring.values()))

    def is_proper(self) -> bool:
        return is_proper(self.graph, self.coloring)

    def to_json(self) -> dict:
        d = self.graph.to_json()
        d["colors"] = {v: self.coloring[v] for v in self.graph.vertices}
        return d

    @classmethod
    def from_json(cls, data: Mapping) -> ColoredGraph:
        g = Graph.from_json(data)
        try:
            colors = {str(k): int(v) for k, v in data["colors"].items()}
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise InvalidInput(f"malformed coloring: {exc}") from exc
        return cls(g, colors)


def is_proper(g: Graph, coloring: Mapping[str, int]) -> bool:
    return all(v in coloring for v in g.vertices) and all(
        coloring[u] != coloring[v] for u, v in g.edges
    )


# generators ---------------------------------------------------------------


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidParameter(f"cycle needs n >= 3, got {n}")
    return Graph(range(n), [(i, (i + 1) % n) for i in range(n)])


def gen_complete(n: int) -> Graph:
    return Graph(range(n), combinations(range(n), 2))


def gen_empty(n: int) -> Graph:
    return Graph(range(n))


def _subset_id(subset: Iterable[int], n: int) -> str:
    s = set(subset)
    return "".join("1" if i in s else "0" for i in range(1, n + 1))


def gen_kneser(n: int, k: int, allow_degenerate: bool = False) -> tuple[Graph, Hypergraph]:
    """KG(n, k) together with its canonical representation ([n], k-subsets).

    Vertex ids are length-n bitstrings, position i set when i+1 is in the subset.
    """
    if k < 1 or n < 1 or k > n:
        raise InvalidParameter(f"need 1 <= k <= n, got n={n}, k={k}")
    if n < 2 * k and not allow_degenerate:
        raise InvalidParameter(f"n < 2k gives an edgeless Kneser graph (n={n}, k={k})")
    subsets = list(combinations(range(1, n + 1), k))
    ids = [_subset_id(s, n) for s in subsets]
    hyper = Hypergraph(
        [str(i) for i in range(1, n + 1)],
        {eid: [str(i) for i in s] for eid, s in zip(ids, subsets)},
    )
    return kneser_graph_of(hyper), hyper


def kneser_graph_of(h: Hypergraph) -> Graph:
    if not h.edges:
        raise InvalidParameter("Kneser graph of a hypergraph without edges")
    if h.multi:
        raise InvalidInput("Kneser construction rejects multi-hypergraphs")
    ids = list(h.edges)
    edges = [(a, b) for a, b in combinations(ids, 2) if not (h.edges[a] & h.edges[b])]
    return Graph(ids, edges)


def maximal_cliques(g: Graph) -> list[frozenset[str]]:
    """All maximal cliques (Bron-Kerbosch with pivoting), in a deterministic order."""
    masks = g.masks
    out: list[int] = []

    def expand(r: int, p: int, x: int) -> None:
        if not p and not x:
            out.append(r)
            return
        pux = p | x
        pivot = max(_bits(pux), key=lambda u: (masks[u] & p).bit_count())
        for v in _bits(p & ~masks[pivot]):
            expand(r | 1 << v, p & masks[v], x & masks[v])
            p &= ~(1 << v)
            x |= 1 << v

    if g.n:
        expand(0, (1 << g.n) - 1, 0)
    out.sort(key=lambda m: _bits(m))
    return [frozenset(g.from_mask(m)) for m in out]


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def kneser_representation(g: Graph) -> Hypergraph:
    """A hypergraph whose Kneser graph is ``g`` under the identity on ids.

    Hypergraph vertices are one private token per graph vertex plus every
    maximal independent set of ``g``; edge ``v`` is the token of ``v`` together
    with the maximal independent sets containing ``v``.
    """
    mis = maximal_cliques(complement(g))
    tokens = [f"t:{v}" for v in g.vertices]
    mis_ids = [f"I{i}" for i in range(len(mis))]
    edges = {}
    for v in g.vertices:
        edges[v] = [f"t:{v}"] + [mid for mid, s in zip(mis_ids, mis) if v in s]
    return Hypergraph(tokens + mis_ids, edges)


def gen_H(t: int) -> Graph:
    """Odd-weight vectors of GF(2)^t, adjacent when orthogonal."""
    if not 1 <= t <= 20:
        raise InvalidParameter(f"H_t needs 1 <= t <= 20, got {t}")
    vecs = [bits for bits in product((0, 1), repeat=t) if sum(bits) % 2]
    ids = ["".join(map(str, b)) for b in vecs]
    ints = [int(s, 2) for s in ids]
    edges = [
        (ids[i], ids[j])
        for i, j in combinations(range(len(ids)), 2)
        if (ints[i] & ints[j]).bit_count() % 2 == 0
    ]
    return Graph(ids, edges)


def complement(g: Graph) -> Graph:
    return Graph(
        g.vertices,
        [(u, v) for u, v in combinations(g.vertices, 2) if not g.has_edge(u, v)],
    )


def augment_dummies(cg: ColoredGraph, s: int) -> ColoredGraph:
    """Add ``s`` pairwise nonadjacent vertices joined to every original vertex.

    Each new vertex gets its own fresh color.
    """
    if s < 0:
        raise InvalidParameter("number of dummy vertices must be >= 0")
    g = cg.graph
    taken = set(g.vertices)
    dummies: list[str] = []
    i = 1
    while len(dummies) < s:
        name = f"d{i}"
        while name in taken:
            name = "_" + name
        dummies.append(name)
        i += 1
    top = max(cg.coloring.values(), default=0)
    coloring = dict(cg.coloring)
    for j, d in enumerate(dummies, 1):
        coloring[d] = top + j
    edges = list(g.edges) + [(v, d) for d in dummies for v in g.vertices]
    return ColoredGraph(Graph(g.vertices + tuple(dummies), edges), coloring)


def iter_subsets(mask: int) -> Iterator[int]:
    """Nonempty submasks of ``mask``, in increasing numeric order."""
    sub = 0
    while True:
        sub = (sub - mask) & mask
        if not sub:
            return
        yield sub
