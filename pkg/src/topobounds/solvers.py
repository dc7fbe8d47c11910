"""Exact search engines: cliques, colorings, homomorphisms, hypergraph
2-coloring, bipartite matching and CNF export.

All engines are deterministic (lowest vertex index wins ties) and return the
first witness found; every witness is re-checked before it is returned.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Iterable, Mapping

from .budget import Deadline, as_deadline
from .errors import InternalError, InvalidInput, InvalidParameter
from .graphs import Graph, Hypergraph, _bits, is_proper

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


@dataclass(frozen=True)
class Coloring:
    colors: Mapping[str, int]
    palette: int

    def __getitem__(self, v: str) -> int:
        return self.colors[v]

    def to_json(self) -> dict:
        return {"palette": self.palette, "colors": dict(self.colors)}


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for cl in self.clauses:
            for lit in cl:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise InvalidInput(f"literal {lit} out of range")

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(map(str, cl)) + " 0" for cl in self.clauses]
        return "\n".join(lines) + "\n"

    def evaluate(self, assignment: Mapping[int, bool]) -> bool:
        return all(any(assignment[abs(l)] == (l > 0) for l in cl) for cl in self.clauses)


# cliques -------------------------------------------------------------------


def _greedy_color_order(p: int, masks: tuple[int, ...]) -> tuple[list[int], list[int]]:
    """Sequential greedy coloring of the vertices in ``p`` (Tomita-style bound)."""
    order, bounds = [], []
    color = 0
    uncolored = p
    while uncolored:
        color += 1
        avail = uncolored
        while avail:
            v = (avail & -avail).bit_length() - 1
            avail &= ~(1 << v) & ~masks[v]
            uncolored &= ~(1 << v)
            order.append(v)
            bounds.append(color)
    return order, bounds


def max_clique(g: Graph) -> tuple[int, tuple[str, ...]]:
    """Maximum clique by branch and bound with greedy-coloring bounds."""
    masks = g.masks
    best = [0, 0]

    def expand(r: int, size: int, p: int) -> None:
        order, bounds = _greedy_color_order(p, masks)
        for v, b in zip(reversed(order), reversed(bounds)):
            if size + b <= best[0]:
                return
            np = p & masks[v]
            if np:
                expand(r | 1 << v, size + 1, np)
            elif size + 1 > best[0]:
                best[0], best[1] = size + 1, r | 1 << v
            p &= ~(1 << v)

    if g.n:
        expand(0, 0, (1 << g.n) - 1)
    witness = g.from_mask(best[1])
    if not all(g.has_edge(a, b) for i, a in enumerate(witness) for b in witness[i + 1:]):
        raise InternalError("clique witness is not a clique")
    return best[0], witness


# colorings -------------------------------------------------------------------


def k_colorable(g: Graph, k: int, deadline: Deadline | float | None = None) -> Coloring | None:
    """Proper coloring with colors 1..k, or None.

    DSATUR branching; a maximum clique is precolored with distinct colors and
    new colors are opened one at a time to break color symmetry.
    """
    deadline = as_deadline(deadline)
    if k < 0:
        raise InvalidParameter("k must be >= 0")
    n = g.n
    if n == 0:
        return Coloring({}, k)
    if k == 0:
        return None
    masks = g.masks
    omega, clique = max_clique(g)
    if omega > k:
        return None

    color = [-1] * n
    count = [[0] * k for _ in range(n)]
    forbid = [0] * n
    full = (1 << k) - 1
    uncolored = set(range(n))

    def assign(v: int, c: int) -> bool:
        color[v] = c
        uncolored.discard(v)
        ok = True
        for u in _bits(masks[v]):
            count[u][c] += 1
            if count[u][c] == 1:
                forbid[u] |= 1 << c
                if color[u] < 0 and forbid[u] == full:
                    ok = False
        return ok

    def unassign(v: int) -> None:
        c = color[v]
        color[v] = -1
        uncolored.add(v)
        for u in _bits(masks[v]):
            count[u][c] -= 1
            if count[u][c] == 0:
                forbid[u] &= ~(1 << c)

    idx = g.index
    for c, v in enumerate(clique):
        if not assign(idx[v], c):
            return None
    start_used = len(clique)

    def pick() -> int:
        best, key = -1, None
        for v in uncolored:
            sat = forbid[v].bit_count()
            deg = sum(1 for u in _bits(masks[v]) if color[u] < 0)
            cand = (sat, deg, -v)
            if key is None or cand > key:
                best, key = v, cand
        return best

    def search(used: int) -> bool:
        deadline.check()
        if not uncolored:
            return True
        v = pick()
        limit = min(used + 1, k)
        avail = ~forbid[v] & ((1 << limit) - 1)
        for c in _bits(avail):
            if assign(v, c) and search(max(used, c + 1)):
                return True
            unassign(v)
        return False

    if not search(start_used):
        return None
    result = {g.vertices[i]: color[i] + 1 for i in range(n)}
    if not is_proper(g, result):
        raise InternalError("coloring witness is not proper")
    return Coloring(result, k)


def chromatic_number(g: Graph, deadline: Deadline | float | None = None) -> tuple[int, Coloring]:
    deadline = as_deadline(deadline)
    if g.n == 0:
        return 0, Coloring({}, 0)
    k, _ = max_clique(g)
    while True:
        col = k_colorable(g, k, deadline)
        if col is not None:
            return k, col
        k += 1


# homomorphisms ----------------------------------------------------------------


def homomorphism_exists(
    g: Graph, h: Graph, deadline: Deadline | float | None = None
) -> dict[str, str] | None:
    """Edge-preserving map V(g) -> V(h), or None.

    Backtracking on the vertex with the smallest remaining domain; assigning
    ``v -> a`` restricts every unassigned neighbour of ``v`` to N_h(a).
    """
    deadline = as_deadline(deadline)
    n = g.n
    if n == 0:
        return {}
    if h.n == 0:
        return None
    gm, hm = g.masks, h.masks
    full = (1 << h.n) - 1
    # vertices with a neighbor can only go to non-isolated targets
    nonisolated = sum(1 << i for i in range(h.n) if hm[i])
    dom = [full if not gm[v] else nonisolated for v in range(n)]
    image = [-1] * n

    def search(dom: list[int], left: int) -> bool:
        deadline.check()
        if not left:
            return True
        v, key = -1, None
        for u in _bits(left):
            cand = (dom[u].bit_count(), -(gm[u] & ~left).bit_count(), u)
            if key is None or cand < key:
                v, key = u, cand
        for a in _bits(dom[v]):
            nd = dom[:]
            ok = True
            for w in _bits(gm[v] & left):
                if w == v:
                    continue
                nd[w] &= hm[a]
                if not nd[w]:
                    ok = False
                    break
            if not ok:
                continue
            image[v] = a
            if search(nd, left & ~(1 << v)):
                return True
            image[v] = -1
        return False

    if not search(dom, (1 << n) - 1):
        return None
    result = {g.vertices[i]: h.vertices[image[i]] for i in range(n)}
    if not all(h.has_edge(result[u], result[v]) for u, v in g.edges):
        raise InternalError("homomorphism witness does not preserve edges")
    return result


# hypergraph 2-coloring --------------------------------------------------------


def hypergraph_2colorable(
    h: Hypergraph, deadline: Deadline | float | None = None
) -> dict[str, int] | None:
    """Coloring V -> {1, 2} with no monochromatic edge, or None."""
    deadline = as_deadline(deadline)
    verts = h.vertices
    idx = {v: i for i, v in enumerate(verts)}
    edges = [sorted(idx[v] for v in e) for e in h.edges.values()]
    if any(len(e) == 1 for e in edges):
        return None
    incident: list[list[int]] = [[] for _ in verts]
    for ei, e in enumerate(edges):
        for v in e:
            incident[v].append(ei)
    # vertices in no edge get color 1 without branching
    color = [0] * len(verts)
    order = [i for i in range(len(verts)) if incident[i]]
    order.sort(key=lambda v: (-len(incident[v]), v))

    def consistent(v: int) -> bool:
        for ei in incident[v]:
            e = edges[ei]
            c0 = color[e[0]]
            if c0 and all(color[u] == c0 for u in e):
                return False
        return True

    def search(pos: int) -> bool:
        deadline.check()
        if pos == len(order):
            return True
        v = order[pos]
        for c in (1, 2):
            color[v] = c
            if consistent(v) and search(pos + 1):
                return True
        color[v] = 0
        return False

    if not search(0):
        return None
    result = {v: color[i] or 1 for i, v in enumerate(verts)}
    if any(len({result[v] for v in e}) < 2 for e in h.edges.values()):
        raise InternalError("2-coloring witness has a monochromatic edge")
    return result


# bipartite matching ---------------------------------------------------------------


def max_bipartite_matching(b: Graph, left: Iterable[str]) -> set[tuple[str, str]]:
    """Maximum matching by repeated augmenting-path search (Kuhn).

    Returns (left vertex, right vertex) pairs.
    """
    left_set = set(left)
    unknown = left_set - set(b.vertices)
    if unknown:
        raise InvalidInput(f"left side has unknown vertices {sorted(unknown)[:5]}")
    for u, v in b.edges:
        if (u in left_set) == (v in left_set):
            raise InvalidInput(f"edge {u}-{v} does not cross the given bipartition")
    idx = b.index
    lefts = [v for v in b.vertices if v in left_set]
    match_right: dict[str, str] = {}

    def augment(u: str, seen: set[str]) -> bool:
        for w in sorted(b.neighbors(u), key=idx.__getitem__):
            if w in seen:
                continue
            seen.add(w)
            if w not in match_right or augment(match_right[w], seen):
                match_right[w] = u
                return True
        return False

    for u in lefts:
        augment(u, set())
    matching = {(u, w) for w, u in match_right.items()}
    if len({u for u, _ in matching}) != len(matching) or not all(
        b.has_edge(u, w) for u, w in matching
    ):
        raise InternalError("matching witness is invalid")
    return matching


# CNF export -----------------------------------------------------------------------


def coloring_var(vertex_index: int, color: int, k: int) -> int:
    """DIMACS variable for "vertex has color" (color is 1-based)."""
    return vertex_index * k + color


def export_kcoloring_cnf(g: Graph, k: int) -> CnfFormula:
    """At-least-one-color clauses plus one conflict clause per edge and color."""
    if k < 1:
        raise InvalidParameter("k must be >= 1")
    idx = g.index
    clauses = [tuple(coloring_var(i, c, k) for c in range(1, k + 1)) for i in range(g.n)]
    for u, v in g.edges:
        for c in range(1, k + 1):
            clauses.append((-coloring_var(idx[u], c, k), -coloring_var(idx[v], c, k)))
    return CnfFormula(g.n * k, tuple(clauses))


def coloring_from_model(g: Graph, k: int, model: Mapping[int, bool]) -> dict[str, int]:
    """Read a coloring back from a satisfying assignment (lowest true color)."""
    out = {}
    for i, v in enumerate(g.vertices):
        out[v] = next(c for c in range(1, k + 1) if model[coloring_var(i, c, k)])
    return out
