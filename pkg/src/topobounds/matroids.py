"""Matroids exposed through rank queries only.

Three kinds are supported: uniform, linear (columns of an exact matrix) and
transversal (one side of a bipartite graph). Rank queries are memoized per
oracle, keyed by the subset's bitmask over the ground set.
"""

from __future__ import annotations

import threading
from typing import Iterable, Mapping, Sequence

from .algebra import ExactMatrix, ExactVector, Field, rank_of_rows
from .errors import InsufficientRank, InvalidInput, InvalidParameter
from .graphs import Graph
from .solvers import max_bipartite_matching

DEFAULT_GROUND_CAP = 64


class RankOracle:
    kind = "abstract"

    def __init__(self, ground: Sequence[str], ground_cap: int = DEFAULT_GROUND_CAP):
        ground = tuple(str(e) for e in ground)
        if len(set(ground)) != len(ground):
            raise InvalidInput("duplicate ground-set elements")
        if len(ground) > ground_cap:
            raise InvalidParameter(f"ground set of {len(ground)} exceeds cap {ground_cap}")
        self.ground = ground
        self.position = {e: i for i, e in enumerate(ground)}
        self._memo: dict[int, int] = {}
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"{type(self).__name__}(|E|={len(self.ground)}, rank={self.full_rank})"

    def mask(self, subset: Iterable[str]) -> int:
        m = 0
        for e in subset:
            try:
                m |= 1 << self.position[e]
            except KeyError:
                raise InvalidInput(f"{e!r} is not in the ground set") from None
        return m

    def elements(self, mask: int) -> list[str]:
        return [e for i, e in enumerate(self.ground) if mask >> i & 1]

    def rank(self, subset: Iterable[str]) -> int:
        return self.rank_mask(self.mask(subset))

    def rank_mask(self, mask: int) -> int:
        r = self._memo.get(mask)
        if r is None:
            r = self._rank(self.elements(mask))
            with self._lock:
                self._memo[mask] = r
        return r

    def _rank(self, elements: list[str]) -> int:
        raise NotImplementedError

    @property
    def full_rank(self) -> int:
        return self.rank_mask((1 << len(self.ground)) - 1)

    def is_independent(self, subset: Iterable[str]) -> bool:
        s = list(subset)
        return len(set(s)) == len(s) and self.rank(s) == len(s)

    def is_loop(self, e: str) -> bool:
        return self.rank([e]) == 0

    def to_json(self) -> dict:
        raise NotImplementedError


class UniformMatroid(RankOracle):
    kind = "uniform"

    def __init__(self, m: int, r: int, ground: Sequence[str] | None = None, **kw):
        if not 0 <= r <= m:
            raise InvalidParameter(f"uniform matroid needs 0 <= r <= m, got r={r}, m={m}")
        if ground is None:
            ground = [str(i) for i in range(1, m + 1)]
        if len(ground) != m:
            raise InvalidParameter("ground set size must equal m")
        super().__init__(ground, **kw)
        self.m, self.r = m, r

    def rank_mask(self, mask: int) -> int:
        return min(mask.bit_count(), self.r)

    def _rank(self, elements: list[str]) -> int:
        return min(len(elements), self.r)

    def to_json(self) -> dict:
        return {"kind": "uniform", "m": self.m, "r": self.r, "ground": list(self.ground)}


class LinearMatroid(RankOracle):
    """Column matroid of ``columns``; element ``labels[j]`` is column j."""

    kind = "linear"

    def __init__(self, columns: ExactMatrix, labels: Sequence[str] | None = None, **kw):
        if labels is None:
            labels = [str(j) for j in range(columns.ncols)]
        if len(labels) != columns.ncols:
            raise InvalidParameter("one label per column required")
        super().__init__(labels, **kw)
        self.matrix = columns
        self.field = columns.field
        self.vectors = {lab: columns.column(j) for j, lab in enumerate(self.ground)}

    @classmethod
    def from_vectors(cls, field: Field, vectors: Mapping[str, Sequence], **kw) -> LinearMatroid:
        labels = list(vectors)
        cols = ExactMatrix.from_vectors(field, [vectors[k] for k in labels], as_columns=True)
        if not labels:
            cols = ExactMatrix(field, (), 0)
        return cls(cols, labels, **kw)

    def _rank(self, elements: list[str]) -> int:
        return rank_of_rows(self.field, [self.vectors[e].entries for e in elements])

    def vector(self, e: str) -> ExactVector:
        return self.vectors[e]

    def to_json(self) -> dict:
        return {
            "kind": "linear",
            "field": self.field.to_json(),
            "labels": list(self.ground),
            "columns": [self.vectors[e].to_json() for e in self.ground],
        }


class TransversalMatroid(RankOracle):
    """Matchable subsets of side ``U`` of the bipartite graph ``B``."""

    kind = "transversal"

    def __init__(self, b: Graph, side: Iterable[str], **kw):
        side = [str(u) for u in side]
        sset = set(side)
        if not sset <= set(b.vertices):
            raise InvalidInput("side contains vertices outside the graph")
        for u, v in b.edges:
            if (u in sset) == (v in sset):
                raise InvalidInput(f"{sorted(sset)} is not a side of a bipartition (edge {u}-{v})")
        order = [v for v in b.vertices if v in sset]
        super().__init__(order, **kw)
        self.graph = b
        self.side = frozenset(sset)
        self.other = [v for v in b.vertices if v not in sset]

    def _rank(self, elements: list[str]) -> int:
        sub = self.graph.subgraph(list(elements) + self.other)
        return len(max_bipartite_matching(sub, elements))

    def rank_by_deletion(self, subset: Iterable[str]) -> int:
        """Same rank, computed on the whole graph with U minus S deleted."""
        keep = set(subset)
        deleted = self.side - keep
        sub = self.graph.subgraph(v for v in self.graph.vertices if v not in deleted)
        return len(max_bipartite_matching(sub, [v for v in sub.vertices if v in self.side]))

    def to_json(self) -> dict:
        return {"kind": "transversal", "graph": self.graph.to_json(), "side": list(self.ground)}


def uniform_matroid(m: int, r: int) -> UniformMatroid:
    return UniformMatroid(m, r)


def linear_matroid(columns: ExactMatrix, labels: Sequence[str] | None = None) -> LinearMatroid:
    return LinearMatroid(columns, labels)


def transversal_matroid(b: Graph, side: Iterable[str]) -> TransversalMatroid:
    return TransversalMatroid(b, side)


def oracle_from_json(data: Mapping) -> RankOracle:
    try:
        kind = data["kind"]
        if kind == "uniform":
            return UniformMatroid(int(data["m"]), int(data["r"]), data.get("ground"))
        if kind == "linear":
            field = Field.from_json(data["field"])
            cols = data["columns"]
            labels = data.get("labels") or [str(j) for j in range(len(cols))]
            return LinearMatroid.from_vectors(field, dict(zip(labels, cols)))
        if kind == "transversal":
            return TransversalMatroid(Graph.from_json(data["graph"]), data["side"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed oracle JSON: {exc}") from exc
    raise InvalidInput(f"unknown matroid kind {data.get('kind')!r}")


def closure_trace(m: RankOracle, subset: Iterable[str], universe: Iterable[str]) -> list[str]:
    """Elements of ``universe`` spanned by ``subset``, in ground order."""
    s = m.mask(subset)
    base = m.rank_mask(s)
    u = m.mask(universe)
    return [e for e in m.elements(u) if m.rank_mask(s | 1 << m.position[e]) == base]


def greedy_independent_subset(m: RankOracle, subset: Iterable[str], k: int) -> list[str]:
    """Independent subset of ``subset`` of size ``k``, greedy in ground order."""
    cands = m.elements(m.mask(subset))
    if m.rank(cands) < k:
        raise InsufficientRank(f"rank {m.rank(cands)} < {k}")
    chosen = 0
    out: list[str] = []
    for e in cands:
        if len(out) == k:
            break
        bit = 1 << m.position[e]
        if m.rank_mask(chosen | bit) == len(out) + 1:
            chosen |= bit
            out.append(e)
    return out
