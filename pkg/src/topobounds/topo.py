"""Free Z2-posets, the Hom complex Hom(K2, G), cross-index, 2-colorability
defect, and the executable extraction of colorful complete bipartite
subgraphs from an independent representation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .budget import Deadline, as_deadline
from .errors import InternalError, InvalidInput, PosetTooLarge
from .graphs import Graph, Hypergraph, _bits, iter_subsets
from .matroids import greedy_independent_subset
from .representations import MatroidAssignment, verify_independent_rep
from .solvers import chromatic_number, max_clique

log = logging.getLogger(__name__)

DEFAULT_POSET_CAP = 200_000


# posets ----------------------------------------------------------------------


class SignedPoset:
    """Finite poset with a fixed-point free, order-preserving involution.

    The order is stored as lower covers; ``less`` answers strict comparisons.
    Elements are addressed by index; ``nu[i]`` is the index of the image of i.
    """

    def __init__(self, elements: Sequence, nu: Sequence[int], lower_covers: Sequence[Sequence[int]]):
        self.elements = list(elements)
        self.nu = list(nu)
        self.lower_covers = [list(c) for c in lower_covers]
        self._below: list[int] | None = None
        self._order: list[int] | None = None

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(size={len(self)}, height={self.height()})"

    @classmethod
    def from_relation(
        cls, elements: Sequence, nu: Sequence[int], less_pairs: Iterable[tuple[int, int]]
    ) -> SignedPoset:
        """Build from any generating set of strict relations ``(p, q)``, p < q."""
        n = len(elements)
        up = [set() for _ in range(n)]
        for p, q in less_pairs:
            up[p].add(q)
        below = [0] * n
        order = _toposort(n, [sorted(u) for u in up])
        preds: list[set[int]] = [set() for _ in range(n)]
        for p in range(n):
            for q in up[p]:
                preds[q].add(p)
        for q in order:
            m = 0
            for p in preds[q]:
                m |= below[p] | 1 << p
            below[q] = m
        covers = []
        for q in range(n):
            bs = _bits(below[q])
            covers.append([p for p in bs if not any(below[r] >> p & 1 for r in bs)])
        poset = cls(elements, nu, covers)
        poset._below = below
        return poset

    def less(self, p: int, q: int) -> bool:
        return bool(self.below_mask()[q] >> p & 1)

    def below_mask(self) -> list[int]:
        if self._below is None:
            below = [0] * len(self)
            for q in self.topological_order():
                m = 0
                for c in self.lower_covers[q]:
                    m |= below[c] | 1 << c
                below[q] = m
            self._below = below
        return self._below

    def below(self, q: int) -> Iterator[int]:
        """All elements strictly below ``q``."""
        return iter(_bits(self.below_mask()[q]))

    def comparable(self, p: int, q: int) -> bool:
        return self.less(p, q) or self.less(q, p)

    def topological_order(self) -> list[int]:
        if self._order is None:
            ups: list[list[int]] = [[] for _ in range(len(self))]
            for q, cs in enumerate(self.lower_covers):
                for c in cs:
                    ups[c].append(q)
            self._order = _toposort(len(self), ups)
        return self._order

    def grades(self) -> list[int]:
        """Length of the longest chain ending at each element, minus one."""
        g = [0] * len(self)
        for q in self.topological_order():
            g[q] = max((g[c] + 1 for c in self.lower_covers[q]), default=0)
        return g

    def height(self) -> int:
        """Longest chain length minus one (-1 when empty)."""
        return max(self.grades(), default=-1)

    def orbit_reps(self) -> list[int]:
        return [i for i in range(len(self)) if i < self.nu[i]]

    def check_invariants(self) -> list[str]:
        problems = []
        n = len(self)
        for i in range(n):
            j = self.nu[i]
            if j == i:
                problems.append(f"nu fixes element {i}")
            if self.nu[j] != i:
                problems.append(f"nu is not an involution at {i}")
        for q, cs in enumerate(self.lower_covers):
            image = set(self.lower_covers[self.nu[q]])
            for c in cs:
                if self.nu[c] not in image:
                    problems.append(f"nu does not preserve cover {c} < {q}")
        for i in range(n):
            if self.comparable(i, self.nu[i]):
                problems.append(f"{i} is comparable with its image")
        return problems


def _toposort(n: int, ups: Sequence[Sequence[int]]) -> list[int]:
    indeg = [0] * n
    for u in ups:
        for q in u:
            indeg[q] += 1
    ready = [i for i in range(n) if not indeg[i]]
    order = []
    while ready:
        ready.sort(reverse=True)
        p = ready.pop()
        order.append(p)
        for q in ups[p]:
            indeg[q] -= 1
            if not indeg[q]:
                ready.append(q)
    if len(order) != n:
        raise InvalidInput("order relation has a cycle")
    return order


def q_poset(n: int) -> SignedPoset:
    """Q_n: elements +-1..+-(n+1), p < q iff |p| < |q|."""
    vals = [s * lvl for lvl in range(1, n + 2) for s in (1, -1)]
    pos = {v: i for i, v in enumerate(vals)}
    rel = [(pos[a], pos[b]) for a in vals for b in vals if abs(a) + 1 == abs(b)]
    return SignedPoset.from_relation(vals, [pos[-v] for v in vals], rel)


@dataclass(frozen=True)
class HomElement:
    X: tuple[str, ...]
    Y: tuple[str, ...]

    def to_json(self) -> dict:
        return {"X": list(self.X), "Y": list(self.Y)}


class HomPoset(SignedPoset):
    """Hom(K2, G): pairs (X, Y) spanning a complete bipartite subgraph."""

    def __init__(self, graph: Graph, pairs: list[tuple[int, int]]):
        self.graph = graph
        self.pairs = pairs
        index = {p: i for i, p in enumerate(pairs)}
        nu = [index[(y, x)] for x, y in pairs]
        covers = []
        for x, y in pairs:
            c = []
            if x & (x - 1):
                c.extend(index[(x & ~(1 << v), y)] for v in _bits(x))
            if y & (y - 1):
                c.extend(index[(x, y & ~(1 << v))] for v in _bits(y))
            covers.append(c)
        self.index = index
        elements = [HomElement(graph.from_mask(x), graph.from_mask(y)) for x, y in pairs]
        super().__init__(elements, nu, covers)
        # pairs are sorted by |X| + |Y|, which is a linear extension
        self._order = list(range(len(pairs)))

    def less(self, p: int, q: int) -> bool:
        (x, y), (x2, y2) = self.pairs[p], self.pairs[q]
        return p != q and not (x & ~x2) and not (y & ~y2)

    def below(self, q: int) -> Iterator[int]:
        x, y = self.pairs[q]
        for sx in iter_subsets(x):
            for sy in iter_subsets(y):
                if sx != x or sy != y:
                    yield self.index[(sx, sy)]

    def grades(self) -> list[int]:
        return [(x.bit_count() + y.bit_count()) - 2 for x, y in self.pairs]


def build_hom_poset(g: Graph, cap: int = DEFAULT_POSET_CAP) -> HomPoset:
    """Enumerate Hom(K2, g); raises PosetTooLarge beyond ``cap`` elements."""
    n = g.n
    masks = g.masks
    pairs: list[tuple[int, int]] = []
    for x in range(1, 1 << n):
        common = (1 << n) - 1
        for v in _bits(x):
            common &= masks[v]
            if not common:
                break
        if not common:
            continue
        for y in iter_subsets(common):
            pairs.append((x, y))
        if len(pairs) > cap:
            raise PosetTooLarge(f"Hom(K2, G) has more than {cap} elements")
    pairs.sort(key=lambda p: (p[0].bit_count() + p[1].bit_count(), p[0], p[1]))
    return HomPoset(g, pairs)


# cross-index -------------------------------------------------------------------


def q_leq(a: int, b: int) -> bool:
    """Order of Q_n (non-strict): equal, or strictly smaller absolute value."""
    return a == b or abs(a) < abs(b)


def check_q_map(poset: SignedPoset, values: Sequence[int], n: int) -> list[str]:
    """Violations of "values is an order-preserving Z2-map into Q_n"."""
    problems = []
    for i, v in enumerate(values):
        if v == 0 or abs(v) > n + 1:
            problems.append(f"value {v} of element {i} outside Q_{n}")
        if values[poset.nu[i]] != -v:
            problems.append(f"element {i} violates equivariance")
    for q, cs in enumerate(poset.lower_covers):
        for c in cs:
            if not q_leq(values[c], values[q]):
                problems.append(f"cover {c} < {q} mapped to {values[c]} > {values[q]}")
    return problems


def height_map(poset: SignedPoset) -> list[int]:
    """Map every element to its grade + 1; always an order-preserving Z2-map."""
    g = poset.grades()
    vals = [0] * len(poset)
    for r in poset.orbit_reps():
        vals[r] = g[r] + 1
        vals[poset.nu[r]] = -(g[r] + 1)
    return vals


def coloring_map(poset: HomPoset, coloring: dict[str, int]) -> list[int]:
    """Q_{k-2} map induced by a proper k-coloring of the host graph.

    (X, Y) goes to level (#colors on X and Y) - 1, signed by the side that
    holds the largest color.
    """
    g = poset.graph
    col = [coloring[v] for v in g.vertices]
    vals = []
    for x, y in poset.pairs:
        cx = {col[v] for v in _bits(x)}
        cy = {col[v] for v in _bits(y)}
        level = len(cx | cy) - 1
        vals.append(level if max(cx) > max(cy) else -level)
    return vals


def _feasible_sat(poset: SignedPoset, n: int, deadline: Deadline) -> list[int] | None:
    """Decide whether an order-preserving Z2-map into Q_n exists (CDCL)."""
    from pysat.solvers import Solver

    levels = n + 1
    nu = poset.nu
    rep = [min(i, nu[i]) for i in range(len(poset))]
    reps = poset.orbit_reps()
    counter = iter(range(1, 1 << 62))
    true = next(counter)
    sign = {r: next(counter) for r in reps}
    geq = {(r, i): next(counter) for r in reps for i in range(2, levels + 1)}

    def g(e: int, i: int) -> int:
        if i <= 1:
            return true
        if i > levels:
            return -true
        return geq[rep[e], i]

    def s(e: int) -> int:
        return sign[rep[e]] if e == rep[e] else -sign[rep[e]]

    clauses = [[true]]
    for r in reps:
        for i in range(2, levels):
            clauses.append([-geq[r, i + 1], geq[r, i]])
    for q in reps:
        for c in poset.lower_covers[q]:
            for i in range(2, levels + 1):
                clauses.append([-g(c, i), g(q, i)])
            for i in range(1, levels + 1):
                a, b = g(c, i), g(q, i + 1)
                clauses.append([-a, b, -s(c), s(q)])
                clauses.append([-a, b, s(c), -s(q)])
    if reps:
        clauses.append([sign[reps[0]]])
    deadline.check()
    with Solver(name="cadical153", bootstrap_with=clauses) as solver:
        if not solver.solve():
            return None
        model = set(v for v in solver.get_model() if v > 0)
    vals = [0] * len(poset)
    for r in reps:
        lvl = 1 + sum(1 for i in range(2, levels + 1) if geq[r, i] in model)
        v = lvl if sign[r] in model else -lvl
        vals[r], vals[nu[r]] = v, -v
    return vals


def _feasible_dfs(poset: SignedPoset, n: int, deadline: Deadline) -> list[int] | None:
    """Same decision by backtracking over minimal admissible values.

    Given the values of its lower covers, an element only needs to try the
    minimal values of Q_n above all of them: a single forced value, or both
    signs one level up when the top covers disagree in sign.
    """
    nu = poset.nu
    order = [q for q in poset.topological_order() if q < nu[q]]
    vals = [0] * len(poset)

    def rec(k: int) -> bool:
        deadline.check()
        if k == len(order):
            return True
        q = order[k]
        top, pos, neg = 0, False, False
        for c in poset.lower_covers[q]:
            a = vals[c]
            lvl = abs(a)
            if lvl > top:
                top, pos, neg = lvl, a > 0, a < 0
            elif lvl == top:
                pos, neg = pos or a > 0, neg or a < 0
        if top == 0:
            opts = (1, -1) if k else (1,)
        elif pos and neg:
            if top + 1 > n + 1:
                return False
            opts = (top + 1, -(top + 1))
        else:
            opts = (top if pos else -top,)
        for o in opts:
            vals[q], vals[nu[q]] = o, -o
            if rec(k + 1):
                return True
        vals[q] = vals[nu[q]] = 0
        return False

    return vals if rec(0) else None


ENGINES: dict[str, Callable] = {"sat": _feasible_sat, "dfs": _feasible_dfs}


@dataclass
class XindResult:
    value: int
    qmap: list[int] | None
    lower_bound: int
    lower_reason: str
    upper_bound: int
    upper_reason: str
    tested: list[int] = field(default_factory=list)


def cross_index(
    poset: SignedPoset,
    engine: str = "sat",
    use_clique_bound: bool = True,
    deadline: Deadline | float | None = None,
) -> XindResult:
    """Exact cross-index with a verified optimal map as certificate.

    Feasibility is tested for n = lb, lb+1, ... below a verified upper bound.
    For Hom(K2, G) the lower bound omega(G) - 2 comes from the subposet
    Hom(K2, K_omega) and the upper bound from a chromatic-number coloring.
    """
    deadline = as_deadline(deadline)
    if not len(poset):
        return XindResult(-1, [], -1, "empty poset", -1, "empty poset")
    if poset.check_invariants():
        raise InvalidInput("not a free Z2-poset: " + poset.check_invariants()[0])
    feasible = ENGINES[engine]
    lb, lb_reason = 0, "nonempty"
    best = height_map(poset)
    ub, ub_reason = poset.height(), "height"
    if isinstance(poset, HomPoset):
        if use_clique_bound:
            omega, _ = max_clique(poset.graph)
            if omega - 2 > lb:
                lb, lb_reason = omega - 2, f"clique of size {omega}"
        chi, col = chromatic_number(poset.graph, deadline)
        if chi - 2 < ub:
            best, ub, ub_reason = coloring_map(poset, dict(col.colors)), chi - 2, f"{chi}-coloring"
    if check_q_map(poset, best, ub):
        raise InternalError("upper-bound map is not an order-preserving Z2-map")
    tested = []
    for n in range(lb, ub):
        tested.append(n)
        vals = feasible(poset, n, deadline)
        if vals is not None:
            if check_q_map(poset, vals, n):
                raise InternalError(f"{engine} engine returned an invalid map")
            log.debug("xind: feasible at n=%d", n)
            return XindResult(n, vals, lb, lb_reason, ub, ub_reason, tested)
    return XindResult(ub, best, lb, lb_reason, ub, ub_reason, tested)


def xind(poset: SignedPoset, **kw) -> int:
    return cross_index(poset, **kw).value


# 2-colorability defect -----------------------------------------------------------


def cd2(h: Hypergraph, deadline: Deadline | float | None = None) -> tuple[int, list[str]]:
    """Minimum number of vertices whose removal leaves a 2-colorable hypergraph.

    Only edges entirely inside the kept vertices survive. Branch and bound
    over labels {color 1, color 2, removed}.
    """
    deadline = as_deadline(deadline)
    verts = list(h.vertices)
    idx = {v: i for i, v in enumerate(verts)}
    edges = [[idx[v] for v in e] for e in h.edges.values()]
    incident: list[list[int]] = [[] for _ in verts]
    for ei, e in enumerate(edges):
        for v in e:
            incident[v].append(ei)
    order = sorted((i for i in range(len(verts)) if incident[i]), key=lambda i: (-len(incident[i]), i))
    label = [0] * len(verts)  # 0 unset, 1/2 colors, 3 removed
    best = [len(order) + 1, []]

    def dead(v: int) -> bool:
        for ei in incident[v]:
            e = edges[ei]
            c = label[e[0]]
            if c in (1, 2) and all(label[u] == c for u in e):
                return True
        return False

    def rec(pos: int, removed: int, colored_any: bool) -> None:
        deadline.check()
        if removed >= best[0]:
            return
        if pos == len(order):
            best[0] = removed
            best[1] = [verts[i] for i in order if label[i] == 3]
            return
        v = order[pos]
        colors = (1, 2) if colored_any else (1,)
        for c in colors:
            label[v] = c
            if not dead(v):
                rec(pos + 1, removed, True)
        label[v] = 3
        rec(pos + 1, removed + 1, colored_any)
        label[v] = 0

    rec(0, 0, False)
    d, removed = best[0], best[1]
    kept = set(verts) - set(removed)
    survivors = {k: e for k, e in h.edges.items() if e <= kept}
    from .solvers import hypergraph_2colorable

    if survivors and hypergraph_2colorable(Hypergraph(sorted(kept, key=idx.__getitem__), survivors)) is None:
        raise InternalError("cd2 witness does not leave a 2-colorable hypergraph")
    return d, removed


# fan-lemma machinery: phi, alternating chains -------------------------------------------


@dataclass
class PhiMap:
    poset: SignedPoset
    values: list[int]
    keys: dict[int, tuple] = field(default_factory=dict, repr=False)

    def __getitem__(self, i: int) -> int:
        return self.values[i]


def check_fan_hypotheses(poset: SignedPoset, values: Sequence[int]) -> list[str]:
    """Violations of the three conditions on phi: antipodal, monotone in
    absolute value, and opposite values only on incomparable pairs.

    Cover pairs suffice: if p < q had phi(p) = -phi(q), monotonicity forces a
    constant absolute value along any cover chain from p to q, so some cover
    on it flips sign.
    """
    problems = []
    for i, v in enumerate(values):
        if v == 0:
            problems.append(f"phi({i}) = 0")
        if values[poset.nu[i]] != -v:
            problems.append(f"phi(nu {i}) != -phi({i})")
    for q, cs in enumerate(poset.lower_covers):
        for c in cs:
            if abs(values[c]) > abs(values[q]):
                problems.append(f"|phi| decreases along {c} < {q}")
            if values[c] == -values[q]:
                problems.append(f"phi({c}) = -phi({q}) on comparable pair")
    return problems


def build_phi(g: Graph, a: MatroidAssignment, poset: HomPoset | None = None) -> PhiMap:
    """Signed rank sums of the two side spans, oriented by a total order on spans.

    Spans are compared by (rank, sorted indices of the vertices whose element
    lies in the span); this refines the rank order and separates distinct spans.
    """
    check = verify_independent_rep(g, a)
    if not check.ok:
        raise InvalidInput(f"not an independent representation: {check.violations[:3]}")
    if poset is None:
        poset = build_hom_poset(g)
    m = a.oracle
    bits = [1 << m.position[a.elements[v]] for v in g.vertices]
    cache: dict[int, tuple] = {}

    def key(vmask: int) -> tuple:
        hit = cache.get(vmask)
        if hit is None:
            emask = 0
            for v in _bits(vmask):
                emask |= bits[v]
            r = m.rank_mask(emask)
            trace = tuple(w for w in range(g.n) if m.rank_mask(emask | bits[w]) == r)
            hit = cache[vmask] = (r, trace)
        return hit

    values = []
    keys = {}
    for i, (x, y) in enumerate(poset.pairs):
        kx, ky = key(x), key(y)
        if kx == ky:
            raise InternalError(f"spans of the two sides of element {i} coincide")
        total = kx[0] + ky[0]
        values.append(total if kx < ky else -total)
        keys[i] = (kx, ky)
    problems = check_fan_hypotheses(poset, values)
    if problems:
        raise InternalError("phi violates its hypotheses: " + problems[0])
    return PhiMap(poset, values, keys)


@dataclass
class Chain:
    elements: list[int]
    phi: list[int]

    def __len__(self) -> int:
        return len(self.elements)


def longest_alternating_chain(poset: SignedPoset, phi: PhiMap | Sequence[int]) -> Chain:
    """Longest chain with |phi| strictly increasing and signs -, +, -, ...

    Dynamic programming over a linear extension; for each element keep the
    longest valid chain ending there (its parity is fixed by the sign).
    """
    values = phi.values if isinstance(phi, PhiMap) else list(phi)
    n = len(poset)
    best = [0] * n
    pred = [-1] * n
    for q in poset.topological_order():
        vq = values[q]
        top, arg = 0, -1
        for p in poset.below(q):
            vp = values[p]
            if best[p] and (vp < 0) != (vq < 0) and abs(vp) < abs(vq):
                if best[p] > top or (best[p] == top and p < arg):
                    top, arg = best[p], p
        if vq < 0:
            best[q], pred[q] = top + 1, arg
        elif top:
            best[q], pred[q] = top + 1, arg
    if not n or not max(best):
        return Chain([], [])
    end = min(range(n), key=lambda i: (-best[i], i))
    out = []
    while end >= 0:
        out.append(end)
        end = pred[end]
    out.reverse()
    chain = Chain(out, [values[i] for i in out])
    _check_chain(poset, chain)
    return chain


def _check_chain(poset: SignedPoset, chain: Chain) -> None:
    for k, (e, v) in enumerate(zip(chain.elements, chain.phi)):
        if (v < 0) != (k % 2 == 0):
            raise InternalError("chain signs do not alternate starting negative")
        if k:
            if not poset.less(chain.elements[k - 1], e):
                raise InternalError("chain is not increasing in the poset")
            if abs(chain.phi[k - 1]) >= abs(v):
                raise InternalError("chain |phi| is not strictly increasing")


# extraction ---------------------------------------------------------------------------


@dataclass
class BipartiteWitness:
    X: tuple[str, ...]
    Y: tuple[str, ...]
    t: int
    certificate: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"X": list(self.X), "Y": list(self.Y), "t": self.t, **self.certificate}


@dataclass
class Extraction:
    t_hat: int
    chain: list[tuple[HomElement, int]]
    witness: BipartiteWitness
    rank_lower_bound: int

    def to_json(self) -> dict:
        return {
            "t_hat": self.t_hat,
            "chain": [{**el.to_json(), "phi": v} for el, v in self.chain],
            "X_star": list(self.witness.X),
            "Y_star": list(self.witness.Y),
            "rank_lower_bound": self.rank_lower_bound,
        }


def _independent_vertices(a: MatroidAssignment, vertices: Sequence[str], k: int) -> list[str]:
    m = a.oracle
    first: dict[str, str] = {}
    for v in vertices:
        first.setdefault(a.elements[v], v)
    chosen = greedy_independent_subset(m, list(first), k)
    order = {v: i for i, v in enumerate(vertices)}
    return sorted((first[e] for e in chosen), key=order.__getitem__)


def verify_bipartite_witness(g: Graph, a: MatroidAssignment, w: BipartiteWitness) -> list[str]:
    problems = []
    if len(w.X) != w.t // 2 or len(w.Y) != (w.t + 1) // 2:
        problems.append("side sizes do not match floor/ceil of t")
    if not g.is_complete_bipartite(w.X, w.Y):
        problems.append("sides do not span a complete bipartite subgraph")
    for side in (w.X, w.Y):
        if not a.oracle.is_independent([a.elements[v] for v in side]):
            problems.append(f"elements on side {list(side)} are not independent")
    return problems


def extract_colorful_bipartite(
    g: Graph, a: MatroidAssignment, cap: int = DEFAULT_POSET_CAP
) -> Extraction:
    """Run Hom poset -> phi -> longest alternating chain -> independent sides."""
    if not g.edges:
        raise InvalidInput("extraction needs a graph with at least one edge")
    poset = build_hom_poset(g, cap)
    phi = build_phi(g, a, poset)
    chain = longest_alternating_chain(poset, phi)
    t_hat = len(chain) + 1
    top = chain.elements[-1]
    (rx, _), (ry, _) = phi.keys[top]
    el = poset.elements[top]
    xs, ys = (el.X, el.Y) if rx <= ry else (el.Y, el.X)
    x_star = _independent_vertices(a, xs, t_hat // 2)
    y_star = _independent_vertices(a, ys, (t_hat + 1) // 2)
    witness = BipartiteWitness(
        tuple(x_star),
        tuple(y_star),
        t_hat,
        {
            "X_elements": [a.elements[v] for v in x_star],
            "Y_elements": [a.elements[v] for v in y_star],
        },
    )
    problems = verify_bipartite_witness(g, a, witness)
    if problems:
        raise InternalError("extracted witness invalid: " + problems[0])
    # an element on the X side is outside the span of the independent Y side
    rank_lb = len(y_star) + 1
    probe = [a.elements[v] for v in y_star] + [a.elements[x_star[0]]]
    if a.oracle.rank(probe) != rank_lb:
        raise InternalError("rank certificate failed")
    return Extraction(
        t_hat,
        [(poset.elements[i], v) for i, v in zip(chain.elements, chain.phi)],
        witness,
        rank_lb,
    )
