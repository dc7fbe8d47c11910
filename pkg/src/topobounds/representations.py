"""Orthogonal and independent representations, minrank, and the two
conversions between representing matrices and independent representations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import TYPE_CHECKING, Iterator, Mapping, Sequence

from .algebra import (
    ExactMatrix,
    ExactVector,
    Field,
    bilinear,
    kernel_basis,
    projective_points,
    rank,
    rank_of_rows,
    rref,
)
from .budget import Deadline, as_deadline
from .errors import (
    DimensionMismatch,
    InstanceTooLarge,
    InternalError,
    InvalidInput,
    InvalidParameter,
    UnsupportedSearchField,
)
from .graphs import Graph, _bits, complement
from .matroids import LinearMatroid, RankOracle, UniformMatroid, oracle_from_json
from .solvers import Coloring, chromatic_number, homomorphism_exists, max_clique

if TYPE_CHECKING:
    from .topo import BipartiteWitness

DEFAULT_MINRANK_CAP = 2_000_000


@dataclass
class Check:
    """Outcome of a verifier: ``ok`` plus human-readable violations."""

    ok: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


# data types --------------------------------------------------------------------


class VectorAssignment:
    """A vector of F^dim for every vertex."""

    def __init__(self, field: Field, dim: int, vectors: Mapping[str, Sequence]):
        self.field = field
        self.dim = dim
        out = {}
        for v, x in vectors.items():
            vec = x if isinstance(x, ExactVector) else ExactVector(field, tuple(x))
            if vec.field != field:
                raise DimensionMismatch(f"vector of {v!r} is over {vec.field}, not {field}")
            if len(vec) != dim:
                raise DimensionMismatch(f"vector of {v!r} has length {len(vec)}, expected {dim}")
            out[str(v)] = vec
        self.vectors = out

    def __getitem__(self, v: str) -> ExactVector:
        return self.vectors[v]

    def __repr__(self) -> str:
        return f"VectorAssignment({self.field}, dim={self.dim}, n={len(self.vectors)})"

    def missing(self, g: Graph) -> list[str]:
        return [v for v in g.vertices if v not in self.vectors]

    def to_matroid(self) -> MatroidAssignment:
        """Each vertex becomes its own element of the column matroid."""
        lm = LinearMatroid.from_vectors(self.field, {v: x.entries for v, x in self.vectors.items()}, ground_cap=4096)
        return MatroidAssignment(lm, {v: v for v in self.vectors})

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "dim": self.dim,
            "vectors": {v: [str(self.field.dump(x)) for x in vec] for v, vec in self.vectors.items()},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> VectorAssignment:
        try:
            f = Field.from_json(data["field"])
            vectors = data["vectors"]
            dim = data.get("dim")
            if dim is None:
                dim = len(next(iter(vectors.values()))) if vectors else 0
            return cls(f, int(dim), vectors)
        except (KeyError, TypeError, AttributeError) as exc:
            raise InvalidInput(f"malformed representation JSON: {exc}") from exc


class MatroidAssignment:
    """A ground-set element of ``oracle`` for every vertex."""

    def __init__(self, oracle: RankOracle, elements: Mapping[str, str]):
        for v, e in elements.items():
            if e not in oracle.position:
                raise InvalidInput(f"element {e!r} of vertex {v!r} is not in the ground set")
        self.oracle = oracle
        self.elements = {str(v): e for v, e in elements.items()}

    def __repr__(self) -> str:
        return f"MatroidAssignment({self.oracle!r}, n={len(self.elements)})"

    def span_rank(self, vertices) -> int:
        return self.oracle.rank({self.elements[v] for v in vertices})

    def to_json(self) -> dict:
        return {"matroid": self.oracle.to_json(), "assignment": dict(self.elements)}

    @classmethod
    def from_json(cls, data: Mapping) -> MatroidAssignment:
        try:
            return cls(oracle_from_json(data["matroid"]), data["assignment"])
        except (KeyError, TypeError, AttributeError) as exc:
            raise InvalidInput(f"malformed matroid assignment JSON: {exc}") from exc


@dataclass
class RepresentingMatrix:
    """Square matrix indexed by ``graph.vertices`` that should represent ``graph``."""

    field: Field
    matrix: ExactMatrix
    graph: Graph

    def __post_init__(self):
        if self.matrix.shape != (self.graph.n, self.graph.n):
            raise DimensionMismatch(f"matrix shape {self.matrix.shape} vs {self.graph.n} vertices")

    def violations(self) -> list[str]:
        g, rows = self.graph, self.matrix.rows
        out = []
        for i, u in enumerate(g.vertices):
            if not rows[i][i]:
                out.append(f"zero diagonal entry at {u}")
            for j, v in enumerate(g.vertices):
                if i != j and rows[i][j] and not g.has_edge(u, v):
                    out.append(f"nonzero entry at nonadjacent pair ({u}, {v})")
        return out

    @property
    def rank(self) -> int:
        return rank(self.matrix)

    def is_symmetric(self) -> bool:
        return self.matrix.rows == self.matrix.transpose().rows

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "vertices": list(self.graph.vertices),
            "matrix": [[str(x) for x in r] for r in self.matrix.to_json()],
        }

    @classmethod
    def from_json(cls, data: Mapping, graph: Graph) -> RepresentingMatrix:
        try:
            f = Field.from_json(data["field"])
            return cls(f, ExactMatrix(f, tuple(tuple(r) for r in data["matrix"])), graph)
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed matrix JSON: {exc}") from exc


def coloring_assignment(coloring: Mapping[str, int], m: int | None = None, r: int | None = None) -> MatroidAssignment:
    """Read a coloring as an assignment into the uniform matroid U_m^r.

    Colors must be 1..m; the element of a vertex is its color as a string.
    Defaults: m = largest color, r = m.
    """
    top = max(coloring.values(), default=0)
    m = top if m is None else m
    if top > m:
        raise InvalidParameter(f"color {top} exceeds m = {m}")
    r = m if r is None else r
    return MatroidAssignment(UniformMatroid(m, r), {v: str(c) for v, c in coloring.items()})


# orthogonal representations ----------------------------------------------------------


def verify_orthogonal_rep(g: Graph, rep: VectorAssignment) -> Check:
    problems = [f"no vector for {v}" for v in rep.missing(g)]
    if problems:
        return Check(False, problems)
    for v in g.vertices:
        if not bilinear(rep[v], rep[v]):
            problems.append(f"<x_{v}, x_{v}> = 0")
    for u, v in g.edges:
        if bilinear(rep[u], rep[v]):
            problems.append(f"edge {u}-{v} is not orthogonal")
    return Check(not problems, problems)


def orthogonality_graph(f: Field, t: int) -> tuple[Graph, dict[str, tuple]]:
    """Projective points with nonzero self-product, adjacent when orthogonal.

    An orthogonal representation in dimension t is, up to scaling, a
    homomorphism into this graph. Over GF(2) it is H_t.
    """
    pts = [x for x in projective_points(f, t) if sum(a * a for a in x) % f.p]
    ids = ["".join(map(str, x)) if f.p < 10 else ",".join(map(str, x)) for x in pts]
    edges = [
        (ids[i], ids[j])
        for i, j in combinations(range(len(pts)), 2)
        if not sum(a * b for a, b in zip(pts[i], pts[j])) % f.p
    ]
    return Graph(ids, edges), dict(zip(ids, pts))


def orthogonality_dimension(
    g: Graph, f: Field, t_max: int, deadline: Deadline | float | None = None
) -> tuple[int, VectorAssignment] | None:
    """Smallest t <= t_max with a t-dimensional orthogonal representation over ``f``.

    Dimensions below the clique number are skipped: pairwise orthogonal
    vectors with nonzero self-products are linearly independent.
    """
    if not f.is_prime_field:
        raise UnsupportedSearchField(f"exhaustive search needs a prime field, got {f}")
    if t_max < 1:
        raise InvalidParameter("t_max must be >= 1")
    deadline = as_deadline(deadline)
    if g.n == 0:
        return 0, VectorAssignment(f, 0, {})
    omega, _ = max_clique(g)
    for t in range(max(omega, 1), t_max + 1):
        target, coords = orthogonality_graph(f, t)
        hom = homomorphism_exists(g, target, deadline)
        if hom is not None:
            rep = VectorAssignment(f, t, {v: coords[hom[v]] for v in g.vertices})
            if not verify_orthogonal_rep(g, rep):
                raise InternalError("orthogonal representation failed verification")
            return t, rep
    return None


def probe_pairwise_orthogonal_bipartite(
    g: Graph, rep: VectorAssignment, a: int, b: int
) -> BipartiteWitness | None:
    """A K_{a,b} of ``g`` whose a+b vectors are pairwise orthogonal, or None."""
    from .topo import BipartiteWitness

    if a < 1 or b < 1:
        raise InvalidParameter("side sizes must be >= 1")
    verts = g.vertices
    n = g.n
    orth = [[not bilinear(rep[u], rep[v]) for v in verts] for u in verts]
    masks = g.masks

    def cliques(cand: int, size: int) -> Iterator[list[int]]:
        # subsets of ``cand`` of the given size whose vectors are pairwise orthogonal
        for combo in combinations(_bits(cand), size):
            if all(orth[i][j] for i, j in combinations(combo, 2)):
                yield list(combo)

    for xs in cliques((1 << n) - 1, a):
        common = (1 << n) - 1
        for i in xs:
            common &= masks[i]
            common &= sum(1 << j for j in range(n) if orth[i][j])
        for ys in cliques(common, b):
            return BipartiteWitness(tuple(verts[i] for i in xs), tuple(verts[j] for j in ys), None)
    return None


# independent representations -------------------------------------------------------------


def verify_independent_rep(g: Graph, a: MatroidAssignment) -> Check:
    problems = [f"no element for {v}" for v in g.vertices if v not in a.elements]
    if problems:
        return Check(False, problems)
    m = a.oracle
    for v in g.vertices:
        e = a.elements[v]
        if m.is_loop(e):
            problems.append(f"element {e} of {v} is a loop")
            continue
        nb = m.mask(a.elements[u] for u in g.neighbors(v))
        if m.rank_mask(nb | m.mask([e])) == m.rank_mask(nb):
            problems.append(f"element of {v} lies in the span of its neighbors")
    return Check(not problems, problems)


def _subspaces(f: Field, n: int, r: int) -> Iterator[list[list[int]]]:
    """Every r-dimensional subspace of F^n, as the rows of its RREF basis."""
    p = f.p
    for pivots in combinations(range(n), r):
        slots = [(i, j) for i, pc in enumerate(pivots) for j in range(pc + 1, n) if j not in pivots]
        for vals in product(range(p), repeat=len(slots)):
            rows = [[0] * n for _ in range(r)]
            for i, pc in enumerate(pivots):
                rows[i][pc] = 1
            for (i, j), x in zip(slots, vals):
                rows[i][j] = x
            yield rows


def _gaussian_binomial(n: int, r: int, q: int) -> int:
    num = den = 1
    for i in range(r):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _minrank_subspaces(g: Graph, f: Field, cap: int, deadline: Deadline) -> tuple[int, list[list[int]]]:
    """Search row spaces by dimension.

    A matrix of rank <= r represents g iff its rows lie in some r-dimensional
    space W. For a fixed W, row u can be chosen iff W holds a vector supported
    on the closed neighborhood of u with a nonzero u entry.
    """
    n, p = g.n, f.p
    total = sum(_gaussian_binomial(n, r, p) for r in range(1, n + 1))
    if total > cap:
        raise InstanceTooLarge(f"{total} subspaces exceed the cap {cap}")
    outside = [
        [j for j in range(n) if j != u and not g.masks[u] >> j & 1] for u in range(n)
    ]
    for r in range(1, n + 1):
        for basis in _subspaces(f, n, r):
            deadline.check()
            rows = []
            for u in range(n):
                # coefficient vectors c with (c^T basis) zero outside N[u]
                cons = ExactMatrix(f, tuple(tuple(basis[i][j] for i in range(r)) for j in outside[u]), r)
                row = None
                for c in kernel_basis(cons):
                    if sum(c[i] * basis[i][u] for i in range(r)) % p:
                        row = [sum(c[i] * basis[i][j] for i in range(r)) % p for j in range(n)]
                        break
                if row is None:
                    break
                rows.append(row)
            else:
                return r, rows
    raise InternalError("no representing matrix found up to full rank")


def _minrank_matrices(g: Graph, f: Field, cap: int, deadline: Deadline) -> tuple[int, list[list[int]]]:
    """Enumerate all matrices with unit diagonal and free entries on edges."""
    n, p = g.n, f.p
    slots = [(i, j) for i in range(n) for j in range(n) if i != j and g.masks[i] >> j & 1]
    if p ** len(slots) > cap:
        raise InstanceTooLarge(f"{p}^{len(slots)} matrices exceed the cap {cap}")
    best_r, best = n + 1, None
    for vals in product(range(p), repeat=len(slots)):
        deadline.check()
        rows = [[int(i == j) for j in range(n)] for i in range(n)]
        for (i, j), x in zip(slots, vals):
            rows[i][j] = x
        r = rank_of_rows(f, rows)
        if r < best_r:
            best_r, best = r, rows
    return best_r, best


def minrank_bruteforce(
    g: Graph,
    f: Field,
    engine: str = "subspaces",
    cap: int = DEFAULT_MINRANK_CAP,
    deadline: Deadline | float | None = None,
) -> tuple[int, RepresentingMatrix]:
    """Exact minrank over a prime field, with a witness matrix.

    ``engine="matrices"`` enumerates p^(2|E|) normalized matrices;
    ``engine="subspaces"`` enumerates candidate row spaces and is far smaller
    on dense graphs. Both raise InstanceTooLarge beyond ``cap`` candidates.
    """
    if not f.is_prime_field:
        raise UnsupportedSearchField(f"exhaustive search needs a prime field, got {f}")
    deadline = as_deadline(deadline)
    if g.n == 0:
        return 0, RepresentingMatrix(f, ExactMatrix(f, (), 0), g)
    if engine == "subspaces":
        r, rows = _minrank_subspaces(g, f, cap, deadline)
    elif engine == "matrices":
        r, rows = _minrank_matrices(g, f, cap, deadline)
    else:
        raise InvalidParameter(f"unknown minrank engine {engine!r}")
    witness = RepresentingMatrix(f, ExactMatrix(f, tuple(map(tuple, rows))), g)
    if witness.violations() or witness.rank != r:
        raise InternalError("minrank witness failed verification")
    return r, witness


def min_indrep_dimension(
    g: Graph, f: Field, s_max: int, deadline: Deadline | float | None = None
) -> tuple[int, VectorAssignment] | None:
    """Smallest s <= s_max with an independent representation over F^s.

    Backtracking over projective points. The general linear group is
    factored out: a new vector either lies in the span e_1..e_d of the
    vectors placed so far or is e_{d+1}. A vertex is rejected as soon as its
    vector falls in the span of its already placed neighbors.
    """
    if not f.is_prime_field:
        raise UnsupportedSearchField(f"exhaustive search needs a prime field, got {f}")
    deadline = as_deadline(deadline)
    if g.n == 0:
        return 0, VectorAssignment(f, 0, {})
    order = sorted(range(g.n), key=lambda v: (-g.masks[v].bit_count(), v))
    masks = g.masks
    for s in range(1, s_max + 1):
        # points[d]: projective points of F^s supported on the first d coordinates
        points = [[x + (0,) * (s - d) for x in projective_points(f, d)] for d in range(s + 1)]
        units = [tuple(int(i == d) for i in range(s)) for d in range(s)]
        vec: list[tuple | None] = [None] * g.n

        def ok(v: int) -> bool:
            for w in [v] + [u for u in _bits(masks[v]) if vec[u] is not None]:
                nb = [vec[u] for u in _bits(masks[w]) if vec[u] is not None]
                if nb and rank_of_rows(f, nb) == rank_of_rows(f, nb + [vec[w]]):
                    return False
            return True

        def rec(k: int, d: int) -> bool:
            deadline.check()
            if k == g.n:
                return True
            v = order[k]
            cands = [(x, d) for x in points[d]]
            if d < s:
                cands.append((units[d], d + 1))
            for x, nd in cands:
                vec[v] = x
                if ok(v) and rec(k + 1, nd):
                    return True
            vec[v] = None
            return False

        if rec(0, 0):
            rep = VectorAssignment(f, s, {g.vertices[i]: vec[i] for i in range(g.n)})
            if not verify_independent_rep(g, rep.to_matroid()):
                raise InternalError("independent representation failed verification")
            return s, rep
    return None


def matrix_to_indrep(a: RepresentingMatrix, g: Graph | None = None) -> VectorAssignment:
    """Rows of a maximal set of independent columns of ``a``.

    ``a`` represents the complement of the returned representation's graph;
    pass ``g`` to have that checked. The result lives in F^rank(a); its
    column-matroid view is ``.to_matroid()``.
    """
    problems = a.violations()
    if problems:
        raise InvalidInput("matrix does not represent its graph: " + problems[0])
    target = complement(a.graph)
    if g is not None and g != target:
        raise InvalidInput("matrix does not represent the complement of the given graph")
    f = a.field
    _, pivots = rref(f, a.matrix.rows)
    b = a.matrix.select_columns(pivots)
    rep = VectorAssignment(f, len(pivots), {v: b.rows[i] for i, v in enumerate(a.graph.vertices)})
    check = verify_independent_rep(target, rep.to_matroid())
    if not check:
        raise InternalError("matrix_to_indrep produced a non-independent representation")
    return rep


def indrep_to_matrix(g: Graph, rep: VectorAssignment) -> RepresentingMatrix:
    """Matrix with column v equal to B y_v, representing the complement of ``g``.

    B has the vectors of ``rep`` as rows; y_v is a kernel vector of the
    neighbor rows of v that is not orthogonal to x_v.
    """
    check = verify_independent_rep(g, rep.to_matroid())
    if not check:
        raise InvalidInput("not an independent representation: " + check.violations[0])
    f, s = rep.field, rep.dim
    verts = g.vertices
    cols = []
    for v in verts:
        d = ExactMatrix(f, tuple(rep[u].entries for u in verts if g.has_edge(u, v)), s)
        y = next((k for k in kernel_basis(d) if bilinear(rep[v], k)), None)
        if y is None:
            raise InternalError(f"no kernel vector separates {v}")
        cols.append([bilinear(rep[u], y) for u in verts])
    m = ExactMatrix.from_vectors(f, cols, as_columns=True)
    out = RepresentingMatrix(f, m, complement(g))
    if out.violations() or out.rank > s:
        raise InternalError("indrep_to_matrix produced an invalid matrix")
    return out


# condition (star) and local colorings ------------------------------------------------------


@dataclass
class StarCheck:
    ok: bool
    independent: bool
    violation: dict | None = None
    checked: int = 0


def check_star_condition(
    g: Graph, a: MatroidAssignment, balanced_only: bool = False, cap: int | None = None
) -> StarCheck:
    """Check rk S(X) + rk S(Y) <= rk M over every complete bipartite pair.

    With ``balanced_only`` only pairs whose sides differ in size by at most
    one are checked. Whether ``a`` is an independent representation is
    reported alongside.
    """
    from .topo import DEFAULT_POSET_CAP, build_hom_poset

    poset = build_hom_poset(g, DEFAULT_POSET_CAP if cap is None else cap)
    m = a.oracle
    total = m.full_rank
    bits = [m.mask([a.elements[v]]) for v in g.vertices]

    def span(vmask: int) -> int:
        e = 0
        for i in _bits(vmask):
            e |= bits[i]
        return m.rank_mask(e)

    independent = bool(verify_independent_rep(g, a))
    checked = 0
    for x, y in poset.pairs:
        if balanced_only and abs(x.bit_count() - y.bit_count()) > 1:
            continue
        checked += 1
        rx, ry = span(x), span(y)
        if rx + ry > total:
            bad = {"X": list(g.from_mask(x)), "Y": list(g.from_mask(y)), "rank_X": rx, "rank_Y": ry, "rank_M": total}
            return StarCheck(False, independent, bad, checked)
    return StarCheck(True, independent, None, checked)


def local_chromatic(
    g: Graph, m_max: int, deadline: Deadline | float | None = None
) -> tuple[int, Coloring]:
    """Minimum over proper colorings with colors 1..m_max of the largest
    number of colors in a closed neighborhood.
    """
    deadline = as_deadline(deadline)
    if g.n == 0:
        return 0, Coloring({}, m_max)
    chi, _ = chromatic_number(g, deadline)
    if m_max < chi:
        raise InvalidParameter(f"m_max = {m_max} is below the chromatic number {chi}")
    n, masks = g.n, g.masks
    closed = [masks[v] | 1 << v for v in range(n)]
    order = sorted(range(n), key=lambda v: (-masks[v].bit_count(), v))
    color = [0] * n
    lo = max_clique(g)[0]

    def seen(w: int) -> int:
        s = 0
        for u in _bits(closed[w]):
            if color[u]:
                s |= 1 << color[u]
        return s

    for r in range(lo, m_max + 1):
        def rec(k: int, used: int) -> bool:
            deadline.check()
            if k == n:
                return True
            v = order[k]
            forbidden = 0
            for u in _bits(masks[v]):
                forbidden |= 1 << color[u]
            for c in range(1, min(used + 1, m_max) + 1):
                if forbidden >> c & 1:
                    continue
                color[v] = c
                if all(seen(w).bit_count() <= r for w in _bits(closed[v])) and rec(k + 1, max(used, c)):
                    return True
            color[v] = 0
            return False

        if rec(0, 0):
            col = {g.vertices[i]: color[i] for i in range(n)}
            return r, Coloring(col, m_max)
    raise InternalError("no coloring found although m_max >= chromatic number")
