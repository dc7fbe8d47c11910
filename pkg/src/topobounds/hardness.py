"""Monotone 3SAT, the colorful complete bipartite gadget, and exact deciders
for colorful complete bipartite subgraphs.

A witness is a pair of vertex sets (X, Y) with every cross pair an edge.
Both sides must be nonempty unless ``allow_empty`` is passed: with an empty
side any set of vertices qualifies and the all-colors question is trivial.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import InstanceTooLarge, InternalError, InvalidInput, InvalidParameter, NotMonotone, ParseError, WrongArity
from .graphs import ColoredGraph, Graph, _bits, augment_dummies
from .topo import BipartiteWitness

BRUTE_FORCE_MAX_VARS = 24


@dataclass(frozen=True)
class Monotone3SatInstance:
    """Clauses are (positive, (a, b, c)) with 1-based variable indices."""

    n: int
    clauses: tuple[tuple[bool, tuple[int, int, int]], ...]

    def __post_init__(self):
        if self.n < 0:
            raise InvalidInput("variable count must be >= 0")
        for pos, lits in self.clauses:
            if len(lits) != 3:
                raise WrongArity(f"clause {lits} does not have 3 literals")
            if any(not 1 <= j <= self.n for j in lits):
                raise InvalidInput(f"clause {lits} uses a variable outside 1..{self.n}")

    @property
    def m(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, a: Mapping[int, bool]) -> bool:
        return all(any(a.get(j, False) == pos for j in lits) for pos, lits in self.clauses)

    def has_both_polarities(self) -> bool:
        pols = {pos for pos, _ in self.clauses}
        return len(pols) == 2

    def padded(self) -> Monotone3SatInstance:
        """Add a clause on a fresh variable for each missing polarity.

        Satisfiability is unchanged (the fresh variable takes the value the
        clause asks for), and the gadget of the result has both sides.
        """
        if not self.clauses or self.has_both_polarities():
            return self
        pos = self.clauses[0][0]
        z = self.n + 1
        return Monotone3SatInstance(z, self.clauses + ((not pos, (z, z, z)),))

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.n} {self.m}"]
        for pos, lits in self.clauses:
            lines.append(" ".join(str(j if pos else -j) for j in lits) + " 0")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"n": self.n, "clauses": [[j if pos else -j for j in lits] for pos, lits in self.clauses]}


def parse_monotone_3sat(text: str) -> Monotone3SatInstance:
    """DIMACS CNF with an optional ``p cnf`` header; ``c`` lines are comments."""
    header = None
    tokens: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith(("c", "%")):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"line {lineno}: bad header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError(f"line {lineno}: bad header {line!r}") from None
            continue
        for tok in line.split():
            try:
                tokens.append(int(tok))
            except ValueError:
                raise ParseError(f"line {lineno}: {tok!r} is not an integer") from None
    clauses_raw: list[list[int]] = []
    cur: list[int] = []
    for t in tokens:
        if t == 0:
            clauses_raw.append(cur)
            cur = []
        else:
            cur.append(t)
    if cur:
        raise ParseError("last clause is not terminated by 0")
    clauses = []
    for lits in clauses_raw:
        if len(lits) != 3:
            raise WrongArity(f"clause {lits} does not have exactly 3 literals")
        if len({l > 0 for l in lits}) != 1:
            raise NotMonotone(f"clause {lits} mixes polarities")
        clauses.append((lits[0] > 0, tuple(abs(l) for l in lits)))
    used = max((j for _, lits in clauses for j in lits), default=0)
    n = used
    if header is not None:
        n, m = header
        if used > n:
            raise ParseError(f"variable {used} exceeds declared count {n}")
        if m != len(clauses):
            raise ParseError(f"header declares {m} clauses, found {len(clauses)}")
    return Monotone3SatInstance(n, tuple(clauses))


def brute_force_cnf(num_vars: int, clauses: Sequence[Sequence[int]]) -> dict[int, bool] | None:
    """First satisfying assignment in binary counting order, or None."""
    if num_vars > BRUTE_FORCE_MAX_VARS:
        raise InstanceTooLarge(f"{num_vars} variables exceed the brute-force limit {BRUTE_FORCE_MAX_VARS}")
    pos_masks, neg_masks = [], []
    for cl in clauses:
        p = n = 0
        for lit in cl:
            if lit > 0:
                p |= 1 << (lit - 1)
            else:
                n |= 1 << (-lit - 1)
        pos_masks.append(p)
        neg_masks.append(n)
    full = (1 << num_vars) - 1
    for m in range(1 << num_vars):
        inv = ~m & full
        if all(m & p or inv & n for p, n in zip(pos_masks, neg_masks)):
            return {j: bool(m >> (j - 1) & 1) for j in range(1, num_vars + 1)}
    return None


def brute_force_sat(inst: Monotone3SatInstance) -> dict[int, bool] | None:
    clauses = [[j if pos else -j for j in lits] for pos, lits in inst.clauses]
    a = brute_force_cnf(inst.n, clauses)
    if a is not None and not inst.satisfied_by(a):
        raise InternalError("brute force returned a non-satisfying assignment")
    return a


# the gadget ------------------------------------------------------------------------------


def x_id(i: int, j: int) -> str:
    return f"x{i}_{j}"


def y_id(i: int, j: int) -> str:
    return f"y{i}_{j}"


def _parse_id(v: str) -> tuple[str, int, int]:
    try:
        side, rest = v[0], v[1:]
        i, j = rest.split("_")
        if side not in "xy":
            raise ValueError
        return side, int(i), int(j)
    except ValueError:
        raise InvalidInput(f"{v!r} is not a gadget vertex") from None


def reduce_3sat_to_colorful(inst: Monotone3SatInstance, pad: bool = False) -> ColoredGraph:
    """Bipartite gadget: (i, j) for each variable j of clause i, on the side
    of the clause's polarity, colored i; x(i, j) ~ y(i', j') iff j != j'.

    Repeated variables in a clause give one vertex. With ``pad`` the
    instance is first completed by :meth:`Monotone3SatInstance.padded`.
    """
    if pad:
        inst = inst.padded()
    xs: dict[str, int] = {}
    ys: dict[str, int] = {}
    for i, (pos, lits) in enumerate(inst.clauses, 1):
        for j in dict.fromkeys(lits):
            (xs if pos else ys)[x_id(i, j) if pos else y_id(i, j)] = i
    edges = [
        (a, b) for a in xs for b in ys if _parse_id(a)[2] != _parse_id(b)[2]
    ]
    return ColoredGraph(Graph(list(xs) + list(ys), edges), {**xs, **ys})


# deciders ------------------------------------------------------------------------------------


def verify_colorful_witness(
    cg: ColoredGraph, w: BipartiteWitness, mode: str | tuple = "all", allow_empty: bool = False
) -> list[str]:
    """Independent validity check of a witness for the given mode."""
    g, col = cg.graph, cg.coloring
    problems = []
    for v in w.X + w.Y:
        if v not in g:
            problems.append(f"unknown vertex {v}")
    if problems:
        return problems
    if set(w.X) & set(w.Y):
        problems.append("sides intersect")
    if not allow_empty and (not w.X or not w.Y):
        problems.append("empty side")
    for x in w.X:
        for y in w.Y:
            if not g.has_edge(x, y):
                problems.append(f"missing edge {x}-{y}")
    cx = {col[v] for v in w.X}
    cy = {col[v] for v in w.Y}
    if mode == "all":
        missing = set(cg.colors) - cx - cy
        if missing:
            problems.append(f"colors {sorted(missing)} not used")
    else:
        t = _balanced_t(mode)
        lo, hi = sorted((len(cx), len(cy)))
        if lo < t // 2 or hi < (t + 1) // 2:
            problems.append(f"side color counts {len(cx)}, {len(cy)} do not reach {t // 2}, {(t + 1) // 2}")
    return problems


def _balanced_t(mode) -> int:
    if isinstance(mode, tuple) and len(mode) == 2 and mode[0] == "balanced":
        t = int(mode[1])
        if t < 0:
            raise InvalidParameter("t must be >= 0")
        return t
    raise InvalidParameter(f"unknown mode {mode!r}")


def colorful_complete_bipartite_exists(
    cg: ColoredGraph, mode: str | tuple = "all", allow_empty: bool = False
) -> BipartiteWitness | None:
    """Exact search for a colorful complete bipartite subgraph.

    ``mode="all"``: every color appears on X or Y. ``mode=("balanced", t)``:
    one side carries at least floor(t/2) colors and the other at least
    ceil(t/2). Witnesses are minimal: one vertex per used color.
    """
    if not cg.is_proper():
        raise InvalidInput("coloring is not proper")
    g = cg.graph
    n = g.n
    masks = g.masks
    col = [cg.coloring[v] for v in g.vertices]
    full = (1 << n) - 1
    if mode == "all":
        found = _search_all(g, col, masks, full, allow_empty)
    else:
        t = _balanced_t(mode)
        found = _search_balanced(col, masks, full, t // 2, (t + 1) // 2, allow_empty)
    if found is None:
        return None
    xm, ym = found
    w = BipartiteWitness(
        g.from_mask(xm),
        g.from_mask(ym),
        None,
        {
            "colors_X": sorted({col[i] for i in _bits(xm)}),
            "colors_Y": sorted({col[i] for i in _bits(ym)}),
        },
    )
    problems = verify_colorful_witness(cg, w, mode, allow_empty)
    if problems:
        raise InternalError("colorful witness failed verification: " + problems[0])
    return w


def _search_all(g: Graph, col: list[int], masks, full: int, allow_empty: bool):
    classes: dict[int, list[int]] = {}
    for i, c in enumerate(col):
        classes.setdefault(c, []).append(i)
    order = sorted(classes, key=lambda c: (len(classes[c]), c))
    if not order:
        return (0, 0) if allow_empty else None

    def rec(k: int, xm: int, ym: int, cx: int, cy: int):
        # cx / cy: vertices adjacent to everything on Y / on X so far
        if k == len(order):
            if allow_empty or (xm and ym):
                return xm, ym
            return None
        for v in classes[order[k]]:
            bit = 1 << v
            if cx & bit:
                r = rec(k + 1, xm | bit, ym, cx, cy & masks[v])
                if r:
                    return r
            if k and cy & bit:
                r = rec(k + 1, xm, ym | bit, cx & masks[v], cy)
                if r:
                    return r
        return None

    return rec(0, 0, 0, full, full)


def _search_balanced(col, masks, full: int, a: int, b: int, allow_empty: bool):
    """X with a distinct colors, Y with b distinct colors, complete between."""
    n = len(col)
    if not allow_empty:
        a, b = max(a, 1), max(b, 1)

    def rec(v: int, xm: int, ym: int, cx: int, cy: int, colx: set, coly: set):
        nx, ny = len(colx), len(coly)
        if nx == a and ny == b:
            return xm, ym
        if v == n:
            return None
        bit = 1 << v
        c = col[v]
        if nx < a and cx & bit and c not in colx:
            colx.add(c)
            r = rec(v + 1, xm | bit, ym, cx, cy & masks[v], colx, coly)
            colx.discard(c)
            if r:
                return r
        if ny < b and cy & bit and c not in coly:
            coly.add(c)
            r = rec(v + 1, xm, ym | bit, cx & masks[v], cy, colx, coly)
            coly.discard(c)
            if r:
                return r
        return rec(v + 1, xm, ym, cx, cy, colx, coly)

    return rec(0, 0, 0, full, full, set(), set())


# lifting witnesses and assignments ---------------------------------------------------------------


def witness_to_assignment(inst: Monotone3SatInstance, w: BipartiteWitness, pad: bool = False) -> dict[int, bool]:
    """Variables seen on the x side become true, on the y side false; the
    rest default to false. Raises InvalidInput for anything that is not an
    all-colors witness of the gadget.
    """
    work = inst.padded() if pad else inst
    cg = reduce_3sat_to_colorful(work)
    problems = verify_colorful_witness(cg, w, "all", not work.has_both_polarities())
    if problems:
        raise InvalidInput("not an all-colors witness of the gadget: " + problems[0])
    a = {j: False for j in range(1, inst.n + 1)}
    seen: dict[int, bool] = {}
    for side in (w.X, w.Y):
        for v in side:
            kind, _, j = _parse_id(v)
            val = kind == "x"
            if seen.setdefault(j, val) != val:
                raise InvalidInput(f"witness sets variable {j} both ways")
            if j <= inst.n:
                a[j] = val
    if not inst.satisfied_by(a):
        raise InvalidInput("lifted assignment does not satisfy the instance")
    return a


def assignment_to_witness(inst: Monotone3SatInstance, a: Mapping[int, bool], pad: bool = False) -> BipartiteWitness:
    """Select every x(i, j) with z_j true and every y(i, j) with z_j false."""
    if any(j not in a for j in range(1, inst.n + 1)):
        raise InvalidInput("assignment is not total")
    if not inst.satisfied_by(a):
        raise InvalidInput("assignment does not satisfy the instance")
    work = inst.padded() if pad else inst
    full = dict(a)
    for j in range(inst.n + 1, work.n + 1):
        # the padding clause asks for the opposite polarity of the instance
        full[j] = not work.clauses[0][0]
    cg = reduce_3sat_to_colorful(work)
    xs = [v for v in cg.graph.vertices if v[0] == "x" and full[_parse_id(v)[2]]]
    ys = [v for v in cg.graph.vertices if v[0] == "y" and not full[_parse_id(v)[2]]]
    col = cg.coloring
    w = BipartiteWitness(
        tuple(xs), tuple(ys), None, {"colors_X": sorted({col[v] for v in xs}), "colors_Y": sorted({col[v] for v in ys})}
    )
    allow_empty = not work.has_both_polarities()
    problems = verify_colorful_witness(cg, w, "all", allow_empty)
    if problems:
        raise InternalError("lifted witness failed verification: " + problems[0])
    return w


# balanced-family reduction ------------------------------------------------------------------


@dataclass
class BalancedMember:
    s: int
    t: int
    graph: ColoredGraph


def reduce_balanced(cg: ColoredGraph, s_values: Iterable[int] | None = None) -> list[BalancedMember]:
    """G_s (G plus s dummy vertices, each with a fresh color) paired with t = s + r.

    The default family is s = 0..r-1. With both sides required nonempty,
    G_{r-1} always has a balanced witness (the dummies against one vertex of
    each color), so an exact equivalence needs ``s_values=range(r - 1)``;
    see :func:`corrected_s_values`.
    """
    r = len(cg.colors)
    if s_values is None:
        s_values = range(r)
    return [BalancedMember(s, s + r, augment_dummies(cg, s)) for s in s_values]


def corrected_s_values(cg: ColoredGraph) -> range:
    return range(max(len(cg.colors) - 1, 0))


def balanced_family_decision(cg: ColoredGraph, s_values: Iterable[int] | None = None) -> tuple[bool, int | None]:
    """Whether some member has a balanced witness, and the first such s."""
    for member in reduce_balanced(cg, s_values):
        if colorful_complete_bipartite_exists(member.graph, ("balanced", member.t)) is not None:
            return True, member.s
    return False, None


# fuzzing ----------------------------------------------------------------------------------


def random_instance(rng: random.Random, n_max: int = 6, m_max: int = 6) -> Monotone3SatInstance:
    n = rng.randint(1, n_max)
    m = rng.randint(1, m_max)
    clauses = tuple((rng.random() < 0.5, tuple(rng.randint(1, n) for _ in range(3))) for _ in range(m))
    return Monotone3SatInstance(n, clauses)


def random_colored_graph(rng: random.Random, n_max: int = 10, colors_max: int = 4, p: float = 0.5) -> ColoredGraph:
    """Random graph with a proper coloring using exactly r colors (r drawn)."""
    n = rng.randint(1, n_max)
    r = rng.randint(1, min(colors_max, n))
    colors = [c + 1 for c in range(r)] + [rng.randint(1, r) for _ in range(n - r)]
    rng.shuffle(colors)
    edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if colors[i] != colors[j] and rng.random() < p
    ]
    g = Graph(range(n), edges)
    return ColoredGraph(g, {str(i): colors[i] for i in range(n)})


@dataclass
class FuzzReport:
    instances: int
    satisfiable: int
    disagreements: list[dict]
    single_polarity: int

    def to_json(self) -> dict:
        return {
            "instances": self.instances,
            "satisfiable": self.satisfiable,
            "single_polarity": self.single_polarity,
            "disagreements": self.disagreements,
        }


def fuzz_reduction(seed: int, count: int, n_max: int = 6, m_max: int = 6, pad: bool = True) -> FuzzReport:
    """Compare brute-force SAT with the gadget decider on random instances."""
    rng = random.Random(seed)
    sat = single = 0
    bad = []
    for k in range(count):
        inst = random_instance(rng, n_max, m_max)
        single += not inst.has_both_polarities()
        a = brute_force_sat(inst)
        w = colorful_complete_bipartite_exists(reduce_3sat_to_colorful(inst, pad=pad), "all")
        sat += a is not None
        if (a is None) != (w is None):
            bad.append({"index": k, "instance": inst.to_json(), "sat": a is not None, "witness": w is not None})
            continue
        if w is not None:
            witness_to_assignment(inst, w, pad=pad)
            assignment_to_witness(inst, a, pad=pad)
    return FuzzReport(count, sat, bad, single)
