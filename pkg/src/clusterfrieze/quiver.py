"""Quivers, seeds, Dynkin A/D recognition and the doubled type-A seed.

Canonical labelling conventions:

* type A: a path ``1 - 2 - ... - n``;
* type D: fork vertices ``1, 2`` attached to the joint ``3``, tail ``3 - 4 - ... - n``.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .laurent import LaurentPolynomial

__all__ = [
    "Quiver",
    "DynkinClass",
    "ForkConfiguration",
    "ForkInfo",
    "Seed",
    "Triangulation",
    "LambdaPrime",
    "NotDynkinAD",
    "InvalidTriangulation",
    "BudgetExceeded",
    "QuiverSyntaxError",
    "classify",
    "canonical_form",
    "fork_info",
    "transpose",
    "build_q_prime",
    "build_lambda_prime",
    "quiver_from_triangulation",
    "mutate_seed",
    "mutation_closure",
    "count_clusters",
    "initial_seed",
    "parse_quiver",
    "parse_triangulation",
    "d_orientations",
    "a_orientations",
]


class NotDynkinAD(ValueError):
    """The underlying graph is not a Dynkin diagram of type A or D."""


class InvalidTriangulation(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class QuiverSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class Quiver:
    """Directed graph on vertices ``1..vertex_count``; repeated pairs are parallel arrows."""

    vertex_count: int
    arrows: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        arrows = tuple(sorted((int(s), int(t)) for s, t in self.arrows))
        for s, t in arrows:
            if s == t:
                raise ValueError(f"loop at vertex {s}")
            if not (1 <= s <= self.vertex_count and 1 <= t <= self.vertex_count):
                raise ValueError(f"arrow {s}>{t} outside vertices 1..{self.vertex_count}")
        object.__setattr__(self, "arrows", arrows)

    @classmethod
    def from_matrix(cls, b: Sequence[Sequence[int]]) -> Quiver:
        n = len(b)
        arrows = []
        for i in range(n):
            for j in range(n):
                arrows.extend([(i + 1, j + 1)] * max(0, b[i][j]))
        return cls(n, tuple(arrows))

    def exchange_matrix(self) -> tuple[tuple[int, ...], ...]:
        n = self.vertex_count
        b = [[0] * n for _ in range(n)]
        for s, t in self.arrows:
            b[s - 1][t - 1] += 1
            b[t - 1][s - 1] -= 1
        return tuple(tuple(row) for row in b)

    def edges(self) -> set[frozenset[int]]:
        return {frozenset(a) for a in self.arrows}

    def neighbours(self, v: int) -> set[int]:
        return {t for s, t in self.arrows if s == v} | {s for s, t in self.arrows if t == v}

    def successors(self, v: int) -> list[int]:
        return [t for s, t in self.arrows if s == v]

    def predecessors(self, v: int) -> list[int]:
        return [s for s, t in self.arrows if t == v]

    def has_arrow(self, s: int, t: int) -> bool:
        return (s, t) in self.arrows

    def relabel(self, mapping: dict[int, int]) -> Quiver:
        return Quiver(self.vertex_count, tuple((mapping[s], mapping[t]) for s, t in self.arrows))

    def topological_order(self) -> list[int]:
        """Vertices with every arrow ``s -> t`` placing ``s`` before ``t``."""
        indeg = {v: 0 for v in range(1, self.vertex_count + 1)}
        for _, t in self.arrows:
            indeg[t] += 1
        ready = sorted(v for v, d in indeg.items() if d == 0)
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for t in self.successors(v):
                indeg[t] -= 1
                if indeg[t] == 0:
                    ready.append(t)
            ready.sort()
        if len(order) != self.vertex_count:
            raise ValueError("quiver has an oriented cycle")
        return order

    def is_acyclic(self) -> bool:
        try:
            self.topological_order()
        except ValueError:
            return False
        return True

    def to_text(self, prefix: str = "") -> str:
        body = " ".join(f"{s}>{t}" for s, t in self.arrows)
        return f"{prefix}: {body}".rstrip() if prefix else body


@dataclass(frozen=True)
class DynkinClass:
    kind: str  # "A" or "D"
    n: int
    relabelling: tuple[tuple[int, int], ...] = field(default=(), compare=False)

    def __str__(self) -> str:
        return f"{self.kind}{self.n}"

    @property
    def mapping(self) -> dict[int, int]:
        """Original vertex id -> canonical vertex id."""
        return dict(self.relabelling)


class ForkConfiguration(Enum):
    BOTH_ENTERING = "both-entering"
    BOTH_LEAVING = "both-leaving"
    MIXED = "mixed"


@dataclass(frozen=True)
class ForkInfo:
    joint: int
    fork_vertices: tuple[int, int]
    configuration: ForkConfiguration


def _simple_graph(q: Quiver) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in range(1, q.vertex_count + 1)}
    b = q.exchange_matrix()
    for i in range(q.vertex_count):
        for j in range(i + 1, q.vertex_count):
            if abs(b[i][j]) > 1:
                raise NotDynkinAD("multiple arrows between two vertices")
            if b[i][j]:
                adj[i + 1].add(j + 1)
                adj[j + 1].add(i + 1)
    return adj


def _arm(adj: dict[int, set[int]], joint: int, start: int) -> list[int]:
    arm, prev, cur = [start], joint, start
    while True:
        nxt = [w for w in adj[cur] if w != prev]
        if not nxt:
            return arm
        prev, cur = cur, nxt[0]
        arm.append(cur)


def classify(q: Quiver) -> DynkinClass:
    """Recognise type ``A_n`` / ``D_n`` and return the canonical relabelling."""
    n = q.vertex_count
    if n == 0:
        raise NotDynkinAD("empty quiver")
    adj = _simple_graph(q)
    if sum(len(s) for s in adj.values()) // 2 != n - 1:
        raise NotDynkinAD("underlying graph is not a tree")
    seen, todo = {1}, [1]
    while todo:
        v = todo.pop()
        for w in adj[v] - seen:
            seen.add(w)
            todo.append(w)
    if len(seen) != n:
        raise NotDynkinAD("quiver is not connected")
    degrees = {v: len(s) for v, s in adj.items()}
    if max(degrees.values()) <= 2:
        if n == 1:
            return DynkinClass("A", 1, ((1, 1),))
        start = min(v for v, d in degrees.items() if d == 1)
        path = _path_from(adj, start)
        return DynkinClass("A", n, tuple((v, i + 1) for i, v in enumerate(path)))
    branch = [v for v, d in degrees.items() if d >= 3]
    if len(branch) != 1 or degrees[branch[0]] != 3:
        raise NotDynkinAD("more than one branch point")
    joint = branch[0]
    arms = [_arm(adj, joint, w) for w in sorted(adj[joint])]
    short = [a for a in arms if len(a) == 1]
    if len(short) < 2:
        raise NotDynkinAD("branch point without two leaves")
    # tail = longest arm; among equal-length leaves (D4) keep the largest label as tail
    tail = max(arms, key=lambda a: (len(a), a[0]))
    fork = sorted(a[0] for a in arms if a is not tail)
    a, b = fork
    entering = [v for v in fork if q.has_arrow(v, joint)]
    if len(entering) == 1:
        # mixed fork: vertex 1 is the one the joint points to
        a = next(v for v in fork if q.has_arrow(joint, v))
        b = entering[0]
    mapping = {a: 1, b: 2, joint: 3}
    for i, v in enumerate(tail):
        mapping[v] = 4 + i
    return DynkinClass("D", n, tuple(sorted(mapping.items())))


def _path_from(adj: dict[int, set[int]], start: int) -> list[int]:
    path, prev, cur = [start], None, start
    while True:
        nxt = [w for w in adj[cur] if w != prev]
        if not nxt:
            return path
        prev, cur = cur, nxt[0]
        path.append(cur)


def canonical_form(q: Quiver) -> tuple[DynkinClass, Quiver]:
    cls = classify(q)
    return cls, q.relabel(cls.mapping)


def fork_info(q: Quiver) -> ForkInfo:
    """Fork configuration of a canonically labelled ``D_n`` quiver."""
    cls = classify(q)
    if cls.kind != "D":
        raise NotDynkinAD(f"fork_info needs type D, got {cls}")
    ent = [q.has_arrow(v, 3) for v in (1, 2)]
    if any(not (q.has_arrow(v, 3) or q.has_arrow(3, v)) for v in (1, 2)):
        raise ValueError("quiver is not canonically labelled (fork must be {1, 2} at joint 3)")
    if all(ent):
        return ForkInfo(3, (1, 2), ForkConfiguration.BOTH_ENTERING)
    if not any(ent):
        return ForkInfo(3, (1, 2), ForkConfiguration.BOTH_LEAVING)
    return ForkInfo(3, (1, 2), ForkConfiguration.MIXED)


def transpose(q: Quiver) -> Quiver:
    """Redraw a path quiver right-to-left: vertex ``i`` becomes ``n + 1 - i``."""
    cls = classify(q)
    if cls.kind != "A":
        raise NotDynkinAD(f"transpose needs type A, got {cls}")
    n = q.vertex_count
    return q.relabel({v: n + 1 - v for v in range(1, n + 1)})


@dataclass(frozen=True)
class Seed:
    """A quiver together with one Laurent polynomial per vertex (index ``v - 1``)."""

    quiver: Quiver
    variables: tuple[LaurentPolynomial, ...]

    def __post_init__(self):
        if len(self.variables) != self.quiver.vertex_count:
            raise ValueError("need exactly one variable per vertex")

    def __getitem__(self, v: int) -> LaurentPolynomial:
        return self.variables[v - 1]

    @property
    def rank(self) -> int:
        return self.variables[0].rank

    def cluster(self) -> frozenset[LaurentPolynomial]:
        return frozenset(self.variables)


def initial_seed(q: Quiver, rank: int | None = None) -> Seed:
    """Seed with ``u_i`` attached to vertex ``i``."""
    rank = q.vertex_count if rank is None else rank
    return Seed(q, tuple(LaurentPolynomial.variable(i, rank) for i in range(1, q.vertex_count + 1)))


def build_q_prime(q: Quiver) -> tuple[Quiver, tuple[int, ...]]:
    """The ``A_{2n-1}`` path ``t(omega) -> 0 -> omega`` attached to a canonical ``D_n`` quiver.

    Returns the path quiver on positions ``1..2n-1`` (left to right) and the
    label of each position: ``(n, ..., 3, 1, 0, 1, 3, ..., n)``.
    """
    cls = classify(q)
    if cls.kind != "D":
        raise NotDynkinAD(f"build_q_prime needs type D, got {cls}")
    n = q.vertex_count
    omega = [1] + list(range(3, n + 1))
    labels = tuple(reversed(omega)) + (0,) + tuple(omega)
    mid = n  # position of the new point 0
    arrows = [(mid - 1, mid), (mid, mid + 1)]
    for j in range(len(omega) - 1):
        a, b = omega[j], omega[j + 1]
        right = (mid + 1 + j, mid + 2 + j)
        left = (mid - 1 - j, mid - 2 - j)
        if q.has_arrow(a, b):
            arrows += [right, left]
        elif q.has_arrow(b, a):
            arrows += [right[::-1], left[::-1]]
        else:
            raise ValueError("quiver is not canonically labelled")
    return Quiver(2 * n - 1, tuple(arrows)), labels


@dataclass(frozen=True)
class LambdaPrime:
    seed: Seed
    labels: tuple[int, ...]
    configuration: ForkConfiguration

    @property
    def n(self) -> int:
        return (self.seed.quiver.vertex_count + 1) // 2


def fork_product(seed: Seed) -> LaurentPolynomial:
    """Value attached to the two positions labelled 1 in the doubled seed.

    ``x1*x2`` for a fork with both arrows entering or leaving the joint; for a
    mixed fork, ``x1*x2'`` where ``x2' = (1 + x3)/x2`` comes from mutating at
    vertex 2, after which both fork arrows point the same way as ``1 - 3``.
    """
    conf = fork_info(seed.quiver).configuration
    x1, x2, x3 = seed[1], seed[2], seed[3]
    if conf is ForkConfiguration.MIXED:
        return x1 * (1 + x3) / x2
    return x1 * x2


def build_lambda_prime(seed: Seed, keep_u0: bool = False) -> LambdaPrime:
    """Doubled ``A_{2n-1}`` seed of a canonical ``D_n`` seed.

    The middle vertex carries ``u0``, specialised to 1 unless ``keep_u0``.
    """
    qp, labels = build_q_prime(seed.quiver)
    prod = fork_product(seed)
    rank = seed.rank
    mid = LaurentPolynomial.variable(0, rank) if keep_u0 else LaurentPolynomial.constant(1, rank)
    values = []
    for lab in labels:
        if lab == 0:
            values.append(mid)
        elif lab == 1:
            values.append(prod)
        else:
            values.append(seed[lab])
    return LambdaPrime(Seed(qp, tuple(values)), labels, fork_info(seed.quiver).configuration)


@dataclass(frozen=True)
class Triangulation:
    polygon_size: int
    arcs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple((min(a), max(a)) for a in self.arcs))

    def validate(self) -> None:
        n = self.polygon_size
        if n < 3:
            raise InvalidTriangulation("polygon needs at least 3 vertices")
        if len(self.arcs) != n - 3:
            raise InvalidTriangulation(f"expected {n - 3} arcs, got {len(self.arcs)}")
        if len(set(self.arcs)) != len(self.arcs):
            raise InvalidTriangulation("repeated arc")
        for i, j in self.arcs:
            if not (1 <= i < j <= n) or j - i in (1, n - 1):
                raise InvalidTriangulation(f"{i}-{j} is not a diagonal of the {n}-gon")
        for x, (a, b) in enumerate(self.arcs):
            for c, d in self.arcs[x + 1:]:
                if a < c < b < d or c < a < d < b:
                    raise InvalidTriangulation(f"arcs {a}-{b} and {c}-{d} cross")
        for tri in self.triangles():
            if not any(self._is_side(x, y) for x, y in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[0], tri[2]))):
                raise InvalidTriangulation(f"internal triangle {tri}")

    def _is_side(self, i: int, j: int) -> bool:
        return abs(i - j) in (1, self.polygon_size - 1)

    def triangles(self) -> list[tuple[int, int, int]]:
        n = self.polygon_size
        edges = {frozenset(a) for a in self.arcs}
        edges |= {frozenset((i, i % n + 1)) for i in range(1, n + 1)}
        out = []
        for a in range(1, n + 1):
            for b in range(a + 1, n + 1):
                if frozenset((a, b)) not in edges:
                    continue
                for c in range(b + 1, n + 1):
                    if frozenset((b, c)) in edges and frozenset((a, c)) in edges:
                        out.append((a, b, c))
        return out


def quiver_from_triangulation(t: Triangulation) -> Quiver:
    """One vertex per arc (input order); ``alpha -> beta`` when ``beta`` follows
    ``alpha`` clockwise about their common vertex inside a triangle."""
    t.validate()
    index = {frozenset(a): i + 1 for i, a in enumerate(t.arcs)}
    arrows = []
    for a, b, c in t.triangles():
        # vertices a < b < c are in clockwise order; at each corner the side to
        # the next vertex precedes the side to the one after it
        for v, first, second in ((a, b, c), (b, c, a), (c, a, b)):
            s, e = index.get(frozenset((v, first))), index.get(frozenset((v, second)))
            if s and e:
                arrows.append((s, e))
    return Quiver(len(t.arcs), tuple(arrows))


def mutate_seed(seed: Seed, k: int) -> Seed:
    """Coefficient-free seed mutation at vertex ``k``.

    Quiver: reverse arrows at ``k``, add ``i -> j`` for every path
    ``i -> k -> j``, cancel 2-cycles. Variable: ``x_k * x_k' = prod(in) + prod(out)``.
    """
    n = seed.quiver.vertex_count
    if not 1 <= k <= n:
        raise ValueError(f"vertex {k} not in 1..{n}")
    b = seed.quiver.exchange_matrix()
    kk = k - 1
    new_b = [list(row) for row in b]
    for i in range(n):
        for j in range(n):
            if i == kk or j == kk:
                new_b[i][j] = -b[i][j]
            elif b[i][kk] * b[kk][j] > 0:
                sign = 1 if b[i][kk] > 0 else -1
                new_b[i][j] = b[i][j] + sign * b[i][kk] * b[kk][j]
    one = LaurentPolynomial.constant(1, seed.rank)
    into, out = one, one
    for i in range(n):
        if b[i][kk] > 0:
            into = into * seed.variables[i] ** b[i][kk]
        elif b[i][kk] < 0:
            out = out * seed.variables[i] ** (-b[i][kk])
    new_var = (into + out) / seed.variables[kk]
    variables = list(seed.variables)
    variables[kk] = new_var
    return Seed(Quiver.from_matrix(new_b), tuple(variables))


def mutation_closure(seed: Seed, max_steps: int = 100_000) -> set[LaurentPolynomial]:
    """All cluster variables reachable by mutation (breadth first over clusters)."""
    variables, _ = _explore(seed, max_steps)
    return variables


def count_clusters(seed: Seed, max_steps: int = 100_000) -> int:
    return _explore(seed, max_steps)[1]


def _explore(seed: Seed, max_steps: int) -> tuple[set[LaurentPolynomial], int]:
    seen = {seed.cluster()}
    found = set(seed.variables)
    queue = deque([(seed, 0)])
    steps = 0
    while queue:
        s, came_from = queue.popleft()
        for k in range(1, s.quiver.vertex_count + 1):
            if k == came_from:
                continue
            steps += 1
            if steps > max_steps:
                raise BudgetExceeded(f"mutation budget of {max_steps} steps exhausted")
            t = mutate_seed(s, k)
            key = t.cluster()
            if key in seen:
                continue
            seen.add(key)
            found.add(t[k])
            queue.append((t, k))
    return found, len(seen)


# -- orientations ---------------------------------------------------------

def _orient(edges: Sequence[tuple[int, int]], bits: int) -> tuple[tuple[int, int], ...]:
    return tuple((a, b) if not (bits >> i) & 1 else (b, a) for i, (a, b) in enumerate(edges))


def d_orientations(n: int) -> list[Quiver]:
    """All ``2^(n-1)`` orientations of the canonically labelled ``D_n`` diagram."""
    edges = [(1, 3), (2, 3)] + [(i, i + 1) for i in range(3, n)]
    return [Quiver(n, _orient(edges, bits)) for bits in range(2 ** (n - 1))]


def a_orientations(m: int) -> list[Quiver]:
    edges = [(i, i + 1) for i in range(1, m)]
    return [Quiver(m, _orient(edges, bits)) for bits in range(2 ** max(0, m - 1))]


# -- text / JSON formats ----------------------------------------------------

_HEADER = re.compile(r"^\s*([AD])\s*(\d+)\s*:(.*)$", re.S)
_ARROW = re.compile(r"^(\d+)\s*([<>])\s*(\d+)$")


def parse_quiver(text: str) -> tuple[str | None, Quiver]:
    """Parse ``"D4: 1>3 2>3 3>4"`` (text) or the JSON mirror.

    JSON: ``{"type": "D", "rank": 4, "arrows": [[1, 3], [2, 3], [3, 4]]}``.
    Returns the declared type string (``"D4"``) and the quiver.
    """
    text = text.strip()
    if text.startswith("{"):
        try:
            data = json.loads(text)
            kind = data.get("type")
            rank = int(data["rank"])
            arrows = tuple((int(s), int(t)) for s, t in data.get("arrows", []))
        except (ValueError, KeyError, TypeError) as exc:
            raise QuiverSyntaxError(f"bad quiver JSON: {exc}") from exc
        declared = f"{kind}{rank}" if kind else None
        return declared, _make_quiver(rank, arrows)
    m = _HEADER.match(text)
    if not m:
        raise QuiverSyntaxError(f"expected 'A<n>: ...' or 'D<n>: ...', got {text!r}")
    kind, rank, body = m.group(1), int(m.group(2)), m.group(3)
    arrows = []
    for tok in body.replace(",", " ").split():
        a = _ARROW.match(tok)
        if not a:
            raise QuiverSyntaxError(f"bad arrow {tok!r}")
        s, d, t = int(a.group(1)), a.group(2), int(a.group(3))
        arrows.append((s, t) if d == ">" else (t, s))
    return f"{kind}{rank}", _make_quiver(rank, tuple(arrows))


def _make_quiver(rank: int, arrows: tuple[tuple[int, int], ...]) -> Quiver:
    try:
        return Quiver(rank, arrows)
    except ValueError as exc:
        raise QuiverSyntaxError(str(exc)) from exc


def parse_triangulation(text: str) -> Triangulation:
    """Parse ``"6: 1-3 1-4 1-5"`` or ``{"polygon_size": 6, "arcs": [[1, 3], ...]}``."""
    text = text.strip()
    try:
        if text.startswith("{"):
            data = json.loads(text)
            return Triangulation(int(data["polygon_size"]), tuple(tuple(map(int, a)) for a in data["arcs"]))
        head, _, body = text.partition(":")
        arcs = []
        for tok in body.replace(",", " ").split():
            i, j = tok.split("-")
            arcs.append((int(i), int(j)))
        return Triangulation(int(head), tuple(arcs))
    except (ValueError, KeyError, TypeError) as exc:
        raise QuiverSyntaxError(f"bad triangulation: {exc}") from exc


def quiver_from_arcs(arcs: Iterable[tuple[int, int]], polygon_size: int) -> Quiver:
    return quiver_from_triangulation(Triangulation(polygon_size, tuple(arcs)))
