"""Frieze functions on translation quivers and the windows cut out of them.

A frieze over an acyclic quiver Q is a function on ``Z x Q0`` with

    a(k, i) * a(k + 1, i) = 1 + prod(values at the arrow targets of (k, i))

where ``(k, i)`` has arrows to ``(k, j)`` for ``i -> j`` and to ``(k + 1, j)``
for ``j -> i``. Column 0 holds the seed.

For path quivers the frieze is also laid out in the plane: letter ``x``
(arrow ``i -> i+1``) is a step ``(1, 0)`` and ``y`` a step ``(0, 1)``; vertex
``i`` of column 0 sits on the anti-diagonal ``u + v = i`` and column ``k``
is column 0 shifted by ``(k, -k)``. Rows ``0`` and ``m + 1`` are all ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .laurent import LaurentPolynomial, eval_at
from .quiver import (
    ForkConfiguration,
    Quiver,
    Seed,
    build_q_prime,
    classify,
    fork_info,
)

__all__ = [
    "FriezeArray",
    "PartF",
    "ModelledQuiver",
    "FundamentalQuiver",
    "Completion",
    "UnsupportedFork",
    "WindowOutOfRange",
    "compute_frieze",
    "specialize",
    "frieze_relation_failures",
    "path_positions",
    "plane_values",
    "diamond_failures",
    "unimodular_check",
    "part_F",
    "modelled_quiver",
    "complete_downward",
    "fundamental_quiver",
    "column_period",
]


class UnsupportedFork(ValueError):
    pass


class WindowOutOfRange(ValueError):
    pass


Value = "LaurentPolynomial | Fraction"


@dataclass(frozen=True, eq=False)
class FriezeArray:
    quiver: Quiver
    first_column: int
    last_column: int
    values: Mapping[tuple[int, int], LaurentPolynomial]

    @property
    def rank(self) -> int:
        return self.quiver.vertex_count

    def __getitem__(self, pos: tuple[int, int]):
        return self.values[pos]

    def __contains__(self, pos) -> bool:
        return pos in self.values

    def column(self, k: int) -> list:
        return [self.values[(k, i)] for i in range(1, self.rank + 1)]

    def columns(self) -> range:
        return range(self.first_column, self.last_column + 1)


def compute_frieze(seed: Seed, columns: int | None = None, first_column: int = 0) -> FriezeArray:
    """Frieze of an acyclic seed on columns ``first_column..columns``.

    Column 0 is the seed. Columns to the left are produced by running the
    relation backwards. ``columns`` defaults to ``2n`` for type D and
    ``m + 3`` otherwise.
    """
    q = seed.quiver
    n = q.vertex_count
    if columns is None:
        columns = 2 * n if classify(q).kind == "D" else n + 3
    if columns < 0 or first_column > 0:
        raise ValueError("need first_column <= 0 <= columns")
    order = q.topological_order()
    succ = {i: q.successors(i) for i in order}
    pred = {i: q.predecessors(i) for i in order}
    vals: dict[tuple[int, int], LaurentPolynomial] = {}
    for i in range(1, n + 1):
        vals[(0, i)] = seed[i]
    for k in range(columns):
        for i in order:
            rhs = 1
            for j in succ[i]:
                rhs = vals[(k, j)] * rhs
            for j in pred[i]:
                rhs = vals[(k + 1, j)] * rhs
            vals[(k + 1, i)] = (rhs + 1) / vals[(k, i)]
    for k in range(0, first_column, -1):
        for i in reversed(order):
            # relation at (k - 1, i), solved for a(k - 1, i)
            rhs = 1
            for j in succ[i]:
                rhs = vals[(k - 1, j)] * rhs
            for j in pred[i]:
                rhs = vals[(k, j)] * rhs
            vals[(k - 1, i)] = (rhs + 1) / vals[(k, i)]
    return FriezeArray(q, first_column, columns, vals)


def specialize(f: FriezeArray, point: Mapping[int, int | Fraction]) -> FriezeArray:
    """Evaluate every entry at a rational point (e.g. all variables equal to 1)."""
    return FriezeArray(f.quiver, f.first_column, f.last_column,
                       {pos: eval_at(v, point) for pos, v in f.values.items()})


def frieze_relation_failures(f: FriezeArray) -> list[tuple[int, int]]:
    """Positions ``(k, i)`` where the defining relation fails (empty when sound)."""
    q = f.quiver
    bad = []
    for k in range(f.first_column, f.last_column):
        for i in range(1, q.vertex_count + 1):
            rhs = 1
            for j in q.successors(i):
                rhs = f[(k, j)] * rhs
            for j in q.predecessors(i):
                rhs = f[(k + 1, j)] * rhs
            if f[(k, i)] * f[(k + 1, i)] != rhs + 1:
                bad.append((k, i))
    return bad


def unimodular_check(a, b, c, d) -> bool:
    """``a`` west, ``b`` north, ``c`` south, ``d`` east: true iff ``ad - bc == 1``."""
    return a * d - b * c == 1


# -- plane layout for path quivers ------------------------------------------

def path_positions(q: Quiver, origin: tuple[int, int] = (0, 0)) -> dict[int, tuple[int, int]]:
    """Plane position of vertex ``i`` of column 0 for a path ``1 - 2 - ... - m``.

    The walk starts at ``origin`` (a row-0 border point) with a step ``(0, 1)``.
    """
    m = q.vertex_count
    u, v = origin[0], origin[1] + 1
    pos = {1: (u, v)}
    for i in range(1, m):
        if q.has_arrow(i, i + 1):
            u += 1
        elif q.has_arrow(i + 1, i):
            v += 1
        else:
            raise ValueError("not a canonically labelled path quiver")
        pos[i + 1] = (u, v)
    return pos


def plane_values(f: FriezeArray) -> dict[tuple[int, int], object]:
    """Entries of a path frieze keyed by plane position, with the border rows of ones."""
    m = f.rank
    base = path_positions(f.quiver)
    out: dict[tuple[int, int], object] = {}
    for (k, i), val in f.values.items():
        u, v = base[i]
        out[(u + k, v - k)] = val
    one = 1
    for k in f.columns():
        u, v = base[1]
        out.setdefault((u + k, v - 1 - k), one)  # row 0 below vertex 1
        out.setdefault((u + k - 1, v - k), one)
        u, v = base[m]
        out.setdefault((u + k + 1, v - k), one)  # row m + 1 above vertex m
        out.setdefault((u + k, v + 1 - k), one)
    return out


def diamond_failures(values: Mapping[tuple[int, int], object]) -> tuple[int, list[tuple[int, int]]]:
    """Check ``T(u,v+1)T(u+1,v) - T(u,v)T(u+1,v+1) = 1`` on every complete unit square.

    Returns the number of squares checked and the lower corners of the failures.
    """
    checked, bad = 0, []
    for (u, v) in values:
        corners = ((u, v + 1), (u + 1, v), (u + 1, v + 1))
        if all(c in values for c in corners):
            checked += 1
            if not unimodular_check(values[(u, v + 1)], values[(u + 1, v + 1)],
                                    values[(u, v)], values[(u + 1, v)]):
                bad.append((u, v))
    return checked, bad


# -- windows of type D friezes ----------------------------------------------

@dataclass(frozen=True, eq=False)
class PartF:
    """Columns ``0..n`` of a type D frieze."""

    frieze: FriezeArray

    @property
    def n(self) -> int:
        return self.frieze.rank

    def positions(self) -> Iterator[tuple[int, int]]:
        for k in range(self.n + 1):
            for i in range(1, self.n + 1):
                yield (k, i)

    def __getitem__(self, pos):
        k, _ = pos
        if not 0 <= k <= self.n:
            raise KeyError(pos)
        return self.frieze[pos]

    def values(self) -> list:
        return [self.frieze[p] for p in self.positions()]

    def distinct_values(self) -> set:
        return set(self.values())


def part_F(f: FriezeArray) -> PartF:
    if classify(f.quiver).kind != "D":
        raise ValueError("part F is defined for type D friezes")
    if f.first_column > 0 or f.last_column < f.rank:
        raise WindowOutOfRange(f"need columns 0..{f.rank}")
    return PartF(f)


@dataclass(frozen=True, eq=False)
class ModelledQuiver:
    """Part F with the two fork rows replaced by the row of their products.

    Rows are keyed by the labels ``1`` (merged fork), ``3``, ..., ``n``.
    """

    quiver: Quiver
    values: Mapping[tuple[int, int], LaurentPolynomial]

    @property
    def n(self) -> int:
        return self.quiver.vertex_count

    @property
    def rows(self) -> tuple[int, ...]:
        return (1,) + tuple(range(3, self.n + 1))

    def __getitem__(self, pos):
        return self.values[pos]

    def doubled_row(self, label: int) -> int:
        """Row of the doubled path frieze that carries this label."""
        return self.n + 1 if label == 1 else self.n + label - 1


def modelled_quiver(p: PartF) -> ModelledQuiver:
    conf = fork_info(p.frieze.quiver).configuration
    if conf is ForkConfiguration.MIXED:
        raise UnsupportedFork("no modelled quiver for a fork with one entering and one leaving arrow")
    n = p.n
    vals = {}
    for k in range(n + 1):
        vals[(k, 1)] = p[(k, 1)] * p[(k, 2)]
        for j in range(3, n + 1):
            vals[(k, j)] = p[(k, j)]
    return ModelledQuiver(p.frieze.quiver, vals)


@dataclass(frozen=True, eq=False)
class FundamentalQuiver:
    """Triangular window of a path frieze, entries keyed by ``(k, i)``."""

    m: int
    k0: int
    values: Mapping[tuple[int, int], object]

    def __len__(self) -> int:
        return len(self.values)

    def positions(self) -> list[tuple[int, int]]:
        return sorted(self.values, key=lambda p: (-p[1], p[0]))


def _window_positions(q: Quiver, k0: int) -> list[tuple[int, int]]:
    m = q.vertex_count
    base = path_positions(q)
    u0 = base[m][0] + k0
    v0 = base[m][1] - k0 - m
    out = []
    for i in range(1, m + 1):
        bu, bv = base[i]
        for k in range(u0 - bu, bv - v0 + 1):
            out.append((k, i))
    return out


def fundamental_quiver(f: FriezeArray, k0: int) -> FundamentalQuiver:
    """Window between the descending diagonal through ``(k0, m)`` and the ascending
    diagonal ending at ``(k0 + m, m)``; holds ``m(m+3)/2`` entries."""
    cls = classify(f.quiver)
    if cls.kind != "A":
        raise ValueError("fundamental quivers are defined for path friezes")
    m = f.rank
    vals = {}
    for pos in _window_positions(f.quiver, k0):
        if pos not in f:
            raise WindowOutOfRange(f"position {pos} not computed (columns {f.first_column}..{f.last_column})")
        vals[pos] = f[pos]
    assert len(vals) == m * (m + 3) // 2
    return FundamentalQuiver(m, k0, vals)


@dataclass(frozen=True, eq=False)
class Completion:
    """The modelled quiver continued downwards inside the doubled path frieze.

    ``values`` are keyed by ``(k, i)`` of the frieze over the doubled path
    quiver; ``k0`` is where its fundamental quiver containing them starts;
    ``h0`` is the value forced on the middle vertex of column 0.
    """

    quiver: Quiver
    values: Mapping[tuple[int, int], LaurentPolynomial]
    k0: int
    endpoint: tuple[int, int]
    h0: LaurentPolynomial


def complete_downward(mq: ModelledQuiver) -> Completion:
    n = mq.n
    qp, labels = build_q_prime(mq.quiver)
    base = path_positions(qp)
    rank = mq[(0, 1)].rank
    plane: dict[tuple[int, int], LaurentPolynomial] = {}
    for (k, lab), val in mq.values.items():
        u, v = base[mq.doubled_row(lab)]
        plane[(u + k, v - k)] = val
    top_u, top_v = base[n + 1]
    # rows n, n - 1, ..., 1: solve the square whose bottom corner is unknown
    for row in range(n, 0, -1):
        for u in range(top_u, top_u + row):
            v = row - u
            a, d, b = plane[(u, v + 1)], plane[(u + 1, v)], plane[(u + 1, v + 1)]
            plane[(u, v)] = (a * d - 1) / b
    ki = {}
    for (u, v), val in plane.items():
        i = u + v
        ki[(u - base[i][0], i)] = val
    # middle vertex: the square h0 . e - (right neighbour) . w = 1, where w is the
    # column 1 entry left of the middle, linear in h0 through the seed relation
    e = ki[(1, n)]
    top = ki[(0, n + 1)]
    h0 = _solve_middle(qp, labels, mq, e, top, rank)
    endpoint = (top_u - base[1][0], 1)
    k0 = top_u - base[2 * n - 1][0]
    return Completion(qp, ki, k0, endpoint, h0)


def _solve_middle(qp: Quiver, labels, mq: ModelledQuiver, e, top, rank) -> LaurentPolynomial:
    """Value of the middle vertex forced by the uni-modular rule.

    Left of the middle the column-0 values are the ``omega`` values read backwards
    (first column of the modelled quiver); the column-1 entry ``w`` next to the
    middle obeys ``a(0,n-1) * w = 1 + h0 * (other neighbour)`` or similar, linear
    in ``h0``. Combining with ``h0 * e - top * w = 1`` gives ``h0``.
    """
    n = mq.n
    h = LaurentPolynomial.variable(0, rank)
    col0 = {}
    for p, lab in enumerate(labels, start=1):
        col0[p] = h if lab == 0 else mq[(0, lab)]
    seed = Seed(qp, tuple(col0[p] for p in range(1, 2 * n)))
    # only column 1 at vertex n - 1 is needed; it depends on column 0 and
    # column 1 entries left of it, none of which involve the right half
    w = compute_frieze(seed, 1)[(1, n - 1)]
    g = 1 + top * w
    g1 = LaurentPolynomial({(0,) + term[1:]: c for term, c in g.terms().items() if term[0] == 1}, rank)
    g0 = LaurentPolynomial({t: c for t, c in g.terms().items() if t[0] == 0}, rank)
    if any(t[0] not in (0, 1) for t in g.terms()):
        raise ArithmeticError("middle relation is not linear in the unknown")
    return g0 / (e - g1)


# -- periodicity ------------------------------------------------------------

def column_period(f: FriezeArray, swap: Mapping[int, int] | None = None) -> int | None:
    """Smallest ``p > 0`` with column ``p`` equal to column 0 (rows permuted by ``swap``)."""
    swap = swap or {}
    col0 = f.column(0)
    n = f.rank
    for p in range(1, f.last_column + 1):
        if all(f[(p, i)] == col0[swap.get(i, i) - 1] for i in range(1, n + 1)):
            return p
    return None
