"""Closed-form values of the doubled path frieze from staircase boundary words.

A boundary word alternates values and letters ``x`` / ``y``. Laid out in the
plane, ``x`` is a unit step ``(1, 0)`` and ``y`` a unit step ``(0, 1)``. The
lower boundary ``F = y . w . x`` of the doubled seed word ``w`` starts at the
origin. The upper boundary is the image of ``F`` under the glide reflection
``(u, v) -> (2n + 1 - v, -1 - u)``, walked in increasing order.

Every point of the target window gets a word cut out of one of the two
boundaries and a value from a product of 2x2 matrices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .laurent import LaurentPolynomial, NotAPerfectSquare, normal_form, sqrt_perfect
from .quiver import (
    ForkConfiguration,
    LambdaPrime,
    Seed,
    build_lambda_prime,
    classify,
    fork_info,
)

__all__ = [
    "BoundaryWord",
    "PositionBoundary",
    "PointAddress",
    "Case",
    "Mat2",
    "WordTooShort",
    "OutsideRegion",
    "to_boundary",
    "position_boundary",
    "transpose_boundary",
    "enumerate_points",
    "locate_point",
    "region_positions",
    "matrix_M",
    "T_value",
    "split_diagonal",
    "split_mixed_diagonal",
    "all_cluster_variables",
    "formula_values",
    "render_value",
    "continuant_row",
    "row_pair_determinant",
    "crossed_determinant",
    "random_word",
]


class WordTooShort(ValueError):
    pass


class OutsideRegion(ValueError):
    pass


def render_value(p: LaurentPolynomial) -> str:
    """Compact rendering used inside words: ``u1*u2``, ``(u3 + 1)/u2``."""
    return p.fraction_str()


@dataclass(frozen=True)
class BoundaryWord:
    values: tuple[LaurentPolynomial, ...]
    letters: tuple[str, ...]

    def __post_init__(self):
        if len(self.letters) != len(self.values) - 1:
            raise ValueError("a word alternates values and letters")
        if any(c not in ("x", "y") for c in self.letters):
            raise ValueError("letters must be 'x' or 'y'")

    def __len__(self) -> int:
        return len(self.values)

    def swapped(self) -> BoundaryWord:
        return BoundaryWord(self.values, tuple("y" if c == "x" else "x" for c in self.letters))

    def reversed(self) -> BoundaryWord:
        return BoundaryWord(self.values[::-1], self.letters[::-1])

    def transpose(self) -> BoundaryWord:
        """Read right to left with ``x`` and ``y`` exchanged."""
        return self.reversed().swapped()

    def tokens(self) -> list[str]:
        out = [render_value(self.values[0])]
        for c, v in zip(self.letters, self.values[1:]):
            out += [c, render_value(v)]
        return out

    def __str__(self) -> str:
        return " ".join(self.tokens())

    def compact(self, omit_ones: bool = False) -> str:
        """Everything run together, products written by juxtaposition (``u4yu3yu1u2``).

        With ``omit_ones`` a value equal to 1 is left blank (``xx`` for ``x1x``).
        """
        toks = self.tokens()
        if omit_ones:
            toks = [t for i, t in enumerate(toks) if i % 2 or t != "1"]
        return "".join(t.replace("*", "") for t in toks)


def to_boundary(seed: Seed) -> BoundaryWord:
    """Word of a path seed: ``i -> i+1`` gives ``x`` between the two values, ``i <- i+1`` gives ``y``."""
    q = seed.quiver
    if q.vertex_count > 1 and classify(q).kind != "A":
        raise ValueError("boundary words need a path quiver")
    letters = []
    for i in range(1, q.vertex_count):
        if q.has_arrow(i, i + 1):
            letters.append("x")
        elif q.has_arrow(i + 1, i):
            letters.append("y")
        else:
            raise ValueError("path quiver must be labelled 1 - 2 - ... - m")
    return BoundaryWord(seed.variables, tuple(letters))


@dataclass(frozen=True)
class PositionBoundary:
    """A word placed in the plane.

    ``values`` and ``coords`` include the two unlabelled end vertices (value 1);
    ``labelled`` marks the vertices coming from the underlying word.
    """

    values: tuple[LaurentPolynomial, ...]
    letters: tuple[str, ...]
    coords: tuple[tuple[int, int], ...]
    labelled: tuple[bool, ...]

    def __post_init__(self):
        for (a, b), (c, d), letter in zip(self.coords, self.coords[1:], self.letters):
            step = (c - a, d - b)
            if step != ((1, 0) if letter == "x" else (0, 1)):
                raise ValueError("coordinates do not follow the letters")

    @property
    def n(self) -> int:
        """Rank of the type D seed this boundary comes from (2n + 1 vertices)."""
        return (len(self.values) - 1) // 2

    def index_of(self, point: tuple[int, int]) -> int | None:
        try:
            return self.coords.index(point)
        except ValueError:
            return None

    def word(self) -> BoundaryWord:
        return BoundaryWord(self.values, self.letters)

    def portion(self, i: int, j: int) -> BoundaryWord:
        lo, hi = min(i, j), max(i, j)
        return BoundaryWord(self.values[lo:hi + 1], self.letters[lo:hi])

    def rendered(self) -> str:
        """Letters and labelled values only, e.g. ``y u4 y u3 ... u4 x``."""
        out = []
        for idx, v in enumerate(self.values):
            if self.labelled[idx]:
                out.append(render_value(v))
            if idx < len(self.letters):
                out.append(self.letters[idx])
        return " ".join(out)

    def compact(self, omit_ones: bool = False) -> str:
        toks = self.rendered().split()
        if omit_ones:
            toks = [t for t in toks if t != "1"]
        return "".join(t.replace("*", "") for t in toks)


def position_boundary(w: BoundaryWord) -> PositionBoundary:
    """``F = y . w . x`` walked from the origin."""
    rank = w.values[0].rank
    one = LaurentPolynomial.constant(1, rank)
    values = (one,) + tuple(w.values) + (one,)
    letters = ("y",) + tuple(w.letters) + ("x",)
    coords = [(0, 0)]
    for c in letters:
        u, v = coords[-1]
        coords.append((u + 1, v) if c == "x" else (u, v + 1))
    labelled = (False,) + (True,) * len(w.values) + (False,)
    return PositionBoundary(values, letters, tuple(coords), labelled)


def _glide(n: int, point: tuple[int, int]) -> tuple[int, int]:
    u, v = point
    return (2 * n + 1 - v, -1 - u)


def transpose_boundary(F: PositionBoundary) -> PositionBoundary:
    """``tF = x . t(w) . y``: interior vertex ``j`` is the glide image of vertex ``2n - j`` of ``F``."""
    n = F.n
    inner = [_glide(n, F.coords[2 * n - j]) for j in range(1, 2 * n)]
    u, v = inner[0]
    first = (u - 1, v)
    u, v = inner[-1]
    last = (u, v + 1)
    coords = (first,) + tuple(inner) + (last,)
    inner_word = BoundaryWord(F.values[1:-1], F.letters[1:-1]).transpose()
    letters = ("x",) + inner_word.letters + ("y",)
    values = (F.values[0],) + inner_word.values + (F.values[-1],)
    return PositionBoundary(values, letters, coords, F.labelled)


class Case(Enum):
    BOUNDARY = "boundary"
    FF = "FF"
    TT = "TT"
    MIXED = "mixed"


@dataclass(frozen=True)
class PointAddress:
    position: tuple[int, int]
    case: Case
    word: BoundaryWord
    horizontal: tuple[int, int] | None = None
    vertical: tuple[int, int] | None = None


def region_positions(F: PositionBoundary) -> dict[tuple[int, int], tuple[int, int]]:
    """Plane points of the target window mapped to ``(k, i)`` of the doubled frieze.

    The window is columns ``0..n`` of the rows ``n + 1..2n - 1`` (the right
    half of the doubled word). Row ``n + 1`` is the diagonal of fork products.
    """
    n = F.n
    out = {}
    for i in range(n + 1, 2 * n):
        u, v = F.coords[i]
        for k in range(n + 1):
            out[(u + k, v - k)] = (k, i)
    return out


def locate_point(F: PositionBoundary, tF: PositionBoundary, point: tuple[int, int]) -> PointAddress:
    """Projections of ``point`` onto the two boundaries and the resulting word."""
    if point not in region_positions(F):
        raise OutsideRegion(f"{point} is not in the window")
    u, v = point
    for B in (F, tF):
        idx = B.index_of(point)
        if idx is not None:
            return PointAddress(point, Case.BOUNDARY, BoundaryWord((B.values[idx],), ()))
    up = [i for i, (a, b) in enumerate(F.coords) if a == u and b > v]
    if up:
        vi = min(up, key=lambda i: F.coords[i][1])
        left = [i for i, (a, b) in enumerate(F.coords) if b == v and a < u]
        hi = max(left, key=lambda i: F.coords[i][0])
        return PointAddress(point, Case.FF, F.portion(hi, vi), F.coords[hi], F.coords[vi])
    down = [i for i, (a, b) in enumerate(tF.coords) if a == u and b < v]
    if not down:
        raise OutsideRegion(f"{point} has no vertical projection")
    vi = max(down, key=lambda i: tF.coords[i][1])
    right = [i for i, (a, b) in enumerate(tF.coords) if b == v and a > u]
    if right:
        hi = min(right, key=lambda i: tF.coords[i][0])
        return PointAddress(point, Case.TT, tF.portion(vi, hi).swapped(), tF.coords[hi], tF.coords[vi])
    left = [i for i, (a, b) in enumerate(F.coords) if b == v and a < u]
    hi = max(left, key=lambda i: F.coords[i][0])
    # vertex j of tF is the image of vertex 2n - j of F
    partner = 2 * F.n - vi
    return PointAddress(point, Case.MIXED, F.portion(hi, partner), F.coords[hi], tF.coords[vi])


def enumerate_points(F: PositionBoundary, tF: PositionBoundary) -> list[PointAddress]:
    pts = sorted(region_positions(F), key=lambda p: (-(p[0] + p[1]), p[0]))
    return [locate_point(F, tF, p) for p in pts]


@dataclass(frozen=True)
class Mat2:
    a: object
    b: object
    c: object
    d: object

    def __matmul__(self, other: Mat2) -> Mat2:
        return Mat2(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                    self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))


def matrix_M(a, letter: str, b) -> Mat2:
    """``x``: upper triangular ``[[a, 1], [0, b]]``; ``y``: lower triangular ``[[b, 0], [1, a]]``."""
    if letter == "x":
        return Mat2(a, 1, 0, b)
    if letter == "y":
        return Mat2(b, 0, 1, a)
    raise ValueError(f"unknown letter {letter!r}")


def T_value(p: PointAddress):
    """Value at a point from its word ``b0 x1 b1 ... x_{N+1} b_{N+1}``:

        (1 / (b1 ... bN)) (1, b0) M(b1, x2, b2) ... M(b_{N-1}, x_N, b_N) col

    with ``col = (1, b_{N+1})`` for words cut from one boundary and
    ``col = (b_{N+1}, 1)`` for mixed words.
    """
    if p.case is Case.BOUNDARY:
        return p.word.values[0]
    b, x = p.word.values, p.word.letters
    N = len(b) - 2
    if N < 1:
        raise WordTooShort(f"word of {len(b)} values at {p.position}")
    row = (1, b[0])
    for i in range(2, N + 1):
        m = matrix_M(b[i - 1], x[i - 1], b[i])
        row = (row[0] * m.a + row[1] * m.c, row[0] * m.b + row[1] * m.d)
    last = b[N + 1]
    total = row[0] + row[1] * last if p.case is not Case.MIXED else row[0] * last + row[1]
    den = b[1]
    for v in b[2:N + 1]:
        den = den * v
    return total / den


def split_diagonal(t: LaurentPolynomial, first: int = 1, second: int = 2):
    """Factor a diagonal value as ``U * V`` with ``u_first * u_second * t`` a perfect square.

    Returns ``(root / u_first, root / u_second)``.
    """
    rank = t.rank
    a, b = LaurentPolynomial.variable(first, rank), LaurentPolynomial.variable(second, rank)
    num, den = normal_form(a * b * t)
    (exps, c), = den.terms().items()
    if any(e % 2 for e in exps) or c != 1:
        raise NotAPerfectSquare(f"denominator of {t} is not a square")
    root = sqrt_perfect(num) / LaurentPolynomial({tuple(e // 2 for e in exps): 1}, rank)
    return root / a, root / b


def split_mixed_diagonal(t: LaurentPolynomial, kept: int = 1, mutated: int = 2):
    """Split for a fork with one entering and one leaving arrow.

    The diagonal is a product for the seed mutated at fork vertex
    ``mutated``, whose new variable is ``w = (1 + u3) / u_mutated``. Rewrite
    in the mutated cluster (reusing the slot of ``u_mutated`` for ``w``),
    split, and rewrite back.
    """
    rank = t.rank
    swap_in = (1 + LaurentPolynomial.variable(3, rank)) / LaurentPolynomial.variable(mutated, rank)
    in_w = t.substitute(mutated, swap_in)
    u, v = split_diagonal(in_w, kept, mutated)
    return u.substitute(mutated, swap_in), v.substitute(mutated, swap_in)


def formula_values(lp: LambdaPrime) -> dict[tuple[int, int], LaurentPolynomial]:
    """Matrix-formula value at every window point, keyed by ``(k, i)`` of the doubled frieze."""
    F = position_boundary(to_boundary(lp.seed))
    tF = transpose_boundary(F)
    where = region_positions(F)
    return {where[p.position]: T_value(p) for p in enumerate_points(F, tF)}


def all_cluster_variables(seed: Seed) -> set[LaurentPolynomial]:
    """Cluster variables of a canonically labelled type D seed from the boundary formula."""
    cls = classify(seed.quiver)
    if cls.kind != "D":
        raise ValueError(f"expected type D, got {cls}")
    info = fork_info(seed.quiver)
    lp = build_lambda_prime(seed)
    n = seed.quiver.vertex_count
    out: set[LaurentPolynomial] = set()
    splitter = split_mixed_diagonal if info.configuration is ForkConfiguration.MIXED else split_diagonal
    for (k, i), val in formula_values(lp).items():
        if i == n + 1:
            out.update(splitter(val, *info.fork_vertices))
        else:
            out.add(val)
    return out


# -- determinant identities behind the formula --------------------------------

def continuant_row(a, bs: Sequence, b) -> tuple:
    """``(1, a) M(b1, x, b2) ... M(b_{k-1}, x, b_k) M(b_k, y, b)``."""
    row = (1, a)
    mats = [matrix_M(bs[i], "x", bs[i + 1]) for i in range(len(bs) - 1)] + [matrix_M(bs[-1], "y", b)]
    for m in mats:
        row = (row[0] * m.a + row[1] * m.c, row[0] * m.b + row[1] * m.d)
    return row


def row_pair_determinant(a, bs: Sequence, b):
    """``det [lambda'; lambda]`` with ``lambda = (1, b_k)``; equals ``b1 ... bk b``."""
    lam1 = continuant_row(a, bs, b)
    return lam1[0] * bs[-1] - lam1[1]


def crossed_determinant(A: Mat2, a, bs: Sequence, b, c, cs: Sequence, d):
    """``det [[p, q], [r, s]]`` for the four products around a square; equals
    ``b1 ... bk b c c1 ... cl det A``."""
    lam = (1, bs[-1])
    lam1 = continuant_row(a, bs, b)
    col = (1, cs[0])
    m = matrix_M(c, "x", cs[0])
    for i in range(len(cs) - 1):
        m = m @ matrix_M(cs[i], "y", cs[i + 1])
    col1 = (m.a + m.b * d, m.c + m.d * d)

    def form(r, g):
        left = (r[0] * A.a + r[1] * A.c, r[0] * A.b + r[1] * A.d)
        return left[0] * g[0] + left[1] * g[1]

    p, q = form(lam, col), form(lam, col1)
    r, s = form(lam1, col), form(lam1, col1)
    return p * s - q * r


def random_word(rng: random.Random, length: int, rank: int) -> list[LaurentPolynomial]:
    """Random nonzero polynomial values for the determinant identities."""
    out = []
    for _ in range(length):
        terms = {}
        for _ in range(rng.randint(1, 2)):
            exps = tuple(rng.randint(0, 1) for _ in range(rank))
            terms[exps] = rng.randint(1, 3)
        out.append(LaurentPolynomial(terms, rank))
    return out
