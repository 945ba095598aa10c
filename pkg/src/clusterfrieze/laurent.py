"""Exact multivariate Laurent polynomials over the rationals.

Variables are ``u0, u1, ..., u_rank``; ``u0`` is the auxiliary variable that
only shows up transiently before it is specialised to 1.

Exponent vectors are packed into a single Python integer (fixed-width biased
slots, ``u0`` most significant) so that monomial multiplication is integer
addition and lexicographic comparison is integer comparison.
"""

from __future__ import annotations

import heapq
import re
import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

__all__ = [
    "LaurentPolynomial",
    "InexactDivision",
    "NotAPerfectSquare",
    "RankMismatch",
    "add",
    "mul",
    "div_exact",
    "eval_at",
    "normal_form",
    "sqrt_perfect",
    "variables",
    "parse_laurent",
]

_BITS = 20
_BIAS = 1 << (_BITS - 1)
_MASK = (1 << _BITS) - 1


class InexactDivision(ArithmeticError):
    """The divisor does not divide the dividend in the Laurent ring."""


class NotAPerfectSquare(ArithmeticError):
    pass


class RankMismatch(ValueError):
    pass


def _bias_pack(nslots: int) -> int:
    key = 0
    for _ in range(nslots):
        key = (key << _BITS) | _BIAS
    return key


_BIAS_CACHE: dict[int, int] = {}


def _zero_key(nslots: int) -> int:
    try:
        return _BIAS_CACHE[nslots]
    except KeyError:
        _BIAS_CACHE[nslots] = key = _bias_pack(nslots)
        return key


def _pack(exps: Iterable[int]) -> int:
    key = 0
    for e in exps:
        if not -_BIAS < e < _BIAS:
            raise OverflowError(f"exponent {e} out of range")
        key = (key << _BITS) | (e + _BIAS)
    return key


def _unpack(key: int, nslots: int) -> tuple[int, ...]:
    out = [0] * nslots
    for i in range(nslots - 1, -1, -1):
        out[i] = (key & _MASK) - _BIAS
        key >>= _BITS
    return tuple(out)


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _qdiv(a, b):
    if type(a) is int and type(b) is int:
        q, r = divmod(a, b)
        if r == 0:
            return q
    return _norm(Fraction(a) / b)


def _rational_sqrt(c) -> int | Fraction:
    c = Fraction(c)
    if c < 0:
        raise NotAPerfectSquare(f"negative coefficient {c}")
    num, den = math.isqrt(c.numerator), math.isqrt(c.denominator)
    if num * num != c.numerator or den * den != c.denominator:
        raise NotAPerfectSquare(f"coefficient {c} is not a rational square")
    return _norm(Fraction(num, den))


class LaurentPolynomial:
    """Immutable Laurent polynomial in ``u0..u_rank`` with rational coefficients.

    Equality is structural: two polynomials are equal iff they have the same
    rank and the same term map. Arithmetic with Python ints/Fractions coerces
    them to constants.

    >>> u = variables(3)
    >>> str((1 + u[3]) * (1 + u[3]))
    'u3^2 + 2*u3 + 1'
    >>> str((u[1] * u[2]) ** -1)
    'u1^-1*u2^-1'
    """

    __slots__ = ("rank", "_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], Rational] | None = None, rank: int = 0):
        if rank < 0:
            raise ValueError("rank must be non-negative")
        self.rank = rank
        packed: dict[int, int | Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) == rank:
                exps = (0,) + exps
            if len(exps) != rank + 1:
                raise RankMismatch(f"exponent vector {exps} does not fit rank {rank}")
            c = _norm(Fraction(c)) if not isinstance(c, int) else c
            if c:
                k = _pack(exps)
                packed[k] = _norm(packed.get(k, 0) + c)
                if not packed[k]:
                    del packed[k]
        self._terms = packed
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[int, int | Fraction], rank: int) -> LaurentPolynomial:
        obj = cls.__new__(cls)
        obj.rank = rank
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, c, rank: int) -> LaurentPolynomial:
        c = _norm(Fraction(c))
        return cls._raw({_zero_key(rank + 1): c} if c else {}, rank)

    @classmethod
    def variable(cls, index: int, rank: int, power: int = 1) -> LaurentPolynomial:
        if not 0 <= index <= rank:
            raise ValueError(f"variable index {index} outside 0..{rank}")
        exps = [0] * (rank + 1)
        exps[index] = power
        return cls._raw({_pack(exps): 1}, rank)

    @classmethod
    def monomial(cls, exponents: Mapping[int, int], rank: int, coeff=1) -> LaurentPolynomial:
        exps = [0] * (rank + 1)
        for i, e in exponents.items():
            exps[i] = e
        return cls({tuple(exps): coeff}, rank)

    # -- inspection -------------------------------------------------------

    @property
    def nslots(self) -> int:
        return self.rank + 1

    def terms(self) -> dict[tuple[int, ...], int | Fraction]:
        """Term map ``exponent vector (u0..u_rank) -> coefficient``."""
        n = self.nslots
        return {_unpack(k, n): c for k, c in self._terms.items()}

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int | Fraction]]:
        """Terms in descending lexicographic order of exponent vectors."""
        n = self.nslots
        return [(_unpack(k, n), self._terms[k]) for k in sorted(self._terms, reverse=True)]

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_polynomial(self) -> bool:
        return all(min(e) >= 0 for e in self.terms())

    def __len__(self) -> int:
        return len(self._terms)

    def leading_term(self) -> tuple[tuple[int, ...], int | Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        k = max(self._terms)
        return _unpack(k, self.nslots), self._terms[k]

    def occurring(self) -> set[int]:
        """Indices of variables that occur with nonzero exponent."""
        out: set[int] = set()
        for exps in self.terms():
            out.update(i for i, e in enumerate(exps) if e)
        return out

    def coefficients(self) -> list[int | Fraction]:
        return list(self._terms.values())

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> LaurentPolynomial:
        if isinstance(other, LaurentPolynomial):
            if other.rank != self.rank:
                raise RankMismatch(f"rank {self.rank} vs {other.rank}")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPolynomial.constant(other, self.rank)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = _norm(s)
            else:
                out.pop(k, None)
        return LaurentPolynomial._raw(out, self.rank)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial._raw({k: -c for k, c in self._terms.items()}, self.rank)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        z = _zero_key(self.nslots)
        out: dict[int, int | Fraction] = {}
        get = out.get
        for kb, cb in b.items():
            shift = kb - z
            for ka, ca in a.items():
                k = ka + shift
                out[k] = get(k, 0) + ca * cb
        out = {k: _norm(c) for k, c in out.items() if c}
        return LaurentPolynomial._raw(out, self.rank)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            if not self.is_monomial():
                raise InexactDivision("only monomials have Laurent inverses")
            (k, c), = self._terms.items()
            z = _zero_key(self.nslots)
            inv = LaurentPolynomial._raw({2 * z - k: _qdiv(1, c)}, self.rank)
            return inv ** (-e)
        result = LaurentPolynomial.constant(1, self.rank)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return div_exact(self, other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return div_exact(other, self)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPolynomial.constant(other, self.rank)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rank, frozenset(self._terms.items())))
        return self._hash

    def __lt__(self, other: LaurentPolynomial) -> bool:
        """Total order used only for deterministic sorting of output sets."""
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        keys = sorted(self._terms, reverse=True)
        return (len(keys), keys, [Fraction(self._terms[k]) for k in keys])

    # -- variable manipulation -------------------------------------------

    def permute(self, mapping: Mapping[int, int]) -> LaurentPolynomial:
        """Rename variables: ``u_i -> u_mapping[i]`` (missing indices are fixed)."""
        n = self.nslots
        out: dict[tuple[int, ...], int | Fraction] = {}
        for exps, c in self.terms().items():
            new = [0] * n
            for i, e in enumerate(exps):
                new[mapping.get(i, i)] += e
            out[tuple(new)] = c
        return LaurentPolynomial(out, self.rank)

    def substitute(self, index: int, value: LaurentPolynomial) -> LaurentPolynomial:
        """Replace ``u_index`` by ``value``; the result must be a Laurent polynomial."""
        value = self._coerce(value)
        by_power: dict[int, dict[tuple[int, ...], int | Fraction]] = {}
        for exps, c in self.terms().items():
            e = exps[index]
            rest = exps[:index] + (0,) + exps[index + 1:]
            by_power.setdefault(e, {})[rest] = c
        shift = max(0, -min(by_power, default=0))
        total = LaurentPolynomial.constant(0, self.rank)
        for e, part in by_power.items():
            total = total + LaurentPolynomial(part, self.rank) * value ** (e + shift)
        if shift:
            total = div_exact(total, value ** shift)
        return total

    # -- rendering --------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for exps, c in self.sorted_terms():
            mono = _render_monomial(exps)
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not pieces:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append((" - " if neg else " + ") + body)
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"LaurentPolynomial('{self}', rank={self.rank})"

    def fraction_str(self) -> str:
        """Render as ``(numerator)/(monomial)``, e.g. ``(u3^2 + 2*u3 + 1)/(u1*u2)``."""
        if not self._terms:
            return "0"
        num, den = normal_form(self)
        top = str(num)
        if den == 1:
            return top
        if len(num) > 1:
            top = f"({top})"
        d = str(den)
        if "*" in d:
            d = f"({d})"
        return f"{top}/{d}"


def _render_monomial(exps: tuple[int, ...]) -> str:
    parts = []
    for i, e in enumerate(exps):
        if e == 1:
            parts.append(f"u{i}")
        elif e:
            parts.append(f"u{i}^{e}")
    return "*".join(parts)


def variables(rank: int) -> list[LaurentPolynomial]:
    """``[u0, u1, ..., u_rank]`` as polynomials of the given rank."""
    return [LaurentPolynomial.variable(i, rank) for i in range(rank + 1)]


def add(p: LaurentPolynomial, q: LaurentPolynomial) -> LaurentPolynomial:
    return p + q


def mul(p: LaurentPolynomial, q: LaurentPolynomial) -> LaurentPolynomial:
    return p * q


def _slot_bounds(p: LaurentPolynomial) -> tuple[list[int], list[int], int, int]:
    n = p.nslots
    lo = [None] * n
    hi = [None] * n
    dlo = dhi = None
    for k in p._terms:
        exps = _unpack(k, n)
        d = sum(exps)
        dlo = d if dlo is None or d < dlo else dlo
        dhi = d if dhi is None or d > dhi else dhi
        for i, e in enumerate(exps):
            if lo[i] is None or e < lo[i]:
                lo[i] = e
            if hi[i] is None or e > hi[i]:
                hi[i] = e
    return lo, hi, dlo, dhi


def div_exact(p: LaurentPolynomial, q: LaurentPolynomial) -> LaurentPolynomial:
    """Return ``r`` with ``r * q == p``, or raise :class:`InexactDivision`.

    Lexicographic long division. Every quotient exponent must lie in the box
    forced by the per-variable and total-degree extremes of ``p`` and ``q``;
    leaving the box proves that no Laurent quotient exists.
    """
    if p.rank != q.rank:
        raise RankMismatch(f"rank {p.rank} vs {q.rank}")
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return p
    rank, n = p.rank, p.nslots
    z = _zero_key(n)
    if q.is_monomial():
        (kq, cq), = q._terms.items()
        shift = z - kq
        return LaurentPolynomial._raw({k + shift: _qdiv(c, cq) for k, c in p._terms.items()}, rank)

    plo, phi, pdlo, pdhi = _slot_bounds(p)
    qlo, qhi, qdlo, qdhi = _slot_bounds(q)
    lo = [a - b for a, b in zip(plo, qlo)]
    hi = [a - b for a, b in zip(phi, qhi)]
    dlo, dhi = pdlo - qdlo, pdhi - qdhi
    if dlo > dhi or any(a > b for a, b in zip(lo, hi)):
        raise InexactDivision("degree bounds exclude a Laurent quotient")

    kq = max(q._terms)
    cq = q._terms[kq]
    q_rest = [(k - kq, c) for k, c in q._terms.items() if k != kq]
    rem = dict(p._terms)
    heap = [-k for k in rem]
    heapq.heapify(heap)
    quot: dict[int, int | Fraction] = {}
    while rem:
        while True:
            k = -heapq.heappop(heap)
            if k in rem:
                break
        c = rem.pop(k)
        t = k - kq + z  # quotient monomial key
        exps = _unpack(t, n)
        if any(e < a or e > b for e, a, b in zip(exps, lo, hi)) or not dlo <= sum(exps) <= dhi:
            raise InexactDivision(f"{p} is not divisible by {q}")
        ct = _qdiv(c, cq)
        quot[t] = ct
        for dk, cr in q_rest:
            kk = k + dk
            v = rem.get(kk, 0) - ct * cr
            if v:
                if kk not in rem:
                    heapq.heappush(heap, -kk)
                rem[kk] = _norm(v)
            else:
                rem.pop(kk, None)
    return LaurentPolynomial._raw(quot, rank)


def eval_at(p: LaurentPolynomial, point: Mapping[int, Rational]) -> Fraction:
    """Evaluate ``p`` at a rational point ``{variable index: value}``."""
    needed = p.occurring()
    missing = needed - set(point)
    if missing:
        raise KeyError(f"no value assigned to u{min(missing)}")
    total = Fraction(0)
    for exps, c in p.terms().items():
        term = Fraction(c)
        for i, e in enumerate(exps):
            if e:
                x = Fraction(point[i])
                if x == 0 and e < 0:
                    raise ZeroDivisionError(f"u{i} = 0 but it occurs with exponent {e}")
                term *= x ** e
        total += term
    return total


def normal_form(p: LaurentPolynomial) -> tuple[LaurentPolynomial, LaurentPolynomial]:
    """Split ``p`` as ``numerator / denominator`` with a monomial denominator.

    The denominator clears exactly the negative exponents, so the numerator is
    a polynomial and ``numerator / denominator == p``.
    """
    if p.is_zero():
        raise ValueError("normal form of the zero polynomial is undefined")
    lo, _, _, _ = _slot_bounds(p)
    den = LaurentPolynomial({tuple(max(0, -e) for e in lo): 1}, p.rank)
    return p * den, den


def sqrt_perfect(p: LaurentPolynomial) -> LaurentPolynomial:
    """Square root of a perfect-square polynomial, normalised to a positive leading coefficient.

    Leading-term method: peel off the lexicographic leading term of the
    remainder and divide it by twice the leading term of the root.
    """
    if p.is_zero():
        return p
    if not p.is_polynomial():
        raise ValueError("sqrt_perfect expects a polynomial (no negative exponents)")
    rank, n = p.rank, p.nslots
    z = _zero_key(n)
    lead_exps, lead_c = p.leading_term()
    if any(e % 2 for e in lead_exps):
        raise NotAPerfectSquare(f"leading monomial of {p} is not a square")
    s0 = LaurentPolynomial({tuple(e // 2 for e in lead_exps): _rational_sqrt(lead_c)}, rank)
    (ks0, cs0), = s0._terms.items()
    two_s0 = 2 * cs0
    max_deg = max(sum(e) for e in p.terms())
    min_key = min(p._terms)
    root_terms = {ks0: cs0}
    rem = p - s0 * s0
    while not rem.is_zero():
        k = max(rem._terms)
        t = k - ks0 + z
        exps = _unpack(t, n)
        if min(exps) < 0 or 2 * sum(exps) > max_deg or 2 * (t - z) + z < min_key:
            raise NotAPerfectSquare(f"{p} is not a perfect square")
        ct = _qdiv(rem._terms[k], two_s0)
        term = LaurentPolynomial._raw({t: ct}, rank)
        current = LaurentPolynomial._raw(dict(root_terms), rank)
        rem = rem - term * (2 * current + term)
        root_terms[t] = ct
    return LaurentPolynomial._raw(root_terms, rank)


_TERM = re.compile(r"^(?:(\d+(?:/\d+)?)\*?)?((?:u\d+(?:\^-?\d+)?\*?)*)$")
_FACTOR = re.compile(r"u(\d+)(?:\^(-?\d+))?")


def _split_top(s: str, sep: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return out


def _strip_parens(s: str) -> str:
    s = s.strip()
    while s.startswith("(") and s.endswith(")"):
        depth = 0
        for pos, ch in enumerate(s):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0:
                break
        if pos != len(s) - 1:
            break
        s = s[1:-1].strip()
    return s


def parse_laurent(text: str, rank: int) -> LaurentPolynomial:
    """Inverse of ``str`` and ``fraction_str`` (e.g. ``(u3^2 + 2*u3 + 1)/(u1*u2)``)."""
    s = _strip_parens(text)
    if re.fullmatch(r"-?\d+/\d+", s):
        return LaurentPolynomial.constant(Fraction(s), rank)
    parts = _split_top(s, "/")
    if len(parts) == 2 and (parts[0].strip().endswith(")") or parts[1].strip().startswith(("(", "u"))):
        return div_exact(parse_laurent(parts[0], rank), parse_laurent(parts[1], rank))
    if len(parts) > 2:
        raise ValueError(f"cannot parse {text!r}")
    body = s.replace(" - ", " + -").replace(" ", "")
    total = LaurentPolynomial.constant(0, rank)
    for term in body.split("+"):
        if not term:
            raise ValueError(f"cannot parse {text!r}")
        sign = -1 if term.startswith("-") else 1
        term = term.lstrip("-")
        m = _TERM.match(term)
        if not m or not term:
            raise ValueError(f"cannot parse term {term!r}")
        coeff = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        exps = [0] * (rank + 1)
        for var, e in _FACTOR.findall(m.group(2)):
            i = int(var)
            if i > rank:
                raise ValueError(f"u{i} exceeds rank {rank}")
            exps[i] += int(e) if e else 1
        total = total + LaurentPolynomial({tuple(exps): sign * coeff}, rank)
    return total
