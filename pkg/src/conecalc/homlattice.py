"""Integer lattice H_2 of M_g # n(-CP^2) with basis B, F, E_1, ..., E_n.

The intersection form is B.B = F.F = 0, B.F = 1, E_i.E_j = -delta_ij and all
mixed pairings zero.  Everything here is pure arithmetic on immutable values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import DimensionMismatch, ParseError


@dataclass(frozen=True)
class ManifoldDescriptor:
    """Genus ``g`` of the base curve and number ``n`` of blow-ups."""

    g: int
    n: int

    def __post_init__(self):
        if self.g < 0 or self.n < 0:
            raise ValueError(f"need g >= 0 and n >= 0, got g={self.g}, n={self.n}")


@dataclass(frozen=True)
class HomologyClass:
    """The class a*B + b*F + sum(m[i] * E_{i+1}).

    Coefficients are normally integers.  Rational coefficients are tolerated
    so that Poincare duals of area vectors can live in the same type.
    """

    a: Rational
    b: Rational
    m: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(self.m))

    @property
    def n(self) -> int:
        return len(self.m)

    @property
    def is_integral(self) -> bool:
        return all(Fraction(x).denominator == 1 for x in (self.a, self.b, *self.m))

    def _check(self, other):
        if not isinstance(other, HomologyClass):
            return NotImplemented
        if other.n != self.n:
            raise DimensionMismatch(f"classes live in different lattices (n={self.n} vs n={other.n})")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return HomologyClass(self.a + other.a, self.b + other.b,
                             tuple(x + y for x, y in zip(self.m, other.m)))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return HomologyClass(-self.a, -self.b, tuple(-x for x in self.m))

    def __mul__(self, k):
        if not isinstance(k, Rational):
            return NotImplemented
        return HomologyClass(k * self.a, k * self.b, tuple(k * x for x in self.m))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and not any(self.m)

    def sort_key(self):
        return (self.a, self.b, self.m)

    def __str__(self):
        return format_class(self)


# basis ------------------------------------------------------------------

def zero(n: int) -> HomologyClass:
    return HomologyClass(0, 0, (0,) * n)


def B(n: int) -> HomologyClass:
    return HomologyClass(1, 0, (0,) * n)


def F(n: int) -> HomologyClass:
    return HomologyClass(0, 1, (0,) * n)


def E(i: int, n: int) -> HomologyClass:
    """The exceptional class E_i, 1-based."""
    if not 1 <= i <= n:
        raise DimensionMismatch(f"E{i} does not exist for n={n}")
    m = [0] * n
    m[i - 1] = 1
    return HomologyClass(0, 0, tuple(m))


def section_class(k: int, subset, n: int) -> HomologyClass:
    """B + kF - sum_{i in subset} E_i (1-based indices)."""
    m = [0] * n
    for i in subset:
        if not 1 <= i <= n:
            raise DimensionMismatch(f"E{i} does not exist for n={n}")
        m[i - 1] = -1
    return HomologyClass(1, k, tuple(m))


# pairing and derived integers ------------------------------------------

def pair(x: HomologyClass, y: HomologyClass):
    if x.n != y.n:
        raise DimensionMismatch(f"classes live in different lattices (n={x.n} vs n={y.n})")
    return x.a * y.b + y.a * x.b - sum(p * q for p, q in zip(x.m, y.m))


def square(x: HomologyClass):
    return pair(x, x)


def canonical_class(desc: ManifoldDescriptor) -> HomologyClass:
    """K = -2B + (2g-2)F + sum E_i."""
    return HomologyClass(-2, 2 * desc.g - 2, (1,) * desc.n)


def k_pairing(A: HomologyClass, g: int):
    """K.A without building K (only the genus matters)."""
    return -2 * A.b + (2 * g - 2) * A.a - sum(A.m)


def adjunction_genus(A: HomologyClass, g: int) -> int:
    """1 + (A.A + K.A)/2.  Defined for every class; the zero class gets 1."""
    num = square(A) + k_pairing(A, g)
    # sum m_i(1 - m_i) is even, and 2ab + (2g-2)a - 2b is even
    assert num % 2 == 0, f"odd adjunction numerator {num} for {A}"
    return 1 + num // 2


def riemann_index(A: HomologyClass, g: int) -> int:
    """Index 2g(A) - 2 - 2K.A of an embedded representative of A."""
    return 2 * adjunction_genus(A, g) - 2 - 2 * k_pairing(A, g)


def codim(A: HomologyClass, g: int) -> int:
    """Codimension 2(-A.A - 1 + g(A)) of the stratum of curves in class A."""
    return 2 * (-square(A) - 1 + adjunction_genus(A, g))


def is_exceptional_class(A: HomologyClass, g: int) -> bool:
    return square(A) == -1 and k_pairing(A, g) == -1


def reduction_classes(n: int) -> tuple:
    """F - E1 - E2 and E_j - E_i for j < i, each pairing >= 0 on reduced vectors."""
    out = []
    if n >= 2:
        out.append(F(n) - E(1, n) - E(2, n))
    for j in range(1, n + 1):
        for i in range(j + 1, n + 1):
            out.append(E(j, n) - E(i, n))
    return tuple(out)


def is_reduction_class(A: HomologyClass) -> bool:
    return A in reduction_classes(A.n)


# text form ---------------------------------------------------------------

def _term(coeff, symbol: str) -> str:
    mag = abs(coeff)
    if symbol and mag == 1:
        return symbol
    return f"{Fraction(mag)}{symbol}"


def format_class(A: HomologyClass) -> str:
    terms = [(A.a, "B"), (A.b, "F")] + [(x, f"E{i + 1}") for i, x in enumerate(A.m)]
    out = ""
    for coeff, sym in terms:
        if coeff == 0:
            continue
        body = _term(coeff, sym)
        if not out:
            out = ("-" if coeff < 0 else "") + body
        else:
            out += (" - " if coeff < 0 else " + ") + body
    return out or "0"


_TOKEN = re.compile(r"(?P<sign>[+-])|(?P<coeff>\d+)|(?P<sym>B|F|E(?P<idx>\d+))")


def parse_class(text: str, n: int) -> HomologyClass:
    """Parse ``[-]term (('+'|'-') term)*`` where term is ``[coeff](B|F|E<i>)``.

    A bare coefficient term is only meaningful as the zero class ``0``.
    """
    # drop whitespace but remember where each surviving char came from
    chars = [(ch, pos) for pos, ch in enumerate(text) if not ch.isspace()]
    s = "".join(ch for ch, _ in chars)
    where = [pos for _, pos in chars] + [len(text)]
    if not s:
        raise ParseError("empty class", 0, text)

    a, b, m = 0, 0, [0] * n
    i = 0
    sign = 1
    expect_term = True
    if s[0] == "-":
        sign, i = -1, 1
    while i < len(s):
        tok = _TOKEN.match(s, i)
        if tok is None:
            raise ParseError(f"unexpected character {s[i]!r}", where[i], text)
        if tok.group("sign"):
            if expect_term:
                raise ParseError("expected a term", where[i], text)
            sign = 1 if tok.group("sign") == "+" else -1
            expect_term = True
            i = tok.end()
            continue
        if not expect_term:
            raise ParseError("expected '+' or '-'", where[i], text)
        coeff = 1
        if tok.group("coeff"):
            coeff = int(tok.group("coeff"))
            i = tok.end()
            tok = _TOKEN.match(s, i)
            if tok is None or not tok.group("sym"):
                if i < len(s) and s[i] not in "+-":
                    raise ParseError(f"unexpected character {s[i]!r}", where[i], text)
                if coeff != 0:
                    raise ParseError("bare integer term must be 0", where[i - 1], text)
                expect_term = False
                continue
        sym = tok.group("sym")
        if sym == "B":
            a += sign * coeff
        elif sym == "F":
            b += sign * coeff
        else:
            idx = int(tok.group("idx"))
            if idx < 1:
                raise ParseError("E index must be >= 1", where[i], text)
            if idx > n:
                raise DimensionMismatch(f"E{idx} does not exist for n={n}")
            m[idx - 1] += sign * coeff
        i = tok.end()
        expect_term = False
    if expect_term:
        raise ParseError("dangling sign", where[len(s)], text)
    return HomologyClass(a, b, tuple(m))


def max_e_index(text: str) -> int:
    """Largest E index mentioned in ``text`` (0 if none); used to infer n."""
    return max((int(x) for x in re.findall(r"E\s*(\d+)", text)), default=0)
