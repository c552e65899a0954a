"""Degenerations of exceptional classes and the stratum classifier.

An exceptional class E may break into genus-0 fiber-type components
E = sum r_j C_j.  The decomposition is *mild* when it is S + X with S a
square -2 sphere class and X exceptional with X.E = 0, and *bad* otherwise.
Together with the embedded section classes of negative index this decides
which stratum (open, codimension 2, or higher) an almost complex structure
lies in.  Nothing here knows about actual almost complex structures: the
profile is caller-supplied homological data.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import NamedTuple, Union

from .cone import AreaVector, _require_normalized, area, exceptional_set, require_in_cone
from .errors import BoundTooLarge, InconsistentProfile, InvalidDecomposition, NotAdmissible
from .homlattice import (HomologyClass, ManifoldDescriptor, adjunction_genus, codim,
                         format_class, is_exceptional_class, pair, riemann_index,
                         square, zero)


@dataclass(frozen=True)
class Decomposition:
    total: HomologyClass
    parts: tuple  # ((cls, mult), ...)

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple((cls, int(mult)) for cls, mult in self.parts))

    def validate(self, g: int):
        if not self.parts:
            raise InvalidDecomposition("empty decomposition")
        acc = zero(self.total.n)
        for cls, mult in self.parts:
            if mult < 1:
                raise InvalidDecomposition(f"multiplicity {mult} of {format_class(cls)} is not positive")
            if cls.a != 0:
                raise InvalidDecomposition(f"{format_class(cls)} is not fiber-type")
            if adjunction_genus(cls, g) != 0:
                raise InvalidDecomposition(f"{format_class(cls)} has genus {adjunction_genus(cls, g)}")
            if square(cls) >= 0:
                raise InvalidDecomposition(f"{format_class(cls)} has non-negative square")
            acc = acc + mult * cls
        if acc != self.total:
            raise InvalidDecomposition(f"parts sum to {format_class(acc)}, not {format_class(self.total)}")
        return self

    @property
    def is_trivial(self) -> bool:
        return self.parts == ((self.total, 1),)

    def __str__(self):
        return " + ".join(f"{m}*({format_class(c)})" if m > 1 else f"({format_class(c)})"
                          for c, m in self.parts)


@dataclass(frozen=True)
class Embedded:
    pass


@dataclass(frozen=True)
class Mild:
    S: HomologyClass  # square -2 component
    X: HomologyClass  # exceptional component


@dataclass(frozen=True)
class Bad:
    dec: Decomposition


ExceptionalStatus = Union[Embedded, Mild, Bad]


class DecompositionResult(NamedTuple):
    decompositions: list
    complete: bool


def genus_zero_fiber_b(m) -> int:
    """F-coefficient forced by genus 0 on bF + sum m_i E_i."""
    return 1 - sum(x * (x + 1) // 2 for x in m)


def _fiber_parts(u: AreaVector, n: int, bound: int, cap_b: bool = True):
    out = []
    for m in itertools.product(range(-bound, bound + 1), repeat=n):
        if not any(m):
            continue
        b = genus_zero_fiber_b(m)
        if cap_b and abs(b) > bound:
            continue
        cls = HomologyClass(0, b, m)
        if area(u, cls) > 0:
            out.append(cls)
    return out


DEFAULT_MAX_NODES = 1_000_000


def max_search_nodes() -> int:
    raw = os.environ.get("CONECALC_MAX_NODES")
    return int(raw) if raw else DEFAULT_MAX_NODES


def enumerate_decompositions(E: HomologyClass, u: AreaVector, desc: ManifoldDescriptor,
                             max_parts: int = 4, coeff_bound: int = 2) -> DecompositionResult:
    """All ways to write E as a positive combination of genus-0, negative
    square, fiber-type classes of positive u-area.

    Completeness: for 0 < c_i < 1 a positive-area genus-0 fiber class has
    every m_i in {-1, 0, 1} (each term m(m+1)/2 - m c_i is >= 0 and >= 1 once
    |m| >= 2 outside that range), so the window is exhaustive iff it contains
    all such classes.  Distinct parts have distinct areas to pay for, which
    caps how many of them fit under area(E).
    """
    if not is_exceptional_class(E, desc.g):
        raise InvalidDecomposition(f"{format_class(E)} is not exceptional")
    if max_parts < 1 or coeff_bound < 1:
        raise ValueError("bounds must be >= 1")
    _require_normalized(u)
    require_in_cone(u, desc)
    n = desc.n
    cands = sorted(_fiber_parts(u, n, coeff_bound), key=HomologyClass.sort_key)

    universe = _fiber_parts(u, n, 1, cap_b=False)
    window_ok = all(abs(c.b) <= coeff_bound for c in universe)
    # distinct parts each use up their own area at least once
    most, budget = 0, area(u, E)
    for a in sorted(area(u, c) for c in universe):
        if a > budget:
            break
        budget -= a
        most += 1
    parts_ok = max_parts >= most

    # integer bookkeeping: vectors (b, m_1..m_n) and areas scaled by a common denominator
    scale = math.lcm(u.f.denominator, *(x.denominator for x in u.c))
    vecs = [(c.b,) + c.m for c in cands]
    areas = [int(area(u, c) * scale) for c in cands]

    budget_nodes = max_search_nodes()
    visited = [0]

    @lru_cache(maxsize=None)
    def solve(j, rest, rest_area, slots):
        """Tails ((index, mult), ...) using cands[j:] with at most ``slots`` parts."""
        visited[0] += 1
        if visited[0] > budget_nodes:
            raise BoundTooLarge(f"decomposition search exceeds CONECALC_MAX_NODES={budget_nodes}; "
                                f"lower --max-parts")
        if not any(rest):
            return ((),)
        if j == len(cands) or slots == 0 or rest_area <= 0:
            return ()
        if slots == 1:
            out = []
            for k in range(j, len(cands)):
                r, rem = divmod(rest_area, areas[k])
                if rem == 0 and r > 0 and all(r * x == y for x, y in zip(vecs[k], rest)):
                    out.append(((k, r),))
            return tuple(out)
        out = []
        a, v = areas[j], vecs[j]
        for r in range(rest_area // a, 0, -1):
            nxt = tuple(y - r * x for x, y in zip(v, rest))
            out.extend(((j, r),) + tail for tail in solve(j + 1, nxt, rest_area - r * a, slots - 1))
        out.extend(solve(j + 1, rest, rest_area, slots))
        return tuple(out)

    found = [tuple((cands[k], r) for k, r in tail)
             for tail in solve(0, (E.b,) + E.m, int(area(u, E) * scale), max_parts)]
    decs = [Decomposition(E, parts).validate(desc.g) for parts in found]
    decs.sort(key=lambda d: (len(d.parts), [(c.sort_key(), m) for c, m in d.parts]))
    return DecompositionResult(decs, window_ok and parts_ok)


class CoverPairing(NamedTuple):
    value: Fraction
    forces_deep: bool  # positive integer: the simple class has index < -2


def cover_pairing(c_prime: HomologyClass, m: int) -> CoverPairing:
    """K.C' forced by genus 0 on an m-fold cover class m*C': -(2 + m^2 C'^2)/m."""
    v = Fraction(-(2 + m * m * square(c_prime)), m)
    return CoverPairing(v, v > 0 and v.denominator == 1)


def classify_decomposition(dec: Decomposition, g: int) -> ExceptionalStatus:
    dec.validate(g)
    if dec.is_trivial:
        return Embedded()
    if len(dec.parts) == 2 and all(m == 1 for _, m in dec.parts):
        by_sq = {square(c): c for c, _ in dec.parts}
        if set(by_sq) == {-2, -1}:
            S, X = by_sq[-2], by_sq[-1]
            if pair(X, dec.total) == 0:
                assert S + X == dec.total and pair(S, X) == 1
                return Mild(S, X)
    return Bad(dec)


def bad_codim_witness(dec: Decomposition, g: int) -> int:
    """Conservative codimension carried by a bad decomposition: codim of each
    component with square <= -2, or of the deep simple class a multiple cover
    forces, whichever is larger."""
    total = 0
    for cls, m in dec.parts:
        c = codim(cls, g) if square(cls) <= -2 else 0
        if m > 1:
            cp = cover_pairing(cls, m)
            if cp.forces_deep:
                c = max(c, 2 + 2 * int(cp.value))
        total += c
    return total


def admissible_codim(classes, g: int) -> int:
    classes = list(classes)
    for A in classes:
        if codim(A, g) <= 0:
            raise NotAdmissible(f"{format_class(A)} has codim {codim(A, g)} <= 0", (A,))
    for A, C in itertools.combinations(classes, 2):
        if pair(A, C) < 0:
            raise NotAdmissible(f"{format_class(A)} . {format_class(C)} = {pair(A, C)} < 0", (A, C))
    return sum(codim(A, g) for A in classes)


# profiles -------------------------------------------------------------------

@dataclass(frozen=True)
class JProfile:
    exc: dict  # exceptional class -> status
    sections: tuple = ()

    def __hash__(self):
        return hash((tuple(sorted(self.exc.items(), key=lambda kv: kv[0].sort_key())), self.sections))


TOP, COD2_MILD, COD2_SECTION, HIGH = "top", "cod2-mild", "cod2-section", "high"


@dataclass(frozen=True)
class StratumLabel:
    kind: str
    codim_lower_bound: int
    witness: HomologyClass | None = None


def _status_classes(total: HomologyClass, st) -> list:
    if isinstance(st, Mild):
        if st.S + st.X != total:
            raise InconsistentProfile(f"mild parts do not sum to {format_class(total)}")
        return [st.S, st.X]
    if isinstance(st, Bad):
        if st.dec.total != total:
            raise InconsistentProfile(f"bad decomposition is of {format_class(st.dec.total)}, "
                                      f"not {format_class(total)}")
        return [c for c, _ in st.dec.parts]
    return [total]


def classify_profile(p: JProfile, u: AreaVector, desc: ManifoldDescriptor) -> StratumLabel:
    """Place a profile in the open stratum, a codimension-2 stratum or the rest."""
    g = desc.g
    require_in_cone(u, desc)
    keys = set(exceptional_set(desc))
    if set(p.exc) != keys:
        missing = sorted(format_class(k) for k in keys - set(p.exc))
        extra = sorted(format_class(k) for k in set(p.exc) - keys)
        raise InconsistentProfile(f"profile keys differ from the exceptional set "
                                  f"(missing {missing}, unexpected {extra})")
    for E, st in p.exc.items():
        if isinstance(st, Mild):
            try:
                from .inflation import check_mild_pair
                check_mild_pair(u, st.S, st.X, g)
            except Exception as exc:
                raise InconsistentProfile(f"mild status of {format_class(E)}: {exc}") from None
        if isinstance(st, Bad):
            try:
                st.dec.validate(g)
            except InvalidDecomposition as exc:
                raise InconsistentProfile(f"bad status of {format_class(E)}: {exc}") from None
        for cls in _status_classes(E, st):
            if area(u, cls) <= 0:
                raise InconsistentProfile(f"{format_class(cls)} has area {area(u, cls)} <= 0")
    for A in p.sections:
        if A.a != 1 or any(x not in (0, -1) for x in A.m):
            raise InconsistentProfile(f"{format_class(A)} is not of the form B + kF - sum E_i")
        if area(u, A) <= 0:
            raise InconsistentProfile(f"{format_class(A)} has area {area(u, A)} <= 0")

    mild = [(E, st) for E, st in p.exc.items() if isinstance(st, Mild)]
    bad = [(E, st) for E, st in p.exc.items() if isinstance(st, Bad)]
    deep = sorted((A for A in p.sections if riemann_index(A, g) <= -2), key=HomologyClass.sort_key)
    index2 = [A for A in deep if riemann_index(A, g) == -2]

    if not mild and not bad and not deep:
        return StratumLabel(TOP, 0)
    if len(mild) == 1 and not bad and not deep:
        return StratumLabel(COD2_MILD, 2, mild[0][0])
    if not mild and not bad and len(deep) == 1 and len(index2) == 1:
        return StratumLabel(COD2_SECTION, 2, deep[0])
    bound = 2 * len(mild) + sum(codim(A, g) for A in deep)
    bound += sum(bad_codim_witness(st.dec, g) for _, st in bad)
    return StratumLabel(HIGH, max(4, bound))


def profile_from_json(data: dict, desc: ManifoldDescriptor) -> JProfile:
    """Profile JSON: {"exc": {"E1": "embedded" | {"mild": {"S":..,"X":..}} | {"bad": [parts]}},
    "sections": [class, ...]}.  A bad part is a class string or [class, mult]."""
    from .homlattice import parse_class

    n = desc.n
    exc = {}
    for key, val in data.get("exc", {}).items():
        E = parse_class(key, n)
        if val == "embedded":
            exc[E] = Embedded()
        elif isinstance(val, dict) and "mild" in val:
            exc[E] = Mild(parse_class(val["mild"]["S"], n), parse_class(val["mild"]["X"], n))
        elif isinstance(val, dict) and "bad" in val:
            parts = []
            for item in val["bad"]:
                if isinstance(item, str):
                    parts.append((parse_class(item, n), 1))
                else:
                    parts.append((parse_class(item[0], n), int(item[1])))
            exc[E] = Bad(Decomposition(E, tuple(parts)))
        else:
            raise InconsistentProfile(f"unrecognised status for {key}: {val!r}")
    sections = tuple(parse_class(s, n) for s in data.get("sections", []))
    return JProfile(exc, sections)


def default_profile(desc: ManifoldDescriptor) -> JProfile:
    return JProfile({E: Embedded() for E in exceptional_set(desc)})

