"""Area vectors, the symplectic cone, chamber signatures and wall scans.

An area vector ``u = (mu, f, c_1..c_n)`` records the areas of B, F, E_1..E_n.
Chambers are told apart by the finite set of section classes
``B + kF - sum_{i in I} E_i`` of positive codimension and positive area.
"""

from __future__ import annotations

import itertools
import math
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (BadSlice, BoundTooLarge, DegenerateSegment, DimensionMismatch,
                     NonpositiveArea, NotInCone, NotNormalized, ParseError,
                     UnsupportedGenus)
from .homlattice import (E, F, HomologyClass, ManifoldDescriptor, codim,
                         format_class, reduction_classes, section_class)

DEFAULT_MAX_SUBSETS = 1 << 16


@dataclass(frozen=True)
class AreaVector:
    mu: Fraction
    f: Fraction
    c: tuple

    def __post_init__(self):
        object.__setattr__(self, "mu", Fraction(self.mu))
        object.__setattr__(self, "f", Fraction(self.f))
        object.__setattr__(self, "c", tuple(Fraction(x) for x in self.c))
        if self.f <= 0:
            raise NonpositiveArea(f"fiber area must be positive, got f={self.f}")

    @classmethod
    def normalized(cls, mu, c):
        return cls(mu, 1, c)

    @property
    def n(self) -> int:
        return len(self.c)

    @property
    def is_normalized(self) -> bool:
        return self.f == 1

    def __str__(self):
        return format_vector(self)


def area(u: AreaVector, A: HomologyClass) -> Fraction:
    if A.n != u.n:
        raise DimensionMismatch(f"class has n={A.n} but area vector has n={u.n}")
    return A.a * u.mu + A.b * u.f + sum(x * y for x, y in zip(A.m, u.c))


def pd_class(u: AreaVector) -> HomologyClass:
    """The rational class P with P.X = area(X) for every X."""
    return HomologyClass(u.f, u.mu, tuple(-x for x in u.c))


def vector_square(u: AreaVector) -> Fraction:
    """u.u = 2 mu f - sum c_i^2."""
    return 2 * u.mu * u.f - sum(x * x for x in u.c)


def _require_normalized(u: AreaVector):
    if not u.is_normalized:
        raise NotNormalized(f"expected f = 1, got f = {u.f}")


def _require_irrational_base(desc: ManifoldDescriptor):
    if desc.g < 1:
        raise UnsupportedGenus("g = 0 has an infinite exceptional set; only g >= 1 is supported")


def max_subsets() -> int:
    raw = os.environ.get("CONECALC_MAX_SUBSETS")
    return int(raw) if raw else DEFAULT_MAX_SUBSETS


def subsets(n: int):
    """All subsets of {1..n} in lexicographic order of their sorted tuples."""
    if 2 ** n > max_subsets():
        raise BoundTooLarge(f"2^{n} subsets exceeds CONECALC_MAX_SUBSETS={max_subsets()}")
    out = [()]
    for r in range(1, n + 1):
        out.extend(itertools.combinations(range(1, n + 1), r))
    return sorted(out)


def max_section_k(size: int, g: int) -> int:
    """Largest k with codim(B + kF - sum_{|I|=size} E_i) > 0, i.e. 2k < size + g - 1."""
    return (size + g - 2) // 2


# cone membership -----------------------------------------------------------

def exceptional_set(desc: ManifoldDescriptor) -> tuple:
    """E_1..E_n followed by F-E_1..F-E_n (irrational ruled surfaces only)."""
    _require_irrational_base(desc)
    n = desc.n
    return tuple(E(i, n) for i in range(1, n + 1)) + tuple(F(n) - E(i, n) for i in range(1, n + 1))


@dataclass(frozen=True)
class ConeMembership:
    status: str  # inside | boundary | outside
    violations: tuple = ()  # (label, value) with value <= 0

    @property
    def inside(self) -> bool:
        return self.status == "inside"


def cone_contains(u: AreaVector, desc: ManifoldDescriptor) -> ConeMembership:
    _require_irrational_base(desc)
    if u.n != desc.n:
        raise DimensionMismatch(f"area vector has n={u.n}, manifold has n={desc.n}")
    checks = [("u^2", vector_square(u))]
    checks += [(format_class(X), area(u, X)) for X in exceptional_set(desc)]
    bad = tuple((label, v) for label, v in checks if v <= 0)
    if any(v < 0 for _, v in bad):
        status = "outside"
    elif bad:
        status = "boundary"
    else:
        status = "inside"
    return ConeMembership(status, bad)


def require_in_cone(u: AreaVector, desc: ManifoldDescriptor):
    report = cone_contains(u, desc)
    if not report.inside:
        detail = ", ".join(f"{k}={v}" for k, v in report.violations)
        raise NotInCone(f"{format_vector(u)} is {report.status} the cone ({detail})")


@dataclass(frozen=True)
class ReducedReport:
    reduced: bool
    witnesses: tuple = ()
    on_reduction_wall: bool = False

    def __bool__(self):
        return self.reduced


def is_reduced(u: AreaVector) -> ReducedReport:
    """mu > 0, 0 < c_i < 1, c decreasing and c_1 + c_2 <= 1."""
    _require_normalized(u)
    why = []
    if u.mu <= 0:
        why.append(f"mu = {u.mu} <= 0")
    for i, x in enumerate(u.c, 1):
        if not 0 < x < 1:
            why.append(f"c{i} = {x} not in (0, 1)")
    for i in range(1, u.n):
        if u.c[i - 1] < u.c[i]:
            why.append(f"c{i} < c{i + 1}")
    on_wall = False
    if u.n >= 2:
        s = u.c[0] + u.c[1]
        if s > 1:
            why.append(f"c1+c2 = {s} > 1")
        on_wall = s == 1 or any(u.c[i - 1] == u.c[i] for i in range(1, u.n))
    return ReducedReport(not why, tuple(why), on_wall)


# chamber signatures ----------------------------------------------------------

@dataclass(frozen=True)
class ChamberSignature:
    classes: tuple = ()
    on_wall: tuple = ()  # section classes of positive codim with area exactly 0

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __contains__(self, A):
        return A in self.classes


def _sections_in_window(u: AreaVector, desc: ManifoldDescriptor, lo_open: bool):
    """Yield (k, I, class, area) for positive-codim section classes with
    area > 0 (lo_open) or area >= 0."""
    for I in subsets(desc.n):
        h = sum(u.c[i - 1] for i in I) - u.mu
        kmin = math.floor(h) + 1 if lo_open else math.ceil(h)
        for k in range(kmin, max_section_k(len(I), desc.g) + 1):
            yield k, I, section_class(k, I, desc.n), u.mu + k - sum(u.c[i - 1] for i in I)


def section_candidates(u: AreaVector, desc: ManifoldDescriptor) -> ChamberSignature:
    _require_normalized(u)
    require_in_cone(u, desc)
    pos, zero = [], []
    for k, I, A, a in _sections_in_window(u, desc, lo_open=False):
        (pos if a > 0 else zero).append(((k, I), A))
    pos.sort(key=lambda t: t[0])
    zero.sort(key=lambda t: t[0])
    return ChamberSignature(tuple(A for _, A in pos), tuple(A for _, A in zero))


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def same_chamber(u: AreaVector, v: AreaVector, desc: ManifoldDescriptor) -> bool:
    if section_candidates(u, desc).classes != section_candidates(v, desc).classes:
        return False
    return all(_sign(area(u, D)) == _sign(area(v, D)) for D in reduction_classes(desc.n))


def chamber_interval(u: AreaVector, desc: ManifoldDescriptor):
    """The half-open mu-interval (lo, hi] around u on which the signature is constant.

    ``lo`` is the largest interior wall (or the cone boundary u^2 = 0) below
    mu; ``hi`` is the smallest interior wall at or above mu.
    """
    _require_normalized(u)
    require_in_cone(u, desc)
    lo = sum(x * x for x in u.c) / 2  # u^2 = 0
    hi = None
    for I in subsets(desc.n):
        s = sum(u.c[i - 1] for i in I)
        kmax = max_section_k(len(I), desc.g)
        k_below = math.floor(s - u.mu) + 1  # walls s - k < mu
        if k_below <= kmax:
            lo = max(lo, s - k_below)
        k_above = min(kmax, math.floor(s - u.mu))  # walls s - k >= mu
        w = s - k_above
        hi = w if hi is None else min(hi, w)
    return lo, hi


def fiber_negative_classes(u: AreaVector, desc: ManifoldDescriptor, bound: int = 3) -> tuple:
    """Diagnostic: fiber-type classes bF + sum m_i E_i with positive codim and
    positive area, coefficients bounded by ``bound``.  Not part of the chamber ID."""
    out = []
    rng = range(-bound, bound + 1)
    for b in rng:
        for m in itertools.product(rng, repeat=desc.n):
            A = HomologyClass(0, b, m)
            if codim(A, desc.g) > 0 and area(u, A) > 0:
                out.append(A)
    return tuple(sorted(out, key=HomologyClass.sort_key))


# walls along segments ------------------------------------------------------

KIND_ORDER = {"interior": 0, "extremal": 1, "reduction": 2}


@dataclass(frozen=True)
class WallCrossing:
    parameter: Fraction
    wall_class: HomologyClass
    kind: str


def _root(a0: Fraction, a1: Fraction):
    """Root s of (1-s)*a0 + s*a1, or None if the function is constant."""
    if a0 == a1:
        return None
    return a0 / (a0 - a1)


def segment_walls(u0: AreaVector, u1: AreaVector, desc: ManifoldDescriptor,
                  include_end: bool = False) -> list:
    """Exact parameters s in (0, 1) (or (0, 1] with ``include_end``) where a
    wall class has zero area on u(s) = (1-s) u0 + s u1.

    Classes whose area vanishes identically on the segment are not crossings
    and are skipped.
    """
    if u0.n != u1.n or u0.n != desc.n:
        raise DimensionMismatch("segment endpoints and manifold disagree on n")
    _require_normalized(u0)
    _require_normalized(u1)
    if u0 == u1:
        raise DegenerateSegment("segment endpoints coincide")

    def keep(s):
        return s is not None and 0 < s and (s < 1 or (include_end and s == 1))

    out = {}

    def add(A, kind):
        s = _root(area(u0, A), area(u1, A))
        if keep(s):
            out[(s, A)] = WallCrossing(s, A, kind)

    n = desc.n
    for I in subsets(n):
        h0 = sum(u0.c[i - 1] for i in I) - u0.mu
        h1 = sum(u1.c[i - 1] for i in I) - u1.mu
        kmax = max_section_k(len(I), desc.g)
        for k in range(math.ceil(min(h0, h1)), min(kmax, math.floor(max(h0, h1))) + 1):
            add(section_class(k, I, n), "interior")
    for X in exceptional_set(desc):
        add(X, "extremal")
    for D in reduction_classes(n):
        add(D, "reduction")
    return sorted(out.values(),
                  key=lambda w: (w.parameter, KIND_ORDER[w.kind], w.wall_class.sort_key()))


def point_on_segment(u0: AreaVector, u1: AreaVector, s: Fraction) -> AreaVector:
    return AreaVector((1 - s) * u0.mu + s * u1.mu, (1 - s) * u0.f + s * u1.f,
                      tuple((1 - s) * x + s * y for x, y in zip(u0.c, u1.c)))


def ray_walls(u0: AreaVector, direction: tuple, smax: Fraction, desc: ManifoldDescriptor) -> list:
    """Walls on u0 + s*direction for s in (0, smax]; ``direction`` is (dmu, dc_1..dc_n).

    Parameters are reported in ray units (not rescaled to [0, 1])."""
    smax = Fraction(smax)
    u1 = AreaVector(u0.mu + smax * direction[0], 1,
                    tuple(x + smax * d for x, d in zip(u0.c, direction[1:])))
    return [WallCrossing(w.parameter * smax, w.wall_class, w.kind)
            for w in segment_walls(u0, u1, desc, include_end=True)]


# planar slices -------------------------------------------------------------

@dataclass(frozen=True)
class WallLine:
    """Line coeffs[0]*x + coeffs[1]*y + const = 0 in the two free coordinates.

    ``full`` holds the unrestricted equation as coefficients over
    (mu, c_1..c_n) plus the constant term, i.e. the area of ``wall_class``.
    """

    wall_class: HomologyClass
    kind: str
    coeffs: tuple
    const: Fraction
    full: tuple


@dataclass(frozen=True)
class SliceArrangement:
    desc: ManifoldDescriptor
    free: tuple  # names of the two free coordinates
    fixed: dict = field(hash=False)
    window: dict = field(hash=False)  # name -> (lo, hi)
    lines: tuple = ()


def coordinate_names(n: int) -> tuple:
    return ("mu",) + tuple(f"c{i}" for i in range(1, n + 1))


def _affine(A: HomologyClass, names, fixed):
    """Area of A as (coeff per free coordinate, constant) after substituting fixed values."""
    full = (Fraction(A.a),) + tuple(Fraction(x) for x in A.m)
    coeffs = {}
    const = Fraction(A.b)
    for name, coeff in zip(names, full):
        if name in fixed:
            const += coeff * fixed[name]
        else:
            coeffs[name] = coeff
    return coeffs, const, full + (Fraction(A.b),)


def clip_line(coeffs, const, box):
    """Clip cx*x + cy*y + d = 0 to a closed box ((xlo, xhi), (ylo, yhi)).

    Returns the two endpoints of the intersection segment, or None.
    """
    (cx, cy), d = coeffs, const
    (xlo, xhi), (ylo, yhi) = box
    pts = []
    if cy != 0:
        for x in (xlo, xhi):
            y = -(d + cx * x) / cy
            if ylo <= y <= yhi:
                pts.append((x, y))
    if cx != 0:
        for y in (ylo, yhi):
            x = -(d + cy * y) / cx
            if xlo <= x <= xhi:
                pts.append((x, y))
    pts = sorted(set(pts))
    if not pts:
        return None
    return pts[0], pts[-1]


def _meets_cone(seg, free, fixed, names):
    """Whether the clipped wall segment passes through the open cone interior."""
    (p0, p1) = seg
    if p0 == p1:
        return False

    def coord(name, s):
        if name in fixed:
            return fixed[name]
        j = free.index(name)
        return p0[j] + s * (p1[j] - p0[j])

    lo, hi = Fraction(0), Fraction(1)
    # linear constraints 0 <= c_i <= 1 on s in [0, 1]
    for name in names[1:]:
        a0, a1 = coord(name, Fraction(0)), coord(name, Fraction(1))
        slope = a1 - a0
        for bound, sense in ((0, 1), (1, -1)):
            # need sense*(a0 + slope*s - bound) > 0
            v0, dv = sense * (a0 - bound), sense * slope
            if dv == 0:
                if v0 <= 0:
                    return False
            elif dv > 0:
                lo = max(lo, -v0 / dv)
            else:
                hi = min(hi, -v0 / dv)
    if lo >= hi:
        return False
    # u^2 = 2 mu - sum c^2 is a quadratic in s; maximise it on [lo, hi]
    def q(s):
        return 2 * coord("mu", s) - sum(coord(nm, s) ** 2 for nm in names[1:])
    cands = [lo, hi]
    q0, qh, q1 = q(Fraction(0)), q(Fraction(1, 2)), q(Fraction(1))
    qa = 2 * (q1 - 2 * qh + q0)  # leading coefficient
    qb = q1 - q0 - qa
    if qa < 0:
        s_star = -qb / (2 * qa)
        if lo < s_star < hi:
            cands.append(s_star)
    return max(q(s) for s in cands) > 0


def slice_arrangement(desc: ManifoldDescriptor, fixed: dict, window: dict) -> SliceArrangement:
    """Exact wall lines in a 2-dimensional slice of the normalized cone (f = 1).

    ``fixed`` assigns values to all but two of mu, c1..cn; ``window`` gives a
    closed box (lo, hi) for each of the two free coordinates.  Interior
    (section) walls are kept only where they cross the open cone.
    """
    _require_irrational_base(desc)
    names = coordinate_names(desc.n)
    unknown = set(fixed) - set(names)
    if unknown:
        raise BadSlice(f"unknown coordinates {sorted(unknown)}")
    free = tuple(nm for nm in names if nm not in fixed)
    if len(free) != 2:
        raise BadSlice(f"need exactly 2 free coordinates, got {len(free)}: {free}")
    fixed = {k: Fraction(v) for k, v in fixed.items()}
    try:
        box = tuple((Fraction(window[nm][0]), Fraction(window[nm][1])) for nm in free)
    except KeyError as exc:
        raise BadSlice(f"window is missing bounds for {exc.args[0]}") from None
    if any(lo >= hi for lo, hi in box):
        raise BadSlice("window bounds must satisfy lo < hi")

    lines = []

    def consider(A, kind):
        coeffs, const, full = _affine(A, names, fixed)
        cc = (coeffs[free[0]], coeffs[free[1]])
        if cc == (0, 0):
            return
        seg = clip_line(cc, const, box)
        if seg is None:
            return
        if kind == "interior" and not _meets_cone(seg, free, fixed, names):
            return
        lines.append(WallLine(A, kind, cc, const, full))

    for I in subsets(desc.n):
        h = HomologyClass(-1, 0, tuple(1 if i in I else 0 for i in range(1, desc.n + 1)))
        coeffs, const, _ = _affine(h, names, fixed)
        vals = [coeffs[free[0]] * x + coeffs[free[1]] * y + const
                for x in box[0] for y in box[1]]
        kmax = max_section_k(len(I), desc.g)
        for k in range(math.ceil(min(vals)), min(kmax, math.floor(max(vals))) + 1):
            consider(section_class(k, I, desc.n), "interior")
    for X in exceptional_set(desc):
        consider(X, "extremal")
    for D in reduction_classes(desc.n):
        consider(D, "reduction")
    return SliceArrangement(desc, free, fixed, dict(zip(free, box)), tuple(lines))


# text form -------------------------------------------------------------------

_RAT = r"-?\d+(?:/\d+)?"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not re.fullmatch(_RAT, text):
        raise ParseError(f"not an exact rational: {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def parse_vector(text: str) -> AreaVector:
    """Parse ``mu=<rat> [f=<rat>] c=<rat>,<rat>,...`` (f defaults to 1)."""
    fields = {}
    for pos, item in ((m.start(), m.group()) for m in re.finditer(r"\S+", text)):
        key, eq, value = item.partition("=")
        if not eq or key not in ("mu", "f", "c"):
            raise ParseError(f"expected mu=, f= or c=, got {item!r}", pos, text)
        if key in fields:
            raise ParseError(f"duplicate field {key!r}", pos, text)
        fields[key] = value
    if "mu" not in fields:
        raise ParseError("missing mu=", None, text)
    c = fields.get("c", "")
    cs = tuple(parse_rational(x) for x in c.split(",")) if c else ()
    return AreaVector(parse_rational(fields["mu"]), parse_rational(fields.get("f", "1")), cs)


def format_vector(u: AreaVector) -> str:
    return f"mu={u.mu} f={u.f} c=" + ",".join(str(x) for x in u.c)
