"""Cohomological bookkeeping for symplectic inflation.

Inflating along a class Z with parameter t replaces u by u + t*PD(Z), so the
area of every class X grows by t*(Z.X).  When Z.Z < 0 the parameter is
bounded by area(Z)/(-Z.Z).  By default the bound is treated as closed
("formal" inflation); pass ``strict=True`` for the open range.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cone import (AreaVector, _require_normalized, area, is_reduced, max_section_k,
                   require_in_cone, subsets)
from .errors import (InfeasibleCorrection, NonpositiveArea, NotMildPair, NotReduced,
                     ParameterOutOfRange, Unreachable)
from .homlattice import (E, F, HomologyClass, ManifoldDescriptor, adjunction_genus,
                         format_class, is_exceptional_class, pair, section_class, square)


@dataclass(frozen=True)
class InflationStep:
    z: HomologyClass
    t: Fraction


@dataclass(frozen=True)
class InflationPath:
    start: AreaVector
    steps: tuple
    normalized_end: AreaVector


def inflation_bound(u: AreaVector, z: HomologyClass):
    """Upper bound for t, or None when Z.Z >= 0."""
    zz = square(z)
    if zz >= 0:
        return None
    return area(u, z) / -zz


def inflate_once(u: AreaVector, z: HomologyClass, t, strict: bool = False) -> AreaVector:
    t = Fraction(t)
    a = area(u, z)
    if a <= 0:
        raise NonpositiveArea(f"area of {format_class(z)} is {a} <= 0")
    if t < 0:
        raise ParameterOutOfRange(f"negative inflation parameter t={t}", Fraction(0))
    bound = inflation_bound(u, z)
    if bound is not None and (t > bound or (strict and t == bound)):
        rng = f"[0, {bound})" if strict else f"[0, {bound}]"
        raise ParameterOutOfRange(f"t={t} outside {rng} for {format_class(z)}", bound)
    # area'(X) = area(X) + t * z.X on the basis B, F, E_i
    return AreaVector(u.mu + t * z.b, u.f + t * z.a, tuple(x - t * m for x, m in zip(u.c, z.m)))


def normalize_vector(u: AreaVector) -> AreaVector:
    return AreaVector(u.mu / u.f, 1, tuple(x / u.f for x in u.c))


def replay(start: AreaVector, steps, strict: bool = False) -> AreaVector:
    """Apply ``steps`` in order (each checked for validity) and normalize."""
    u = start
    for step in steps:
        u = inflate_once(u, step.z, step.t, strict)
    return normalize_vector(u)


def replay_path(path: InflationPath, strict: bool = False) -> AreaVector:
    return replay(path.start, path.steps, strict)


# section descent -------------------------------------------------------------

def descent_limit(u: AreaVector, k: int, subset) -> Fraction:
    """mu'(t) -> k + sum_{i not in I} c_i as t -> infinity."""
    return k + sum(x for i, x in enumerate(u.c, 1) if i not in subset)


def descent_mu(u: AreaVector, k: int, subset, t) -> Fraction:
    """Closed form (mu + t*k + t*sum_{i not in I} c_i) / (1 + t)."""
    t = Fraction(t)
    return (u.mu + t * descent_limit(u, k, subset)) / (1 + t)


def descent_parameter(u: AreaVector, k: int, subset, target_mu) -> Fraction:
    """The t with descent_mu(u, k, I, t) == target_mu (needs target above the limit)."""
    lim = descent_limit(u, k, subset)
    target_mu = Fraction(target_mu)
    if target_mu <= lim:
        raise Unreachable(f"mu={target_mu} is not above the descent limit {lim}", lim)
    return (u.mu - target_mu) / (target_mu - lim)


def descent_steps(u: AreaVector, k: int, subset, t) -> tuple:
    """Inflate along A = B + kF - sum_I E_i by t, then F - E_i by c_i t for
    i not in I and E_i by (1 - c_i) t for i in I.  After normalizing, every
    c_i is back where it started."""
    t = Fraction(t)
    n = u.n
    steps = [InflationStep(section_class(k, subset, n), t)]
    for i in range(1, n + 1):
        if i not in subset:
            steps.append(InflationStep(F(n) - E(i, n), u.c[i - 1] * t))
    for i in sorted(subset):
        steps.append(InflationStep(E(i, n), (1 - u.c[i - 1]) * t))
    return tuple(s for s in steps if s.t != 0)


def _require_reduced(u: AreaVector):
    rep = is_reduced(u)
    if not rep:
        raise NotReduced(f"{u} is not reduced: " + "; ".join(rep.witnesses))


def section_descent(u: AreaVector, k: int, subset, t, desc: ManifoldDescriptor,
                    strict: bool = False) -> InflationPath:
    _require_normalized(u)
    _require_reduced(u)
    require_in_cone(u, desc)
    subset = tuple(sorted(subset))
    steps = descent_steps(u, k, subset, t)
    if not steps:
        return InflationPath(u, (), u)
    # the section step may legitimately fail; the corrections never should
    cur = inflate_once(u, steps[0].z, steps[0].t, strict)
    for step in steps[1:]:
        try:
            cur = inflate_once(cur, step.z, step.t, strict)
        except (ParameterOutOfRange, NonpositiveArea) as exc:
            raise InfeasibleCorrection(f"correction along {format_class(step.z)} failed: {exc}") from exc
    end = normalize_vector(cur)
    assert end.c == u.c and end.mu == descent_mu(u, k, subset, t)
    return InflationPath(u, steps, end)


# alternating inflation along a mild pair ------------------------------------

def check_mild_pair(u: AreaVector, S: HomologyClass, X: HomologyClass, g: int):
    problems = []
    if square(S) != -2 or adjunction_genus(S, g) != 0:
        problems.append(f"{format_class(S)} is not a square -2 sphere class")
    if not is_exceptional_class(X, g):
        problems.append(f"{format_class(X)} is not exceptional")
    if pair(S, X) != 1:
        problems.append(f"S.X = {pair(S, X)} != 1")
    if pair(X, S + X) != 0:
        problems.append(f"X.(S+X) = {pair(X, S + X)} != 0")
    if problems:
        raise NotMildPair("; ".join(problems))
    for cls in (S, X):
        if area(u, cls) <= 0:
            raise NonpositiveArea(f"area of {format_class(cls)} is {area(u, cls)} <= 0")


def alternating_run(u: AreaVector, S: HomologyClass, X: HomologyClass, rounds: int, g: int,
                    strict: bool = False, eps=0):
    """Vectors u_0..u_rounds and the inflation steps producing them.

    Each round inflates along S by half the current gap area(S) (which
    equalises the areas of E = S + X and X) and then along X by the same
    amount (which restores area(X)).  In strict mode the half-gap is reduced
    by ``eps`` to stay inside the open range.
    """
    check_mild_pair(u, S, X, g)
    eps = Fraction(eps)
    if strict and eps <= 0:
        raise ParameterOutOfRange("strict alternating inflation needs eps > 0", Fraction(0))
    vecs, steps = [u], []
    cur = u
    for _ in range(rounds):
        t = area(cur, S) / 2 - (eps if strict else 0)
        if t <= 0:
            raise ParameterOutOfRange(f"eps={eps} exceeds the half-gap", area(cur, S) / 2)
        cur = inflate_once(cur, S, t, strict)
        cur = inflate_once(cur, X, t, strict)
        steps += [InflationStep(S, t), InflationStep(X, t)]
        vecs.append(cur)
    return vecs, tuple(steps)


def alternating_inflation(u: AreaVector, S: HomologyClass, X: HomologyClass, rounds: int,
                          g: int, strict: bool = False, eps=0) -> list:
    return alternating_run(u, S, X, rounds, g, strict, eps)[0]


# path planning --------------------------------------------------------------

@dataclass(frozen=True)
class InflationHints:
    """Which classes may be inflated.

    ``sections=None`` means the open-stratum assumption: every section class
    B + kF - sum E_i (m in {0,-1}) with non-positive codimension.  A tuple
    replaces that list; ``extra_sections`` are added to whichever list is in
    force.  F is always available.  ``exceptional=None`` means all E_i and
    F - E_i are embedded.
    """

    sections: tuple | None = None
    extra_sections: tuple = ()
    exceptional: tuple | None = None
    mild_pairs: tuple = field(default=())  # (S, X) pairs


def _available_sections(u: AreaVector, target_mu: Fraction, desc: ManifoldDescriptor,
                        hints: InflationHints):
    out = {}
    listed = hints.extra_sections
    if hints.sections is not None:
        listed = tuple(hints.sections) + tuple(listed)
    else:
        for I in subsets(desc.n):
            lim_rest = sum(x for i, x in enumerate(u.c, 1) if i not in I)
            k = max_section_k(len(I), desc.g) + 1  # codim <= 0
            while k + lim_rest < target_mu:
                out[section_class(k, I, desc.n)] = (k, I)
                k += 1
    for A in listed:
        out[A] = (A.b, tuple(i for i, x in enumerate(A.m, 1) if x == -1))
    return sorted(((k, I, A) for A, (k, I) in out.items()), key=lambda t: (t[0], t[1]))


def _best_limit(u: AreaVector, desc: ManifoldDescriptor, hints: InflationHints):
    """Lowest descent limit over every section class the hints allow."""
    lims = [descent_limit(u, A.b, tuple(i for i, x in enumerate(A.m, 1) if x == -1))
            for A in tuple(hints.sections or ()) + tuple(hints.extra_sections)]
    if hints.sections is None:
        lims += [descent_limit(u, max_section_k(len(I), desc.g) + 1, I) for I in subsets(desc.n)]
    return min(lims) if lims else None


def plan_path(u_from: AreaVector, u_to: AreaVector, desc: ManifoldDescriptor,
              hints: InflationHints | None = None, strict: bool = False,
              max_rounds: int = 64) -> InflationPath:
    """Deterministic two-phase planner.

    Phase 1 matches the c-vector: E_i inflation lowers c_i, F - E_i raises it
    (and mu with it); if the needed exceptional class is unavailable, a hinted
    mild pair is run until its round vector matches.  Phase 2 moves mu: up by
    inflating F, down by the first available section class (in (k, I) order)
    whose descent limit lies below the target.
    """
    hints = hints or InflationHints()
    for u in (u_from, u_to):
        _require_normalized(u)
        _require_reduced(u)
        require_in_cone(u, desc)
    n = desc.n
    available_exc = set(hints.exceptional) if hints.exceptional is not None else None

    def exc_ok(cls):
        return available_exc is None or cls in available_exc

    steps = []
    cur = u_from
    pending = []
    for i in range(1, n + 1):
        d = u_to.c[i - 1] - cur.c[i - 1]
        if d == 0:
            continue
        cls = E(i, n) if d < 0 else F(n) - E(i, n)
        if not exc_ok(cls):
            pending.append(i)
            continue
        cur = inflate_once(cur, cls, abs(d), strict)
        steps.append(InflationStep(cls, abs(d)))
    if pending:
        for S, X in hints.mild_pairs:
            try:
                vecs, run = alternating_run(cur, S, X, max_rounds, desc.g, strict=False)
            except (NotMildPair, NonpositiveArea, ParameterOutOfRange):
                continue
            hit = next((r for r, v in enumerate(vecs) if r and v.c == u_to.c), None)
            if hit is not None:
                cur = vecs[hit]
                steps.extend(run[:2 * hit])
                pending = []
                break
    if pending:
        raise Unreachable(f"cannot adjust c at indices {pending} with the available classes")

    target = u_to.mu
    if cur.mu < target:
        steps.append(InflationStep(F(n), target - cur.mu))
    elif cur.mu > target:
        best = None
        for k, subset, A in _available_sections(cur, target, desc, hints):
            lim = descent_limit(cur, k, subset)
            best = lim if best is None else min(best, lim)
            if lim >= target or area(cur, A) <= 0:
                continue
            need = [F(n) - E(i, n) for i in range(1, n + 1) if i not in subset]
            need += [E(i, n) for i in subset]
            if not all(exc_ok(c) for c in need):
                continue
            t = descent_parameter(cur, k, subset, target)
            bound = inflation_bound(cur, A)
            if bound is not None and (t > bound or (strict and t == bound)):
                continue
            steps.extend(descent_steps(cur, k, subset, t))
            break
        else:
            lowest = _best_limit(cur, desc, hints)
            if best is None or (lowest is not None and lowest < best):
                best = lowest
            raise Unreachable(f"no available section class descends to mu={target}"
                              + (f"; descent limits are >= {best}" if best is not None else ""),
                              best)
    path = InflationPath(u_from, tuple(steps), u_to)
    end = replay_path(path, strict)
    if end != u_to:
        raise AssertionError(f"planned path ends at {end}, not {u_to}")
    return path


def hints_from_profile(profile, desc: ManifoldDescriptor) -> InflationHints:
    """Availability implied by a JProfile: embedded exceptional classes,
    asserted sections together with the non-negative-index ones, and the
    mild pairs of mildly degenerated classes."""
    from .strata import Mild, Embedded

    exc = tuple(E_ for E_, st in profile.exc.items() if isinstance(st, Embedded))
    mild = tuple((st.S, st.X) for st in profile.exc.values() if isinstance(st, Mild))
    return InflationHints(extra_sections=tuple(profile.sections), exceptional=exc,
                          mild_pairs=mild)
