import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conecalc.cone import (AreaVector, area, chamber_interval, cone_contains, exceptional_set,
                           fiber_negative_classes, format_vector, is_reduced, parse_vector,
                           pd_class, point_on_segment, ray_walls, same_chamber,
                           section_candidates, segment_walls, slice_arrangement, subsets,
                           vector_square)
from conecalc.errors import (BadSlice, BoundTooLarge, DegenerateSegment, NonpositiveArea,
                             NotInCone, NotNormalized, ParseError, UnsupportedGenus)
from conecalc.homlattice import (E, F, HomologyClass, ManifoldDescriptor, codim, format_class,
                                 pair, parse_class)

import oracles

H = Fr(1, 2)


def vec(mu, *c):
    return AreaVector(Fr(mu), 1, tuple(Fr(x) for x in c))


def names(classes):
    return [format_class(A) for A in classes]


def as_tuple(A):
    return (A.a, A.b) + A.m


@st.composite
def cone_points(draw, max_n=3):
    """Random normalized points strictly inside the cone, 0 < c_i < 1."""
    n = draw(st.integers(0, max_n))
    den = draw(st.integers(2, 12))
    c = tuple(Fr(draw(st.integers(1, den - 1)), den) for _ in range(n))
    mu = Fr(draw(st.integers(1, 40 * den)), den) + sum(x * x for x in c) / 2
    g = draw(st.integers(1, 3))
    return ManifoldDescriptor(g, n), AreaVector(mu, 1, c)


# pd_class ----------------------------------------------------------------------

def test_pd_class_normalized():
    u = vec(3, Fr(1, 3), Fr(1, 4))
    P = pd_class(u)
    assert P == HomologyClass(1, 3, (Fr(-1, 3), Fr(-1, 4)))
    assert vector_square(vec(2, H, H)) == Fr(7, 2)


@settings(max_examples=300, deadline=None)
@given(cone_points())
def test_pd_class_reproduces_areas(point):
    desc, u = point
    u = AreaVector(u.mu * 3, 3, tuple(3 * x for x in u.c))  # unnormalized on purpose
    P = pd_class(u)
    for X in [HomologyClass(1, 0, (0,) * desc.n), F(desc.n)] + [E(i, desc.n) for i in range(1, desc.n + 1)]:
        assert pair(P, X) == area(u, X)
    assert pair(P, P) == vector_square(u)


def test_fiber_area_must_be_positive():
    with pytest.raises(NonpositiveArea):
        AreaVector(1, 0, ())


# cone membership -------------------------------------------------------------------

def test_cone_examples():
    d = ManifoldDescriptor(1, 2)
    assert cone_contains(vec(2, H, H), d).status == "inside"
    rep = cone_contains(vec(1, 1, H), d)
    assert rep.status == "boundary" and ("F - E1", 0) in rep.violations
    rep = cone_contains(vec(Fr(1, 8), H, H), d)
    assert rep.status == "outside" and rep.violations == (("u^2", Fr(-1, 4)),)


def test_cone_rejects_genus_zero():
    with pytest.raises(UnsupportedGenus):
        cone_contains(vec(2, H), ManifoldDescriptor(0, 1))


# reduced ------------------------------------------------------------------------------

def test_reduced_examples():
    assert is_reduced(vec(3, H, H))
    assert is_reduced(vec(3, H, H)).on_reduction_wall
    rep = is_reduced(vec(3, Fr(1, 4), H))
    assert not rep and rep.witnesses == ("c1 < c2",)
    rep = is_reduced(vec(3, Fr(7, 10), Fr(3, 5)))
    assert not rep and rep.witnesses == ("c1+c2 = 13/10 > 1",)


def test_reduced_needs_normalized():
    with pytest.raises(NotNormalized):
        is_reduced(AreaVector(6, 2, (1, 1)))


# exceptional set --------------------------------------------------------------------------

def test_exceptional_examples():
    assert names(exceptional_set(ManifoldDescriptor(2, 2))) == ["E1", "E2", "F - E1", "F - E2"]
    assert exceptional_set(ManifoldDescriptor(1, 0)) == ()
    assert names(exceptional_set(ManifoldDescriptor(3, 1))) == ["E1", "F - E1"]
    with pytest.raises(UnsupportedGenus):
        exceptional_set(ManifoldDescriptor(0, 2))


@pytest.mark.parametrize("g", [1, 2, 3])
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_exceptional_set_matches_brute_force(g, n):
    got = {as_tuple(X) for X in exceptional_set(ManifoldDescriptor(g, n))}
    assert got == oracles.brute_force_exceptional(g, n, bound=4)


# section candidates ----------------------------------------------------------------------

def test_section_candidates_worked_example():
    sig = section_candidates(vec(2, H, H), ManifoldDescriptor(1, 2))
    expected = {"B - F", "B - E1", "B - E2", "B - F - E1", "B - F - E2", "B - E1 - E2"}
    assert set(names(sig)) == expected and len(sig) == 6


def test_section_candidates_empty_window():
    assert len(section_candidates(vec(H), ManifoldDescriptor(1, 0))) == 0


def test_section_candidates_canonical_order():
    sig = section_candidates(vec(2, H, H), ManifoldDescriptor(1, 2))
    assert names(sig) == ["B - F", "B - F - E1", "B - F - E2", "B - E1", "B - E1 - E2", "B - E2"]


def test_section_candidates_requires_cone_point():
    with pytest.raises(NotInCone):
        section_candidates(vec(Fr(1, 8), H, H), ManifoldDescriptor(1, 2))
    with pytest.raises(NotNormalized):
        section_candidates(AreaVector(4, 2, (1, 1)), ManifoldDescriptor(1, 2))


@settings(max_examples=300, deadline=None)
@given(cone_points())
def test_section_candidates_match_brute_force(point):
    desc, u = point
    sig = section_candidates(u, desc)
    for A in sig:
        assert codim(A, desc.g) > 0 and area(u, A) > 0
        assert A.a == 1 and set(A.m) <= {0, -1}
    oracle = oracles.brute_force_sections((u.mu, u.f) + u.c, desc.g, desc.n, range(-60, 10))
    assert {as_tuple(A) for A in sig} == oracle


@settings(max_examples=300, deadline=None)
@given(cone_points(), st.fractions(min_value=Fr(1, 100), max_value=5))
def test_signature_monotone_in_mu(point, eps):
    desc, u = point
    bigger = AreaVector(u.mu + eps, 1, u.c)
    assert set(section_candidates(u, desc)) <= set(section_candidates(bigger, desc))


def test_equal_half_signature_changes_only_at_half_integers():
    desc = ManifoldDescriptor(2, 3)
    for k in range(9, 20):
        lo, hi = Fr(k, 2), Fr(k + 1, 2)
        inside = [lo + (hi - lo) * Fr(j, 7) for j in range(1, 8)]  # ends at hi
        sigs = {section_candidates(vec(m, H, H, H), desc).classes for m in inside}
        assert len(sigs) == 1
        assert chamber_interval(vec(hi, H, H, H), desc) == (lo, hi)


def test_subset_guard(monkeypatch):
    monkeypatch.setenv("CONECALC_MAX_SUBSETS", "4")
    assert len(subsets(2)) == 4
    with pytest.raises(BoundTooLarge):
        subsets(3)


# same chamber ---------------------------------------------------------------------------

def test_same_chamber_examples():
    d = ManifoldDescriptor(2, 2)
    assert same_chamber(vec(Fr(21, 4), H, H), vec(Fr(11, 2), H, H), d)
    assert not same_chamber(vec(5, H, H), vec(Fr(11, 2), H, H), d)
    assert same_chamber(vec(5, H, H), vec(5, H, H), d)


def test_same_chamber_sees_reduction_walls():
    d = ManifoldDescriptor(1, 2)
    assert not same_chamber(vec(7, Fr(2, 5), Fr(1, 5)), vec(7, Fr(1, 5), Fr(2, 5)), d)


def test_same_chamber_is_an_equivalence_on_samples():
    rng = random.Random(7)
    d = ManifoldDescriptor(2, 2)
    pts = [vec(Fr(rng.randint(30, 90), 10), Fr(rng.randint(1, 9), 10), Fr(rng.randint(1, 9), 10))
           for _ in range(40)]
    rel = {(i, j): same_chamber(p, q, d) for i, p in enumerate(pts) for j, q in enumerate(pts)}
    for i in range(len(pts)):
        assert rel[i, i]
        for j in range(len(pts)):
            assert rel[i, j] == rel[j, i]
            for k in range(len(pts)):
                if rel[i, j] and rel[j, k]:
                    assert rel[i, k]


# segment walls ------------------------------------------------------------------------

def test_equal_half_segment_walls():
    d = ManifoldDescriptor(2, 3)
    u0, u1 = vec(4, H, H, H), vec(10, H, H, H)
    open_mus = sorted({point_on_segment(u0, u1, w.parameter).mu for w in segment_walls(u0, u1, d)})
    assert open_mus == [Fr(k, 2) for k in range(9, 20)]
    closed = segment_walls(u0, u1, d, include_end=True)
    assert sorted({point_on_segment(u0, u1, w.parameter).mu for w in closed}) == [Fr(k, 2) for k in range(9, 21)]
    assert {w.kind for w in closed} == {"interior"}


def test_segment_inside_one_chamber_is_empty():
    d = ManifoldDescriptor(2, 3)
    assert segment_walls(vec(Fr(51, 10), H, H, H), vec(Fr(54, 10), H, H, H), d) == []


def test_segment_hitting_reduction_wall():
    d = ManifoldDescriptor(1, 2)
    walls = segment_walls(vec(6, Fr(2, 5), Fr(1, 5)), vec(6, Fr(1, 5), Fr(2, 5)), d)
    assert [(w.parameter, format_class(w.wall_class), w.kind) for w in walls] == [
        (H, "E1 - E2", "reduction")]


def test_segment_errors():
    d = ManifoldDescriptor(1, 1)
    with pytest.raises(DegenerateSegment):
        segment_walls(vec(3, H), vec(3, H), d)


@settings(max_examples=200, deadline=None)
@given(cone_points(), cone_points())
def test_segment_crossings_are_exact_zeros(p, q):
    (d, u0), (_, u1) = p, q
    if u0.n != u1.n or u0 == u1:
        return
    d = ManifoldDescriptor(d.g, u0.n)
    walls = segment_walls(u0, u1, d)
    params = [w.parameter for w in walls]
    assert params == sorted(params)
    for w in walls:
        assert 0 < w.parameter < 1
        assert area(point_on_segment(u0, u1, w.parameter), w.wall_class) == 0


def test_ray_walls_match_segment():
    d = ManifoldDescriptor(2, 3)
    walls = ray_walls(vec(4, H, H, H), (1, 0, 0, 0), 6, d)
    assert sorted({4 + w.parameter for w in walls}) == [Fr(k, 2) for k in range(9, 21)]


# slices ---------------------------------------------------------------------------------

def test_slice_fixed_c2():
    d = ManifoldDescriptor(1, 2)
    arr = slice_arrangement(d, {"c2": H}, {"mu": (1, 4), "c1": (0, 1)})
    assert arr.free == ("mu", "c1")
    got = {(format_class(ln.wall_class), ln.kind): (ln.coeffs, ln.const) for ln in arr.lines}
    assert got[("E1", "extremal")] == ((0, 1), 0)
    assert got[("F - E1", "extremal")] == ((0, -1), 1)
    # mu + k - c1 - [2 in I]/2 = 0 lines
    assert got[("B - F - E1", "interior")] == ((1, -1), -1)
    assert got[("B - F - E1 - E2", "interior")] == ((1, -1), Fr(-3, 2))
    for ln in arr.lines:
        A = ln.wall_class
        assert ln.full == (A.a,) + A.m + (A.b,)


def test_slice_outside_cone_has_no_interior_walls():
    d = ManifoldDescriptor(1, 2)
    arr = slice_arrangement(d, {"c2": H}, {"mu": (-3, -1), "c1": (0, 1)})
    assert arr.lines and all(ln.kind != "interior" for ln in arr.lines)


def test_slice_mu_fixed_has_reduction_line():
    d = ManifoldDescriptor(1, 2)
    arr = slice_arrangement(d, {"mu": 3}, {"c1": (0, 1), "c2": (0, 1)})
    assert ("E1 - E2", "reduction") in {(format_class(ln.wall_class), ln.kind) for ln in arr.lines}


def test_bad_slice():
    d = ManifoldDescriptor(1, 3)
    with pytest.raises(BadSlice):
        slice_arrangement(d, {"c2": H}, {"mu": (1, 4), "c1": (0, 1), "c3": (0, 1)})
    with pytest.raises(BadSlice):
        slice_arrangement(ManifoldDescriptor(1, 2), {"c2": H}, {"mu": (1, 4)})


# diagnostics and text -------------------------------------------------------------------

def test_fiber_negative_diagnostic():
    d = ManifoldDescriptor(1, 2)
    got = names(fiber_negative_classes(vec(3, Fr(3, 4), Fr(1, 4)), d, bound=1))
    assert "E1 - E2" in got
    for text in got:
        A = parse_class(text, 2)
        assert A.a == 0 and codim(A, 1) > 0


def test_vector_text_round_trip():
    u = parse_vector("mu=5 c=1/2,1/3")
    assert u == vec(5, H, Fr(1, 3))
    assert format_vector(u) == "mu=5 f=1 c=1/2,1/3"
    assert parse_vector(format_vector(u)) == u
    assert parse_vector("mu=6 f=2 c=1,1") == AreaVector(6, 2, (1, 1))
    assert parse_vector("mu=1/2").n == 0
    for bad in ["mu=0.5 c=1", "c=1", "mu=1 x=2", "mu=1/0"]:
        with pytest.raises(ParseError):
            parse_vector(bad)
