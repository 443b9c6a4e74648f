"""Cremona involutions and rational-normal-curve interpolation tests."""

import random
from fractions import Fraction

import pytest

from cubicpoints import factorize, linalg
from cubicpoints.cremona_rnc import (
    RationalCurveParam,
    apply_cremona,
    cremona_at,
    line_through_pair,
    line_to_curve,
    param_preimages,
    passes_through,
    rnc_generic_then_specialize,
    rnc_through,
)
from cubicpoints.errors import (
    GenericallyNotLGP,
    IndeterminacyLocus,
    LineMeetsFundamentalLocus,
    NotLGP,
)
from cubicpoints.exactfield import FieldTower
from cubicpoints.groundfields import GF, QQ
from cubicpoints.projgeom import ClosedPoint, ProjPoint, moment_point


def gf(p):
    return FieldTower(GF(p))


def frame_map(p):
    k = gf(p)
    pts = [
        ClosedPoint.rational(k, (1, 0, 0)),
        ClosedPoint.rational(k, (0, 1, 0)),
        ClosedPoint.rational(k, (0, 0, 1)),
    ]
    return k, cremona_at(pts)


def test_standard_frame_gives_coordinate_inversion():
    _, cm = frame_map(7)
    # [x:y:z] -> [yz:xz:xy]
    assert [f.to_json()["coeffs"] for f in cm.forms] == [
        {"0,1,1": 1},
        {"1,0,1": 1},
        {"1,1,0": 1},
    ]


def test_apply_on_fixed_and_generic_points():
    k, cm = frame_map(7)
    assert apply_cremona(cm, ProjPoint(k, (1, 1, 1))) == ProjPoint(k, (1, 1, 1))
    # (1:2:3) -> (6:3:2)
    assert apply_cremona(cm, ProjPoint(k, (1, 2, 3))) == ProjPoint(k, (6, 3, 2))
    assert apply_cremona(cm, ProjPoint(k, (0, 1, 1))) == ProjPoint(k, (1, 0, 0))
    with pytest.raises(IndeterminacyLocus):
        apply_cremona(cm, ProjPoint(k, (1, 0, 0)))


def test_involution_on_seeded_points():
    k, cm = frame_map(11)
    rng = random.Random(7)
    checked = 0
    while checked < 50:
        coords = tuple(rng.randrange(11) for _ in range(3))
        if all(c == 0 for c in coords):
            continue
        pt = ProjPoint(k, coords)
        try:
            image = apply_cremona(cm, pt)
            again = apply_cremona(cm, image)
        except IndeterminacyLocus:
            continue
        assert again == pt
        checked += 1


def test_irreducible_center_descends_to_gf2():
    # degree-3 moment point over GF(2) in P^2: forms must have GF(2) coefficients
    K8 = factorize.canonical_field(2, 3)
    center = moment_point(K8, 2)
    cm = cremona_at(center)
    assert cm.ground == gf(2)
    for f in cm.forms:
        for v in f.coeffs.values():
            assert v in (0, 1)
    # still an involution
    k2 = gf(2)
    pt = ProjPoint(k2, (1, 1, 0))
    img = apply_cremona(cm, pt)
    assert apply_cremona(cm, img) == pt


def test_line_to_curve_conic():
    k, cm = frame_map(7)
    line = RationalCurveParam(k, [(0, 1), (1, 0), (6, 6)])  # (s : t : -s-t)
    conic = line_to_curve(cm, line)
    assert conic.degree == 2
    # image satisfies xy + xz + yz = 0
    for a in range(7):
        x, y, z = conic.evaluate(k.coerce(a), k.one())
        assert (x * y + x * z + y * z) % 7 == 0
    for coords in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]:
        assert passes_through(conic, ClosedPoint.rational(k, coords))


def test_line_through_fundamental_locus_rejected():
    k, cm = frame_map(7)
    # the line through (1:0:0) and (0:1:0) hits two fundamental points
    line = line_through_pair(k, (1, 0, 0), (0, 1, 0))
    with pytest.raises(LineMeetsFundamentalLocus):
        line_to_curve(cm, line)


def test_twisted_cubic_from_p3_frame():
    k = gf(7)
    pts = [
        ClosedPoint.rational(k, (1, 0, 0, 0)),
        ClosedPoint.rational(k, (0, 1, 0, 0)),
        ClosedPoint.rational(k, (0, 0, 1, 0)),
        ClosedPoint.rational(k, (0, 0, 0, 1)),
    ]
    cm = cremona_at(pts)
    line = line_through_pair(k, (1, 1, 2, 3), (0, 1, 1, 1))
    curve = line_to_curve(cm, line)
    assert curve.degree == 3


def _implicit_conic(ground, samples, p=None):
    rows = []
    for x, y, z in samples:
        rows.append(
            [
                ground.mul(x, x),
                ground.mul(x, y),
                ground.mul(x, z),
                ground.mul(y, y),
                ground.mul(y, z),
                ground.mul(z, z),
            ]
        )
    ns = linalg.nullspace(ground, rows)
    assert len(ns) == 1
    v = ns[0]
    for c in v:
        if not ground.is_zero(c):
            inv = ground.inv(c)
            return tuple(ground.mul(x, inv) for x in v)
    raise AssertionError("zero conic")


def test_rnc_through_fixed_gf7_instance():
    k = gf(7)
    pts = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 4)]
    parts = [ClosedPoint.rational(k, c) for c in pts]
    curve = rnc_through(parts)
    assert curve.degree == 2
    samples = [curve.evaluate(k.coerce(a), k.one()) for a in range(5)]
    got = _implicit_conic(k, samples)
    oracle = _implicit_conic(k, [tuple(k.coerce(c) for c in p) for p in pts])
    assert got == oracle
    # the oracle conic is 4xy + xz + 2yz = 0 up to scalar
    assert oracle == (0, 1, 2, 0, 4, 0)


def test_rnc_through_qq_five_points():
    k = FieldTower(QQ())
    pts = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 5)]
    parts = [ClosedPoint.rational(k, [Fraction(c) for c in p]) for p in pts]
    curve = rnc_through(parts)
    assert curve.degree == 2
    params = [(Fraction(a), Fraction(1)) for a in range(5)]
    samples = [curve.evaluate(*u) for u in params]
    got = _implicit_conic(k, samples)
    oracle = _implicit_conic(k, [tuple(k.coerce(c) for c in p) for p in pts])
    assert got == oracle


def test_rnc_through_mixed_parts_in_p3():
    # two rational points plus a degree-4 moment point over GF(5)
    k = gf(5)
    K4 = factorize.canonical_field(5, 4)
    parts = [
        ClosedPoint.rational(k, (1, 0, 0, 0)),
        ClosedPoint.rational(k, (0, 0, 0, 1)),
        moment_point(K4, 3),
    ]
    curve = rnc_through(parts)
    assert curve.degree == 3
    for pt in parts:
        assert passes_through(curve, pt)
    # evaluation hits all six geometric points
    L = K4
    for pt in parts:
        for gp in pt.geometric_points_in(L):
            pres = param_preimages(curve, gp.coords, L)
            assert len(pres) == 1


def test_rnc_through_irreducible_degree_six_in_p3():
    k = gf(7)
    K6 = factorize.canonical_field(7, 6)
    x = moment_point(K6, 3)
    curve = rnc_through(x)
    assert curve.domain == k  # descended to the ground field
    assert curve.degree == 3
    assert passes_through(curve, x)


def test_rnc_uniqueness_across_routes():
    # the moment conic built from an irreducible degree-5 point equals the
    # canonical conic through five rational points of the same conic
    k = gf(7)
    K5 = factorize.canonical_field(7, 5)
    via_point = rnc_through(moment_point(K5, 2))
    onconic = [(1, u, u * u % 7) for u in (0, 1, 2, 3, 4)]
    via_rationals = rnc_through([ClosedPoint.rational(k, c) for c in onconic])
    assert via_point == via_rationals


def test_rnc_through_rejects_collinear():
    k = gf(7)
    pts = [(1, 0, 0), (1, 1, 0), (1, 2, 0), (1, 0, 1), (1, 1, 2)]
    parts = [ClosedPoint.rational(k, c) for c in pts]
    with pytest.raises(NotLGP):
        rnc_through(parts)


def test_generic_specialize_collinear_instance():
    k = gf(7)
    pts = [(1, 0, 0), (1, 1, 0), (1, 2, 0), (1, 0, 1), (1, 1, 2)]
    parts = [ClosedPoint.rational(k, c) for c in pts]
    family, report = rnc_generic_then_specialize(parts)
    assert family.degree == 2
    assert report.total_degree <= 2
    for pt in parts:
        assert any(passes_through(c, pt) for c in report.components)


def test_generic_specialize_on_lgp_input_matches_direct():
    K5 = factorize.canonical_field(7, 5)
    x = moment_point(K5, 2)
    _, report = rnc_generic_then_specialize(x)
    assert report.descended and report.passes_through_all
    assert report.curve == rnc_through(x)


def test_generic_specialize_rejects_companion_equal_to_x():
    k = gf(7)
    pts = [(1, 0, 0), (1, 1, 0), (1, 2, 0), (1, 0, 1), (1, 1, 2)]
    parts = [ClosedPoint.rational(k, c) for c in pts]
    with pytest.raises(GenericallyNotLGP):
        rnc_generic_then_specialize(parts, companions=parts)
