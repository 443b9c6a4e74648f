"""Field tower, polynomial, and factorization tests with independent oracles."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicpoints import factorize
from cubicpoints.errors import ReducibleDefiningPolynomial
from cubicpoints.exactfield import (
    FieldTower,
    UniPoly,
    frobenius_orbit,
    minimal_polynomial,
    tower_extend,
    trace_form,
)
from cubicpoints.groundfields import GF, QQ
from cubicpoints.linalg import det


def gf_tower(p):
    return FieldTower(GF(p))


def qq_tower():
    return FieldTower(QQ())


# ---------------------------------------------------------------------------
# tower_extend
# ---------------------------------------------------------------------------


def test_extend_rejects_reducible_over_gf5():
    # oracle: exhaustive root search over GF(5) shows T^2+1 = (T+2)(T+3)
    k = gf_tower(5)
    roots = [a for a in range(5) if (a * a + 1) % 5 == 0]
    assert roots == [2, 3]
    with pytest.raises(ReducibleDefiningPolynomial):
        tower_extend(k, UniPoly(k, (1, 0, 1)))


def test_extend_linear_over_qq_gives_degree_one():
    k = qq_tower()
    K = tower_extend(k, UniPoly(k, (Fraction(-1), Fraction(1))))
    assert K.degree() == 1
    # the generator is the root of T - 1, i.e. 1
    assert K.gen() == K.one()


def test_extend_cube_root_of_two_over_qq():
    # oracle: rational-root test; T^3-2 has no root among +-(divisors of 2)
    for r in (1, -1, 2, -2, Fraction(1, 1)):
        assert Fraction(r) ** 3 != 2
    k = qq_tower()
    K = tower_extend(k, UniPoly(k, (Fraction(-2), Fraction(0), Fraction(0), Fraction(1))))
    assert K.degree() == 3
    th = K.gen()
    assert K.pow_(th, 3) == K.coerce(2)


# ---------------------------------------------------------------------------
# poly_factor
# ---------------------------------------------------------------------------


def test_factor_t2_plus_1_over_gf5():
    k = gf_tower(5)
    facs = factorize.poly_factor(UniPoly(k, (1, 0, 1)))
    assert [(g.to_json(), m) for g, m in facs] == [([2, 1], 1), ([3, 1], 1)]


def test_factor_fermat_pullback_poly_over_qq():
    # u^9+u^6+u^3+1; oracle: expand (u+1)(u^2-u+1)(u^2+1)(u^4-u^2+1)
    k = qq_tower()
    one = Fraction(1)
    known = [
        UniPoly(k, (one, one)),
        UniPoly(k, (one, -one, one)),
        UniPoly(k, (one, Fraction(0), one)),
        UniPoly(k, (one, Fraction(0), -one, Fraction(0), one)),
    ]
    prod = UniPoly(k, (one,))
    for g in known:
        prod = prod * g
    coeffs = [Fraction(0)] * 10
    for i in (0, 3, 6, 9):
        coeffs[i] = one
    f = UniPoly(k, coeffs)
    assert prod == f
    facs = factorize.poly_factor(f)
    assert sorted(g.degree for g, _ in facs) == [1, 2, 2, 4]
    assert sorted(g.sort_key() for g, _ in facs) == sorted(g.sort_key() for g in known)


def test_factor_linear_is_trivial():
    k = gf_tower(7)
    facs = factorize.poly_factor(UniPoly(k, (3, 1)))
    assert facs == [(UniPoly(k, (3, 1)), 1)]


def test_refactor_product_reproduces_input():
    k = gf_tower(3)
    f = UniPoly(k, (1, 2, 0, 1, 1, 2, 1))
    facs = factorize.poly_factor(f)
    prod = UniPoly(k, (f.leading(),))
    for g, m in facs:
        for _ in range(m):
            prod = prod * g
    assert prod == f


@settings(max_examples=30, deadline=None)
@given(
    st.integers(min_value=0, max_value=3**5 - 1),
    st.integers(min_value=0, max_value=3**4 - 1),
)
def test_factor_multiply_back_property(code_f, code_g):
    k = gf_tower(3)

    def decode(c, n):
        return [c // 3**i % 3 for i in range(n)] + [1]

    f = UniPoly(k, decode(code_f, 5)) * UniPoly(k, decode(code_g, 4))
    facs = factorize.poly_factor(f)
    prod = UniPoly(k, (f.leading(),))
    for g, m in facs:
        assert g.is_monic()
        for _ in range(m):
            prod = prod * g
    assert prod == f


def _all_monic(k, p, d):
    for code in range(p**d):
        yield UniPoly(k, [code // p**i % p for i in range(d)] + [1])


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_gcd_against_brute_force_divisor_search(p):
    k = gf_tower(p)
    # build pairs with a planted common factor, total degrees <= 6
    c = UniPoly(k, (1, 1))
    f = UniPoly(k, (2 % p, 0, 1)) * c
    g = UniPoly(k, (1, 2 % p, 1)) * c
    h = f.gcd(g)
    assert (f % h).is_zero() and (g % h).is_zero()
    # maximality: no common monic divisor of one degree higher
    for cand in _all_monic(k, p, h.degree + 1):
        assert not ((f % cand).is_zero() and (g % cand).is_zero())


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=5**4 - 1), st.integers(min_value=0, max_value=5**4 - 1))
def test_frobenius_is_additive_and_multiplicative(ca, cb):
    K = factorize.canonical_field(5, 4)
    a = K.unflatten([ca // 5**i % 5 for i in range(4)])
    b = K.unflatten([cb // 5**i % 5 for i in range(4)])
    fa, fb = K.frobenius(a), K.frobenius(b)
    assert K.frobenius(K.add(a, b)) == K.add(fa, fb)
    assert K.frobenius(K.mul(a, b)) == K.mul(fa, fb)


# ---------------------------------------------------------------------------
# trace form
# ---------------------------------------------------------------------------


def test_trace_form_gf7_cubic():
    k = gf_tower(7)
    K = tower_extend(k, UniPoly(k, (5, 0, 0, 1)))  # theta^3 = 2
    gram = trace_form(K)
    # oracle: traces as sums of Frobenius conjugates
    th = K.gen()
    for i in range(3):
        conj_sum = K.zero()
        for c in frobenius_orbit(K, K.pow_(th, i)) if i else [K.one()]:
            conj_sum = K.add(conj_sum, c)
        if i == 0:
            conj_sum = K.coerce(3)
        expected = K.as_ground(conj_sum)
        assert gram[0][i] == expected
    assert gram[0][0] == 3 and gram[0][1] == 0 and gram[0][2] == 0
    assert det(k, gram) != 0


def test_trace_form_degree_one_level():
    k = qq_tower()
    K = tower_extend(k, UniPoly(k, (Fraction(-1), Fraction(1))))
    assert trace_form(K) == [[Fraction(1)]]


@pytest.mark.parametrize("p,d", [(2, 3), (3, 4), (7, 3), (5, 2)])
def test_trace_gram_symmetric_nonsingular(p, d):
    K = factorize.canonical_field(p, d)
    gram = trace_form(K)
    k = gf_tower(p)
    for i in range(d):
        for j in range(d):
            assert gram[i][j] == gram[j][i]
    assert det(k, gram) != 0


# ---------------------------------------------------------------------------
# misc tower behavior
# ---------------------------------------------------------------------------


def test_minimal_polynomial_of_generator():
    K = factorize.canonical_field(3, 4)
    mp = minimal_polynomial(K, K.gen())
    assert mp.coeffs == factorize.canonical_irreducible(3, 4).coeffs


def test_tower_json_roundtrip():
    k = gf_tower(7)
    K = tower_extend(k, UniPoly(k, (5, 0, 0, 1)))
    blob = K.tower_to_json()
    K2 = FieldTower.tower_from_json(blob)
    assert K2 == K
    a = K.unflatten([1, 2, 3])
    assert K2.from_json(K.to_json(a)) == a


def test_element_json_roundtrip_qq():
    k = qq_tower()
    K = tower_extend(k, UniPoly(k, (Fraction(-2), Fraction(0), Fraction(0), Fraction(1))))
    a = K.unflatten([Fraction(1, 2), Fraction(-3), Fraction(7, 5)])
    assert K.from_json(K.to_json(a)) == a


def test_splitting_tower_qq_quadratic():
    k = qq_tower()
    f = UniPoly(k, (Fraction(1), Fraction(0), Fraction(1)))  # T^2 + 1
    T, rts = factorize.splitting_tower_qq(f)
    assert T.degree() == 2 and len(rts) == 2
    lifted = factorize.lift_poly(f, T)
    for r in rts:
        assert T.is_zero(lifted.evaluate(r))
