"""Univariate polynomial factorization over the supported tower levels.

Strategies, by coefficient level:

* finite fields (any tower over GF(p)): squarefree decomposition, then
  distinct-degree splitting, then randomized equal-degree splitting with a
  deterministically seeded generator;
* the rationals: rational-root extraction plus reconstruction from a
  factorization modulo a good prime (Hensel lifting with a Mignotte-style
  coefficient bound), supported up to degree 24;
* number-field levels over the rationals: reduction to the level below by
  norm polynomials (resultants), within a bounded norm degree;
* function-field levels: only polynomials with parameter-free coefficients,
  by delegating to the constant tower.

Anything outside those ranges raises UnsupportedLevel rather than guessing.
All returned factors are monic; multiplying them (with multiplicities and
the original leading coefficient) reproduces the input exactly.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from fractions import Fraction
from itertools import combinations

from .errors import ContractViolation, SplittingTooLarge, UnsupportedLevel
from .exactfield import FieldTower, Level, UniPoly, tower_extend
from .groundfields import (
    GF,
    QQ,
    FunctionField,
    padd,
    pdivmod,
    pgcd,
    pmul,
    ppowmod,
    psub,
    ptrim,
    pxgcd,
)

_QQ_DEGREE_CAP = 24
_NORM_DEGREE_CAP = 24
_SPLITTING_CAP = 12


def stable_seed(f: UniPoly) -> int:
    """Process-independent seed derived from the polynomial's content."""
    payload = json.dumps(
        [f.domain.tower_to_json() if isinstance(f.domain, FieldTower) else 0, f.to_json()],
        sort_keys=True,
    )
    return int.from_bytes(hashlib.sha256(payload.encode()).digest()[:8], "big")


def _random_element(tower: FieldTower, rng: random.Random):
    digits = [rng.randrange(tower.base.p) for _ in range(tower.degree())]
    return tower.unflatten(digits)


# ---------------------------------------------------------------------------
# finite fields
# ---------------------------------------------------------------------------


def _pth_root_poly(f: UniPoly) -> UniPoly:
    """Inverse of x -> x^p on polynomials whose derivative vanishes."""
    D = f.domain
    p = D.base.p
    coeffs = []
    for i in range(0, f.degree + 1, p):
        coeffs.append(D.pth_root(f.coeffs[i]))
    return UniPoly(D, coeffs, f.var)


def squarefree_decomposition(f: UniPoly) -> list:
    """Monic pairwise-coprime squarefree parts with multiplicities."""
    D = f.domain
    if D.char == 0:
        return _yun(f.monic())
    return _sff_char_p(f.monic())


def _sff_char_p(f: UniPoly) -> list:
    D = f.domain
    p = D.base.p
    out = []
    if f.degree == 0:
        return out
    fp = f.derivative()
    if fp.is_zero():
        for g, m in _sff_char_p(_pth_root_poly(f)):
            out.append((g, m * p))
        return out
    c = f.gcd(fp)
    w = (f // c).monic()
    i = 1
    while w.degree > 0:
        y = w.gcd(c)
        z = (w // y).monic()
        if z.degree > 0:
            out.append((z, i))
        i += 1
        w = y
        c = (c // y).monic()
    if c.degree > 0:
        for g, m in _sff_char_p(_pth_root_poly(c)):
            out.append((g, m * p))
    return out


def _yun(f: UniPoly) -> list:
    out = []
    fp = f.derivative()
    a = f.gcd(fp)
    b = (f // a).monic()
    c = fp // a
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = b.gcd(d)
        if a.degree > 0:
            out.append((a.monic(), i))
        b = (b // a).monic()
        c = d // a
        d = c - b.derivative()
        i += 1
    return out


def _ff_ddf(f: UniPoly) -> list:
    """Distinct-degree split of a monic squarefree polynomial: [(product, d)]."""
    D = f.domain
    q = D.order()
    out = []
    x = (D.zero(), D.one())
    h = x
    rest = f
    d = 0
    while rest.degree > 2 * (d + 1) - 1 and rest.degree > 0:
        d += 1
        h = ppowmod(D, h, q, rest.coeffs)
        g = UniPoly(D, psub(D, h, x), f.var).gcd(rest)
        if g.degree > 0:
            out.append((g, d))
            rest = (rest // g).monic()
            h = ptrim(D, pdivmod(D, h, rest.coeffs)[1]) if rest.degree > 0 else h
    if rest.degree > 0:
        out.append((rest, rest.degree))
    return out


def _ff_edf(f: UniPoly, d: int, rng: random.Random) -> list:
    """Equal-degree split: f monic squarefree, all factors of degree d."""
    D = f.domain
    if f.degree == d:
        return [f]
    q = D.order()
    p = D.base.p
    while True:
        a = [_random_element(D, rng) for _ in range(f.degree)]
        a = ptrim(D, a)
        if len(a) <= 1:
            continue
        if p == 2:
            # trace map over GF(2): sum of 2^i-th powers of a, reduced mod f
            k = q.bit_length() - 1  # q = 2^k
            acc = a
            term = a
            for _ in range(k * d - 1):
                term = ppowmod(D, term, 2, f.coeffs)
                acc = padd(D, acc, term)
            g = UniPoly(D, acc, f.var).gcd(f)
        else:
            b = ppowmod(D, a, (q**d - 1) // 2, f.coeffs)
            g = UniPoly(D, psub(D, b, (D.one(),)), f.var).gcd(f)
        if 0 < g.degree < f.degree:
            h = (f // g).monic()
            return _ff_edf(g.monic(), d, rng) + _ff_edf(h, d, rng)


def _ff_factor_squarefree(f: UniPoly, rng: random.Random) -> list:
    out = []
    for part, d in _ff_ddf(f):
        out.extend(_ff_edf(part, d, rng))
    return out


def is_irreducible_ff(f: UniPoly) -> bool:
    """Rabin's deterministic test over a finite field."""
    D = f.domain
    n = f.degree
    if n <= 0:
        return False
    if n == 1:
        return True
    q = D.order()
    x = (D.zero(), D.one())
    h = ppowmod(D, x, q**n, f.coeffs)
    if ptrim(D, psub(D, h, x)):
        return False
    for ell in sorted({ell for ell in range(2, n + 1) if n % ell == 0 and _is_prime_small(ell)}):
        h = ppowmod(D, x, q ** (n // ell), f.coeffs)
        g = pgcd(D, psub(D, h, x), f.coeffs)
        if len(g) - 1 != 0:
            return False
    return True


def _is_prime_small(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(n**0.5) + 1):
        if n % d == 0:
            return False
    return True


# ---------------------------------------------------------------------------
# rationals: Zassenhaus with Hensel lifting
# ---------------------------------------------------------------------------


def _zl_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _zl_mul(a, b, m=None):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    if m is not None:
        out = [c % m for c in out]
    return _zl_trim(out)


def _zl_add(a, b, m=None):
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    if m is not None:
        out = [c % m for c in out]
    return _zl_trim(out)


def _zl_sub(a, b, m=None):
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    if m is not None:
        out = [c % m for c in out]
    return _zl_trim(out)


def _zl_divmod_monic(a, b, m=None):
    """Division by a monic divisor, over Z or Z/m."""
    a = list(a)
    if not b or b[-1] != 1:
        raise ContractViolation("divisor must be monic")
    q = [0] * max(0, len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] % m if m is not None else a[i + len(b) - 1]
        if c == 0:
            continue
        q[i] = c
        for j, y in enumerate(b):
            a[i + j] -= c * y
        if m is not None:
            a[i + len(b) - 1] %= m
    if m is not None:
        a = [c % m for c in a]
        q = [c % m for c in q]
    return _zl_trim(q), _zl_trim(a)


def _hensel_step(F, g, h, s, t, m):
    """One quadratic lift: from mod m to mod m^2 (vGathen-Gerhard 15.10)."""
    m2 = m * m
    e = _zl_sub(F, _zl_mul(g, h), m2)
    q, r = _zl_divmod_monic(_zl_mul(s, e, m2), h, m2)
    g1 = _zl_add(_zl_add(g, _zl_mul(t, e, m2), m2), _zl_mul(q, g, m2), m2)
    h1 = _zl_add(h, r, m2)
    b = _zl_sub(_zl_add(_zl_mul(s, g1, m2), _zl_mul(t, h1, m2), m2), [1], m2)
    c, d = _zl_divmod_monic(_zl_mul(s, b, m2), h1, m2)
    s1 = _zl_sub(s, d, m2)
    t1 = _zl_sub(_zl_sub(t, _zl_mul(t, b, m2), m2), _zl_mul(c, g1, m2), m2)
    return g1, h1, s1, t1, m2


def _hensel_pair(F, g, h, p, target):
    """Lift F = g*h from mod p to mod m >= target; returns (g, h, m)."""
    D = FieldTower(GF(p))
    gg = tuple(D.coerce(c) for c in g)
    hh = tuple(D.coerce(c) for c in h)
    one, s, t = pxgcd(D, gg, hh)
    if len(one) != 1:
        raise ContractViolation("modular factors are not coprime")
    s = [int(c) for c in s]
    t = [int(c) for c in t]
    m = p
    while m < target:
        g, h, s, t, m = _hensel_step(F, g, h, s, t, m)
    return g, h, m


def _hensel_multi(F, facs, p, target):
    """Lift a list of monic factors of F (monic) from mod p to mod >= target."""
    if len(facs) == 1:
        m = p
        while m < target:
            m *= m
        return [[c % m for c in _zl_trim(list(F))]], m
    k = len(facs) // 2
    G = [1]
    for f in facs[:k]:
        G = _zl_mul(G, f, p)
    H = [1]
    for f in facs[k:]:
        H = _zl_mul(H, f, p)
    G2, H2, m = _hensel_pair(F, G, H, p, target)
    left, m1 = _hensel_multi(G2, facs[:k], p, target)
    right, m2 = _hensel_multi(H2, facs[k:], p, target)
    return left + right, min(m, m1, m2)


def _symmetric(a, m):
    return [c - m if c > m // 2 else c for c in a]


def _int_factor_monic_squarefree(F: list) -> list:
    """Irreducible monic integer factors of a monic squarefree F."""
    n = len(F) - 1
    if n <= 1:
        return [F] if n == 1 else []
    # good prime: F stays squarefree mod p
    p = None
    cand = 3
    while p is None:
        cand = _next_prime(cand)
        D = FieldTower(GF(cand))
        fb = ptrim(D, tuple(D.coerce(c) for c in F))
        if len(fb) != n + 1:
            continue
        fpb = UniPoly(D, fb).derivative()
        if not fpb.is_zero() and UniPoly(D, fb).gcd(fpb).degree == 0:
            p = cand
    D = FieldTower(GF(p))
    fbar = UniPoly(D, tuple(D.coerce(c) for c in F))
    rng = random.Random(stable_seed(fbar))
    mod_facs = sorted(
        _ff_factor_squarefree(fbar.monic(), rng),
        key=lambda g: g.sort_key(),
    )
    if len(mod_facs) == 1:
        return [F]
    bound = 2**n * (math.isqrt(sum(c * c for c in F)) + 1)
    lifted, m = _hensel_multi(F, [[int(c) for c in g.coeffs] for g in mod_facs], p, 2 * bound + 1)
    # subset recombination against the integer polynomial
    result = []
    remaining = list(range(len(lifted)))
    current = list(F)
    size = 1
    while 2 * size <= len(remaining):
        found = False
        for combo in combinations(remaining, size):
            cand = [1]
            for i in combo:
                cand = _zl_mul(cand, lifted[i], m)
            cand = _symmetric(cand, m)
            if any(abs(c) > bound for c in cand):
                continue
            q, r = _zl_divmod_monic(current, cand)
            if not r:
                result.append(cand)
                current = q
                remaining = [i for i in remaining if i not in combo]
                found = True
                break
        if not found:
            size += 1
    if len(current) > 1:
        result.append(current)
    return result


def _next_prime(n: int) -> int:
    from .groundfields import is_prime

    n += 1
    while not is_prime(n):
        n += 1
    return n


def _qq_factor_squarefree(f: UniPoly) -> list:
    """Monic irreducible factors over QQ of a monic squarefree polynomial."""
    D = f.domain
    if f.degree > _QQ_DEGREE_CAP:
        raise UnsupportedLevel(
            f"factorization over QQ supported up to degree {_QQ_DEGREE_CAP}"
        )
    # clear denominators to a primitive integer polynomial
    den = 1
    for c in f.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in f.coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    # rational roots first, then the monic transform F(x) = L^(n-1) f(x/L)
    factors = []
    ints, roots = _strip_rational_roots(ints)
    for r in roots:
        factors.append(UniPoly(D, (-r, Fraction(1)), f.var))
    n = len(ints) - 1
    if n == 1:
        factors.append(UniPoly(D, (Fraction(ints[0], ints[1]), Fraction(1)), f.var))
    elif n > 1:
        L = ints[-1]
        F = [ints[i] * L ** (n - 1 - i) for i in range(n)] + [1]
        for G in _int_factor_monic_squarefree(F):
            # map back: g(x) = primitive part of G(Lx), then monic over QQ
            back = [c * L**j for j, c in enumerate(G)]
            cont = 0
            for c in back:
                cont = math.gcd(cont, c)
            back = [c // cont for c in back]
            lead = back[-1]
            factors.append(
                UniPoly(D, [Fraction(c, lead) for c in back], f.var)
            )
    return factors


def _strip_rational_roots(ints: list) -> tuple:
    """Divide out rational roots num/den (den | lc, num | constant)."""
    roots = []
    while len(ints) > 2:
        if ints[0] == 0:
            roots.append(Fraction(0))
            ints = ints[1:]
            continue
        a0, an = abs(ints[0]), abs(ints[-1])
        found = None
        for num in sorted(_divisors(a0)):
            for den in sorted(_divisors(an)):
                if math.gcd(num, den) != 1:
                    continue
                for sgn in (1, -1):
                    r = Fraction(sgn * num, den)
                    if _eval_int_poly(ints, r) == 0:
                        found = r
                        break
                if found:
                    break
            if found:
                break
        if found is None:
            break
        roots.append(found)
        # exact quotient by (x - r) via Horner, then re-clear denominators
        quo = []
        acc = Fraction(0)
        for c in reversed(ints):
            acc = acc * found + c
            quo.append(acc)
        quo = list(reversed(quo[:-1]))  # degree n-1 quotient, low first
        scale = 1
        for c in quo:
            scale = scale * c.denominator // math.gcd(scale, c.denominator)
        ints = [int(c * scale) for c in quo]
        g = 0
        for c in ints:
            g = math.gcd(g, c)
        ints = [c // g for c in ints]
        if ints[-1] < 0:
            ints = [-c for c in ints]
    return ints, roots


def _eval_int_poly(ints, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(ints):
        acc = acc * x + c
    return acc


def _divisors(n: int) -> list:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return out


# ---------------------------------------------------------------------------
# number-field levels: Trager's norm reduction
# ---------------------------------------------------------------------------


def _poly_compose_linear(D, coeffs, c):
    """f(x + c) by Horner in the shifted variable."""
    out = ()
    xpc = (c, D.one())
    for a in reversed(coeffs):
        out = ptrim(D, padd(D, pmul(D, out, xpc), (a,)))
    return out


def _resultant_in_x(tower: FieldTower, g_coeffs) -> tuple:
    """Res_y(m(y), G(x, y)) as a polynomial over the sub-tower.

    g_coeffs are tower values (polynomials in the top generator y); the
    resultant eliminates y, leaving a sub-tower polynomial in x.  Computed by
    evaluation at rational nodes and Lagrange interpolation.
    """
    sub = tower.subtower
    m = tower.levels[-1].minpoly
    dm = len(m) - 1
    # G as coefficient grid: G[j] = sub-poly in x multiplying y^j
    degx = len(g_coeffs) - 1
    grid = [[g_coeffs[i][j] for i in range(degx + 1)] for j in range(dm)]
    dgy = dm - 1
    while dgy >= 0 and all(sub.is_zero(c) for c in grid[dgy]):
        dgy -= 1
    if dgy < 0:
        raise ContractViolation("zero polynomial has no resultant")
    target_deg = dm * degx
    nodes, values = [], []
    k = 0
    while len(nodes) <= target_deg:
        x0 = sub.coerce(k if k % 2 == 0 else -(k + 1) // 2)
        k += 1
        gy = [_eval_subpoly(sub, grid[j], x0) for j in range(dgy + 1)]
        if sub.is_zero(gy[-1]):
            continue
        size = dm + dgy
        rows = []
        for i in range(dgy):
            rows.append(
                [sub.zero()] * i + list(reversed(m)) + [sub.zero()] * (size - dm - 1 - i)
            )
        for i in range(dm):
            rows.append(
                [sub.zero()] * i + list(reversed(gy)) + [sub.zero()] * (size - dgy - 1 - i)
            )
        from . import linalg

        nodes.append(x0)
        values.append(linalg.det(sub, rows))
    return _lagrange(sub, nodes, values)


def _eval_subpoly(sub, coeffs, x0):
    acc = sub.zero()
    for c in reversed(coeffs):
        acc = sub.add(sub.mul(acc, x0), c)
    return acc


def _lagrange(D, nodes, values):
    result = ()
    for i, (xi, yi) in enumerate(zip(nodes, values)):
        num = (D.one(),)
        den = D.one()
        for j, xj in enumerate(nodes):
            if i == j:
                continue
            num = pmul(D, num, (D.neg(xj), D.one()))
            den = D.mul(den, D.sub(xi, xj))
        term = tuple(D.mul(c, D.div(yi, den)) for c in num)
        result = padd(D, result, term)
    return ptrim(D, result)


def _nf_factor_squarefree(f: UniPoly) -> list:
    tower = f.domain
    if tower.degree() * f.degree > _NORM_DEGREE_CAP or tower.degree() > _SPLITTING_CAP:
        raise UnsupportedLevel(
            "number-field factorization is bounded by norm degree "
            f"{_NORM_DEGREE_CAP}; got {tower.degree() * f.degree}"
        )
    sub = tower.subtower
    theta = tower.gen()
    for s in range(40):
        shift = tower.mul(tower.coerce(s), theta)
        g = _poly_compose_linear(tower, f.coeffs, tower.neg(shift))
        norm = _resultant_in_x(tower, g)
        normp = UniPoly(sub, norm, f.var)
        if normp.degree > 0 and normp.gcd(normp.derivative()).degree == 0:
            sub_factors = poly_factor(normp.monic())
            out = []
            for nf_i, _ in sub_factors:
                lifted = tuple(tower.embed_sub(c) for c in nf_i.coeffs)
                gi = pgcd(tower, g, lifted)
                if len(gi) - 1 > 0:
                    fi = _poly_compose_linear(tower, gi, shift)
                    out.append(UniPoly(tower, fi, f.var).monic())
            total = sum(p.degree for p in out)
            if total != f.degree:
                raise ContractViolation("norm factorization lost degree")
            return out
    raise UnsupportedLevel("no squarefree norm found within the shift budget")


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def _constant_delegate(f: UniPoly):
    from . import funcfield

    tower_kt = f.domain
    if all(funcfield.is_constant_value(tower_kt, c) for c in f.coeffs):
        tower_k = funcfield.constant_tower(tower_kt)
        coeffs = tuple(funcfield.constant_value(tower_kt, tower_k, c) for c in f.coeffs)
        return tower_k, tower_kt, UniPoly(tower_k, coeffs, f.var)
    return None


def poly_factor(f: UniPoly, rng: random.Random | None = None) -> list:
    """Monic irreducible factors with multiplicities, deterministically sorted.

    The product of the factors times the input's leading coefficient equals
    the input exactly.
    """
    if f.is_zero():
        raise ContractViolation("cannot factor the zero polynomial")
    D = f.domain
    if not isinstance(D, FieldTower):
        raise ContractViolation("polynomials must live over a FieldTower level")
    if f.degree == 0:
        return []
    if rng is None:
        rng = random.Random(stable_seed(f))
    if isinstance(D.base, FunctionField):
        delegated = _constant_delegate(f)
        if delegated is None:
            raise UnsupportedLevel(
                "factorization over a function field requires constant coefficients"
            )
        tower_k, tower_kt, fk = delegated
        from . import funcfield

        out = []
        for g, m in poly_factor(fk, rng):
            lifted = tuple(funcfield.lift_value(tower_k, tower_kt, c) for c in g.coeffs)
            out.append((UniPoly(tower_kt, lifted, f.var), m))
        return out
    fm = f.monic()
    result = []
    if D.is_finite:
        for part, mult in squarefree_decomposition(fm):
            for g in _ff_factor_squarefree(part, rng):
                result.append((g.monic(), mult))
    elif isinstance(D.base, QQ) and D.num_levels == 0:
        for part, mult in squarefree_decomposition(fm):
            for g in _qq_factor_squarefree(part):
                result.append((g, mult))
    elif isinstance(D.base, QQ):
        for part, mult in squarefree_decomposition(fm):
            for g in _nf_factor_squarefree(part):
                result.append((g, mult))
    else:
        raise UnsupportedLevel(f"no factorization strategy over {D!r}")
    result.sort(key=lambda gm: gm[0].sort_key())
    return result


def is_irreducible(f: UniPoly) -> bool:
    D = f.domain
    if f.degree <= 0:
        return False
    if f.degree == 1:
        return True
    if isinstance(D, FieldTower) and D.is_finite:
        return is_irreducible_ff(f.monic())
    if isinstance(D, FieldTower) and isinstance(D.base, FunctionField):
        delegated = _constant_delegate(f)
        if delegated is None:
            raise UnsupportedLevel(
                "irreducibility over a function field requires constant coefficients"
            )
        return is_irreducible(delegated[2])
    facs = poly_factor(f)
    return len(facs) == 1 and facs[0][1] == 1


def roots(f: UniPoly, rng: random.Random | None = None) -> list:
    """Roots in the coefficient level, as (value, multiplicity), sorted."""
    out = []
    for g, m in poly_factor(f, rng):
        if g.degree == 1:
            out.append((f.domain.neg(g.coeffs[0]), m))
    out.sort(key=lambda rm: f.domain.sort_key(rm[0]))
    return out


# ---------------------------------------------------------------------------
# canonical finite fields and splitting towers
# ---------------------------------------------------------------------------

_CANONICAL_CACHE: dict = {}


def canonical_irreducible(p: int, d: int, var: str = "w") -> UniPoly:
    """First monic irreducible of degree d over GF(p) in the counter order."""
    key = ("poly", p, d)
    if key in _CANONICAL_CACHE:
        return _CANONICAL_CACHE[key]
    D = FieldTower(GF(p))
    counter = 0
    while True:
        digits = []
        c = counter
        for _ in range(d):
            digits.append(c % p)
            c //= p
        if c:
            raise ContractViolation(f"no irreducible of degree {d} over GF({p})")
        f = UniPoly(D, tuple(digits) + (1,), var)
        if is_irreducible_ff(f):
            _CANONICAL_CACHE[key] = f
            return f
        counter += 1


def canonical_field(p: int, d: int) -> FieldTower:
    """The canonical degree-d extension of GF(p) (single level)."""
    key = ("field", p, d)
    if key in _CANONICAL_CACHE:
        return _CANONICAL_CACHE[key]
    ground = FieldTower(GF(p))
    if d == 1:
        _CANONICAL_CACHE[key] = ground
        return ground
    # canonical_irreducible already proved irreducibility; skip revalidation
    tower = FieldTower(
        GF(p),
        (Level("w", canonical_irreducible(p, d).coeffs),),
        _validate=False,
    )
    _CANONICAL_CACHE[key] = tower
    return tower


def lift_poly(f: UniPoly, tower: FieldTower) -> UniPoly:
    """Reinterpret a ground-level polynomial over a bigger tower."""
    return UniPoly(tower, tuple(tower.coerce(c) for c in f.coeffs), f.var)


def roots_in_tower(f: UniPoly, tower: FieldTower) -> list:
    """Roots of a ground polynomial inside a given tower, sorted, no mults."""
    lifted = lift_poly(f, tower)
    return [r for r, _ in roots(lifted)]


def splitting_tower_qq(f: UniPoly, cap: int = _SPLITTING_CAP):
    """Minimal-ish tower over QQ where f splits; returns (tower, roots).

    Extends one irreducible factor at a time, deterministically, and raises
    SplittingTooLarge beyond the degree cap.
    """
    tower = FieldTower(QQ())
    level = 1
    while True:
        lifted = lift_poly(f, tower)
        facs = poly_factor(lifted)
        nonlinear = [g for g, _ in facs if g.degree > 1]
        if not nonlinear:
            rts = roots_in_tower(f, tower)
            return tower, rts
        g = min(nonlinear, key=lambda h: h.sort_key())
        if tower.degree() * g.degree > cap:
            raise SplittingTooLarge(
                f"splitting field degree exceeds {cap} over QQ"
            )
        tower = tower_extend(tower, UniPoly(tower, g.coeffs, f"w{level}"))
        level += 1
