"""Binary forms in (s, t) and dense multivariate forms over a tower level.

A binary form of degree e is a tuple of e+1 coefficients, index i holding the
coefficient of s^i t^(e-i); the zero form of degree e is a tuple of zeros.
Multivariate forms are exponent-dictionary based and always homogeneous.
"""

from __future__ import annotations

from .errors import ContractViolation
from .groundfields import pdeg, pdivmod, pgcd, pmul, ptrim


def bf_degree(a) -> int:
    return len(a) - 1


def bf_is_zero(D, a) -> bool:
    return all(D.is_zero(c) for c in a)


def bf_add(D, a, b):
    if len(a) != len(b):
        raise ContractViolation("binary forms of different degrees")
    return tuple(D.add(x, y) for x, y in zip(a, b))


def bf_scale(D, a, s):
    return tuple(D.mul(x, s) for x in a)


def bf_mul(D, a, b):
    out = [D.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if D.is_zero(x):
            continue
        for j, y in enumerate(b):
            if not D.is_zero(y):
                out[i + j] = D.add(out[i + j], D.mul(x, y))
    return tuple(out)


def bf_pow(D, a, k: int):
    out = (D.one(),)
    for _ in range(k):
        out = bf_mul(D, out, a)
    return out


def bf_eval(D, a, s0, t0):
    e = bf_degree(a)
    acc = D.zero()
    spow = D.one()
    tpows = [D.one()]
    for _ in range(e):
        tpows.append(D.mul(tpows[-1], t0))
    for i, c in enumerate(a):
        if not D.is_zero(c):
            acc = D.add(acc, D.mul(c, D.mul(spow, tpows[e - i])))
        spow = D.mul(spow, s0)
    return acc


def _dehom(D, a):
    """(poly in u = s at t=1, multiplicity of the root (1:0))."""
    u = ptrim(D, a)
    return u, len(a) - len(u)


def _rehom(D, u, inf_mult: int):
    return tuple(u) + tuple(D.zero() for _ in range(inf_mult))


def bf_gcd(D, a, b):
    """Monic-ish gcd of two binary forms (leading structure normalized)."""
    if bf_is_zero(D, a):
        return b
    if bf_is_zero(D, b):
        return a
    ua, ia = _dehom(D, a)
    ub, ib = _dehom(D, b)
    g = pgcd(D, ua, ub)
    return _rehom(D, g, min(ia, ib))


def bf_divexact(D, a, b):
    """Exact division of binary forms; raises if b does not divide a."""
    ua, ia = _dehom(D, a)
    ub, ib = _dehom(D, b)
    q, r = pdivmod(D, ua, ub)
    if r or ib > ia:
        raise ContractViolation("binary form division is not exact")
    return _rehom(D, q, ia - ib)


def bf_content_free(D, forms):
    """Divide a tuple of binary forms by their common binary-form gcd."""
    g = None
    for f in forms:
        if bf_is_zero(D, f):
            continue
        g = f if g is None else bf_gcd(D, g, f)
    if g is None:
        raise ContractViolation("all forms are zero")
    if bf_degree(g) == 0:
        return tuple(forms)
    e = bf_degree(forms[0]) - bf_degree(g)
    out = []
    for f in forms:
        if bf_is_zero(D, f):
            out.append(tuple(D.zero() for _ in range(e + 1)))
        else:
            out.append(bf_divexact(D, f, g))
    return tuple(out)


def bf_compose_linear(D, a, l1, l2):
    """a(L1(s,t), L2(s,t)) for linear binary forms L1, L2."""
    e = bf_degree(a)
    out = tuple(D.zero() for _ in range(e + 1))
    l1p = [(D.one(),)]
    l2p = [(D.one(),)]
    for _ in range(e):
        l1p.append(bf_mul(D, l1p[-1], l1))
        l2p.append(bf_mul(D, l2p[-1], l2))
    for i, c in enumerate(a):
        if D.is_zero(c):
            continue
        term = bf_scale(D, bf_mul(D, l1p[i], l2p[e - i]), c)
        out = bf_add(D, out, term)
    return out


def bf_roots(D, a, rng=None):
    """Projective roots of a binary form over its own level, with mults.

    Returns (roots, leftover_degree) where roots are ((s0, t0), mult) with
    normalized coordinates, including (1, 0) at infinity; leftover_degree
    counts the part that does not split over D (degree of nonlinear factors).
    """
    from . import factorize
    from .exactfield import UniPoly

    u, inf_mult = _dehom(D, a)
    out = []
    if inf_mult:
        out.append(((D.one(), D.zero()), inf_mult))
    leftover = 0
    if pdeg(u) >= 1:
        for g, m in factorize.poly_factor(UniPoly(D, u), rng):
            if g.degree == 1:
                out.append(((D.neg(g.coeffs[0]), D.one()), m))
            else:
                leftover += g.degree * m
    return out, leftover


def bf_sort_key(D, a):
    return (len(a), tuple(D.sort_key(c) for c in a))


# ---------------------------------------------------------------------------
# multivariate homogeneous forms
# ---------------------------------------------------------------------------


class MultiForm:
    """Dense-dictionary homogeneous form in nvars variables over a level."""

    __slots__ = ("domain", "nvars", "degree", "coeffs")

    def __init__(self, domain, nvars: int, degree: int, coeffs: dict):
        self.domain = domain
        self.nvars = nvars
        self.degree = degree
        clean = {}
        for exps, val in coeffs.items():
            if len(exps) != nvars or sum(exps) != degree:
                raise ContractViolation(
                    f"monomial {exps} is not degree-{degree} in {nvars} variables"
                )
            if not domain.is_zero(val):
                clean[tuple(exps)] = val
        self.coeffs = clean

    def is_zero(self) -> bool:
        return not self.coeffs

    @staticmethod
    def monomial(domain, nvars, exps, val):
        return MultiForm(domain, nvars, sum(exps), {tuple(exps): val})

    def add(self, other: "MultiForm") -> "MultiForm":
        D = self.domain
        out = dict(self.coeffs)
        for e, v in other.coeffs.items():
            out[e] = D.add(out.get(e, D.zero()), v)
        return MultiForm(D, self.nvars, self.degree, out)

    def scale(self, s) -> "MultiForm":
        D = self.domain
        return MultiForm(
            D, self.nvars, self.degree, {e: D.mul(v, s) for e, v in self.coeffs.items()}
        )

    def mul(self, other: "MultiForm") -> "MultiForm":
        D = self.domain
        out = {}
        for e1, v1 in self.coeffs.items():
            for e2, v2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = D.mul(v1, v2)
                out[e] = D.add(out[e], prod) if e in out else prod
        return MultiForm(D, self.nvars, self.degree + other.degree, out)

    def evaluate(self, coords):
        D = self.domain
        if len(coords) != self.nvars:
            raise ContractViolation("wrong number of coordinates")
        acc = D.zero()
        # cache powers per variable
        maxe = [0] * self.nvars
        for e in self.coeffs:
            for i, ei in enumerate(e):
                maxe[i] = max(maxe[i], ei)
        pows = []
        for i in range(self.nvars):
            ps = [D.one()]
            for _ in range(maxe[i]):
                ps.append(D.mul(ps[-1], coords[i]))
            pows.append(ps)
        for e, v in self.coeffs.items():
            term = v
            for i, ei in enumerate(e):
                if ei:
                    term = D.mul(term, pows[i][ei])
            acc = D.add(acc, term)
        return acc

    def partial(self, i: int) -> "MultiForm":
        D = self.domain
        out = {}
        for e, v in self.coeffs.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = D.mul(v, D.coerce(e[i]))
        return MultiForm(D, self.nvars, max(self.degree - 1, 0), out)

    def pullback(self, binary_forms):
        """Substitute binary forms (one per variable, equal degree e)."""
        D = self.domain
        if len(binary_forms) != self.nvars:
            raise ContractViolation("need one binary form per variable")
        e = bf_degree(binary_forms[0])
        for f in binary_forms:
            if bf_degree(f) != e:
                raise ContractViolation("binary forms of unequal degree")
        # cache powers of each substituted form
        maxe = [0] * self.nvars
        for ex in self.coeffs:
            for i, ei in enumerate(ex):
                maxe[i] = max(maxe[i], ei)
        pows = []
        for i in range(self.nvars):
            ps = [(D.one(),)]
            for _ in range(maxe[i]):
                ps.append(bf_mul(D, ps[-1], binary_forms[i]))
            pows.append(ps)
        total = tuple(D.zero() for _ in range(self.degree * e + 1))
        for ex, v in self.coeffs.items():
            term = (v,)
            for i, ei in enumerate(ex):
                if ei:
                    term = bf_mul(D, term, pows[i][ei])
            if bf_degree(term) != self.degree * e:
                raise ContractViolation("pullback degree mismatch")
            total = bf_add(D, total, term)
        return total

    def map_coefficients(self, fn, new_domain=None) -> "MultiForm":
        D = new_domain or self.domain
        return MultiForm(
            D, self.nvars, self.degree, {e: fn(v) for e, v in self.coeffs.items()}
        )

    def sort_key(self):
        D = self.domain
        return tuple(
            (e, D.sort_key(v)) for e, v in sorted(self.coeffs.items())
        )

    def to_json(self):
        D = self.domain
        return {
            "ambient": self.nvars - 1,
            "degree": self.degree,
            "coeffs": {
                ",".join(str(x) for x in e): D.to_json(v)
                for e, v in sorted(self.coeffs.items())
            },
        }

    @staticmethod
    def from_json(domain, obj) -> "MultiForm":
        nvars = obj["ambient"] + 1
        coeffs = {}
        for key, val in obj["coeffs"].items():
            exps = tuple(int(x) for x in key.split(","))
            coeffs[exps] = domain.from_json(val)
        return MultiForm(domain, nvars, obj["degree"], coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, MultiForm)
            and other.domain == self.domain
            and other.nvars == self.nvars
            and other.degree == self.degree
            and other.coeffs == self.coeffs
        )

    def __repr__(self):
        return f"MultiForm(deg={self.degree}, terms={len(self.coeffs)})"
