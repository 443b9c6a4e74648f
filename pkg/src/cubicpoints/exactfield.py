"""Towers of exact fields and univariate polynomials over them.

A FieldTower is a base domain (GF(p), QQ, or a function field over either)
plus a chain of simple extensions, each given by a monic irreducible defining
polynomial over the level below.  An element of the tower is a nested tuple:
a level-j value is a tuple of level-(j-1) values of length deg(level j), and
a level-0 value is a raw base scalar.  Representations are canonical, so
element equality is plain ``==`` and everything is hashable.

The tower itself implements the same domain API as the scalar domains in
groundfields, which lets the polynomial helpers and linear algebra run
unchanged over any level.
"""

from __future__ import annotations

from typing import NamedTuple

from . import linalg
from .errors import ContractViolation, InseparableLevel, NotMonic
from .groundfields import (
    GF,
    QQ,
    padd,
    pdeg,
    pderiv,
    pdivmod,
    peval,
    pgcd,
    pmonic,
    pmul,
    psub,
    ptrim,
)


class Level(NamedTuple):
    var: str
    minpoly: tuple  # monic, low degree first, values of the previous level


class FieldTower:
    """Base domain plus a chain of simple extensions; acts as a domain."""

    __slots__ = ("base", "levels", "_subtower", "_zero", "_one", "_hash")

    def __init__(self, base, levels=(), _validate=True):
        self.base = base
        self.levels = tuple(levels)
        self._subtower = None
        self._hash = None
        if self.levels:
            sub = self.subtower
            top = self.levels[-1].minpoly
            d = pdeg(top)
            if d < 1:
                raise ContractViolation("defining polynomial must have degree >= 1")
            if not sub.is_zero(sub.sub(top[-1], sub.one())):
                raise NotMonic("defining polynomial must be monic")
            self._zero = tuple(sub.zero() for _ in range(d))
            one = [sub.zero()] * d
            one[0] = sub.one()
            self._one = tuple(one)
            if _validate:
                from . import factorize
                from .errors import ReducibleDefiningPolynomial

                if not factorize.is_irreducible(UniPoly(sub, top, self.levels[-1].var)):
                    raise ReducibleDefiningPolynomial(
                        f"defining polynomial for level {len(self.levels)} factors"
                    )
        else:
            self._zero = base.zero()
            self._one = base.one()

    # -- structure ----------------------------------------------------------

    @property
    def subtower(self) -> "FieldTower":
        """The tower with the top level removed."""
        if self._subtower is None:
            self._subtower = FieldTower(self.base, self.levels[:-1], _validate=False)
        return self._subtower

    @property
    def num_levels(self) -> int:
        return len(self.levels)

    @property
    def char(self) -> int:
        return self.base.char

    @property
    def is_finite(self) -> bool:
        return isinstance(self.base, GF)

    def degree(self) -> int:
        d = 1
        for lv in self.levels:
            d *= pdeg(lv.minpoly)
        return d

    def top_degree(self) -> int:
        return pdeg(self.levels[-1].minpoly) if self.levels else 1

    def order(self) -> int:
        """Number of elements; finite base only."""
        if not self.is_finite:
            raise ContractViolation("order() requires a finite base field")
        return self.base.p ** self.degree()

    def level_var(self, j: int = -1) -> str:
        return self.levels[j].var

    # -- domain API ---------------------------------------------------------

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def is_zero(self, a) -> bool:
        return a == self._zero

    def coerce(self, x):
        """Embed a ground scalar (or python int/str/Fraction) as an element."""
        if not self.levels:
            return self.base.coerce(x)
        v = [self.subtower.zero()] * self.top_degree()
        v[0] = self.subtower.coerce(x)
        return tuple(v)

    def embed_sub(self, a):
        """Embed a value of the sub-tower into this tower."""
        v = [self.subtower.zero()] * self.top_degree()
        v[0] = a
        return tuple(v)

    def gen(self, j: int = -1):
        """Generator of level j (default: top) as an element of this tower."""
        if not self.levels:
            raise ContractViolation("ground domain has no generator")
        j = j % self.num_levels
        if j == self.num_levels - 1:
            v = [self.subtower.zero()] * self.top_degree()
            if len(v) == 1:
                # degree-1 level: the generator is the root of the linear minpoly
                return (self.subtower.neg(self.levels[-1].minpoly[0]),)
            v[1] = self.subtower.one()
            return tuple(v)
        return self.embed_sub(self.subtower.gen(j))

    def add(self, a, b):
        if not self.levels:
            return self.base.add(a, b)
        sub = self.subtower
        return tuple(sub.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        if not self.levels:
            return self.base.sub(a, b)
        sub = self.subtower
        return tuple(sub.sub(x, y) for x, y in zip(a, b))

    def mul(self, a, b):
        if not self.levels:
            return self.base.mul(a, b)
        sub = self.subtower
        d = self.top_degree()
        out = [sub.zero()] * (2 * d - 1)
        for i, x in enumerate(a):
            if sub.is_zero(x):
                continue
            for j, y in enumerate(b):
                if not sub.is_zero(y):
                    out[i + j] = sub.add(out[i + j], sub.mul(x, y))
        m = self.levels[-1].minpoly
        for k in range(2 * d - 2, d - 1, -1):
            c = out[k]
            if sub.is_zero(c):
                continue
            for i in range(d):
                if not sub.is_zero(m[i]):
                    out[k - d + i] = sub.sub(out[k - d + i], sub.mul(c, m[i]))
        return tuple(out[:d])

    def neg(self, a):
        if not self.levels:
            return self.base.neg(a)
        sub = self.subtower
        return tuple(sub.neg(x) for x in a)

    def inv(self, a):
        if not self.levels:
            return self.base.inv(a)
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of 0 in tower level")
        sub = self.subtower
        r0, r1 = self.levels[-1].minpoly, ptrim(sub, a)
        t0, t1 = (), (sub.one(),)
        while r1:
            q, r = pdivmod(sub, r0, r1)
            r0, r1 = r1, r
            t0, t1 = t1, psub(sub, t0, pmul(sub, q, t1))
        if pdeg(r0) != 0:
            raise ZeroDivisionError("element is a zero divisor (reducible level?)")
        ilc = sub.inv(r0[0])
        out = [sub.mul(c, ilc) for c in t0]
        out += [sub.zero()] * (self.top_degree() - len(out))
        return tuple(out)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow_(self, a, e: int):
        if e < 0:
            return self.pow_(self.inv(a), -e)
        result = self.one()
        while e > 0:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def frobenius(self, a, times: int = 1):
        """x -> x^(p^times); finite base only."""
        if not self.is_finite:
            raise ContractViolation("frobenius requires characteristic p")
        return self.pow_(a, self.base.p**times)

    def pth_root(self, a):
        """Inverse of frobenius on a finite field: a^(q/p)."""
        return self.pow_(a, self.order() // self.base.p)

    # -- coordinates --------------------------------------------------------

    def flatten(self, a) -> list:
        """Ground coordinates in the monomial basis, top index slowest."""
        if not self.levels:
            return [a]
        sub = self.subtower
        out = []
        for x in a:
            out.extend(sub.flatten(x))
        return out

    def unflatten(self, vec):
        if not self.levels:
            return vec[0]
        sub = self.subtower
        step = len(vec) // self.top_degree()
        return tuple(
            sub.unflatten(vec[i * step : (i + 1) * step])
            for i in range(self.top_degree())
        )

    def as_ground(self, a):
        """The ground scalar equal to a, or None if a is not a constant."""
        flat = self.flatten(a)
        for c in flat[1:]:
            if not self.base.is_zero(c):
                return None
        return flat[0]

    def sort_key(self, a):
        if not self.levels:
            return self.base.sort_key(a)
        sub = self.subtower
        return tuple(sub.sort_key(x) for x in a)

    def to_json(self, a):
        if not self.levels:
            return self.base.to_json(a)
        sub = self.subtower
        return [sub.to_json(x) for x in a]

    def from_json(self, obj):
        if not self.levels:
            return self.base.from_json(obj)
        sub = self.subtower
        return tuple(sub.from_json(x) for x in obj)

    def tower_to_json(self) -> dict:
        levels = []
        chain = []
        t = self
        while t.levels:
            chain.append(t)
            t = t.subtower
        for tw in reversed(chain):
            lv = tw.levels[-1]
            levels.append(
                {"var": lv.var, "minpoly": [tw.subtower.to_json(c) for c in lv.minpoly]}
            )
        return {
            "char": self.base.char if isinstance(self.base, GF) else 0,
            "levels": levels,
        }

    @staticmethod
    def tower_from_json(obj, base=None) -> "FieldTower":
        if base is None:
            base = GF(obj["char"]) if obj["char"] else QQ()
        t = FieldTower(base)
        for lv in obj["levels"]:
            mp = tuple(t.from_json(c) for c in lv["minpoly"])
            t = tower_extend(t, UniPoly(t, mp, lv["var"]))
        return t

    def __eq__(self, other):
        return (
            isinstance(other, FieldTower)
            and other.base == self.base
            and other.levels == self.levels
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.base, self.levels))
        return self._hash

    def __repr__(self):
        if not self.levels:
            return repr(self.base)
        vars_ = ",".join(lv.var for lv in self.levels)
        return f"{self.base}[{vars_}] (degree {self.degree()})"


class FieldElem:
    """Convenience wrapper pairing a tower with a raw value; supports + - * /."""

    __slots__ = ("tower", "value")

    def __init__(self, tower: FieldTower, value):
        self.tower = tower
        self.value = value

    def _lift(self, other):
        if isinstance(other, FieldElem):
            if other.tower != self.tower:
                raise ContractViolation("elements live in different towers")
            return other.value
        return self.tower.coerce(other)

    def __add__(self, other):
        return FieldElem(self.tower, self.tower.add(self.value, self._lift(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.tower, self.tower.sub(self.value, self._lift(other)))

    def __rsub__(self, other):
        return FieldElem(self.tower, self.tower.sub(self._lift(other), self.value))

    def __mul__(self, other):
        return FieldElem(self.tower, self.tower.mul(self.value, self._lift(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.tower, self.tower.div(self.value, self._lift(other)))

    def __rtruediv__(self, other):
        return FieldElem(self.tower, self.tower.div(self._lift(other), self.value))

    def __neg__(self):
        return FieldElem(self.tower, self.tower.neg(self.value))

    def __pow__(self, e):
        return FieldElem(self.tower, self.tower.pow_(self.value, e))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.tower == other.tower and self.value == other.value
        try:
            return self.value == self._lift(other)
        except ContractViolation:
            return NotImplemented

    def __hash__(self):
        return hash((self.tower, self.value))

    def __repr__(self):
        return f"FieldElem({self.tower.to_json(self.value)})"


class UniPoly:
    """Dense univariate polynomial over a tower level (or scalar domain)."""

    __slots__ = ("domain", "coeffs", "var")

    def __init__(self, domain, coeffs, var: str = "T"):
        self.domain = domain
        self.coeffs = ptrim(domain, tuple(coeffs))
        self.var = var

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.domain.is_zero(
            self.domain.sub(self.coeffs[-1], self.domain.one())
        )

    def leading(self):
        return self.coeffs[-1]

    def monic(self) -> "UniPoly":
        return UniPoly(self.domain, pmonic(self.domain, self.coeffs), self.var)

    def _wrap(self, coeffs):
        return UniPoly(self.domain, coeffs, self.var)

    def __add__(self, other):
        return self._wrap(padd(self.domain, self.coeffs, other.coeffs))

    def __sub__(self, other):
        return self._wrap(psub(self.domain, self.coeffs, other.coeffs))

    def __mul__(self, other):
        return self._wrap(pmul(self.domain, self.coeffs, other.coeffs))

    def __divmod__(self, other):
        q, r = pdivmod(self.domain, self.coeffs, other.coeffs)
        return self._wrap(q), self._wrap(r)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def gcd(self, other) -> "UniPoly":
        return self._wrap(pgcd(self.domain, self.coeffs, other.coeffs))

    def derivative(self) -> "UniPoly":
        return self._wrap(pderiv(self.domain, self.coeffs))

    def evaluate(self, x):
        return peval(self.domain, self.coeffs, x)

    def sort_key(self):
        return (self.degree, tuple(self.domain.sort_key(c) for c in self.coeffs))

    def to_json(self):
        return [self.domain.to_json(c) for c in self.coeffs]

    def __eq__(self, other):
        return (
            isinstance(other, UniPoly)
            and other.domain == self.domain
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.domain, self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if self.domain.is_zero(c):
                continue
            cj = self.domain.to_json(c)
            if i == 0:
                terms.append(f"{cj}")
            elif i == 1:
                terms.append(f"{cj}*{self.var}")
            else:
                terms.append(f"{cj}*{self.var}^{i}")
        return " + ".join(terms)


def tower_extend(tower: FieldTower, f: UniPoly) -> FieldTower:
    """Extend a tower by one level with defining polynomial f.

    f must be monic and irreducible over the tower's top level; both are
    checked (irreducibility through the factorization engine, which may raise
    UnsupportedLevel outside its supported range).
    """
    if f.domain != tower:
        raise ContractViolation("defining polynomial lives over a different level")
    if f.degree < 1:
        raise ContractViolation("defining polynomial must have degree >= 1")
    if not f.is_monic():
        raise NotMonic(f"defining polynomial is not monic: {f!r}")
    used = {lv.var for lv in tower.levels}
    var = f.var
    while var in used:
        var += "_"
    return FieldTower(tower.base, tower.levels + (Level(var, f.coeffs),))


def trace_form(tower: FieldTower, level: int = -1):
    """Gram matrix of (x, y) -> tr(xy) on the monomial basis of one level.

    Entries live in the level below.  Raises InseparableLevel when the
    pairing degenerates (equivalently, when the level is inseparable).
    """
    if not tower.levels:
        raise ContractViolation("trace_form needs at least one extension level")
    level = level % tower.num_levels
    t = tower
    while t.num_levels - 1 > level:
        t = t.subtower
    sub = t.subtower
    m = t.levels[-1].minpoly
    d = pdeg(m)
    # Newton's recurrence for the power sums of the roots; no division, so it
    # is valid in any characteristic.
    p = [sub.coerce(d)]
    for k in range(1, 2 * d - 1):
        acc = sub.mul(sub.coerce(k), m[d - k]) if k <= d else sub.zero()
        for i in range(1, min(k - 1, d) + 1):
            acc = sub.add(acc, sub.mul(m[d - i], p[k - i]))
        p.append(sub.neg(acc))
    gram = [[p[i + j] for j in range(d)] for i in range(d)]
    if sub.is_zero(linalg.det(sub, gram)):
        raise InseparableLevel("trace pairing is degenerate on this level")
    return gram


def minimal_polynomial(tower: FieldTower, a, var: str = "T") -> UniPoly:
    """Minimal polynomial of a tower element over the ground domain."""
    ground = FieldTower(tower.base)
    D = tower.degree()
    power = tower.one()
    cols = [tower.flatten(power)]
    for k in range(1, D + 1):
        power = tower.mul(power, a)
        vec = tower.flatten(power)
        rows = [[cols[i][r] for i in range(k)] for r in range(D)]
        sol = linalg.solve(ground, rows, vec)
        if sol is not None:
            coeffs = [ground.neg(c) for c in sol] + [ground.one()]
            return UniPoly(ground, coeffs, var)
        cols.append(vec)
    raise ContractViolation("no minimal polynomial found (inconsistent tower)")


def frobenius_orbit(tower: FieldTower, a) -> list:
    """[a, a^p, a^(p^2), ...] until the orbit closes; finite base only."""
    orbit = [a]
    x = tower.frobenius(a)
    while x != a:
        orbit.append(x)
        x = tower.frobenius(x)
    return orbit
