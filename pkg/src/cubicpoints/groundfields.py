"""Exact scalar domains: prime fields, the rationals, rational function fields.

Every domain exposes the same small API (zero/one, add/sub/mul/neg/inv/div,
is_zero, sort_key, to_json/from_json) so that towers, polynomial helpers and
linear algebra are written once against it.  Elements are plain hashable
values: int for GF(p), Fraction for QQ, RatFunc (pair of coefficient tuples)
for function fields.  Equality of elements is plain ``==`` because every
domain keeps a unique reduced representative.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .errors import ContractViolation

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond the 2^31 cap used here."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class GF:
    """Prime field of characteristic p; elements are ints in [0, p)."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not (isinstance(p, int) and 2 <= p <= 2**31 and is_prime(p)):
            raise ContractViolation(f"characteristic must be a prime <= 2^31, got {p}")
        self.p = p

    @property
    def char(self) -> int:
        return self.p

    def zero(self):
        return 0

    def one(self):
        return 1

    def is_zero(self, a) -> bool:
        return a == 0

    def coerce(self, x):
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            return self.mul(x.numerator % self.p, self.inv(x.denominator % self.p))
        raise ContractViolation(f"cannot coerce {x!r} into GF({self.p})")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"inverse of 0 in GF({self.p})")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def sort_key(self, a):
        return a

    def to_json(self, a):
        return a

    def from_json(self, obj):
        return int(obj) % self.p

    def __eq__(self, other):
        return isinstance(other, GF) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


class QQ:
    """The rational numbers; elements are Fractions in lowest terms."""

    __slots__ = ()

    @property
    def char(self) -> int:
        return 0

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def is_zero(self, a) -> bool:
        return a == 0

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        raise ContractViolation(f"cannot coerce {x!r} into QQ")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in QQ")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def sort_key(self, a):
        return (a.numerator, a.denominator)

    def to_json(self, a):
        return f"{a.numerator}/{a.denominator}"

    def from_json(self, obj):
        return Fraction(obj)

    def __eq__(self, other):
        return isinstance(other, QQ)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


# ---------------------------------------------------------------------------
# dense univariate polynomial helpers over any domain
#
# A polynomial is a tuple of coefficients, low degree first, with no trailing
# zeros; the zero polynomial is ().  These helpers back both the function
# field below and the tower/UniPoly layer.
# ---------------------------------------------------------------------------


def ptrim(D, c):
    c = list(c)
    while c and D.is_zero(c[-1]):
        c.pop()
    return tuple(c)


def pdeg(c) -> int:
    return len(c) - 1


def pconst(D, x):
    return () if D.is_zero(x) else (x,)


def padd(D, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] = D.add(out[i], x)
    return ptrim(D, out)


def psub(D, a, b):
    out = list(a) + [D.zero()] * max(0, len(b) - len(a))
    for i, x in enumerate(b):
        out[i] = D.sub(out[i], x)
    return ptrim(D, out)


def pneg(D, a):
    return tuple(D.neg(x) for x in a)


def pscale(D, a, s):
    if D.is_zero(s):
        return ()
    return ptrim(D, [D.mul(x, s) for x in a])


def pmul(D, a, b):
    if not a or not b:
        return ()
    out = [D.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if D.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = D.add(out[i + j], D.mul(x, y))
    return ptrim(D, out)


def pdivmod(D, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [D.zero()] * max(0, len(a) - len(b) + 1)
    ilc = D.inv(b[-1])
    for i in range(len(a) - len(b), -1, -1):
        c = D.mul(r[i + len(b) - 1], ilc)
        if D.is_zero(c):
            continue
        q[i] = c
        for j, y in enumerate(b):
            r[i + j] = D.sub(r[i + j], D.mul(c, y))
    return ptrim(D, q), ptrim(D, r)


def pmod(D, a, b):
    return pdivmod(D, a, b)[1]


def pmonic(D, a):
    if not a:
        return a
    if D.is_zero(D.sub(a[-1], D.one())):
        return a
    return pscale(D, a, D.inv(a[-1]))


def pgcd(D, a, b):
    while b:
        a, b = b, pmod(D, a, b)
    return pmonic(D, a)


def pderiv(D, a):
    return ptrim(D, [D.mul(x, D.coerce(i)) for i, x in enumerate(a)][1:])


def pxgcd(D, a, b):
    """Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = ptrim(D, a), ptrim(D, b)
    s0, s1 = (D.one(),), ()
    t0, t1 = (), (D.one(),)
    while r1:
        q, r = pdivmod(D, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(D, s0, pmul(D, q, s1))
        t0, t1 = t1, psub(D, t0, pmul(D, q, t1))
    if r0:
        ilc = D.inv(r0[-1])
        return pscale(D, r0, ilc), pscale(D, s0, ilc), pscale(D, t0, ilc)
    return (), (), ()


def peval(D, a, x):
    acc = D.zero()
    for c in reversed(a):
        acc = D.add(D.mul(acc, x), c)
    return acc


def ppowmod(D, a, e: int, m):
    """a^e mod m by binary powering."""
    result = (D.one(),)
    a = pmod(D, a, m)
    while e > 0:
        if e & 1:
            result = pmod(D, pmul(D, result, a), m)
        a = pmod(D, pmul(D, a, a), m)
        e >>= 1
    return result


class RatFunc(NamedTuple):
    """Reduced rational function: num/den with den monic, gcd(num, den) = 1."""

    num: tuple
    den: tuple


class FunctionField:
    """Field of rational functions in one variable over an exact base field."""

    __slots__ = ("base", "var")

    def __init__(self, base, var: str = "t"):
        self.base = base
        self.var = var

    @property
    def char(self) -> int:
        return self.base.char

    def make(self, num, den=None) -> RatFunc:
        num = ptrim(self.base, num)
        den = ptrim(self.base, den) if den is not None else (self.base.one(),)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return RatFunc((), (self.base.one(),))
        g = pgcd(self.base, num, den)
        if pdeg(g) > 0:
            num = pdivmod(self.base, num, g)[0]
            den = pdivmod(self.base, den, g)[0]
        ilc = self.base.inv(den[-1])
        return RatFunc(pscale(self.base, num, ilc), pscale(self.base, den, ilc))

    def from_poly(self, coeffs) -> RatFunc:
        return self.make(coeffs)

    def gen(self) -> RatFunc:
        return self.make((self.base.zero(), self.base.one()))

    def zero(self):
        return RatFunc((), (self.base.one(),))

    def one(self):
        return RatFunc((self.base.one(),), (self.base.one(),))

    def is_zero(self, a) -> bool:
        return not a.num

    def coerce(self, x):
        if isinstance(x, RatFunc):
            return x
        return self.make(pconst(self.base, self.base.coerce(x)))

    def add(self, a, b):
        B = self.base
        num = padd(B, pmul(B, a.num, b.den), pmul(B, b.num, a.den))
        return self.make(num, pmul(B, a.den, b.den))

    def sub(self, a, b):
        B = self.base
        num = psub(B, pmul(B, a.num, b.den), pmul(B, b.num, a.den))
        return self.make(num, pmul(B, a.den, b.den))

    def mul(self, a, b):
        B = self.base
        return self.make(pmul(B, a.num, b.num), pmul(B, a.den, b.den))

    def neg(self, a):
        return RatFunc(pneg(self.base, a.num), a.den)

    def inv(self, a):
        if not a.num:
            raise ZeroDivisionError("inverse of 0 in function field")
        return self.make(a.den, a.num)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def eval_at(self, a: RatFunc, x):
        """Specialize the parameter; x must avoid the denominator's roots."""
        B = self.base
        den = peval(B, a.den, x)
        if B.is_zero(den):
            raise ZeroDivisionError("pole at specialization value")
        return B.div(peval(B, a.num, x), den)

    def sort_key(self, a):
        return (
            len(a.num),
            tuple(self.base.sort_key(c) for c in a.num),
            len(a.den),
            tuple(self.base.sort_key(c) for c in a.den),
        )

    def to_json(self, a):
        return {
            "num": [self.base.to_json(c) for c in a.num],
            "den": [self.base.to_json(c) for c in a.den],
        }

    def from_json(self, obj):
        return self.make(
            [self.base.from_json(c) for c in obj["num"]],
            [self.base.from_json(c) for c in obj["den"]],
        )

    def __eq__(self, other):
        return (
            isinstance(other, FunctionField)
            and other.base == self.base
            and other.var == self.var
        )

    def __hash__(self):
        return hash(("FunctionField", self.base, self.var))

    def __repr__(self):
        return f"{self.base}({self.var})"
