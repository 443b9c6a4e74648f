"""Bridging a field tower K over k with its scalar extension K(t) over k(t).

Used by the generalize/specialize construction: interpolation families live
over towers whose base is a rational function field, and specializing the
parameter lands back in the original tower.  Only towers whose defining
polynomials have constant (parameter-free) coefficients arise this way.
"""

from __future__ import annotations

from .errors import ContractViolation
from .exactfield import FieldTower, Level
from .groundfields import FunctionField, RatFunc, pconst, pdeg, peval


def tower_with_parameter(tower: FieldTower, var: str = "t") -> FieldTower:
    """K over k  ->  K(t) over k(t), same defining polynomials."""
    if isinstance(tower.base, FunctionField):
        raise ContractViolation("tower already has a parameter")
    ff = FunctionField(tower.base, var)
    new = FieldTower(ff)
    chain = []
    t = tower
    while t.levels:
        chain.append(t)
        t = t.subtower
    for tw in reversed(chain):
        lv = tw.levels[-1]
        mp = tuple(lift_value(tw.subtower, new, c) for c in lv.minpoly)
        new = FieldTower(new.base, new.levels + (Level(lv.var, mp),), _validate=False)
    return new


def constant_tower(tower_kt: FieldTower) -> FieldTower:
    """Inverse of tower_with_parameter; requires constant defining data."""
    ff = tower_kt.base
    if not isinstance(ff, FunctionField):
        raise ContractViolation("tower has no parameter to strip")
    new = FieldTower(ff.base)
    chain = []
    t = tower_kt
    while t.levels:
        chain.append(t)
        t = t.subtower
    for tw in reversed(chain):
        lv = tw.levels[-1]
        mp = tuple(constant_value(tw.subtower, new, c) for c in lv.minpoly)
        new = FieldTower(new.base, new.levels + (Level(lv.var, mp),), _validate=False)
    return new


def lift_value(tower_k: FieldTower, tower_kt: FieldTower, value):
    """Embed a K-value into K(t) (constant in the parameter)."""
    if not tower_k.levels:
        return RatFunc(pconst(tower_k.base, value), (tower_k.base.one(),))
    return tuple(
        lift_value(tower_k.subtower, tower_kt.subtower, x) for x in value
    )


def poly_value(tower_k: FieldTower, coeffs_in_t):
    """A polynomial in the parameter with K-coefficients, as a K(t)-value.

    coeffs_in_t is a list over the ground base; only valid for towers with
    zero levels.  For leveled towers use lift/mul/add arithmetic instead.
    """
    if tower_k.levels:
        raise ContractViolation("poly_value works on the ground level only")
    return RatFunc(tuple(coeffs_in_t), (tower_k.base.one(),))


def is_constant_value(tower_kt: FieldTower, value) -> bool:
    if not tower_kt.levels:
        return pdeg(value.num) <= 0 and pdeg(value.den) == 0
    return all(is_constant_value(tower_kt.subtower, x) for x in value)


def constant_value(tower_kt: FieldTower, tower_k: FieldTower, value):
    """Strip the parameter from a constant K(t)-value."""
    if not tower_kt.levels:
        if pdeg(value.den) != 0 or pdeg(value.num) > 0:
            raise ContractViolation("value is not constant in the parameter")
        base = tower_kt.base.base
        if not value.num:
            return base.zero()
        return base.div(value.num[0], value.den[0])
    return tuple(
        constant_value(tower_kt.subtower, tower_k.subtower, x) for x in value
    )


def specialize_value(tower_kt: FieldTower, tower_k: FieldTower, value, at):
    """Evaluate the parameter at a base scalar; poles raise ZeroDivisionError."""
    if not tower_kt.levels:
        base = tower_kt.base.base
        den = peval(base, value.den, at)
        if base.is_zero(den):
            raise ZeroDivisionError("pole at specialization value")
        return base.div(peval(base, value.num, at), den)
    return tuple(
        specialize_value(tower_kt.subtower, tower_k.subtower, x, at) for x in value
    )
