"""Closed points, zero-cycles, and configuration predicates in projective space.

A ClosedPoint is stored as a monic irreducible minimal polynomial f over the
ground field together with projective coordinates in the quotient ring
k[T]/(f); its geometric points are the coordinate tuples at the roots of f.
Points over GF(p) and QQ are kept in a canonical representation (canonical
defining polynomial over GF(p), primitive-coordinate presentation over QQ),
so point equality and cycle ordering are plain data comparisons.
"""

from __future__ import annotations

import itertools

from . import factorize, linalg
from .errors import (
    ContractViolation,
    DegreeDivisibleBy3,
    InseparableLevel,
    InseparablePoint,
    MixedAmbient,
    PointNotInCycle,
    ReducibleDefiningPolynomial,
)
from .exactfield import FieldTower, Level, UniPoly
from .groundfields import GF, QQ, FunctionField


def normalize_coords(tower, coords):
    """Scale so the first nonzero coordinate is 1."""
    coords = tuple(coords)
    pivot = None
    for c in coords:
        if not tower.is_zero(c):
            pivot = c
            break
    if pivot is None:
        raise ContractViolation("projective coordinates cannot all vanish")
    inv = tower.inv(pivot)
    return tuple(tower.mul(c, inv) for c in coords)


class ProjPoint:
    """A point of P^n with coordinates in a tower level, canonically scaled."""

    __slots__ = ("tower", "ambient", "coords")

    def __init__(self, tower, coords):
        self.tower = tower
        self.coords = normalize_coords(tower, coords)
        self.ambient = len(self.coords) - 1

    def sort_key(self):
        return tuple(self.tower.sort_key(c) for c in self.coords)

    def frobenius(self) -> "ProjPoint":
        return ProjPoint(self.tower, tuple(self.tower.frobenius(c) for c in self.coords))

    def to_json(self):
        return [self.tower.to_json(c) for c in self.coords]

    def __eq__(self, other):
        return (
            isinstance(other, ProjPoint)
            and other.tower == self.tower
            and other.coords == self.coords
        )

    def __hash__(self):
        return hash((self.tower, self.coords))

    def __repr__(self):
        return f"ProjPoint({self.to_json()})"


def _residue_tower(ground: FieldTower, minpoly: UniPoly) -> FieldTower:
    return FieldTower(
        ground.base, ground.levels + (Level("T", minpoly.coeffs),), _validate=False
    )


_ROOT_CACHE: dict = {}


def root_in(f: UniPoly, tower: FieldTower):
    """Deterministic first root of a ground polynomial inside a tower."""
    key = (tower, f.coeffs)
    if key not in _ROOT_CACHE:
        rts = factorize.roots_in_tower(f, tower)
        if not rts:
            raise ContractViolation("polynomial has no root in the tower")
        _ROOT_CACHE[key] = rts[0]
    return _ROOT_CACHE[key]


class ClosedPoint:
    """Galois orbit of geometric points, in canonical representation."""

    __slots__ = ("ground", "ambient", "minpoly", "coords", "separable", "_key")

    def __init__(self, ground, ambient, minpoly, coords, separable=True, _trusted=False):
        if not _trusted:
            raise ContractViolation("use ClosedPoint.make to construct points")
        self.ground = ground
        self.ambient = ambient
        self.minpoly = minpoly
        self.coords = coords
        self.separable = separable
        self._key = None

    # -- construction -------------------------------------------------------

    @staticmethod
    def make(ground: FieldTower, minpoly: UniPoly, coords, expect_degree=None):
        point, collapse = ClosedPoint.make_with_collapse(ground, minpoly, coords)
        if collapse != 1:
            raise ContractViolation(
                f"coordinates generate a proper subfield (index {collapse})"
            )
        if expect_degree is not None and point.degree != expect_degree:
            raise ContractViolation(
                f"expected a degree-{expect_degree} point, got {point.degree}"
            )
        return point

    @staticmethod
    def make_with_collapse(ground: FieldTower, minpoly: UniPoly, coords):
        """Canonical point for the representation (minpoly, coords).

        Returns (point, collapse) where collapse = deg(minpoly) / deg(point);
        collapse > 1 means the coordinates generate a proper subfield, i.e.
        the representation describes collapse copies of the returned point.
        """
        if ground.num_levels != 0:
            raise ContractViolation("ground must be a 0-level tower")
        if minpoly.domain != ground:
            raise ContractViolation("minimal polynomial must live over the ground")
        if not minpoly.is_monic():
            from .errors import NotMonic

            raise NotMonic("minimal polynomial must be monic")
        if not factorize.is_irreducible(minpoly):
            raise ReducibleDefiningPolynomial("minimal polynomial factors")
        d = minpoly.degree
        if d > 1:
            der = minpoly.derivative()
            if der.is_zero() or minpoly.gcd(der).degree != 0:
                raise InseparablePoint("minimal polynomial is inseparable")
        K = _residue_tower(ground, minpoly)
        coords = normalize_coords(K, coords)
        if isinstance(ground.base, GF):
            return ClosedPoint._canonical_gf(ground, minpoly, K, coords)
        if isinstance(ground.base, QQ):
            return ClosedPoint._canonical_qq(ground, minpoly, K, coords)
        # function-field ground: keep the representation as given (used only
        # for interpolation families; canonical form is not needed there)
        point = ClosedPoint(
            ground, len(coords) - 1, minpoly, coords, separable=True, _trusted=True
        )
        return point, 1

    @staticmethod
    def _canonical_gf(ground, minpoly, K, coords):
        d = minpoly.degree
        # orbit period of the coordinate tuple
        e = 1
        twist = tuple(K.frobenius(c) for c in coords)
        while twist != coords:
            e += 1
            twist = tuple(K.frobenius(c) for c in twist)
        collapse = d // e
        p = ground.base.p
        ge = factorize.canonical_irreducible(p, e, var="T")
        Ke = _residue_tower(ground, ge)
        if e == d and minpoly.coeffs == ge.coeffs:
            new_coords = coords
        else:
            # express the coordinates over the canonical degree-e field via a
            # root of its defining polynomial inside K
            rho = root_in(ge, K)
            cols = []
            power = K.one()
            for _ in range(e):
                cols.append(K.flatten(power))
                power = K.mul(power, rho)
            rows = [[cols[j][r] for j in range(e)] for r in range(K.degree())]
            new_coords = []
            for c in coords:
                sol = linalg.solve(ground, rows, K.flatten(c))
                if sol is None:
                    raise ContractViolation("coordinate outside the expected subfield")
                new_coords.append(tuple(sol))
            new_coords = tuple(new_coords)
        # canonical representative: lexicographically least Frobenius twist
        best = None
        twist = new_coords
        for _ in range(e):
            key = tuple(Ke.sort_key(c) for c in twist)
            if best is None or key < best[0]:
                best = (key, twist)
            twist = tuple(Ke.frobenius(c) for c in twist)
        point = ClosedPoint(
            ground,
            len(coords) - 1,
            UniPoly(ground, ge.coeffs, "T"),
            best[1],
            separable=True,
            _trusted=True,
        )
        return point, collapse

    @staticmethod
    def _canonical_qq(ground, minpoly, K, coords):
        d = minpoly.degree
        # dimension of the subalgebra generated by the coordinates
        one = K.one()
        basis_vals = [one]
        rows = [K.flatten(one)]
        changed = True
        while changed:
            changed = False
            for b in list(basis_vals):
                for c in coords:
                    v = K.mul(b, c)
                    vec = K.flatten(v)
                    if linalg.rank(ground, rows + [vec]) > len(rows):
                        rows.append(vec)
                        basis_vals.append(v)
                        changed = True
        e = len(rows)
        collapse = d // e
        if e == 1:
            # rational point: canonical minpoly T, constant coordinates
            ge = UniPoly(ground, (ground.zero(), ground.one()), "T")
            Ke = _residue_tower(ground, ge)
            consts = []
            for c in coords:
                g = K.as_ground(c)
                if g is None:
                    raise ContractViolation("non-constant coordinate on a rational point")
                consts.append(Ke.coerce(g))
            point = ClosedPoint(
                ground, len(coords) - 1, ge, tuple(consts), separable=True, _trusted=True
            )
            return point, collapse
        lam = None
        from .exactfield import minimal_polynomial

        for w in _weight_vectors(ground, len(coords)):
            cand = K.zero()
            for wi, c in zip(w, coords):
                cand = K.add(cand, K.mul(K.coerce(wi), c))
            mp = minimal_polynomial(K, cand, var="T")
            if mp.degree == e:
                lam = cand
                lam_mp = mp
                break
        if lam is None:
            raise ContractViolation("no primitive coordinate combination found")
        cols = []
        power = K.one()
        for _ in range(e):
            cols.append(K.flatten(power))
            power = K.mul(power, lam)
        rows2 = [[cols[j][r] for j in range(e)] for r in range(K.degree())]
        new_coords = []
        for c in coords:
            sol = linalg.solve(ground, rows2, K.flatten(c))
            if sol is None:
                raise ContractViolation("coordinate outside the generated subfield")
            new_coords.append(tuple(sol))
        point = ClosedPoint(
            ground,
            len(coords) - 1,
            lam_mp,
            tuple(new_coords),
            separable=True,
            _trusted=True,
        )
        return point, collapse

    @staticmethod
    def from_geometric(ground: FieldTower, field: FieldTower, coords):
        """Closed point with the Galois orbit of one geometric tuple."""
        if field.num_levels != 1:
            raise ContractViolation("geometric coordinates must live one level up")
        mp = UniPoly(ground, field.levels[-1].minpoly, "T")
        point, _ = ClosedPoint.make_with_collapse(ground, mp, coords)
        return point

    @staticmethod
    def rational(ground: FieldTower, coords):
        """Degree-1 closed point from ground coordinates."""
        mp = UniPoly(ground, (ground.zero(), ground.one()), "T")
        K = _residue_tower(ground, mp)
        return ClosedPoint.make(
            ground, mp, tuple(K.coerce(c) for c in coords), expect_degree=1
        )

    # -- accessors ----------------------------------------------------------

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @property
    def residue_tower(self) -> FieldTower:
        return _residue_tower(self.ground, self.minpoly)

    def geometric_points(self):
        """(splitting tower L, the deg-many geometric points over L)."""
        if not self.separable:
            raise InseparablePoint("geometric points of an inseparable point")
        if isinstance(self.ground.base, GF):
            K = self.residue_tower
            pts = []
            cur = self.coords
            for _ in range(self.degree):
                pts.append(ProjPoint(K, cur))
                cur = tuple(K.frobenius(c) for c in cur)
            return K, pts
        if isinstance(self.ground.base, QQ):
            L, rts = factorize.splitting_tower_qq(self.minpoly)
            pts = []
            for r in rts:
                pts.append(
                    ProjPoint(
                        L, tuple(_eval_coord(self.ground, L, c, r) for c in self.coords)
                    )
                )
            return L, pts
        raise ContractViolation("geometric points need a GF or QQ ground")

    def geometric_points_in(self, L: FieldTower):
        """Geometric points inside a prescribed splitting tower L."""
        if isinstance(self.ground.base, GF):
            rho = root_in(self.minpoly, L)
            cur = tuple(_eval_coord(self.ground, L, c, rho) for c in self.coords)
            pts = [ProjPoint(L, cur)]
            for _ in range(self.degree - 1):
                cur = tuple(L.frobenius(c) for c in cur)
                pts.append(ProjPoint(L, cur))
            return pts
        rts = factorize.roots_in_tower(self.minpoly, L)
        if len(rts) != self.degree:
            raise ContractViolation("tower does not split the point")
        return [
            ProjPoint(L, tuple(_eval_coord(self.ground, L, c, r) for c in self.coords))
            for r in rts
        ]

    def sort_key(self):
        if self._key is None:
            self._key = (
                self.degree,
                self.minpoly.sort_key(),
                tuple(self.residue_tower.sort_key(c) for c in self.coords),
            )
        return self._key

    def to_json(self):
        K = self.residue_tower
        return {
            "ambient": self.ambient,
            "minpoly": self.minpoly.to_json(),
            "coords": [K.to_json(c) for c in self.coords],
        }

    @staticmethod
    def from_json(ground: FieldTower, obj) -> "ClosedPoint":
        mp = UniPoly(ground, tuple(ground.from_json(c) for c in obj["minpoly"]), "T")
        K = _residue_tower(ground, mp)
        coords = tuple(K.from_json(c) for c in obj["coords"])
        return ClosedPoint.make(ground, mp, coords)

    def __eq__(self, other):
        return (
            isinstance(other, ClosedPoint)
            and other.ground == self.ground
            and other.ambient == self.ambient
            and other.minpoly == self.minpoly
            and other.coords == self.coords
        )

    def __hash__(self):
        return hash((self.ground, self.ambient, self.minpoly, self.coords))

    def __repr__(self):
        return f"ClosedPoint(deg={self.degree}, ambient=P^{self.ambient})"


def _weight_vectors(ground, n: int):
    """Deterministic stream of small integer weight vectors for combinations."""
    for i in range(n):
        w = [0] * n
        w[i] = 1
        yield w
    for m in range(1, 200):
        yield [m**i for i in range(n)]
    raise ContractViolation("exhausted weight vectors without a primitive combo")


def _eval_coord(ground, L, coord_value, root):
    """Evaluate a residue-ring coordinate (polynomial in theta) at a root."""
    acc = L.zero()
    for c in reversed(coord_value):
        acc = L.add(L.mul(acc, root), _embed_ground(ground, L, c))
    return acc


def _embed_ground(ground, L, c):
    return L.coerce(c)


class ZeroCycle:
    """Formal non-negative combination of closed points, canonically sorted."""

    __slots__ = ("ambient", "parts")

    def __init__(self, parts, ambient=None):
        merged: dict = {}
        for point, mult in parts:
            if mult < 1:
                raise ContractViolation("multiplicities must be >= 1")
            merged[point] = merged.get(point, 0) + mult
        items = sorted(merged.items(), key=lambda pm: pm[0].sort_key())
        if items:
            ambients = {pt.ambient for pt, _ in items}
            grounds = {pt.ground for pt, _ in items}
            if len(ambients) != 1 or len(grounds) != 1:
                raise MixedAmbient("cycle parts live in different spaces")
            ambient = items[0][0].ambient
        elif ambient is None:
            raise ContractViolation("empty cycle needs an explicit ambient")
        self.ambient = ambient
        self.parts = tuple(items)

    @property
    def degree(self) -> int:
        return sum(m * pt.degree for pt, m in self.parts)

    def points(self):
        return [pt for pt, _ in self.parts]

    def multiplicity(self, point) -> int:
        for pt, m in self.parts:
            if pt == point:
                return m
        return 0

    def add(self, other: "ZeroCycle") -> "ZeroCycle":
        return ZeroCycle(list(self.parts) + list(other.parts), ambient=self.ambient)

    def remove_one(self, point: ClosedPoint) -> "ZeroCycle":
        out = []
        found = False
        for pt, m in self.parts:
            if pt == point and not found:
                found = True
                if m > 1:
                    out.append((pt, m - 1))
            else:
                out.append((pt, m))
        if not found:
            raise PointNotInCycle(
                f"degree-{point.degree} point does not occur in the cycle"
            )
        return ZeroCycle(out, ambient=self.ambient)

    def part_degrees(self):
        out = []
        for pt, m in self.parts:
            out.extend([pt.degree] * m)
        return sorted(out)

    def sort_key(self):
        return tuple((pt.sort_key(), m) for pt, m in self.parts)

    def to_json(self):
        return [{"point": pt.to_json(), "mult": m} for pt, m in self.parts]

    @staticmethod
    def from_json(ground: FieldTower, obj, ambient=None) -> "ZeroCycle":
        parts = [(ClosedPoint.from_json(ground, o["point"]), o["mult"]) for o in obj]
        return ZeroCycle(parts, ambient=ambient)

    def __eq__(self, other):
        return (
            isinstance(other, ZeroCycle)
            and other.ambient == self.ambient
            and other.parts == self.parts
        )

    def __hash__(self):
        return hash((self.ambient, self.parts))

    def __iter__(self):
        return iter(self.parts)

    def __repr__(self):
        return f"ZeroCycle(deg={self.degree}, parts={self.part_degrees()})"


def in_linearly_general_position(points) -> bool:
    """No s of the points lie in a linear subspace of dimension < s-1.

    Rank deficiency of any small subset propagates to subsets of size
    min(#points, r+1), so checking those maximal subsets suffices.
    """
    points = list(points)
    if not points:
        return True
    tower = points[0].tower
    r = points[0].ambient
    for pt in points:
        if pt.tower != tower or pt.ambient != r:
            raise MixedAmbient("points live in different projective spaces")
    size = min(len(points), r + 1)
    for subset in itertools.combinations(points, size):
        rows = [list(pt.coords) for pt in subset]
        if linalg.rank(tower, rows) < size:
            return False
    return True


def moment_point(K: FieldTower, n: int) -> ClosedPoint:
    """Degree-d closed point on the standard degree-n rational normal curve.

    K must be a single extension level k[alpha]/(f); the point has projective
    coordinates (1 : alpha : alpha^2 : ... : alpha^n), whose geometric points
    are rows of a Vandermonde matrix and hence in linearly general position.
    """
    if K.num_levels != 1:
        raise ContractViolation("moment_point needs a single-level tower")
    mp = UniPoly(K.subtower, K.levels[-1].minpoly, "T")
    if mp.degree > 1:
        der = mp.derivative()
        if der.is_zero() or mp.gcd(der).degree != 0:
            raise InseparableLevel("defining polynomial is inseparable")
    alpha = K.gen()
    coords = [K.one()]
    for _ in range(n):
        coords.append(K.mul(coords[-1], alpha))
    return ClosedPoint.make(K.subtower, mp, tuple(coords), expect_degree=mp.degree)


def select_prime_to_3(cycle: ZeroCycle) -> ClosedPoint:
    """The canonical part of degree prime to 3 (smallest degree first)."""
    if cycle.degree % 3 == 0:
        raise DegreeDivisibleBy3(
            f"cycle degree {cycle.degree} is divisible by 3"
        )
    for pt, _ in cycle.parts:  # parts are sorted by (degree, canonical key)
        if pt.degree % 3 != 0:
            return pt
    raise DegreeDivisibleBy3("no part of degree prime to 3 (unreachable)")
