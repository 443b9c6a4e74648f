"""Cremona involutions and rational normal curves through closed points.

The Cremona involution centered at a degree-(n+1) closed point is built by
frame conjugation: an invertible matrix M over the splitting field sends the
center's geometric points to the standard coordinate frame, and the map is
M^-1 after coordinate-wise inversion after M, cleared of denominators.  Its
defining forms always descend to the ground field; this is asserted, not
assumed.

The unique degree-n curve through n+3 points in linearly general position is
computed either through a Galois-stable sub-center of degree n+1 (staying
over the ground field throughout) or, when the input is irreducible, over
the splitting field followed by an explicit descent: over a finite ground
field the parameters of the rational points of the curve are the roots of a
degree-(p+1) binary form, and reparametrizing through three of those points
lands the coefficients in the ground field.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import factorize, linalg
from .errors import (
    ContractViolation,
    GenericallyNotLGP,
    IndeterminacyLocus,
    LineMeetsFundamentalLocus,
    NotLGP,
    UnsupportedLevel,
    WrongDegree,
)
from .exactfield import FieldTower, UniPoly
from .forms import (
    MultiForm,
    bf_add,
    bf_compose_linear,
    bf_content_free,
    bf_degree,
    bf_eval,
    bf_gcd,
    bf_is_zero,
    bf_roots,
    bf_scale,
)
from .groundfields import GF, QQ, FunctionField, pdeg, pdivmod, pgcd, pmul, ptrim
from .projgeom import ClosedPoint, ProjPoint, ZeroCycle, in_linearly_general_position


class RationalCurveParam:
    """Parametrized rational curve: n+1 binary forms of a common degree."""

    __slots__ = ("domain", "ambient", "degree", "forms")

    def __init__(self, domain, forms, reduce=False):
        forms = tuple(tuple(f) for f in forms)
        if not forms:
            raise ContractViolation("a curve needs at least one form")
        if len({len(f) for f in forms}) != 1:
            raise ContractViolation("forms must share a common degree")
        if all(bf_is_zero(domain, f) for f in forms):
            raise ContractViolation("forms cannot all vanish")
        if reduce:
            forms = bf_content_free(domain, forms)
        else:
            g = None
            for f in forms:
                if bf_is_zero(domain, f):
                    continue
                g = f if g is None else bf_gcd(domain, g, f)
            if g is not None and bf_degree(g) > 0:
                raise ContractViolation("forms share a common factor")
        self.domain = domain
        self.forms = forms
        self.ambient = len(forms) - 1
        self.degree = len(forms[0]) - 1

    def evaluate(self, s0, t0):
        return tuple(bf_eval(self.domain, f, s0, t0) for f in self.forms)

    def point_at(self, s0, t0) -> ProjPoint:
        return ProjPoint(self.domain, self.evaluate(s0, t0))

    def scale(self, c) -> "RationalCurveParam":
        return RationalCurveParam(
            self.domain, [bf_scale(self.domain, f, c) for f in self.forms]
        )

    def normalized(self) -> "RationalCurveParam":
        """Joint scaling so the first nonzero coefficient is 1."""
        D = self.domain
        for f in self.forms:
            for c in f:
                if not D.is_zero(c):
                    return self.scale(D.inv(c))
        raise ContractViolation("forms cannot all vanish")

    def map_domain(self, fn, new_domain) -> "RationalCurveParam":
        return RationalCurveParam(
            new_domain, [tuple(fn(c) for c in f) for f in self.forms]
        )

    def sort_key(self):
        D = self.domain
        return tuple(tuple(D.sort_key(c) for c in f) for f in self.forms)

    def to_json(self):
        D = self.domain
        return {
            "ambient": self.ambient,
            "degree": self.degree,
            "forms": [[D.to_json(c) for c in f] for f in self.forms],
        }

    @staticmethod
    def from_json(domain, obj) -> "RationalCurveParam":
        return RationalCurveParam(
            domain,
            [tuple(domain.from_json(c) for c in f) for f in obj["forms"]],
        )

    def __eq__(self, other):
        return (
            isinstance(other, RationalCurveParam)
            and other.domain == self.domain
            and other.forms == self.forms
        )

    def __repr__(self):
        return f"RationalCurveParam(P^{self.ambient}, deg={self.degree})"


def line_through_pair(domain, a_coords, b_coords) -> RationalCurveParam:
    """The parametrized line s*A + t*B."""
    forms = [(b, a) for a, b in zip(a_coords, b_coords)]
    return RationalCurveParam(domain, forms)


def line_through_residual(parts) -> RationalCurveParam:
    """Ground-field line spanned by a degree-2 collection of closed points."""
    ground = parts[0].ground
    n = parts[0].ambient
    rows = []
    for pt in parts:
        K = pt.residue_tower
        d = pt.degree
        flat = [K.flatten(c) for c in pt.coords]
        for j in range(d):
            rows.append([flat[i][j] for i in range(n + 1)])
    if len(rows) != 2 or linalg.rank(ground, rows) != 2:
        raise ContractViolation("residual points do not span a line")
    return line_through_pair(ground, rows[0], rows[1])


# ---------------------------------------------------------------------------
# Cremona involutions
# ---------------------------------------------------------------------------


@dataclass
class CremonaMap:
    ground: FieldTower
    ambient: int
    center: tuple  # ClosedPoints of total degree ambient+1
    forms: tuple  # MultiForms of degree ambient over the ground field
    splitting: FieldTower
    frame_rows: tuple  # geometric coordinates of the center over `splitting`
    _lift_cache: dict = field(default_factory=dict, repr=False)

    def lifted_forms(self, tower):
        if tower not in self._lift_cache:
            self._lift_cache[tower] = tuple(
                f.map_coefficients(tower.coerce, tower) for f in self.forms
            )
        return self._lift_cache[tower]

    def to_json(self):
        return {
            "ambient": self.ambient,
            "forms": [f.to_json() for f in self.forms],
            "center": [pt.to_json() for pt in self.center],
        }


def _center_parts(center) -> list:
    if isinstance(center, ClosedPoint):
        return [center]
    if isinstance(center, ZeroCycle):
        parts = []
        for pt, m in center.parts:
            if m != 1:
                raise ContractViolation("Cremona centers must be reduced cycles")
            parts.append(pt)
        return parts
    return sorted(center, key=lambda pt: pt.sort_key())


def common_splitting_field(ground: FieldTower, parts) -> FieldTower:
    """A tower over the same ground where every part splits."""
    if isinstance(ground.base, GF):
        lcm = 1
        for pt in parts:
            d = pt.degree
            g = _gcd_int(lcm, d)
            lcm = lcm * d // g
        return factorize.canonical_field(ground.base.p, lcm)
    if isinstance(ground.base, FunctionField):
        from . import funcfield

        inner = FieldTower(ground.base.base)
        lcm = 1
        for pt in parts:
            d = pt.degree
            g = _gcd_int(lcm, d)
            lcm = lcm * d // g
        if not isinstance(inner.base, GF):
            raise UnsupportedLevel("function-field splitting needs a finite base")
        return funcfield.tower_with_parameter(
            factorize.canonical_field(inner.base.p, lcm), ground.base.var
        )
    # rationals: split each minimal polynomial in turn
    tower = ground
    level = 1
    for pt in sorted(parts, key=lambda q: q.sort_key()):
        mp = pt.minpoly
        while True:
            lifted = factorize.lift_poly(mp, tower)
            facs = factorize.poly_factor(lifted)
            nonlinear = [g for g, _ in facs if g.degree > 1]
            if not nonlinear:
                break
            g = min(nonlinear, key=lambda h: h.sort_key())
            from .errors import SplittingTooLarge

            if tower.degree() * g.degree > 12:
                raise SplittingTooLarge("splitting field degree exceeds 12 over QQ")
            from .exactfield import tower_extend

            tower = tower_extend(tower, UniPoly(tower, g.coeffs, f"w{level}"))
            level += 1
    return tower


def _gcd_int(a, b):
    while b:
        a, b = b, a % b
    return a


def geometric_rows(parts, L) -> list:
    """All geometric points of the parts over L, in canonical order."""
    pts = []
    for part in parts:
        pts.extend(part.geometric_points_in(L))
    return pts


def _cremona_forms(L, rows):
    """Defining forms of the frame-conjugated involution, over L."""
    n = len(rows[0]) - 1
    if len(rows) != n + 1:
        raise ContractViolation("need exactly n+1 frame points")
    B = [list(r) for r in rows]
    BT = [[B[j][i] for j in range(n + 1)] for i in range(n + 1)]
    M = linalg.inverse(L, BT)  # M sends the frame points to coordinate points
    # linear forms y_j = sum_i M[j][i] x_i
    ys = []
    for j in range(n + 1):
        coeffs = {}
        for i in range(n + 1):
            if not L.is_zero(M[j][i]):
                e = [0] * (n + 1)
                e[i] = 1
                coeffs[tuple(e)] = M[j][i]
        ys.append(MultiForm(L, n + 1, 1, coeffs))
    # products prod_{l != j} y_l via prefix/suffix products
    one = MultiForm(L, n + 1, 0, {tuple([0] * (n + 1)): L.one()})
    prefix = [one]
    for y in ys:
        prefix.append(prefix[-1].mul(y))
    suffix = [one]
    for y in reversed(ys):
        suffix.append(suffix[-1].mul(y))
    suffix.reverse()
    prods = [prefix[j].mul(suffix[j + 1]) for j in range(n + 1)]
    # F_i = sum_j B[j][i] * prods[j]  (the outer inverse is B^T itself)
    forms = []
    zero = MultiForm(L, n + 1, n, {})
    for i in range(n + 1):
        acc = zero
        for j in range(n + 1):
            if not L.is_zero(B[j][i]):
                acc = acc.add(prods[j].scale(B[j][i]))
        forms.append(acc)
    return forms


def _joint_normalize_forms(L, forms):
    """Scale a tuple of MultiForms so the first nonzero coefficient is 1."""
    for f in forms:
        for e in sorted(f.coeffs):
            c = f.coeffs[e]
            if not L.is_zero(c):
                inv = L.inv(c)
                return [g.scale(inv) for g in forms]
    raise ContractViolation("all forms vanish")


def cremona_at(center) -> CremonaMap:
    """The Cremona involution at a degree-(n+1) center, over the ground field."""
    parts = _center_parts(center)
    ground = parts[0].ground
    n = parts[0].ambient
    total = sum(pt.degree for pt in parts)
    if total != n + 1:
        raise WrongDegree(f"center degree {total} != ambient+1 = {n + 1}")
    for pt in parts:
        if not pt.separable:
            from .errors import InseparablePoint

            raise InseparablePoint("Cremona centers must be separable")
    L = common_splitting_field(ground, parts)
    rows = [pt.coords for pt in geometric_rows(parts, L)]
    if linalg.rank(L, [list(r) for r in rows]) != n + 1:
        raise NotLGP("center geometric points are not in linearly general position")
    forms = _joint_normalize_forms(L, _cremona_forms(L, rows))
    ground_forms = []
    for f in forms:
        down = {}
        for e, v in f.coeffs.items():
            g = L.as_ground(v)
            if g is None:
                raise ContractViolation("Cremona forms failed to descend")
            down[e] = _ground_scalar(ground, L, g)
        ground_forms.append(MultiForm(ground, n + 1, n, down))
    return CremonaMap(
        ground=ground,
        ambient=n,
        center=tuple(parts),
        forms=tuple(ground_forms),
        splitting=L,
        frame_rows=tuple(rows),
    )


def _ground_scalar(ground, L, base_scalar):
    # flatten() of an L-value yields base scalars; the ground tower has no
    # levels, so its values are base scalars too
    return base_scalar


def apply_cremona(cmap: CremonaMap, x):
    """Image of a point under the involution; degree is preserved."""
    if isinstance(x, ProjPoint):
        forms = cmap.lifted_forms(x.tower)
        image = tuple(f.evaluate(x.coords) for f in forms)
        if all(x.tower.is_zero(c) for c in image):
            raise IndeterminacyLocus("point lies on the fundamental locus")
        return ProjPoint(x.tower, image)
    if isinstance(x, ClosedPoint):
        K = x.residue_tower
        forms = cmap.lifted_forms(K)
        image = tuple(f.evaluate(x.coords) for f in forms)
        if all(K.is_zero(c) for c in image):
            raise IndeterminacyLocus("point lies on the fundamental locus")
        return ClosedPoint.make(x.ground, x.minpoly, image, expect_degree=x.degree)
    raise ContractViolation("apply_cremona expects a ProjPoint or ClosedPoint")


def _line_rows(line: RationalCurveParam):
    a = [f[1] for f in line.forms]  # coefficient of s
    b = [f[0] for f in line.forms]  # coefficient of t
    return a, b


def check_line_avoids_fundamental(cmap: CremonaMap, line: RationalCurveParam):
    L = cmap.splitting
    a, b = _line_rows(line)
    arow = [L.coerce(c) for c in a] if line.domain == cmap.ground else list(a)
    brow = [L.coerce(c) for c in b] if line.domain == cmap.ground else list(b)
    n = cmap.ambient
    for subset in itertools.combinations(range(n + 1), n - 1):
        rows = [list(cmap.frame_rows[i]) for i in subset] + [arow, brow]
        if L.is_zero(linalg.det(L, rows)):
            raise LineMeetsFundamentalLocus(
                f"line meets the span of center points {subset}"
            )


def line_to_curve(cmap: CremonaMap, line: RationalCurveParam) -> RationalCurveParam:
    """Image of a line under the involution: a degree-n curve through the center."""
    if line.degree != 1:
        raise ContractViolation("line_to_curve needs a degree-1 parametrization")
    check_line_avoids_fundamental(cmap, line)
    domain = line.domain
    if domain == cmap.ground:
        forms = cmap.forms
    else:
        forms = cmap.lifted_forms(domain)
    pulled = [f.pullback(line.forms) for f in forms]
    curve = RationalCurveParam(domain, pulled, reduce=True)
    if curve.degree != cmap.ambient:
        raise ContractViolation(
            f"expected a degree-{cmap.ambient} image, got {curve.degree}"
        )
    return curve


# ---------------------------------------------------------------------------
# parameter preimages and incidence
# ---------------------------------------------------------------------------


def param_preimages(curve: RationalCurveParam, coords, domain=None):
    """Parameters (s0:t0) over `domain` mapping to the given point.

    Returns a list of ((s0, t0), multiplicity); empty when the point is not
    on the parametrized curve.  `coords` must live over `domain` (defaults
    to the curve's own level).
    """
    D = domain or curve.domain
    if D == curve.domain:
        forms = curve.forms
    else:
        forms = tuple(tuple(D.coerce(c) for c in f) for f in curve.forms)
    g = None
    m = len(forms)
    for i in range(m):
        for j in range(i + 1, m):
            minor = bf_add(
                D,
                bf_scale(D, forms[i], coords[j]),
                bf_scale(D, forms[j], D.neg(coords[i])),
            )
            if bf_is_zero(D, minor):
                continue
            g = minor if g is None else bf_gcd(D, g, minor)
            if len(g) == 1:
                return []
    if g is None:
        raise ContractViolation("curve forms are proportional; not a curve")
    roots, leftover = bf_roots(D, g)
    if leftover:
        raise ContractViolation("preimage parameter does not split over the level")
    return roots


def passes_through(curve: RationalCurveParam, point: ClosedPoint) -> bool:
    if curve.domain == point.ground:
        # ground-rational curve: one check in the residue ring covers the orbit
        return _on_curve(curve, point.coords, point.residue_tower)
    # curve over an extension: check each geometric point over that level
    pts = point.geometric_points_in(curve.domain)
    return all(_on_curve(curve, p.coords, curve.domain) for p in pts)


def _on_curve(curve, coords, domain) -> bool:
    D = domain
    if D == curve.domain:
        forms = curve.forms
    else:
        forms = tuple(tuple(D.coerce(c) for c in f) for f in curve.forms)
    g = None
    m = len(forms)
    for i in range(m):
        for j in range(i + 1, m):
            minor = bf_add(
                D,
                bf_scale(D, forms[i], coords[j]),
                bf_scale(D, forms[j], D.neg(coords[i])),
            )
            if bf_is_zero(D, minor):
                continue
            g = minor if g is None else bf_gcd(D, g, minor)
            if len(g) == 1:
                return False
    return True


# ---------------------------------------------------------------------------
# the unique rational normal curve through n+3 points
# ---------------------------------------------------------------------------


def _as_parts(points) -> list:
    if isinstance(points, ClosedPoint):
        return [points]
    if isinstance(points, ZeroCycle):
        parts = []
        for pt, m in points.parts:
            if m != 1:
                raise ContractViolation("curve interpolation needs a reduced cycle")
            parts.append(pt)
        return parts
    return sorted(points, key=lambda pt: pt.sort_key())


def _stable_subcenter(parts, target: int):
    """First sub-multiset (in canonical order) with total degree = target."""
    order = sorted(range(len(parts)), key=lambda i: parts[i].sort_key())

    def search(idx, remaining, chosen):
        if remaining == 0:
            return list(chosen)
        if idx == len(order):
            return None
        i = order[idx]
        if parts[i].degree <= remaining:
            got = search(idx + 1, remaining - parts[i].degree, chosen + [i])
            if got is not None:
                return got
        return search(idx + 1, remaining, chosen)

    got = search(0, target, [])
    if got is None:
        return None
    chosen = set(got)
    return (
        [parts[i] for i in sorted(chosen)],
        [parts[i] for i in range(len(parts)) if i not in chosen],
    )


def rnc_through(points, canonicalize: bool = True) -> RationalCurveParam:
    """The unique degree-n curve through closed points of total degree n+3.

    The union of the geometric points must be in linearly general position.
    The output is parametrized over the ground field; over a finite ground it
    is canonically reparametrized through its three least rational points.
    """
    parts = _as_parts(points)
    ground = parts[0].ground
    n = parts[0].ambient
    total = sum(pt.degree for pt in parts)
    if total != n + 3:
        raise WrongDegree(f"total degree {total} != ambient+3 = {n + 3}")
    L = common_splitting_field(ground, parts)
    geo = geometric_rows(parts, L)
    if not in_linearly_general_position(geo):
        raise NotLGP("geometric points are not in linearly general position")
    split = _stable_subcenter(parts, n + 1)
    if split is not None:
        center, residual = split
        cmap = cremona_at(center)
        images = [apply_cremona(cmap, pt) for pt in residual]
        line = line_through_residual(images)
        curve = line_to_curve(cmap, line)
    elif isinstance(ground.base, GF):
        curve = _rnc_geometric_route(ground, n, geo, L)
    else:
        raise UnsupportedLevel(
            "no Galois-stable degree-(n+1) sub-center; descent of the "
            "parametrization is implemented over finite ground fields only"
        )
    if canonicalize and isinstance(ground.base, GF):
        curve = canonical_reparametrization(curve)
    else:
        curve = curve.normalized()
    for part in parts:
        if not passes_through(curve, part):
            raise ContractViolation("constructed curve misses an input point")
    return curve


def _rnc_geometric_route(ground, n, geo, L) -> RationalCurveParam:
    """Build the curve over the splitting field, then descend to the ground."""
    rows = [pt.coords for pt in geo[: n + 1]]
    forms = _cremona_forms(L, rows)
    rest = geo[n + 1 :]
    images = []
    for pt in rest:
        image = tuple(f.evaluate(pt.coords) for f in forms)
        if all(L.is_zero(c) for c in image):
            raise IndeterminacyLocus("interpolation point hits the fundamental locus")
        images.append(normalize_tuple(L, image))
    line = line_through_pair(L, images[0], images[1])
    pulled = [f.pullback(line.forms) for f in forms]
    curve_L = RationalCurveParam(L, pulled, reduce=True)
    if curve_L.degree != n:
        raise ContractViolation("geometric interpolation lost degree")
    return descend_parametrization(curve_L, ground)


def normalize_tuple(D, coords):
    for c in coords:
        if not D.is_zero(c):
            inv = D.inv(c)
            return tuple(D.mul(x, inv) for x in coords)
    raise ContractViolation("zero tuple")


def _mobius_through(D, v1, v2, v3):
    """2x2 matrix sending (1:0), (0:1), (1:1) to the three given parameters."""
    sol = linalg.solve(
        D, [[v1[0], v2[0]], [v1[1], v2[1]]], [v3[0], v3[1]]
    )
    if sol is None:
        raise ContractViolation("parameters are not pairwise distinct")
    a, b = sol
    M = [[D.mul(a, v1[0]), D.mul(b, v2[0])], [D.mul(a, v1[1]), D.mul(b, v2[1])]]
    det = D.sub(D.mul(M[0][0], M[1][1]), D.mul(M[0][1], M[1][0]))
    if D.is_zero(det):
        raise ContractViolation("degenerate parameter triple")
    return M


def _mobius_inverse(D, M):
    return [[M[1][1], D.neg(M[0][1])], [D.neg(M[1][0]), M[0][0]]]


def _mobius_compose(D, A, B):
    return [
        [
            D.add(D.mul(A[0][0], B[0][0]), D.mul(A[0][1], B[1][0])),
            D.add(D.mul(A[0][0], B[0][1]), D.mul(A[0][1], B[1][1])),
        ],
        [
            D.add(D.mul(A[1][0], B[0][0]), D.mul(A[1][1], B[1][0])),
            D.add(D.mul(A[1][0], B[0][1]), D.mul(A[1][1], B[1][1])),
        ],
    ]


def reparametrize(curve: RationalCurveParam, M) -> RationalCurveParam:
    """curve composed with the parameter substitution (s,t) -> M(s,t)."""
    D = curve.domain
    l1 = (M[0][1], M[0][0])  # binary form M00*s + M01*t
    l2 = (M[1][1], M[1][0])
    forms = [bf_compose_linear(D, f, l1, l2) for f in curve.forms]
    return RationalCurveParam(D, forms)


def _frobenius_curve(curve: RationalCurveParam) -> RationalCurveParam:
    L = curve.domain
    return RationalCurveParam(
        L, [tuple(L.frobenius(c) for c in f) for f in curve.forms]
    )


def rational_point_parameters(curve: RationalCurveParam) -> list:
    """Parameters over L of the ground-rational points of an L-curve.

    The ground is GF(p); the parameters are the roots of the fixed-point
    binary form v0*G1(v) - v1*G0(v) of degree p+1, where G = g(v^p) and g is
    the Mobius cocycle comparing the curve with its Frobenius twist.
    """
    L = curve.domain
    if not L.is_finite:
        raise ContractViolation("rational parameters need a finite splitting field")
    p = L.base.p
    sigma = _frobenius_curve(curve)
    # find the Mobius g with sigma(curve) = curve o g by matching 3 parameters
    probes = _parameter_probes(L)
    us, vs = [], []
    for u in probes:
        y = sigma.evaluate(u[0], u[1])
        if all(L.is_zero(c) for c in y):
            continue
        pre = param_preimages(curve, normalize_tuple(L, y))
        if len(pre) != 1 or pre[0][1] != 1:
            continue
        us.append(u)
        vs.append(pre[0][0])
        if len(us) == 3:
            break
    if len(us) < 3:
        raise ContractViolation("could not identify the Frobenius cocycle")
    Mu = _mobius_through(L, us[0], us[1], us[2])
    Mv = _mobius_through(L, vs[0], vs[1], vs[2])
    g = _mobius_compose(L, Mv, _mobius_inverse(L, Mu))
    a, b = g[0]
    c, d = g[1]
    # Phi(v0, v1) = v0*(c v0^p + d v1^p) - v1*(a v0^p + b v1^p), degree p+1
    phi = [L.zero()] * (p + 2)
    phi[p + 1] = L.add(phi[p + 1], c)  # v0^(p+1)
    phi[1] = L.add(phi[1], d)  # v0 v1^p
    phi[p] = L.sub(phi[p], a)  # v0^p v1
    phi[0] = L.sub(phi[0], b)  # v1^(p+1)
    roots, leftover = bf_roots(L, tuple(phi))
    if leftover:
        raise ContractViolation("fixed-parameter form did not split")
    return [r for r, _ in roots]


def _parameter_probes(L):
    probes = [
        (L.one(), L.zero()),
        (L.zero(), L.one()),
        (L.one(), L.one()),
    ]
    if L.num_levels:
        th = L.gen()
        cur = th
        for _ in range(6):
            probes.append((L.one(), cur))
            cur = L.add(L.mul(cur, th), L.one())
    for i in range(2, 8):
        probes.append((L.one(), L.coerce(i)))
    return probes


def descend_parametrization(curve: RationalCurveParam, ground: FieldTower):
    """Reparametrize an L-curve with ground-stable image into ground forms."""
    L = curve.domain
    params = rational_point_parameters(curve)
    chosen = _least_rational_triple(curve, params)
    M = _mobius_through(L, chosen[0][1], chosen[1][1], chosen[2][1])
    new = reparametrize(curve, M).normalized()
    down = []
    for f in new.forms:
        row = []
        for cf in f:
            g = L.as_ground(cf)
            if g is None:
                raise ContractViolation("descended parametrization is not rational")
            row.append(g)
        down.append(tuple(row))
    return RationalCurveParam(ground, down)


def _least_rational_triple(curve, params):
    """Three rational points of least canonical key with their parameters."""
    L = curve.domain
    seen = []
    for v in params:
        coords = curve.evaluate(v[0], v[1])
        pt = normalize_tuple(L, coords)
        key = tuple(L.sort_key(c) for c in pt)
        seen.append((key, v, pt))
    seen.sort(key=lambda kv: kv[0])
    out = []
    keys = set()
    for key, v, pt in seen:
        if key in keys:
            continue
        keys.add(key)
        out.append((pt, v))
        if len(out) == 3:
            return out
    raise ContractViolation("fewer than three rational points on the curve")


def canonical_reparametrization(curve: RationalCurveParam) -> RationalCurveParam:
    """Send (1:0), (0:1), (1:1) to the three least rational points.

    For curves already over GF(p) the rational points are the images of
    P^1(GF(p)); the selection rule matches the one used by the descent, so
    both construction routes produce identical output.
    """
    D = curve.domain
    if not D.is_finite:
        return curve.normalized()
    if D.num_levels == 0:
        p = D.base.p
        params = [(D.one(), D.zero())] + [
            (D.coerce(i), D.one()) for i in range(p)
        ]
        chosen = _least_rational_triple(curve, params)
        M = _mobius_through(D, chosen[0][1], chosen[1][1], chosen[2][1])
        return reparametrize(curve, M).normalized()
    return descend_parametrization(curve, FieldTower(D.base))


# ---------------------------------------------------------------------------
# generalize / specialize: interpolation families over k(t)
# ---------------------------------------------------------------------------


@dataclass
class SpecializationReport:
    """Outcome of specializing the interpolation family at t = 1.

    `curve` is the specialized parametrization (the main component of the
    flat limit); `components` adds residual components when they are forced
    (a single missing line), so that their union passes through the input
    whenever the configuration allows an honest reconstruction.  `missed`
    lists input points on no recovered component.
    """

    degree: int
    curve: RationalCurveParam
    components: tuple
    descended: bool
    passes_through_all: bool
    missed: tuple
    vanished_forms: tuple
    content_vanishing_order: int
    retry_exponent: int

    @property
    def degenerate(self) -> bool:
        return len(self.components) != 1 or not self.passes_through_all

    @property
    def total_degree(self) -> int:
        return sum(c.degree for c in self.components)

    def to_json(self):
        return {
            "degree": self.degree,
            "curve": self.curve.to_json(),
            "components": [c.to_json() for c in self.components],
            "descended": self.descended,
            "passes_through_all": self.passes_through_all,
            "missed": [pt.to_json() for pt in self.missed],
            "vanished_forms": list(self.vanished_forms),
            "content_vanishing_order": self.content_vanishing_order,
            "retry_exponent": self.retry_exponent,
        }


def _chart_index(part: ClosedPoint) -> int:
    K = part.residue_tower
    for j, c in enumerate(part.coords):
        if not K.is_zero(c):
            return j
    raise ContractViolation("point has no nonzero coordinate")


def _companion_coords(part: ClosedPoint, exponent: int, rational_value):
    """Moment-style companion with the same residue field, in the part's chart.

    The companion puts 1 in the chart slot and consecutive powers of theta^e
    (or of a ground scalar for degree-1 parts) in the remaining slots; any
    such configuration is a permuted Vandermonde, so unions of companions
    with distinct parameter sets stay in linearly general position.
    """
    K = part.residue_tower
    n = part.ambient
    j0 = _chart_index(part)
    if part.degree == 1:
        base = K.coerce(rational_value)
    else:
        base = K.pow_(K.gen(), exponent)
    coords = []
    power = K.one()
    for j in range(n + 1):
        if j == j0:
            coords.append(K.one())
        else:
            power = K.mul(power, base)
            coords.append(power)
    return tuple(coords)


def _validated_companions(companions):
    """The companions, or None when their union is not in general position."""
    ground = companions[0].ground
    L = common_splitting_field(ground, companions)
    geo = geometric_rows(companions, L)
    if len({pt.coords for pt in geo}) != len(geo):
        return None
    if not in_linearly_general_position(geo):
        return None
    return companions


def _companion_parts(parts, retry: int):
    """Companion closed points for one retry round; None when ungeneric."""
    ground = parts[0].ground
    companions = []
    rational_used = 0
    for i, part in enumerate(parts):
        exponent = 1 + ((retry + i) % 5)
        if part.degree == 1:
            rational_value = rational_used + retry + 1
            rational_used += 1
        else:
            rational_value = None
        coords = _companion_coords(part, exponent, rational_value)
        try:
            comp = ClosedPoint.make(
                ground, part.minpoly, coords, expect_degree=part.degree
            )
        except ContractViolation:
            return None
        companions.append(comp)
    return _validated_companions(companions)


def _interpolated_parts(parts, companions, ground_t):
    """Closed points over k(t) moving from the companions (t=0) to x (t=1)."""
    from . import funcfield

    out = []
    tv = ground_t.base.gen()  # the parameter t as a ground scalar
    for part, comp in zip(parts, companions):
        K = part.residue_tower
        Kt = funcfield.tower_with_parameter(K, ground_t.base.var)
        j0 = _chart_index(part)
        inv = K.inv(part.coords[j0])
        T = Kt.coerce(tv)
        one_minus_t = Kt.sub(Kt.one(), T)
        coords_t = []
        for j in range(part.ambient + 1):
            ax = funcfield.lift_value(K, Kt, K.mul(part.coords[j], inv))
            ac = funcfield.lift_value(K, Kt, comp.coords[j])
            coords_t.append(Kt.add(Kt.mul(T, ax), Kt.mul(one_minus_t, ac)))
        mp_t = UniPoly(ground_t, tuple(ground_t.coerce(c) for c in part.minpoly.coeffs))
        pt_t, _ = ClosedPoint.make_with_collapse(ground_t, mp_t, tuple(coords_t))
        out.append(pt_t)
    return out


def _family_curve(parts_t, n):
    """The interpolating curve over k(t); descended when a partition exists."""
    ground_t = parts_t[0].ground
    split = _stable_subcenter(parts_t, n + 1)
    if split is not None:
        curve = rnc_through(parts_t, canonicalize=False)
        return curve, True
    L_t = common_splitting_field(ground_t, parts_t)
    geo = geometric_rows(parts_t, L_t)
    if not in_linearly_general_position(geo):
        raise GenericallyNotLGP("interpolated points degenerate at generic t")
    rows = [pt.coords for pt in geo[: n + 1]]
    forms = _cremona_forms(L_t, rows)
    images = []
    for pt in geo[n + 1 :]:
        image = tuple(f.evaluate(pt.coords) for f in forms)
        if all(L_t.is_zero(c) for c in image):
            raise IndeterminacyLocus("interpolation point hits the fundamental locus")
        images.append(normalize_tuple(L_t, image))
    line = line_through_pair(L_t, images[0], images[1])
    pulled = [f.pullback(line.forms) for f in forms]
    curve = RationalCurveParam(L_t, pulled, reduce=True).normalized()
    if curve.degree != n:
        raise ContractViolation("generic interpolation lost degree")
    return curve, False


def _iter_leaves(tower, value):
    if tower.num_levels == 0:
        yield value
        return
    for x in value:
        yield from _iter_leaves(tower.subtower, x)


def _map_leaves(tower, value, fn):
    if tower.num_levels == 0:
        return fn(value)
    return tuple(_map_leaves(tower.subtower, x, fn) for x in value)


def specialize_family(curve: RationalCurveParam, parts, at=None):
    """Clear denominators and joint content, then evaluate the parameter at 1.

    Returns a SpecializationReport; `parts` are the original closed points
    used for the incidence check of the specialized curve.
    """
    from . import funcfield
    from .groundfields import RatFunc, pconst

    D = curve.domain
    ff = D.base
    if not isinstance(ff, FunctionField):
        raise ContractViolation("specialization needs a parameter in the base")
    base = ff.base
    at = base.one() if at is None else base.coerce(at)
    ground = parts[0].ground
    # common denominator across every coefficient leaf
    den = (base.one(),)
    for f in curve.forms:
        for c in f:
            for leaf in _iter_leaves(D, c):
                g = pgcd(base, den, leaf.den)
                den = pdivmod(base, pmul(base, den, leaf.den), g)[0]
    scale = D.coerce(RatFunc(den, (base.one(),)))
    forms = [tuple(D.mul(c, scale) for c in f) for f in curve.forms]
    # joint content over k[t]
    content = ()
    for f in forms:
        for c in f:
            for leaf in _iter_leaves(D, c):
                if pdeg(leaf.den) != 0:
                    raise ContractViolation("denominator clearing failed")
                if leaf.num:
                    content = pgcd(base, content, leaf.num)
    if not content:
        raise ContractViolation("the family curve is identically zero")
    inv_content = D.coerce(RatFunc((base.one(),), content))
    forms = [tuple(D.mul(c, inv_content) for c in f) for f in forms]
    # order of vanishing of the removed content at the specialization value
    lin = (base.neg(at), base.one())
    order = 0
    rem = content
    while pdeg(rem) >= 1:
        q, r = pdivmod(base, rem, lin)
        if r:
            break
        order += 1
        rem = q
    # evaluate, tracking forms that vanish identically
    D0 = funcfield.constant_tower(D)
    spec_forms = []
    vanished = []
    for idx, f in enumerate(forms):
        sf = tuple(funcfield.specialize_value(D, D0, c, at) for c in f)
        if all(D0.is_zero(c) for c in sf):
            vanished.append(idx)
        spec_forms.append(sf)
    curve0 = RationalCurveParam(D0, spec_forms, reduce=True)
    descended = D0 == ground
    if not descended and isinstance(ground.base, GF):
        try:
            curve0 = descend_parametrization(curve0, ground)
            descended = True
        except (ContractViolation, ZeroDivisionError):
            pass
    if descended and isinstance(ground.base, GF):
        try:
            curve0 = canonical_reparametrization(curve0)
        except (ContractViolation, ZeroDivisionError):
            curve0 = curve0.normalized()
    else:
        curve0 = curve0.normalized()
    n = parts[0].ambient
    components = [curve0]
    missed = [part for part in parts if not passes_through(curve0, part)]
    if missed and descended and n - curve0.degree == 1:
        # the flat limit has one residual component and it is a line; it must
        # carry every missed point, which pins it down
        line = _spanning_line(ground, missed)
        if line is not None and all(passes_through(line, pt) for pt in missed):
            components.append(line)
            missed = []
    return SpecializationReport(
        degree=curve0.degree,
        curve=curve0,
        components=tuple(components),
        descended=descended,
        passes_through_all=not missed,
        missed=tuple(missed),
        vanished_forms=tuple(vanished),
        content_vanishing_order=order,
        retry_exponent=0,
    )


def _spanning_line(ground, parts):
    """The ground-rational line spanned by the parts, or None if not a line."""
    rows = []
    n = parts[0].ambient
    for pt in parts:
        K = pt.residue_tower
        flat = [K.flatten(c) for c in pt.coords]
        for j in range(pt.degree):
            rows.append([flat[i][j] for i in range(n + 1)])
    echelon = [list(r) for r in rows]
    r, _ = linalg.row_echelon(ground, echelon)
    if r != 2:
        return None
    basis = [row for row in echelon if any(not ground.is_zero(c) for c in row)]
    return line_through_pair(ground, basis[0], basis[1])


def rnc_generic_then_specialize(points, at=None, companions=None):
    """Interpolate toward a companion in linearly general position, then
    specialize the unique generic curve back at t = 1.

    Returns (family curve over k(t), SpecializationReport).  Raises
    GenericallyNotLGP when no companion makes the family generically
    general within the retry policy.  `companions` overrides the companion
    policy with explicit closed points (matched to the canonically sorted
    parts); a single attempt is made in that case.
    """
    parts = _as_parts(points)
    ground = parts[0].ground
    n = parts[0].ambient
    total = sum(pt.degree for pt in parts)
    if total != n + 3:
        raise WrongDegree(f"total degree {total} != ambient+3 = {n + 3}")
    ground_t = FieldTower(FunctionField(ground.base, "t"))
    if companions is not None:
        if _validated_companions(list(companions)) is None:
            raise GenericallyNotLGP("prescribed companion is not in general position")
        rounds = [list(companions)]
    else:
        rounds = None
    last_error = None
    for retry in range(5):
        if rounds is not None:
            comps = rounds[0] if retry == 0 else None
            if comps is None:
                break
        else:
            comps = _companion_parts(parts, retry)
        if comps is None:
            last_error = GenericallyNotLGP(
                f"companion configuration failed at retry {retry}"
            )
            continue
        parts_t = _interpolated_parts(parts, comps, ground_t)
        try:
            family, _ = _family_curve(parts_t, n)
        except (GenericallyNotLGP, ContractViolation) as exc:
            last_error = exc
            continue
        report = specialize_family(family, parts, at=at)
        report.retry_exponent = retry + 1
        return family, report
    raise last_error or GenericallyNotLGP("no usable companion found")
