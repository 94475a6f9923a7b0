"""Quadratic forms on V_T, the cocycle c_Q, the torus representation, and Voronoi fans.

Lattice points are integer vectors in V_T-coordinates; rational points are
tuples of Fractions.  Every enumeration uses a certified box: a point within
Q-distance^2 R of x satisfies |y_i - x_i| <= sqrt(R * (Q^{-1})_ii).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import CapExceededError, InputError, UnsupportedError
from .lattice import (Cone, Fan, FiniteAbelianGroup, Vector, cokernel, dot, is_integral, matvec,
                      primitive, rank, solve, vadd, vector_to_json, scalar_to_json, vsub)
from .roots import QuadraticForm

DEFAULT_BOX_CAP = 2_000_000


def as_form(q) -> QuadraticForm:
    return q if isinstance(q, QuadraticForm) else QuadraticForm(q)


def _frac(x) -> Fraction:
    return Fraction(x)


def _norm(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


# ---------------------------------------------------------------------------
# groups, cocycle, torus representation

def z_q(q) -> FiniteAbelianGroup:
    """Torsion of coker(Q: V_T -> X), the group Z_Q up to duality."""
    q = as_form(q)
    if not q.is_integral:
        raise InputError("Q is not an integral map V_T -> X")
    free, tors = cokernel(q.gram)
    if free:
        raise InputError("Q is degenerate")
    return tors


@dataclass(frozen=True)
class CocycleValue:
    character: Vector          # Q(eta, .) in X-coordinates
    character_part: object     # Q(eta, H)
    central_exponent: object   # Q(eta, eta) / 2
    level: object              # the formal coordinate r
    value: object              # Q(eta, H) + r Q(eta, eta) / 2

    def to_json(self) -> dict:
        return {"character": vector_to_json(self.character),
                "character_part": scalar_to_json(self.character_part),
                "central_exponent": scalar_to_json(self.central_exponent),
                "level": scalar_to_json(self.level), "value": scalar_to_json(self.value)}


def cocycle_eval(q, eta: Sequence, H: Sequence, r=1) -> CocycleValue:
    """c_Q(eta, H, r) = Q(eta, H) + r Q(eta, eta) / 2, kept as its two exact parts."""
    q = as_form(q)
    if len(eta) != q.rank or len(H) != q.rank:
        raise InputError("dimension mismatch")
    pairing = q(eta, H)
    central = _norm(_frac(q.norm(eta)) / 2)
    return CocycleValue(q.as_map(eta), pairing, central, _norm(r), _norm(pairing + _frac(r) * central))


def in_form_image(q, mu: Sequence) -> bool:
    """Is mu in Q(V_T)?"""
    return is_integral(matvec(as_form(q).inverse_gram, mu))


def transported_norm(q, mu: Sequence):
    """Q*(mu, mu) with Q*(Q(a), Q(b)) = Q(a, b), i.e. mu . Q^{-1} mu."""
    q = as_form(q)
    return _norm(dot(mu, matvec(q.inverse_gram, mu)))


@dataclass(frozen=True)
class LTActionRecord:
    weight: Vector               # mu + Q(eta)
    torus_character: Vector      # mu, the character by which t acts on v_mu
    u_exponent: object           # Q*(mu, mu)/2 on v_mu
    new_u_exponent: object       # Q*(mu', mu')/2 on the image vector

    def to_json(self) -> dict:
        return {"weight": vector_to_json(self.weight), "torus_character": vector_to_json(self.torus_character),
                "u_exponent": scalar_to_json(self.u_exponent),
                "new_u_exponent": scalar_to_json(self.new_u_exponent)}


def lt_weight_action(q, eta: Sequence, mu: Sequence) -> LTActionRecord:
    """eta . v_mu = v_{mu + Q(eta)}; u . v_mu = u^{Q*(mu,mu)/2} v_mu; t . v_mu = mu(t) v_mu."""
    q = as_form(q)
    if not in_form_image(q, mu):
        raise InputError("mu is not in Q(V_T)")
    new = vadd(mu, q.as_map(eta))
    return LTActionRecord(new, tuple(mu), _norm(_frac(transported_norm(q, mu)) / 2),
                          _norm(_frac(transported_norm(q, new)) / 2))


def exponent_f(q, t, beta: Sequence, eta: Sequence):
    """f(t, beta; eta) = t Q(eta, eta)/2 + Q(beta, eta)."""
    q = as_form(q)
    if t <= 0:
        raise InputError("t must be positive")
    return _norm(_frac(t) * q.norm(eta) / 2 + q(beta, eta))


# ---------------------------------------------------------------------------
# certified enumeration

def _isqrt_ceil(x: Fraction) -> int:
    """Smallest integer b with b^2 >= x (x >= 0)."""
    n = math.ceil(x)
    b = math.isqrt(n)
    return b if b * b >= n else b + 1


def box_around(q: QuadraticForm, x: Sequence, radius_sq, cap: int = DEFAULT_BOX_CAP) -> list[Vector]:
    """All integer points y with Q(y - x) <= radius_sq (filtered exactly)."""
    qi = q.inverse_gram
    ranges = []
    for i, xi in enumerate(x):
        b = _isqrt_ceil(_frac(radius_sq) * qi[i][i])
        lo = math.ceil(_frac(xi) - b)
        hi = math.floor(_frac(xi) + b)
        ranges.append(range(lo, hi + 1))
    if math.prod(len(r) for r in ranges) > cap:
        raise CapExceededError("enumeration box exceeds the cap")
    out = []
    for y in itertools.product(*ranges):
        d = vsub(y, x)
        if q.norm(d) <= radius_sq:
            out.append(tuple(y))
    return out


def _round(x: Sequence) -> Vector:
    return tuple(math.floor(_frac(v) + Fraction(1, 2)) for v in x)


def closest_vectors(q, x: Sequence) -> tuple[list[Vector], object]:
    """All lattice points at minimal Q-distance from x, and that squared distance."""
    q = as_form(q)
    r0 = q.norm(vsub(_round(x), x))
    pts = box_around(q, x, r0)
    best = min(q.norm(vsub(p, x)) for p in pts)
    return sorted(p for p in pts if q.norm(vsub(p, x)) == best), _norm(best)


def minimizer_set(q, t, beta: Sequence) -> list[Vector]:
    """argmin over V_T of eta -> f(t, beta; eta): the Q-nearest lattice points to -beta/t."""
    q = as_form(q)
    if t <= 0:
        raise InputError("t must be positive")
    x = tuple(-_frac(b) / t for b in beta)
    return closest_vectors(q, x)[0]


# ---------------------------------------------------------------------------
# Voronoi and Delaunay

def relevant_vectors(q) -> list[Vector]:
    """Voronoi-relevant vectors: v with +-v the unique shortest vectors of v + 2L."""
    q = as_form(q)
    n = q.rank
    out = []
    for c in itertools.product((0, 1), repeat=n):
        if not any(c):
            continue
        radius = q.norm(c)
        cand = [v for v in box_around(q, tuple(0 for _ in range(n)), radius)
                if all((vi - ci) % 2 == 0 for vi, ci in zip(v, c))]
        best = min(q.norm(v) for v in cand)
        shortest = [v for v in cand if q.norm(v) == best]
        if len(shortest) == 2:
            out.extend(shortest)
    return sorted(out)


@dataclass(frozen=True)
class VoronoiCell:
    """{x : Q(x - s, v) <= Q(v, v)/2 for every relevant v}, stored as normal . x <= rhs."""

    center: Vector
    facets: tuple[tuple[Vector, Vector, object], ...]   # (relevant v, normal Qv, rhs)
    vertices: tuple[Vector, ...]

    def contains(self, x: Sequence) -> bool:
        return all(dot(nrm, x) <= rhs for _, nrm, rhs in self.facets)

    def interior_contains(self, x: Sequence) -> bool:
        return all(dot(nrm, x) < rhs for _, nrm, rhs in self.facets)

    def interval(self) -> tuple:
        """Endpoints for a rank-one cell."""
        if len(self.center) != 1:
            raise InputError("interval() is for rank one")
        return tuple(sorted(v[0] for v in self.vertices))

    def to_json(self) -> dict:
        return {
            "center": list(self.center),
            "facets": [{"vector": vector_to_json(v), "normal": vector_to_json(nrm), "rhs": scalar_to_json(rhs)}
                       for v, nrm, rhs in self.facets],
            "vertices": [vector_to_json(v) for v in self.vertices],
        }


def _cell_vertices(n: int, facets) -> tuple[Vector, ...]:
    verts = set()
    for sub in itertools.combinations(facets, n):
        a = tuple(nrm for _, nrm, _ in sub)
        b = tuple(rhs for _, _, rhs in sub)
        if rank(a) < n:
            continue
        x = solve(a, b)
        if all(dot(nrm, x) <= rhs for _, nrm, rhs in facets):
            verts.add(tuple(_norm(v) for v in x))
    return tuple(sorted(verts))


def voronoi_cell(q, center: Sequence | None = None, relevant: Sequence[Vector] | None = None) -> VoronoiCell:
    q = as_form(q)
    n = q.rank
    center = tuple(center) if center is not None else tuple(0 for _ in range(n))
    if len(center) != n or not is_integral(center):
        raise InputError("center must be a lattice point of the right rank")
    rel = relevant_vectors(q) if relevant is None else list(relevant)
    facets = []
    for v in rel:
        nrm = q.as_map(v)
        facets.append((v, nrm, _norm(_frac(q.norm(v)) / 2 + dot(nrm, center))))
    verts = _cell_vertices(n, facets) if n <= 3 else ()
    return VoronoiCell(center, tuple(facets), verts)


def cells_containing(q, x: Sequence, relevant: Sequence[Vector] | None = None) -> list[Vector]:
    """Centers s whose Voronoi cell (H-description) contains x."""
    q = as_form(q)
    rel = relevant_vectors(q) if relevant is None else list(relevant)
    # every nearest point is within the distance to the rounded point
    r0 = q.norm(vsub(_round(x), x))
    out = []
    for s in box_around(q, x, r0):
        if all(q(vsub(x, s), v) <= _frac(q.norm(v)) / 2 for v in rel):
            out.append(s)
    return sorted(out)


@dataclass(frozen=True)
class DelaunayCell:
    point: Vector
    radius_sq: object
    vertices: tuple[Vector, ...]

    def to_json(self) -> dict:
        return {"point": vector_to_json(self.point), "radius_sq": scalar_to_json(self.radius_sq),
                "vertices": [list(v) for v in self.vertices]}


def delaunay_cell(q, p: Sequence) -> DelaunayCell:
    """Lattice points on the smallest empty Q-ball around p, with its squared radius."""
    q = as_form(q)
    pts, r = closest_vectors(q, tuple(_frac(x) for x in p))
    return DelaunayCell(tuple(_norm(x) for x in p), r, tuple(pts))


# ---------------------------------------------------------------------------
# LT fan

@dataclass(frozen=True)
class LTFan:
    """Cones over Voronoi cells placed at height 1 in V_T + Z (height last)."""

    form: QuadraticForm
    window: int
    centers: tuple[Vector, ...]
    fan: Fan

    @property
    def rays(self) -> tuple[Vector, ...]:
        return self.fan.rays

    def cone_of(self, center: Sequence) -> Cone:
        return cone_over_cell(voronoi_cell(self.form, center))

    def to_json(self) -> dict:
        out = self.fan.to_json()
        out.update({"height": "last", "window": self.window, "centers": [list(c) for c in self.centers],
                    "gram": [vector_to_json(r) for r in self.form.gram],
                    "note": "finite window of an infinite fan; centers with |n|_inf <= window"})
        return out


def cone_over_cell(cell: VoronoiCell) -> Cone:
    n = len(cell.center)
    gens = tuple(primitive(tuple(v) + (1,)) for v in cell.vertices)
    return Cone(n + 1, gens, "V_T+Z")


def lt_fan(q, window: int = 2) -> LTFan:
    q = as_form(q)
    n = q.rank
    if n > 3:
        raise UnsupportedError("LT fan needs cell vertices, available for rank <= 3")
    if window < 0:
        raise InputError("window must be non-negative")
    rel = relevant_vectors(q)
    base = voronoi_cell(q, None, rel)
    centers = tuple(itertools.product(range(-window, window + 1), repeat=n))
    cones = []
    for s in centers:
        verts = [vadd(v, s) for v in base.vertices]
        cones.append(Cone(n + 1, tuple(primitive(tuple(v) + (1,)) for v in verts), "V_T+Z"))
    return LTFan(q, window, centers, Fan(n + 1, frozenset(cones), "V_T+Z"))


@dataclass(frozen=True)
class LTCheckReport:
    t: int
    window: int
    checked: int
    mismatches: tuple[Vector, ...]
    classes: tuple[tuple[tuple[Vector, ...], tuple[Vector, ...]], ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {"t": self.t, "window": self.window, "checked": self.checked, "ok": self.ok,
                "mismatches": [list(b) for b in self.mismatches],
                "classes": [{"minimizers": [list(p) for p in ms], "betas": [list(b) for b in bs]}
                            for ms, bs in self.classes],
                "note": "classes restricted to the window |beta|_inf <= window"}


def brute_minimizers(q: QuadraticForm, t, beta: Sequence) -> list[Vector]:
    """Minimize f directly over a certified box (no nearest-point reformulation)."""
    x = tuple(-_frac(b) / t for b in beta)
    start = _round(x)
    f0 = exponent_f(q, t, beta, start)
    # f(eta) <= f0  <=>  Q(eta - x) <= Q(start - x)
    radius = q.norm(vsub(start, x))
    vals = {p: exponent_f(q, t, beta, p) for p in box_around(q, x, radius)}
    best = min(vals.values())
    if best > f0:
        raise InputError("enumeration box missed the starting point")
    return sorted(p for p, v in vals.items() if v == best)


def lt_fan_vs_minimizers_check(q, t: int, window: int) -> LTCheckReport:
    """Classes of equal minimizer sets agree with Voronoi classification of -beta/t."""
    q = as_form(q)
    if t <= 0:
        raise InputError("t must be positive")
    rel = relevant_vectors(q)
    n = q.rank
    mismatches = []
    classes: dict[tuple, list] = {}
    count = 0
    for beta in itertools.product(range(-window, window + 1), repeat=n):
        count += 1
        mins = tuple(brute_minimizers(q, t, beta))
        cells = tuple(cells_containing(q, tuple(Fraction(-b, t) for b in beta), rel))
        if mins != cells:
            mismatches.append(beta)
        classes.setdefault(mins, []).append(beta)
    cls = tuple(sorted((k, tuple(v)) for k, v in classes.items()))
    return LTCheckReport(t, window, count, tuple(mismatches), cls)
