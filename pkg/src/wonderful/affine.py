"""Untwisted affine root data: alcove, affine Weyl group, diagrams, parahoric Levis.

Nodes are labelled 0..r with 0 the affine node.  Coweights and alcove points
use V_T-coordinates of the underlying :class:`~wonderful.roots.RootDatum`.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CapExceededError, InputError, InvariantViolation
from .lattice import (FiniteAbelianGroup, Matrix, Vector, as_matrix, cokernel, dot, identity,
                      inverse, matmul, matrix_to_json, matvec, scalar_to_json, transpose, vadd,
                      vector_to_json, vscale)
from .roots import (QuadraticForm, RootDatum, basic_form, classify_cartan, highest_coroot,
                    highest_root, positive_roots)

DEFAULT_LENGTH_CAP = 40
DEFAULT_ELEMENT_CAP = 200000


@dataclass(frozen=True)
class AffineCharacter:
    """(n, lambda, h): loop-rotation weight, finite weight (X-coordinates), level."""

    n: Fraction | int
    lam: Vector
    h: Fraction | int

    def __post_init__(self):
        object.__setattr__(self, "n", _norm(self.n))
        object.__setattr__(self, "h", _norm(self.h))
        object.__setattr__(self, "lam", tuple(_norm(x) for x in self.lam))

    def __add__(self, other: "AffineCharacter") -> "AffineCharacter":
        return AffineCharacter(self.n + other.n, vadd(self.lam, other.lam), self.h + other.h)

    def to_json(self) -> dict:
        return {"n": scalar_to_json(self.n), "lambda": vector_to_json(self.lam), "h": scalar_to_json(self.h)}


def _norm(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


@dataclass(frozen=True)
class AffineRootDatum:
    base: RootDatum

    def __post_init__(self):
        if not self.base.is_irreducible:
            raise InputError("affine root data need an irreducible finite datum")

    @property
    def rank(self) -> int:
        return self.base.rank

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(range(self.rank + 1))

    @functools.cached_property
    def theta(self) -> Vector:
        """Highest root, simple-root coefficients (the marks a_1..a_r)."""
        return highest_root(self.base)

    @functools.cached_property
    def theta_coroot(self) -> Vector:
        """theta^vee, simple-coroot coefficients (the comarks a_1^vee..a_r^vee)."""
        return highest_coroot(self.base)

    @property
    def marks(self) -> tuple[int, ...]:
        return (1,) + tuple(self.theta)

    @property
    def comarks(self) -> tuple[int, ...]:
        return (1,) + tuple(self.theta_coroot)

    @functools.cached_property
    def theta_weight(self) -> Vector:
        """theta in X-coordinates."""
        return self.base.root_to_weight(self.theta)

    @functools.cached_property
    def theta_coweight(self) -> Vector:
        """theta^vee in V_T-coordinates."""
        return self.base.coroot_to_coweight(self.theta_coroot)

    @functools.cached_property
    def affine_cartan(self) -> Matrix:
        a = self.base.cartan
        r = self.rank
        th, thv = self.theta, self.theta_coroot
        m = [[0] * (r + 1) for _ in range(r + 1)]
        m[0][0] = 2
        for j in range(r):
            # <alpha_j, alpha_0^vee> = -<alpha_j, theta^vee>, <alpha_0, alpha_i^vee> = -<theta, alpha_i^vee>
            m[0][j + 1] = -sum(thv[k] * a[k][j] for k in range(r))
            m[j + 1][0] = -sum(a[j][k] * th[k] for k in range(r))
            for i in range(r):
                m[i + 1][j + 1] = a[i][j]
        out = as_matrix(m)
        if any(sum(out[i][j] * self.marks[j] for j in range(r + 1)) for i in range(r + 1)):
            raise InvariantViolation("marks are not a null vector of the affine Cartan matrix")
        return out

    def root_function(self, i: int):
        """(constant, linear part) of the affine function alpha_i on V_T (X-coordinates)."""
        if i == 0:
            return 1, tuple(-x for x in self.theta_weight)
        return 0, self.base.simple_roots[i - 1]

    def evaluate(self, i: int, zeta: Sequence):
        c, lin = self.root_function(i)
        return _norm(c + dot(lin, zeta))

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "theta": list(self.theta),
            "theta_coroot": list(self.theta_coroot),
            "affine_cartan": matrix_to_json(self.affine_cartan),
        }


def affine_root_datum(rd: RootDatum) -> AffineRootDatum:
    return AffineRootDatum(rd)


def affine_simple_roots(ard: AffineRootDatum) -> list[AffineCharacter]:
    """[(1, -theta, 0), (0, alpha_1, 0), ..., (0, alpha_r, 0)]."""
    out = [AffineCharacter(1, tuple(-x for x in ard.theta_weight), 0)]
    out += [AffineCharacter(0, a, 0) for a in ard.base.simple_roots]
    return out


# ---------------------------------------------------------------------------
# alcove

@dataclass(frozen=True)
class AlcoveFacet:
    node: int
    normal: Vector
    offset: Fraction | int

    def value(self, zeta: Sequence):
        return _norm(self.offset + dot(self.normal, zeta))

    def equation(self, names: Sequence[str] = ("x", "y", "z", "w")) -> str:
        return hyperplane_string(self.normal, self.offset, names)

    def to_json(self) -> dict:
        return {"node": self.node, "normal": vector_to_json(self.normal),
                "offset": scalar_to_json(self.offset), "equation": self.equation()}


@dataclass(frozen=True)
class Alcove:
    """{zeta : offset_i + normal_i . zeta >= 0 for i = 0..r} with its vertices."""

    facets: tuple[AlcoveFacet, ...]
    vertices: tuple[tuple[int, Vector], ...]

    def contains(self, zeta: Sequence) -> bool:
        return all(f.value(zeta) >= 0 for f in self.facets)

    def interior_contains(self, zeta: Sequence) -> bool:
        return all(f.value(zeta) > 0 for f in self.facets)

    @property
    def barycenter(self) -> Vector:
        n = len(self.vertices)
        total = functools.reduce(vadd, (v for _, v in self.vertices))
        return vscale(Fraction(1, n), total)

    def to_json(self) -> dict:
        return {
            "facets": [f.to_json() for f in self.facets],
            "vertices": [{"node": j, "point": vector_to_json(v)} for j, v in self.vertices],
        }


def _fmt(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def hyperplane_string(normal: Sequence, offset, names: Sequence[str] = ("x", "y", "z", "w")) -> str:
    """Solve offset + normal . v = 0 for the last variable with nonzero coefficient."""
    normal = [Fraction(x) for x in normal]
    offset = Fraction(offset)
    k = max(i for i, x in enumerate(normal) if x != 0)
    terms = []
    for i, x in enumerate(normal):
        if i == k or x == 0:
            continue
        c = -x / normal[k]
        if c == 1:
            terms.append(names[i])
        elif c == -1:
            terms.append(f"-{names[i]}")
        elif c.denominator == 1:
            terms.append(f"{c.numerator}{names[i]}")
        elif abs(c.numerator) == 1:
            terms.append(f"{'-' if c < 0 else ''}{names[i]}/{c.denominator}")
        else:
            terms.append(f"{c.numerator}{names[i]}/{c.denominator}")
    const = -offset / normal[k]
    if const or not terms:
        terms.append(_fmt(const))
    rhs = " + ".join(terms).replace("+ -", "- ")
    return f"{names[k]} = {rhs}"


def alcove_vertices(ard: AffineRootDatum) -> list[tuple[int, Vector]]:
    """eta_0 = 0 and eta_j = omega_j^vee / a_j, each non-vanishing only at alpha_j."""
    r = ard.rank
    out = [(0, tuple(0 for _ in range(r)))]
    for j in range(1, r + 1):
        out.append((j, vscale(Fraction(1, ard.theta[j - 1]), ard.base.fundamental_coweights[j - 1])))
    for j, v in out:
        vals = [ard.evaluate(i, v) for i in ard.nodes]
        if any(vals[i] != 0 for i in ard.nodes if i != j) or vals[j] <= 0:
            raise InvariantViolation(f"vertex {j} does not cut out the expected walls")
    return out


def alcove(ard: AffineRootDatum) -> Alcove:
    facets = []
    for i in ard.nodes:
        c, lin = ard.root_function(i)
        facets.append(AlcoveFacet(i, lin, c))
    return Alcove(tuple(facets), tuple(alcove_vertices(ard)))


# ---------------------------------------------------------------------------
# affine Weyl action on characters

def affine_weyl_action(ard: AffineRootDatum, eta: Sequence, chi: AffineCharacter,
                       form: QuadraticForm | None = None) -> AffineCharacter:
    """Translation by eta in V_T acting on (n, lambda, h).

    (n, lambda, h) -> (n - lambda(eta) - (h/2) Q(eta, eta), lambda + h Q(eta, .), h).
    The quantity 2 h n + Q^{-1}(lambda, lambda) is preserved and the action is additive in eta.
    """
    q = form or basic_form(ard.base)
    if len(eta) != q.rank or len(chi.lam) != q.rank:
        raise InputError("dimension mismatch")
    h = chi.h
    n = chi.n - dot(chi.lam, eta) - Fraction(h) / 2 * q.norm(eta)
    lam = vadd(chi.lam, vscale(h, q.as_map(eta)))
    return AffineCharacter(n, lam, h)


def action_invariant(q: QuadraticForm, chi: AffineCharacter):
    """2 h n + Q^{-1}(lambda, lambda), preserved by affine_weyl_action."""
    return _norm(2 * chi.h * chi.n + dot(chi.lam, matvec(q.inverse_gram, chi.lam)))


# ---------------------------------------------------------------------------
# affine Weyl group

@dataclass(frozen=True)
class AffineWeylElement:
    """zeta -> w(zeta + eta) on V_T; ``w`` is a matrix in V_T-coordinates."""

    word: tuple[int, ...]
    w: Matrix
    eta: Vector

    @property
    def length(self) -> int:
        return len(self.word)

    @functools.cached_property
    def key(self):
        return (self.w, self.eta)

    def apply(self, zeta: Sequence) -> Vector:
        return matvec(self.w, vadd(zeta, self.eta))

    def __mul__(self, other: "AffineWeylElement") -> "AffineWeylElement":
        w2_inv = inverse(other.w)
        return AffineWeylElement(self.word + other.word, matmul(self.w, other.w),
                                 vadd(matvec(w2_inv, self.eta), other.eta))

    @property
    def inverse(self) -> "AffineWeylElement":
        # zeta -> w^{-1} zeta - eta = w^{-1}(zeta - w eta)
        return AffineWeylElement(tuple(reversed(self.word)), inverse(self.w),
                                 tuple(-x for x in matvec(self.w, self.eta)))

    def __eq__(self, other):
        return isinstance(other, AffineWeylElement) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def to_json(self) -> dict:
        return {"word": list(self.word), "length": self.length, "w": matrix_to_json(self.w),
                "eta": vector_to_json(self.eta)}


def affine_generators(ard: AffineRootDatum) -> list[AffineWeylElement]:
    """s_0, s_1, ..., s_r as affine maps of V_T."""
    r = ard.rank
    gens = []
    th, thv = ard.theta_weight, ard.theta_coweight
    # s_theta(zeta) = zeta - theta(zeta) theta^vee;  s_0 = s_theta followed by + theta^vee
    s_theta = as_matrix([[int(i == j) - thv[i] * th[j] for j in range(r)] for i in range(r)])
    gens.append(AffineWeylElement((0,), s_theta, matvec(s_theta, thv)))
    for i, s in enumerate(ard.base.simple_reflections):
        gens.append(AffineWeylElement((i + 1,), s.v_matrix, tuple(0 for _ in range(r))))
    return gens


def identity_element(ard: AffineRootDatum) -> AffineWeylElement:
    r = ard.rank
    return AffineWeylElement((), identity(r), tuple(0 for _ in range(r)))


def inversion_length(ard: AffineRootDatum, g: AffineWeylElement) -> int:
    """Number of affine hyperplanes separating Al_0 from g(Al_0)."""
    p = g.apply(alcove(ard).barycenter)
    total = 0
    for c in positive_roots(ard.base, "X"):
        total += abs(Fraction(dot(c, p)).__floor__())
    return total


def affine_weyl_enumerate(ard: AffineRootDatum, length_bound: int,
                          length_cap: int = DEFAULT_LENGTH_CAP,
                          element_cap: int = DEFAULT_ELEMENT_CAP) -> list[AffineWeylElement]:
    """All elements of length <= bound, BFS order, lengths cross-checked by inversion count."""
    if length_bound < 0:
        raise InputError("length bound must be non-negative")
    if length_bound > length_cap:
        raise CapExceededError(f"length bound {length_bound} exceeds the cap {length_cap}")
    gens = affine_generators(ard)
    e = identity_element(ard)
    seen = {e.key}
    out, layer = [e], [e]
    for _ in range(length_bound):
        nxt = []
        for g in layer:
            for s in gens:
                gs = g * s
                if gs.key not in seen:
                    seen.add(gs.key)
                    nxt.append(gs)
        nxt.sort(key=lambda g: g.word)
        out.extend(nxt)
        if len(out) > element_cap:
            raise CapExceededError(f"more than {element_cap} elements up to length {length_bound}")
        layer = nxt
    for g in out:
        if inversion_length(ard, g) != g.length:
            raise InvariantViolation(f"BFS length of {g.word} disagrees with the inversion count")
    return out


def _check_subset(ard: AffineRootDatum, J: Iterable[int]) -> frozenset[int]:
    J = frozenset(J)
    if not J <= set(ard.nodes):
        raise InputError(f"J must be a subset of {{0..{ard.rank}}}")
    if J == set(ard.nodes):
        raise InputError("J = {0..r} generates an infinite parabolic subgroup")
    return J


def coset_representatives(ard: AffineRootDatum, J: Iterable[int], length_bound: int,
                          side: str = "left", **caps) -> list[AffineWeylElement]:
    """Minimal-length representatives of W^aff / W_J (side='left') or W_J \\ W^aff ('right').

    W_J is generated by s_j, j in J.  A representative of wW_J is minimal iff
    l(w s_j) > l(w) for all j in J.
    """
    J = _check_subset(ard, J)
    gens = affine_generators(ard)
    out = []
    for w in affine_weyl_enumerate(ard, length_bound, **caps):
        ok = True
        for j in J:
            other = w * gens[j] if side == "left" else gens[j] * w
            if inversion_length(ard, other) < w.length:
                ok = False
                break
        if ok:
            out.append(w)
    return out


def parabolic_subgroup(ard: AffineRootDatum, J: Iterable[int], length_bound: int | None = None,
                       element_cap: int = DEFAULT_ELEMENT_CAP) -> list[AffineWeylElement]:
    """W_J for a proper J, by BFS (optionally truncated at a length bound)."""
    J = sorted(_check_subset(ard, J))
    gens = [affine_generators(ard)[j] for j in J]
    e = identity_element(ard)
    seen, out, layer = {e.key}, [e], [e]
    depth = 0
    while layer and (length_bound is None or depth < length_bound):
        nxt = []
        for g in layer:
            for s in gens:
                gs = g * s
                if gs.key not in seen:
                    seen.add(gs.key)
                    nxt.append(gs)
        nxt.sort(key=lambda g: g.word)
        out.extend(nxt)
        if len(out) > element_cap:
            raise CapExceededError("parabolic subgroup exceeds the element cap")
        layer = nxt
        depth += 1
    return out


def fold_to_alcove(ard: AffineRootDatum, zeta: Sequence, max_steps: int = 10000) -> tuple[AffineWeylElement, Vector]:
    """(g, g(zeta)) with g(zeta) in the closed fundamental alcove."""
    gens = affine_generators(ard)
    g = identity_element(ard)
    p = tuple(zeta)
    for _ in range(max_steps):
        bad = next((i for i in ard.nodes if ard.evaluate(i, p) < 0), None)
        if bad is None:
            return g, p
        g = gens[bad] * g
        p = gens[bad].apply(p)
    raise InvariantViolation("alcove folding did not terminate")


# ---------------------------------------------------------------------------
# diagrams

@dataclass(frozen=True)
class AffineDynkinDiagram:
    nodes: tuple[int, ...]
    bonds: tuple[tuple[int, int, int, str], ...]
    automorphisms: tuple[tuple[int, ...], ...]

    @property
    def automorphism_group_order(self) -> int:
        return len(self.automorphisms)

    def to_json(self) -> dict:
        return {"nodes": list(self.nodes), "bonds": [list(b) for b in self.bonds],
                "automorphisms": [list(p) for p in self.automorphisms]}


def diagram_automorphisms(a: Matrix) -> list[tuple[int, ...]]:
    """Permutations p with a[p(i)][p(j)] = a[i][j], found by backtracking."""
    n = len(a)
    out = []

    def extend(perm: list[int], used: set[int]):
        k = len(perm)
        if k == n:
            out.append(tuple(perm))
            return
        for c in range(n):
            if c in used:
                continue
            if all(a[perm[i]][c] == a[i][k] and a[c][perm[i]] == a[k][i] for i in range(k)):
                perm.append(c)
                used.add(c)
                extend(perm, used)
                perm.pop()
                used.discard(c)

    extend([], set())
    return sorted(out)


def affine_dynkin(ard: AffineRootDatum) -> AffineDynkinDiagram:
    """Bonds (i, j, multiplicity, direction); arrows point from the long to the short root."""
    a = ard.affine_cartan
    bonds = []
    for i, j in itertools.combinations(ard.nodes, 2):
        m = a[i][j] * a[j][i]
        if not m:
            continue
        if a[i][j] == a[j][i]:
            direction = "none" if m == 1 else "both"
        elif abs(a[j][i]) > abs(a[i][j]):
            direction = f"{i}->{j}"
        else:
            direction = f"{j}->{i}"
        bonds.append((i, j, m, direction))
    return AffineDynkinDiagram(ard.nodes, tuple(bonds), tuple(diagram_automorphisms(a)))


def parahoric_levi_type(ard: AffineRootDatum, j: int) -> str:
    """Type of the affine diagram with node j removed."""
    if j not in ard.nodes:
        raise InputError(f"node {j} not in 0..{ard.rank}")
    return classify_cartan(ard.affine_cartan, [i for i in ard.nodes if i != j])


def levi_root_sublattice(ard: AffineRootDatum, nodes: Iterable[int]) -> list[Vector]:
    """Root lattice of the Levi on ``nodes`` (affine labels), in simple-root coefficients.

    alpha_0 contributes -theta; only its finite part matters for the centre.
    """
    r = ard.rank
    gens = []
    for i in sorted(set(nodes)):
        if i == 0:
            gens.append(tuple(-x for x in ard.theta))
        else:
            gens.append(tuple(int(k == i - 1) for k in range(r)))
    return gens


def levi_center_quotient(ard: AffineRootDatum, j: int) -> FiniteAbelianGroup:
    """Z_j = Z(L_j)/Z(G), as the torsion of R / R_{L_j} (R the root lattice)."""
    if j not in ard.nodes:
        raise InputError(f"node {j} not in 0..{ard.rank}")
    gens = levi_root_sublattice(ard, [i for i in ard.nodes if i != j])
    free, tors = cokernel(transpose(gens))
    if free:
        raise InvariantViolation("Levi root lattice does not have full rank")
    # independent route: |Z(L_j)| / |Z(G)| from the cokernels inside X
    rd = ard.base
    in_x = [rd.root_to_weight(g) for g in gens]
    z_l = cokernel(transpose(in_x))[1]
    if z_l.order != tors.order * rd.center.order:
        raise InvariantViolation("|Z(L_j)| != |Z_j| * |Z(G)|")
    return tors


def levi_center(ard: AffineRootDatum, j: int) -> FiniteAbelianGroup:
    """Z(L_j) as the torsion of X / R_{L_j}."""
    gens = levi_root_sublattice(ard, [i for i in ard.nodes if i != j])
    return cokernel(transpose([ard.base.root_to_weight(g) for g in gens]))[1]
