"""Stacky fans, the cone C_Delta, embedding-fan checks, orbit posets and Picard data.

Orbit indices follow the idempotent convention: J is the set of simple-root
coordinates that degenerate, e_J = sum_{j not in J} e_j, the open orbit is
J = {} and Orbit(e_J') lies in the closure of Orbit(e_J) iff J is a subset
of J'.  The Levi attached to J lives on the complementary nodes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .affine import (AffineRootDatum, alcove_vertices, coset_representatives,
                     parabolic_subgroup)
from .errors import CapExceededError, InputError
from .lattice import (Cone, Fan, FiniteAbelianGroup, Matrix, Vector, as_matrix, cokernel,
                      cone_preimage, inverse, is_integral, matmul, matrix_to_json,
                      matvec, parallelepiped_points, primitive, rank, simplicial_pieces, transpose,
                      vector_to_json)
from .roots import RootDatum, chamber_rays, classify_cartan

Datum = Union[RootDatum, AffineRootDatum]


@dataclass(frozen=True)
class StackyFan:
    """A fan in L together with a finite-index lattice map beta: L -> N (columns = images of e_i)."""

    fan: Fan
    beta: Matrix

    def __post_init__(self):
        b = as_matrix(self.beta)
        object.__setattr__(self, "beta", b)
        if len(b[0]) != self.fan.dim:
            raise InputError("beta must have one column per coordinate of L")

    def to_json(self) -> dict:
        return {"fan": self.fan.to_json(), "beta": matrix_to_json(self.beta),
                "z_beta": z_beta(self).to_json()}


def z_beta(sf: StackyFan | Matrix) -> FiniteAbelianGroup:
    """Torsion of coker(beta); beta must have finite cokernel."""
    beta = sf.beta if isinstance(sf, StackyFan) else as_matrix(sf)
    free, tors = cokernel(beta)
    if free:
        raise InputError(f"beta has cokernel of free rank {free}, not finite index")
    return tors


def weyl_chamber_stacky_fan(rd: RootDatum) -> StackyFan:
    """(C', beta): C' the standard orthant of Z^r, beta(e_i) = u_i."""
    u = chamber_rays(rd)
    beta = transpose(u)
    fan = Fan.from_cones(rd.rank, [Cone.orthant(rd.rank, "Z^r")], "Z^r")
    return StackyFan(fan, beta)


def affine_chamber_rays(ard: AffineRootDatum) -> tuple[Vector, ...]:
    """Primitive generators u_j of the rays of the cone on -Al_0 in V_T + Z (height last)."""
    return tuple(primitive(tuple(-x for x in eta) + (1,)) for _, eta in alcove_vertices(ard))


def affine_stacky_fan(ard: AffineRootDatum) -> StackyFan:
    u = affine_chamber_rays(ard)
    n = ard.rank + 1
    fan = Fan.from_cones(n, [Cone.orthant(n, "Z^{r+1}")], "Z^{r+1}")
    return StackyFan(fan, transpose(u))


# ---------------------------------------------------------------------------
# C_Delta

@dataclass(frozen=True)
class CDeltaCertificate:
    cone: Cone
    dual: Cone
    expected_generators: tuple[Vector, ...]
    dual_matches: bool
    rays_match: bool
    lineality_spanned: bool
    dual_lineality_dim: int
    cone_lineality_dim: int

    @property
    def ok(self) -> bool:
        return self.dual_matches and self.rays_match and self.lineality_spanned

    def to_json(self) -> dict:
        return {
            "c_delta": self.cone.to_json(),
            "dual": self.dual.to_json(),
            "expected_dual_generators": [vector_to_json(g) for g in self.expected_generators],
            "dual_matches": self.dual_matches,
            "rays_match": self.rays_match,
            "lineality_spanned": self.lineality_spanned,
            "dual_lineality_dim": self.dual_lineality_dim,
            "c_delta_lineality_dim": self.cone_lineality_dim,
            "ok": self.ok,
        }


def c_delta(rd: RootDatum) -> tuple[Cone, CDeltaCertificate]:
    """C_Delta in V_T + Z^r and the certificate for its dual generators.

    C_Delta is the preimage under (id, beta) of the antidiagonal copy
    {(-c, c) : c in C} of the chamber, i.e. the cone spanned by (-u_i, e_i).
    Its dual should be spanned by (0, a_i) and (+-omega_i, +-w_i) with
    a_i = beta^*(alpha_i) and w_i = beta^*(omega_i).
    """
    r = rd.rank
    u = chamber_rays(rd)
    beta = transpose(u)
    anti = Cone(2 * r, tuple(tuple(-x for x in v) + tuple(v) for v in u), "V_T+V_T")
    # (v, x) -> (v, beta x)
    f = as_matrix([[int(i == j) for j in range(r)] + [0] * r for i in range(r)] +
                  [[0] * r + list(beta[i]) for i in range(r)])
    cd = cone_preimage(anti, f, "V_T+Z^r")
    dual = cd.dual("X+Z^r*")
    bt = transpose(beta)
    gens = []
    for a in rd.simple_roots:
        gens.append(primitive(tuple(0 for _ in range(r)) + matvec(bt, a)))
    lin = []
    for w in rd.fundamental_weights:
        v = primitive(tuple(w) + matvec(bt, w))
        lin.append(v)
        gens.append(v)
        gens.append(tuple(-x for x in v))
    expected = Cone(2 * r, tuple(gens), "X+Z^r*")
    ray_classes = {primitive(tuple(0 for _ in range(r)) + matvec(bt, a)) for a in rd.simple_roots}
    rays_match = set(dual.rays) == ray_classes if dual.lineality_dim == r else False
    lineality_spanned = (dual.lineality_dim == r and rank(lin) == r
                         and all(dual.contains(v) and dual.contains(tuple(-x for x in v)) for v in lin))
    cert = CDeltaCertificate(cd, dual, tuple(sorted(set(gens))), expected == dual, rays_match,
                             lineality_spanned, dual.lineality_dim, cd.lineality_dim)
    return cd, cert


# ---------------------------------------------------------------------------
# embedding fans

@dataclass(frozen=True)
class EmbeddingDescriptor:
    """A candidate fan together with the flavour of target (adjoint variety or stack)."""

    fan: Fan
    flavor: str = "adjoint"
    affine: bool = False

    def __post_init__(self):
        if self.flavor not in ("adjoint", "stacky"):
            raise InputError("flavor must be 'adjoint' or 'stacky'")


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    violation: str | None = None
    witness: Vector | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {"valid": self.valid, "violation": self.violation,
                "witness": vector_to_json(self.witness) if self.witness is not None else None,
                "detail": self.detail}


def _negative_support(rd_or_ard: Datum, affine: bool) -> tuple[Cone, Matrix]:
    """(support cone, monoid generator matrix) for the finite or affine case."""
    if affine:
        ard = rd_or_ard if isinstance(rd_or_ard, AffineRootDatum) else AffineRootDatum(rd_or_ard)
        gens = affine_chamber_rays(ard)
        return Cone(ard.rank + 1, gens, "V_T+Z"), transpose(gens)
    rd = rd_or_ard.base if isinstance(rd_or_ard, AffineRootDatum) else rd_or_ard
    gens = tuple(tuple(-x for x in u) for u in chamber_rays(rd))
    return Cone(rd.rank, gens, "V_T"), transpose(gens)


def in_monoid(gen_matrix: Matrix, p: Sequence) -> bool:
    """Is p a non-negative integer combination of the (independent, spanning) columns?"""
    c = matvec(inverse(gen_matrix), p)
    return is_integral(c) and all(x >= 0 for x in c)


def lattice_points_outside_monoid(cone: Cone, gen_matrix: Matrix) -> Vector | None:
    """A lattice point of ``cone`` outside the monoid, or None if there is none.

    Every lattice point of a simplicial piece is a parallelepiped point plus a
    non-negative combination of the piece's primitive rays, so checking rays
    and parallelepiped points decides membership for all lattice points.
    """
    if cone.span_dim == 0:
        return None
    for piece in simplicial_pieces(cone):
        for v in piece:
            if not in_monoid(gen_matrix, v):
                return v
        for p in parallelepiped_points(piece):
            if not in_monoid(gen_matrix, p):
                return p
    return None


def check_embedding_fan(desc: EmbeddingDescriptor, datum: Datum) -> ValidityReport:
    """Support inside -C (or the cone on -Al_0), plus M-membership for the stacky flavour."""
    support, gens = _negative_support(datum, desc.affine)
    if desc.fan.dim != support.dim:
        raise InputError(f"fan lives in rank {desc.fan.dim}, expected {support.dim}")
    if not desc.fan.is_valid():
        return ValidityReport(False, "not_a_fan", None, "cones do not meet along common faces")
    for c in desc.fan.maximal_cones:
        for g in c.canonical_generators():
            if not support.contains(g):
                return ValidityReport(False, "support", g, "generator outside the negative chamber")
    if desc.flavor == "stacky":
        for c in desc.fan.maximal_cones:
            bad = lattice_points_outside_monoid(c, gens)
            if bad is not None:
                return ValidityReport(False, "monoid", bad, "lattice point of the support not in M")
    return ValidityReport(True)


def negative_chamber_fan(rd: RootDatum) -> Fan:
    """-C with all its faces."""
    return Fan.from_cones(rd.rank, [Cone(rd.rank, tuple(tuple(-x for x in u) for u in chamber_rays(rd)), "V_T")], "V_T")


def monoid_lift(beta_p: Sequence[Sequence], monoid_gens: Iterable[Sequence], rd: RootDatum) -> Matrix:
    """Integer l with beta . l = beta' and l(M') inside the orthant C'.

    Here M is the monoid spanned by the u_i.  Raises InputError when
    beta'(M') is not contained in M or no integral lift exists.
    """
    beta = transpose(chamber_rays(rd))
    bp = as_matrix(beta_p)
    if len(bp) != rd.rank:
        raise InputError("beta' must map into V_T")
    gens = [tuple(g) for g in monoid_gens]
    for g in gens:
        if len(g) != len(bp[0]):
            raise InputError("monoid generator has the wrong length")
        if not in_monoid(beta, matvec(bp, g)):
            raise InputError(f"beta'({list(g)}) is not in M")
    l = matmul(inverse(beta), bp)
    if not is_integral([x for row in l for x in row]):
        raise InputError("beta' does not factor through beta over the integers")
    for g in gens:
        if any(x < 0 for x in matvec(l, g)):
            raise InputError("lift does not map M' into C'")
    return l


# ---------------------------------------------------------------------------
# orbits

def _node_data(datum: Datum, affine: bool):
    if affine:
        ard = datum if isinstance(datum, AffineRootDatum) else AffineRootDatum(datum)
        return ard, ard.affine_cartan, list(ard.nodes), ard.base
    rd = datum.base if isinstance(datum, AffineRootDatum) else datum
    return rd, rd.cartan, list(range(1, rd.rank + 1)), rd


def _levi_name(cartan: Matrix, labels: list[int], keep: Sequence[int], affine: bool, base: RootDatum) -> str:
    if affine and len(keep) == len(labels):
        return f"{base.cartan_type}^(1)"
    return classify_cartan(cartan, [labels.index(k) for k in keep])


@dataclass(frozen=True)
class StabilizerDescriptor:
    J: tuple[int, ...]
    levi_nodes: tuple[int, ...]
    levi_type: str
    center_torus_rank: int
    unipotent: str
    parabolic_nodes: tuple[int, ...]

    def to_json(self) -> dict:
        return {"J": list(self.J), "levi_nodes": list(self.levi_nodes), "levi_type": self.levi_type,
                "center_torus_rank": self.center_torus_rank, "unipotent": self.unipotent,
                "parabolic_nodes": list(self.parabolic_nodes)}


def orbit_stabilizer_descriptor(datum: Datum, J: Iterable[int], affine: bool | None = None) -> StabilizerDescriptor:
    """Stab(e_J) = T(J) . Delta(L_J) x| (U_J x U_J^-), described combinatorially."""
    if affine is None:
        affine = isinstance(datum, AffineRootDatum)
    _, cartan, labels, base = _node_data(datum, affine)
    J = tuple(sorted(set(J)))
    if not set(J) <= set(labels):
        raise InputError(f"J must be a subset of {labels}")
    keep = [k for k in labels if k not in J]
    r = base.rank
    restricted = []
    for k in keep:
        if k == 0:
            restricted.append(tuple(-x for x in AffineRootDatum(base).theta))
        else:
            restricted.append(tuple(int(i == k - 1) for i in range(r)))
    torus = r - (rank(restricted) if restricted else 0)
    return StabilizerDescriptor(
        J=J,
        levi_nodes=tuple(keep),
        levi_type=_levi_name(cartan, labels, keep, affine, base),
        center_torus_rank=torus,
        unipotent="trivial" if not J else "U_J x U_J^-",
        parabolic_nodes=tuple(keep),
    )


@dataclass(frozen=True)
class OrbitPoset:
    labels: tuple[int, ...]
    elements: tuple[tuple[int, ...], ...]
    covers: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    descriptors: tuple[StabilizerDescriptor, ...]
    affine: bool

    def leq(self, a: Sequence[int], b: Sequence[int]) -> bool:
        """Closure order: Orbit(e_b) lies in the closure of Orbit(e_a) iff a is a subset of b."""
        return set(a) <= set(b)

    @property
    def divisors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(e for e in self.elements if len(e) == 1)

    def stratum(self, I: Iterable[int]) -> frozenset[tuple[int, ...]]:
        """Orbits in the closure of stratum I: all J containing I."""
        I = set(I)
        return frozenset(e for e in self.elements if I <= set(e))

    def divisor_intersection(self, I: Iterable[int]) -> frozenset[tuple[int, ...]]:
        """Orbits lying in every divisor D_i, i in I (the whole poset for I empty)."""
        out = set(self.elements)
        for i in I:
            out &= set(self.stratum([i]))
        return frozenset(out)

    def meet(self, a, b) -> tuple[int, ...]:
        return tuple(sorted(set(a) & set(b)))

    def join(self, a, b) -> tuple[int, ...]:
        return tuple(sorted(set(a) | set(b)))

    def to_json(self) -> dict:
        return {
            "affine": self.affine,
            "nodes": list(self.labels),
            "elements": [list(e) for e in self.elements],
            "cover_relations": [[list(a), list(b)] for a, b in self.covers],
            "annotations": [dict(d.to_json(), divisor=len(d.J) == 1, open=not d.J) for d in self.descriptors],
        }


def orbit_poset(datum: Datum, affine: bool = False) -> OrbitPoset:
    _, _, labels, _ = _node_data(datum, affine)
    elements = []
    for k in range(len(labels) + 1):
        elements.extend(tuple(c) for c in itertools.combinations(labels, k))
    covers = []
    for e in elements:
        for k in labels:
            if k not in e:
                covers.append((e, tuple(sorted(e + (k,)))))
    descs = tuple(orbit_stabilizer_descriptor(datum, e, affine) for e in elements)
    return OrbitPoset(tuple(labels), tuple(elements), tuple(covers), descs, affine)


def birkhoff_strata_index(ard: AffineRootDatum, J: Iterable[int], length_bound: int,
                          cap: int = 200000) -> list[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]]:
    """Triples (w1, w2, w3) of reduced words: w1 in W/W_J, w2 in W_J\\W minimal, w3 in W_J."""
    J = set(J)
    left = coset_representatives(ard, J, length_bound, side="left")
    right = coset_representatives(ard, J, length_bound, side="right")
    w_j = parabolic_subgroup(ard, J, length_bound)
    total = len(left) * len(right) * len(w_j)
    if total > cap:
        raise CapExceededError(f"{total} strata exceed the cap {cap}")
    return [(a.word, b.word, c.word) for a in left for b in right for c in w_j]


# ---------------------------------------------------------------------------
# Picard

@dataclass(frozen=True)
class PicardPresentation:
    free_rank: int
    torsion: FiniteAbelianGroup
    generators: tuple[str, ...]

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": self.torsion.to_json(),
                "generators": list(self.generators)}


def picard_presentation(datum: Datum, flavor: str = "adjoint", affine: bool = False) -> PicardPresentation:
    """0 -> Z^{divisors} -> Pic -> Hom(Z(beta), C^x) -> 0 as (free rank, torsion)."""
    if flavor not in ("adjoint", "stacky"):
        raise InputError("flavor must be 'adjoint' or 'stacky'")
    rd = datum.base if isinstance(datum, AffineRootDatum) else datum
    if flavor == "adjoint":
        rd = RootDatum.from_cartan(rd.cartan, "ad")
    if affine:
        ard = AffineRootDatum(rd)
        tors = z_beta(affine_stacky_fan(ard))
        labels = tuple(f"D_{j}" for j in ard.nodes)
    else:
        tors = z_beta(weyl_chamber_stacky_fan(rd))
        labels = tuple(f"D_{j}" for j in range(1, rd.rank + 1))
    return PicardPresentation(len(labels), tors, labels)
