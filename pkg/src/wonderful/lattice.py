"""Exact integer and rational linear algebra, Smith normal form, cones and fans.

Nothing in here touches floating point.  Matrices are tuples of row tuples,
vectors are tuples; entries are ``int`` or :class:`fractions.Fraction`.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError, InvariantViolation

Matrix = tuple  # tuple[tuple[int | Fraction, ...], ...]
Vector = tuple  # tuple[int | Fraction, ...]


# ---------------------------------------------------------------------------
# small helpers

def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    m = tuple(tuple(_exact(x) for x in row) for row in rows)
    if m and len({len(r) for r in m}) != 1:
        raise InputError("matrix rows have different lengths")
    return m


def _exact(x):
    if isinstance(x, bool):
        raise InputError("booleans are not matrix entries")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        return _exact(Fraction(x))
    raise InputError(f"non-exact entry {x!r}")


def shape(m: Matrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(_exact(sum(x * y for x, y in zip(row, col))) for col in bt) for row in a)


def matvec(a: Matrix, v: Sequence) -> Vector:
    return tuple(_exact(sum(x * y for x, y in zip(row, v))) for row in a)


def dot(u: Sequence, v: Sequence):
    return _exact(sum(x * y for x, y in zip(u, v)))


def vadd(u: Sequence, v: Sequence) -> Vector:
    return tuple(_exact(x + y) for x, y in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> Vector:
    return tuple(_exact(x - y) for x, y in zip(u, v))


def vscale(c, v: Sequence) -> Vector:
    return tuple(_exact(c * x) for x in v)


def is_integral(v: Sequence) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[0])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[Vector]:
    """Basis (primitive integer vectors) of {x : row . x = 0 for every row}."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(primitive(x))
    return basis


def solve(a: Matrix, b: Sequence) -> Vector | None:
    """One rational solution of a x = b, or None when inconsistent."""
    m, n = shape(a)
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(red, pivots):
        x[p] = row[n]
    return tuple(_exact(v) for v in x)


def inverse(a: Matrix) -> Matrix:
    n, m = shape(a)
    if n != m:
        raise InputError("inverse of a non-square matrix")
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise InputError("matrix is singular")
    return tuple(tuple(_exact(x) for x in row[n:]) for row in red)


def determinant(a: Matrix):
    n, m = shape(a)
    if n != m:
        raise InputError("determinant of a non-square matrix")
    a = [[Fraction(x) for x in r] for r in a]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return _exact(det)


def primitive(v: Sequence) -> Vector:
    """Unique primitive integer vector on the ray through ``v``."""
    fr = [Fraction(_exact(x)) for x in v]
    if all(x == 0 for x in fr):
        raise InputError("zero vector has no primitive representative")
    den = math.lcm(*(x.denominator for x in fr))
    ints = [int(x * den) for x in fr]
    g = math.gcd(*ints)
    return tuple(i // g for i in ints)


# ---------------------------------------------------------------------------
# Smith normal form

@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Finite abelian group in invariant-factor form d1 | d2 | ... (all >= 2)."""

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        f = tuple(int(d) for d in self.invariant_factors)
        if any(d < 2 for d in f):
            raise InputError(f"invariant factors must be >= 2, got {f}")
        if any(b % a for a, b in zip(f, f[1:])):
            raise InputError(f"invariant factors {f} do not form a divisibility chain")
        object.__setattr__(self, "invariant_factors", f)

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> "FiniteAbelianGroup":
        """Normalize a product of cyclic groups Z/n1 x Z/n2 x ... ."""
        orders = [abs(int(n)) for n in orders]
        if any(n == 0 for n in orders):
            raise InputError("Z/0 is not finite")
        if not orders:
            return cls()
        diag = tuple(tuple(n if i == j else 0 for j in range(len(orders))) for i, n in enumerate(orders))
        d = smith_normal_form(diag).diagonal
        return cls(tuple(x for x in d if x > 1))

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def to_json(self) -> list[int]:
        return list(self.invariant_factors)

    def __str__(self) -> str:
        if self.is_trivial:
            return "trivial"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


@dataclass(frozen=True)
class SmithDecomposition:
    U: Matrix
    D: Matrix
    V: Matrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        m, n = shape(self.D)
        return tuple(self.D[i][i] for i in range(min(m, n)))


def smith_normal_form(m: Matrix) -> SmithDecomposition:
    """U, D, V with U*M*V = D, U and V unimodular, diag(D) a divisibility chain."""
    m = as_matrix(m)
    if any(not isinstance(x, int) for row in m for x in row):
        raise InputError("Smith normal form needs an integer matrix")
    rows, cols = shape(m)
    d = [list(r) for r in m]
    u = [list(r) for r in identity(rows)]
    v = [list(r) for r in identity(cols)]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, k):  # row_dst += k * row_src
        d[dst] = [a + k * b for a, b in zip(d[dst], d[src])]
        u[dst] = [a + k * b for a, b in zip(u[dst], u[src])]

    def add_col(src, dst, k):
        for r in d:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    for t in range(min(rows, cols)):
        while True:
            entries = [(abs(d[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if d[i][j]]
            if not entries:
                break
            _, pi, pj = min(entries)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = d[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if d[i][t]:
                    add_row(t, i, -(d[i][t] // p))
                    dirty = dirty or d[i][t] != 0
            for j in range(t + 1, cols):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // p))
                    dirty = dirty or d[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if d[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if t < rows and t < cols and d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    dec = SmithDecomposition(as_matrix(u), as_matrix(d), as_matrix(v))
    if matmul(matmul(dec.U, m), dec.V) != dec.D:
        raise InvariantViolation("Smith normal form failed U*M*V = D")
    return dec


def cokernel(m: Matrix) -> tuple[int, FiniteAbelianGroup]:
    """Cokernel of Z^cols -> Z^rows as (free rank, torsion)."""
    m = as_matrix(m)
    rows, _ = shape(m)
    diag = smith_normal_form(m).diagonal if m and m[0] else ()
    nonzero = [x for x in diag if x]
    return rows - len(nonzero), FiniteAbelianGroup(tuple(x for x in nonzero if x > 1))


# ---------------------------------------------------------------------------
# cones

def _canonical_reduce(phi: Sequence, eq_rows: Sequence[Sequence], eq_pivots: Sequence[int]) -> Vector:
    x = [Fraction(a) for a in phi]
    for row, p in zip(eq_rows, eq_pivots):
        if x[p]:
            c = x[p]
            x = [a - c * b for a, b in zip(x, row)]
    return primitive(x)


@dataclass(frozen=True, eq=False)
class Cone:
    """Rational polyhedral cone, V-description with a synchronized H-description.

    ``generators`` are stored as sorted, de-duplicated primitive integer
    vectors.  Equality and hashing are by the set of points (canonical
    H-description), not by the chosen generators.
    """

    dim: int
    generators: tuple[Vector, ...] = ()
    ambient: str = "N"

    def __post_init__(self):
        gens = []
        for g in self.generators:
            if len(g) != self.dim:
                raise InputError(f"generator {g} has length {len(g)}, ambient rank is {self.dim}")
            if any(x != 0 for x in g):
                gens.append(primitive(g))
        object.__setattr__(self, "generators", tuple(sorted(set(gens))))

    # -- construction
    @classmethod
    def from_inequalities(cls, dim: int, inequalities: Iterable[Sequence] = (),
                          equations: Iterable[Sequence] = (), ambient: str = "N") -> "Cone":
        """Cone {x : phi(x) >= 0, psi(x) = 0}."""
        normals = [tuple(p) for p in inequalities]
        for e in equations:
            normals.append(tuple(e))
            normals.append(tuple(-x for x in e))
        return Cone(dim, tuple(normals), ambient).dual(ambient)

    @classmethod
    def orthant(cls, dim: int, ambient: str = "N") -> "Cone":
        return cls(dim, identity(dim), ambient)

    # -- H-description
    @functools.cached_property
    def _equation_rref(self) -> tuple[list[list[Fraction]], list[int]]:
        eqs = nullspace(self.generators, self.dim) if self.generators else [tuple(r) for r in identity(self.dim)]
        return rref(eqs) if eqs else ([], [])

    @property
    def equations(self) -> tuple[Vector, ...]:
        """Canonical basis of the linear forms vanishing on the cone."""
        return tuple(primitive(r) for r in self._equation_rref[0])

    @functools.cached_property
    def facets(self) -> tuple[Vector, ...]:
        """Inward facet normals, canonical modulo ``equations``."""
        k = self.span_dim
        if k == 0:
            return ()
        eq_rows, eq_piv = self._equation_rref
        found = set()
        gens = self.generators
        for subset in itertools.combinations(gens, k - 1):
            if k > 1 and rank(subset) != k - 1:
                continue
            cands = nullspace(subset, self.dim) if subset else [tuple(r) for r in identity(self.dim)]
            phi = next((c for c in cands if any(dot(c, g) != 0 for g in gens)), None)
            if phi is None:
                continue
            vals = [dot(phi, g) for g in gens]
            if all(x >= 0 for x in vals):
                pass
            elif all(x <= 0 for x in vals):
                phi = tuple(-x for x in phi)
            else:
                continue
            found.add(_canonical_reduce(phi, eq_rows, eq_piv))
        return tuple(sorted(found))

    @functools.cached_property
    def span_dim(self) -> int:
        return rank(self.generators) if self.generators else 0

    @functools.cached_property
    def lineality_dim(self) -> int:
        rows = list(self.equations) + list(self.facets)
        return self.dim - rank(rows) if rows else self.dim

    @property
    def is_pointed(self) -> bool:
        return self.lineality_dim == 0

    @property
    def is_full_dimensional(self) -> bool:
        return self.span_dim == self.dim

    @functools.cached_property
    def rays(self) -> tuple[Vector, ...]:
        """Extreme rays (for a cone with lineality: extreme rays modulo the lineality space)."""
        out = []
        lin = self.lineality_dim
        for g in self.generators:
            if all(dot(p, g) == 0 for p in self.facets):
                continue
            tight = [p for p in self.facets if dot(p, g) == 0]
            rows = list(self.equations) + tight
            if (rank(rows) if rows else 0) == self.dim - 1 - lin:
                out.append(g)
        return tuple(out)

    @functools.cached_property
    def lineality_basis(self) -> tuple[Vector, ...]:
        rows = list(self.equations) + list(self.facets)
        return tuple(nullspace(rows, self.dim)) if rows else tuple(tuple(r) for r in identity(self.dim))

    # -- predicates
    def contains(self, v: Sequence) -> bool:
        if len(v) != self.dim:
            raise InputError("dimension mismatch")
        return all(dot(e, v) == 0 for e in self.equations) and all(dot(p, v) >= 0 for p in self.facets)

    def relative_interior_contains(self, v: Sequence) -> bool:
        return all(dot(e, v) == 0 for e in self.equations) and all(dot(p, v) > 0 for p in self.facets)

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(g) for g in other.generators)

    def dual(self, ambient: str | None = None) -> "Cone":
        """{phi : phi(v) >= 0 for all v in the cone}."""
        gens = list(self.facets) + list(self.equations) + [tuple(-x for x in e) for e in self.equations]
        return Cone(self.dim, tuple(gens), ambient or f"{self.ambient}*")

    def intersect(self, other: "Cone") -> "Cone":
        if other.dim != self.dim:
            raise InputError("dimension mismatch")
        return Cone.from_inequalities(self.dim, self.facets + other.facets,
                                      self.equations + other.equations, self.ambient)

    def face(self, normal: Sequence) -> "Cone":
        """Face cut out by a supporting normal (must be >= 0 on the cone)."""
        if any(dot(normal, g) < 0 for g in self.generators):
            raise InputError("not a supporting normal")
        return Cone(self.dim, tuple(g for g in self.generators if dot(normal, g) == 0), self.ambient)

    @functools.cached_property
    def faces(self) -> frozenset["Cone"]:
        out = {self}
        for p in self.facets:
            out |= self.face(p).faces
        return frozenset(out)

    def is_face_of(self, other: "Cone") -> bool:
        return self in other.faces

    # -- identity
    @functools.cached_property
    def _key(self):
        return (self.dim, self.equations, self.facets)

    def __eq__(self, other):
        return isinstance(other, Cone) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Cone(dim={self.dim}, generators={[list(g) for g in self.generators]})"

    def sort_key(self):
        return (self.span_dim, self.canonical_generators())

    def canonical_generators(self) -> tuple[Vector, ...]:
        """Minimal generators: lineality basis (both signs) plus extreme rays."""
        lin = self.lineality_basis if self.lineality_dim else ()
        gens = set(self.rays) | set(lin) | {tuple(-x for x in v) for v in lin}
        return tuple(sorted(gens))

    def to_json(self) -> dict:
        return {
            "ambient": self.ambient,
            "dim": self.dim,
            "generators": [vector_to_json(g) for g in self.canonical_generators()],
            "facets": [vector_to_json(p) for p in self.facets],
            "equations": [vector_to_json(e) for e in self.equations],
        }


def dual_cone(c: Cone) -> Cone:
    return c.dual()


def cone_preimage(c: Cone, f: Matrix, ambient: str = "N") -> Cone:
    """f^{-1}(C) for a linear map f given as a (codomain x domain) matrix."""
    f = as_matrix(f)
    rows, cols = shape(f)
    if rows != c.dim:
        raise InputError(f"map has {rows} output coordinates, cone lives in rank {c.dim}")
    ft = transpose(f)
    pull = lambda phi: matvec(ft, phi)  # noqa: E731
    return Cone.from_inequalities(cols, [pull(p) for p in c.facets], [pull(e) for e in c.equations], ambient)


def cone_image(c: Cone, f: Matrix, ambient: str = "N") -> Cone:
    f = as_matrix(f)
    rows, cols = shape(f)
    if cols != c.dim:
        raise InputError("dimension mismatch")
    gens = list(c.generators) + [tuple(-x for x in v) for v in c.lineality_basis if c.lineality_dim]
    return Cone(rows, tuple(matvec(f, g) for g in gens), ambient)


# ---------------------------------------------------------------------------
# fans

@dataclass(frozen=True, eq=False)
class Fan:
    """Face-closed collection of cones in one ambient lattice."""

    dim: int
    cones: frozenset = field(default_factory=frozenset)
    ambient: str = "N"

    def __post_init__(self):
        closed = set()
        for c in self.cones:
            if c.dim != self.dim:
                raise InputError("cone of the wrong ambient rank in fan")
            closed |= c.faces
        if self.cones and Cone(self.dim) not in closed:
            closed.add(Cone(self.dim, (), self.ambient))
        object.__setattr__(self, "cones", frozenset(closed))

    @classmethod
    def from_cones(cls, dim: int, cones: Iterable[Cone], ambient: str = "N") -> "Fan":
        return cls(dim, frozenset(cones), ambient)

    @functools.cached_property
    def maximal_cones(self) -> tuple[Cone, ...]:
        cs = [c for c in self.cones if not any(c != d and c in d.faces for d in self.cones)]
        return tuple(sorted(cs, key=Cone.sort_key))

    @functools.cached_property
    def rays(self) -> tuple[Vector, ...]:
        return tuple(sorted({c.generators[0] for c in self.cones if c.span_dim == 1}))

    def is_valid(self) -> bool:
        """Pairwise intersections of maximal cones are common faces."""
        ms = self.maximal_cones
        for a, b in itertools.combinations(ms, 2):
            i = a.intersect(b)
            if i not in a.faces or i not in b.faces:
                return False
        return True

    def support_contains(self, v: Sequence) -> bool:
        return any(c.contains(v) for c in self.maximal_cones)

    def __eq__(self, other):
        return isinstance(other, Fan) and self.dim == other.dim and self.cones == other.cones

    def __hash__(self):
        return hash((self.dim, self.cones))

    def __len__(self):
        return len(self.cones)

    def to_json(self) -> dict:
        return {
            "ambient": self.ambient,
            "dim": self.dim,
            "rays": [vector_to_json(r) for r in self.rays],
            "maximal_cones": [[vector_to_json(g) for g in c.canonical_generators()] for c in self.maximal_cones],
        }


def _covers(pieces: list[Cone], sigma: Cone) -> bool:
    """Do the cones in ``pieces`` (all inside sigma, from one valid fan) cover sigma?"""
    top = [p for p in pieces if p.span_dim == sigma.span_dim]
    if sigma.span_dim == 0:
        return True
    if not top:
        return False
    boundary = {sigma.face(p) for p in sigma.facets}
    for t in top:
        for p in t.facets:
            f = t.face(p)
            if any(f.is_face_of(b) or f == b for b in boundary):
                continue
            if not any(o != t and f in o.faces for o in top):
                return False
    return True


def is_refinement(f1: Fan, f2: Fan) -> bool:
    """Every cone of f1 lies in a cone of f2, and the supports agree."""
    if f1.dim != f2.dim or f1.ambient != f2.ambient:
        raise InputError("fans live in different ambient lattices")
    for c in f1.maximal_cones:
        if not any(d.contains_cone(c) for d in f2.maximal_cones):
            return False
    for sigma in f2.maximal_cones:
        inside = [c for c in f1.cones if sigma.contains_cone(c)]
        if not _covers(inside, sigma):
            return False
    return True


# ---------------------------------------------------------------------------
# lattice points

def parallelepiped_points(basis: Sequence[Sequence]) -> list[Vector]:
    """Integer points sum c_i b_i with 0 <= c_i < 1 (basis linearly independent)."""
    basis = [tuple(b) for b in basis]
    if not basis:
        return []
    d = len(basis[0])
    lo = [sum(min(0, b[i]) for b in basis) for i in range(d)]
    hi = [sum(max(0, b[i]) for b in basis) for i in range(d)]
    a = transpose(basis)
    pts = []
    for p in itertools.product(*(range(math.floor(l), math.ceil(h) + 1) for l, h in zip(lo, hi))):
        c = solve(a, p)
        if c is not None and all(0 <= x < 1 for x in c):
            pts.append(tuple(p))
    return pts


def simplicial_pieces(c: Cone) -> list[tuple[Vector, ...]]:
    """Triangulate a pointed cone into simplicial cones spanned by its rays."""
    rays = list(c.rays)
    if len(rays) == c.span_dim:
        return [tuple(rays)]
    apex = rays[0]
    out = []
    for p in c.facets:
        if dot(p, apex) == 0:
            continue
        for piece in simplicial_pieces(c.face(p)):
            out.append((apex,) + piece)
    return out


# ---------------------------------------------------------------------------
# serialization

def scalar_to_json(x):
    x = _exact(x)
    return x if isinstance(x, int) else f"{x.numerator}/{x.denominator}"


def vector_to_json(v: Sequence) -> list:
    return [scalar_to_json(x) for x in v]


def matrix_to_json(m: Matrix) -> list:
    return [vector_to_json(r) for r in m]


def vector_from_json(v: Sequence) -> Vector:
    return tuple(_exact(x) for x in v)


def matrix_from_json(m: Sequence[Sequence]) -> Matrix:
    return as_matrix(m)
