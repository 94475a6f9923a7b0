"""Finite-type root data.

Coordinates.  Node ``i`` (1-based) carries the simple root alpha_i and the
simple coroot alpha_i^vee, and the Cartan matrix is ``a_ij = <alpha_j, alpha_i^vee>``.
Two ambient bases are used internally:

* weights in fundamental-weight (omega) coordinates,
* coweights in simple-coroot coordinates,

so that the pairing of the two is the plain dot product.  A root datum fixes
a lattice X between the root lattice and the weight lattice, given by a basis
matrix ``x_basis`` whose columns are omega-coordinates.  The cocharacter
lattice V_T is the dual lattice with basis ``x_basis^{-T}``.  Public methods
take and return *lattice* coordinates (X-coordinates for weights,
V_T-coordinates for coweights), in which the pairing is again the dot product.
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CapExceededError, InputError, UnsupportedError
from .lattice import (Cone, Fan, Matrix, Vector, as_matrix, cokernel, determinant, dot, identity,
                      inverse, is_integral, matmul, matrix_to_json, matvec, primitive, transpose,
                      vsub)

FLAVORS = ("sc", "ad", "explicit")
DEFAULT_WEYL_CAP = 60000


# ---------------------------------------------------------------------------
# Cartan matrices

def _chain(n: int) -> list[list[int]]:
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        a[i][i + 1] = a[i + 1][i] = -1
    return a


def cartan_matrix(letter: str, n: int) -> Matrix:
    """Bourbaki-numbered Cartan matrix, a_ij = <alpha_j, alpha_i^vee>."""
    letter = letter.upper()
    if letter in "BC" and n == 1:
        letter = "A"
    if letter == "A" and 1 <= n <= 8:
        a = _chain(n)
    elif letter == "B" and 2 <= n <= 8:
        a = _chain(n)
        a[n - 1][n - 2] = -2
    elif letter == "C" and 2 <= n <= 8:
        a = _chain(n)
        a[n - 2][n - 1] = -2
    elif letter == "D" and 3 <= n <= 8:
        a = _chain(n)
        a[n - 2][n - 1] = a[n - 1][n - 2] = 0
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
    elif letter == "E" and n in (6, 7, 8):
        a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        edges = [(1, 3), (3, 4), (4, 2)] + [(k, k + 1) for k in range(4, n)]
        for i, j in edges:
            a[i - 1][j - 1] = a[j - 1][i - 1] = -1
    elif letter == "F" and n == 4:
        a = _chain(4)
        a[2][1] = -2
    elif letter == "G" and n == 2:
        a = [[2, -3], [-1, 2]]
    else:
        raise UnsupportedError(f"unsupported type {letter}{n}")
    return as_matrix(a)


def parse_type(name: str) -> list[tuple[str, int]]:
    """'A1xB2' -> [('A', 1), ('B', 2)]."""
    parts = [p for p in re.split(r"\s*[x×]\s*", name.strip()) if p]
    out = []
    for p in parts:
        m = re.fullmatch(r"([A-Ga-g])(\d+)", p)
        if not m:
            raise InputError(f"cannot parse Cartan type {name!r}")
        out.append((m.group(1).upper(), int(m.group(2))))
    if not out:
        raise InputError("empty Cartan type")
    return out


def block_diagonal(blocks: Sequence[Matrix]) -> Matrix:
    n = sum(len(b) for b in blocks)
    a = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                a[off + i][off + j] = x
        off += len(b)
    return as_matrix(a)


def components(a: Matrix, nodes: Sequence[int] | None = None) -> list[list[int]]:
    """Connected components of the Dynkin diagram (0-based indices into ``a``)."""
    nodes = list(range(len(a))) if nodes is None else list(nodes)
    left, out = set(nodes), []
    while left:
        start = min(left)
        comp, stack = {start}, [start]
        while stack:
            i = stack.pop()
            for j in list(left):
                if j not in comp and a[i][j] != 0:
                    comp.add(j)
                    stack.append(j)
        left -= comp
        out.append(sorted(comp))
    return sorted(out)


def symmetrizer(a: Matrix) -> tuple[int, ...]:
    """Positive integers d with a*diag(d) symmetric, d = 1 on long roots of each component."""
    n = len(a)
    d: list[Fraction | None] = [None] * n
    for comp in components(a):
        d[comp[0]] = Fraction(1)
        stack = [comp[0]]
        while stack:
            i = stack.pop()
            for j in comp:
                if a[i][j] and d[j] is None:
                    d[j] = d[i] * Fraction(a[j][i], a[i][j])
                    stack.append(j)
        lo = min(d[i] for i in comp)
        for i in comp:
            d[i] = d[i] / lo
    if any(x.denominator != 1 for x in d):
        raise InputError("Cartan matrix is not symmetrizable with integer entries")
    return tuple(int(x) for x in d)


def validate_cartan(a: Matrix) -> None:
    n = len(a)
    if any(len(r) != n for r in a):
        raise InputError("Cartan matrix must be square")
    for i in range(n):
        if a[i][i] != 2:
            raise InputError("Cartan matrix must have 2 on the diagonal")
        for j in range(n):
            if i != j:
                if not isinstance(a[i][j], int) or a[i][j] > 0:
                    raise InputError("off-diagonal Cartan entries must be non-positive integers")
                if (a[i][j] == 0) != (a[j][i] == 0):
                    raise InputError("Cartan matrix has a_ij = 0 but a_ji != 0")
    d = symmetrizer(a)
    for i in range(n):
        for j in range(n):
            if a[i][j] * d[j] != a[j][i] * d[i]:
                raise InputError("Cartan matrix is not symmetrizable")
    s = [[a[i][j] * d[j] for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        if determinant(as_matrix([row[:k] for row in s[:k]])) <= 0:
            raise InputError("Cartan matrix is not of finite type")


# ---------------------------------------------------------------------------
# Dynkin classification

def _component_name(a: Matrix, comp: list[int]) -> str:
    n = len(comp)
    if n == 1:
        return "A1"
    sub = [[a[i][j] for j in comp] for i in comp]
    bonds = {}
    for x, y in itertools.combinations(range(n), 2):
        m = sub[x][y] * sub[y][x]
        if m:
            bonds[(x, y)] = m
    deg = [sum(1 for e in bonds if v in e) for v in range(n)]
    mult = max(bonds.values())
    if mult == 3:
        return "G2"
    if mult == 2:
        if n == 2:
            return "B2"
        if n == 4 and max(deg) == 2:
            (x, y), = [e for e, m in bonds.items() if m == 2]
            if deg[x] == 2 and deg[y] == 2:
                return "F4"
        (x, y), = [e for e, m in bonds.items() if m == 2]
        end, inner = (x, y) if deg[x] == 1 else (y, x)
        # a_ji / a_ij = 2 means alpha_i is long
        end_is_short = sub[inner][end] == -1 and sub[end][inner] == -2
        return f"B{n}" if end_is_short else f"C{n}"
    if max(deg) <= 2:
        return f"A{n}"
    (branch,) = [v for v in range(n) if deg[v] == 3]
    legs = []
    for start in (v for v in range(n) if (min(v, branch), max(v, branch)) in bonds):
        length, prev, cur = 1, branch, start
        while True:
            nxt = [w for w in range(n) if w not in (prev, cur) and (min(w, cur), max(w, cur)) in bonds]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        legs.append(length)
    legs = tuple(sorted(legs))
    if legs[:2] == (1, 1):
        return f"D{n}"
    return {(1, 2, 2): "E6", (1, 2, 3): "E7", (1, 2, 4): "E8"}[legs]


def classify_cartan(a: Matrix, nodes: Sequence[int] | None = None) -> str:
    """Type name of a finite-type Cartan (sub)matrix, components joined by 'x'.

    ``nodes`` selects a principal submatrix (0-based).  The empty diagram is
    named ``"T"`` (a torus).
    """
    comps = components(a, nodes)
    if not comps:
        return "T"
    names = [_component_name(a, c) for c in comps]
    names.sort(key=lambda s: (s[0], int(s[1:])))
    return "x".join(names)


def weyl_group_order_of_type(name: str) -> int:
    if name == "T":
        return 1
    total = 1
    for letter, n in parse_type(name):
        if letter == "A":
            total *= math.factorial(n + 1)
        elif letter in "BC":
            total *= 2 ** n * math.factorial(n)
        elif letter == "D":
            total *= 2 ** (n - 1) * math.factorial(n)
        else:
            total *= {"E6": 51840, "E7": 2903040, "E8": 696729600, "F4": 1152, "G2": 12}[f"{letter}{n}"]
    return total


# ---------------------------------------------------------------------------
# root datum

@dataclass(frozen=True)
class WeylElement:
    """Weyl group element with a reduced word and its matrices.

    ``x_matrix`` acts on X-coordinates of weights, ``v_matrix`` on
    V_T-coordinates of coweights.  The word lists 1-based node labels and is
    read left to right as a product s_{i1} s_{i2} ... .
    """

    word: tuple[int, ...]
    x_matrix: Matrix
    v_matrix: Matrix

    @property
    def length(self) -> int:
        return len(self.word)

    def act_weight(self, mu: Sequence) -> Vector:
        return matvec(self.x_matrix, mu)

    def act_coweight(self, eta: Sequence) -> Vector:
        return matvec(self.v_matrix, eta)

    @property
    def inverse(self) -> "WeylElement":
        return WeylElement(tuple(reversed(self.word)), inverse(self.x_matrix), inverse(self.v_matrix))

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(self.word + other.word, matmul(self.x_matrix, other.x_matrix),
                           matmul(self.v_matrix, other.v_matrix))

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.x_matrix == other.x_matrix

    def __hash__(self):
        return hash(self.x_matrix)

    def to_json(self) -> dict:
        return {"word": list(self.word), "length": self.length, "matrix": matrix_to_json(self.x_matrix)}


@dataclass(frozen=True)
class WeightMultiplicityTable:
    highest_weight: Vector
    multiplicities: tuple[tuple[Vector, int], ...]

    def as_dict(self) -> dict[Vector, int]:
        return dict(self.multiplicities)

    @property
    def dimension(self) -> int:
        return sum(m for _, m in self.multiplicities)

    def to_json(self) -> dict:
        return {
            "highest_weight": list(self.highest_weight),
            "dimension": self.dimension,
            "multiplicities": [{"weight": list(w), "multiplicity": m} for w, m in self.multiplicities],
        }


@dataclass(frozen=True)
class RootDatum:
    """Cartan matrix plus a choice of character lattice between Q and P."""

    cartan: Matrix
    x_basis: Matrix
    flavor: str = "sc"
    cartan_type: str = ""

    # -- construction
    @classmethod
    def from_cartan(cls, cartan: Iterable[Iterable[int]], flavor: str = "sc",
                    x_basis: Iterable[Iterable] | None = None) -> "RootDatum":
        a = as_matrix(cartan)
        validate_cartan(a)
        n = len(a)
        if flavor == "sc":
            b = identity(n)
        elif flavor == "ad":
            b = a
        elif flavor == "explicit":
            if x_basis is None:
                raise InputError("explicit flavor needs x_basis")
            b = as_matrix(x_basis)
            if len(b) != n or any(len(r) != n for r in b):
                raise InputError("x_basis must be a square matrix of the Cartan rank")
            if not is_integral([x for r in b for x in r]):
                raise InputError("X must lie in the weight lattice (integral omega-coordinates)")
            if determinant(b) == 0:
                raise InputError("x_basis is singular")
            if not is_integral([x for r in matmul(inverse(b), a) for x in r]):
                raise InputError("X must contain the root lattice")
        else:
            raise InputError(f"unknown flavor {flavor!r}")
        return cls(a, b, flavor, classify_cartan(a))

    # -- basic data
    @property
    def rank(self) -> int:
        return len(self.cartan)

    @property
    def is_irreducible(self) -> bool:
        return len(components(self.cartan)) == 1

    @functools.cached_property
    def _x_inv(self) -> Matrix:
        return inverse(self.x_basis)

    @functools.cached_property
    def v_basis(self) -> Matrix:
        """Basis of V_T in simple-coroot coordinates (columns)."""
        return transpose(self._x_inv)

    @functools.cached_property
    def symmetrizer(self) -> tuple[int, ...]:
        return symmetrizer(self.cartan)

    def weight_from_omega(self, mu: Sequence) -> Vector:
        return matvec(self._x_inv, mu)

    def weight_to_omega(self, mu: Sequence) -> Vector:
        return matvec(self.x_basis, mu)

    def coweight_from_coroot(self, eta: Sequence) -> Vector:
        return matvec(transpose(self.x_basis), eta)

    def coweight_to_coroot(self, eta: Sequence) -> Vector:
        return matvec(self.v_basis, eta)

    def root_to_omega(self, c: Sequence) -> Vector:
        """Simple-root coefficients -> omega coordinates."""
        return matvec(self.cartan, c)

    def root_to_weight(self, c: Sequence) -> Vector:
        return self.weight_from_omega(self.root_to_omega(c))

    def coroot_to_coweight(self, c: Sequence) -> Vector:
        return self.coweight_from_coroot(c)

    @functools.cached_property
    def simple_roots(self) -> tuple[Vector, ...]:
        """alpha_i in X-coordinates."""
        return tuple(self.root_to_weight(e) for e in identity(self.rank))

    @functools.cached_property
    def simple_coroots(self) -> tuple[Vector, ...]:
        """alpha_i^vee in V_T-coordinates."""
        return tuple(self.coweight_from_coroot(e) for e in identity(self.rank))

    @functools.cached_property
    def fundamental_weights(self) -> tuple[Vector, ...]:
        """omega_i in X-coordinates (rational unless X is the weight lattice)."""
        return tuple(self.weight_from_omega(e) for e in identity(self.rank))

    @functools.cached_property
    def fundamental_coweights(self) -> tuple[Vector, ...]:
        """omega_i^vee in V_T-coordinates (rational unless V_T is the coweight lattice)."""
        a_inv_t = transpose(inverse(self.cartan))
        return tuple(self.coweight_from_coroot(matvec(a_inv_t, e)) for e in identity(self.rank))

    def pairing(self, mu: Sequence, eta: Sequence):
        return dot(mu, eta)

    def check_pairings(self) -> bool:
        return all(dot(self.simple_roots[j], self.simple_coroots[i]) == self.cartan[i][j]
                   for i in range(self.rank) for j in range(self.rank))

    @functools.cached_property
    def center(self):
        """Z(G) as the torsion of X / root lattice."""
        return cokernel(transpose(self.simple_roots))[1]

    @functools.cached_property
    def fundamental_group(self):
        """pi_1(G) as the torsion of V_T / coroot lattice."""
        return cokernel(transpose(self.simple_coroots))[1]

    def is_long(self, i: int) -> bool:
        """Is alpha_i (1-based) a long root of its component?"""
        d = self.symmetrizer
        comp = next(c for c in components(self.cartan) if i - 1 in c)
        return d[i - 1] == min(d[k] for k in comp)

    # -- reflections
    def _reflection_omega(self, i: int) -> Matrix:
        """s_i on omega coordinates: mu -> mu - mu_i * alpha_i."""
        n = self.rank
        return as_matrix([[int(r == c) - (self.cartan[r][i] if c == i else 0) for c in range(n)]
                          for r in range(n)])

    @functools.cached_property
    def simple_reflections(self) -> tuple[WeylElement, ...]:
        out = []
        for i in range(self.rank):
            s = self._reflection_omega(i)
            x = matmul(matmul(self._x_inv, s), self.x_basis)
            v = transpose(inverse(x))
            out.append(WeylElement((i + 1,), x, v))
        return tuple(out)

    def reflect_omega(self, mu: Sequence, i: int) -> Vector:
        """s_i (0-based) applied to omega coordinates."""
        mu = list(mu)
        k = mu[i]
        return tuple(m - k * self.cartan[r][i] for r, m in enumerate(mu))

    def dominant_conjugate_omega(self, mu: Sequence) -> tuple[Vector, int]:
        """Dominant W-conjugate of an omega-coordinate weight and the parity of steps used."""
        mu = tuple(mu)
        steps = 0
        while True:
            i = next((k for k, x in enumerate(mu) if x < 0), None)
            if i is None:
                return mu, steps
            mu = self.reflect_omega(mu, i)
            steps += 1

    def orbit_omega(self, mu: Sequence) -> list[Vector]:
        """W-orbit of a weight in omega coordinates, by reflection closure."""
        start = tuple(mu)
        seen, queue = {start}, deque([start])
        while queue:
            v = queue.popleft()
            for i in range(self.rank):
                w = self.reflect_omega(v, i)
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return sorted(seen)

    # -- serialization
    def to_json(self) -> dict:
        letters = parse_type(self.cartan_type) if self.cartan_type not in ("", "T") else []
        return {
            "type": self.cartan_type,
            "rank": self.rank,
            "flavor": self.flavor,
            "components": [f"{l}{n}" for l, n in letters],
            "cartan": matrix_to_json(self.cartan),
            "x_basis": matrix_to_json(self.x_basis),
            "simple_roots": matrix_to_json(self.simple_roots),
            "simple_coroots": matrix_to_json(self.simple_coroots),
        }


def build_root_datum(cartan_type: str, rank: int | None = None, flavor: str = "sc",
                     x_basis: Iterable[Iterable] | None = None) -> RootDatum:
    """Root datum for a named type.

    ``cartan_type`` is a letter (with ``rank``) or a full name such as ``"B2"``
    or ``"A1xA1"``.  ``flavor`` is ``"sc"`` (X = weight lattice), ``"ad"``
    (X = root lattice) or ``"explicit"`` (X given by ``x_basis``).
    """
    if flavor not in FLAVORS:
        raise InputError(f"unknown flavor {flavor!r}; expected one of {FLAVORS}")
    if rank is not None:
        if not isinstance(rank, int) or isinstance(rank, bool):
            raise InputError("rank must be an integer")
        if len(cartan_type) != 1:
            raise InputError("give either a letter plus rank or a full type name")
        parts = [(cartan_type.upper(), rank)]
    else:
        parts = parse_type(cartan_type)
    for letter, n in parts:
        if letter not in "ABCDEFG":
            raise UnsupportedError(f"unknown type letter {letter}")
        if not 1 <= n <= 8:
            raise UnsupportedError(f"rank {n} out of the supported range 1..8")
    a = block_diagonal([cartan_matrix(l, n) for l, n in parts])
    return RootDatum.from_cartan(a, flavor, x_basis)


# ---------------------------------------------------------------------------
# roots and Weyl group

@functools.lru_cache(maxsize=None)
def _positive_root_coeffs(cartan: Matrix) -> tuple[Vector, ...]:
    n = len(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for c in layer:
            for i in range(n):
                if c == simple[i]:
                    continue
                # alpha_i-string through c: p = how far down it goes
                p, down = 0, list(c)
                while True:
                    down[i] -= 1
                    if tuple(down) in roots:
                        p += 1
                    else:
                        break
                pairing = sum(cartan[i][k] * c[k] for k in range(n))
                q = p - pairing
                if q > 0:
                    up = list(c)
                    up[i] += 1
                    up = tuple(up)
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
        layer = nxt
    return tuple(sorted(roots, key=lambda c: (sum(c), tuple(-x for x in c))))


def positive_roots(rd: RootDatum, basis: str = "simple") -> tuple[Vector, ...]:
    """Positive roots sorted by height.

    ``basis``: ``"simple"`` (coefficients in the simple roots), ``"omega"``
    or ``"X"`` (character-lattice coordinates).
    """
    coeffs = _positive_root_coeffs(rd.cartan)
    if basis == "simple":
        return coeffs
    if basis == "omega":
        return tuple(rd.root_to_omega(c) for c in coeffs)
    if basis == "X":
        return tuple(rd.root_to_weight(c) for c in coeffs)
    raise InputError(f"unknown basis {basis!r}")


def root_norm(rd: RootDatum, c: Sequence) -> Fraction:
    """(alpha|alpha) for a root given by simple-root coefficients, with (alpha_i|alpha_j) = a_ij / d_i."""
    d = rd.symmetrizer
    n = rd.rank
    return sum((Fraction(c[i] * c[j] * rd.cartan[i][j], d[i]) for i in range(n) for j in range(n)), Fraction(0))


def positive_coroots(rd: RootDatum) -> tuple[Vector, ...]:
    """Positive coroots in simple-coroot coefficients, index-matched with positive_roots."""
    d = rd.symmetrizer
    out = []
    for c in positive_roots(rd):
        norm = root_norm(rd, c)
        coeffs = [Fraction(2 * c[i], d[i]) / norm for i in range(rd.rank)]
        if any(x.denominator != 1 for x in coeffs):
            raise InputError("coroot with non-integral coefficients")
        out.append(tuple(int(x) for x in coeffs))
    return tuple(out)


def highest_root(rd: RootDatum, basis: str = "simple") -> Vector:
    """theta, the unique root of maximal height (irreducible data only)."""
    if not rd.is_irreducible:
        raise InputError("highest root requested for a reducible datum")
    return positive_roots(rd, basis)[-1]


def highest_coroot(rd: RootDatum) -> Vector:
    """theta^vee in simple-coroot coefficients."""
    return positive_coroots(rd)[-1]


def weyl_group(rd: RootDatum, order_cap: int = DEFAULT_WEYL_CAP) -> list[WeylElement]:
    """All Weyl group elements with reduced words, in BFS (length, then word) order."""
    expected = weyl_group_order_of_type(rd.cartan_type)
    if expected > order_cap:
        raise CapExceededError(f"|W({rd.cartan_type})| = {expected} exceeds the cap {order_cap}")
    ident = WeylElement((), identity(rd.rank), identity(rd.rank))
    seen = {ident.x_matrix: ident}
    layer = [ident]
    out = [ident]
    while layer:
        nxt = []
        for w in layer:
            for s in rd.simple_reflections:
                ws = w * s
                if ws.x_matrix not in seen:
                    seen[ws.x_matrix] = ws
                    nxt.append(ws)
        nxt.sort(key=lambda w: w.word)
        out.extend(nxt)
        layer = nxt
    if len(out) != expected:
        raise UnsupportedError(f"Weyl group closure produced {len(out)} elements, expected {expected}")
    return out


# ---------------------------------------------------------------------------
# chambers and fans

def dominant_chamber(rd: RootDatum) -> Cone:
    """C = {eta in V_T : alpha_i(eta) >= 0}; its rays are the u_i."""
    return Cone(rd.rank, chamber_rays(rd), "V_T")


def chamber_rays(rd: RootDatum) -> tuple[Vector, ...]:
    """Primitive V_T generators u_i of the rays of C, u_i on the omega_i^vee ray."""
    return tuple(primitive(w) for w in rd.fundamental_coweights)


def weyl_fan(rd: RootDatum, order_cap: int = DEFAULT_WEYL_CAP) -> Fan:
    """{w(-C)} and their faces."""
    neg = [tuple(-x for x in u) for u in chamber_rays(rd)]
    cones = {Cone(rd.rank, tuple(w.act_coweight(u) for u in neg), "V_T") for w in weyl_group(rd, order_cap)}
    return Fan(rd.rank, frozenset(cones), "V_T")


def torus_closure_fan(rd: RootDatum, lam: Sequence, order_cap: int = DEFAULT_WEYL_CAP) -> Fan:
    """Normal fan (minimum convention) of the weight polytope conv(W lambda).

    ``lam`` is in omega coordinates and must be regular dominant.  The cone
    of the vertex lambda is -C, whose dual is spanned by the characters
    -alpha_i.
    """
    lam = tuple(lam)
    if len(lam) != rd.rank:
        raise InputError("weight has the wrong length")
    if any(x <= 0 for x in lam):
        raise InputError("torus_closure_fan needs a regular dominant weight")
    if weyl_group_order_of_type(rd.cartan_type) > order_cap:
        raise CapExceededError("weight polytope has too many vertices for the cap")
    roots = positive_roots(rd, "omega")
    cones = set()
    for v in rd.orbit_omega(lam):
        ineqs = []
        # every edge of the polytope at v points to some reflection s_alpha(v)
        for r in roots:
            k = _coroot_omega_pairing(rd, r, v)
            neighbour = tuple(vi - k * ri for vi, ri in zip(v, r))
            if neighbour != v:
                ineqs.append(rd.weight_from_omega(vsub(neighbour, v)))
        cones.add(Cone.from_inequalities(rd.rank, ineqs, (), "V_T"))
    return Fan(rd.rank, frozenset(cones), "V_T")


def _coroot_omega_pairing(rd: RootDatum, root_omega: Sequence, mu: Sequence):
    """<mu, alpha^vee> for the root alpha given in omega coordinates."""
    g = weight_form_omega(rd)
    return Fraction(2 * dot(mu, matvec(g, root_omega))) / dot(root_omega, matvec(g, root_omega))


def one_param_limit_J(rd: RootDatum, eta: Sequence) -> frozenset[int]:
    """{i : <alpha_i, eta> < 0} for eta (V_T-coordinates) in -C; 1-based labels."""
    if len(eta) != rd.rank:
        raise InputError("coweight has the wrong length")
    vals = [dot(a, eta) for a in rd.simple_roots]
    if any(v > 0 for v in vals):
        raise InputError("eta is not in the closed negative chamber -C")
    return frozenset(i + 1 for i, v in enumerate(vals) if v < 0)


# ---------------------------------------------------------------------------
# invariant forms

@dataclass(frozen=True)
class QuadraticForm:
    """Symmetric positive-definite Gram matrix on V_T (V_T-coordinates)."""

    gram: Matrix

    def __post_init__(self):
        g = as_matrix(self.gram)
        n = len(g)
        if any(len(r) != n for r in g):
            raise InputError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise InputError("Gram matrix must be symmetric")
        for k in range(1, n + 1):
            if determinant(tuple(r[:k] for r in g[:k])) <= 0:
                raise InputError("Gram matrix is not positive definite")
        object.__setattr__(self, "gram", g)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def __call__(self, x: Sequence, y: Sequence):
        return dot(x, matvec(self.gram, y))

    def norm(self, x: Sequence):
        return self(x, x)

    def as_map(self, eta: Sequence) -> Vector:
        """Q(eta, .) as a character, in X-coordinates."""
        return matvec(self.gram, eta)

    @functools.cached_property
    def inverse_gram(self) -> Matrix:
        return inverse(self.gram)

    @property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for r in self.gram for x in r)

    def to_json(self) -> dict:
        return {"gram": matrix_to_json(self.gram)}


def basic_form(rd: RootDatum) -> QuadraticForm:
    """W-invariant form on V_T with (theta^vee | theta^vee) = 2.

    In simple-coroot coordinates the Gram matrix is a_ij * d_j, d_j = 1 on
    long roots; for simply-laced types this is the Cartan matrix itself.
    """
    if not rd.is_irreducible:
        raise InputError("basic form requested for a reducible datum")
    d = rd.symmetrizer
    n = rd.rank
    g = as_matrix([[rd.cartan[i][j] * d[j] for j in range(n)] for i in range(n)])
    # change of basis to V_T-coordinates: eta_coroot = v_basis * y
    vb = rd.v_basis
    return QuadraticForm(matmul(matmul(transpose(vb), g), vb))


def weight_form_omega(rd: RootDatum) -> Matrix:
    """Dual invariant form on weights in omega coordinates, (alpha_i|alpha_j) = a_ij / d_i."""
    return _weight_form(rd.cartan)


@functools.lru_cache(maxsize=None)
def _weight_form(cartan: Matrix) -> Matrix:
    a_inv = inverse(cartan)
    d = symmetrizer(cartan)
    n = len(cartan)
    s = as_matrix([[Fraction(cartan[i][j], d[i]) for j in range(n)] for i in range(n)])
    return matmul(matmul(transpose(a_inv), s), a_inv)


# ---------------------------------------------------------------------------
# Freudenthal

def dominant_weights_below(rd: RootDatum, lam: Sequence) -> list[Vector]:
    """Dominant weights mu (omega coordinates) with lam - mu in the positive root cone."""
    roots = positive_roots(rd, "omega")
    start = tuple(lam)
    seen, queue = {start}, deque([start])
    while queue:
        mu = queue.popleft()
        for r in roots:
            nu = tuple(m - x for m, x in zip(mu, r))
            if all(x >= 0 for x in nu) and nu not in seen:
                seen.add(nu)
                queue.append(nu)
    return sorted(seen)


def freudenthal_multiplicities(rd: RootDatum, lam: Sequence) -> WeightMultiplicityTable:
    """Weight multiplicities of the irreducible module V(lam), lam in omega coordinates."""
    lam = tuple(int(x) if Fraction(x).denominator == 1 else x for x in lam)
    if len(lam) != rd.rank:
        raise InputError("highest weight has the wrong length")
    if any(not isinstance(x, int) or x < 0 for x in lam):
        raise InputError("highest weight must be dominant integral")
    g = weight_form_omega(rd)
    form = lambda x, y: dot(x, matvec(g, y))  # noqa: E731
    rho = tuple(1 for _ in lam)
    roots = positive_roots(rd, "omega")
    a_inv = inverse(rd.cartan)
    height = lambda mu: sum(matvec(a_inv, vsub(lam, mu)))  # noqa: E731
    dom = sorted(dominant_weights_below(rd, lam), key=height)
    dom_set = set(dom)
    lr = tuple(x + 1 for x in lam)
    top = form(lr, lr)
    mult: dict[Vector, int] = {}

    for mu in dom:
        if mu == lam:
            mult[mu] = 1
            continue
        acc = Fraction(0)
        for r in roots:
            k = 1
            while True:
                nu = tuple(m + k * x for m, x in zip(mu, r))
                dn, _ = rd.dominant_conjugate_omega(nu)
                if dn not in dom_set:
                    break
                acc += mult[dn] * form(nu, r)
                k += 1
        mr = tuple(m + p for m, p in zip(mu, rho))
        val = 2 * acc / (top - form(mr, mr))
        if val.denominator != 1:
            raise InputError("Freudenthal recursion produced a non-integer multiplicity")
        mult[mu] = int(val)
    table = {}
    for mu in dom:
        if mult[mu] == 0:
            continue
        for w in rd.orbit_omega(mu):
            table[w] = mult[mu]
    items = tuple(sorted(table.items(), key=lambda kv: (-sum(matvec(a_inv, kv[0])), kv[0])))
    return WeightMultiplicityTable(lam, items)


def weyl_dimension(rd: RootDatum, lam: Sequence) -> int:
    """prod over positive roots of (lam+rho | alpha^vee) / (rho | alpha^vee)."""
    num = Fraction(1)
    rho = tuple(1 for _ in lam)
    lr = tuple(x + 1 for x in lam)
    for r in positive_roots(rd, "omega"):
        num *= _coroot_omega_pairing(rd, r, lr) / _coroot_omega_pairing(rd, r, rho)
    return int(num)
