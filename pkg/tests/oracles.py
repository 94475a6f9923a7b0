"""Independent reference implementations used only by the tests.

Nothing here imports the package; each oracle recomputes its answer by a
different method (determinantal divisors, Kostant's formula, brute force).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache


def det(m):
    """Laplace expansion; fine for the tiny matrices used here."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(n))


def invariant_factors(m):
    """Invariant factors > 1 of an integer matrix, via gcds of k x k minors."""
    rows, cols = len(m), len(m[0])
    d = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in itertools.combinations(range(rows), k):
            for ci in itertools.combinations(range(cols), k):
                g = math.gcd(g, det([[m[i][j] for j in ci] for i in ri]))
        if g == 0:
            break
        d.append(g)
    factors = [d[k] // d[k - 1] for k in range(1, len(d))]
    return [f for f in factors if f != 1]


def cokernel_free_rank(m):
    rows = len(m)
    k = 0
    for k in range(min(rows, len(m[0])), -1, -1):
        if any(det([[m[i][j] for j in ci] for i in ri]) != 0
               for ri in itertools.combinations(range(rows), k)
               for ci in itertools.combinations(range(len(m[0])), k)):
            break
    return rows - k


# ---------------------------------------------------------------------------
# hand-entered root systems (Bourbaki numbering, alpha_1 long in B2, short in G2)

CARTAN = {
    "A1": [[2]],
    "A2": [[2, -1], [-1, 2]],
    "B2": [[2, -1], [-2, 2]],
    "G2": [[2, -3], [-1, 2]],
}

POSITIVE_ROOTS = {
    "A1": [(1,)],
    "A2": [(1, 0), (0, 1), (1, 1)],
    "B2": [(1, 0), (0, 1), (1, 1), (1, 2)],
    "G2": [(1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2)],
}

WEYL_ORDER = {"A1": 2, "A2": 6, "B2": 8, "G2": 12}


def _reflect(a, i, mu):
    # mu in omega coordinates; alpha_i has omega coordinates = column i of a
    k = mu[i]
    return tuple(mu[r] - k * a[r][i] for r in range(len(mu)))


def weyl_group_signed(a):
    """All (sign, w) as functions of omega coordinates, by closure under reflections."""
    n = len(a)
    probe = tuple(range(1, n + 1))  # regular dominant weight; its orbit is free
    seen = {probe: (1, ())}
    frontier = [probe]
    while frontier:
        new = []
        for v in frontier:
            sign, word = seen[v]
            for i in range(n):
                w = _reflect(a, i, v)
                if w not in seen:
                    seen[w] = (-sign, word + (i,))
                    new.append(w)
        frontier = new
    return [(sign, word) for sign, word in seen.values()]


def apply_word(a, word, mu):
    for i in reversed(word):
        mu = _reflect(a, i, mu)
    return mu


def _to_root_coords(a, mu):
    """Solve a . c = mu exactly (mu in omega coordinates)."""
    n = len(a)
    d = det(a)
    out = []
    for j in range(n):
        m = [row[:] for row in a]
        for i in range(n):
            m[i][j] = mu[i]
        out.append(Fraction(det(m), d))
    return out


def kostant_multiplicities(name, lam):
    """Weight multiplicities of V(lam) by Kostant's formula."""
    a = CARTAN[name]
    roots = POSITIVE_ROOTS[name]
    n = len(a)
    rho = tuple(1 for _ in range(n))

    @lru_cache(maxsize=None)
    def partitions(c, k=0):
        if all(x == 0 for x in c):
            return 1
        if k == len(roots) or any(x < 0 for x in c):
            return 0
        total = 0
        r = roots[k]
        cur = c
        while all(x >= 0 for x in cur):
            total += partitions(cur, k + 1)
            cur = tuple(x - y for x, y in zip(cur, r))
        return total

    group = weyl_group_signed(a)
    lr = tuple(x + y for x, y in zip(lam, rho))
    # weights: lam minus non-negative root combinations, bounded by the height of lam
    height = sum(_to_root_coords(a, lam))
    out = {}
    for c in itertools.product(range(int(2 * height) + 2), repeat=n):
        mu = tuple(lam[i] - sum(c[j] * a[i][j] for j in range(n)) for i in range(n))
        total = 0
        for sign, word in group:
            diff = tuple(x - y - z for x, y, z in zip(apply_word(a, word, lr), mu, rho))
            cc = _to_root_coords(a, diff)
            if all(x.denominator == 1 and x >= 0 for x in cc):
                total += sign * partitions(tuple(int(x) for x in cc))
        if total:
            out[mu] = total
    return out


def root_lengths(name):
    """|alpha_i|^2 up to a common scale, from a_ij |alpha_i|^2 = a_ji |alpha_j|^2."""
    a = CARTAN[name]
    n = len(a)
    lens = [None] * n
    lens[0] = Fraction(1)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if lens[i] is not None and lens[j] is None and a[i][j] != 0:
                    lens[j] = lens[i] * a[i][j] / a[j][i]
                    changed = True
    return lens


def weyl_dimension_oracle(name, lam):
    """prod over positive roots of (lam + rho | r) / (rho | r)."""
    lens = root_lengths(name)
    out = Fraction(1)
    for r in POSITIVE_ROOTS[name]:
        top = sum((lam[i] + 1) * c * lens[i] for i, c in enumerate(r))
        bot = sum(c * lens[i] for i, c in enumerate(r))
        out *= Fraction(top) / bot
    assert out.denominator == 1
    return int(out)


# ---------------------------------------------------------------------------
# brute-force lattice geometry

def qnorm(g, v):
    n = len(v)
    return sum(Fraction(g[i][j]) * v[i] * v[j] for i in range(n) for j in range(n))


def nearest_lattice_points(g, x, radius):
    """All integer points minimizing Q(p - x), searched in a fixed box around round(x)."""
    base = [round(Fraction(c)) for c in x]
    best, pts = None, []
    for off in itertools.product(range(-radius, radius + 1), repeat=len(x)):
        p = tuple(b + o for b, o in zip(base, off))
        d = qnorm(g, [pi - xi for pi, xi in zip(p, x)])
        if best is None or d < best:
            best, pts = d, [p]
        elif d == best:
            pts.append(p)
    return sorted(pts), best


def minimizers_of_f(g, t, beta, radius):
    """argmin of t Q(eta,eta)/2 + Q(beta,eta) over a box, straight from the definition."""
    n = len(beta)
    center = [round(Fraction(-b, t)) for b in beta]
    vals = {}
    for off in itertools.product(range(-radius, radius + 1), repeat=n):
        eta = tuple(c + o for c, o in zip(center, off))
        qb = sum(Fraction(g[i][j]) * beta[i] * eta[j] for i in range(n) for j in range(n))
        vals[eta] = Fraction(t) * qnorm(g, eta) / 2 + qb
    m = min(vals.values())
    return sorted(e for e, v in vals.items() if v == m)
