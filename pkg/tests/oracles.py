"""Independent oracles for the test suite.

None of these reuse the package's cyclotomic arithmetic: exact values are
built as sympy polynomials reduced modulo the cyclotomic polynomial, and
the Weyl group is enumerated from explicit reflection matrices.
"""

from __future__ import annotations

import cmath
import itertools
import math
from fractions import Fraction

import numpy as np
import sympy

x = sympy.Symbol("x")

# Reference constants (d, D, G invariants, h, h_dual) per type, as tabulated by hand.
def table1(series: str, ell: int):
    if series == "A":
        return 1, ell + 1, (ell + 1,), ell + 1, ell + 1
    if series == "B":
        return 2, 2 if ell % 2 else 1, (2,), 2 * ell, 2 * ell - 1
    if series == "C":
        return 2, 1, (2,), 2 * ell, ell + 1
    if series == "D":
        return 1, 4 if ell % 2 else 2, (4,) if ell % 2 else (2, 2), 2 * ell - 2, 2 * ell - 2
    return {
        "E6": (1, 3, (3,), 12, 12),
        "E7": (1, 2, (2,), 18, 18),
        "E8": (1, 1, (), 30, 30),
        "F4": (2, 1, (), 12, 9),
        "G2": (3, 1, (), 6, 4),
    }[f"{series}{ell}"]


def reduce_mod_phi(expr_poly: sympy.Poly, N: int) -> list[sympy.Rational]:
    phi = sympy.Poly(sympy.cyclotomic_poly(N, x), x)
    rem = expr_poly.rem(phi)
    coeffs = list(reversed(rem.all_coeffs()))
    deg = phi.degree()
    return [sympy.Rational(c) for c in coeffs] + [sympy.Rational(0)] * (deg - len(coeffs))


def zeta_poly(N: int, k: int) -> sympy.Poly:
    return sympy.Poly(x ** (k % N), x)


def q_integer_coeffs(N: int, eps_exp: int, n: int) -> list:
    """Power-basis coefficients of [n]_eps at eps = zeta_N^eps_exp.

    [n] = eps^{-(n-1)} + eps^{-(n-3)} + ... + eps^{n-1} for n >= 0, and -[-n] for n < 0.
    """
    sign = 1
    if n < 0:
        sign, n = -1, -n
    poly = sympy.Poly(0, x)
    for j in range(n):
        poly = poly + zeta_poly(N, eps_exp * (n - 1 - 2 * j))
    return [sign * c for c in reduce_mod_phi(poly, N)]


def as_fractions(coeffs) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(c.p), int(c.q)) for c in coeffs)


def a1_hopf_closed_form(r: int, m: int, n: int, s: int = 1) -> tuple[Fraction, ...]:
    """[(m+1)(n+1)]_eps for A1: N = 4r, eps = zeta_N^{2s}."""
    N = 4 * r
    return as_fractions(q_integer_coeffs(N, 2 * s, (m + 1) * (n + 1)))


def a1_qdim_closed_form(r: int, n: int, s: int = 1) -> tuple[Fraction, ...]:
    return as_fractions(q_integer_coeffs(4 * r, 2 * s, n + 1))


def weyl_matrices(cartan: np.ndarray) -> list[tuple[np.ndarray, int]]:
    """Whole Weyl group as matrices on fundamental-weight coordinates, by closure."""
    n = cartan.shape[0]
    gens = []
    for i in range(n):
        s = np.eye(n, dtype=np.int64)
        s[:, i] -= cartan[:, i]  # s_i(x) = x - x_i alpha_i
        gens.append(s)
    seen = {np.eye(n, dtype=np.int64).tobytes(): (np.eye(n, dtype=np.int64), 1)}
    frontier = [(np.eye(n, dtype=np.int64), 1)]
    while frontier:
        nxt = []
        for w, sg in frontier:
            for g in gens:
                u = g @ w
                key = u.tobytes()
                if key not in seen:
                    seen[key] = (u, -sg)
                    nxt.append((u, -sg))
        frontier = nxt
    return list(seen.values())


def hopf_numeric(rs, r: int, s: int, mu, nu) -> complex:
    """S(mu, nu) in floating point from explicit Weyl matrices."""
    N = 2 * rs.D * r
    z = cmath.exp(2j * math.pi * s / N)
    W = weyl_matrices(rs.cartan)
    gram = np.array([[float(q) for q in row] for row in rs.weight_gram])
    mp = np.array([c + 1 for c in mu], dtype=float)
    npv = np.array([c + 1 for c in nu], dtype=float)
    rho = np.ones(rs.rank)

    def wsum(a, b):
        return sum(sg * z ** (2 * rs.D * float((w @ a) @ gram @ b)) for w, sg in W)

    return wsum(mp, npv) / wsum(rho, rho)


def qdim_numeric(rs, r: int, s: int, mu) -> float:
    N = 2 * rs.D * r
    eps = cmath.exp(2j * math.pi * s * rs.D / N)
    out = 1.0
    for a in rs.positive_roots:
        top = float(rs.inner([c + 1 for c in mu], a))
        bot = float(rs.inner(rs.rho, a))
        out *= ((eps**top - eps**-top) / (eps**bot - eps**-bot)).real
    return out


def all_forest_shapes(m: int):
    """Labeled forests on m vertices via parent arrays (parent[i] < i or none); covers every shape."""
    options = [[-1] + list(range(i)) for i in range(m)]
    for parents in itertools.product(*options):
        yield [(p, i) for i, p in enumerate(parents) if p >= 0]


def smith_class_count(B, invariants) -> int:
    """|{alpha in G^m : B alpha = 0}| by brute force, independent of the package."""
    m = len(B)
    elems = list(itertools.product(*[range(q) for q in invariants]))
    count = 0
    for alpha in itertools.product(elems, repeat=m):
        ok = True
        for i in range(m):
            for t, q in enumerate(invariants):
                if sum(B[i][j] * alpha[j][t] for j in range(m)) % q:
                    ok = False
                    break
            if not ok:
                break
        count += ok
    return count


def unlabeled_forests(m: int):
    """One representative per isomorphism class of m-vertex forests (m small)."""
    seen = set()
    for edges in all_forest_shapes(m):
        key = min(
            tuple(sorted(tuple(sorted((p[a], p[b]))) for a, b in edges))
            for p in itertools.permutations(range(m))
        )
        if key not in seen:
            seen.add(key)
            yield list(key)
