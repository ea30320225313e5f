"""Root systems of simple Lie algebras in the fundamental-weight basis.

Every lattice vector is a coordinate tuple ``x`` with ``x = sum_i x_i lambda_i``.
A simple root ``alpha_j`` has coordinates ``cartan[:, j]`` and the inner
product is normalized so that short roots have square length 2.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

import numpy as np
import sympy
from sympy.matrices.normalforms import smith_normal_decomp

# Build-time rank caps keep the Weyl group enumerable.
RANK_CAPS = {"A": (1, 8), "B": (2, 6), "C": (2, 6), "D": (3, 6), "E": (6, 8), "F": (4, 4), "G": (2, 2)}

# Orbits above this size are never enumerated.
WEYL_ENUMERATION_CAP = 10**7


class RootSystemError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class CartanType:
    series: str
    rank: int

    def __post_init__(self):
        if self.series not in RANK_CAPS:
            raise RootSystemError(f"unknown Lie series {self.series!r}")
        lo, hi = RANK_CAPS[self.series]
        if not lo <= self.rank <= hi:
            raise RootSystemError(f"unsupported rank {self.rank} for series {self.series} (allowed {lo}..{hi})")

    @classmethod
    def parse(cls, text: str) -> "CartanType":
        m = re.fullmatch(r"\s*([A-Ga-g])\s*_?\s*(\d+)\s*", text)
        if not m:
            raise RootSystemError(f"cannot parse Cartan type {text!r}")
        return cls(m.group(1).upper(), int(m.group(2)))

    def __str__(self) -> str:
        return f"{self.series}{self.rank}"


def _diagram(ct: CartanType) -> tuple[list[int], list[tuple[int, int]]]:
    """Half square lengths (short = 1) and edges, Bourbaki numbering."""
    s, n = ct.series, ct.rank
    chain = [(i, i + 1) for i in range(n - 1)]
    if s == "A":
        return [1] * n, chain
    if s == "B":
        return [2] * (n - 1) + [1], chain
    if s == "C":
        return [1] * (n - 1) + [2], chain
    if s == "D":
        return [1] * n, [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    if s == "E":
        edges = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(i, i + 1) for i in range(4, n - 1)]
        return [1] * n, edges
    if s == "F":
        return [2, 2, 1, 1], chain
    if s == "G":
        return [1, 3], chain
    raise RootSystemError(str(ct))  # pragma: no cover


def _frac(q) -> Fraction:
    q = sympy.Rational(q)
    return Fraction(int(q.p), int(q.q))


def _smith(mat: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]]]:
    """Invariant factors > 1 of an integer square matrix and the left transform rows."""
    M = sympy.Matrix(mat)
    S, U, _ = smith_normal_decomp(M)
    diag = [abs(int(S[i, i])) for i in range(min(S.shape))]
    keep = [i for i, e in enumerate(diag) if e != 1]
    return [diag[i] for i in keep], [[int(U[i, j]) for j in range(U.shape[1])] for i in keep]


@dataclass(frozen=True)
class CenterGroup:
    """Finite abelian group Z_{m1} x ... x Z_{mt}; elements are int tuples."""

    invariants: tuple[int, ...]

    @property
    def order(self) -> int:
        return math.prod(self.invariants)

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.invariants)

    def reduce(self, g: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(x) % m for x, m in zip(g, self.invariants))

    def add(self, a, b) -> tuple[int, ...]:
        return tuple((x + y) % m for x, y, m in zip(a, b, self.invariants))

    def neg(self, a) -> tuple[int, ...]:
        return tuple((-x) % m for x, m in zip(a, self.invariants))

    def scale(self, k: int, a) -> tuple[int, ...]:
        return tuple((k * x) % m for x, m in zip(a, self.invariants))

    def elements(self) -> Iterator[tuple[int, ...]]:
        def rec(i):
            if i == len(self.invariants):
                yield ()
                return
            for x in range(self.invariants[i]):
                for rest in rec(i + 1):
                    yield (x,) + rest

        return rec(0)

    def __str__(self) -> str:
        if not self.invariants:
            return "1"
        return " x ".join(f"Z{m}" for m in self.invariants)


@dataclass(frozen=True)
class TableConstants:
    d: int
    D: int
    h: int
    h_dual: int
    center_invariants: tuple[int, ...]

    @property
    def center_order(self) -> int:
        return math.prod(self.center_invariants)


class RootSystem:
    """Immutable root system data for a ``CartanType``."""

    def __init__(self, ct: CartanType):
        self.cartan_type = ct
        half, edges = _diagram(ct)
        n = ct.rank
        self.rank = n
        self.half_lengths = tuple(half)  # (alpha_i|alpha_i) / 2
        gram = [[0] * n for _ in range(n)]
        for i in range(n):
            gram[i][i] = 2 * half[i]
        for i, j in edges:
            gram[i][j] = gram[j][i] = -max(half[i], half[j])
        self.root_gram = tuple(tuple(r) for r in gram)
        # a_ij = 2 (alpha_i|alpha_j) / (alpha_i|alpha_i); alpha_j = sum_i a_ij lambda_i
        cart = np.array([[gram[i][j] // half[i] for j in range(n)] for i in range(n)], dtype=np.int64)
        self.cartan = cart
        cinv = sympy.Matrix(cart.tolist()).inv()
        # (lambda_i|lambda_j) = d_i (A^{-1})_{ij}
        self.weight_gram = tuple(tuple(half[i] * _frac(cinv[i, j]) for j in range(n)) for i in range(n))
        den = 1
        for row in self.weight_gram:
            for q in row:
                den = den * q.denominator // math.gcd(den, q.denominator)
        self.D = den
        self.DM = np.array([[int(q * den) for q in row] for row in self.weight_gram], dtype=np.int64)
        self._cartan_inv = tuple(tuple(_frac(cinv[i, j]) for j in range(n)) for i in range(n))

        invariants, self._center_rows = _smith(cart.tolist())
        self.center = CenterGroup(tuple(invariants))

    # ---- basic lattice operations ------------------------------------
    def simple_root(self, j: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.cartan[:, j])

    @property
    def rho(self) -> tuple[int, ...]:
        return (1,) * self.rank

    def inner(self, x: Sequence, y: Sequence) -> Fraction:
        if len(x) != self.rank or len(y) != self.rank:
            raise RootSystemError(f"rank mismatch: expected {self.rank} coordinates")
        g = self.weight_gram
        total = Fraction(0)
        for i, xi in enumerate(x):
            if xi:
                row = g[i]
                for j, yj in enumerate(y):
                    if yj:
                        total += Fraction(xi) * row[j] * Fraction(yj)
        return total

    def Dinner(self, x: Sequence[int], y: Sequence[int]) -> int:
        """``D * (x|y)`` for integral ``x, y``."""
        return int(np.asarray(x, dtype=np.int64) @ self.DM @ np.asarray(y, dtype=np.int64))

    def root_coords(self, x: Sequence) -> tuple[Fraction, ...]:
        """Expansion of a weight in the simple roots."""
        ci = self._cartan_inv
        return tuple(sum((ci[i][j] * Fraction(x[j]) for j in range(self.rank)), Fraction(0)) for i in range(self.rank))

    def in_root_lattice(self, x: Sequence) -> bool:
        return all(c.denominator == 1 for c in self.root_coords(x))

    def reflect(self, i: int, x: Sequence) -> tuple:
        """Simple reflection s_i(x) = x - x_i alpha_i."""
        xi = x[i]
        if xi == 0:
            return tuple(x)
        col = self.cartan[:, i]
        return tuple(x[j] - xi * int(col[j]) for j in range(self.rank))

    def to_dominant(self, x: Sequence) -> tuple[tuple, int]:
        """Dominant W-conjugate of ``x`` and the length of the word used."""
        x = tuple(x)
        steps = 0
        while True:
            for i in range(self.rank):
                if x[i] < 0:
                    x = self.reflect(i, x)
                    steps += 1
                    break
            else:
                return x, steps

    # ---- roots --------------------------------------------------------
    @cached_property
    def roots(self) -> tuple[tuple[int, ...], ...]:
        seen = {self.simple_root(j) for j in range(self.rank)}
        frontier = list(seen)
        while frontier:
            nxt = []
            for r in frontier:
                for i in range(self.rank):
                    s = self.reflect(i, r)
                    if s not in seen:
                        seen.add(s)
                        nxt.append(s)
            frontier = nxt
        return tuple(sorted(seen))

    @cached_property
    def positive_roots(self) -> tuple[tuple[int, ...], ...]:
        return tuple(r for r in self.roots if all(c >= 0 for c in self.root_coords(r)))

    def _dominant_root(self, sqlen: int) -> tuple[int, ...]:
        found = [r for r in self.positive_roots if all(c >= 0 for c in r) and self.inner(r, r) == sqlen]
        if len(found) != 1:  # pragma: no cover - structural invariant
            raise RootSystemError(f"expected one dominant root of length {sqlen}, got {found}")
        return found[0]

    @cached_property
    def highest_short_root(self) -> tuple[int, ...]:
        """alpha_0: the dominant root of square length 2."""
        return self._dominant_root(2)

    @cached_property
    def highest_root(self) -> tuple[int, ...]:
        """beta_0: the dominant root of square length 2d."""
        return self._dominant_root(2 * self.d)

    @cached_property
    def d(self) -> int:
        n = self.rank
        off = [abs(int(self.cartan[i, j])) for i in range(n) for j in range(n) if i != j]
        return max(off, default=1)

    @cached_property
    def constants(self) -> TableConstants:
        h = len(self.roots) // self.rank
        h_dual = int(self.inner(self.rho, self.highest_root) / self.d) + 1
        return TableConstants(self.d, self.D, h, h_dual, self.center.invariants)

    @cached_property
    def marks(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.root_coords(self.highest_root))

    @cached_property
    def weyl_order(self) -> int:
        # |W| = l! * prod(marks) * |X/Y|
        return math.factorial(self.rank) * math.prod(self.marks) * self.center.order

    # ---- grading and duality -----------------------------------------
    def center_class(self, x: Sequence) -> tuple[int, ...]:
        if any(Fraction(c).denominator != 1 for c in x):
            raise RootSystemError(f"center_class needs an integral weight, got {tuple(x)}")
        xs = [int(c) for c in x]
        return tuple(sum(u * c for u, c in zip(row, xs)) % m for row, m in zip(self._center_rows, self.center.invariants))

    @cached_property
    def minus_w0_permutation(self) -> tuple[int, ...]:
        """Index map p with -w0(lambda_i) = lambda_{p(i)}."""
        perm = []
        for i in range(self.rank):
            neg = tuple(-1 if j == i else 0 for j in range(self.rank))
            dom, _ = self.to_dominant(neg)
            perm.append(dom.index(1))
        return tuple(perm)

    def dual_weight(self, mu: Sequence[int]) -> tuple[int, ...]:
        if any(c < 0 for c in mu):
            raise RootSystemError(f"dual_weight needs a dominant weight, got {tuple(mu)}")
        perm = self.minus_w0_permutation
        out = [0] * self.rank
        for i, c in enumerate(mu):
            out[perm[i]] = int(c)
        return tuple(out)

    # ---- Weyl orbits --------------------------------------------------
    def regular_orbit(self, x: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
        """W-orbit of a regular dominant weight with signs det(w).

        Walks down from ``x`` level by level: ``s_i`` raises the length of
        ``w`` exactly when coordinate ``i`` of ``w(x)`` is positive.
        """
        if any(c <= 0 for c in x):
            raise RootSystemError(f"regular_orbit needs a strictly dominant weight, got {tuple(x)}")
        if self.weyl_order > WEYL_ENUMERATION_CAP:
            raise RootSystemError(
                f"Weyl group of {self.cartan_type} has order {self.weyl_order} > cap {WEYL_ENUMERATION_CAP}"
            )
        cart = self.cartan.T  # row i = alpha_i
        level = np.array([x], dtype=np.int64)
        points = [level]
        signs = [np.ones(1, dtype=np.int64)]
        sign = 1
        while True:
            chunks = []
            for i in range(self.rank):
                mask = level[:, i] > 0
                if mask.any():
                    sub = level[mask]
                    chunks.append(sub - sub[:, i : i + 1] * cart[i][None, :])
            if not chunks:
                break
            level = np.unique(np.concatenate(chunks), axis=0)
            sign = -sign
            points.append(level)
            signs.append(np.full(len(level), sign, dtype=np.int64))
        pts = np.concatenate(points)
        sg = np.concatenate(signs)
        if len(pts) != self.weyl_order:  # pragma: no cover - structural invariant
            raise RootSystemError(f"orbit size {len(pts)} != |W| = {self.weyl_order}")
        return pts, sg

    def weyl_group_elements(self) -> list[tuple[np.ndarray, int]]:
        """All of W as integer matrices acting on fundamental coordinates."""
        pts, sg = self.regular_orbit(self.rho)
        # w is determined by w(rho); recover w as a matrix from images of lambda_i
        mats = []
        for p, s in zip(pts, sg):
            w = self._word_to(tuple(int(c) for c in p))
            mats.append((w, int(s)))
        return mats

    def _word_to(self, target: tuple[int, ...]) -> np.ndarray:
        """Matrix of the unique w with w(rho) = target."""
        word = []
        x = target
        while any(c < 0 for c in x):
            i = next(i for i, c in enumerate(x) if c < 0)
            x = self.reflect(i, x)
            word.append(i)
        mat = np.eye(self.rank, dtype=np.int64)
        # target = s_{word[0]} ... s_{word[-1]} (rho)
        for i in reversed(word):
            refl = np.eye(self.rank, dtype=np.int64)
            refl[:, i] -= self.cartan[:, i]
            mat = refl @ mat
        return mat

    def __repr__(self) -> str:
        return f"RootSystem({self.cartan_type})"


@lru_cache(maxsize=None)
def build_root_system(ct: CartanType | str) -> RootSystem:
    if isinstance(ct, str):
        ct = CartanType.parse(ct)
    return RootSystem(ct)


def inner_product(rs: RootSystem, x: Sequence, y: Sequence) -> Fraction:
    return rs.inner(x, y)


def center_class(rs: RootSystem, x: Sequence) -> tuple[int, ...]:
    return rs.center_class(x)


def dual_weight(rs: RootSystem, mu: Sequence[int]) -> tuple[int, ...]:
    return rs.dual_weight(mu)
