"""Simple-object index sets at a root of unity and the G'-action on them."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import sympy
from sympy.matrices.normalforms import smith_normal_decomp

from .rootsys import CartanType, CenterGroup, RootSystem, build_root_system


class AlcoveError(ValueError):
    pass


class WallError(AlcoveError):
    """Folding ended on a wall of the alcove."""


class Case(enum.Enum):
    CASE1 = "Case1"
    CASE2 = "Case2"
    BOTH = "Both"
    UNSUPPORTED = "Unsupported"


def classify_case(rs: RootSystem, r: int) -> Case:
    c = rs.constants
    case1 = math.gcd(r, c.d) == 1 and r > c.h
    case2 = r % c.d == 0 and r // c.d > c.h_dual
    if case1 and case2:
        return Case.BOTH
    if case1:
        return Case.CASE1
    if case2:
        return Case.CASE2
    return Case.UNSUPPORTED


@dataclass(frozen=True)
class GElement:
    """An element of G' with a chosen lift in X' (fundamental-weight coords)."""

    cls: tuple[int, ...]
    lift: tuple[Fraction, ...]


class AlcoveSpec:
    """Parameters (g, r, zeta) with the resulting alcove and grading.

    ``zeta = zeta_N ** zeta_exponent`` with ``N = 2 D r``; then
    ``eps = zeta ** D`` and ``eps**2`` has order ``r``.
    """

    def __init__(self, root_system: RootSystem, r: int, zeta_exponent: int = 1):
        self.root_system = rs = root_system
        self.r = int(r)
        if self.r < 1:
            raise AlcoveError(f"r must be positive, got {r}")
        self.case = classify_case(rs, self.r)
        if self.case is Case.UNSUPPORTED:
            c = rs.constants
            raise AlcoveError(
                f"{rs.cartan_type} with r={r} is neither Case 1 (gcd(r,{c.d})=1, r>{c.h}) "
                f"nor Case 2 ({c.d}|r, r/{c.d}>{c.h_dual})"
            )
        self.N = 2 * rs.D * self.r
        if math.gcd(zeta_exponent, self.N) != 1:
            raise AlcoveError(f"zeta exponent {zeta_exponent} is not coprime to 2Dr = {self.N}")
        self.zeta_exponent = zeta_exponent % self.N

    # ---- derived parameters -----------------------------------------
    @property
    def cartan_type(self) -> CartanType:
        return self.root_system.cartan_type

    @property
    def d(self) -> int:
        return self.root_system.d

    @property
    def D(self) -> int:
        return self.root_system.D

    @property
    def k(self) -> int | None:
        """r/d - h_dual when d divides r (Case 2 level)."""
        if self.r % self.d:
            return None
        return self.r // self.d - self.root_system.constants.h_dual

    @property
    def is_case2(self) -> bool:
        """Case 2 semantics (X' = Y*); also used when the two cases overlap."""
        return self.case in (Case.CASE2, Case.BOTH)

    @property
    def wall_root(self) -> tuple[int, ...]:
        rs = self.root_system
        return rs.highest_root if self.is_case2 else rs.highest_short_root

    @property
    def center(self) -> CenterGroup:
        return self.root_system.center

    def eps_exponent(self) -> int:
        """eps = zeta_N ** eps_exponent."""
        return (self.zeta_exponent * self.D) % self.N

    def zeta_power(self, e: int) -> int:
        """Exponent of zeta_N equal to zeta ** e."""
        return (self.zeta_exponent * e) % self.N

    @cached_property
    def _wall_coeffs(self) -> tuple[int, ...]:
        rs = self.root_system
        theta = self.wall_root
        out = []
        for i in range(rs.rank):
            c = rs.inner(tuple(1 if j == i else 0 for j in range(rs.rank)), theta)
            assert c.denominator == 1
            out.append(int(c))
        return tuple(out)

    def wall_value(self, x: Sequence) -> Fraction:
        """(x | theta) for the wall root of this case."""
        return sum((Fraction(c) * w for c, w in zip(x, self._wall_coeffs)), Fraction(0))

    def in_alcove(self, mu: Sequence[int]) -> bool:
        if any(c < 0 for c in mu):
            return False
        return self.wall_value([c + 1 for c in mu]) < self.r

    def check_simple(self, mu: Sequence[int]) -> tuple[int, ...]:
        mu = tuple(int(c) for c in mu)
        if len(mu) != self.root_system.rank or not self.in_alcove(mu):
            raise AlcoveError(f"weight {mu} is not in the alcove of {self}")
        return mu

    # ---- enumeration ----------------------------------------------------
    @cached_property
    def simples(self) -> tuple[tuple[int, ...], ...]:
        """All mu with mu + rho in the open alcove, lexicographic order."""
        n = self.root_system.rank
        coeffs = self._wall_coeffs
        budget = self.r - 1 - sum(coeffs)  # sum mu_i c_i <= budget
        out: list[tuple[int, ...]] = []

        def rec(i, prefix, left):
            if i == n:
                out.append(tuple(prefix))
                return
            for a in range(left // coeffs[i] + 1):
                prefix.append(a)
                rec(i + 1, prefix, left - a * coeffs[i])
                prefix.pop()

        if budget >= 0:
            rec(0, [], budget)
        return tuple(out)

    @cached_property
    def grades(self) -> dict[tuple[int, ...], tuple[int, ...]]:
        cc = self.root_system.center_class
        return {mu: cc(mu) for mu in self.simples}

    @cached_property
    def by_grade(self) -> dict[tuple[int, ...], tuple[tuple[int, ...], ...]]:
        out = {g: [] for g in self.center.elements()}
        for mu in self.simples:
            out[self.grades[mu]].append(mu)
        return {g: tuple(v) for g, v in out.items()}

    # ---- G' -------------------------------------------------------------
    @cached_property
    def _gprime_lattices(self):
        rs = self.root_system
        n = rs.rank
        half = rs.half_lengths
        if self.is_case2:
            # X' = Y* spanned by lambda_i / d_i, Y' = X* spanned by alpha_i / d_i
            xbasis = [[Fraction(1 if j == i else 0, half[i]) for j in range(n)] for i in range(n)]
            ybasis = [[Fraction(int(rs.cartan[j, i]), half[i]) for j in range(n)] for i in range(n)]
        else:
            xbasis = [[Fraction(1 if j == i else 0) for j in range(n)] for i in range(n)]
            ybasis = [[Fraction(int(rs.cartan[j, i])) for j in range(n)] for i in range(n)]
        # Y' basis in X'-coordinates: solve sum_i c_i xbasis_i = ybasis_j
        X = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in xbasis]).T
        Y = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in ybasis]).T
        rel = X.inv() * Y
        if any(not v.is_integer for v in rel):  # pragma: no cover - structural invariant
            raise AlcoveError("Y' is not contained in X'")
        S, U, _ = smith_normal_decomp(sympy.Matrix(rel))
        diag = [abs(int(S[i, i])) for i in range(n)]
        keep = [i for i, e in enumerate(diag) if e != 1]
        inv = tuple(diag[i] for i in keep)
        rows = [[int(U[i, j]) for j in range(n)] for i in keep]
        return xbasis, ybasis, inv, rows

    @property
    def gprime_group(self) -> CenterGroup:
        return CenterGroup(self._gprime_lattices[2])

    def gprime_class_of(self, coords: Sequence[int]) -> tuple[int, ...]:
        """Class in G' of the X'-coordinate vector ``coords``."""
        _, _, inv, rows = self._gprime_lattices
        return tuple(sum(u * c for u, c in zip(row, coords)) % m for row, m in zip(rows, inv))

    def xprime_point(self, coords: Sequence[int]) -> tuple[Fraction, ...]:
        xbasis = self._gprime_lattices[0]
        n = self.root_system.rank
        return tuple(sum((Fraction(c) * xbasis[i][j] for i, c in enumerate(coords)), Fraction(0)) for j in range(n))

    def yprime_basis(self) -> list[tuple[Fraction, ...]]:
        return [tuple(v) for v in self._gprime_lattices[1]]

    @cached_property
    def gprime(self) -> tuple[GElement, ...]:
        """Elements of G' with lifts: least coordinate sum, then lexicographic."""
        G = self.gprime_group
        n = self.root_system.rank
        need = {g: None for g in G.elements()}
        bound = max(G.invariants, default=1)
        total = 0
        while any(v is None for v in need.values()):
            for coords in _compositions(total, n, bound):
                g = self.gprime_class_of(coords)
                if need[g] is None:
                    need[g] = coords
            total += 1
            if total > n * bound:  # pragma: no cover - structural invariant
                raise AlcoveError("failed to find lifts for G'")
        return tuple(GElement(g, self.xprime_point(need[g])) for g in sorted(need))

    def gprime_element(self, cls: Sequence[int]) -> GElement:
        cls = tuple(cls)
        for g in self.gprime:
            if g.cls == cls:
                return g
        raise AlcoveError(f"{cls} is not an element of G'")

    def gprime_neg(self, g: GElement) -> GElement:
        return self.gprime_element(self.gprime_group.neg(g.cls))

    # ---- affine folding ------------------------------------------------
    def _affine_coroot(self) -> tuple[Fraction, ...]:
        rs = self.root_system
        theta = self.wall_root
        scale = Fraction(2) / rs.inner(theta, theta)
        return tuple(scale * c for c in theta)

    def fold(self, x: Sequence) -> tuple[tuple[Fraction, ...], list]:
        """Map ``x`` into the closed alcove by reflections of W_eps.

        Returns the image and the word applied, as a list of ``("s", i)``
        (simple reflection) and ``("a",)`` (reflection in (x|theta) = r).
        """
        rs = self.root_system
        x = tuple(Fraction(c) for c in x)
        cor = self._affine_coroot()
        word: list = []
        for _ in range(100000):
            neg = next((i for i, c in enumerate(x) if c < 0), None)
            if neg is not None:
                x = rs.reflect(neg, x)
                word.append(("s", neg))
                continue
            excess = self.wall_value(x) - self.r
            if excess > 0:
                x = tuple(c - excess * a for c, a in zip(x, cor))
                word.append(("a",))
                continue
            return x, word
        raise AlcoveError("folding did not terminate")  # pragma: no cover

    def apply_word(self, word: list, x: Sequence) -> tuple[Fraction, ...]:
        """Apply a word from ``fold`` to ``x`` (plain, not dot, action)."""
        rs = self.root_system
        cor = self._affine_coroot()
        x = tuple(Fraction(c) for c in x)
        for step in word:
            if step[0] == "s":
                x = rs.reflect(step[1], x)
            else:
                excess = self.wall_value(x) - self.r
                x = tuple(c - excess * a for c, a in zip(x, cor))
        return x

    def gprime_dot(self, g: GElement, mu: Sequence[int], lift: Sequence | None = None) -> tuple[int, ...]:
        """g . mu = g(mu + rho) - rho, where g(x) folds r*lift + x into the alcove."""
        mu = self.check_simple(mu)
        gl = g.lift if lift is None else tuple(Fraction(c) for c in lift)
        x = tuple(self.r * a + m + 1 for a, m in zip(gl, mu))
        y, _ = self.fold(x)
        if any(c == 0 for c in y) or self.wall_value(y) == self.r:
            raise WallError(f"g={g.cls} applied to {mu} folds onto a wall: {y}")
        if any(c.denominator != 1 for c in y):
            raise AlcoveError(f"g={g.cls} applied to {mu} is not integral: {y}")
        return tuple(int(c) - 1 for c in y)

    def alcove_dump(self) -> str:
        lines = []
        for mu in self.simples:
            coords = ",".join(str(c) for c in mu)
            grade = ",".join(str(c) for c in self.grades[mu])
            lines.append(f"mu=({coords}) grade=({grade})")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"AlcoveSpec({self.cartan_type}, r={self.r}, zeta=zeta_{self.N}^{self.zeta_exponent})"

    __str__ = __repr__


def _compositions(total: int, n: int, bound: int):
    """Nonnegative vectors of length n with the given sum, entries <= bound, lex order."""
    if n == 0:
        if total == 0:
            yield ()
        return
    for a in range(min(total, bound) + 1):
        for rest in _compositions(total - a, n - 1, bound):
            yield (a,) + rest


def make_spec(cartan: CartanType | str, r: int, zeta_exponent: int = 1) -> AlcoveSpec:
    return AlcoveSpec(build_root_system(cartan), r, zeta_exponent)


def enumerate_alcove(spec: AlcoveSpec) -> dict[tuple[int, ...], tuple[tuple[int, ...], ...]]:
    return spec.by_grade


def gprime_elements(spec: AlcoveSpec) -> tuple[GElement, ...]:
    return spec.gprime


def gprime_dot(spec: AlcoveSpec, g: GElement, mu: Sequence[int]) -> tuple[int, ...]:
    return spec.gprime_dot(g, mu)
