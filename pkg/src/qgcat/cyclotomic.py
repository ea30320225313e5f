"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis ``1, z, ..., z^(phi-1)`` of
``z = exp(2 pi i / N)`` reduced modulo the N-th cyclotomic polynomial, as an
integer numerator tuple over a single positive denominator.  No floating
point enters any equality or zero test; ``to_complex`` exists for display and
for choosing signs of square roots.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Sequence

import numpy as np
import sympy


class CyclotomicError(ArithmeticError):
    pass


class CyclotomicField:
    """Reduction data for Q(zeta_N); obtain instances through ``field(N)``."""

    def __init__(self, N: int):
        if N < 1:
            raise ValueError(f"cyclotomic order must be positive, got {N}")
        self.N = N
        x = sympy.Symbol("x")
        coeffs = sympy.Poly(sympy.cyclotomic_poly(N, x), x).all_coeffs()[::-1]
        self.modulus = tuple(int(c) for c in coeffs)  # low -> high, monic
        self.phi = len(self.modulus) - 1
        # rows[j] = x^j mod Phi_N for 0 <= j < max(N, 2*phi - 1)
        rows = []
        cur = [0] * self.phi
        cur[0] = 1
        for _ in range(max(N, 2 * self.phi - 1)):
            rows.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for i in range(self.phi):
                    cur[i] -= top * self.modulus[i]
        self.rows = tuple(rows)
        self._reduce_mat = np.array(rows[:N], dtype=object)
        self._reduce_mat64 = np.array(rows[:N], dtype=np.int64)
        self._reduce_max = int(np.abs(self._reduce_mat64).max())
        self.units = tuple(j for j in range(1, N + 1) if math.gcd(j, N) == 1)

    def reduce_poly(self, coeffs: Sequence[int]) -> list[int]:
        """Reduce a polynomial of degree < max(N, 2 phi - 1) modulo Phi_N."""
        phi = self.phi
        out = list(coeffs[:phi]) + [0] * max(0, phi - len(coeffs))
        rows = self.rows
        for j in range(phi, len(coeffs)):
            c = coeffs[j]
            if c:
                row = rows[j] if j < len(rows) else rows[j % self.N]
                for i in range(phi):
                    ri = row[i]
                    if ri:
                        out[i] += c * ri
        return out

    def reduce_group_ring(self, vec) -> list[int]:
        """Map a vector in Z[x]/(x^N - 1) (length N) into the power basis."""
        v = np.asarray(vec, dtype=object)
        return [int(c) for c in v.dot(self._reduce_mat)]

    def reduce_group_ring_batch(self, arr) -> np.ndarray:
        """Row-wise ``reduce_group_ring`` for a (B, N) array."""
        arr = np.asarray(arr)
        if arr.dtype != object and arr.size:
            peak = int(np.abs(arr).max())
            if peak * self.N * self._reduce_max < 2**62:
                return arr.astype(np.int64) @ self._reduce_mat64
        return np.asarray(arr, dtype=object).dot(self._reduce_mat)

    def __repr__(self) -> str:
        return f"CyclotomicField({self.N})"


@lru_cache(maxsize=None)
def field(N: int) -> CyclotomicField:
    return CyclotomicField(N)


def _normalize(num: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    if den < 0:
        num = [-c for c in num]
        den = -den
    g = reduce(math.gcd, num, den)
    if g > 1:
        num = [c // g for c in num]
        den //= g
    if not any(num):
        den = 1
    return tuple(num), den


class CycNum:
    """An element of Q(zeta_N); immutable and hashable."""

    __slots__ = ("N", "num", "den", "_field")

    def __init__(self, N: int, num: Iterable[int], den: int = 1, *, _reduced: bool = False):
        F = field(N)
        num = [int(c) for c in num]
        if not _reduced or len(num) != F.phi:
            num = F.reduce_poly(num) if len(num) > F.phi else num + [0] * (F.phi - len(num))
        self.N = N
        self._field = F
        self.num, self.den = _normalize(num, int(den))

    # ---- constructors -------------------------------------------------
    @classmethod
    def zero(cls, N: int) -> "CycNum":
        return cls(N, [0] * field(N).phi, 1, _reduced=True)

    @classmethod
    def one(cls, N: int) -> "CycNum":
        return cls.from_rational(N, 1)

    @classmethod
    def from_rational(cls, N: int, q) -> "CycNum":
        q = Fraction(q)
        num = [0] * field(N).phi
        num[0] = q.numerator
        return cls(N, num, q.denominator, _reduced=True)

    @classmethod
    def zeta(cls, N: int, k: int = 1) -> "CycNum":
        """``zeta_N ** k`` for any integer ``k``."""
        F = field(N)
        k %= N
        return cls(N, F.rows[k], 1, _reduced=True)

    @classmethod
    def from_group_ring(cls, N: int, vec) -> "CycNum":
        F = field(N)
        return cls(N, F.reduce_group_ring(vec), 1, _reduced=True)

    @classmethod
    def from_coeffs(cls, N: int, coeffs: Sequence) -> "CycNum":
        """Power-basis coefficients given as rationals (any length)."""
        fr = [Fraction(c) for c in coeffs]
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (f.denominator for f in fr), 1)
        return cls(N, [int(f * den) for f in fr], den)

    # ---- inspection ---------------------------------------------------
    @property
    def phi(self) -> int:
        return self._field.phi

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def is_integral(self) -> bool:
        """True when the element lies in Z[zeta_N] (the ring of integers)."""
        return self.den == 1

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise CyclotomicError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def group_ring_vector(self, length: int | None = None) -> list[int]:
        """Integer lift to Z[x]/(x^N - 1); requires an algebraic integer."""
        if self.den != 1:
            raise CyclotomicError("group-ring lift needs an algebraic integer")
        n = self.N if length is None else length
        out = list(self.num) + [0] * (n - self.phi)
        return out

    # ---- embedding between orders --------------------------------------
    def embed(self, M: int) -> "CycNum":
        """Image in Q(zeta_M) for ``N | M`` via zeta_N = zeta_M^(M/N)."""
        if M == self.N:
            return self
        if M % self.N:
            raise CyclotomicError(f"cannot embed order {self.N} into order {M}")
        step = M // self.N
        poly = [0] * (step * (self.phi - 1) + 1)
        for i, c in enumerate(self.num):
            poly[i * step] = c
        F = field(M)
        # step*(phi-1) < M, so every power is reduced by F.rows
        out = [0] * F.phi
        for j, c in enumerate(poly):
            if c:
                row = F.rows[j]
                for i in range(F.phi):
                    out[i] += c * row[i]
        return CycNum(M, out, self.den, _reduced=True)

    def _coerce(self, other) -> tuple["CycNum", "CycNum"]:
        if isinstance(other, CycNum):
            if other.N == self.N:
                return self, other
            M = self.N * other.N // math.gcd(self.N, other.N)
            return self.embed(M), other.embed(M)
        if isinstance(other, (int, Fraction)):
            return self, CycNum.from_rational(self.N, other)
        return NotImplemented  # type: ignore[return-value]

    # ---- arithmetic ---------------------------------------------------
    def __add__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        if a.den == b.den:
            return CycNum(a.N, [x + y for x, y in zip(a.num, b.num)], a.den, _reduced=True)
        return CycNum(a.N, [x * b.den + y * a.den for x, y in zip(a.num, b.num)], a.den * b.den, _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.N, [-x for x in self.num], self.den, _reduced=True)

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycNum(self.N, [x * q.numerator for x in self.num], self.den * q.denominator, _reduced=True)
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        an, bn = a.num, b.num
        phi = a.phi
        conv = [0] * (2 * phi - 1)
        for i in range(phi):
            ai = an[i]
            if ai:
                for j in range(phi):
                    bj = bn[j]
                    if bj:
                        conv[i + j] += ai * bj
        return CycNum(a.N, a._field.reduce_poly(conv), a.den * b.den, _reduced=True)

    __rmul__ = __mul__

    def galois(self, j: int) -> "CycNum":
        """Apply the automorphism zeta_N -> zeta_N^j (j coprime to N)."""
        N = self.N
        if math.gcd(j, N) != 1:
            raise CyclotomicError(f"Galois index {j} is not coprime to {N}")
        F = self._field
        out = [0] * F.phi
        for i, c in enumerate(self.num):
            if c:
                row = F.rows[(i * j) % N]
                for t in range(F.phi):
                    out[t] += c * row[t]
        return CycNum(N, out, self.den, _reduced=True)

    def conjugate(self) -> "CycNum":
        return self.galois(self.N - 1)

    def norm(self) -> Fraction:
        """Field norm down to Q."""
        prod = self
        for j in self._field.units:
            if j != 1:
                prod = prod * self.galois(j)
        return prod.rational_value()

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in cyclotomic field")
        if self.is_rational():
            return CycNum.from_rational(self.N, 1 / Fraction(self.num[0], self.den))
        # a^{-1} = prod_{sigma != 1} sigma(a) / N(a)
        integral = CycNum(self.N, self.num, 1, _reduced=True)
        others = CycNum.one(self.N)
        for j in self._field.units:
            if j != 1:
                others = others * integral.galois(j)
        nrm = (integral * others).rational_value()
        return others * (Fraction(self.den) / nrm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in cyclotomic field")
            return self * (1 / Fraction(other))
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return a * b.inverse()

    def __rtruediv__(self, other):
        return CycNum.from_rational(self.N, other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = CycNum.one(self.N)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # ---- comparison ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        if not isinstance(other, CycNum):
            return NotImplemented
        if other.N != self.N:
            a, b = self._coerce(other)
            return a.num == b.num and a.den == b.den
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return hash((self.N, self.num, self.den))

    # ---- display ------------------------------------------------------
    def to_complex(self, index: int = 1) -> complex:
        return embed_complex(self, index)

    def __str__(self) -> str:
        return f"{self.N}; " + ", ".join(str(c) for c in self.coeffs)

    def __repr__(self) -> str:
        return f"CycNum({self})"

    def pretty(self) -> str:
        z = self.to_complex()
        return f"[{self}] ~ {_fmt_complex(z)}"


def _fmt_complex(z: complex) -> str:
    re = 0.0 if abs(z.real) < 5e-13 else z.real
    im = 0.0 if abs(z.imag) < 5e-13 else z.imag
    if im == 0.0:
        return f"{re:.12g}"
    return f"{re:.12g}{im:+.12g}i"


def parse_cycnum(text: str) -> CycNum:
    """Inverse of ``str``: ``"N; c0, c1, ..."`` with rationals as ``p/q``."""
    try:
        head, _, tail = text.partition(";")
        N = int(head.strip())
        parts = [p.strip() for p in tail.split(",") if p.strip()]
        coeffs = [Fraction(p) for p in parts]
    except ValueError as exc:
        raise ValueError(f"malformed cyclotomic literal {text!r}") from exc
    if len(coeffs) > field(N).phi:
        raise ValueError(f"too many coefficients for order {N}")
    return CycNum.from_coeffs(N, coeffs)


def embed_complex(a: CycNum, conjugate_index: int = 1) -> complex:
    """Image of ``a`` under zeta_N -> exp(2 pi i j / N)."""
    N = a.N
    if math.gcd(conjugate_index, N) != 1:
        raise CyclotomicError(f"index {conjugate_index} is not coprime to {N}")
    w = 2j * math.pi * conjugate_index / N
    return sum(c * cmath.exp(w * i) for i, c in enumerate(a.num)) / a.den


def cyclotomic_arithmetic(a: CycNum, b: CycNum, op: str) -> CycNum:
    ops = {"add": CycNum.__add__, "sub": CycNum.__sub__, "mul": CycNum.__mul__, "div": CycNum.__truediv__}
    try:
        fn = ops[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return fn(a, b)


def q_integer(N: int, eps_exp: int, n: int) -> CycNum:
    """``[n]`` at ``eps = zeta_N ** eps_exp``."""
    num = CycNum.zeta(N, eps_exp * n) - CycNum.zeta(N, -eps_exp * n)
    den = CycNum.zeta(N, eps_exp) - CycNum.zeta(N, -eps_exp)
    return num / den


class RadicalScalar:
    """``base * Dcal ** dexp`` with ``Dcal**2 = delta0`` kept formal.

    ``dexp`` is normalized into {0, -1} by absorbing powers of ``delta0``.
    ``Dcal`` itself is the positive square root of ``delta0`` under the
    index-1 complex embedding; it is only used for display and for the sign
    in mixed-parity comparisons.
    """

    __slots__ = ("base", "dexp", "delta0")

    def __init__(self, base: CycNum, dexp: int, delta0: CycNum):
        if delta0.is_zero():
            raise ZeroDivisionError("delta0 must be nonzero")
        if dexp % 2 == 0:
            base = base * delta0 ** (dexp // 2)
            dexp = 0
        else:
            base = base * delta0 ** ((dexp + 1) // 2)
            dexp = -1
        self.base = base
        self.dexp = dexp
        self.delta0 = delta0

    def _check(self, other: "RadicalScalar"):
        if other.delta0 != self.delta0:
            raise CyclotomicError("radical scalars over different delta0")

    def __mul__(self, other):
        if isinstance(other, RadicalScalar):
            self._check(other)
            return RadicalScalar(self.base * other.base, self.dexp + other.dexp, self.delta0)
        return RadicalScalar(self.base * other, self.dexp, self.delta0)

    __rmul__ = __mul__

    def inverse(self) -> "RadicalScalar":
        return RadicalScalar(self.base.inverse(), -self.dexp, self.delta0)

    def __truediv__(self, other):
        if isinstance(other, RadicalScalar):
            return self * other.inverse()
        return RadicalScalar(self.base / other, self.dexp, self.delta0)

    def __add__(self, other):
        if not isinstance(other, RadicalScalar):
            other = RadicalScalar(other if isinstance(other, CycNum) else CycNum.from_rational(self.delta0.N, other), 0, self.delta0)
        self._check(other)
        if other.base.is_zero():
            return self
        if self.base.is_zero():
            return other
        if self.dexp != other.dexp:
            raise CyclotomicError("cannot add radical scalars of different Dcal parity")
        return RadicalScalar(self.base + other.base, self.dexp, self.delta0)

    __radd__ = __add__

    def is_zero(self) -> bool:
        return self.base.is_zero()

    def square(self) -> CycNum:
        return self.base * self.base * self.delta0 ** self.dexp

    def __eq__(self, other):
        if not isinstance(other, RadicalScalar):
            if isinstance(other, (int, Fraction, CycNum)):
                other = RadicalScalar(
                    other if isinstance(other, CycNum) else CycNum.from_rational(self.delta0.N, other), 0, self.delta0
                )
            else:
                return NotImplemented
        if self.delta0 != other.delta0:
            return False
        if self.dexp == other.dexp:
            return self.base == other.base
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        # mixed parity: equal squares fix the value up to sign
        if self.square() != other.square():
            return False
        a, b = self.to_complex(), other.to_complex()
        return abs(a - b) < abs(a + b)

    def __hash__(self):
        return hash((self.base, self.dexp))

    def dcal_complex(self) -> complex:
        return cmath.sqrt(embed_complex(self.delta0, 1))

    def to_complex(self) -> complex:
        return embed_complex(self.base, 1) * self.dcal_complex() ** self.dexp

    def __str__(self) -> str:
        if self.dexp == 0:
            return f"[{self.base}]"
        return f"[{self.base}] * D^{self.dexp}"

    def __repr__(self) -> str:
        return f"RadicalScalar({self})"

    def pretty(self) -> str:
        return f"{self} ~ {_fmt_complex(self.to_complex())}"
