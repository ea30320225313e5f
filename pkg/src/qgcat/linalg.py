"""Exact determinants over Q(zeta_N).

``det`` is plain Gaussian elimination (one field inverse per pivot).
``is_invertible`` first tries a cheap certificate: reduce modulo a prime
``p = 1 mod N`` where zeta_N maps to a primitive root in F_p.  A nonzero
image proves the determinant is nonzero; otherwise it falls back to ``det``.
"""

from __future__ import annotations

from typing import Sequence

import sympy

from .cyclotomic import CycNum


def det(rows: Sequence[Sequence[CycNum]], N: int) -> CycNum:
    a = [list(r) for r in rows]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    result = CycNum.one(N)
    for col in range(n):
        piv = next((i for i in range(col, n) if not a[i][col].is_zero()), None)
        if piv is None:
            return CycNum.zero(N)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            result = -result
        p = a[col][col]
        result = result * p
        inv = p.inverse()
        for i in range(col + 1, n):
            if a[i][col].is_zero():
                continue
            f = a[i][col] * inv
            a[i] = [x - f * y if j > col else x for j, (x, y) in enumerate(zip(a[i], a[col]))]
    return result


def _primes_1_mod(N: int, count: int, start: int = 10**6):
    k = start // N + 1
    found = 0
    while found < count:
        p = k * N + 1
        if sympy.isprime(p):
            yield p
            found += 1
        k += 1


def _det_mod_p(rows, N: int, p: int) -> int | None:
    """Determinant image in F_p, or None if some denominator vanishes mod p."""
    g = sympy.primitive_root(p)
    w = pow(g, (p - 1) // N, p)
    n = len(rows)
    a = []
    for r in rows:
        out = []
        for x in r:
            if x.den % p == 0:
                return None
            acc = 0
            wp = 1
            for c in x.num:
                acc = (acc + c * wp) % p
                wp = wp * w % p
            out.append(acc * pow(x.den, -1, p) % p)
        a.append(out)
    d = 1
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col]), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            d = -d
        d = d * a[col][col] % p
        inv = pow(a[col][col], -1, p)
        for i in range(col + 1, n):
            if a[i][col]:
                f = a[i][col] * inv % p
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[col])]
    return d % p


def is_invertible(rows: Sequence[Sequence[CycNum]], N: int, trials: int = 3) -> bool:
    if not rows:
        return True
    for p in _primes_1_mod(N, trials):
        v = _det_mod_p(rows, N, p)
        if v:
            return True
    return not det(rows, N).is_zero()
