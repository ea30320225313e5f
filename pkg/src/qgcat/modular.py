"""Quantum dimensions, twists, Hopf pairings and Gauss sums of C(g, eps; zeta).

All values live in Q(zeta_N), N = 2 D r, with ``zeta = zeta_N ** s``:

* ``qdim(mu) = prod_{a>0} [(mu+rho|a)] / [(rho|a)]`` at ``eps = zeta ** D``
* ``twist(mu) = zeta ** (D (mu | mu + 2 rho))``
* ``S(mu, nu) = sum_w det(w) zeta^{2D(w(mu+rho)|nu+rho)} / sum_w det(w) zeta^{2D(w rho|rho)}``
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import kernels
from .alcove import AlcoveSpec, make_spec
from .cyclotomic import CycNum, RadicalScalar, parse_cycnum
from .rootsys import WEYL_ENUMERATION_CAP

# |alcove|^2 * |W| above this is refused by build_modular_data.
DEFAULT_WORK_CAP = 5 * 10**8


class ModularDataError(ValueError):
    pass


def _qfactor(spec: AlcoveSpec, n: int) -> CycNum:
    """eps^n - eps^-n."""
    e = spec.eps_exponent()
    return CycNum.zeta(spec.N, e * n) - CycNum.zeta(spec.N, -e * n)


def weyl_denominator(spec: AlcoveSpec) -> CycNum:
    """prod_{a>0} (eps^{(rho|a)} - eps^{-(rho|a)})."""
    rs = spec.root_system
    out = CycNum.one(spec.N)
    for a in rs.positive_roots:
        out = out * _qfactor(spec, int(rs.inner(rs.rho, a)))
    return out


def qdim(spec: AlcoveSpec, mu: Sequence[int]) -> CycNum:
    mu = spec.check_simple(mu)
    rs = spec.root_system
    shifted = tuple(c + 1 for c in mu)
    num = CycNum.one(spec.N)
    den = CycNum.one(spec.N)
    for a in rs.positive_roots:
        top = int(rs.inner(shifted, a))
        bot = int(rs.inner(rs.rho, a))
        if top != bot:
            num = num * _qfactor(spec, top)
            den = den * _qfactor(spec, bot)
    return num / den


def twist_exponent(spec: AlcoveSpec, mu: Sequence[int]) -> int:
    """t with twist(mu) = zeta_N ** t."""
    mu = spec.check_simple(mu)
    rs = spec.root_system
    two_rho_plus = tuple(c + 2 for c in mu)
    return spec.zeta_power(rs.Dinner(mu, two_rho_plus))


def twist_scalar(spec: AlcoveSpec, mu: Sequence[int]) -> CycNum:
    return CycNum.zeta(spec.N, twist_exponent(spec, mu))


def _weyl_sums(spec: AlcoveSpec, mus: Sequence[tuple[int, ...]], nus: Sequence[tuple[int, ...]]) -> np.ndarray:
    """Group-ring numerators sum_w det(w) zeta^{2D(w(mu+rho)|nu+rho)}; shape (len(mus), len(nus), N)."""
    rs = spec.root_system
    vecs = np.array([[c + 1 for c in nu] for nu in nus], dtype=np.int64).T  # (l, Q)
    vecs = 2 * (rs.DM @ vecs)
    out = np.empty((len(mus), len(nus), spec.N), dtype=np.int64)
    for i, mu in enumerate(mus):
        pts, sg = rs.regular_orbit(tuple(c + 1 for c in mu))
        out[i] = kernels.signed_exponent_histograms(pts, sg, vecs, spec.N, spec.zeta_exponent)
    return out


def weyl_sum_denominator(spec: AlcoveSpec) -> CycNum:
    """sum_w det(w) zeta^{2D(w rho|rho)}, computed from the orbit of rho."""
    zero = (0,) * spec.root_system.rank
    hist = _weyl_sums(spec, [zero], [zero])[0, 0]
    return CycNum.from_group_ring(spec.N, hist)


def hopf_pairing(spec: AlcoveSpec, mu: Sequence[int], nu: Sequence[int]) -> CycNum:
    mu = spec.check_simple(mu)
    nu = spec.check_simple(nu)
    hist = _weyl_sums(spec, [mu], [nu])[0, 0]
    den = weyl_sum_denominator(spec)
    if den.is_zero():  # pragma: no cover - excluded by the case conditions
        raise ModularDataError("Weyl denominator vanishes")
    return CycNum.from_group_ring(spec.N, hist) / den


@dataclass
class GradedModularData:
    """Exact graded modular data; treat as immutable after construction."""

    spec: AlcoveSpec | None
    N: int
    simples: tuple[tuple[int, ...], ...]
    grades: tuple[tuple[int, ...], ...]
    group_invariants: tuple[int, ...]
    qdims: tuple[CycNum, ...]
    twist_exps: tuple[int, ...]
    smat: tuple[tuple[CycNum, ...], ...]
    label: str = ""
    index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.index = {mu: i for i, mu in enumerate(self.simples)}

    # ---- accessors ------------------------------------------------------
    def idx(self, mu) -> int:
        try:
            return self.index[tuple(mu)]
        except KeyError:
            raise ModularDataError(f"{tuple(mu)} is not a simple object") from None

    def qdim(self, mu) -> CycNum:
        return self.qdims[self.idx(mu)]

    def twist(self, mu) -> CycNum:
        return CycNum.zeta(self.N, self.twist_exps[self.idx(mu)])

    def S(self, mu, nu) -> CycNum:
        return self.smat[self.idx(mu)][self.idx(nu)]

    def grade(self, mu) -> tuple[int, ...]:
        return self.grades[self.idx(mu)]

    @property
    def zero_grade(self) -> tuple[int, ...]:
        return (0,) * len(self.group_invariants)

    @cached_property
    def group_elements(self) -> tuple[tuple[int, ...], ...]:
        out = [()]
        for m in self.group_invariants:
            out = [g + (x,) for g in out for x in range(m)]
        return tuple(out)

    @cached_property
    def by_grade(self) -> dict[tuple[int, ...], tuple[int, ...]]:
        """Grade -> indices of simples."""
        out = {g: [] for g in self.group_elements}
        for i, g in enumerate(self.grades):
            out[g].append(i)
        return {g: tuple(v) for g, v in out.items()}

    @cached_property
    def dim2(self) -> tuple[CycNum, ...]:
        return tuple(q * q for q in self.qdims)

    def _gauss(self, power: int) -> dict:
        out = {}
        for g, idxs in self.by_grade.items():
            acc = CycNum.zero(self.N)
            for i in idxs:
                term = self.dim2[i]
                if power:
                    term = term * CycNum.zeta(self.N, power * self.twist_exps[i])
                acc = acc + term
            out[g] = acc
        return out

    @cached_property
    def delta(self) -> dict:
        return self._gauss(0)

    @cached_property
    def delta_plus(self) -> dict:
        return self._gauss(1)

    @cached_property
    def delta_minus(self) -> dict:
        return self._gauss(-1)

    @property
    def delta0(self) -> CycNum:
        return self.delta[self.zero_grade]

    # ---- export -----------------------------------------------------------
    def to_json(self) -> dict:
        spec = self.spec
        return {
            "label": self.label,
            "cartan": str(spec.cartan_type) if spec else None,
            "r": spec.r if spec else None,
            "zeta_exponent": spec.zeta_exponent if spec else None,
            "N": self.N,
            "group_invariants": list(self.group_invariants),
            "simples": [
                {
                    "mu": list(mu),
                    "grade": list(self.grades[i]),
                    "qdim": str(self.qdims[i]),
                    "qdim_decimal": round(self.qdims[i].to_complex().real, 12),
                    "twist_exponent": self.twist_exps[i],
                }
                for i, mu in enumerate(self.simples)
            ],
            "smat": [[str(x) for x in row] for row in self.smat],
            "delta": {_gkey(g): str(v) for g, v in self.delta.items()},
            "delta_plus": {_gkey(g): str(v) for g, v in self.delta_plus.items()},
            "delta_minus": {_gkey(g): str(v) for g, v in self.delta_minus.items()},
        }

    @classmethod
    def from_json(cls, doc: dict) -> "GradedModularData":
        try:
            N = int(doc["N"])
            simples = tuple(tuple(int(c) for c in s["mu"]) for s in doc["simples"])
            grades = tuple(tuple(int(c) for c in s["grade"]) for s in doc["simples"])
            qdims = tuple(parse_cycnum(s["qdim"]) for s in doc["simples"])
            twists = tuple(int(s["twist_exponent"]) % N for s in doc["simples"])
            smat = tuple(tuple(parse_cycnum(x) for x in row) for row in doc["smat"])
            inv = tuple(int(m) for m in doc["group_invariants"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ModularDataError(f"malformed modular-data document: {exc}") from exc
        if len(smat) != len(simples) or any(len(row) != len(simples) for row in smat):
            raise ModularDataError("S-matrix shape does not match the simple list")
        spec = None
        if doc.get("cartan"):
            spec = make_spec(doc["cartan"], int(doc["r"]), int(doc.get("zeta_exponent") or 1))
        return cls(spec, N, simples, grades, inv, qdims, twists, smat, label=doc.get("label", ""))


def _gkey(g: tuple[int, ...]) -> str:
    return ",".join(str(x) for x in g) or "0"


def build_modular_data(spec: AlcoveSpec, work_cap: int = DEFAULT_WORK_CAP) -> GradedModularData:
    rs = spec.root_system
    simples = spec.simples
    n = len(simples)
    qd = tuple(qdim(spec, mu) for mu in simples)
    tw = tuple(twist_exponent(spec, mu) for mu in simples)
    if n == 1:
        smat = ((CycNum.one(spec.N),),)
    else:
        if rs.weyl_order > WEYL_ENUMERATION_CAP or n * n * rs.weyl_order > work_cap:
            raise ModularDataError(
                f"S-matrix for {spec} needs {n}^2 x {rs.weyl_order} Weyl terms, above the work cap {work_cap}"
            )
        den = weyl_sum_denominator(spec)
        if den.is_zero():  # pragma: no cover - excluded by the case conditions
            raise ModularDataError("Weyl denominator vanishes")
        den_inv = den.inverse()
        hists = _weyl_sums(spec, simples, simples)
        smat = tuple(tuple(CycNum.from_group_ring(spec.N, hists[i, j]) * den_inv for j in range(n)) for i in range(n))
    grades = tuple(spec.grades[mu] for mu in simples)
    label = f"{spec.cartan_type} r={spec.r} zeta=zeta_{spec.N}^{spec.zeta_exponent}"
    return GradedModularData(spec, spec.N, simples, grades, spec.center.invariants, qd, tw, smat, label=label)


def block_dimension(data: GradedModularData, genus: int) -> RadicalScalar:
    """Dcal^{2n-2} sum_{i in I_0} qdim_i^{2-2n}."""
    if genus < 1:
        raise ModularDataError(f"genus must be >= 1, got {genus}")
    acc = CycNum.zero(data.N)
    for i in data.by_grade[data.zero_grade]:
        acc = acc + data.qdims[i] ** (2 - 2 * genus)
    return RadicalScalar(acc, 2 * genus - 2, data.delta0)
