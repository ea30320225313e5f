"""Category-level predicates on graded modular data and their arithmetic predictions.

Every ``check_*`` function returns a list of failure witnesses; an empty
list means the identity held exactly on every instance tested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .alcove import AlcoveSpec, WallError
from .cyclotomic import CycNum
from .linalg import det, is_invertible
from .modular import GradedModularData, ModularDataError, build_modular_data


@dataclass(frozen=True)
class PredictedFlags:
    coprime_rank: bool
    c_odd_twice_odd: bool
    level_condition: bool
    extra_weak: bool
    k: int | None

    @property
    def g_modular(self) -> bool:
        return self.coprime_rank or self.c_odd_twice_odd

    @property
    def regular(self) -> bool:
        return self.level_condition

    @property
    def weakly_nondegenerate(self) -> bool:
        return self.coprime_rank or self.c_odd_twice_odd or self.level_condition or self.extra_weak

    def as_dict(self) -> dict:
        return {
            "weakly_nondegenerate": self.weakly_nondegenerate,
            "regular": self.regular,
            "g_modular": self.g_modular,
            "coprime_rank": self.coprime_rank,
            "c_odd_twice_odd": self.c_odd_twice_odd,
            "level_condition": self.level_condition,
            "extra_weak": self.extra_weak,
            "k": self.k,
        }


@dataclass
class ClassificationReport:
    weakly_nondegenerate: bool
    regular: bool
    g_modular: bool
    ungraded_modular: bool
    transparent_simples: list
    predicted: PredictedFlags | None
    witnesses: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "weakly_nondegenerate": self.weakly_nondegenerate,
            "regular": self.regular,
            "g_modular": self.g_modular,
            "ungraded_modular": self.ungraded_modular,
            "transparent_simples": [list(mu) for mu in self.transparent_simples],
            "predicted": self.predicted.as_dict() if self.predicted else None,
            "witnesses": self.witnesses,
        }


# ---------------------------------------------------------------------------
# predicates from data
# ---------------------------------------------------------------------------


def transparent_simples(data: GradedModularData) -> list[tuple[int, ...]]:
    """Simples whose S-row against I_0 equals the product of dimensions."""
    if data.delta0.is_zero():
        raise ModularDataError("Delta_0 vanishes; data is not premodular")
    zero = data.by_grade[data.zero_grade]
    out = []
    for i, mu in enumerate(data.simples):
        qi = data.qdims[i]
        if all(data.smat[i][j] == qi * data.qdims[j] for j in zero):
            out.append(mu)
    return out


def s_submatrix(data: GradedModularData, idxs) -> list[list[CycNum]]:
    return [[data.smat[i][j] for j in idxs] for i in idxs]


def s0_determinant(data: GradedModularData) -> CycNum:
    return det(s_submatrix(data, data.by_grade[data.zero_grade]), data.N)


def classify(data: GradedModularData) -> ClassificationReport:
    z = data.zero_grade
    dp, dm = data.delta_plus[z], data.delta_minus[z]
    weak = not dp.is_zero() and not dm.is_zero()
    trans = transparent_simples(data)
    off_grade = [mu for mu in trans if data.grade(mu) != z]
    regular = weak and not off_grade
    g_mod = is_invertible(s_submatrix(data, data.by_grade[z]), data.N)
    full = is_invertible([list(row) for row in data.smat], data.N)
    wit: dict = {
        "delta_plus_0": str(dp),
        "delta_minus_0": str(dm),
        "transparent_off_grade": [{"mu": list(mu), "grade": list(data.grade(mu))} for mu in off_grade],
    }
    if regular:
        nonzero = [
            {"grade": list(g), "sign": s}
            for g in data.group_elements
            if g != z
            for s, tab in (("+", data.delta_plus), ("-", data.delta_minus))
            if not tab[g].is_zero()
        ]
        wit["vanish_failures"] = nonzero
    predicted = predicted_flags(data.spec) if data.spec is not None else None
    return ClassificationReport(weak, regular, g_mod, full, trans, predicted, wit)


# ---------------------------------------------------------------------------
# arithmetic predictions
# ---------------------------------------------------------------------------


def predicted_flags(spec: AlcoveSpec) -> PredictedFlags:
    rs = spec.root_system
    c = rs.constants
    series, ell, r = rs.cartan_type.series, rs.rank, spec.r
    d, G, h, hv = c.d, c.center_order, c.h, c.h_dual
    coprime_rank = math.gcd(r, d * G) == 1 and r > h
    c_odd_twice_odd = series == "C" and ell % 2 == 1 and r % 2 == 0 and r % 4 != 0 and r > d * hv
    k = r // d - hv if r % d == 0 and r // d > hv else None
    level_condition = False
    if k is not None:
        if series in "AC":
            level_condition = (k * ell) % (2 * G) == 0
        elif series in "BEFG":
            level_condition = k % G == 0
        elif series == "D":
            level_condition = k % 2 == 0 and (k * ell) % (2 * G) == 0
    extra = False
    if series == "D" and ell % 2 == 1 and r % 4 == 2:
        extra = True
    if series == "A" and k is not None:
        s = math.gcd(k, ell + 1)
        extra = (k * ell * (ell + 1)) % (2 * s * s) == 0
    return PredictedFlags(coprime_rank, c_odd_twice_odd, level_condition, extra, k)


@dataclass
class CrossValidation:
    label: str
    computed: ClassificationReport
    predicted: PredictedFlags
    mismatches: list[str]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def cross_validate(spec: AlcoveSpec, data: GradedModularData | None = None) -> CrossValidation:
    data = data or build_modular_data(spec)
    rep = classify(data)
    pred = predicted_flags(spec)
    bad = []
    if pred.g_modular and not rep.g_modular:
        bad.append("g_modular predicted true, computed false")
    if pred.regular and not rep.regular:
        bad.append("regular predicted true, computed false")
    if spec.cartan_type.series in "AD":
        if pred.weakly_nondegenerate != rep.weakly_nondegenerate:
            bad.append(
                f"weakly_nondegenerate predicted {pred.weakly_nondegenerate}, computed {rep.weakly_nondegenerate}"
            )
    elif pred.weakly_nondegenerate and not rep.weakly_nondegenerate:
        bad.append("weakly_nondegenerate predicted true, computed false")
    if rep.regular and not rep.weakly_nondegenerate:  # pragma: no cover - by construction
        bad.append("regular without weak non-degeneracy")
    if rep.regular and rep.witnesses.get("vanish_failures"):
        bad.append(f"regular but Delta^pm nonzero off grade 0: {rep.witnesses['vanish_failures']}")
    if rep.regular and rep.g_modular and not rep.ungraded_modular:
        bad.append("regular and G-modular but full S-matrix singular")
    if spec.is_case2:
        bad.extend(check_transparent_orbit(data, rep.transparent_simples))
    return CrossValidation(data.label, rep, pred, bad)


# ---------------------------------------------------------------------------
# exact identities
# ---------------------------------------------------------------------------


def check_delta_equal(data: GradedModularData) -> list[str]:
    d0 = data.delta0
    return [f"Delta_{g} = {v} != Delta_0 = {d0}" for g, v in data.delta.items() if v != d0]


def check_symmetric(data: GradedModularData) -> list[str]:
    n = len(data.simples)
    bad = [f"S{data.simples[i]},{data.simples[j]} not symmetric" for i in range(n) for j in range(i) if data.smat[i][j] != data.smat[j][i]]
    bad += [f"S(0,{mu}) != qdim" for i, mu in enumerate(data.simples) if data.smat[0][i] != data.qdims[i]]
    if data.twist_exps[0] != 0:
        bad.append("twist(0) != 1")
    return bad


def check_dual_symmetry(data: GradedModularData) -> list[str]:
    rs = data.spec.root_system
    bad = []
    for mu in data.simples:
        for nu in data.simples:
            if data.S(mu, nu) != data.S(rs.dual_weight(mu), rs.dual_weight(nu)):
                bad.append(f"S({mu},{nu}) != S(dual, dual)")
    return bad


def _gdot(spec: AlcoveSpec, g, mu, lift=None):
    try:
        return spec.gprime_dot(g, mu, lift)
    except WallError:
        return None


def _eps_pairing(spec: AlcoveSpec, lift, mu) -> CycNum:
    """eps^{2r(lift|mu)} as an element of Q(zeta_N)."""
    e = 2 * spec.r * spec.D * spec.root_system.inner(lift, mu)
    if e.denominator != 1:
        raise ModularDataError(f"2rD(g~|mu) = {e} is not an integer")
    return CycNum.zeta(spec.N, spec.zeta_power(int(e)))


def _shifted_lifts(spec: AlcoveSpec, g):
    yield g.lift
    for y in spec.yprime_basis():
        yield tuple(a + b for a, b in zip(g.lift, y))
        yield tuple(a - b for a, b in zip(g.lift, y))


def check_second_symmetry(data: GradedModularData, all_lifts: bool = True) -> list[str]:
    """qdim(g.nu)^2 = qdim(nu)^2 and the Hopf-link transformation law, over G' and lifts."""
    spec = data.spec
    bad = []
    for g in spec.gprime:
        lifts = list(_shifted_lifts(spec, g)) if all_lifts else [g.lift]
        for nu in data.simples:
            images = {_gdot(spec, g, nu, lift) for lift in lifts}
            if len(images) != 1:
                bad.append(f"g={g.cls} on {nu}: lift-dependent images {images}")
                continue
            gn = images.pop()
            if gn is None:
                continue
            if data.qdim(gn) ** 2 != data.qdim(nu) ** 2:
                bad.append(f"dimension symmetry fails for g={g.cls}, nu={nu}")
            for mu in data.simples:
                lhs = data.S(mu, gn) * data.qdim(mu) * data.qdim(gn)
                base = data.S(mu, nu) * data.qdim(mu) * data.qdim(nu)
                factors = {_eps_pairing(spec, lift, mu) for lift in lifts}
                if len(factors) != 1:
                    bad.append(f"Hopf-law factor lift-dependent for g={g.cls}, mu={mu}")
                if lhs != factors.pop() * base:
                    bad.append(f"Hopf transformation law fails for g={g.cls}, mu={mu}, nu={nu}")
    return bad


def gprime_orbit_of_zero(spec: AlcoveSpec) -> list[tuple[int, ...]]:
    zero = (0,) * spec.root_system.rank
    return [spec.gprime_dot(g, zero) for g in spec.gprime]


def check_transparent_orbit(data: GradedModularData, trans=None) -> list[str]:
    spec = data.spec
    trans = transparent_simples(data) if trans is None else trans
    orbit = gprime_orbit_of_zero(spec)
    bad = []
    if set(trans) != set(orbit) or len(set(orbit)) != len(spec.gprime):
        bad.append(f"M_C = {sorted(trans)} but G'.0 = {sorted(orbit)}")
    for mu in orbit:
        if data.qdim(mu) ** 2 != 1:
            bad.append(f"qdim({mu})^2 != 1")
    return bad


def twist_of_gprime_zero(spec: AlcoveSpec, g) -> tuple[CycNum, Fraction]:
    """The predicted twist eps^{r d k (g~|g~)} and the exponent d k (g~|g~)."""
    rs = spec.root_system
    k = spec.k
    if k is None:
        raise ModularDataError(f"{spec} has no level k")
    dk = rs.d * k * rs.inner(g.lift, g.lift)
    e = spec.r * spec.D * dk
    if e.denominator != 1:
        raise ModularDataError(f"r D d k (g~|g~) = {e} is not an integer")
    return CycNum.zeta(spec.N, spec.zeta_power(int(e))), dk


def check_gprime_twists(data: GradedModularData) -> list[str]:
    spec = data.spec
    zero = (0,) * spec.root_system.rank
    bad = []
    for g in spec.gprime:
        pred, dk = twist_of_gprime_zero(spec, g)
        actual = data.twist(spec.gprime_dot(g, zero))
        if actual != pred:
            bad.append(f"twist(g.0) for g={g.cls}: {actual} != {pred}")
        if dk.denominator == 1 and dk.numerator % 2 == 0 and actual != 1:
            bad.append(f"condition (b) holds for g={g.cls} yet twist(g.0) != 1")
    return bad


def t_alpha(data: GradedModularData, mu, alpha) -> CycNum:
    """sum_{nu in I_alpha} qdim(nu) S(mu, nu) / qdim(mu)."""
    i = data.idx(mu)
    acc = CycNum.zero(data.N)
    for j in data.by_grade[tuple(alpha)]:
        acc = acc + data.qdims[j] * data.smat[i][j]
    return acc / data.qdims[i]


def check_transparent_gauss(data: GradedModularData, trans=None) -> list[str]:
    trans = transparent_simples(data) if trans is None else trans
    inv = data.group_invariants
    sq = data.delta0 * data.delta0
    bad = []
    for mu in trans:
        for a in data.group_elements:
            na = tuple((-x) % m for x, m in zip(a, inv))
            if t_alpha(data, mu, a) * t_alpha(data, mu, na) != sq:
                bad.append(f"t_a t_-a != Delta_0^2 for mu={mu}, alpha={a}")
    return bad


def check_kirby_identity(data: GradedModularData) -> list[str]:
    """sum_{l in I_{-f b}} theta_l^f d_l S(l, mu) = Delta_0^f theta_mu^{-f} d_mu for f = +-1."""
    z = data.zero_grade
    inv = data.group_invariants
    bad = []
    for f, tab in ((1, data.delta_plus), (-1, data.delta_minus)):
        for j, mu in enumerate(data.simples):
            g = tuple((-f * x) % m for x, m in zip(data.grades[j], inv))
            acc = CycNum.zero(data.N)
            for i in data.by_grade[g]:
                acc = acc + data.qdims[i] * CycNum.zeta(data.N, f * data.twist_exps[i]) * data.smat[i][j]
            if acc != tab[z] * CycNum.zeta(data.N, -f * data.twist_exps[j]) * data.qdims[j]:
                bad.append(f"Kirby identity fails for f={f}, mu={mu}")
    return bad


def check_all(data: GradedModularData) -> dict[str, list[str]]:
    """Run every data-level identity applicable to the spec."""
    out = {
        "symmetric": check_symmetric(data),
        "delta_equal": check_delta_equal(data),
        "dual_symmetry": check_dual_symmetry(data),
        "second_symmetry": check_second_symmetry(data),
        "transparent_gauss": check_transparent_gauss(data),
        "kirby": check_kirby_identity(data),
    }
    if data.spec.is_case2:
        out["transparent_orbit"] = check_transparent_orbit(data)
        out["gprime_twists"] = check_gprime_twists(data)
    return out
