"""Surgery invariants tau(M, xi) of plumbed 3-manifolds.

A plumbing forest is a framed link of unknots, one per vertex, with a
single clasp for each edge.  Its bracket with simple colors is

    prod_v twist(c_v)^{f_v} qdim(c_v)^{1 - deg v} * prod_{uv} S(c_u, c_v)

and the omega bracket sums this against ``prod_v qdim(c_v)`` over all
colorings with prescribed grades.  The fast path is a message-passing
contraction in the group ring Z[x]/(x^N - 1): every factor is an
algebraic integer once each edge is normalized by the parent's dimension,
so vertex weights ``qdim^2 theta^f`` (roots) and ``qdim theta^f`` (others)
and edge weights ``S(c_v, c_p)/qdim(c_p)`` all lift to integer vectors.
"""

from __future__ import annotations

import itertools
import json
import math
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy
from sympy.matrices.normalforms import smith_normal_decomp

from . import kernels
from .cyclotomic import CycNum, RadicalScalar, field
from .modular import GradedModularData
from .rootsys import CenterGroup

DEFAULT_CLASS_CAP = int(os.environ.get("QGCAT_CLASS_CAP", 10**6))
DEFAULT_COLORING_CAP = int(os.environ.get("QGCAT_COLORING_CAP", 10**6))


class SurgeryError(ValueError):
    pass


class CapExceeded(SurgeryError):
    pass


# ---------------------------------------------------------------------------
# forests
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlumbingForest:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        m = len(self.vertices)
        seen = set()
        parent = list(range(m))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            if not (0 <= u < m and 0 <= v < m):
                raise SurgeryError(f"edge ({u},{v}) out of range for {m} vertices")
            if u == v:
                raise SurgeryError(f"self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise SurgeryError(f"repeated edge {key}")
            seen.add(key)
            a, b = find(u), find(v)
            if a == b:
                raise SurgeryError("plumbing graph has a cycle; only forests are supported")
            parent[a] = b

    @classmethod
    def make(cls, vertices: Sequence[int], edges: Sequence[Sequence[int]] = ()) -> "PlumbingForest":
        return cls(tuple(int(f) for f in vertices), tuple((int(u), int(v)) for u, v in edges))

    @classmethod
    def from_json(cls, doc) -> "PlumbingForest":
        if not isinstance(doc, dict) or "vertices" not in doc:
            raise SurgeryError("plumbing document needs a 'vertices' list")
        try:
            edges = doc.get("edges", [])
            if any(len(e) != 2 for e in edges):
                raise SurgeryError("each edge must be a pair of vertex indices")
            return cls.make(doc["vertices"], edges)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, SurgeryError):
                raise
            raise SurgeryError(f"malformed plumbing document: {exc}") from exc

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}

    @property
    def m(self) -> int:
        return len(self.vertices)

    def neighbors(self, v: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return out

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def rooted(self) -> tuple[list[int], list[int]]:
        """(parent, order): components rooted at their least vertex, children before parents."""
        m = self.m
        adj = [[] for _ in range(m)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        parent = [-2] * m
        order: list[int] = []
        for root in range(m):
            if parent[root] != -2:
                continue
            parent[root] = -1
            stack = [root]
            comp = []
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in sorted(adj[v]):
                    if parent[w] == -2:
                        parent[w] = v
                        stack.append(w)
            order.extend(reversed(comp))
        return parent, order

    def relabel(self, perm: Sequence[int]) -> "PlumbingForest":
        """Vertex i moves to position perm[i]."""
        m = self.m
        verts = [0] * m
        for i, f in enumerate(self.vertices):
            verts[perm[i]] = f
        return PlumbingForest.make(verts, [(perm[a], perm[b]) for a, b in self.edges])


def load_plumbing(path: str) -> PlumbingForest:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SurgeryError(f"cannot read plumbing file {path}: {exc}") from exc
    return PlumbingForest.from_json(doc)


def linking_matrix(forest: PlumbingForest) -> list[list[int]]:
    m = forest.m
    B = [[0] * m for _ in range(m)]
    for v, f in enumerate(forest.vertices):
        B[v][v] = f
    for a, b in forest.edges:
        B[a][b] = B[b][a] = 1
    return B


def signature_counts(B: Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """(sigma_+, sigma_-, nullity) by exact congruence diagonalization."""
    a = [[Fraction(x) for x in row] for row in B]
    n = len(a)
    if any(len(row) != n for row in a) or any(a[i][j] != a[j][i] for i in range(n) for j in range(n)):
        raise SurgeryError("signature needs a symmetric square matrix")
    pos = neg = 0
    live = list(range(n))
    while live:
        piv = next((i for i in live if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in live for j in live if i != j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # row/col i += row/col j makes a[i][i] = 2 a[i][j] != 0
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        p = a[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        live.remove(piv)
        for i in live:
            if a[i][piv] != 0:
                f = a[i][piv] / p
                for k in range(n):
                    a[i][k] -= f * a[piv][k]
                for k in range(n):
                    a[k][i] -= f * a[k][piv]
    return pos, neg, n - pos - neg


# ---------------------------------------------------------------------------
# H^1(M; G)
# ---------------------------------------------------------------------------


def _apply(B, alpha, G: CenterGroup) -> list[tuple[int, ...]]:
    m = len(B)
    out = []
    for i in range(m):
        acc = G.zero
        for j in range(m):
            if B[i][j] and any(alpha[j]):
                acc = G.add(acc, G.scale(B[i][j], alpha[j]))
        out.append(acc)
    return out


def is_cohomology_class(B, alpha, G: CenterGroup) -> bool:
    return all(x == G.zero for x in _apply(B, alpha, G))


def _smith(B):
    M = sympy.Matrix(B)
    S, U, V = smith_normal_decomp(M)
    if U * M * V != S:  # pragma: no cover - library contract
        raise SurgeryError("unexpected Smith normal form convention")
    return S, U, V


def class_count(B, G: CenterGroup) -> int:
    """prod over invariant factors d_i of |{g in G : d_i g = 0}|."""
    m = len(B)
    if m == 0:
        return 1
    S, _, _ = _smith(B)
    total = 1
    for i in range(m):
        d = abs(int(S[i, i]))
        for mj in G.invariants:
            total *= math.gcd(d, mj)
    return total


def cohomology_classes(B, G: CenterGroup, cap: int = DEFAULT_CLASS_CAP) -> list[tuple[tuple[int, ...], ...]]:
    """All alpha in G^m with B alpha = 0, sorted."""
    m = len(B)
    if G.order**m <= cap:
        return [
            alpha
            for alpha in itertools.product(list(G.elements()), repeat=m)
            if is_cohomology_class(B, alpha, G)
        ]
    count = class_count(B, G)
    if count > cap:
        raise CapExceeded(f"H^1 has {count} classes, above the cap {cap}")
    # parametric: alpha = V beta with S beta = 0 componentwise
    S, _, V = _smith(B)
    choices = []
    for i in range(m):
        d = abs(int(S[i, i]))
        per = []
        for mj in G.invariants:
            step = mj // math.gcd(d, mj)
            per.append(range(0, mj, step))
        choices.append([tuple(c) for c in itertools.product(*per)])
    out = set()
    for beta in itertools.product(*choices):
        alpha = []
        for i in range(m):
            acc = G.zero
            for j in range(m):
                acc = G.add(acc, G.scale(int(V[i, j]), beta[j]))
            alpha.append(acc)
        out.add(tuple(alpha))
    return sorted(out)


# ---------------------------------------------------------------------------
# brackets
# ---------------------------------------------------------------------------


def colored_forest_bracket(forest: PlumbingForest, colors: Sequence, data: GradedModularData) -> CycNum:
    if len(colors) != forest.m:
        raise SurgeryError(f"need {forest.m} colors, got {len(colors)}")
    idx = [data.idx(c) for c in colors]
    out = CycNum.one(data.N)
    for v, f in enumerate(forest.vertices):
        i = idx[v]
        out = out * CycNum.zeta(data.N, f * data.twist_exps[i]) * data.qdims[i] ** (1 - forest.degree(v))
    for a, b in forest.edges:
        out = out * data.smat[idx[a]][idx[b]]
    return out


def _grade_classes(data: GradedModularData, alpha, m: int) -> list[tuple[int, ...]]:
    if alpha is None:
        return [tuple(range(len(data.simples)))] * m
    if len(alpha) != m:
        raise SurgeryError(f"need {m} grades, got {len(alpha)}")
    out = []
    for a in alpha:
        a = tuple(a)
        if a not in data.by_grade:
            raise SurgeryError(f"{a} is not an element of G")
        out.append(data.by_grade[a])
    return out


def omega_bracket_bruteforce(
    forest: PlumbingForest, alpha, data: GradedModularData, cap: int = DEFAULT_COLORING_CAP
) -> CycNum:
    """Direct sum over colorings; the independent oracle for the contraction."""
    classes = _grade_classes(data, alpha, forest.m)
    total = math.prod(len(c) for c in classes)
    if total > cap:
        raise CapExceeded(f"{total} colorings exceed the cap {cap}")
    acc = CycNum.zero(data.N)
    for combo in itertools.product(*classes):
        colors = [data.simples[i] for i in combo]
        w = CycNum.one(data.N)
        for i in combo:
            w = w * data.qdims[i]
        acc = acc + w * colored_forest_bracket(forest, colors, data)
    return acc


class _Tables:
    """Group-ring lifts of qdim, qdim^2 and normalized S entries."""

    def __init__(self, data: GradedModularData):
        N = data.N
        n = len(data.simples)
        self.N = N
        self.twist = np.array(data.twist_exps, dtype=np.int64)
        d1 = [q.group_ring_vector(N) for q in data.qdims]
        d2 = [(q * q).group_ring_vector(N) for q in data.qdims]
        shat = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                x = data.smat[i][j] / data.qdims[j]
                if not x.is_integral():  # pragma: no cover - character values are integral
                    raise SurgeryError("normalized Hopf pairing is not an algebraic integer")
                shat[i][j] = x.group_ring_vector(N)
        self.n1 = np.array([sum(abs(c) for c in v) for v in d1], dtype=object)
        self.n2 = np.array([sum(abs(c) for c in v) for v in d2], dtype=object)
        self.nshat = np.array([[sum(abs(c) for c in shat[i][j]) for j in range(n)] for i in range(n)], dtype=object)
        peak = max(max(abs(c) for v in d1 + d2 for c in v), max(abs(c) for row in shat for v in row for c in v))
        dtype = np.int64 if peak < kernels.INT64_SAFE else object
        self.d1 = np.array(d1, dtype=dtype)
        self.d2 = np.array(d2, dtype=dtype)
        self.shat = np.array(shat, dtype=dtype)


def _tables(data: GradedModularData) -> _Tables:
    t = data.__dict__.get("_surgery_tables")
    if t is None:
        t = _Tables(data)
        data.__dict__["_surgery_tables"] = t
    return t


def omega_brackets(
    vertices_batch: Sequence[Sequence[int]],
    edges: Sequence[Sequence[int]],
    alpha,
    data: GradedModularData,
) -> list[CycNum]:
    """Omega brackets for one forest shape under many framing vectors."""
    if len(vertices_batch) == 0:
        return []
    framings = np.asarray(vertices_batch, dtype=np.int64).reshape(len(vertices_batch), -1)
    shape = PlumbingForest.make(framings[0], edges)
    m = shape.m
    N = data.N
    if m == 0:
        return [CycNum.one(N) for _ in range(len(framings))]
    classes = _grade_classes(data, alpha, m)
    parent, order = shape.rooted()
    T = _tables(data)
    ncol = np.array([len(c) for c in classes], dtype=np.int64)
    kmax = int(ncol.max())
    Bn = len(framings)
    wnorm = np.zeros((m, kmax), dtype=object)
    enorm = np.zeros((m, kmax, kmax), dtype=object)
    for v in range(m):
        norms = T.n2 if parent[v] < 0 else T.n1
        for c, i in enumerate(classes[v]):
            wnorm[v, c] = norms[i]
        p = parent[v]
        if p >= 0:
            enorm[v, : ncol[v], : ncol[p]] = T.nshat[np.ix_(classes[v], classes[p])]
    parent_arr = np.array(parent, dtype=np.int64)
    order_arr = np.array(order, dtype=np.int64)
    bound = kernels.contraction_bound(wnorm, enorm, ncol, parent_arr, order_arr)
    dtype = np.int64 if bound < kernels.INT64_SAFE and T.d1.dtype != object else object
    # theta^f is a monomial, so vertex weights are cyclic shifts of qdim vectors
    weights = np.zeros((Bn, m, kmax, N), dtype=dtype)
    ar = np.arange(N)
    for v in range(m):
        base = T.d2 if parent[v] < 0 else T.d1
        cls = np.array(classes[v])
        shifts = (framings[:, v : v + 1] * T.twist[cls][None, :]) % N  # (B, k)
        gather = (ar[None, None, :] - shifts[:, :, None]) % N  # (B, k, N)
        weights[:, v, : len(cls)] = base[cls[None, :, None], gather]
    edge_arr = np.zeros((m, kmax, kmax, N), dtype=dtype)
    for v in range(m):
        p = parent[v]
        if p >= 0:
            edge_arr[v, : ncol[v], : ncol[p]] = T.shat[np.ix_(classes[v], classes[p])]
    res = kernels.tree_contract(weights, edge_arr, ncol, parent_arr, order_arr, bound)
    red = field(N).reduce_group_ring_batch(res)
    return [CycNum(N, [int(c) for c in row], 1, _reduced=True) for row in red]


def omega_bracket(forest: PlumbingForest, alpha, data: GradedModularData, method: str = "kernel") -> CycNum:
    """Sum over colorings with grade(c_v) = alpha_v (alpha=None: all colors)."""
    if method == "brute":
        return omega_bracket_bruteforce(forest, alpha, data)
    if method != "kernel":
        raise SurgeryError(f"unknown method {method!r}")
    return omega_brackets([forest.vertices], forest.edges, alpha, data)[0]


# ---------------------------------------------------------------------------
# tau
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TauResult:
    value: RadicalScalar
    sigma_plus: int
    sigma_minus: int
    b1: int

    def as_dict(self) -> dict:
        z = self.value.to_complex()
        return {
            "value": str(self.value),
            "decimal": [round(z.real, 12), round(z.imag, 12)],
            "sigma_plus": self.sigma_plus,
            "sigma_minus": self.sigma_minus,
            "b1": self.b1,
        }


def _normalize_class(alpha, G: CenterGroup, m: int) -> tuple[tuple[int, ...], ...]:
    if len(alpha) != m:
        raise SurgeryError(f"class has {len(alpha)} entries for {m} vertices")
    out = []
    for a in alpha:
        a = (a,) if isinstance(a, int) else tuple(a)
        if len(a) != len(G.invariants):
            raise SurgeryError(f"{a} is not an element of {G}")
        out.append(G.reduce(a))
    return tuple(out)


def tau(forest: PlumbingForest, xi, data: GradedModularData, method: str = "kernel") -> TauResult:
    G = CenterGroup(data.group_invariants)
    alpha = _normalize_class(xi, G, forest.m)
    B = linking_matrix(forest)
    if not is_cohomology_class(B, alpha, G):
        raise SurgeryError(f"{alpha} does not satisfy B alpha = 0; not a cohomology class")
    z = data.zero_grade
    dp, dm = data.delta_plus[z], data.delta_minus[z]
    if dp.is_zero() or dm.is_zero():
        raise SurgeryError("data is not weakly non-degenerate (Delta_0^+ Delta_0^- = 0)")
    sp, sm, b1 = signature_counts(B)
    bracket = omega_bracket(forest, alpha, data, method)
    base = bracket * dm ** (-sm) * dp ** (-sp)
    return TauResult(RadicalScalar(base, -b1 - 1, data.delta0), sp, sm, b1)


@dataclass
class SplitReport:
    regular_expected: bool
    checked: int
    nonzero: list

    @property
    def ok(self) -> bool:
        return not self.nonzero


def split_vanishing_check(
    forest: PlumbingForest, data: GradedModularData, regular: bool | None = None, cap: int = DEFAULT_CLASS_CAP
) -> SplitReport:
    """omega_bracket(forest, alpha) = 0 for every alpha off the kernel of B."""
    G = CenterGroup(data.group_invariants)
    m = forest.m
    if G.order**m > cap:
        raise CapExceeded(f"|G|^m = {G.order ** m} exceeds the cap {cap}")
    B = linking_matrix(forest)
    if regular is None:
        from .checks import classify

        regular = classify(data).regular
    off = [a for a in itertools.product(list(G.elements()), repeat=m) if not is_cohomology_class(B, a, G)]
    nonzero = []
    for alpha in off:
        val = omega_bracket(forest, alpha, data)
        if not val.is_zero():
            nonzero.append((alpha, val))
    return SplitReport(regular, len(off), nonzero)


# ---------------------------------------------------------------------------
# Kirby moves
# ---------------------------------------------------------------------------


def admissible_leaves(forest: PlumbingForest) -> list[int]:
    return [v for v, f in enumerate(forest.vertices) if f in (1, -1) and forest.degree(v) <= 1]


def blow_down(forest: PlumbingForest, v: int, xi) -> tuple[PlumbingForest, tuple]:
    if not 0 <= v < forest.m:
        raise SurgeryError(f"vertex {v} out of range")
    f = forest.vertices[v]
    nb = forest.neighbors(v)
    if f not in (1, -1) or len(nb) > 1:
        raise SurgeryError(f"vertex {v} is not a +-1 framed leaf (framing {f}, degree {len(nb)})")
    verts = list(forest.vertices)
    if nb:
        verts[nb[0]] -= f
    keep = [u for u in range(forest.m) if u != v]
    pos = {u: i for i, u in enumerate(keep)}
    edges = [(pos[a], pos[b]) for a, b in forest.edges if v not in (a, b)]
    xi2 = tuple(xi[u] for u in keep)
    return PlumbingForest.make([verts[u] for u in keep], edges), xi2


def random_forest(rng, m: int, framing_range: int = 3, edge_prob: float = 0.8) -> PlumbingForest:
    """Random labeled forest: vertex i > 0 attaches to a random earlier vertex with edge_prob."""
    verts = [int(rng.integers(-framing_range, framing_range + 1)) for _ in range(m)]
    edges = []
    for i in range(1, m):
        if rng.random() < edge_prob:
            edges.append((int(rng.integers(0, i)), i))
    return PlumbingForest.make(verts, edges)


_TUPLE = re.compile(r"\(([^()]*)\)")


def parse_class(text: str, G: CenterGroup) -> tuple[tuple[int, ...], ...]:
    """"1,1" for cyclic G; "(1,0),(0,1)" or "1 0;0 1" for products."""
    text = text.strip()
    if not text:
        return ()
    t = len(G.invariants)
    try:
        if "(" in text:
            parts = [p for p in _TUPLE.findall(text)]
            vals = [tuple(int(x) for x in p.split(",") if x.strip()) for p in parts]
        elif ";" in text:
            vals = [tuple(int(x) for x in p.replace(",", " ").split()) for p in text.split(";")]
        elif t <= 1:
            vals = [(int(x),) if t == 1 else () for x in text.split(",")]
        else:
            raise SurgeryError(f"class for {G} needs tuples like '(1,0),(0,1)'")
    except ValueError as exc:
        raise SurgeryError(f"cannot parse class {text!r}: {exc}") from exc
    return tuple(G.reduce(v) if len(v) == t else _bad_tuple(v, G) for v in vals)


def _bad_tuple(v, G):
    raise SurgeryError(f"{v} is not an element of {G}")
