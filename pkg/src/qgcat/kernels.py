"""Hot integer kernels with a numba path and a pure-numpy fallback.

Two loops dominate runtime:

* ``signed_exponent_histograms`` -- Weyl character sums.  Each orbit point
  ``x`` with sign ``s`` contributes ``s * zeta_N**(scale * <x, v>)``; the
  result is a histogram over exponents mod ``N`` (a group-ring element).
* ``tree_contract`` -- summing a colored forest over all colorings by
  message passing, with every value stored as a vector in the group ring
  ``Z[x]/(x^N - 1)``.

Set ``QGCAT_DISABLE_NUMBA=1`` to force the numpy implementations.  Both paths
are exact; the numba path works in int64 and is only selected when the
caller's overflow bound allows it.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("QGCAT_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


USE_NUMBA = HAVE_NUMBA

# int64 headroom: every intermediate coefficient must stay below this.
INT64_SAFE = 2**62


# --------------------------------------------------------------------------
# Weyl sums
# --------------------------------------------------------------------------


def signed_exponent_histograms_numpy(points, signs, vecs, N, scale=1):
    """Histogram of ``scale * points @ vecs`` mod ``N`` weighted by ``signs``.

    ``points``: (P, l) int64, ``signs``: (P,) int64, ``vecs``: (l, Q) int64.
    Returns a (Q, N) int64 array.
    """
    points = np.asarray(points, dtype=np.int64)
    vecs = np.asarray(vecs, dtype=np.int64)
    signs = np.asarray(signs, dtype=np.int64)
    Q = vecs.shape[1]
    exps = np.mod(scale * (points @ vecs), N)  # (P, Q)
    flat = (np.arange(Q, dtype=np.int64)[None, :] * N + exps).ravel()
    weights = np.broadcast_to(signs[:, None], exps.shape).ravel()
    out = np.zeros(Q * N, dtype=np.int64)
    np.add.at(out, flat, weights)
    return out.reshape(Q, N)


@njit(cache=True)
def _hist_kernel(points, signs, vecs_t, N, scale):
    P, l = points.shape
    Q = vecs_t.shape[0]
    out = np.zeros((Q, N), dtype=np.int64)
    for p in range(P):
        s = signs[p]
        for q in range(Q):
            acc = 0
            for i in range(l):
                acc += points[p, i] * vecs_t[q, i]
            e = (scale * acc) % N
            if e < 0:
                e += N
            out[q, e] += s
    return out


def signed_exponent_histograms_numba(points, signs, vecs, N, scale=1):
    return _hist_kernel(
        np.ascontiguousarray(points, dtype=np.int64),
        np.ascontiguousarray(signs, dtype=np.int64),
        np.ascontiguousarray(np.asarray(vecs, dtype=np.int64).T),
        np.int64(N),
        np.int64(scale),
    )


def signed_exponent_histograms(points, signs, vecs, N, scale=1):
    if USE_NUMBA:
        return signed_exponent_histograms_numba(points, signs, vecs, N, scale)
    return signed_exponent_histograms_numpy(points, signs, vecs, N, scale)


# --------------------------------------------------------------------------
# Forest contraction in the group ring Z[x]/(x^N - 1)
# --------------------------------------------------------------------------
#
# Layout (m vertices, kmax colors, N = group ring length):
#   weights: (B, m, kmax, N)   vertex weight per color, B = batch
#   edges:   (m, kmax, kmax, N) edges[v, c_v, c_p] for the edge v -> parent(v)
#   ncol:    (m,)  number of live colors per vertex
#   parent:  (m,)  parent index, -1 for roots
#   order:   (m,)  children strictly before parents
# Returns (B, N): product over roots of sum_c prod[root, c].


def contraction_bound(weight_norms, edge_norms, ncol, parent, order):
    """l1-norm bound on every intermediate of ``tree_contract``.

    ``weight_norms``: (m, kmax) ints, ``edge_norms``: (m, kmax, kmax) ints.
    Since ||a*b||_1 <= ||a||_1 ||b||_1 in the group ring, propagating norms
    through the same recursion bounds every coefficient the kernel touches.
    """
    m = len(parent)
    prod = [[int(weight_norms[v][c]) for c in range(ncol[v])] for v in range(m)]
    biggest = max([1] + [x for row in prod for x in row])
    total = 1
    for v in order:
        p = parent[v]
        if p < 0:
            s = sum(prod[v])
            total *= max(s, 1)
            biggest = max(biggest, total)
            continue
        for cp in range(ncol[p]):
            msg = sum(prod[v][c] * int(edge_norms[v][c][cp]) for c in range(ncol[v]))
            prod[p][cp] *= msg
            biggest = max(biggest, msg, prod[p][cp])
    return biggest


def tree_contract_numpy(weights, edges, ncol, parent, order):
    """Reference implementation; works for int64 and object arrays."""
    weights = np.asarray(weights)
    B, m, kmax, N = weights.shape
    dtype = weights.dtype
    # circulant index: circ[i, j] = (i - j) mod N
    idx = (np.arange(N)[:, None] - np.arange(N)[None, :]) % N
    prod = weights.copy()
    result = np.zeros((B, N), dtype=dtype)
    result[:, 0] = 1
    for v in order:
        kv = ncol[v]
        p = parent[v]
        live = prod[:, v, :kv, :]  # (B, kv, N)
        if p < 0:
            s = live.sum(axis=1)  # (B, N)
            circ = s[:, idx]  # (B, N, N)
            result = np.einsum("bij,bj->bi", circ, result)
            continue
        kp = ncol[p]
        circ = live[:, :, idx]  # (B, kv, N, N)
        msg = np.einsum("bcij,cpj->bpi", circ, edges[v, :kv, :kp, :])
        tgt = prod[:, p, :kp, :]
        circ_t = tgt[:, :, idx]
        prod[:, p, :kp, :] = np.einsum("bpij,bpj->bpi", circ_t, msg)
    return result


@njit(cache=True)
def _cyc_mul_into(a, b, out, N):
    for i in range(N):
        out[i] = 0
    for i in range(N):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(N):
            bj = b[j]
            if bj != 0:
                k = i + j
                if k >= N:
                    k -= N
                out[k] += ai * bj


@njit(cache=True)
def _tree_contract_kernel(weights, edges, ncol, parent, order):
    B, m, kmax, N = weights.shape
    result = np.zeros((B, N), dtype=np.int64)
    prod = np.empty((m, kmax, N), dtype=np.int64)
    msg = np.empty((kmax, N), dtype=np.int64)
    tmp = np.empty(N, dtype=np.int64)
    acc = np.empty(N, dtype=np.int64)
    for b in range(B):
        for v in range(m):
            for c in range(kmax):
                for i in range(N):
                    prod[v, c, i] = weights[b, v, c, i]
        for i in range(N):
            result[b, i] = 0
        result[b, 0] = 1
        for t in range(m):
            v = order[t]
            kv = ncol[v]
            p = parent[v]
            if p < 0:
                for i in range(N):
                    acc[i] = 0
                for c in range(kv):
                    for i in range(N):
                        acc[i] += prod[v, c, i]
                _cyc_mul_into(result[b], acc, tmp, N)
                for i in range(N):
                    result[b, i] = tmp[i]
                continue
            kp = ncol[p]
            for cp in range(kp):
                for i in range(N):
                    msg[cp, i] = 0
                for c in range(kv):
                    _cyc_mul_into(prod[v, c], edges[v, c, cp], tmp, N)
                    for i in range(N):
                        msg[cp, i] += tmp[i]
                _cyc_mul_into(prod[p, cp], msg[cp], tmp, N)
                for i in range(N):
                    prod[p, cp, i] = tmp[i]
    return result


def tree_contract_numba(weights, edges, ncol, parent, order):
    return _tree_contract_kernel(
        np.ascontiguousarray(weights, dtype=np.int64),
        np.ascontiguousarray(edges, dtype=np.int64),
        np.ascontiguousarray(ncol, dtype=np.int64),
        np.ascontiguousarray(parent, dtype=np.int64),
        np.ascontiguousarray(order, dtype=np.int64),
    )


def tree_contract(weights, edges, ncol, parent, order, bound):
    """Dispatch on overflow ``bound`` (from ``contraction_bound``)."""
    if bound < INT64_SAFE:
        if USE_NUMBA:
            return tree_contract_numba(weights, edges, ncol, parent, order)
        return tree_contract_numpy(
            np.asarray(weights, dtype=np.int64), np.asarray(edges, dtype=np.int64), ncol, parent, order
        )
    return tree_contract_numpy(
        np.asarray(weights, dtype=object), np.asarray(edges, dtype=object), ncol, parent, order
    )
