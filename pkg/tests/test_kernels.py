import os
import subprocess
import sys

import numpy as np
import pytest

from qgcat import kernels


def random_tree_problem(rng, m, kmax, N, batch, lo=-3, hi=4):
    parent = [-1] + [int(rng.integers(0, i)) if rng.random() < 0.8 else -1 for i in range(1, m)]
    # children first: reverse index order works since parents have lower indices
    order = list(range(m - 1, -1, -1))
    ncol = rng.integers(1, kmax + 1, m)
    w = rng.integers(lo, hi, (batch, m, kmax, N))
    e = rng.integers(lo, hi, (m, kmax, kmax, N))
    return w, e, ncol, np.array(parent), np.array(order)


def naive_contract(w, e, ncol, parent, N):
    """Sum over every coloring with explicit cyclic convolution."""
    import itertools

    B, m = w.shape[:2]

    def conv(a, b):
        out = [0] * N
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[(i + j) % N] += x * y
        return out

    res = []
    for b in range(B):
        acc = [0] * N
        for cols in itertools.product(*[range(int(k)) for k in ncol]):
            term = [1] + [0] * (N - 1)
            for v in range(m):
                term = conv(term, [int(x) for x in w[b, v, cols[v]]])
                if parent[v] >= 0:
                    term = conv(term, [int(x) for x in e[v, cols[v], cols[parent[v]]]])
            acc = [a + t for a, t in zip(acc, term)]
        res.append(acc)
    return np.array(res, dtype=object)


def test_histograms_agree():
    rng = np.random.default_rng(0)
    pts = rng.integers(-5, 6, (40, 3))
    sg = rng.choice([-1, 1], 40)
    vecs = rng.integers(-4, 5, (3, 7))
    a = kernels.signed_exponent_histograms_numpy(pts, sg, vecs, 24, scale=2)
    b = kernels.signed_exponent_histograms_numba(pts, sg, vecs, 24, scale=2)
    assert np.array_equal(a, b)
    direct = np.zeros((7, 24), dtype=np.int64)
    for p, s in zip(pts, sg):
        for q in range(7):
            direct[q, (2 * int(p @ vecs[:, q])) % 24] += s
    assert np.array_equal(a, direct)


def test_tree_contract_agrees_with_naive():
    rng = np.random.default_rng(1)
    N = 6
    w, e, ncol, parent, order = random_tree_problem(rng, 4, 3, N, 2)
    expect = naive_contract(w, e, ncol, parent, N)
    a = kernels.tree_contract_numpy(w, e, ncol, parent, order)
    b = kernels.tree_contract_numba(w, e, ncol, parent, order)
    assert np.array_equal(a, b)
    assert np.array_equal(a.astype(object), expect)


def test_object_path_matches_int64():
    rng = np.random.default_rng(2)
    w, e, ncol, parent, order = random_tree_problem(rng, 5, 3, 8, 3)
    a = kernels.tree_contract_numpy(w, e, ncol, parent, order)
    b = kernels.tree_contract(w, e, ncol, parent, order, bound=kernels.INT64_SAFE)  # forces object dtype
    assert b.dtype == object
    assert np.array_equal(a.astype(object), b)


def test_object_path_exact_beyond_int64():
    big = 2**40
    w = np.full((1, 2, 1, 2), big, dtype=object)
    e = np.zeros((2, 1, 1, 2), dtype=object)
    e[1, 0, 0, 0] = big
    out = kernels.tree_contract_numpy(w, e, np.array([1, 1]), np.array([-1, 0]), np.array([1, 0]))
    # (B + Bx)^2 * B = B^3 (1 + 2x + x^2) = B^3 (2 + 2x) mod x^2 - 1
    assert list(out[0]) == [2 * big**3, 2 * big**3]


def test_contraction_bound_is_an_upper_bound():
    rng = np.random.default_rng(3)
    w, e, ncol, parent, order = random_tree_problem(rng, 5, 3, 5, 1)
    wn = np.abs(w[0]).sum(axis=-1)
    en = np.abs(e).sum(axis=-1)
    bound = kernels.contraction_bound(wn, en, ncol, parent, order)
    out = kernels.tree_contract_numpy(w, e, ncol, parent, order)
    assert np.abs(out).sum() <= bound


def test_disable_flag_selects_numpy():
    env = dict(os.environ, QGCAT_DISABLE_NUMBA="1")
    code = (
        "from qgcat import kernels; from qgcat.alcove import make_spec; "
        "from qgcat.modular import build_modular_data; "
        "d = build_modular_data(make_spec('A2', 7)); "
        "print(kernels.HAVE_NUMBA, kernels.USE_NUMBA, d.S((1, 0), (0, 1)))"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    flags, value = out.stdout.split(" ", 2)[:2], out.stdout.split(" ", 2)[2].strip()
    assert flags == ["False", "False"]
    from qgcat.alcove import make_spec
    from qgcat.modular import build_modular_data

    assert value == str(build_modular_data(make_spec("A2", 7)).S((1, 0), (0, 1)))


@pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba unavailable")
def test_numba_is_default():
    assert kernels.USE_NUMBA
