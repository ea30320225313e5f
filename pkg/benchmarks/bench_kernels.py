"""Numba vs numpy timings for the two hot kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both paths are exact, so the script also asserts they agree.
"""

import argparse
import time

import numpy as np

from qgcat import kernels
from qgcat.alcove import make_spec
from qgcat.modular import build_modular_data
from qgcat.surgery import PlumbingForest, _Tables, _grade_classes


def best_of(fn, repeat):
    fn()  # warm-up (and JIT compile)
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def bench_weyl(repeat):
    rs = make_spec("E6", 13).root_system
    N = 2 * rs.D * 13
    pts, sg = rs.regular_orbit((1, 2, 1, 1, 1, 3))
    rng = np.random.default_rng(0)
    vecs = 2 * (rs.DM @ rng.integers(1, 4, size=(rs.rank, 64)))
    nb, a = best_of(lambda: kernels.signed_exponent_histograms_numba(pts, sg, vecs, N), repeat)
    npy, b = best_of(lambda: kernels.signed_exponent_histograms_numpy(pts, sg, vecs, N), repeat)
    assert np.array_equal(a, b)
    return f"weyl histograms  E6 |W|={len(pts)} x {vecs.shape[1]} weights", nb, npy


def bench_tree(repeat):
    data = build_modular_data(make_spec("A2", 9))
    T = _Tables(data)
    m = 8
    forest = PlumbingForest.make([(-1) ** i * (i % 4) for i in range(m)], [(i // 2, i) for i in range(1, m)])
    classes = _grade_classes(data, [(0,)] * m, m)
    parent, order = forest.rooted()
    ncol = np.array([len(c) for c in classes])
    kmax, N = int(ncol.max()), data.N
    batch = 16
    w = np.zeros((batch, m, kmax, N), dtype=np.int64)
    for b in range(batch):
        for v in range(m):
            base = T.d2 if parent[v] < 0 else T.d1
            for c, i in enumerate(classes[v]):
                w[b, v, c] = np.roll(np.array(base[i], dtype=np.int64), (b - v) * int(T.twist[i]) % N)
    e = np.zeros((m, kmax, kmax, N), dtype=np.int64)
    for v in range(m):
        if parent[v] >= 0:
            for c, i in enumerate(classes[v]):
                for cp, j in enumerate(classes[parent[v]]):
                    e[v, c, cp] = np.array(T.shat[i, j], dtype=np.int64)
    par, order = np.array(parent), np.array(order)
    nb, a = best_of(lambda: kernels.tree_contract_numba(w, e, ncol, par, order), repeat)
    npy, b = best_of(lambda: kernels.tree_contract_numpy(w, e, ncol, par, order), repeat)
    assert np.array_equal(a, b)
    return f"tree contraction A2 r=9 m={m} colors={kmax} N={N} batch={batch}", nb, npy


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not kernels.HAVE_NUMBA:
        print("numba unavailable (or QGCAT_DISABLE_NUMBA set); nothing to compare")
        return
    print(f"{'kernel':58s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for bench in (bench_weyl, bench_tree):
        name, nb, npy = bench(args.repeat)
        print(f"{name:58s} {nb * 1e3:9.2f}ms {npy * 1e3:9.2f}ms {npy / nb:7.1f}x")


if __name__ == "__main__":
    main()
