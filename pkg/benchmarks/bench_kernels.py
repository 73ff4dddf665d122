"""Time every kernel on every available backend.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import timeit

import numpy as np

from adjmi import kernels
from adjmi.sampling import random_joint


def cases(rng):
    x = "".join(rng.choice(["0", "1"], size=4000))
    y = x[::3]
    j = random_joint(rng, 6, 6, density=0.5)
    px, py = j.matrix.sum(axis=1), j.matrix.sum(axis=0)
    mask = j.matrix > 0
    kernel = px[:, None] * py[None, :] * mask
    vec = rng.normal(size=1 << 18)
    return {
        "is_subsequence (4000 bits)": lambda impl: kernels.is_subsequence(y, x, impl=impl),
        "embedding_count (60 / 20 bits)": lambda impl: kernels.embedding_count(x[:60], y[:20], impl=impl),
        "deletion_channel_matrix (n=10)": lambda impl: kernels.deletion_channel_matrix(10, 0.2, impl=impl),
        "fwht (2^18)": lambda impl: kernels.fwht(vec, impl=impl),
        "parse_phrases (4000 bits)": lambda impl: kernels.parse_phrases(x, impl=impl),
        "dual_iterate (6x6, 1000 steps)": lambda impl: kernels.dual_iterate(
            np.log(px), np.log(py), mask, np.zeros(6), 1000, 0.0, impl=impl
        ),
        "ipf_fit (6x6, 1000 sweeps)": lambda impl: kernels.ipf_fit(px, py, kernel, 1000, 0.0, impl=impl),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.available_backends()
    print(f"{'kernel':34s}" + "".join(f"{name:>14s}" for name in backends))
    for label, fn in cases(np.random.default_rng(0)).items():
        times = []
        for impl in backends.values():
            times.append(min(timeit.repeat(lambda: fn(impl), number=1, repeat=args.repeat)))
        print(f"{label:34s}" + "".join(f"{t * 1e3:12.3f}ms" for t in times))


if __name__ == "__main__":
    main()
