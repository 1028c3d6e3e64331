"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import timeit

import numpy as np

from expanderlab import kernels


def cases(rng):
    p = 10_007
    C = rng.integers(0, p, size=(4, 4), dtype=np.int64)
    xs = rng.integers(0, p, size=2000, dtype=np.int64)
    ys = rng.integers(0, p, size=2000, dtype=np.int64)
    big = (1 << 61) - 1
    Cb = rng.integers(0, 1 << 62, size=(3, 3), dtype=np.int64) % big
    xb = rng.integers(0, 1 << 62, size=300, dtype=np.int64) % big
    q = 41
    Tq = rng.integers(0, q, size=(q, q), dtype=np.int64)
    return [
        ("poly_table 2000x2000 p=10007", lambda m: m.poly_table(C, xs, ys, p)),
        ("value_counts 2000x2000 p=10007", lambda m: m.value_counts(C, xs, ys, p)),
        ("poly_points 2000 p=10007", lambda m: m.poly_points(C, xs, ys, p)),
        ("univariate_values 1e6 p=10007", lambda m: m.univariate_values(C[:, 0], np.arange(10 ** 6) % p, p)),
        ("poly_table 300x300 p=2^61-1", lambda m: m.poly_table(Cb, xb, xb, big)),
        ("quadruple_distinct p=41", lambda m: m.quadruple_distinct(Tq, q)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    impls = kernels.backends()
    rng = np.random.default_rng(0)
    names = sorted(impls)
    print(f"{'case':36}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for label, fn in cases(rng):
        times = {}
        for n in names:
            ref = fn(impls[n])
            times[n] = min(timeit.repeat(lambda: fn(impls[n]), number=1, repeat=args.repeat))
            if n == names[0]:
                first = ref
            else:
                assert np.array_equal(first, ref), label
        row = f"{label:36}" + "".join(f"{times[n]:>11.4f}s" for n in names)
        if "cython" in times:
            row += f"{times['python'] / times['cython']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
