"""Compare the compiled and pure-Python fibre-section kernels.

    python benchmarks/bench_kernels.py [--repeat R]
"""

import argparse
import time

from prodinf import GroundSpace, ProductSpace, kernels
from prodinf.families import family_event, random_event

CASES = [
    ("majority", 2, 15, {}),
    ("majority", 2, 19, {}),
    ("tribes", 2, 20, {"w": 4, "s": 5}),
    ("random", 3, 12, {"seed": 1, "density": "1/2"}),
    ("random", 4, 10, {"seed": 2, "density": "1/3"}),
]


def build(name, k, n, params):
    space = ProductSpace(GroundSpace.uniform(k), n)
    if name == "random":
        return random_event(space, params["seed"], params["density"])
    return family_event(space, name, params)


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels._ckernel is None:
        raise SystemExit("compiled kernel not built; run `pip install -e . --no-build-isolation`")
    print(f"{'event':<22}{'K^n':>10}{'python s':>11}{'cython s':>11}{'speedup':>9}")
    for name, k, n, params in CASES:
        a = build(name, k, n, params)
        nums, _ = a.ground.integer_weights()
        e = n // 2

        def run(backend):
            return kernels.section_histogram(a.accepted, nums, k, n, e, backend=backend)

        tp, hp = timed(lambda: run("python"), args.repeat)
        tc, hc = timed(lambda: run("cython"), args.repeat)
        assert hp == hc, f"backends disagree on {name}"
        label = f"{name}(K={k},n={n})"
        print(f"{label:<22}{k**n:>10}{tp:>11.4f}{tc:>11.4f}{tp / tc:>8.1f}x")


if __name__ == "__main__":
    main()
