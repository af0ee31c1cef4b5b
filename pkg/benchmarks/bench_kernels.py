"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N] [--end-to-end]

Each workload is run on every available backend; outputs are checked for
equality before timings are reported.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from mixedvol import kernels
from mixedvol import monomial_algebra as ma
from mixedvol.graded_families import body_family, homogenize
from mixedvol.lattice_geometry import box, cube
from fractions import Fraction


def workloads():
    sq = body_family(homogenize(cube(2)))
    half = body_family(homogenize(box((Fraction(1, 2), Fraction(1, 2)))))
    rng = np.random.default_rng(7)
    scattered = rng.integers(0, 40, size=(4000, 3)).astype(np.int64)
    J8 = sq.ideal_at(8).gens_array
    H16 = half.ideal_at(16).gens_array
    m6 = ma.monomials_of_degree(3, 6)
    mixed = np.vstack([ma.monomials_of_degree(3, 5), ma.monomials_of_degree(3, 9)])
    return {
        "minimalize scattered 4000x3": ("minimalize", (scattered,)),
        "product homogeneous (square J_8)^2": ("product", (J8, J8)),
        "product homogeneous (half-square J_16)^2": ("product", (H16, H16)),
        "product mixed degrees": ("product", (mixed, m6)),
        "depth_histogram square J_8, deg<=60": ("depth_histogram", (J8, 0, 60, 20)),
        "depth_histogram m^6, deg<=80": ("depth_histogram", (m6, 0, 80, 40)),
    }


def best_of(fn, args, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), out


def canon(arr):
    arr = np.asarray(arr)
    if arr.ndim == 2 and arr.dtype == np.int64 and arr.shape[1] <= 4:
        return arr[np.lexsort(arr.T[::-1])]
    return arr


E2E = """
import time
from fractions import Fraction as F
from mixedvol.lattice_geometry import box, cube
from mixedvol.verification import verify_theorem_c
t0 = time.perf_counter()
assert verify_theorem_c([box((F(1, 2), F(1, 2))), cube(2)]).passed
print(time.perf_counter() - t0)
"""


def end_to_end(names) -> None:
    # backend choice happens at import, so each run gets a fresh interpreter
    print("verify_theorem_c, K1=[0,1/2]^2, K2=[0,1]^2, p=1..16, both routes")
    for n in names:
        env = dict(os.environ, MIXEDVOL_KERNELS=n)
        out = subprocess.run([sys.executable, "-c", E2E], env=env, capture_output=True, text=True, check=True)
        print(f"  {n:8s}{float(out.stdout):8.2f}s")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--end-to-end", action="store_true", help="also time a full verification run")
    args = ap.parse_args()
    names = kernels.available_backends()
    backends = {n: kernels.get_backend(n) for n in names}
    print(f"backends: {', '.join(names)} (default: {kernels.BACKEND})")
    header = f"{'workload':44s}" + "".join(f"{n:>12s}" for n in names)
    if len(names) > 1:
        header += f"{'speedup':>10s}"
    print(header)
    for label, (op, op_args) in workloads().items():
        row = f"{label:44s}"
        results = {}
        for n, mod in backends.items():
            t, out = best_of(getattr(mod, op), op_args, args.repeat)
            results[n] = (t, canon(out))
            row += f"{t * 1000:10.2f}ms"
        outs = [r[1] for r in results.values()]
        if not all(np.array_equal(outs[0], o) for o in outs[1:]):
            raise SystemExit(f"backends disagree on {label}")
        if "python" in results and "cython" in results:
            row += f"{results['python'][0] / results['cython'][0]:9.1f}x"
        print(row)
    if args.end_to_end:
        end_to_end(names)


if __name__ == "__main__":
    main()
