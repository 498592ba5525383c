"""Compare the compiled and pure-Python partition refinement kernels.

    python benchmarks/bench_refine.py [--repeat N]

Runs both kernels on random transition structures of growing size and then
times the jump-free compilation check end to end under each backend.
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import time

from pgakit import _refine_py

try:
    from pgakit import _refine as _refine_cy
except ImportError:
    _refine_cy = None


def instance(rng: random.Random, n: int):
    return (
        [rng.randrange(6) for _ in range(n)],
        [rng.randrange(n) for _ in range(n)],
        [rng.randrange(n) for _ in range(n)],
    )


def best_of(fn, args, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - start)
    return min(times)


PIPELINE = """
import random, time
from pgakit._kernel import BACKEND
from pgakit.generators import random_normal_form
from pgakit.jumpfree import verify_theorem1
rng = random.Random(1)
nfs = [random_normal_form(rng, 8) for _ in range(20)]
start = time.perf_counter()
assert all(verify_theorem1(nf) for nf in nfs)
print(BACKEND, time.perf_counter() - start)
"""


def pipeline(pure: bool) -> str:
    env = dict(os.environ)
    env.pop("PGAKIT_PURE_PYTHON", None)
    if pure:
        env["PGAKIT_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", PIPELINE], env=env, capture_output=True, text=True, check=True)
    backend, seconds = out.stdout.split()
    return f"{backend:>7}: {float(seconds):.2f}s"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _refine_cy is None:
        sys.exit("compiled kernel not built; run pip install -e . first")

    rng = random.Random(0)
    print(f"{'states':>8} {'python':>10} {'cython':>10} {'speedup':>8}")
    for n in (1_000, 10_000, 100_000, 300_000):
        inst = instance(rng, n)
        assert list(_refine_cy.refine_partition(*inst)) == list(_refine_py.refine_partition(*inst))
        t_py = best_of(_refine_py.refine_partition, inst, args.repeat)
        t_cy = best_of(_refine_cy.refine_partition, inst, args.repeat)
        print(f"{n:>8} {t_py:>9.4f}s {t_cy:>9.4f}s {t_py / t_cy:>7.1f}x")

    print("\nverify_theorem1 on 20 normal forms with n = 8")
    print(pipeline(pure=False))
    print(pipeline(pure=True))


if __name__ == "__main__":
    main()
