"""Time the numba kernels against their numpy twins.

    python benchmarks/bench_kernels.py [--repeat N]

Each kernel is called once before timing so numba compilation is excluded.
"""
import argparse
import timeit

import numpy as np

from hforge import _kernels as K
from hforge.cohom import standard_cocycle
from hforge.forms import product_form
from hforge.heis import HeisGroup


def cases():
    b = product_form(6)                      # |H| = 216
    h = HeisGroup(b)
    t = h.group.table
    g0 = standard_cocycle(b)
    seed = np.zeros(h.order, dtype=np.bool_)
    seed[[1, 7]] = True
    ids = np.arange(h.order, dtype=np.int64)
    yield "heis_table |H|=216", "heis_table", (b.torus.table, b.g.table, b.gamma.table, b.table)
    yield "assoc_violation |H|=216", "assoc_violation", (t,)
    yield "commutator_table |H|=216", "commutator_table", (t, h.group.inverse)
    yield "center_mask |H|=216", "center_mask", (t,)
    yield "closure_mask |H|=216", "closure_mask", (t, seed)
    yield "hom_violation id |H|=216", "hom_violation", (t, t, ids)
    yield "cocycle_violation |P|=36", "cocycle_violation", (g0.p.table, g0.torus.table, g0.table)
    yield "twisted_table |P|=36", "twisted_table", (g0.torus.table, g0.p.table, g0.table)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not K.NUMBA:
        print("numba is not importable; only the numpy backend is available")
    print(f"{'kernel':32s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for label, name, kargs in cases():
        kargs = tuple(np.ascontiguousarray(a) for a in kargs)
        row = []
        for impl in (K.NUMPY, K.NUMBA):
            if name not in impl:
                row.append(float("nan"))
                continue
            fn = impl[name]
            fn(*kargs)
            best = min(timeit.repeat(lambda: fn(*kargs), number=1, repeat=args.repeat))
            row.append(best * 1e3)
        print(f"{label:32s} {row[0]:10.3f} {row[1]:10.3f} {row[0] / row[1]:8.1f}x")


if __name__ == "__main__":
    main()
