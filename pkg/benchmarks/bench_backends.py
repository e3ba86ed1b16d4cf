#!/usr/bin/env python3
"""Compare the compiled and numpy backends on the two hot loops.

    python benchmarks/bench_backends.py [--count 1000000] [--repeat 5]

``hartogs_kernel`` is timed for one point against a batch of Monte Carlo
samples (the inner loop of the projection and Schur experiments);
``shell_sum`` for the frontier shells of a full series evaluation.
"""
import argparse
import timeit

import numpy as np

from hartogs import _backend
from hartogs.basis import frontier_shell
from hartogs.domains import hartogs_ball, hartogs_polydisc, interior_points, sample


def bench(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--count", type=int, default=1_000_000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    backends = [b for b in (_backend.python, _backend.cython) if b is not None]
    if len(backends) == 1:
        print("# compiled extension not built; timing the numpy backend only")
    print(f"{'task':34s} " + " ".join(f"{b.NAME:>10s}" for b in backends) + "   speedup")
    for spec in (hartogs_polydisc(1, 1), hartogs_ball(2, 2)):
        Q = sample(spec, 0, args.count).points
        p = interior_points(spec, 0, 1)[:1]
        ball = spec.kind.value == "HartogsBall"
        times = [bench(lambda b=b: b.hartogs_kernel(p, Q, spec.n, spec.k, ball), args.repeat)
                 for b in backends]
        _row(f"kernel {spec} x{args.count}", times)

        shells = [frontier_shell(spec, d) for d in range(200)]
        eta, t = 0.6 + 0.1j, np.full(spec.n, 0.3 + 0.2j)

        def series(b):
            for sh in shells:
                b.shell_sum(eta, t, sh.s, sh.beta, sh.weights)

        times = [bench(lambda b=b: series(b), args.repeat) for b in backends]
        _row(f"series {spec} 200 shells", times)


def _row(label, times):
    speed = f"{times[0] / times[-1]:8.1f}x" if len(times) > 1 else ""
    print(f"{label:34s} " + " ".join(f"{t * 1e3:8.2f}ms" for t in times) + "  " + speed)


if __name__ == "__main__":
    main()
