"""Compiled versus pure-Python kernel timings on desk-scale matrices.

    python3 benchmarks/bench_kernel.py [--n 4] [--batch 256] [--repeat 5]

Prints microseconds per call for each entry point and backend, plus the
LAPACK singular values as an outside reference, and checks that both
backends return the same numbers.
"""

import argparse
import timeit

import numpy as np

from schattenkit import _kernel_py, sampling

try:
    from schattenkit import _kernel as _compiled
except ImportError:
    _compiled = None


def cases(n, batch, p=3.0):
    rng = sampling.rng_for(0)
    a = sampling.sphere_point(rng, n, p)
    etas = sampling.unit_vectors(rng, batch, n)
    xis = sampling.unit_vectors(rng, batch, n)
    pts = np.concatenate([etas.real, etas.imag, xis.real, xis.imag], axis=1)
    stack = np.stack([sampling.ginibre(rng, n) for _ in range(batch)])
    return {
        "singular_values": (lambda k: k.singular_values(a), 1),
        "schatten_pp": (lambda k: k.schatten_pp(a, p), 1),
        "schatten_pp_batch": (lambda k: k.schatten_pp_batch(stack, p), batch),
        "profile_pp_packed": (lambda k: k.profile_pp_packed(a, 1.0, pts, p), batch),
    }, a


def per_call(fn, calls, repeat):
    number = max(1, 2000 // calls)
    best = min(timeit.repeat(fn, number=number, repeat=repeat))
    return 1e6 * best / (number * calls)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=4)
    parser.add_argument("--batch", type=int, default=256)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    table, a = cases(args.n, args.batch)
    backends = {"python": _kernel_py}
    if _compiled is not None:
        backends["compiled"] = _compiled
    else:
        print("compiled kernel not built; timing the fallback only")

    print(f"n = {args.n}, batch = {args.batch}; microseconds per matrix")
    print(f"{'entry point':<20}" + "".join(f"{name:>12}" for name in backends) + f"{'speedup':>10}")
    for name, (call, calls) in table.items():
        times = {b: per_call(lambda: call(k), calls, args.repeat) for b, k in backends.items()}
        row = f"{name:<20}" + "".join(f"{times[b]:>12.2f}" for b in backends)
        if "compiled" in times:
            row += f"{times['python'] / times['compiled']:>9.0f}x"
            ref = call(_kernel_py)
            got = call(_compiled)
            assert np.allclose(ref, got, rtol=1e-12, atol=1e-13), name
        print(row)
    lapack = per_call(lambda: np.linalg.svd(a, compute_uv=False), 1, args.repeat)
    print(f"{'numpy.linalg.svd':<20}{lapack:>12.2f}  (reference)")


if __name__ == "__main__":
    main()
