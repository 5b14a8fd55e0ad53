"""Compare the compiled kernels with the numpy fallback.

Usage: ``python3 benchmarks/bench_kernels.py [--repeat 5]``
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from vbslab import kernels
from vbslab import vbs_constructor as vc
from vbslab.spin_operators import bond_term


def cases():
    """(name, callable taking an implementation module) pairs on realistic chain states."""
    out = []
    for S, N in [(1, 8), (1, 10), (2, 5)]:
        spec = vc.homogeneous_chain(S, N)
        psi = vc.build_vbs(spec, exact=False).normalized().amplitudes
        dims = spec.dims
        bond = spec.bonds[len(spec.bonds) // 2]
        op = bond_term(spec, bond)
        out.append((f"apply_two_site S={S} N={N} (len {psi.size})",
                    lambda impl, psi=psi, dims=dims, b=bond, op=op: impl.apply_two_site(psi, dims, b.k, b.l, op)))
        block = list(range(2, 5))
        out.append((f"matrix_unit_expectations S={S} N={N} block=3",
                    lambda impl, psi=psi, dims=dims, block=block: impl.matrix_unit_expectations(psi, dims, block)))
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    impls = [("python", kernels.python_impl)]
    if kernels.compiled_impl is not None:
        impls.append(("cython", kernels.compiled_impl))
    else:
        print("compiled extension not available; timing the fallback only")
    print(f"{'case':<52} " + " ".join(f"{name:>12}" for name, _ in impls) + ("     speedup" if len(impls) == 2 else ""))
    for name, fn in cases():
        results = [fn(impl) for _, impl in impls]
        if len(results) == 2 and not np.allclose(results[0], results[1], atol=1e-12):
            raise SystemExit(f"backends disagree on {name}")
        times = [min(timeit.repeat(lambda impl=impl: fn(impl), number=1, repeat=args.repeat)) for _, impl in impls]
        row = f"{name:<52} " + " ".join(f"{t * 1e3:10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"  {times[0] / times[1]:9.2f}x"
        print(row)


if __name__ == "__main__":
    main()
