"""Top symplectic eigenvalues of a 1D squared-interaction interval versus m.

Compares both generators with their large-m limits and with the closed
form ``closed_form_mu``.
"""
import argparse

from arealaw.gaussian import reduce, symplectic_spectrum
from arealaw.lattice import Region
from arealaw.squared import (
    SquaredModelSpec,
    boundary_mu_limit,
    build_squared,
    closed_form_mu,
    squared_ground_covariance,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--c", type=float, default=0.2)
    ap.add_argument("--m", type=int, nargs="+", default=[4, 10, 25, 50, 100])
    args = ap.parse_args()
    print(f"closed_form_mu({args.c}) = {closed_form_mu(args.c):.10f}")
    for gen in ("unit", "laplacian"):
        limit = boundary_mu_limit(args.c, gen)
        print(f"generator={gen} limit={limit:.10f}")
        for m in args.m:
            spec = SquaredModelSpec(1, 4 * m, args.c, gen)
            W, _ = build_squared(spec)
            mu = symplectic_spectrum(reduce(squared_ground_covariance(W), Region(spec.lattice(), m))).mu
            n_nonunit = int((mu > 1 + 1e-8).sum())
            print(f"  m={m:4d} mu1={mu[0]:.10f} mu2={mu[1]:.10f} nonunit={n_nonunit} "
                  f"|mu1-limit|={abs(mu[0] - limit):.1e}")


if __name__ == "__main__":
    main()
