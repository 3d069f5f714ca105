"""Saturation of E_N and S in the lattice size n at fixed region size."""
import argparse

from arealaw.harness import convergence_study


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--d", type=int, default=1)
    ap.add_argument("--m", type=int, default=4)
    ap.add_argument("--c", type=float, default=0.24)
    ap.add_argument("--n", type=int, nargs="+", default=[16, 32, 64])
    args = ap.parse_args()
    rows, saturated = convergence_study(args.d, args.m, args.c, args.n)
    print("n,EN_nats,S_nats,delta_EN,delta_S")
    for r in rows:
        print(f"{r.n},{r.EN!r},{r.S!r},{r.delta_EN},{r.delta_S}")
    print("saturated" if saturated else "not saturated")


if __name__ == "__main__":
    main()
