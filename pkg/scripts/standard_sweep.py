"""Run the reference sweeps, write CSV/JSON, print area-law fits.

    python scripts/standard_sweep.py --out results/
"""
import argparse
import json
from pathlib import Path

from arealaw import harness


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, cfg in harness.standard_sweeps().items():
        cfg = harness.SweepConfig(**{**cfg.__dict__, "workers": args.workers})
        records = harness.run_sweep(cfg)
        harness.emit(records, out / f"{name}.csv")
        harness.emit(records, out / f"{name}.json", "json", metadata={"fit_min_m": harness.FIT_MIN_M})
        for measure in ("S", "E_N"):
            fit = harness.fit_area_law(records, measure)
            print(name, json.dumps(fit.to_dict()))
        bad = [r for r in records if not r.chain_ok]
        print(f"{name}: {len(records)} records, {len(bad)} flagged")


if __name__ == "__main__":
    main()
