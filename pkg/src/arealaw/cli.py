"""Command-line interface: ``compute``, ``sweep``, ``verify``, ``fit``.

Exit codes: 0 success, 1 usage error, 2 numerical or validation failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import harness
from .bounds import verify_decay
from .circulant import build_potential, fractional_power
from .errors import InvalidInputError, ModelInvalidError
from .gaussian import complement_entropy, log_negativity, region_entropy
from .lattice import LatticeSpec, Region
from .squared import SquaredModelSpec, build_squared

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _measures(choice: str) -> tuple[str, ...]:
    return {"s": ("S", "spectrum"), "en": ("E_N",), "all": harness.MEASURES}[choice]


def cmd_compute(args) -> int:
    Region(LatticeSpec(args.d, args.n, args.c, args.model), args.m)
    rec = harness.evaluate_point(args.d, args.n, args.m, args.c, args.model, _measures(args.measure))
    if args.out:
        harness.emit([rec], args.out, args.format)
    else:
        text = harness.to_csv([rec]) if args.format == "csv" else harness.to_json([rec])
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    if rec.error:
        print(rec.error, file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        data = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot load config {args.config}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = data.pop("out", None)
    config = harness.SweepConfig.from_dict(data)
    records = harness.run_sweep(config)
    meta = {"fit_min_m": harness.FIT_MIN_M}
    if out:
        harness.emit(records, out, config.output_format, metadata=meta)
    else:
        text = harness.to_csv(records) if config.output_format == "csv" else harness.to_json(records, meta)
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    bad = [r for r in records if not r.chain_ok]
    for r in bad:
        print(f"n={r.n} m={r.m}: {r.error or ', '.join(r.violations)}", file=sys.stderr)
    return EXIT_FAIL if bad else EXIT_OK


def run_verification(d: int, n: int, c: float, model: str = "nn") -> list[tuple[str, bool, str]]:
    """Checks behind ``verify``; each item is ``(name, passed, detail)``."""
    checks: list[tuple[str, bool, str]] = []
    spec = LatticeSpec(d, n, c, model)
    if model == "nn":
        V = build_potential(spec)
        for p in (-0.5, 0.5):
            rep = verify_decay(fractional_power(V, p))
            det = rep.details
            lower_required = d == 1
            passed = rep.satisfied and (det["lower_ok"] or not lower_required)
            checks.append((
                f"decay V^{p:+g}",
                passed,
                f"sign={det['sign_violations']} upper={det['upper_violations']} "
                f"lower={det['lower_violations']}" + ("" if lower_required else " (lower reported only)"),
            ))
    else:
        _, V = build_squared(SquaredModelSpec(d, n, c))
    m_max = max(1, n // 2)
    m_values = sorted({m for m in (1, 2, 3, 4, m_max) if m <= m_max})
    for m in m_values:
        rec = harness.evaluate_point(d, n, m, c, model)
        checks.append((f"bound chain m={m}", rec.chain_ok, rec.error or ", ".join(rec.violations) or "ok"))
    for m in m_values[: 3]:
        region = Region(spec, m)
        s_in, s_out = region_entropy(V, region), complement_entropy(V, region)
        checks.append((f"purity m={m}", abs(s_in - s_out) <= 1e-8, f"|dS|={abs(s_in - s_out):.2e}"))
    m = m_values[min(1, len(m_values) - 1)]
    base_s = region_entropy(V, Region(spec, m))
    base_e = log_negativity(V, Region(spec, m))
    worst = 0.0
    for t in range(n):
        reg = Region(spec, m, tuple((t * (2 * j + 1)) % n for j in range(d)))
        worst = max(worst, abs(region_entropy(V, reg) - base_s), abs(log_negativity(V, reg) - base_e))
    checks.append((f"translation m={m}", worst <= 1e-8, f"max dev={worst:.2e}"))
    return checks


def cmd_verify(args) -> int:
    checks = run_verification(args.d, args.n, args.c, args.model)
    for name, ok, detail in checks:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return EXIT_OK if all(ok for _, ok, _ in checks) else EXIT_FAIL


def cmd_fit(args) -> int:
    records = harness.load_records(args.input)
    fit = harness.fit_area_law(records, args.measure)
    print(json.dumps(fit.to_dict(), indent=1))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="arealaw", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="entropy / negativity of one region")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--model", choices=("nn", "squared"), default="nn")
    p.add_argument("--measure", choices=("s", "en", "all"), default="all")
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", help="run a JSON-configured sweep")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="certify bounds and symmetries")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--model", choices=("nn", "squared"), default="nn")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fit", help="log-log area-law fit of stored records")
    p.add_argument("--input", required=True)
    p.add_argument("--measure", choices=("s", "en"), default="en")
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidInputError, ModelInvalidError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, np.linalg.LinAlgError, MemoryError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
