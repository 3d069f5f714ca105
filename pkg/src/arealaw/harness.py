"""Parameter sweeps, area-law fits and flat-file output."""
from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .bounds import REL_TOL, lower_bound_estimate, shell_sum_bound, upper_bound_en
from .circulant import build_potential
from .errors import InvalidInputError
from .gaussian import (
    entanglement_entropy,
    ground_covariance,
    log_negativity,
    reduce,
    symplectic_spectrum,
)
from .lattice import MODELS, LatticeSpec, Region
from .squared import SquaredModelSpec, build_squared, squared_ground_covariance

SCHEMA_VERSION = 1
CSV_COLUMNS = (
    "d", "n", "m", "c", "model", "S_nats", "EN_nats", "upper_bound", "upper_valid",
    "shell_sum_bound", "lower_estimate", "nonunit_mu_count", "wall_ms",
)
MEASURES = ("S", "E_N", "bounds", "spectrum")
FIT_MIN_M = 4
NONUNIT_TOL = 1e-8


@dataclass(frozen=True)
class SweepConfig:
    d: int
    c: float
    model: str = "nn"
    n_values: tuple[int, ...] = ()
    m_values: tuple[int, ...] = ()
    measures: tuple[str, ...] = MEASURES
    output_format: str = "csv"
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(x) for x in self.n_values))
        object.__setattr__(self, "m_values", tuple(int(x) for x in self.m_values))
        object.__setattr__(self, "measures", tuple(self.measures))
        if self.model not in MODELS:
            raise InvalidInputError(f"model must be one of {MODELS}, got {self.model!r}")
        if not self.n_values or not self.m_values:
            raise InvalidInputError("sweep needs at least one n and one m")
        bad = [x for x in self.measures if x not in MEASURES]
        if bad:
            raise InvalidInputError(f"unknown measures {bad}; choose from {MEASURES}")
        if self.output_format not in ("csv", "json"):
            raise InvalidInputError(f"format must be csv or json, got {self.output_format!r}")
        for n in self.n_values:
            LatticeSpec(self.d, n, self.c, self.model)
        for n, m in self.points():
            if not 1 <= m <= n:
                raise InvalidInputError(f"region side m={m} does not fit in n={n}")

    def points(self) -> list[tuple[int, int]]:
        return [(n, m) for n in self.n_values for m in self.m_values]

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        data = dict(data)
        for old, new in (("n", "n_values"), ("m", "m_values"), ("format", "output_format")):
            if old in data:
                data[new] = data.pop(old)
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise InvalidInputError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)


@dataclass
class RunRecord:
    d: int
    n: int
    m: int
    c: float
    model: str
    S_nats: float | None = None
    EN_nats: float | None = None
    upper_bound: float | None = None
    upper_valid: bool = False
    shell_sum_bound: float | None = None
    lower_estimate: float | None = None
    nonunit_mu_count: int | None = None
    wall_ms: float = 0.0
    error: str | None = None

    @property
    def violations(self) -> list[str]:
        """Broken links of ``lower <= S <= E_N <= shell-sum <= upper (when valid)``."""
        out = []
        chain = [
            ("lower_estimate", self.lower_estimate),
            ("S", self.S_nats),
            ("E_N", self.EN_nats),
            ("shell_sum_bound", self.shell_sum_bound if self.model == "nn" else None),
            ("upper_bound", self.upper_bound if self.upper_valid and self.model == "nn" else None),
        ]
        present = [(k, v) for k, v in chain if v is not None]
        for (ka, va), (kb, vb) in zip(present, present[1:]):
            if va > vb + REL_TOL * max(abs(va), abs(vb)):
                out.append(f"{ka} > {kb}")
        return out

    @property
    def chain_ok(self) -> bool:
        return self.error is None and not self.violations

    def measure(self, name: str) -> float | None:
        key = {"S": "S_nats", "E_N": "EN_nats", "s": "S_nats", "en": "EN_nats"}.get(name)
        if key is None:
            raise InvalidInputError(f"measure must be S or E_N, got {name!r}")
        return getattr(self, key)


def evaluate_point(d: int, n: int, m: int, c: float, model: str = "nn",
                   measures: Sequence[str] = MEASURES) -> RunRecord:
    """One lattice evaluation. Numerical failures are stored in ``error``."""
    rec = RunRecord(d=d, n=n, m=m, c=float(c), model=model)
    t0 = time.perf_counter()
    try:
        spec = LatticeSpec(d, n, c, model)
        region = Region(spec, m)
        if model == "nn":
            V = build_potential(spec)
            cov = ground_covariance(V)
        else:
            W, V = build_squared(SquaredModelSpec(d, n, c))
            cov = squared_ground_covariance(W)
        want_state = any(x in measures for x in ("S", "bounds", "spectrum"))
        if want_state:
            state = reduce(cov, region)
            spectrum = symplectic_spectrum(state)
            if "S" in measures or "bounds" in measures:
                rec.S_nats = entanglement_entropy(spectrum)
            if "spectrum" in measures:
                rec.nonunit_mu_count = spectrum.nonunit_count(NONUNIT_TOL)
        if "E_N" in measures or "bounds" in measures:
            rec.EN_nats = log_negativity(V, region)
        if "bounds" in measures:
            rec.lower_estimate = lower_bound_estimate(state, spectrum)
            if model == "nn":
                rec.shell_sum_bound = shell_sum_bound(spec, m)
                if c > 0:
                    rec.upper_bound, rec.upper_valid = upper_bound_en(c, d, m)
    except (ArithmeticError, ValueError, MemoryError, np.linalg.LinAlgError) as exc:
        rec.error = f"{type(exc).__name__}: {exc}"
    rec.wall_ms = (time.perf_counter() - t0) * 1e3
    return rec


def run_sweep(config: SweepConfig) -> list[RunRecord]:
    """Evaluate every ``(n, m)`` pair; output order follows the config."""
    points = config.points()

    def work(nm):
        return evaluate_point(config.d, nm[0], nm[1], config.c, config.model, config.measures)

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            return list(pool.map(work, points))
    return [work(p) for p in points]


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    residual: float
    C1: float
    C2: float
    measure: str
    points: int
    min_m: int = FIT_MIN_M
    m_values: tuple[int, ...] = field(default=())

    @property
    def band_ratio(self) -> float:
        return self.C2 / self.C1

    def to_dict(self) -> dict:
        out = asdict(self)
        out["m_values"] = list(self.m_values)
        out["band_ratio"] = self.band_ratio
        return out


def fit_area_law(records: Iterable[RunRecord], measure: str = "E_N", min_m: int = FIT_MIN_M) -> FitResult:
    """Least-squares fit of ``ln(measure)`` against ``ln(m)``.

    Only records with ``m >= min_m`` enter. Band constants are the extreme
    values of ``measure / m^(d-1)`` over the fitted points.
    """
    name = {"s": "S", "en": "E_N"}.get(measure, measure)
    use = [r for r in records if r.m >= min_m and r.error is None]
    if len(use) < 3:
        raise InvalidInputError(f"area-law fit needs >= 3 points with m >= {min_m}, got {len(use)}")
    if len({(r.d, r.c, r.n, r.model) for r in use}) != 1:
        raise InvalidInputError("area-law fit needs records at a single (d, c, n, model)")
    use.sort(key=lambda r: r.m)
    m = np.array([r.m for r in use], dtype=float)
    y = np.array([r.measure(name) for r in use], dtype=float)
    if np.any(~np.isfinite(y)) or np.any(y <= 0):
        raise InvalidInputError(f"log-log fit needs positive {name} values")
    X = np.column_stack([np.log(m), np.ones_like(m)])
    coef, *_ = np.linalg.lstsq(X, np.log(y), rcond=None)
    resid = np.log(y) - X @ coef
    band = y / m ** (use[0].d - 1)
    return FitResult(
        slope=float(coef[0]),
        intercept=float(coef[1]),
        residual=float(np.sqrt(np.mean(resid**2))),
        C1=float(band.min()),
        C2=float(band.max()),
        measure=name,
        points=len(use),
        min_m=min_m,
        m_values=tuple(int(x) for x in m),
    )


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    EN: float
    S: float
    delta_EN: float | None
    delta_S: float | None


def convergence_study(d: int, m: int, c: float, n_list: Sequence[int], model: str = "nn",
                      threshold: float = 1e-3) -> tuple[list[ConvergenceRow], bool]:
    """``E_N`` and ``S`` for growing ``n``; saturated when the last delta is below ``threshold``."""
    n_list = list(n_list)
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise InvalidInputError("n values must be strictly increasing")
    if n_list and n_list[0] < m:
        raise InvalidInputError("every n must be >= m")
    rows: list[ConvergenceRow] = []
    for n in n_list:
        rec = evaluate_point(d, n, m, c, model, ("S", "E_N"))
        if rec.error:
            raise ArithmeticError(rec.error)
        prev = rows[-1] if rows else None
        rows.append(ConvergenceRow(
            n, rec.EN_nats, rec.S_nats,
            abs(rec.EN_nats - prev.EN) if prev else None,
            abs(rec.S_nats - prev.S) if prev else None,
        ))
    saturated = len(rows) >= 2 and rows[-1].delta_EN < threshold and rows[-1].delta_S < threshold
    return rows, saturated


# -- serialization -----------------------------------------------------------

def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


_INT_COLS = {"d", "n", "m", "nonunit_mu_count"}
_FLOAT_COLS = {"c", "S_nats", "EN_nats", "upper_bound", "shell_sum_bound", "lower_estimate", "wall_ms"}


def _parse_cell(col: str, text: str):
    if col == "model":
        return text
    if col == "upper_valid":
        return text == "true"
    if text == "":
        return None
    if col in _INT_COLS:
        return int(text)
    return float(text)


def to_csv(records: Sequence[RunRecord]) -> str:
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([_csv_cell(getattr(r, col)) for col in CSV_COLUMNS])
    return buf.getvalue()


def to_json(records: Sequence[RunRecord], metadata: dict | None = None) -> str:
    rows = []
    for r in records:
        row = asdict(r)
        row["violations"] = r.violations
        rows.append(row)
    doc = {"schema": SCHEMA_VERSION, "fit_min_m": FIT_MIN_M, "records": rows}
    if metadata:
        doc["metadata"] = metadata
    return json.dumps(doc, indent=1)


def emit(records: Sequence[RunRecord], path: str | Path, fmt: str = "csv",
         metadata: dict | None = None) -> Path:
    """Write records as CSV (fixed columns) or JSON (``"schema": 1``)."""
    if not records:
        raise InvalidInputError("no records to emit")
    text = to_csv(records) if fmt == "csv" else to_json(records, metadata)
    path = Path(path)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def parse_csv(text: str) -> list[RunRecord]:
    reader = csv.reader(text.splitlines())
    header = tuple(next(reader))
    if header != CSV_COLUMNS:
        raise InvalidInputError(f"unexpected CSV header {header}")
    return [RunRecord(**{col: _parse_cell(col, cell) for col, cell in zip(header, row)})
            for row in reader if row]


def parse_json(text: str) -> list[RunRecord]:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA_VERSION:
        raise InvalidInputError(f"unsupported schema {doc.get('schema')!r}")
    names = {f.name for f in fields(RunRecord)}
    return [RunRecord(**{k: v for k, v in row.items() if k in names}) for row in doc["records"]]


def load_records(path: str | Path) -> list[RunRecord]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
    if text.lstrip().startswith("{"):
        return parse_json(text)
    return parse_csv(text)


def standard_sweeps() -> dict[str, SweepConfig]:
    """The reference desk-scale sweeps."""
    return {
        "d1": SweepConfig(d=1, c=0.2, n_values=(64,), m_values=tuple(range(5, 21))),
        "d2": SweepConfig(d=2, c=0.1, n_values=(24,), m_values=(4, 6, 8, 10)),
    }

