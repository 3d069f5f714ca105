"""Analytical entanglement bounds for the nearest-neighbour lattice.

Upper side: exponential decay of ``V^{+-1/2}`` off the diagonal, summed
shell by shell over the region boundary, gives a bound on ``E_N`` linear
in ``m^{d-1}``. Lower side: a trace inequality on ``-B E^T`` bounds ``S``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circulant import BlockCirculant, precise_kernel
from .errors import InvalidInputError, ModelInvalidError, NumericalConsistencyError
from .gaussian import ReducedState, SymplecticSpectrum
from .lattice import LatticeSpec, displacement_distance

REL_TOL = 1e-9
SERIES_TAIL_TOL = 1e-15


@dataclass(frozen=True)
class BoundReport:
    bound_value: float
    measured_value: float
    satisfied: bool
    margin: float
    valid: bool = True
    reason: str = ""
    kind: str = "upper"
    details: dict | None = None


def check_bound(measured: float, bound: float, kind: str = "upper",
                valid: bool = True, reason: str = "", rel_tol: float = REL_TOL) -> BoundReport:
    """Compare ``measured`` with ``bound``; ``margin`` is positive when satisfied."""
    slack = rel_tol * max(abs(bound), abs(measured))
    margin = bound - measured if kind == "upper" else measured - bound
    return BoundReport(bound, measured, bool(margin >= -slack), margin, valid, reason, kind)


def upper_bound_validity_threshold(c: float, d: int) -> float:
    return 4 * d / abs(math.log(2 * c * d))


def upper_bound_en(c: float, d: int, m: int) -> tuple[float, bool]:
    """``16d / (sqrt(1-y) (1-y)^2 ln(1-y)^2) * m^(d-1)`` with ``y = 2cd``.

    The second item tells whether ``m > 4d/|ln y|``, where the bound is proven.
    """
    y = 2 * c * d
    if not 0 < y < 1:
        raise ModelInvalidError(f"upper bound needs 0 < 2cd < 1, got {y}")
    const = 16 * d / (math.sqrt(1 - y) * (1 - y) ** 2 * math.log(1 - y) ** 2)
    return const * m ** (d - 1), m > upper_bound_validity_threshold(c, d)


def decay_envelope(c: float, d: int, s: int, kind: str = "upper") -> float:
    """Envelope for ``|V^{+-1/2}_{kl}|`` at lattice distance ``s >= 1``.

    ``upper``: ``y^s/(1-y)``; ``lower``: ``(c/2)^s / (2 (1-c^2))``.
    """
    if s < 1:
        raise InvalidInputError(f"distance must be >= 1, got {s}")
    if kind == "upper":
        y = 2 * c * d
        return y**s / (1 - y)
    if kind == "lower":
        return 0.5 * (c / 2) ** s / (1 - c * c)
    raise InvalidInputError(f"kind must be 'upper' or 'lower', got {kind!r}")


def _envelope_array(c, d, s, kind):
    if kind == "upper":
        y = 2 * c * d
        return y**s / (1 - y)
    return 0.5 * (c / 2) ** s.astype(float) / (1 - c * c)


def verify_decay(M: BlockCirculant, power: float | None = None, rel_tol: float = REL_TOL,
                 precise: bool | None = None) -> BoundReport:
    """Check every off-diagonal element of ``M = V^{+-1/2}`` against the envelopes.

    Sign structure: ``V^{-1/2}`` off-diagonals ``>= 0``, ``V^{1/2}`` ``<= 0``.
    The report's ``satisfied`` covers the upper envelope and the signs;
    lower-envelope results are in ``details`` (``lower_ok``) so they can be
    judged separately for ``d > 1``.

    ``precise=None`` switches to :func:`precise_kernel` when the smallest
    lower envelope is below the round-off level of the double transform.
    """
    spec = M.spec
    if spec.model != "nn":
        raise InvalidInputError("decay envelopes apply to the nearest-neighbour model")
    power = M.power if power is None else power
    if power not in (0.5, -0.5):
        raise InvalidInputError(f"power must be +-1/2, got {power}")
    n, d, c = spec.n, spec.d, spec.c
    delta = np.indices(spec.shape).reshape(d, -1).T
    s = displacement_distance(n, delta)
    lower_all = _envelope_array(c, d, s[s > 0], "lower")
    if precise is None:
        precise = bool(lower_all.size) and lower_all.min() < 1e-12
    vals = (precise_kernel(M) if precise else M.kernel).reshape(-1)
    off = s > 0
    s, vals, delta = s[off], vals[off], delta[off]
    mag = np.abs(vals)
    sign_tol = 0.0 if precise else 1e-14 * max(1.0, float(np.abs(M.kernel).max()))
    sign_ok = vals >= -sign_tol if power < 0 else vals <= sign_tol
    upper = _envelope_array(c, d, s, "upper")
    lower = _envelope_array(c, d, s, "lower")
    upper_ok = mag <= upper * (1 + rel_tol) + 1e-300
    lower_ok = mag >= lower * (1 - rel_tol)
    upper_margin = upper - mag
    ok = sign_ok & upper_ok
    details = {
        "power": power,
        "precise": precise,
        "checked": int(off.sum()),
        "sign_violations": int((~sign_ok).sum()),
        "upper_violations": int((~upper_ok).sum()),
        "lower_violations": int((~lower_ok).sum()),
        "lower_ok": bool(lower_ok.all()),
        "worst_lower_ratio": float((mag / lower).min()) if lower.size and lower.min() > 0 else math.inf,
        "first_violation": None,
        "first_lower_violation": None,
    }
    if not ok.all():
        details["first_violation"] = tuple(int(x) for x in delta[np.flatnonzero(~ok)[0]])
    if not lower_ok.all():
        details["first_lower_violation"] = tuple(int(x) for x in delta[np.flatnonzero(~lower_ok)[0]])
    worst = int(np.argmin(upper_margin)) if upper_margin.size else 0
    return BoundReport(
        bound_value=float(upper[worst]) if upper.size else 0.0,
        measured_value=float(mag[worst]) if mag.size else 0.0,
        satisfied=bool(ok.all()),
        margin=float(upper_margin.min()) if upper_margin.size else math.inf,
        kind="upper",
        details=details,
    )


def _polynomial_geometric_sum(d: int, m: int, y: float) -> float:
    """``sum_{s>=1} ((m+2s)^d - m^d) y^s`` truncated once the geometric tail is negligible."""
    total = 0.0
    s = 1
    term = ((m + 2) ** d - m**d) * y
    while True:
        total += term
        nxt = ((m + 2 * (s + 1)) ** d - m**d) * y ** (s + 1)
        ratio = nxt / term if term > 0 else 0.0
        # term ratios fall towards y, so the remaining tail is about nxt / (1 - ratio)
        if ratio < 1 and nxt / (1 - ratio) < SERIES_TAIL_TOL * total:
            return total + nxt
        term = nxt
        s += 1
        if s > 100_000:
            raise NumericalConsistencyError("shell series failed to converge")


def shell_sum_bound(spec: LatticeSpec, m: int) -> float:
    """Intermediate bound ``2/sqrt(1-y) sum_s ((m+2s)^d-m^d) y^s/(1-y) sum_{k<=m/2} y^k``."""
    if not 1 <= m <= spec.n:
        raise InvalidInputError(f"region side {m} outside [1, {spec.n}]")
    y = 2 * spec.c * spec.d
    if y == 0:
        return 0.0
    inner = sum(y**k for k in range(m // 2 + 1))
    return 2 / math.sqrt(1 - y) * _polynomial_geometric_sum(spec.d, m, y) / (1 - y) * inner


@dataclass(frozen=True)
class LowerBoundParts:
    estimate: float
    beta: float
    log_factor: float
    trace: float
    top_eigenvalue: float


def lower_bound_parts(state: ReducedState, spectrum: SymplecticSpectrum) -> LowerBoundParts:
    """Factors of ``beta(lambda_1) * ln(mu_1)/(mu_1 - 1) * tr(-B E^T)``."""
    X = state.coupling_product()
    if X.size == 0:
        return LowerBoundParts(0.0, 0.5, 1.0, 0.0, 0.0)
    trace = float(np.trace(X))
    lam1 = float(np.linalg.eigvals(X).real.max())
    if lam1 < -1e-8:
        raise NumericalConsistencyError(f"top eigenvalue of -B E^T is {lam1} < 0")
    lam1 = max(lam1, 0.0)
    beta = 0.5 if lam1 < 1e-12 else (math.sqrt(1 + lam1) - 1) / lam1
    mu1 = float(spectrum.mu[0]) if len(spectrum) else 1.0
    log_factor = 1.0 if mu1 - 1 < 1e-12 else math.log(mu1) / (mu1 - 1)
    return LowerBoundParts(beta * log_factor * trace, beta, log_factor, trace, lam1)


def lower_bound_estimate(state: ReducedState, spectrum: SymplecticSpectrum) -> float:
    """Lower bound on the entanglement entropy from the coupling blocks."""
    return lower_bound_parts(state, spectrum).estimate
