"""Squared interactions ``V = W^2`` with a banded circulant generator ``W``.

The ground-state covariance is then exactly ``W^{-1} (+) W``, and since
``W`` couples only neighbouring sites, the block ``E`` vanishes except on
the region's outermost layer: only boundary oscillators stay entangled.

Two generators are provided. ``"unit"`` is ``W = circ(1, -c, 0, ..., 0, -c)``
(so ``V_1 = circ(1+2c^2, -2c, c^2, 0, ..., 0, c^2, -2c)``); ``"laplacian"``
is ``W = circ(1+2c, -c, 0, ..., 0, -c)`` (diagonal ``1 + 2cd`` in ``d``
dimensions), a unit mass plus a discrete Laplacian.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circulant import (
    BlockCirculant,
    convolve_stencils,
    fractional_power,
    nn_stencil,
    symbol_from_stencil,
)
from .errors import InvalidInputError, ModelInvalidError
from .gaussian import (
    GroundCovariance,
    q_eigenvalues,
    reduce,
    symplectic_spectrum,
)
from .lattice import LatticeSpec, Region, shells

GENERATORS = ("unit", "laplacian")
NONUNIT_TOL = 1e-8


@dataclass(frozen=True)
class SquaredModelSpec:
    d: int
    n: int
    c: float
    generator: str = "unit"

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise InvalidInputError(f"generator must be one of {GENERATORS}, got {self.generator!r}")
        if not 0 <= 2 * self.c * self.d < 1:
            raise ModelInvalidError(f"generator W needs 0 <= 2cd < 1, got {2 * self.c * self.d}")

    @property
    def diagonal(self) -> float:
        return 1.0 if self.generator == "unit" else 1.0 + 2 * self.c * self.d

    def lattice(self) -> LatticeSpec:
        return LatticeSpec(self.d, self.n, self.c, "squared")


def build_squared(spec: SquaredModelSpec) -> tuple[BlockCirculant, BlockCirculant]:
    """Generator ``W`` and potential ``V = W^2``."""
    lat = spec.lattice()
    w = nn_stencil(spec.d, spec.n, spec.c, diagonal=spec.diagonal)
    w_symbol = symbol_from_stencil(spec.d, spec.n, w)
    if w_symbol.min() <= 0:
        raise ModelInvalidError(f"generator W is not positive definite (min {w_symbol.min()})")
    v = convolve_stencils(spec.n, w, w)
    W = BlockCirculant(lat, w_symbol, stencil=w)
    V = BlockCirculant(lat, symbol_from_stencil(spec.d, spec.n, v), stencil=v)
    return W, V


def squared_ground_covariance(W: BlockCirculant) -> GroundCovariance:
    return GroundCovariance(fractional_power(W, -1.0), W)


def closed_form_mu(c: float) -> float:
    """Large-region limit ``(1 - c^2/q^2)^{-1/2}``, ``q = c + 1/2 + sqrt(c + 1/4)``.

    Exact for the ``"laplacian"`` generator in ``d = 1`` (see
    :func:`boundary_mu_limit`).
    """
    if not 0 <= c < 0.5:
        raise InvalidInputError(f"closed form needs 0 <= c < 1/2, got {c}")
    q = c + 0.5 + math.sqrt(c + 0.25)
    return (1 - c * c / (q * q)) ** -0.5


def boundary_mu_limit(c: float, generator: str = "unit") -> float:
    """Limit of the two non-unit symplectic eigenvalues of a 1D interval.

    For ``W = a - c (S + S^T)`` the bulk Green's function decays like
    ``r^|s|`` with ``c r^2 - a r + c = 0``; each boundary contributes one
    eigenvalue ``mu = (1 - r^2)^{-1/2}`` as the interval and its complement
    grow.
    """
    if generator not in GENERATORS:
        raise InvalidInputError(f"generator must be one of {GENERATORS}, got {generator!r}")
    if c == 0:
        return 1.0
    a = 1.0 if generator == "unit" else 1.0 + 2 * c
    if a <= 2 * c:
        raise InvalidInputError(f"generator not positive definite for c={c}")
    r = (a - math.sqrt(a * a - 4 * c * c)) / (2 * c)
    return (1 - r * r) ** -0.5


@dataclass(frozen=True)
class DisentangleReport:
    nonunit_mu_count: int
    nonunit_q_count: int
    boundary_sites: int
    lambda1_q: float
    lambda1_q_bound: float | None
    lambda1_q_ok: bool | None
    counts_by_m: dict
    counts_constant: bool
    mu: np.ndarray


def _counts(spec: SquaredModelSpec, n: int, m: int):
    sub = SquaredModelSpec(spec.d, n, spec.c, spec.generator)
    W, V = build_squared(sub)
    region = Region(sub.lattice(), m)
    spectrum = symplectic_spectrum(reduce(squared_ground_covariance(W), region))
    lam = q_eigenvalues(V, region)
    return spectrum, lam


def disentangle_report(spec: SquaredModelSpec, region: Region,
                       scale_factors: Sequence[int] = (2, 4)) -> DisentangleReport:
    """Boundary-locality diagnostics for the squared model.

    ``scale_factors`` enlarge ``m`` and ``n`` together (fixed ``n/m``) to see
    whether the non-unit eigenvalue counts change with region size.
    """
    m, n = region.m, spec.n
    spectrum, lam = _counts(spec, n, m)
    mu_count = spectrum.nonunit_count(NONUNIT_TOL)
    q_count = int(np.count_nonzero(lam > 1 + NONUNIT_TOL))
    counts = {m: (mu_count, q_count)}
    for f in scale_factors:
        s_f, lam_f = _counts(spec, n * f, m * f)
        counts[m * f] = (s_f.nonunit_count(NONUNIT_TOL), int(np.count_nonzero(lam_f > 1 + NONUNIT_TOL)))
    lam1 = float(lam[0]) if lam.size else 1.0
    if spec.d == 1 and spec.c < 0.5:
        bound = 2 / (1 - 2 * spec.c) - 1
        ok = lam1 <= bound * (1 + 1e-9)
    else:
        bound, ok = None, None
    boundary = shells(region)[0][1]
    return DisentangleReport(
        nonunit_mu_count=mu_count,
        nonunit_q_count=q_count,
        boundary_sites=boundary,
        lambda1_q=lam1,
        lambda1_q_bound=bound,
        lambda1_q_ok=ok,
        counts_by_m=counts,
        counts_constant=len({v[0] for v in counts.values()}) == 1,
        mu=spectrum.mu,
    )
