"""Gaussian ground states of harmonic lattices and their entanglement.

For ``H = p p^T/2 + x V x^T/2`` the ground state has covariance
``gamma = V^{-1/2} (+) V^{1/2}`` (convention ``gamma_jk = 2 Re tr[R_j R_k rho]``,
vacuum = identity). All logarithms are natural.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla

from .circulant import BlockCirculant, fractional_power, materialize
from .errors import InvalidInputError, NumericalConsistencyError
from .lattice import Region

CLAMP_TOL = 1e-6
ENTROPY_ZERO_TOL = 1e-12
NEGATIVITY_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class GroundCovariance:
    gamma_x: BlockCirculant
    gamma_p: BlockCirculant

    @property
    def spec(self):
        return self.gamma_x.spec

    def purity_defect(self) -> float:
        """Largest ``|symbol_x * symbol_p - 1|``; zero for a pure state."""
        return float(np.abs(self.gamma_x.symbol * self.gamma_p.symbol - 1.0).max())


@dataclass(frozen=True)
class ReducedState:
    """Blocks of ``V^{-1/2} = [[A, B], [B^T, C]]`` and ``V^{1/2} = [[D, E], [E^T, F]]``.

    Rows are the region's interior, columns of ``B``/``E`` its exterior.
    """

    A: np.ndarray
    D: np.ndarray
    B: np.ndarray
    E: np.ndarray
    region: Region

    def coupling_product(self) -> np.ndarray:
        """``-B E^T``; equals ``A D - 1`` for a pure global state."""
        return -(self.B @ self.E.T)


@dataclass(frozen=True)
class SymplecticSpectrum:
    mu: np.ndarray

    def __len__(self):
        return len(self.mu)

    def nonunit_count(self, tol: float = 1e-8) -> int:
        return int(np.count_nonzero(self.mu > 1 + tol))


def ground_covariance(V: BlockCirculant) -> GroundCovariance:
    return GroundCovariance(fractional_power(V, -0.5), fractional_power(V, 0.5))


def reduce(gamma: GroundCovariance, region: Region) -> ReducedState:
    """Restrict the ground covariance to ``region`` (interior listed first)."""
    inner, outer = region.interior_indices, region.exterior_indices
    gx, gp = gamma.gamma_x, gamma.gamma_p
    return ReducedState(
        A=materialize(gx, inner, inner),
        D=materialize(gp, inner, inner),
        B=materialize(gx, inner, outer),
        E=materialize(gp, inner, outer),
        region=region,
    )


def _product_eigenvalues(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Eigenvalues of ``X Y`` for symmetric positive definite ``X``, symmetric ``Y``.

    With ``X = L L^T`` the product is similar to the symmetric ``L^T Y L``.
    """
    L = np.linalg.cholesky(X)
    S = L.T @ Y @ L
    return sla.eigvalsh((S + S.T) / 2)[::-1]


def symplectic_spectrum(state: ReducedState) -> SymplecticSpectrum:
    """``mu_i = sqrt(lambda_i(A D))``, non-increasing, clamped at 1 within round-off."""
    return _spectrum_from_blocks(state.A, state.D)


def _spectrum_from_blocks(A: np.ndarray, D: np.ndarray) -> SymplecticSpectrum:
    if A.size == 0:
        return SymplecticSpectrum(np.zeros(0))
    lam = _product_eigenvalues(A, D)
    low = lam.min()
    if low < (1 - CLAMP_TOL) ** 2:
        raise NumericalConsistencyError(
            f"symplectic eigenvalue {np.sqrt(max(low, 0.0))} below 1 - {CLAMP_TOL}"
        )
    mu = np.sqrt(np.maximum(lam, 1.0))
    return SymplecticSpectrum(mu)


def _entropy_term(mu: float) -> float:
    if mu - 1 < ENTROPY_ZERO_TOL:
        return 0.0
    a, b = (mu + 1) / 2, (mu - 1) / 2
    return a * np.log(a) - b * np.log(b)


def entanglement_entropy(spectrum: SymplecticSpectrum) -> float:
    """Von Neumann entropy of the reduced state, in nats."""
    mu = np.asarray(spectrum.mu, dtype=float)
    if np.any(mu < 1):
        raise InvalidInputError(f"symplectic eigenvalues must be >= 1, got min {mu.min()}")
    return float(sum(_entropy_term(x) for x in mu))


def q_eigenvalues(V: BlockCirculant, region: Region) -> np.ndarray:
    """Non-increasing eigenvalues of ``Q = V^{-1/2} P V^{1/2} P``."""
    cov = ground_covariance(V)
    idx = np.arange(V.spec.num_sites)
    gx = materialize(cov.gamma_x, idx, idx)
    gp = materialize(cov.gamma_p, idx, idx)
    p = region.signature
    try:
        return _product_eigenvalues(gx, p[:, None] * gp * p[None, :])
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            f"eigensolver failed for Q (d={V.spec.d}, n={V.spec.n}, m={region.m}, c={V.spec.c}): {exc}"
        ) from exc


def negativity_from_q(lam: np.ndarray) -> float:
    lam = np.asarray(lam, dtype=float)
    big = lam[lam > 1 + NEGATIVITY_ZERO_TOL]
    return float(np.log(big).sum())


def log_negativity(V: BlockCirculant, region: Region) -> float:
    """``E_N = sum_j ln(max(1, lambda_j(Q)))`` in nats."""
    return negativity_from_q(q_eigenvalues(V, region))


def t_matrix(gamma: GroundCovariance, region: Region) -> np.ndarray:
    """``T = [[0, E], [E^T, 0]]`` in the original site ordering."""
    N = gamma.spec.num_sites
    inner, outer = region.interior_indices, region.exterior_indices
    E = materialize(gamma.gamma_p, inner, outer)
    T = np.zeros((N, N))
    T[np.ix_(inner, outer)] = E
    T[np.ix_(outer, inner)] = E.T
    return T


def region_entropy(V: BlockCirculant, region: Region) -> float:
    """Shortcut: entropy of ``region`` in the ground state of ``V``."""
    state = reduce(ground_covariance(V), region)
    return entanglement_entropy(symplectic_spectrum(state))


def complement_entropy(V: BlockCirculant, region: Region) -> float:
    """Entropy of the exterior of ``region`` (for purity checks)."""
    cov = ground_covariance(V)
    outer = region.exterior_indices
    A = materialize(cov.gamma_x, outer, outer)
    D = materialize(cov.gamma_p, outer, outer)
    return entanglement_entropy(_spectrum_from_blocks(A, D))
