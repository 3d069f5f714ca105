"""Block-circulant matrices on the periodic lattice.

A translation-invariant operator on ``n**d`` sites is determined by its
stencil (coefficient per displacement). Its eigenvalues, the *symbol*, are
the cosine transform of the stencil, indexed by momentum ``k'``; any power
of the operator is the block circulant with the powered symbol. Element
``(k, l)`` depends only on the displacement ``k - l`` mod ``n``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import mpmath
import numpy as np

from .errors import ModelInvalidError, ResourceLimitError, SingularMatrixError
from .lattice import LatticeSpec, _check_coord, coords_array

DEFAULT_ELEMENT_BUDGET = 2**26
ALLOWED_POWERS = (0.5, -0.5, -1.0, 1.0)

Stencil = Mapping[tuple[int, ...], float]


def _normalize(n: int, delta) -> tuple[int, ...]:
    # representative in (-n/2, n/2]
    return tuple(int((dj + (n - 1) // 2) % n - (n - 1) // 2) for dj in delta)


def nn_stencil(d: int, n: int, c: float, diagonal: float = 1.0) -> dict[tuple[int, ...], float]:
    """Stencil ``{0: diagonal, +-e_j: -c}``; repeated displacements (n = 2) add up."""
    stencil: dict[tuple[int, ...], float] = {}
    zero = (0,) * d
    stencil[zero] = float(diagonal)
    for j in range(d):
        for sign in (1, -1):
            delta = [0] * d
            delta[j] = sign
            key = _normalize(n, delta)
            stencil[key] = stencil.get(key, 0.0) - c
    return stencil


def convolve_stencils(n: int, a: Stencil, b: Stencil) -> dict[tuple[int, ...], float]:
    """Stencil of the product of two circulants (periodic convolution)."""
    out: dict[tuple[int, ...], float] = {}
    for da, va in a.items():
        for db, vb in b.items():
            key = _normalize(n, [x + y for x, y in zip(da, db)])
            out[key] = out.get(key, 0.0) + va * vb
    return {k: v for k, v in out.items() if v != 0.0}


def symbol_from_stencil(d: int, n: int, stencil: Stencil) -> np.ndarray:
    """Real cosine transform ``sum_delta stencil(delta) cos(2 pi k'.delta / n)``.

    Returns an array of shape ``(n,)*d`` indexed by the momentum components.
    """
    kp = np.indices((n,) * d)
    symbol = np.zeros((n,) * d)
    for delta, value in stencil.items():
        # integer phase mod n keeps the argument exact for large momenta
        phase = np.zeros((n,) * d, dtype=np.int64)
        for j, dj in enumerate(delta):
            phase += kp[j] * dj
        symbol += value * np.cos(2 * np.pi * np.mod(phase, n) / n)
    return symbol


@dataclass(frozen=True, eq=False)
class BlockCirculant:
    """Immutable translation-invariant operator stored through its symbol.

    ``stencil`` is kept when the support is finite (potentials, generators)
    and is ``None`` for derived powers.
    """

    spec: LatticeSpec
    symbol: np.ndarray
    stencil: Stencil | None = None
    power: float = 1.0
    base: "BlockCirculant | None" = field(default=None, repr=False)
    element_budget: int = field(default=DEFAULT_ELEMENT_BUDGET, repr=False)

    def __post_init__(self):
        sym = np.array(self.symbol, dtype=float)
        if sym.shape != self.spec.shape:
            raise ValueError(f"symbol shape {sym.shape} does not match lattice {self.spec.shape}")
        sym.setflags(write=False)
        object.__setattr__(self, "symbol", sym)

    @cached_property
    def kernel(self) -> np.ndarray:
        """Element table indexed by displacement ``(k - l) mod n``.

        One inverse transform fills every displacement; reads afterwards are
        lookups, so concurrent first access just repeats an identical fill.
        """
        table = np.fft.ifftn(self.symbol).real.copy()
        table.setflags(write=False)
        return table

    @property
    def min_symbol(self) -> float:
        return float(self.symbol.min())

    @property
    def max_eigenvalue(self) -> float:
        return float(self.symbol.max())

    def spectrum(self, descending: bool = True) -> np.ndarray:
        vals = np.sort(self.symbol, axis=None)
        return vals[::-1] if descending else vals


def build_potential(spec: LatticeSpec) -> BlockCirculant:
    """Potential matrix ``V`` of the model described by ``spec``.

    ``"nn"`` gives ``V_1 = circ(1, -c, 0, ..., 0, -c)`` and its recursive
    block analogue; ``"squared"`` gives ``V = W^2`` for that same ``W``.
    """
    w = nn_stencil(spec.d, spec.n, spec.c)
    stencil = w if spec.model == "nn" else convolve_stencils(spec.n, w, w)
    symbol = symbol_from_stencil(spec.d, spec.n, stencil)
    if spec.model == "squared":
        w_symbol = symbol_from_stencil(spec.d, spec.n, w)
        if w_symbol.min() <= 0:
            raise ModelInvalidError("generator W is not positive definite")
    if symbol.min() <= 0:
        raise ModelInvalidError(f"potential is not positive definite (min eigenvalue {symbol.min()})")
    return BlockCirculant(spec, symbol, stencil=stencil)


def fractional_power(M: BlockCirculant, p: float) -> BlockCirculant:
    """``M**p`` for ``p`` in {1/2, -1/2, -1, 1} through the symbol."""
    p = float(p)
    if p not in ALLOWED_POWERS:
        raise ValueError(f"power must be one of {ALLOWED_POWERS}, got {p}")
    if p == 1.0:
        return M
    if M.min_symbol <= 0:
        raise SingularMatrixError(
            f"power {p} of an operator with non-positive eigenvalue {M.min_symbol}"
        )
    return BlockCirculant(
        M.spec,
        M.symbol**p,
        stencil=None,
        power=M.power * p,
        base=M.base if M.base is not None else M,
        element_budget=M.element_budget,
    )


def precise_kernel(M: BlockCirculant, dps: int = 50) -> np.ndarray:
    """Displacement table recomputed at ``dps`` decimal digits.

    Far off-diagonal elements fall below double-precision round-off of the
    transform; this rebuilds the symbol from the finite stencil with mpmath
    and applies the inverse cosine transform axis by axis. Returns floats.
    """
    root = M.base if M.base is not None else M
    if root.stencil is None:
        raise ValueError("precise evaluation needs an operator with a finite stencil")
    n, d = M.spec.n, M.spec.d
    with mpmath.workdps(dps):
        cos_table = [mpmath.cos(2 * mpmath.pi * j / n) for j in range(n)]
        kp = np.indices((n,) * d).reshape(d, -1).T
        flat = []
        for q in kp:
            val = mpmath.mpf(0)
            for delta, coeff in root.stencil.items():
                phase = int(np.dot(q, delta)) % n
                val += mpmath.mpf(coeff) * cos_table[phase]
            flat.append(val**M.power if M.power != 1.0 else val)
        table = np.array(flat, dtype=object).reshape((n,) * d)
        C = np.array([[cos_table[(a * b) % n] for b in range(n)] for a in range(n)], dtype=object)
        for axis in range(d):
            table = np.moveaxis(np.tensordot(C, table, axes=([1], [axis])), 0, axis)
        scale = mpmath.mpf(n) ** d
        out = np.array([float(x / scale) for x in table.reshape(-1)]).reshape((n,) * d)
    return out


def element(M: BlockCirculant, k, l) -> float:
    _check_coord(M.spec, k)
    _check_coord(M.spec, l)
    delta = tuple((a - b) % M.spec.n for a, b in zip(k, l))
    return float(M.kernel[delta])


def materialize(M: BlockCirculant, rows, cols) -> np.ndarray:
    """Dense block ``M[rows][:, cols]`` for linear index lists."""
    rows = np.asarray(rows, dtype=np.int64).reshape(-1)
    cols = np.asarray(cols, dtype=np.int64).reshape(-1)
    if rows.size * cols.size > M.element_budget:
        raise ResourceLimitError(
            f"block {rows.size}x{cols.size} exceeds element budget {M.element_budget}"
        )
    n, d = M.spec.n, M.spec.d
    rc = coords_array(M.spec, rows)
    cc = coords_array(M.spec, cols)
    delta = np.mod(rc[:, None, :] - cc[None, :, :], n)
    flat = np.zeros(delta.shape[:2], dtype=np.int64)
    for j in range(d):
        flat = flat * n + delta[..., j]
    # kernel is C-ordered over (delta_0, ..., delta_{d-1})
    return M.kernel.reshape(-1)[flat]


def dense(M: BlockCirculant) -> np.ndarray:
    idx = np.arange(M.spec.num_sites)
    return materialize(M, idx, idx)


def dense_power(matrix: np.ndarray, p: float) -> np.ndarray:
    """Reference ``matrix**p`` by symmetric eigendecomposition (no symbol use)."""
    w, U = np.linalg.eigh(matrix)
    if p != int(p) or p < 0:
        if w.min() <= 0:
            raise SingularMatrixError(f"matrix has non-positive eigenvalue {w.min()}")
    return (U * w**p) @ U.T


def dense_from_stencil(spec: LatticeSpec, stencil: Stencil) -> np.ndarray:
    """Assemble the full matrix entry by entry from the stencil (no transforms)."""
    N = spec.num_sites
    coords = coords_array(spec, np.arange(N))
    powers = spec.n ** np.arange(spec.d, dtype=np.int64)
    out = np.zeros((N, N))
    for delta, value in stencil.items():
        target = np.mod(coords - np.asarray(delta), spec.n) @ powers
        out[np.arange(N), target] += value
    return out
