"""Periodic hypercubic lattice geometry.

Sites carry coordinates ``k = (k_0, ..., k_{d-1})`` with ``0 <= k_j < n`` and
linear index ``sum_j k_j n**j`` (``k_0`` varies fastest).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import InvalidInputError, ModelInvalidError

MODELS = ("nn", "squared")
MAX_SITES = 2**31 - 1


@dataclass(frozen=True)
class LatticeSpec:
    """A ``d``-dimensional periodic lattice of ``n**d`` oscillators.

    ``model`` is ``"nn"`` (nearest-neighbour potential ``V``) or ``"squared"``
    (``V = W**2`` with a nearest-neighbour generator ``W``). Both require
    ``0 <= 2*c*d < 1``.
    """

    d: int
    n: int
    c: float
    model: str = "nn"

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise InvalidInputError(f"dimension must be an integer >= 1, got {self.d!r}")
        if int(self.n) != self.n or self.n < 2:
            raise InvalidInputError(f"side length must be an integer >= 2, got {self.n!r}")
        if self.model not in MODELS:
            raise InvalidInputError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.n**self.d > MAX_SITES:
            raise InvalidInputError(f"n**d = {self.n ** self.d} sites exceeds {MAX_SITES}")
        if not np.isfinite(self.c) or self.c < 0 or 2 * self.c * self.d >= 1:
            raise ModelInvalidError(
                f"coupling requires 0 <= 2cd < 1, got 2cd = {2 * self.c * self.d!r}"
            )

    @property
    def y(self) -> float:
        return 2 * self.c * self.d

    @property
    def num_sites(self) -> int:
        return self.n**self.d

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.d


def index_of(spec: LatticeSpec, k: Sequence[int]) -> int:
    _check_coord(spec, k)
    return int(sum(int(kj) * spec.n**j for j, kj in enumerate(k)))


def coord_of(spec: LatticeSpec, index: int) -> tuple[int, ...]:
    if not 0 <= index < spec.num_sites:
        raise InvalidInputError(f"index {index} outside [0, {spec.num_sites})")
    return tuple((int(index) // spec.n**j) % spec.n for j in range(spec.d))


def coords_array(spec: LatticeSpec, indices) -> np.ndarray:
    """Coordinates of many linear indices, shape ``(len(indices), d)``."""
    idx = np.asarray(indices, dtype=np.int64)
    powers = spec.n ** np.arange(spec.d, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % spec.n


def _check_coord(spec: LatticeSpec, k: Sequence[int]) -> None:
    if len(k) != spec.d:
        raise InvalidInputError(f"coordinate {tuple(k)} has wrong dimension for d={spec.d}")
    for kj in k:
        if int(kj) != kj or not 0 <= kj < spec.n:
            raise InvalidInputError(f"coordinate {tuple(k)} outside [0, {spec.n})^{spec.d}")


def lattice_distance(spec: LatticeSpec, k: Sequence[int], l: Sequence[int]) -> int:
    """Minimal number of lattice steps from ``k`` to ``l`` with periodic wrap."""
    _check_coord(spec, k)
    _check_coord(spec, l)
    total = 0
    for kj, lj in zip(k, l):
        diff = abs(int(kj) - int(lj))
        total += min(diff, spec.n - diff)
    return total


def displacement_distance(n: int, delta: np.ndarray) -> np.ndarray:
    """Vectorised periodic step count for integer displacements (last axis = d)."""
    delta = np.mod(delta, n)
    return np.minimum(delta, n - delta).sum(axis=-1)


@dataclass(frozen=True)
class Region:
    """Hypercube of side ``m`` with corner ``offset``; wraps periodically.

    Interior indices are listed in local row-major order (first local axis
    fastest), so the blocks extracted for a region do not depend on where
    it sits. Exterior indices are ascending.
    """

    spec: LatticeSpec
    m: int
    offset: tuple[int, ...] | None = field(default=None)

    def __post_init__(self):
        if int(self.m) != self.m or not 1 <= self.m <= self.spec.n:
            raise InvalidInputError(f"region side must lie in [1, {self.spec.n}], got {self.m!r}")
        if self.offset is None:
            object.__setattr__(self, "offset", (0,) * self.spec.d)
        else:
            object.__setattr__(self, "offset", tuple(int(o) for o in self.offset))
        _check_coord(self.spec, self.offset)

    @cached_property
    def local_coords(self) -> np.ndarray:
        """Local coordinates in ``[0, m)^d`` of the interior, in index order."""
        grids = np.indices((self.m,) * self.spec.d).reshape(self.spec.d, -1)
        # np.indices varies the last axis fastest; flip so axis 0 is fastest
        return grids[::-1].T.copy()

    @cached_property
    def interior_indices(self) -> np.ndarray:
        coords = (self.local_coords + np.asarray(self.offset)) % self.spec.n
        powers = self.spec.n ** np.arange(self.spec.d, dtype=np.int64)
        return coords @ powers

    @cached_property
    def exterior_indices(self) -> np.ndarray:
        mask = np.ones(self.spec.num_sites, dtype=bool)
        mask[self.interior_indices] = False
        return np.flatnonzero(mask)

    @cached_property
    def signature(self) -> np.ndarray:
        """Partial-transpose signature: -1 on the interior, +1 outside."""
        p = np.ones(self.spec.num_sites)
        p[self.interior_indices] = -1.0
        return p

    @property
    def size(self) -> int:
        return self.m**self.spec.d


def shell_depths(region: Region) -> np.ndarray:
    """Steps from each interior site (index order) to the hypercube surface."""
    u = region.local_coords
    return np.minimum(u, region.m - 1 - u).min(axis=1)


def shells(region: Region, with_members: bool = False):
    """Boundary shells ``L_r`` of the region.

    Returns ``[(r, |L_r|), ...]`` for ``r = 0, 1, ...``; with
    ``with_members=True`` also a dict mapping ``r`` to the linear indices
    in that shell.
    """
    depth = shell_depths(region)
    sizes = np.bincount(depth)
    out = [(r, int(s)) for r, s in enumerate(sizes)]
    if with_members:
        members = {r: region.interior_indices[depth == r] for r, _ in out}
        return out, members
    return out


def shell_size_formula(d: int, m: int, r: int) -> int:
    """``(m-2r)^d - (m-2r-2)^d`` with negative bases truncated to zero."""
    outer = max(m - 2 * r, 0)
    inner = max(m - 2 * r - 2, 0)
    return outer**d - inner**d


def reachable_exterior_bound(spec: LatticeSpec, m: int, s: int) -> int:
    """Count bound ``(m+2s)^d - m^d`` on exterior sites within ``s`` steps of the surface."""
    if s < 1:
        raise InvalidInputError(f"step count must be >= 1, got {s}")
    return (m + 2 * s) ** spec.d - m**spec.d
