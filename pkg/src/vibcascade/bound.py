"""Vibrational eigenpairs of single and spin-orbit-coupled channels.

Single-channel levels come from diagonalizing ``T + diag(V)`` on a grid;
the two-channel solve diagonalizes the 2N x 2N real symmetric matrix

    [[ T + V_A,   -xi(R) ],
     [ -xi(R),    T + V_b - delta(R) ]]

whose eigenvectors carry a (singlet, triplet) = (A, b) two-component
wavefunction.  Quadrature weights are absorbed into the stored amplitudes,
so every wavefunction vector has unit Euclidean norm and overlaps are
plain dot products.

Conventions: levels are energy ordered; ``v`` is the interior node count;
the global sign makes the first non-negligible lobe positive; degenerate
pairs (within 1e-12 hartree) are ordered by descending singlet fraction.
Solves are independent and may run concurrently; results are immutable.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh

from .errors import (
    BoundaryContaminationError,
    BoundaryContaminationWarning,
    GridMismatchError,
    ValidationError,
)
from .grids import MappedGrid, kinetic_matrix

LOBE_TOLERANCE = 1e-6
DEGENERACY_TOLERANCE = 1e-12
BOUNDARY_MARGIN = 5


@dataclass(frozen=True)
class VibLevel:
    """Single-channel vibrational eigenpair on a grid."""

    v: int
    energy: float
    psi: np.ndarray
    manifold: str
    grid: MappedGrid = field(repr=False, compare=False)

    def __post_init__(self):
        psi = np.ascontiguousarray(self.psi, dtype=float)
        psi.flags.writeable = False
        object.__setattr__(self, "psi", psi)

    def amplitude(self) -> np.ndarray:
        """Physical wavefunction values psi(R_k) (weights divided out)."""
        return self.psi / np.sqrt(self.grid.weights)


@dataclass(frozen=True)
class CoupledLevel:
    """Two-channel eigenpair; ``f_a`` is the singlet-channel fraction."""

    v: int
    energy: float
    psi_a: np.ndarray
    psi_b: np.ndarray
    f_a: float
    manifold: str
    grid: MappedGrid = field(repr=False, compare=False)

    def __post_init__(self):
        for name in ("psi_a", "psi_b"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def f_b(self) -> float:
        return 1.0 - self.f_a


def _fix_sign(vec: np.ndarray) -> np.ndarray:
    threshold = LOBE_TOLERANCE * np.abs(vec).max()
    first = np.argmax(np.abs(vec) > threshold)
    return -vec if vec[first] < 0.0 else vec


def _count_nodes(vec: np.ndarray) -> int:
    threshold = LOBE_TOLERANCE * np.abs(vec).max()
    body = vec[np.abs(vec) > threshold]
    return int(np.sum(body[:-1] * body[1:] < 0.0))


def _check_turning_points(v_grid: np.ndarray, energy: float, label: str,
                          strict: bool) -> None:
    allowed = np.flatnonzero(v_grid <= energy)
    if allowed.size == 0:
        return
    n = v_grid.size
    if allowed[0] < BOUNDARY_MARGIN or allowed[-1] > n - 1 - BOUNDARY_MARGIN:
        message = (f"{label}: turning point within {BOUNDARY_MARGIN} grid "
                   f"points of the box edge at E={energy:.6e} hartree")
        if strict:
            raise BoundaryContaminationError(message)
        warnings.warn(message, BoundaryContaminationWarning, stacklevel=3)


def _effective_ceiling(e_ceiling: float, potential) -> float:
    asymptote = getattr(potential, "asymptote", np.inf)
    return min(e_ceiling, asymptote)


def solve_channel(potential, grid: MappedGrid, mu: float, e_ceiling: float,
                  manifold: str = "", strict: bool = False,
                  kinetic: np.ndarray | None = None) -> list[VibLevel]:
    """All bound eigenpairs below ``e_ceiling`` (and below the asymptote).

    ``potential`` is a RadialCurve or a plain callable V(R) in hartree.
    Returns an empty list when nothing is bound.
    """
    v_grid = np.asarray(potential(grid.points), dtype=float)
    t = kinetic_matrix(grid, mu) if kinetic is None else kinetic
    ceiling = _effective_ceiling(e_ceiling, potential)
    energies, vectors = eigh(t + np.diag(v_grid),
                             subset_by_value=(-np.inf, ceiling))
    levels = []
    for idx in range(energies.size):
        psi = _fix_sign(vectors[:, idx])
        _check_turning_points(v_grid, float(energies[idx]),
                              f"{manifold or 'channel'} level {idx}", strict)
        levels.append(VibLevel(v=_count_nodes(psi), energy=float(energies[idx]),
                               psi=psi, manifold=manifold, grid=grid))
    return levels


def solve_coupled(v_singlet, v_triplet, coupling, grid: MappedGrid, mu: float,
                  e_ceiling: float, diagonal_correction=None,
                  manifold: str = "0u+", strict: bool = False,
                  kinetic: np.ndarray | None = None) -> list[CoupledLevel]:
    """Eigenpairs of the spin-orbit-coupled two-channel system.

    ``v_singlet``/``v_triplet`` are the diabatic potentials, ``coupling``
    the off-diagonal xi(R) (entering with a minus sign; observables do not
    depend on that sign), ``diagonal_correction`` an optional curve
    subtracted from the triplet diagonal.
    """
    n = grid.n
    t = kinetic_matrix(grid, mu) if kinetic is None else kinetic
    va = np.asarray(v_singlet(grid.points), dtype=float)
    vb = np.asarray(v_triplet(grid.points), dtype=float)
    if diagonal_correction is not None:
        vb = vb - np.asarray(diagonal_correction(grid.points), dtype=float)
    xi = np.asarray(coupling(grid.points), dtype=float)
    if np.isscalar(xi) or xi.ndim == 0:
        xi = np.full(n, float(xi))

    h = np.zeros((2 * n, 2 * n))
    h[:n, :n] = t + np.diag(va)
    h[n:, n:] = t + np.diag(vb)
    h[:n, n:] = np.diag(-xi)
    h[n:, :n] = np.diag(-xi)

    ceiling = min(_effective_ceiling(e_ceiling, v_singlet),
                  _effective_ceiling(e_ceiling, v_triplet))
    energies, vectors = eigh(h, subset_by_value=(-np.inf, ceiling))

    raw = []
    for idx in range(energies.size):
        vec = _fix_sign(vectors[:, idx])
        f_a = float(np.sum(vec[:n] ** 2))
        raw.append((float(energies[idx]), f_a, vec))

    # stable energy order; near-degenerate pairs by descending singlet fraction
    order = sorted(range(len(raw)),
                   key=lambda i: (round(raw[i][0] / DEGENERACY_TOLERANCE),
                                  -raw[i][1], i))
    levels = []
    for rank, i in enumerate(order):
        energy, f_a, vec = raw[i]
        label = f"{manifold} level {rank}"
        _check_turning_points(va, energy, label + " (singlet channel)", strict)
        _check_turning_points(vb, energy, label + " (triplet channel)", strict)
        levels.append(CoupledLevel(v=rank, energy=energy, psi_a=vec[:n],
                                   psi_b=vec[n:], f_a=f_a, manifold=manifold,
                                   grid=grid))
    return levels


def overlap(bra: VibLevel, ket: VibLevel, weight=None) -> float:
    """Quadrature overlap <bra|w(R)|ket>; ``weight`` defaults to 1."""
    if bra.grid != ket.grid:
        raise GridMismatchError("overlap requires levels on the same grid")
    if weight is None:
        return float(np.dot(bra.psi, ket.psi))
    w = np.asarray(weight(bra.grid.points), dtype=float)
    return float(np.dot(bra.psi * w, ket.psi))


def turning_radii(potential, grid: MappedGrid, energy: float) -> tuple[float, float]:
    """Classical inner/outer turning radii at ``energy`` (bohr), by scanning
    the potential on the grid and interpolating linearly between neighbors.
    Returns (nan, nan) when the energy is below the potential everywhere."""
    v = np.asarray(potential(grid.points), dtype=float)
    allowed = np.flatnonzero(v <= energy)
    if allowed.size == 0:
        return (np.nan, np.nan)
    r = grid.points

    def cross(i_out, i_in):
        v0, v1 = v[i_out], v[i_in]
        if v0 == v1:
            return float(r[i_in])
        frac = (v0 - energy) / (v0 - v1)
        return float(r[i_out] + frac * (r[i_in] - r[i_out]))

    lo = allowed[0]
    inner = float(r[0]) if lo == 0 else cross(lo - 1, lo)
    hi = allowed[-1]
    outer = float(r[-1]) if hi == r.size - 1 else cross(hi + 1, hi)
    return (inner, outer)


def validate_level_norm(level) -> float:
    """Deviation of the stored amplitude norm from one (diagnostic)."""
    if isinstance(level, CoupledLevel):
        total = float(np.sum(level.psi_a**2) + np.sum(level.psi_b**2))
    else:
        total = float(np.sum(level.psi**2))
    return abs(total - 1.0)


def require_same_grid(*levels) -> MappedGrid:
    grid = levels[0].grid
    for lev in levels[1:]:
        if lev.grid != grid:
            raise GridMismatchError("levels live on different grids")
    return grid


def level_by_v(levels, v: int):
    for lev in levels:
        if lev.v == v:
            return lev
    raise ValidationError(f"no level with v={v}")
