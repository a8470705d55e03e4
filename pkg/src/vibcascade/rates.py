"""Transition dipole matrix elements, Einstein A coefficients, branching.

The spontaneous decay rate of level i into level j is

    A_ij [1/s] = (4/3) alpha^3 dE^3 mu^2 / t_au,

with dE = E_i - E_j in hartree and mu = <i|D(R)|j> in e*a0; only downward
transitions (dE above a small floor) contribute.  Transitions touching a
two-channel coupled level use exactly one of its components, selected by
``channel``: the triplet component for dipoles to or from triplet
manifolds, the singlet component toward the singlet ground state.

All functions are pure; per-table reductions run in increasing v_j so the
outputs do not depend on evaluation scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bound import CoupledLevel, VibLevel, require_same_grid
from .constants import EINSTEIN_PREFACTOR
from .errors import UndefinedDistributionError, ValidationError

DELTA_E_FLOOR = 1e-12   # hartree; smaller gaps are dropped (nu^3 noise)

CHANNEL_SINGLET = "A"
CHANNEL_TRIPLET = "b"


@dataclass(frozen=True)
class TransitionElement:
    from_manifold: str
    v_i: int
    to_manifold: str
    v_j: int
    mu2: float
    delta_e: float          # E_i - E_j, hartree
    a_partial: float        # 1/s, zero unless delta_e > DELTA_E_FLOOR

    def __post_init__(self):
        if self.mu2 < 0.0 or self.a_partial < 0.0:
            raise ValidationError("mu2 and A_partial must be non-negative")


@dataclass(frozen=True)
class RateTable:
    from_manifold: str
    v_i: int
    to_manifold: str
    elements: tuple[TransitionElement, ...]
    a_total: float
    branching: np.ndarray

    def __post_init__(self):
        partials = np.array([e.a_partial for e in self.elements])
        if partials.size and self.a_total != float(np.sum(partials)):
            raise ValidationError("A_total must equal the ordered partial sum")
        if self.a_total > 0.0:
            total = float(np.sum(self.branching))
            if abs(total - 1.0) > 1e-12:
                raise ValidationError("branching must sum to 1")
        arr = np.ascontiguousarray(self.branching, dtype=float)
        arr.flags.writeable = False
        object.__setattr__(self, "branching", arr)

    @property
    def lifetime(self) -> float:
        """1/A_total in seconds (inf for a non-radiating level)."""
        return 1.0 / self.a_total if self.a_total > 0.0 else np.inf


def _component(level, channel):
    """Wavefunction vector entering the matrix element for this level."""
    if isinstance(level, CoupledLevel):
        if channel == CHANNEL_SINGLET:
            return level.psi_a
        if channel == CHANNEL_TRIPLET:
            return level.psi_b
        raise ValidationError(
            f"transitions of a coupled level need channel='{CHANNEL_SINGLET}' "
            f"or '{CHANNEL_TRIPLET}', got {channel!r}")
    return level.psi


def _resolve_channel(level_i, level_j, channel):
    coupled_i = isinstance(level_i, CoupledLevel)
    coupled_j = isinstance(level_j, CoupledLevel)
    if coupled_i and coupled_j:
        raise ValidationError("transitions between two coupled manifolds "
                              "are not supported")
    if not coupled_i and not coupled_j:
        if channel is not None:
            raise ValidationError("channel selection only applies when one "
                                  "level is coupled")
    elif channel not in (CHANNEL_SINGLET, CHANNEL_TRIPLET):
        raise ValidationError("a coupled-level transition requires an "
                              "explicit channel rule")
    return channel


def dipole_element(level_i, level_j, dipole, channel=None) -> TransitionElement:
    """Squared dipole matrix element and partial rate for i -> j.

    The elementwise product runs as (psi_i * psi_j) * D so the result is
    bitwise symmetric under exchanging i and j.
    """
    channel = _resolve_channel(level_i, level_j, channel)
    grid = require_same_grid(level_i, level_j)
    w = np.asarray(dipole(grid.points), dtype=float)
    bra = _component(level_i, channel)
    ket = _component(level_j, channel)
    mu = float(np.sum((bra * ket) * w))
    mu2 = mu * mu
    de = level_i.energy - level_j.energy
    a_partial = (EINSTEIN_PREFACTOR * (de * de * de) * mu2
                 if de > DELTA_E_FLOOR else 0.0)
    return TransitionElement(from_manifold=level_i.manifold, v_i=level_i.v,
                             to_manifold=level_j.manifold, v_j=level_j.v,
                             mu2=mu2, delta_e=de, a_partial=a_partial)


def einstein_a(level_i, targets, dipole, channel=None) -> RateTable:
    """Rate table for the decay of ``level_i`` into ``targets``.

    Targets are processed in increasing v_j; the total is the ordered sum
    of the partial rates.  An empty or purely upward manifold yields
    A_total = 0 (not an error).
    """
    ordered = sorted(targets, key=lambda lev: lev.v)
    elements = tuple(dipole_element(level_i, lev, dipole, channel)
                     for lev in ordered)
    partials = np.array([e.a_partial for e in elements])
    a_total = float(np.sum(partials)) if partials.size else 0.0
    branching = partials / a_total if a_total > 0.0 else np.zeros_like(partials)
    to_manifold = ordered[0].manifold if ordered else ""
    return RateTable(from_manifold=level_i.manifold, v_i=level_i.v,
                     to_manifold=to_manifold, elements=elements,
                     a_total=a_total, branching=branching)


def vib_distribution(level_i, targets, dipole, channel=None) -> np.ndarray:
    """Normalized branching vector over ``targets`` (increasing v_j)."""
    table = einstein_a(level_i, targets, dipole, channel)
    if table.a_total <= 0.0:
        raise UndefinedDistributionError(
            f"{level_i.manifold} v={level_i.v} has no downward transitions")
    return table.branching


def strongest_transition(level_i, targets, dipole, channel=None) -> tuple[int, float]:
    """(v_j, mu2) of the largest squared matrix element; ties -> lower v_j."""
    ordered = sorted(targets, key=lambda lev: lev.v)
    if not ordered:
        raise ValidationError("strongest_transition needs a non-empty manifold")
    mu2 = np.array([dipole_element(level_i, lev, dipole, channel).mu2
                    for lev in ordered])
    best = int(np.argmax(mu2))
    return ordered[best].v, float(mu2[best])
