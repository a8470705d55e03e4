"""Physical constants and unit conversions (CODATA 2018).

Internal units are atomic throughout the package: hartree for energies,
bohr for lengths, electron masses for masses, and e*a0 for transition
dipole moments.  Every conversion to or from the spectroscopic units used
at the boundaries (cm^-1, angstrom, amu, s^-1) goes through the factors
below, so there is exactly one place where unit handling can go wrong.
"""

from __future__ import annotations

CONSTANTS_VERSION = "codata2018-1"

# CODATA 2018 recommended values.
CM_PER_HARTREE = 219474.63136320        # E_h/(h c), cm^-1
ANGSTROM_PER_BOHR = 0.529177210903
FINE_STRUCTURE = 7.2973525693e-3
ATOMIC_TIME_S = 2.4188843265857e-17     # hbar / E_h
ME_PER_AMU = 1822.888486209             # electron masses per unified amu

HARTREE_PER_CM = 1.0 / CM_PER_HARTREE
BOHR_PER_ANGSTROM = 1.0 / ANGSTROM_PER_BOHR

# Spontaneous-emission prefactor: A [s^-1] = EINSTEIN_PREFACTOR * dE^3 * mu^2
# with dE in hartree and mu in e*a0.  In atomic units the rate is
# (4/3) alpha^3 dE^3 mu^2 per atomic time unit; the division converts to SI.
EINSTEIN_PREFACTOR = (4.0 / 3.0) * FINE_STRUCTURE**3 / ATOMIC_TIME_S


def cm_to_hartree(x):
    return x * HARTREE_PER_CM


def hartree_to_cm(x):
    return x * CM_PER_HARTREE


def angstrom_to_bohr(x):
    return x * BOHR_PER_ANGSTROM


def bohr_to_angstrom(x):
    return x * ANGSTROM_PER_BOHR


def amu_to_me(x):
    return x * ME_PER_AMU
