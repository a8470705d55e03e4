"""Vibrational structure, radiative rates, and cascade kinetics for diatomics."""

from .curves import (
    CurveSet,
    LongRangeTail,
    RadialCurve,
    curve_from_samples,
    eval_curve,
    load_curve,
    make_constant,
    make_morse,
    morse_a_from_omega,
    shift_curve,
)

__version__ = "0.1.0"
