"""Radial curves: potentials V(R), transition dipoles D(R), couplings xi(R).

A :class:`RadialCurve` is an immutable evaluator over internuclear distance
R > 0 (bohr).  It is backed either by point samples (natural cubic spline
inside the sampled range) or by an analytic form (Morse or constant).
Outside a sampled range the curve extrapolates with

* an exponential wall ``A*exp(-b*R)`` matched in value and slope at the
  first sample (potentials), or a constant clamp (dipoles, couplings);
* a dispersion tail ``asymptote - sum_n C_n / R^n`` above the last sample
  when tail coefficients are declared, else a constant clamp.  The tail
  asymptote is fixed by value-matching at the last sample, so evaluation
  is continuous across both boundaries by construction.

Curves are safe for concurrent read-only evaluation; construction is
single-threaded.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import CubicSpline

from .constants import BOHR_PER_ANGSTROM, HARTREE_PER_CM
from .errors import (
    ConfigError,
    CurveParseError,
    DomainError,
    ValidationError,
)

KINDS = ("potential", "dipole", "coupling")

_R_UNITS = {"angstrom": BOHR_PER_ANGSTROM, "bohr": 1.0, "au": 1.0}
_V_UNITS = {"cm-1": HARTREE_PER_CM, "hartree": 1.0, "au": 1.0}


@dataclass(frozen=True)
class MorseForm:
    """Morse potential ``T_e + D_e*(1 - exp(-a*(R-R_e)))^2 - D_e`` (a.u.).

    ``T_e`` is the dissociation asymptote; the well minimum sits at
    ``T_e - D_e``.
    """

    d_e: float
    a: float
    r_e: float
    t_e: float


@dataclass(frozen=True)
class ConstantForm:
    value: float


@dataclass(frozen=True)
class LongRangeTail:
    """Dispersion tail ``asymptote - sum_i c[i] / R^n[i]`` beyond R_max."""

    powers: tuple[int, ...]
    coefficients: tuple[float, ...]

    def __post_init__(self):
        if len(self.powers) != len(self.coefficients) or not self.powers:
            raise ValidationError("tail needs matching, non-empty (n, C_n) lists")
        if any(n <= 0 for n in self.powers):
            raise ValidationError("tail powers must be positive integers")
        if any(c <= 0 for c in self.coefficients):
            raise ValidationError("tail coefficients must be positive (attractive)")

    def deficit(self, r):
        r = np.asarray(r, dtype=float)
        total = np.zeros_like(r)
        for n, c in zip(self.powers, self.coefficients):
            total += c / r**n
        return total


@dataclass(frozen=True)
class RadialCurve:
    """Immutable radial function of internuclear distance (atomic units)."""

    kind: str
    label: str = ""
    samples_r: np.ndarray | None = None
    samples_v: np.ndarray | None = None
    analytic: MorseForm | ConstantForm | None = None
    tail: LongRangeTail | None = None
    offset: float = 0.0
    # derived in __post_init__
    _spline: CubicSpline | None = field(default=None, repr=False, compare=False)
    _wall: tuple[float, float] | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown curve kind {self.kind!r}")
        if (self.analytic is None) == (self.samples_r is None):
            raise ValidationError("curve needs either samples or an analytic form")
        if self.samples_r is not None:
            r = np.ascontiguousarray(self.samples_r, dtype=float)
            v = np.ascontiguousarray(self.samples_v, dtype=float)
            if r.ndim != 1 or r.shape != v.shape:
                raise ValidationError("samples must be two equal-length 1-d arrays")
            if r.size < 4:
                raise ValidationError("need at least 4 samples for cubic interpolation")
            if r[0] <= 0.0:
                raise DomainError("sample radii must be positive")
            dr = np.diff(r)
            if np.any(dr <= 0.0):
                bad = float(r[1:][dr <= 0.0][0])
                raise ValidationError(f"sample radii not strictly increasing at R={bad!r}")
            r.flags.writeable = False
            v.flags.writeable = False
            object.__setattr__(self, "samples_r", r)
            object.__setattr__(self, "samples_v", v)
            object.__setattr__(self, "_spline", CubicSpline(r, v, bc_type="natural"))
            if self.kind == "potential":
                v0 = float(v[0])
                s0 = float(self._spline(r[0], 1))
                if v0 != 0.0:
                    b = -s0 / v0
                    # store log(A) to survive large b*R products
                    log_a = np.log(abs(v0)) + b * float(r[0])
                    object.__setattr__(self, "_wall", (np.sign(v0) * 1.0, (log_a, b)))

    # -- range helpers -------------------------------------------------

    @property
    def r_min(self) -> float:
        return float(self.samples_r[0]) if self.samples_r is not None else 0.0

    @property
    def r_max(self) -> float:
        return float(self.samples_r[-1]) if self.samples_r is not None else np.inf

    @property
    def asymptote(self) -> float:
        """Value approached as R -> infinity (includes any shift)."""
        if isinstance(self.analytic, MorseForm):
            return self.analytic.t_e + self.offset
        if isinstance(self.analytic, ConstantForm):
            return self.analytic.value + self.offset
        last = float(self.samples_v[-1])
        if self.tail is not None:
            last += float(self.tail.deficit(self.samples_r[-1]))
        return last + self.offset

    @property
    def minimum(self) -> float:
        if isinstance(self.analytic, MorseForm):
            return self.analytic.t_e - self.analytic.d_e + self.offset
        if isinstance(self.analytic, ConstantForm):
            return self.analytic.value + self.offset
        return float(np.min(self.samples_v)) + self.offset

    # -- evaluation ----------------------------------------------------

    def __call__(self, r):
        scalar = np.isscalar(r) or (isinstance(r, np.ndarray) and r.ndim == 0)
        rr = np.atleast_1d(np.asarray(r, dtype=float))
        if np.any(rr <= 0.0):
            raise DomainError("curve evaluation requires R > 0")
        out = self._eval_base(rr) + self.offset
        return float(out[0]) if scalar else out

    def _eval_base(self, rr: np.ndarray) -> np.ndarray:
        if isinstance(self.analytic, MorseForm):
            m = self.analytic
            g = 1.0 - np.exp(-m.a * (rr - m.r_e))
            # (g*g - 1) keeps the asymptote exact instead of cancelling T_e+D_e-D_e
            return m.t_e + m.d_e * (g * g - 1.0)
        if isinstance(self.analytic, ConstantForm):
            return np.full_like(rr, self.analytic.value)

        out = np.empty_like(rr)
        lo = rr < self.samples_r[0]
        hi = rr > self.samples_r[-1]
        mid = ~(lo | hi)
        out[mid] = self._spline(rr[mid])
        # exact node hits return the stored sample bit-for-bit
        idx = np.searchsorted(self.samples_r, rr[mid])
        idx = np.minimum(idx, self.samples_r.size - 1)
        hit = self.samples_r[idx] == rr[mid]
        if np.any(hit):
            sub = out[mid]
            sub[hit] = self.samples_v[idx[hit]]
            out[mid] = sub
        if np.any(lo):
            out[lo] = self._short_range(rr[lo])
        if np.any(hi):
            out[hi] = self._long_range(rr[hi])
        return out

    def _short_range(self, rr: np.ndarray) -> np.ndarray:
        if self.kind != "potential":
            return np.full_like(rr, float(self.samples_v[0]))
        if self._wall is None:
            raise ValidationError(
                f"curve {self.label!r}: exponential wall undefined "
                "(potential is zero at the first sample)"
            )
        sign, (log_a, b) = self._wall
        return sign * np.exp(log_a - b * rr)

    def _long_range(self, rr: np.ndarray) -> np.ndarray:
        last = float(self.samples_v[-1])
        if self.tail is None:
            return np.full_like(rr, last)
        # asymptote fixed by value-matching the last sample
        asym = last + float(self.tail.deficit(self.samples_r[-1]))
        return asym - self.tail.deficit(rr)


def eval_curve(curve: RadialCurve, r):
    """Evaluate ``curve`` at radius ``r`` (scalar or array, bohr)."""
    return curve(r)


def shift_curve(curve: RadialCurve, delta: float) -> RadialCurve:
    """Return a copy of a potential curve shifted by ``delta`` hartree.

    The shift is stored additively, so ``eval(out, R) == eval(in, R) + delta``
    holds for every R, including the extrapolated regions, and a round trip
    ``+delta`` then ``-delta`` restores the original values exactly.
    """
    if curve.kind != "potential":
        raise ValidationError("shift_curve applies to potential curves only")
    return replace(curve, offset=curve.offset + float(delta))


def make_morse(d_e: float, a: float, r_e: float, t_e: float,
               kind: str = "potential", label: str = "") -> RadialCurve:
    """Build an analytic Morse curve (all parameters in atomic units).

    ``t_e`` is the dissociation asymptote; ``eval(r_e) == t_e - d_e``.
    """
    if d_e <= 0.0 or a <= 0.0 or r_e <= 0.0:
        raise ValidationError("Morse parameters D_e, a, R_e must be positive")
    return RadialCurve(kind=kind, label=label,
                       analytic=MorseForm(d_e=d_e, a=a, r_e=r_e, t_e=t_e))


def make_constant(value: float, kind: str = "coupling", label: str = "") -> RadialCurve:
    return RadialCurve(kind=kind, label=label, analytic=ConstantForm(value=value))


def morse_a_from_omega(omega_e: float, d_e: float, mu: float) -> float:
    """Morse steepness ``a`` giving harmonic constant ``omega_e`` (a.u.)."""
    if omega_e <= 0.0 or d_e <= 0.0 or mu <= 0.0:
        raise ValidationError("omega_e, D_e and mu must be positive")
    return omega_e * np.sqrt(mu / (2.0 * d_e))


def curve_from_samples(r, v, kind: str = "potential", label: str = "",
                       tail: LongRangeTail | None = None) -> RadialCurve:
    """Build a sampled curve from arrays already in atomic units."""
    return RadialCurve(kind=kind, label=label,
                       samples_r=np.asarray(r, dtype=float),
                       samples_v=np.asarray(v, dtype=float), tail=tail)


def _normalize_order(r: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Accept strictly increasing or strictly decreasing files; reject the rest."""
    dr = np.diff(r)
    if r.size >= 2 and np.all(dr < 0.0):
        return r[::-1].copy(), v[::-1].copy()
    bad = dr <= 0.0
    if np.any(bad):
        raise ValidationError(
            f"sample radii not strictly monotonic at R={float(r[1:][bad][0])!r}"
        )
    return r, v


def load_curve(path, r_unit: str = "angstrom", v_unit: str = "cm-1",
               kind: str = "potential", label: str = "",
               tail: LongRangeTail | None = None) -> RadialCurve:
    """Load a two-column text curve file and convert to atomic units.

    The format is UTF-8 text with ``#``-prefixed comments and two
    whitespace-separated numeric columns (R, value).  A header comment of
    the form ``# units: <r-unit> <value-unit>`` overrides the declared
    units.  Files may be ordered by increasing or decreasing R; decreasing
    ones are reversed.  Duplicate radii are rejected.
    """
    radii: list[float] = []
    values: list[float] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if body.lower().startswith("units:"):
                    parts = body[len("units:"):].split()
                    if len(parts) != 2:
                        raise CurveParseError(
                            f"{path}: line {lineno}: malformed units header"
                        )
                    r_unit, v_unit = parts
                continue
            cols = line.split()
            if len(cols) != 2:
                raise CurveParseError(
                    f"{path}: line {lineno}: expected two columns, got {len(cols)}"
                )
            try:
                radii.append(float(cols[0]))
                values.append(float(cols[1]))
            except ValueError as exc:
                raise CurveParseError(
                    f"{path}: line {lineno}: non-numeric value ({exc})"
                ) from None
    try:
        r_scale = _R_UNITS[r_unit.lower()]
        v_scale = _V_UNITS[v_unit.lower()]
    except KeyError as exc:
        raise ConfigError(f"{path}: unknown unit tag {exc.args[0]!r}") from None
    r = np.asarray(radii, dtype=float)
    v = np.asarray(values, dtype=float)
    r, v = _normalize_order(r, v)
    return RadialCurve(kind=kind, label=label or str(path),
                       samples_r=r * r_scale, samples_v=v * v_scale, tail=tail)


@dataclass(frozen=True)
class CurveSet:
    """Named collection of curves sharing one reduced mass (a.u.)."""

    curves: dict[str, RadialCurve]
    reduced_mass: float
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.reduced_mass <= 0.0:
            raise ValidationError("reduced mass must be positive")
        sampled = [c for c in self.curves.values() if c.samples_r is not None]
        if sampled:
            lo = max(c.r_min for c in sampled)
            hi = min(c.r_max for c in sampled)
            if lo >= hi:
                raise ValidationError("curves have no common overlapping R range")

    def __getitem__(self, name: str) -> RadialCurve:
        return self.curves[name]

    def __contains__(self, name: str) -> bool:
        return name in self.curves

    def potentials(self) -> dict[str, RadialCurve]:
        return {k: c for k, c in self.curves.items() if c.kind == "potential"}
