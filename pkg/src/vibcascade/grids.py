"""Radial grids and the kinetic-energy operator on a mapped sine basis.

The working coordinate x is uniform with unit spacing; the physical radius
R(x) follows from integrating a local step function

    dR(R) = beta * pi / sqrt(2 mu max(E_max - V_env(R), eps_floor)),

i.e. a fixed fraction ``beta`` of the local de Broglie half-wavelength
under an envelope potential.  Grid points sit at half-integer x (midpoint
sine collocation), so the sine basis vanishes exactly at R_min and R_max.
A uniform grid is the special case of a constant Jacobian
J = (R_max - R_min) / N.

The kinetic operator is assembled in factorized form

    T = (1/2mu) S Bt diag(1/J_mid) B S,      S = diag(1/sqrt(J_k)),

where B maps grid values to derivative values on the staggered (integer-x)
points through the sine <-> cosine transform pair.  This discretizes the
exact transformed kinetic quadratic form, is symmetric positive
semidefinite by construction, and reduces to the classical sine-DVR
kinetic matrix when J is constant.

Grids are immutable after construction and identical inputs produce
bit-identical grids.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import CubicSpline

from .errors import ResourceLimitError, ValidationError

EPS_FLOOR = 1e-8        # hartree; guards the step formula in forbidden regions
DEFAULT_BETA = 0.7
DEFAULT_N_CAP = 16384


@dataclass(frozen=True)
class MappedGrid:
    """Discretized radial coordinate with per-point Jacobian."""

    points: np.ndarray          # R_k at half-integer working coordinates, bohr
    jacobian: np.ndarray        # dR/dx at the points
    jacobian_mid: np.ndarray    # dR/dx at the N+1 staggered (integer-x) points
    r_min: float
    r_max: float
    e_max: float | None = None
    beta: float | None = None
    _frozen: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=float)
        jac = np.ascontiguousarray(self.jacobian, dtype=float)
        mid = np.ascontiguousarray(self.jacobian_mid, dtype=float)
        if pts.size < 8:
            raise ValidationError("grid needs at least 8 points")
        if np.any(np.diff(pts) <= 0.0):
            raise ValidationError("grid points must be strictly increasing")
        if pts[0] < self.r_min or pts[-1] > self.r_max:
            raise ValidationError("grid points must lie within [R_min, R_max]")
        if np.any(jac <= 0.0) or np.any(mid <= 0.0):
            raise ValidationError("Jacobian must be positive everywhere")
        if mid.size != pts.size + 1:
            raise ValidationError("staggered Jacobian must have N+1 entries")
        for name, arr in (("points", pts), ("jacobian", jac), ("jacobian_mid", mid)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "_frozen", True)

    @property
    def n(self) -> int:
        return self.points.size

    @property
    def weights(self) -> np.ndarray:
        """Quadrature weights J_k dx (dx = 1) absorbed into wavefunctions."""
        return self.jacobian

    def __eq__(self, other):
        return self is other or (
            isinstance(other, MappedGrid)
            and np.array_equal(self.points, other.points)
            and np.array_equal(self.jacobian, other.jacobian)
        )

    def __hash__(self):
        return hash((self.points.tobytes(), self.jacobian.tobytes()))


def build_uniform(r_min: float, r_max: float, n: int) -> MappedGrid:
    """Equally spaced grid: n points at spacing (r_max - r_min)/n."""
    if not (0.0 < r_min < r_max):
        raise ValidationError("need R_max > R_min > 0")
    if n < 8:
        raise ValidationError("need at least 8 grid points")
    h = (r_max - r_min) / n
    points = r_min + (np.arange(n) + 0.5) * h
    return MappedGrid(points=points,
                      jacobian=np.full(n, h),
                      jacobian_mid=np.full(n + 1, h),
                      r_min=r_min, r_max=r_max)


def build_mapped(envelope, e_max: float, beta: float, mu: float,
                 r_min: float, r_max: float,
                 n_cap: int = DEFAULT_N_CAP,
                 eps_floor: float = EPS_FLOOR) -> MappedGrid:
    """Build a grid whose local spacing follows the envelope potential.

    ``envelope`` is a :class:`~vibcascade.curves.RadialCurve` or any
    callable V(R) in hartree.  The point count follows from integrating
    the inverse step function over [r_min, r_max] (rounded up, minimum 8),
    so denser grids appear automatically where E_max - V is large.
    """
    if not (0.0 < r_min < r_max):
        raise ValidationError("need R_max > R_min > 0")
    if not (0.0 < beta <= 1.0):
        raise ValidationError("beta must be in (0, 1]")
    if mu <= 0.0:
        raise ValidationError("reduced mass must be positive")

    def inverse_step(mesh: np.ndarray) -> np.ndarray:
        v_env = np.asarray(envelope(mesh), dtype=float)
        # Replace the inner repulsive wall by its suffix running minimum:
        # a wave at E_max only decays inside the wall, so the step there must
        # track the momentum of the adjacent allowed region, not the (tiny or
        # negative) local gap.  Beyond the envelope minimum this is V itself.
        v_eff = np.minimum.accumulate(v_env[::-1])[::-1]
        # Round the junction kink over roughly one local grid step; a kinked
        # map costs several orders of magnitude in eigenvalue accuracy.
        sigma = beta * np.pi / np.sqrt(2.0 * mu * max(e_max - v_eff.min(), eps_floor))
        dx_mesh = mesh[1] - mesh[0]
        half = int(np.ceil(4.0 * sigma / dx_mesh))
        if half >= 1:
            kernel = np.exp(-0.5 * (np.arange(-half, half + 1) * dx_mesh / sigma) ** 2)
            kernel /= kernel.sum()
            padded = np.concatenate(
                (np.full(half, v_eff[0]), v_eff, np.full(half, v_eff[-1]))
            )
            v_eff = np.convolve(padded, kernel, mode="valid")
        gap = np.maximum(e_max - v_eff, eps_floor)
        return np.sqrt(2.0 * mu * gap) / (beta * np.pi)

    mesh = np.linspace(r_min, r_max, 16385)
    if e_max <= float(np.min(np.asarray(envelope(mesh), dtype=float))):
        raise ValidationError("E_max must exceed the envelope minimum")
    phases = cumulative_trapezoid(inverse_step(mesh), mesh, initial=0.0)
    n = max(8, int(np.ceil(phases[-1])))
    if n > n_cap:
        raise ResourceLimitError(f"mapped grid needs {n} points, cap is {n_cap}")

    if 8 * n + 1 > mesh.size:
        mesh = np.linspace(r_min, r_max, 8 * n + 1)
        phases = cumulative_trapezoid(inverse_step(mesh), mesh, initial=0.0)

    # Invert x(R) with a smooth spline of the cumulative phase; working
    # spacing is 1, so x = phase/scale with scale = phase_total/n.  The
    # Jacobian is taken from the derivative of the same interpolant, which
    # keeps point placement and J exactly consistent (the realized map is
    # the spline, a smooth approximation of the ideal one).
    inverse = CubicSpline(phases, mesh, bc_type="natural")
    derivative = inverse.derivative()
    scale = phases[-1] / n
    points = np.asarray(inverse((np.arange(n) + 0.5) * scale), dtype=float)
    x_mid = np.arange(n + 1) * scale
    jac = scale * np.asarray(derivative((np.arange(n) + 0.5) * scale), dtype=float)
    jac_mid = scale * np.asarray(derivative(x_mid), dtype=float)
    return MappedGrid(points=points, jacobian=jac, jacobian_mid=jac_mid,
                      r_min=r_min, r_max=r_max, e_max=e_max, beta=beta)


@lru_cache(maxsize=4)
def _derivative_map(n: int) -> np.ndarray:
    """Grid values -> weighted derivative values at the N+1 staggered points.

    Midpoint sine collocation on working box [0, n]: basis sin(k_m x) with
    k_m = m pi / n, the last row renormalized; derivatives are cosines on
    the integer-x points with trapezoid quadrature weights.
    """
    m = np.arange(1, n + 1)
    j = np.arange(n)
    ll = np.arange(n + 1)
    k = m * np.pi / n
    norm = np.full(n, np.sqrt(2.0 / n))
    norm[-1] = np.sqrt(1.0 / n)
    u = norm[:, None] * np.sin(np.outer(m, (j + 0.5)) * np.pi / n)
    wt = np.ones(n + 1)
    wt[0] = wt[-1] = 0.5
    g = np.sqrt(wt)[:, None] * np.cos(np.outer(ll, m) * np.pi / n) * (k * norm)[None, :]
    return g @ u


def kinetic_matrix(grid: MappedGrid, mu: float) -> np.ndarray:
    """Symmetric N x N matrix for -(1/2mu) d^2/dR^2 in the mapped coordinate."""
    if mu <= 0.0:
        raise ValidationError("reduced mass must be positive")
    b = _derivative_map(grid.n)
    weighted = b * (1.0 / grid.jacobian_mid)[:, None]
    core = b.T @ weighted
    s = 1.0 / np.sqrt(grid.jacobian)
    t = (core * s[None, :]) * s[:, None]
    t /= 2.0 * mu
    return 0.5 * (t + t.T)
