import numpy as np
import pytest

from vibcascade.bound import (
    CoupledLevel,
    level_by_v,
    overlap,
    solve_channel,
    solve_coupled,
    turning_radii,
    validate_level_norm,
)
from vibcascade.constants import cm_to_hartree, hartree_to_cm
from vibcascade.curves import make_constant, make_morse, shift_curve
from vibcascade.errors import (
    BoundaryContaminationError,
    BoundaryContaminationWarning,
    GridMismatchError,
)
from vibcascade.grids import build_uniform


MU = 5000.0


def harmonic(mu, omega, center):
    return lambda r: 0.5 * mu * omega**2 * (np.asarray(r) - center) ** 2


def toy_morse(d_e=0.02, a=0.6, r_e=5.0, floor=0.0):
    return make_morse(d_e=d_e, a=a, r_e=r_e, t_e=floor + d_e)


def morse_spectrum(d_e, a, mu, vmax, floor=0.0):
    v = np.arange(vmax + 1) + 0.5
    omega = a * np.sqrt(2.0 * d_e / mu)
    return floor + omega * v - (a * a / (2.0 * mu)) * v**2


class TestSolveChannel:
    def test_harmonic_oscillator(self):
        mu, omega = 1000.0, 0.01
        grid = build_uniform(4.0, 16.0, 512)
        levels = solve_channel(harmonic(mu, omega, 10.0), grid, mu,
                               e_ceiling=11.2 * omega, manifold="ho")
        assert len(levels) == 11
        for k, lev in enumerate(levels):
            assert lev.v == k
            assert lev.energy == pytest.approx(omega * (k + 0.5), rel=1e-8)
            assert validate_level_norm(lev) < 1e-10

    def test_morse_spectrum_to_80_percent_depth(self):
        pot = toy_morse()
        grid = build_uniform(3.0, 14.0, 256)
        levels = solve_channel(pot, grid, MU, e_ceiling=0.8 * 0.02)
        assert len(levels) == 13
        expected = morse_spectrum(0.02, 0.6, MU, len(levels) - 1)
        err = np.abs([lev.energy for lev in levels] - expected[: len(levels)])
        assert hartree_to_cm(err.max()) < 1e-4

    def test_no_bound_levels_returns_empty(self):
        pot = toy_morse()
        grid = build_uniform(3.0, 14.0, 64)
        assert solve_channel(pot, grid, MU, e_ceiling=1e-5) == []

    def test_sign_rule_first_lobe_positive(self):
        pot = toy_morse()
        grid = build_uniform(3.0, 14.0, 128)
        for lev in solve_channel(pot, grid, MU, e_ceiling=0.012):
            body = lev.psi[np.abs(lev.psi) > 1e-6 * np.abs(lev.psi).max()]
            assert body[0] > 0.0

    def test_orthonormal_gram_matrix(self):
        pot = toy_morse()
        grid = build_uniform(3.0, 14.0, 200)
        levels = solve_channel(pot, grid, MU, e_ceiling=0.015)
        stack = np.array([lev.psi for lev in levels])
        gram = stack @ stack.T
        assert np.abs(gram - np.eye(len(levels))).max() < 1e-9

    def test_boundary_contamination_warning_and_strict(self):
        pot = toy_morse()
        grid = build_uniform(3.0, 6.5, 96)  # outer turning points hit the edge
        with pytest.warns(BoundaryContaminationWarning):
            solve_channel(pot, grid, MU, e_ceiling=0.015)
        with pytest.raises(BoundaryContaminationError):
            solve_channel(pot, grid, MU, e_ceiling=0.015, strict=True)

    def test_brute_force_full_diagonalization_oracle(self):
        # independent assembly (explicit spectral transform) + full eigh
        pot = toy_morse()
        n, r_lo, r_hi = 128, 3.0, 14.0
        grid = build_uniform(r_lo, r_hi, n)
        ceiling = 0.015
        levels = solve_channel(pot, grid, MU, e_ceiling=ceiling)

        m = np.arange(1, n + 1)
        j = np.arange(n)
        u = np.sqrt(2.0 / n) * np.sin(np.outer(m, j + 0.5) * np.pi / n)
        u[-1, :] /= np.sqrt(2.0)
        k = m * np.pi / (r_hi - r_lo)
        t_ref = u.T @ (k[:, None] ** 2 / (2.0 * MU) * u)
        ref = np.linalg.eigvalsh(t_ref + np.diag(pot(grid.points)))
        ref = ref[ref < ceiling]
        assert len(ref) == len(levels)
        for lev, expected in zip(levels, ref):
            assert abs(lev.energy - expected) < 1e-10

    def test_hellmann_feynman(self):
        pot = toy_morse()
        bump = lambda r: np.exp(-((np.asarray(r) - 5.5) ** 2))
        grid = build_uniform(3.0, 14.0, 200)
        step = 1e-5

        def energies(lam):
            perturbed = lambda r: pot(r) + lam * bump(r)
            return [lev.energy
                    for lev in solve_channel(perturbed, grid, MU, e_ceiling=0.012)]

        up, down = energies(step), energies(-step)
        levels = solve_channel(pot, grid, MU, e_ceiling=0.012)
        for i, lev in enumerate(levels):
            derivative = (up[i] - down[i]) / (2.0 * step)
            assert derivative == pytest.approx(overlap(lev, lev, bump), rel=1e-6)


class TestOverlap:
    def test_normalization_and_orthogonality(self):
        pot = toy_morse()
        grid = build_uniform(3.0, 14.0, 200)
        levels = solve_channel(pot, grid, MU, e_ceiling=0.012)
        assert overlap(levels[0], levels[0]) == pytest.approx(1.0, abs=1e-10)
        assert abs(overlap(levels[0], levels[3])) < 1e-9

    def test_displaced_oscillator_franck_condon(self):
        mu, omega, d = 1000.0, 0.01, 0.3
        grid = build_uniform(4.0, 16.0, 400)
        left = solve_channel(harmonic(mu, omega, 9.85), grid, mu, 2.0 * omega)
        right = solve_channel(harmonic(mu, omega, 9.85 + d), grid, mu, 2.0 * omega)
        fcf = overlap(left[0], right[0]) ** 2
        assert fcf == pytest.approx(np.exp(-d * d * mu * omega / 2.0), rel=1e-6)

    def test_grid_mismatch_rejected(self):
        pot = toy_morse()
        g1 = build_uniform(3.0, 14.0, 128)
        g2 = build_uniform(3.0, 14.0, 130)
        l1 = solve_channel(pot, g1, MU, e_ceiling=0.004)
        l2 = solve_channel(pot, g2, MU, e_ceiling=0.004)
        with pytest.raises(GridMismatchError):
            overlap(l1[0], l2[0])


class TestSolveCoupled:
    def setup_wells(self):
        v_a = toy_morse(d_e=0.015, a=0.55, r_e=5.2, floor=0.002)
        v_b = toy_morse(d_e=0.018, a=0.65, r_e=4.9, floor=0.0)
        grid = build_uniform(3.0, 14.0, 220)
        return v_a, v_b, grid

    def test_zero_coupling_is_union_of_single_solves(self):
        v_a, v_b, grid = self.setup_wells()
        ceiling = 0.011
        coupled = solve_coupled(v_a, v_b, make_constant(0.0), grid, MU, ceiling)
        singles = sorted(
            [(lev.energy, 1.0) for lev in solve_channel(v_a, grid, MU, ceiling)]
            + [(lev.energy, 0.0) for lev in solve_channel(v_b, grid, MU, ceiling)]
        )
        assert len(coupled) == len(singles)
        for lev, (energy, f_a) in zip(coupled, singles):
            assert abs(lev.energy - energy) < 1e-10
            assert abs(lev.f_a - f_a) < 1e-10

    def test_constant_coupling_analytic_two_by_two(self):
        base = toy_morse()
        delta1, delta2, c = 0.0012, -0.0007, 0.0009
        v_a = shift_curve(base, delta1)
        v_b = shift_curve(base, delta2)
        grid = build_uniform(3.0, 14.0, 220)
        half_gap = 0.5 * (delta1 - delta2)
        split = np.hypot(half_gap, c)
        lam_lo = 0.5 * (delta1 + delta2) - split
        lam_hi = 0.5 * (delta1 + delta2) + split
        f_a_lo = 1.0 / (1.0 + ((delta1 - lam_lo) / c) ** 2)
        f_a_hi = 1.0 / (1.0 + ((delta1 - lam_hi) / c) ** 2)

        singles = solve_channel(base, grid, MU, e_ceiling=0.009)
        expected = sorted(
            [(lev.energy + lam_lo, f_a_lo) for lev in singles]
            + [(lev.energy + lam_hi, f_a_hi) for lev in singles]
        )
        ceiling = 0.009 + lam_lo  # keep pairs complete below the cut
        coupled = solve_coupled(v_a, v_b, make_constant(c), grid, MU, ceiling)
        assert len(coupled) >= 2
        for lev, (energy, f_a) in zip(coupled, expected):
            assert lev.energy == pytest.approx(energy, rel=1e-8)
            assert lev.f_a == pytest.approx(f_a, rel=1e-8)

    def test_coupling_sign_invariance(self):
        v_a, v_b, grid = self.setup_wells()
        plus = solve_coupled(v_a, v_b, make_constant(8e-4), grid, MU, 0.011)
        minus = solve_coupled(v_a, v_b, make_constant(-8e-4), grid, MU, 0.011)
        for lp, lm in zip(plus, minus):
            assert lp.energy == pytest.approx(lm.energy, abs=1e-13)
            assert lp.f_a == pytest.approx(lm.f_a, abs=1e-10)

    def test_joint_norm_and_energy_order(self):
        v_a, v_b, grid = self.setup_wells()
        levels = solve_coupled(v_a, v_b, make_constant(8e-4), grid, MU, 0.011)
        energies = [lev.energy for lev in levels]
        assert energies == sorted(energies)
        for lev in levels:
            assert validate_level_norm(lev) < 1e-10
            assert 0.0 <= lev.f_a <= 1.0

    def test_completeness_of_deep_levels(self):
        v_a, v_b, grid = self.setup_wells()
        coupled = solve_coupled(v_a, v_b, make_constant(8e-4), grid, MU, 0.016)
        singles = solve_channel(v_a, grid, MU, e_ceiling=0.007)
        for lev in singles[:3]:
            total = sum(float(np.dot(lev.psi, c.psi_a)) ** 2 for c in coupled)
            assert total == pytest.approx(1.0, abs=1e-6)

    def test_brute_force_coupled_oracle(self):
        v_a, v_b, _ = self.setup_wells()
        n, r_lo, r_hi = 120, 3.0, 14.0
        grid = build_uniform(r_lo, r_hi, n)
        c = 8e-4
        ceiling = 0.011
        coupled = solve_coupled(v_a, v_b, make_constant(c), grid, MU, ceiling)

        m = np.arange(1, n + 1)
        j = np.arange(n)
        u = np.sqrt(2.0 / n) * np.sin(np.outer(m, j + 0.5) * np.pi / n)
        u[-1, :] /= np.sqrt(2.0)
        k = m * np.pi / (r_hi - r_lo)
        t_ref = u.T @ (k[:, None] ** 2 / (2.0 * MU) * u)
        h = np.zeros((2 * n, 2 * n))
        h[:n, :n] = t_ref + np.diag(v_a(grid.points))
        h[n:, n:] = t_ref + np.diag(v_b(grid.points))
        h[:n, n:] = h[n:, :n] = -c * np.eye(n)
        ref = np.linalg.eigvalsh(h)
        ref = ref[ref < ceiling]
        assert len(ref) == len(coupled)
        for lev, expected in zip(coupled, ref):
            assert abs(lev.energy - expected) < 1e-10


class TestHelpers:
    def test_turning_radii_on_morse(self):
        pot = toy_morse()
        grid = build_uniform(3.0, 14.0, 400)
        energy = 0.01  # half depth: analytic turning radii from the Morse form
        inner_exact = 5.0 - np.log(1.0 + np.sqrt(0.5)) / 0.6
        outer_exact = 5.0 - np.log(1.0 - np.sqrt(0.5)) / 0.6
        inner, outer = turning_radii(pot, grid, energy)
        assert inner == pytest.approx(inner_exact, abs=0.03)
        assert outer == pytest.approx(outer_exact, abs=0.03)

    def test_level_by_v(self):
        pot = toy_morse()
        grid = build_uniform(3.0, 14.0, 128)
        levels = solve_channel(pot, grid, MU, e_ceiling=0.012)
        assert level_by_v(levels, 3).v == 3
