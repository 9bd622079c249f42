"""Tests for the density/Riemann-variable algebra."""

import math

import numpy as np
import pytest
from scipy import optimize

from twotasep.errors import DomainError
from twotasep.hydro import (
    CLAMP_TOL,
    Densities,
    ModelParams,
    RiemannVars,
    char_velocities,
    currents_from_rho,
    currents_from_z,
    current_relation_residuals,
    density_relation_residuals,
    duality_transform,
    in_physical_domain,
    rho_from_z,
    z_from_rho,
)

P = ModelParams(0.8, 0.9)


def interior_points(p, n, seed=0, margin=0.03):
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < n:
        za = rng.uniform(margin, p.z_alpha_max - margin)
        zb = rng.uniform(margin, p.z_beta_max - margin)
        if za + zb < 1.0 - margin:
            pts.append(RiemannVars(za, zb))
    return pts


class TestDomain:
    def test_params_must_be_positive(self):
        with pytest.raises(DomainError):
            ModelParams(0.0, 0.5)
        with pytest.raises(DomainError):
            ModelParams(0.5, -1.0)

    def test_z_caps(self):
        assert ModelParams(1.5, 0.7).z_alpha_max == 1.0
        assert ModelParams(1.5, 0.7).z_beta_max == 0.7
        assert ModelParams(0.4, 0.4).z_alpha_max == 0.4

    def test_in_physical_domain(self):
        assert in_physical_domain(RiemannVars(0.3, 0.2), P)
        assert in_physical_domain(RiemannVars(0.0, 0.0), P)
        assert not in_physical_domain(RiemannVars(0.9, 0.2), P)  # za > alpha
        assert not in_physical_domain(RiemannVars(0.5, 0.6), P)  # sum > 1
        assert not in_physical_domain(RiemannVars(-0.1, 0.2), P)

    def test_densities_validate(self):
        with pytest.raises(DomainError):
            Densities(0.7, 0.7).validate()
        d = Densities(-1e-14, 0.5).validate()
        assert d.rho_circ == 0.0
        assert abs(Densities(0.2, 0.3).rho_star - 0.5) < 1e-15


class TestMaps:
    def test_roundtrip_spot(self):
        rho = Densities(0.3, 0.4)
        z = z_from_rho(rho, P)
        back = rho_from_z(z, P)
        assert abs(back.rho_circ - 0.3) < 1e-12
        assert abs(back.rho_bullet - 0.4) < 1e-12

    def test_z_from_rho_matches_root_finder(self):
        """Independent oracle: solve the two implicit pole-sum relations
        numerically from many random starting points and confirm the returned
        branch is among the roots inside the physical domain."""
        rho = Densities(0.3, 0.4)
        z = z_from_rho(rho, P)

        def res_a(za):
            return (rho.rho_circ / za + rho.rho_bullet / (za - 1.0)
                    + rho.rho_star / (za - P.alpha))

        def res_b(zb):
            return (rho.rho_bullet / zb + rho.rho_circ / (zb - 1.0)
                    + rho.rho_star / (zb - P.beta))

        rng = np.random.default_rng(11)
        roots_a, roots_b = set(), set()
        for _ in range(100):
            x0 = rng.uniform(0.01, 0.99)
            try:
                sol = optimize.brentq(res_a, 1e-9, P.alpha - 1e-9)
                roots_a.add(round(sol, 9))
            except ValueError:
                pass
            sol = optimize.fsolve(res_a, x0, full_output=False)[0]
            if 0 < sol < min(1.0, P.alpha):
                roots_a.add(round(float(sol), 9))
            sol = optimize.fsolve(res_b, x0, full_output=False)[0]
            if 0 < sol < min(1.0, P.beta):
                roots_b.add(round(float(sol), 9))
        assert round(z.z_alpha, 9) in roots_a
        assert round(z.z_beta, 9) in roots_b
        # the selected branch is the smaller root of the quadratic
        assert z.z_alpha <= min(roots_a) + 1e-9
        assert z.z_beta <= min(roots_b) + 1e-9

    @pytest.mark.parametrize("a,b", [(0.8, 0.9), (0.5, 0.5), (1.0, 1.0), (1.5, 0.7)])
    def test_roundtrip_grid(self, a, b):
        p = ModelParams(a, b)
        for z in interior_points(p, 200, seed=hash((a, b)) % 2**31):
            rho = rho_from_z(z, p)
            back = z_from_rho(rho, p)
            assert abs(back.z_alpha - z.z_alpha) < 1e-9
            assert abs(back.z_beta - z.z_beta) < 1e-9
            ra, rb = density_relation_residuals(rho, z, p)
            assert abs(ra) < 1e-10 and abs(rb) < 1e-10

    def test_diagonal_is_identity(self):
        for za in np.linspace(0.15, 0.75, 13):
            z = RiemannVars(za, 1.0 - za)
            rho = rho_from_z(z, P)
            assert abs(rho.rho_circ - za) < 1e-12
            assert abs(rho.rho_bullet - (1.0 - za)) < 1e-12

    def test_out_of_domain_raises(self):
        with pytest.raises(DomainError):
            rho_from_z(RiemannVars(0.85, 0.1), P)
        with pytest.raises(DomainError):
            z_from_rho(Densities(0.8, 0.5), P)


class TestCurrents:
    def test_relation_residuals(self):
        for z in interior_points(P, 100, seed=3):
            j = currents_from_z(z, P)
            ra, rb = current_relation_residuals(z, j, P)
            assert abs(ra) < 1e-10 and abs(rb) < 1e-10

    def test_signs(self):
        """Bullets flow right, circs flow left, throughout the interior."""
        for z in interior_points(P, 100, seed=4):
            j = currents_from_z(z, P)
            assert j.j_bullet >= -1e-12
            assert j.j_circ <= 1e-12

    def test_vacuum_and_jammed_states(self):
        zero = currents_from_rho(Densities(0.0, 0.0), P)
        assert zero.j_circ == 0.0 and zero.j_bullet == 0.0

    def test_diagonal_scalar_currents(self):
        z = RiemannVars(0.3, 0.7)
        j = currents_from_z(z, P)
        assert abs(j.j_bullet - 0.7 * 0.3) < 1e-12
        assert abs(j.j_circ + 0.3 * 0.7) < 1e-12


class TestVelocities:
    def test_eigenvalues_of_jacobian(self):
        """The closed-form velocities match the finite-difference Jacobian
        d(J)/d(rho) eigenvalues (independent oracle)."""
        h = 1e-7
        for z in interior_points(P, 30, seed=5):
            rho = rho_from_z(z, P)

            def jvec(rc, rb):
                j = currents_from_rho(Densities(rc, rb), P)
                return np.array([j.j_circ, j.j_bullet])

            rc, rb = rho.rho_circ, rho.rho_bullet
            jac = np.column_stack([
                (jvec(rc + h, rb) - jvec(rc - h, rb)) / (2 * h),
                (jvec(rc, rb + h) - jvec(rc, rb - h)) / (2 * h),
            ])
            eig = np.sort(np.linalg.eigvals(jac).real)
            v = char_velocities(z, P)
            assert abs(eig[0] - v.v_alpha) < 1e-5
            assert abs(eig[1] - v.v_beta) < 1e-5

    def test_ordering(self):
        for z in interior_points(P, 200, seed=6):
            v = char_velocities(z, P)
            assert v.v_alpha <= v.v_beta + 1e-12

    def test_monotonicity_along_families(self):
        """v_alpha increases in z_alpha; v_beta decreases in z_beta."""
        zb = 0.25
        vals = [char_velocities(RiemannVars(za, zb), P).v_alpha
                for za in np.linspace(0.05, 0.7, 20)]
        assert all(x < y for x, y in zip(vals, vals[1:]))
        za = 0.25
        vals = [char_velocities(RiemannVars(za, zb), P).v_beta
                for zb in np.linspace(0.05, 0.7, 20)]
        assert all(x > y for x, y in zip(vals, vals[1:]))

    def test_diagonal_reduction(self):
        for za in np.linspace(0.15, 0.75, 7):
            v = char_velocities(RiemannVars(za, 1.0 - za), P)
            assert abs(v.v_alpha - (2 * za - 1)) < 1e-10
            assert abs(v.v_beta - (2 * za - 1)) < 1e-10

    def test_pole_points_finite(self):
        """On the pole set of the rational form the extrapolated values stay
        finite and consistent with nearby interior points."""
        z_edge = RiemannVars(0.0, 0.3)
        v_edge = char_velocities(z_edge, P)
        v_near = char_velocities(RiemannVars(1e-4, 0.3), P)
        assert math.isfinite(v_edge.v_alpha) and math.isfinite(v_edge.v_beta)
        assert abs(v_edge.v_alpha - v_near.v_alpha) < 5e-3
        assert abs(v_edge.v_beta - v_near.v_beta) < 5e-3


class TestDuality:
    def test_involution(self):
        z = RiemannVars(0.3, 0.2)
        p2, z2 = duality_transform(P, z)
        p3, z3 = duality_transform(p2, z2)
        assert p3 == P and z3 == z

    def test_density_and_current_covariance(self):
        for z in interior_points(P, 50, seed=8):
            p2, z2 = duality_transform(P, z)
            r1, r2 = rho_from_z(z, P), rho_from_z(z2, p2)
            assert abs(r2.rho_circ - r1.rho_bullet) < 1e-12
            assert abs(r2.rho_bullet - r1.rho_circ) < 1e-12
            j1, j2 = currents_from_z(z, P), currents_from_z(z2, p2)
            assert abs(j2.j_circ + j1.j_bullet) < 1e-12
            assert abs(j2.j_bullet + j1.j_circ) < 1e-12

    def test_velocity_covariance(self):
        for z in interior_points(P, 50, seed=9):
            p2, z2 = duality_transform(P, z)
            v1, v2 = char_velocities(z, P), char_velocities(z2, p2)
            assert abs(v2.v_alpha + v1.v_beta) < 1e-10
            assert abs(v2.v_beta + v1.v_alpha) < 1e-10
