"""Tests for the kinetic Monte Carlo engine."""

import numpy as np
import pytest

from twotasep.errors import ConfigError
from twotasep.hydro import Densities, ModelParams, currents_from_rho
from twotasep.kmc import (
    BULLET,
    CIRC,
    STAR,
    Side,
    SimConfig,
    Topology,
    boundary_event_rates,
    make_lattice,
    run,
    step_initial_condition_run,
)
from twotasep.steady import BoundaryRates

P = ModelParams(0.8, 0.9)
HALF = BoundaryRates(0.5, 0.5, 0.5, 0.5, 0.5, 0.5)


class TestConfig:
    def test_topology_boundary_coupling(self):
        with pytest.raises(ConfigError):
            SimConfig(length=100, params=P, topology=Topology.OPEN)
        with pytest.raises(ConfigError):
            SimConfig(length=100, params=P, topology=Topology.RING, boundary=HALF)

    def test_time_defaults(self):
        cfg = SimConfig(length=50, params=P)
        assert cfg.burn_time == 500.0
        assert cfg.measure_time == 5000.0


class TestBoundaryEventRates:
    def test_left_moves(self):
        r = BoundaryRates(0.1, 0.2, 0.3, 0.4, 0.5, 0.6)
        assert boundary_event_rates(CIRC, Side.LEFT, r) == [(BULLET, 0.3), (STAR, 0.2)]
        assert boundary_event_rates(STAR, Side.LEFT, r) == [(BULLET, 0.1)]
        assert boundary_event_rates(BULLET, Side.LEFT, r) == []

    def test_right_moves(self):
        r = BoundaryRates(0.1, 0.2, 0.3, 0.4, 0.5, 0.6)
        assert boundary_event_rates(BULLET, Side.RIGHT, r) == [(STAR, 0.4), (CIRC, 0.6)]
        assert boundary_event_rates(STAR, Side.RIGHT, r) == [(CIRC, 0.5)]
        assert boundary_event_rates(CIRC, Side.RIGHT, r) == []


class TestLattice:
    def test_exact_counts(self):
        rng = np.random.default_rng(1)
        s = make_lattice(200, Densities(0.3, 0.4), rng, exact_counts=True)
        assert (s == CIRC).sum() == 60
        assert (s == BULLET).sum() == 80
        assert (s == STAR).sum() == 60

    def test_iid_fill_statistics(self):
        rng = np.random.default_rng(2)
        s = make_lattice(200_000, Densities(0.3, 0.4), rng, exact_counts=False)
        assert abs((s == CIRC).mean() - 0.3) < 5e-3
        assert abs((s == BULLET).mean() - 0.4) < 5e-3


class TestRing:
    def test_all_holes_inert(self):
        cfg = SimConfig(length=50, params=P, seed=1, t_burn=10.0, t_measure=50.0,
                        initial_fill=Densities(0.0, 0.0))
        m = run(cfg)
        assert m.j_circ == 0.0 and m.j_bullet == 0.0
        assert m.n_events == 0

    def test_deterministic(self):
        cfg = SimConfig(length=80, params=P, seed=7, t_burn=20.0, t_measure=100.0,
                        initial_fill=Densities(0.3, 0.3))
        a, b = run(cfg), run(cfg)
        assert a.j_circ == b.j_circ
        assert a.n_events == b.n_events
        assert np.array_equal(a.profile_circ, b.profile_circ)

    def test_density_conserved(self):
        cfg = SimConfig(length=200, params=P, seed=3, t_burn=50.0, t_measure=500.0,
                        initial_fill=Densities(0.25, 0.35))
        m = run(cfg)
        # ring conserves both species exactly; time-averaged totals match
        assert abs(m.profile_circ.mean() - 0.25) < 1e-9
        assert abs(m.profile_bullet.mean() - 0.35) < 1e-9

    def test_diagonal_reduces_to_scalar_current(self):
        """Without holes only bullet-circ swaps act; the bullet current is the
        scalar-exclusion value rho (1 - rho) regardless of alpha, beta."""
        cfg = SimConfig(length=600, params=ModelParams(0.37, 1.21), seed=5,
                        t_burn=500.0, t_measure=8000.0,
                        initial_fill=Densities(0.7, 0.3))
        m = run(cfg)
        assert abs(m.j_bullet - 0.3 * 0.7) < 0.01
        assert abs(m.j_circ + 0.3 * 0.7) < 0.01

    def test_current_sign_conventions(self):
        cfg = SimConfig(length=300, params=P, seed=6, t_burn=100.0, t_measure=2000.0,
                        initial_fill=Densities(0.3, 0.4))
        m = run(cfg)
        assert m.j_bullet > 0
        assert m.j_circ < 0
        j = currents_from_rho(Densities(0.3, 0.4), P)
        assert abs(m.j_bullet - j.j_bullet) < 0.02
        assert abs(m.j_circ - j.j_circ) < 0.02


class TestOpen:
    def test_boundary_currents_match_bulk(self):
        cfg = SimConfig(length=200, params=P, topology=Topology.OPEN, boundary=HALF,
                        t_burn=3000.0, t_measure=30000.0, seed=11)
        m = run(cfg)
        bc = m.boundary_currents
        assert bc is not None
        # stationarity: injected flux at either end equals the bulk flux
        assert abs(bc["left"].j_bullet - m.j_bullet) < 0.02
        assert abs(bc["right"].j_bullet - m.j_bullet) < 0.02
        assert abs(bc["left"].j_circ - m.j_circ) < 0.02
        assert abs(bc["right"].j_circ - m.j_circ) < 0.02

    def test_profiles_in_unit_interval(self):
        cfg = SimConfig(length=100, params=P, topology=Topology.OPEN, boundary=HALF,
                        t_burn=200.0, t_measure=1000.0, seed=12)
        m = run(cfg)
        total = m.profile_circ + m.profile_bullet
        assert (m.profile_circ >= 0).all() and (m.profile_bullet >= 0).all()
        assert (total <= 1.0 + 1e-12).all()


class TestStepInitialCondition:
    def test_time_guard(self):
        with pytest.raises(ConfigError):
            step_initial_condition_run(Densities(0.2, 0.5), Densities(0.5, 0.2),
                                       P, 400, 200.0, seed=1)

    def test_odd_length_rejected(self):
        with pytest.raises(ConfigError):
            step_initial_condition_run(Densities(0.2, 0.5), Densities(0.5, 0.2),
                                       P, 401, 10.0, seed=1)

    def test_untouched_far_field(self):
        rl, rr = Densities(0.1, 0.5), Densities(0.5, 0.1)
        prof_c, prof_b = step_initial_condition_run(rl, rr, P, 1200, 60.0,
                                                    seed=2, n_replicas=10)
        half = 600
        # quarter-ring regions beyond the light cone keep their initial density
        left = slice(half - 500, half - 300)
        right = slice(half + 300, half + 500)
        assert abs(prof_c[left].mean() - 0.1) < 0.03
        assert abs(prof_b[left].mean() - 0.5) < 0.03
        assert abs(prof_c[right].mean() - 0.5) < 0.03
        assert abs(prof_b[right].mean() - 0.1) < 0.03
