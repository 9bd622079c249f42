"""Tests for phase classification and diagram generation."""

import numpy as np
import pytest

from twotasep.errors import DomainError
from twotasep.hydro import ModelParams, RiemannVars
from twotasep.phases import (
    ALLOWED_PHASES,
    DIAGONAL_DEGENERATE,
    PHASE_CODE_ABSENT,
    PHASE_CODE_DIAGONAL,
    Induction,
    Phase,
    RateSweep,
    TasepPhase,
    classify_phase,
    count_phase_regions,
    phase_code,
    phase_diagram_rates,
    phase_diagram_z,
    phase_name,
    tasep_phase,
)
from twotasep.steady import BoundaryRates

P = ModelParams(0.8, 0.9)


class TestClassify:
    def test_known_corners(self):
        # both velocities positive near the origin-side of the diagonal
        assert phase_name(classify_phase(RiemannVars(0.7, 0.28), P)) == "LL"
        # both negative deep in the small-z region
        assert phase_name(classify_phase(RiemannVars(0.05, 0.6), P)) == "RR"
        # mixed region between the two zero-level curves
        assert phase_name(classify_phase(RiemannVars(0.3, 0.3), P)) == "RL"

    def test_bulk_labels_near_zero_sets(self):
        # fat tolerance turns near-zero velocities into bulk induction
        got = {phase_name(classify_phase(RiemannVars(za, 0.2), P, v_tol=0.05))
               for za in np.linspace(0.05, 0.75, 60)}
        assert "BL" in got
        got = {phase_name(classify_phase(RiemannVars(0.25, zb), P, v_tol=0.05))
               for zb in np.linspace(0.05, 0.7, 60)}
        assert "RB" in got

    def test_diagonal_point_degenerate(self):
        assert classify_phase(RiemannVars(0.5, 0.5), P, v_tol=1e-3) == DIAGONAL_DEGENERATE

    def test_phase_helpers(self):
        ph = Phase(Induction.RIGHT, Induction.LEFT)
        assert phase_name(ph) == "RL"
        assert ALLOWED_PHASES[phase_code(ph)] == ph
        assert phase_code(DIAGONAL_DEGENERATE) == PHASE_CODE_DIAGONAL


class TestZDiagram:
    def test_tiny_grid_valid(self):
        grid, za_ax, zb_ax = phase_diagram_z(P, 2)
        assert grid.shape == (2, 2)
        assert za_ax[0] == P.z_alpha_max / 4
        assert set(np.unique(grid)) <= set(range(-1, 6))

    def test_absent_cells_outside_domain(self):
        grid, za_ax, zb_ax = phase_diagram_z(P, 40)
        for j, zb in enumerate(zb_ax):
            for i, za in enumerate(za_ax):
                if za + zb > 1.0 + 1e-9:
                    assert grid[j, i] == PHASE_CODE_ABSENT
                else:
                    assert grid[j, i] != PHASE_CODE_ABSENT

    def test_five_regions_moderate_resolution(self):
        res = 120
        v_tol = 2.0 * max(P.z_alpha_max, P.z_beta_max) / res
        grid, _, _ = phase_diagram_z(P, res, v_tol=v_tol)
        regions = count_phase_regions(grid)
        assert sorted(regions) == [0, 1, 2, 3, 4]
        assert all(n == 1 for n in regions.values())


class TestRateSweep:
    def test_invalid_axes_rejected(self):
        base = BoundaryRates(0.5, 0.5, 0.5, 0.5, 0.5, 0.5)
        with pytest.raises(ValueError):
            RateSweep("not_a_rate", (0.1, 1.0), "nu_star_circ_r", (0.1, 1.0), base)
        with pytest.raises(ValueError):
            RateSweep("nu_star_circ_r", (0.1, 1.0), "nu_star_circ_r", (0.1, 1.0), base)

    def test_small_sweep(self):
        base = BoundaryRates(0.5, 0.5, 0.5, 0.5, 0.5, 0.5)
        sweep = RateSweep("nu_bullet_star_l", (0.3, 0.9),
                          "nu_star_circ_r", (0.3, 0.9), base)
        cells, xs, ys = phase_diagram_rates(P, sweep, 3)
        assert len(cells) == 3 and len(cells[0]) == 3
        assert all(c.converged for row in cells for c in row)
        names = {phase_name(c.state.phase) for row in cells for c in row}
        assert names <= {phase_name(ph) for ph in ALLOWED_PHASES} | {DIAGONAL_DEGENERATE}

    def test_order_independence(self):
        """Cells are independent computations: rerunning yields identical data."""
        base = BoundaryRates(0.5, 0.5, 0.5, 0.5, 0.5, 0.5)
        sweep = RateSweep("nu_bullet_circ_l", (0.2, 1.0),
                          "nu_bullet_circ_r", (0.2, 1.0), base)
        a, _, _ = phase_diagram_rates(P, sweep, 3)
        b, _, _ = phase_diagram_rates(P, sweep, 3)
        for ra, rb in zip(a, b):
            for ca, cb in zip(ra, rb):
                assert ca.state.rho_bulk == cb.state.rho_bulk


class TestScalarPhases:
    def test_three_phases(self):
        assert tasep_phase(0.2, 0.3) is TasepPhase.LI
        assert tasep_phase(0.7, 0.8) is TasepPhase.RI
        assert tasep_phase(0.8, 0.2) is TasepPhase.BI

    def test_shock_competition_line(self):
        # across rl + rr = 1 (rl < 1/2 < rr) induction flips left to right
        assert tasep_phase(0.3, 0.65) is TasepPhase.LI
        assert tasep_phase(0.3, 0.75) is TasepPhase.RI

    def test_domain(self):
        with pytest.raises(DomainError):
            tasep_phase(-0.1, 0.5)
