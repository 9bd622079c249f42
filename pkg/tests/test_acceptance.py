"""Acceptance suite: one test per top-level criterion.

Each test prints its own pass/fail line (run pytest with -s or look at the
captured output of failures).  Criteria backed by kinetic Monte Carlo are
statistical and marked slow; they use fixed seeds and run in minutes.
"""


import pytest

from twotasep.validate import (
    check_consistency,
    check_diagonal,
    check_duality,
    check_five_phase,
    check_kmc_open,
    check_kmc_riemann,
    check_kmc_ring,
    check_rankine_hugoniot,
    check_roundtrip,
    check_scalar_equivalence,
)


def report(criterion, result):
    status = "PASS" if result.passed else "FAIL"
    print(f"[criterion {criterion}] {status} ({result.seconds:.2f}s): {result.detail}")
    assert result.passed, f"criterion {criterion}: {result.detail}"


def test_criterion_1_roundtrip_and_residuals():
    """z <-> rho roundtrip < 1e-9 and defining-relation residuals < 1e-10 on
    100x100 interior grids for four parameter pairs, in under 5 seconds."""
    r = check_roundtrip()
    report(1, r)
    assert r.seconds < 5.0


def test_criterion_2_diagonal_reduction():
    """On 200 diagonal points the velocities and currents collapse to the
    scalar-exclusion forms within 1e-10, in under a second."""
    r = check_diagonal()
    report(2, r)
    assert r.seconds < 1.0


def test_criterion_3_rankine_hugoniot():
    """Jump determinant below 1e-9 on 1000 + 1000 random shock-line pairs."""
    r = check_rankine_hugoniot()
    report(3, r)
    assert r.seconds < 2.0


def test_criterion_4_consistency_condition():
    """Cross-derivative compatibility of (J, rho) partials at 500 interior
    points, relative error < 1e-5 by central differences."""
    r = check_consistency()
    report(4, r)
    assert r.seconds < 2.0


def test_criterion_5_scalar_equivalence():
    """Origin-ray current equals the extremal-current value exactly on 2500
    grid pairs off the degenerate lines; the scalar phase map shows the
    three-region layout at resolution 0.01."""
    r = check_scalar_equivalence()
    report(5, r)
    assert r.seconds < 2.0


def test_criterion_6_five_phase_diagram():
    """Resolution-400 z-grid at (0.8, 0.9): exactly five connected phase
    regions whose bulk-induced bands track the zero-velocity sets within one
    grid cell."""
    r = check_five_phase(resolution=400)
    report(6, r)
    assert r.seconds < 30.0


@pytest.mark.slow
def test_criterion_7_kmc_ring_currents():
    """Ring KMC at L=2000 for three density points: measured currents within
    2% of the closed-form values, with 20-block error bars."""
    report(7, check_kmc_ring())


@pytest.mark.slow
def test_criterion_8_kmc_riemann_profiles():
    """Step-data KMC at L=4000, t=800, 20 replicas: empirical profiles within
    0.03 sup-norm of the wave-fan solution over the central 80% of the wave
    region, for a diagonal and a generic configuration."""
    report(8, check_kmc_riemann(length=4000, t=800.0, n_replicas=20))


@pytest.mark.slow
def test_criterion_9_open_boundary_closure():
    """All-0.5 rates plus four random positive configurations: solver residual
    < 1e-8, and KMC at L=500 reproduces the bulk density within 0.02 and the
    boundary-site densities within 0.03."""
    report(9, check_kmc_open(length=500))


def test_criterion_10_duality():
    """Species-exchange involution covariance of densities, currents,
    velocities, shock speeds and steady states at 500 random samples, 1e-8."""
    r = check_duality()
    report(10, r)
    assert r.seconds < 5.0
