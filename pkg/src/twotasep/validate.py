"""Named validation suites.

Each check returns a CheckResult; the CLI prints them as a pass/fail table and
the acceptance tests assert on them.  Checks are deterministic (fixed seeds).
The KMC-backed checks are statistical and take minutes; the algebraic ones run
in seconds.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import kmc
from .hydro import (
    Densities,
    ModelParams,
    RiemannVars,
    char_velocities,
    currents_from_rho,
    currents_from_z,
    current_relation_residuals,
    density_relation_residuals,
    duality_transform,
    rho_from_z,
    z_from_rho,
)
from .phases import (
    ALLOWED_PHASES,
    PHASE_CODE_ABSENT,
    PHASE_CODE_DIAGONAL,
    count_phase_regions,
    phase_diagram_z,
    TasepPhase,
    tasep_phase,
)
from .riemann import (
    RiemannData,
    WaveFamily,
    eval_solution,
    extremal_current,
    shock_speed,
    solve_riemann,
    tasep_riemann,
)
from .steady import BoundaryRates, SolverConfig, solve_steady_state


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _interior_z_grid(p: ModelParams, n: int):
    za = (np.arange(n) + 0.5) * p.z_alpha_max / n
    zb = (np.arange(n) + 0.5) * p.z_beta_max / n
    for x in za:
        for y in zb:
            if x + y < 1.0 - 1e-6:
                yield RiemannVars(float(x), float(y))


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        name, passed, detail = fn(*args, **kwargs)
        return CheckResult(name, passed, detail, time.perf_counter() - t0)

    return wrapper


@_timed
def check_roundtrip():
    """z <-> rho roundtrip and defining-relation residuals on interior grids."""
    worst_rt = 0.0
    worst_res = 0.0
    for a, b in [(0.8, 0.9), (0.5, 0.5), (1.0, 1.0), (1.5, 0.7)]:
        p = ModelParams(a, b)
        for z in _interior_z_grid(p, 100):
            rho = rho_from_z(z, p)
            z2 = z_from_rho(rho, p)
            worst_rt = max(worst_rt, abs(z2.z_alpha - z.z_alpha), abs(z2.z_beta - z.z_beta))
            ra, rb = density_relation_residuals(rho, z, p)
            j = currents_from_z(z, p)
            ja, jb = current_relation_residuals(z, j, p)
            worst_res = max(worst_res, abs(ra), abs(rb), abs(ja), abs(jb))
    ok = worst_rt < 1e-9 and worst_res < 1e-10
    return "roundtrip", ok, f"max roundtrip {worst_rt:.2e}, max residual {worst_res:.2e}"


@_timed
def check_diagonal():
    """Velocities and currents reduce to the scalar TASEP on the diagonal."""
    p = ModelParams(0.8, 0.9)
    lo = max(1e-3, 1.0 - p.z_beta_max + 1e-3)
    hi = p.z_alpha_max - 1e-3
    worst = 0.0
    for za in np.linspace(lo, hi, 200):
        zb = 1.0 - za
        z = RiemannVars(float(za), float(zb))
        v = char_velocities(z, p)
        j = currents_from_z(z, p)
        worst = max(
            worst,
            abs(v.v_alpha - (2 * za - 1)),
            abs(v.v_beta - (2 * za - 1)),
            abs(j.j_bullet - zb * (1 - zb)),
            abs(j.j_circ + za * (1 - za)),
        )
    return "diagonal", worst < 1e-10, f"max deviation {worst:.2e}"


@_timed
def check_rankine_hugoniot():
    """Determinant condition on 1000 + 1000 random shock-line pairs."""
    p = ModelParams(0.8, 0.9)
    rng = np.random.default_rng(20240811)
    worst = 0.0

    def det(zm, zp):
        rm, rp = rho_from_z(zm, p), rho_from_z(zp, p)
        jm, jp = currents_from_z(zm, p), currents_from_z(zp, p)
        d_rc, d_rb = rp.rho_circ - rm.rho_circ, rp.rho_bullet - rm.rho_bullet
        d_jc, d_jb = jp.j_circ - jm.j_circ, jp.j_bullet - jm.j_bullet
        return abs(d_rb * d_jc - d_rc * d_jb)

    for _ in range(1000):
        za = rng.uniform(0.02, p.z_alpha_max - 0.02)
        cap = min(p.z_beta_max, 1.0 - za) - 0.02
        zb1, zb2 = rng.uniform(0.01, cap, size=2)
        worst = max(worst, det(RiemannVars(za, zb1), RiemannVars(za, zb2)))
    for _ in range(1000):
        zb = rng.uniform(0.02, p.z_beta_max - 0.02)
        cap = min(p.z_alpha_max, 1.0 - zb) - 0.02
        za1, za2 = rng.uniform(0.01, cap, size=2)
        worst = max(worst, det(RiemannVars(za1, zb), RiemannVars(za2, zb)))
    return "rankine-hugoniot", worst < 1e-9, f"max |det| {worst:.2e}"


@_timed
def check_consistency():
    """Finite-difference consistency of current/density partials in z."""
    p = ModelParams(0.8, 0.9)
    rng = np.random.default_rng(7)
    h = 1e-6
    worst = 0.0
    n = 0
    while n < 500:
        za = rng.uniform(0.05, p.z_alpha_max - 0.05)
        zb = rng.uniform(0.05, p.z_beta_max - 0.05)
        if za + zb > 0.93:
            continue
        n += 1
        for axis in (0, 1):
            def at(d):
                z = RiemannVars(za + d if axis == 0 else za, zb + d if axis == 1 else zb)
                rho = rho_from_z(z, p)
                j = currents_from_z(z, p)
                return np.array([rho.rho_circ, rho.rho_bullet, j.j_circ, j.j_bullet])

            g = (at(h) - at(-h)) / (2 * h)
            drc, drb, djc, djb = g
            lhs, rhs = djb * drc, djc * drb
            scale = max(abs(lhs), abs(rhs), 1e-8)
            worst = max(worst, abs(lhs - rhs) / scale)
    return "consistency", worst < 1e-5, f"max relative defect {worst:.2e}"


@_timed
def check_scalar_equivalence():
    """Extremal-current principle vs the scalar Riemann solution at the origin,
    plus the three-region scalar phase diagram."""
    grid = np.linspace(0.01, 0.99, 50)
    mism = 0
    for rl in grid:
        for rr in grid:
            if abs(1 - rl - rr) < 1e-9 or abs(rl - 0.5) < 1e-9 or abs(rr - 0.5) < 1e-9:
                continue
            bulk = tasep_riemann(rl, rr, 0.0)
            if bulk * (1 - bulk) != extremal_current(rl, rr):
                mism += 1

    phase_mism = 0
    ax = np.arange(0.005, 1.0, 0.01)
    for rl in ax:
        for rr in ax:
            if abs(1 - rl - rr) < 5e-3 or abs(rl - 0.5) < 5e-3 or abs(rr - 0.5) < 5e-3:
                continue
            got = tasep_phase(rl, rr)
            if rl < 0.5 and (rr < 0.5 or rl + rr < 1):
                want = TasepPhase.LI
            elif rr > 0.5 and (rl > 0.5 or rl + rr > 1):
                want = TasepPhase.RI
            else:
                want = TasepPhase.BI
            if got is not want:
                phase_mism += 1
    ok = mism == 0 and phase_mism == 0
    return ("scalar-equivalence", ok,
            f"{mism} current mismatches, {phase_mism} phase mismatches")


@_timed
def check_five_phase(resolution: int = 400):
    """Exactly five connected phase regions tracking the zero-velocity sets."""
    p = ModelParams(0.8, 0.9)
    h = max(p.z_alpha_max, p.z_beta_max) / resolution
    v_tol = 2.0 * h
    grid, za_ax, zb_ax = phase_diagram_z(p, resolution, v_tol=v_tol)

    regions = count_phase_regions(grid)
    five = len(regions) == len(ALLOWED_PHASES) and all(n == 1 for n in regions.values())

    # every sign change of v_alpha (v_beta) along a grid row (column) must have
    # a bulk-induced band cell within one cell
    track_ok = True
    va = np.full(grid.shape, np.nan)
    vb = np.full(grid.shape, np.nan)
    for jj, zb in enumerate(zb_ax):
        for ii, za in enumerate(za_ax):
            if grid[jj, ii] == PHASE_CODE_ABSENT:
                continue
            v = char_velocities(RiemannVars(float(za), float(zb)), p)
            va[jj, ii], vb[jj, ii] = v.v_alpha, v.v_beta
    band_a = grid == 3  # (B, L)
    band_b = grid == 4  # (R, B)
    for jj in range(resolution):
        for ii in range(resolution - 1):
            if np.isnan(va[jj, ii]) or np.isnan(va[jj, ii + 1]):
                continue
            if va[jj, ii] * va[jj, ii + 1] < 0:
                lo, hi = max(0, ii - 1), min(resolution, ii + 3)
                if not (band_a[jj, lo:hi].any() or (grid[jj, lo:hi] == PHASE_CODE_DIAGONAL).any()):
                    track_ok = False
            if vb[jj, ii] * vb[jj, ii + 1] < 0:
                lo, hi = max(0, ii - 1), min(resolution, ii + 3)
                if not (band_b[jj, lo:hi].any() or (grid[jj, lo:hi] == PHASE_CODE_DIAGONAL).any()):
                    track_ok = False
    ok = five and track_ok
    return ("five-phase", ok,
            f"regions per label {regions}, boundary tracking {'ok' if track_ok else 'FAILED'}")


@_timed
def check_duality():
    """Covariance of densities, currents, velocities and shock speeds under the
    species-exchange involution, at 500 random parameter/state samples."""
    rng = np.random.default_rng(99)
    worst = 0.0
    n = 0
    while n < 500:
        a, b = rng.uniform(0.3, 1.4, size=2)
        p = ModelParams(float(a), float(b))
        za = rng.uniform(0.03, p.z_alpha_max - 0.03)
        zb = rng.uniform(0.03, p.z_beta_max - 0.03)
        if za + zb > 0.95:
            continue
        n += 1
        z = RiemannVars(float(za), float(zb))
        p2, z2 = duality_transform(p, z)
        # involution
        p3, z3 = duality_transform(p2, z2)
        worst = max(worst, abs(z3.z_alpha - za), abs(z3.z_beta - zb),
                    abs(p3.alpha - p.alpha), abs(p3.beta - p.beta))
        rho, rho2 = rho_from_z(z, p), rho_from_z(z2, p2)
        worst = max(worst, abs(rho2.rho_circ - rho.rho_bullet),
                    abs(rho2.rho_bullet - rho.rho_circ))
        j, j2 = currents_from_z(z, p), currents_from_z(z2, p2)
        worst = max(worst, abs(j2.j_circ + j.j_bullet), abs(j2.j_bullet + j.j_circ))
        v, v2 = char_velocities(z, p), char_velocities(z2, p2)
        worst = max(worst, abs(v2.v_alpha + v.v_beta), abs(v2.v_beta + v.v_alpha))
        # alpha-shock maps to a beta-shock with opposite speed
        za2 = rng.uniform(0.02, min(p.z_alpha_max, 1 - zb) - 0.02)
        if abs(za2 - za) > 1e-6:
            zm, zp = RiemannVars(max(za, za2), zb), RiemannVars(min(za, za2), zb)
            s1 = shock_speed(WaveFamily.ALPHA_SHOCK, zm, zp, p)
            s2 = shock_speed(
                WaveFamily.BETA_SHOCK,
                RiemannVars(zb, zp.z_alpha), RiemannVars(zb, zm.z_alpha), p2,
            )
            worst = max(worst, abs(s1 + s2))

    # steady-state covariance: species swap + left/right reflection
    p = ModelParams(0.8, 0.9)
    p_dual = ModelParams(0.9, 0.8)
    for i in range(5):
        rates = BoundaryRates(*rng.uniform(0.2, 1.0, size=6))
        tight = SolverConfig(tolerance=1e-12)
        st = solve_steady_state(rates, p, tight)
        st2 = solve_steady_state(_dual_boundary_rates(rates), p_dual, tight)
        worst = max(
            worst,
            abs(st2.rho_bulk.rho_circ - st.rho_bulk.rho_bullet),
            abs(st2.rho_bulk.rho_bullet - st.rho_bulk.rho_circ),
            abs(st2.rho_left.rho_circ - st.rho_right.rho_bullet),
            abs(st2.rho_right.rho_bullet - st.rho_left.rho_circ),
            abs(st2.currents.j_circ + st.currents.j_bullet),
            abs(st2.currents.j_bullet + st.currents.j_circ),
        )
    return "duality", worst < 1e-8, f"max covariance defect {worst:.2e}"


# --- KMC-backed statistical checks ------------------------------------------

def _dual_boundary_rates(r: BoundaryRates) -> BoundaryRates:
    return BoundaryRates(
        nu_bullet_star_l=r.nu_star_circ_r,
        nu_star_circ_l=r.nu_bullet_star_r,
        nu_bullet_circ_l=r.nu_bullet_circ_r,
        nu_bullet_star_r=r.nu_star_circ_l,
        nu_star_circ_r=r.nu_bullet_star_l,
        nu_bullet_circ_r=r.nu_bullet_circ_l,
    )


@_timed
def check_kmc_ring(length: int = 2000, t_burn: float | None = None,
                   t_measure: float | None = None):
    """Ring KMC currents vs the exact hydrodynamic current formulas (2%)."""
    p = ModelParams(0.8, 0.9)
    lines = []
    ok = True
    for i, (rc, rb) in enumerate([(0.3, 0.4), (0.1, 0.2), (0.5, 0.3)]):
        cfg = kmc.SimConfig(
            length=length, params=p, topology=kmc.Topology.RING,
            t_burn=t_burn, t_measure=t_measure, seed=1234 + i,
            initial_fill=Densities(rc, rb),
        )
        m = kmc.run(cfg)
        j = currents_from_rho(Densities(rc, rb), p)
        rel_c = abs(m.j_circ - j.j_circ) / abs(j.j_circ)
        rel_b = abs(m.j_bullet - j.j_bullet) / abs(j.j_bullet)
        ok = ok and rel_c < 0.02 and rel_b < 0.02
        lines.append(
            f"rho=({rc},{rb}): jc {m.j_circ:.5f}+-{m.j_circ_err:.5f} vs {j.j_circ:.5f} "
            f"({rel_c:.2%}), jb {m.j_bullet:.5f}+-{m.j_bullet_err:.5f} vs {j.j_bullet:.5f} "
            f"({rel_b:.2%})"
        )
    return "kmc-ring", ok, "; ".join(lines)


def _binned_profile_error(rho_l, rho_r, p, length, t, seed, n_replicas, bin_width=150):
    """Sup-norm distance between the binned empirical step-data profile and the
    wave-fan solution, over the central 80% of the wave region."""
    prof_c, prof_b = kmc.step_initial_condition_run(
        rho_l, rho_r, p, length, t, seed, n_replicas=n_replicas, t_avg=0.35 * t,
    )
    sol = solve_riemann(RiemannData(z_from_rho(rho_l, p), z_from_rho(rho_r, p), p))
    if not sol.waves:
        xi_lo, xi_hi = -0.5, 0.5
    else:
        xi_lo, xi_hi = sol.waves[0].speed_lo, sol.waves[-1].speed_hi
        if xi_hi - xi_lo < 0.2:
            pad = 0.5 * (0.2 - (xi_hi - xi_lo))
            xi_lo, xi_hi = xi_lo - pad, xi_hi + pad
    width = xi_hi - xi_lo
    xi_lo += 0.1 * width
    xi_hi -= 0.1 * width

    half = length // 2
    worst = 0.0
    i = 0
    while True:
        s0 = half + int(math.floor(xi_lo * t)) + i * bin_width
        s1 = s0 + bin_width
        if (s1 - half) / t > xi_hi:
            break
        emp_c = prof_c[s0:s1].mean()
        emp_b = prof_b[s0:s1].mean()
        theo_c = theo_b = 0.0
        n_sub = 8
        for k in range(n_sub):
            xi = (s0 + (k + 0.5) * bin_width / n_sub - half) / t
            rho = rho_from_z(eval_solution(sol, xi), p)
            theo_c += rho.rho_circ / n_sub
            theo_b += rho.rho_bullet / n_sub
        worst = max(worst, abs(emp_c - theo_c), abs(emp_b - theo_b))
        i += 1
    return worst


@_timed
def check_kmc_riemann(length: int = 4000, t: float = 800.0, n_replicas: int = 20):
    """Step-initial-data KMC profiles vs the wave-fan solution (0.03 sup-norm)."""
    p = ModelParams(0.8, 0.9)
    # diagonal data: reduces to the scalar TASEP rarefaction fan
    e1 = _binned_profile_error(
        Densities(0.2, 0.8), Densities(0.7, 0.3), p, length, t, seed=42,
        n_replicas=n_replicas,
    )
    # generic off-diagonal data
    e2 = _binned_profile_error(
        Densities(0.1, 0.6), Densities(0.45, 0.15), p, length, t, seed=43,
        n_replicas=n_replicas,
    )
    ok = e1 < 0.03 and e2 < 0.03
    return "kmc-riemann", ok, f"sup-norm errors: diagonal {e1:.4f}, generic {e2:.4f}"


@_timed
def check_kmc_open(length: int = 500):
    """Open-boundary steady-state solver vs KMC site/bulk densities."""
    p = ModelParams(0.8, 0.9)
    rng = np.random.default_rng(2025)
    configs = [BoundaryRates(0.5, 0.5, 0.5, 0.5, 0.5, 0.5)]
    for _ in range(4):
        configs.append(BoundaryRates(*rng.uniform(0.15, 1.0, size=6)))

    lines = []
    ok = True
    for i, rates in enumerate(configs):
        st = solve_steady_state(rates, p, SolverConfig())
        ok = ok and st.residual < 1e-8
        # bulk-induced phases carry a zero-speed wave, so the bulk density
        # wanders slowly and needs long burn-in and averaging windows
        cfg = kmc.SimConfig(
            length=length, params=p, topology=kmc.Topology.OPEN, boundary=rates,
            t_burn=40.0 * length, t_measure=400.0 * length, seed=777 + i,
        )
        m = kmc.run(cfg)
        bulk = m.rho_bulk_estimate
        d_bulk = max(abs(bulk.rho_circ - st.rho_bulk.rho_circ),
                     abs(bulk.rho_bullet - st.rho_bulk.rho_bullet))
        d_l = max(abs(m.rho_site1.rho_circ - st.rho_left.rho_circ),
                  abs(m.rho_site1.rho_bullet - st.rho_left.rho_bullet))
        d_r = max(abs(m.rho_siteL.rho_circ - st.rho_right.rho_circ),
                  abs(m.rho_siteL.rho_bullet - st.rho_right.rho_bullet))
        ok = ok and d_bulk < 0.02 and d_l < 0.03 and d_r < 0.03
        lines.append(
            f"cfg{i}: residual {st.residual:.1e}, bulk diff {d_bulk:.4f}, "
            f"site diffs ({d_l:.4f}, {d_r:.4f})"
        )
    return "kmc-open", ok, "; ".join(lines)


SUITES = {
    "roundtrip": [check_roundtrip],
    "rh": [check_rankine_hugoniot],
    "diagonal": [check_diagonal],
    "ecp": [check_scalar_equivalence],
    "consistency": [check_consistency],
    "phases": [check_five_phase],
    "duality": [check_duality],
    "kmc-ring": [check_kmc_ring],
    "kmc-open": [check_kmc_open],
    "kmc-riemann": [check_kmc_riemann],
}
SUITES["all"] = [fn for fns in SUITES.values() for fn in fns]


def run_suite(name: str) -> list[CheckResult]:
    if name not in SUITES:
        raise KeyError(name)
    return [fn() for fn in SUITES[name]]
