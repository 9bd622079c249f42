"""Open-boundary steady states of the two-species TASEP.

Couples the four boundary-current relations (injection/extraction at the first
and last site) to the Riemann-problem closure for the bulk density and iterates
the resulting six-equation system to a self-consistent
(rho_left, rho_right, rho_bulk) triple.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, InfeasibleCurrentError, NonConvergenceError
from .hydro import Currents, Densities, ModelParams, currents_from_rho, z_from_rho
from .riemann import RiemannData, r0, solve_riemann


@dataclass(frozen=True)
class BoundaryRates:
    """Injection/extraction rates at the two boundaries.

    Naming follows the bulk exchange types: ``bullet_star`` is the
    bullet <-> hole exchange, ``star_circ`` the hole <-> circ exchange and
    ``bullet_circ`` the bullet <-> circ swap.  All six must be strictly
    positive; zero rates make the current inversion underdetermined.
    """

    nu_bullet_star_l: float
    nu_star_circ_l: float
    nu_bullet_circ_l: float
    nu_bullet_star_r: float
    nu_star_circ_r: float
    nu_bullet_circ_r: float

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            if not getattr(self, name) > 0:
                raise DomainError(f"boundary rate {name} must be strictly positive")


@dataclass(frozen=True)
class SolverConfig:
    damping: float = 0.5
    tolerance: float = 1e-10
    max_iterations: int = 100_000
    initial_guess: tuple[Densities, Densities] | None = None

    def __post_init__(self):
        if not (0.0 < self.damping <= 1.0):
            raise DomainError("damping must lie in (0, 1]")
        if self.tolerance <= 0 or self.max_iterations < 1:
            raise DomainError("tolerance must be positive and max_iterations >= 1")


@dataclass(frozen=True)
class SteadyState:
    rho_left: Densities
    rho_right: Densities
    rho_bulk: Densities
    currents: Currents
    phase: "object"
    iterations: int
    residual: float
    on_phase_boundary: bool
    clamped: bool = False

    def to_dict(self) -> dict:
        from .phases import phase_name

        return {
            "rho_left": [self.rho_left.rho_circ, self.rho_left.rho_bullet],
            "rho_right": [self.rho_right.rho_circ, self.rho_right.rho_bullet],
            "rho_bulk": [self.rho_bulk.rho_circ, self.rho_bulk.rho_bullet],
            "j_circ": self.currents.j_circ,
            "j_bullet": self.currents.j_bullet,
            "phase": phase_name(self.phase),
            "iterations": self.iterations,
            "residual": self.residual,
            "on_phase_boundary": self.on_phase_boundary,
            "clamped": self.clamped,
        }


def left_boundary_currents(rho_left: Densities, rates: BoundaryRates) -> Currents:
    """Currents through the left boundary given the first-site densities."""
    rc, rb = rho_left.rho_circ, rho_left.rho_bullet
    rs = 1.0 - rc - rb
    j_bullet = rates.nu_bullet_circ_l * rc + rates.nu_bullet_star_l * rs
    j_circ = -(rates.nu_bullet_circ_l + rates.nu_star_circ_l) * rc
    return Currents(j_circ, j_bullet)


def right_boundary_currents(rho_right: Densities, rates: BoundaryRates) -> Currents:
    """Currents through the right boundary given the last-site densities."""
    rc, rb = rho_right.rho_circ, rho_right.rho_bullet
    rs = 1.0 - rc - rb
    j_circ = -rates.nu_bullet_circ_r * rb - rates.nu_star_circ_r * rs
    j_bullet = (rates.nu_bullet_circ_r + rates.nu_bullet_star_r) * rb
    return Currents(j_circ, j_bullet)


def _clamp_simplex(rc: float, rb: float) -> tuple[float, float, bool]:
    clamped = rc < 0 or rb < 0 or rc + rb > 1
    rc = min(max(rc, 0.0), 1.0)
    rb = min(max(rb, 0.0), 1.0)
    s = rc + rb
    if s > 1.0:
        rc, rb = rc / s, rb / s
    return rc, rb, clamped


def invert_left(target: Currents, rates: BoundaryRates) -> tuple[Densities, bool]:
    """First-site densities producing the target left-boundary currents.

    Exact algebraic inverse of left_boundary_currents; the result is clamped to
    the simplex and the clamping is flagged in the second return value.
    """
    rc = -target.j_circ / (rates.nu_bullet_circ_l + rates.nu_star_circ_l)
    rs = (target.j_bullet - rates.nu_bullet_circ_l * rc) / rates.nu_bullet_star_l
    rb = 1.0 - rc - rs
    if rc < -0.5 or rb < -0.5 or rc + rb > 1.5:
        raise InfeasibleCurrentError(
            f"left inversion far outside the simplex: rho=({rc}, {rb})"
        )
    rc, rb, clamped = _clamp_simplex(rc, rb)
    return Densities(rc, rb), clamped


def invert_right(target: Currents, rates: BoundaryRates) -> tuple[Densities, bool]:
    """Last-site densities producing the target right-boundary currents."""
    rb = target.j_bullet / (rates.nu_bullet_circ_r + rates.nu_bullet_star_r)
    rs = (-target.j_circ - rates.nu_bullet_circ_r * rb) / rates.nu_star_circ_r
    rc = 1.0 - rb - rs
    if rc < -0.5 or rb < -0.5 or rc + rb > 1.5:
        raise InfeasibleCurrentError(
            f"right inversion far outside the simplex: rho=({rc}, {rb})"
        )
    rc, rb, clamped = _clamp_simplex(rc, rb)
    return Densities(rc, rb), clamped


def _residual(
    rho_l: Densities, rho_r: Densities, rho_b: Densities,
    rates: BoundaryRates, p: ModelParams,
) -> float:
    jl = left_boundary_currents(rho_l, rates)
    jr = right_boundary_currents(rho_r, rates)
    jb = currents_from_rho(rho_b, p)
    rb0 = r0(rho_l, rho_r, p)
    return max(
        abs(jl.j_bullet - jb.j_bullet),
        abs(jr.j_bullet - jb.j_bullet),
        abs(jl.j_circ - jb.j_circ),
        abs(jr.j_circ - jb.j_circ),
        abs(rb0.rho_circ - rho_b.rho_circ),
        abs(rb0.rho_bullet - rho_b.rho_bullet),
    )


def _near_zero_speed_wave(rho_l: Densities, rho_r: Densities, p: ModelParams, tol: float) -> bool:
    sol = solve_riemann(RiemannData(z_from_rho(rho_l, p), z_from_rho(rho_r, p), p))
    for w in sol.waves:
        if w.is_shock and abs(w.speed_lo) <= tol:
            return True
        if not w.is_shock and (abs(w.speed_lo) <= tol or abs(w.speed_hi) <= tol):
            return True
    return False


def solve_steady_state(
    rates: BoundaryRates, p: ModelParams, cfg: SolverConfig = SolverConfig()
) -> SteadyState:
    """Damped fixed-point iteration for the open-boundary steady state.

    One sweep: bulk density from the Riemann closure of the current boundary
    densities, bulk currents from it, then boundary densities re-derived by
    inverting the boundary-current relations, mixed with damping factor
    cfg.damping.  Convergence is declared on the max boundary-density change;
    the reported residual is the max violation of the current-matching chain
    plus the bulk-closure defect.

    Some rate configurations drive the full-strength map into a short limit
    cycle; when the update stalls over a checkpoint window the damping is
    halved (deterministically), which restores contraction.
    """
    from .phases import classify_phase

    if cfg.initial_guess is not None:
        rho_l, rho_r = cfg.initial_guess
    else:
        rho_l = rho_r = Densities(1.0 / 3.0, 1.0 / 3.0)

    theta = cfg.damping
    check_every = 200
    delta_at_checkpoint = float("inf")
    clamped_last = False
    for it in range(1, cfg.max_iterations + 1):
        rho_b = r0(rho_l, rho_r, p)
        j = currents_from_rho(rho_b, p)
        new_l, cl = invert_left(j, rates)
        new_r, cr = invert_right(j, rates)
        clamped_last = cl or cr
        delta = max(
            abs(new_l.rho_circ - rho_l.rho_circ),
            abs(new_l.rho_bullet - rho_l.rho_bullet),
            abs(new_r.rho_circ - rho_r.rho_circ),
            abs(new_r.rho_bullet - rho_r.rho_bullet),
        )
        rho_l = Densities(
            (1 - theta) * rho_l.rho_circ + theta * new_l.rho_circ,
            (1 - theta) * rho_l.rho_bullet + theta * new_l.rho_bullet,
        )
        rho_r = Densities(
            (1 - theta) * rho_r.rho_circ + theta * new_r.rho_circ,
            (1 - theta) * rho_r.rho_bullet + theta * new_r.rho_bullet,
        )
        if delta < cfg.tolerance:
            break
        if it % check_every == 0:
            if delta > 0.5 * delta_at_checkpoint and theta > 0.02:
                theta *= 0.5
            delta_at_checkpoint = delta
    else:
        rho_b = r0(rho_l, rho_r, p)
        res = _residual(rho_l, rho_r, rho_b, rates, p)
        best = SteadyState(
            rho_l, rho_r, rho_b, currents_from_rho(rho_b, p),
            classify_phase(z_from_rho(rho_b, p), p), cfg.max_iterations, res,
            _near_zero_speed_wave(rho_l, rho_r, p, 1e-6), clamped_last,
        )
        raise NonConvergenceError(
            f"no convergence after {cfg.max_iterations} iterations (residual {res:.3e})",
            best=best, residual=res,
        )

    rho_b = r0(rho_l, rho_r, p)
    res = _residual(rho_l, rho_r, rho_b, rates, p)
    return SteadyState(
        rho_left=rho_l,
        rho_right=rho_r,
        rho_bulk=rho_b,
        currents=currents_from_rho(rho_b, p),
        phase=classify_phase(z_from_rho(rho_b, p), p),
        iterations=it,
        residual=res,
        on_phase_boundary=_near_zero_speed_wave(rho_l, rho_r, p, 1e-6),
        clamped=clamped_last,
    )
