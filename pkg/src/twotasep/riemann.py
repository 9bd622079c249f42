"""Riemann problem for the two-species TASEP conservation laws.

Classifies arbitrary step initial data ``(z_left, z_right)`` into one of five
global wave scenarios, builds the ordered wave sequence and evaluates the
self-similar solution at any ray ``xi = x/t``.  Also exposes the scalar
single-species TASEP baseline (piecewise Riemann solution, extremal current).
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field

from .errors import BracketError, DomainError, InvalidShockPairError, SpeedOrderingError
from .hydro import (
    Currents,
    Densities,
    ModelParams,
    RiemannVars,
    char_velocities,
    currents_from_z,
    in_physical_domain,
    rho_from_z,
    z_from_rho,
)

#: coordinate-comparison tolerance for scenario classification
CLASSIFY_TOL = 1e-10


class WaveFamily(enum.Enum):
    ALPHA_SHOCK = "alpha-shock"
    BETA_SHOCK = "beta-shock"
    ALPHA_FAN = "alpha-fan"
    BETA_FAN = "beta-fan"
    DIAGONAL_FAN = "diagonal-fan"


@dataclass(frozen=True)
class RiemannData:
    z_left: RiemannVars
    z_right: RiemannVars
    params: ModelParams

    def __post_init__(self):
        for z in (self.z_left, self.z_right):
            if not in_physical_domain(z, self.params):
                raise DomainError(f"state {z} outside physical domain for {self.params}")


@dataclass(frozen=True)
class Wave:
    family: WaveFamily
    speed_lo: float
    speed_hi: float
    state_before: RiemannVars
    state_after: RiemannVars

    @property
    def is_shock(self) -> bool:
        return self.family in (WaveFamily.ALPHA_SHOCK, WaveFamily.BETA_SHOCK)


@dataclass(frozen=True)
class WaveFanSolution:
    data: RiemannData
    waves: tuple[Wave, ...]
    constant_states: tuple[RiemannVars, ...]
    scenario: str = field(default="constant")


def _family_velocity(family: WaveFamily, z: RiemannVars, p: ModelParams) -> float:
    v = char_velocities(z, p)
    if family in (WaveFamily.ALPHA_SHOCK, WaveFamily.ALPHA_FAN):
        return v.v_alpha
    if family in (WaveFamily.BETA_SHOCK, WaveFamily.BETA_FAN):
        return v.v_beta
    return 2.0 * z.z_alpha - 1.0  # diagonal fan: degenerate speed


def shock_speed(
    family: WaveFamily,
    z_minus: RiemannVars,
    z_plus: RiemannVars,
    p: ModelParams,
) -> float:
    """Rankine-Hugoniot speed of a shock joining two states on a shock line.

    The two states must share the other family's Riemann variable.  Both
    component ratios [J]/[rho] are computed; the better-conditioned one is
    returned after a mutual consistency check.
    """
    if family == WaveFamily.ALPHA_SHOCK:
        shared = abs(z_minus.z_beta - z_plus.z_beta)
        amp = abs(z_minus.z_alpha - z_plus.z_alpha)
    elif family == WaveFamily.BETA_SHOCK:
        shared = abs(z_minus.z_alpha - z_plus.z_alpha)
        amp = abs(z_minus.z_beta - z_plus.z_beta)
    else:
        raise InvalidShockPairError(f"{family} is not a shock family")
    if shared > 1e-10:
        raise InvalidShockPairError(
            f"states do not share the complementary Riemann variable ({shared:.3e})"
        )

    if amp < 1e-8:
        mid = RiemannVars(
            0.5 * (z_minus.z_alpha + z_plus.z_alpha),
            0.5 * (z_minus.z_beta + z_plus.z_beta),
        )
        return _family_velocity(family, mid, p)

    rho_m, rho_p = rho_from_z(z_minus, p), rho_from_z(z_plus, p)
    j_m, j_p = currents_from_z(z_minus, p), currents_from_z(z_plus, p)
    d_rc = rho_p.rho_circ - rho_m.rho_circ
    d_rb = rho_p.rho_bullet - rho_m.rho_bullet
    d_jc = j_p.j_circ - j_m.j_circ
    d_jb = j_p.j_bullet - j_m.j_bullet

    ratios = []
    if abs(d_rb) > 1e-12:
        ratios.append(d_jb / d_rb)
    if abs(d_rc) > 1e-12:
        ratios.append(d_jc / d_rc)
    if not ratios:
        raise InvalidShockPairError("zero density jump in both components")
    if len(ratios) == 2 and abs(ratios[0] - ratios[1]) > 1e-9 * max(1.0, abs(ratios[0])):
        raise InvalidShockPairError(
            f"Rankine-Hugoniot ratios disagree: {ratios[0]} vs {ratios[1]}"
        )
    # prefer the ratio with the larger density jump
    return ratios[0] if abs(d_rb) >= abs(d_rc) else d_jc / d_rc


def fan_state_at(
    family: WaveFamily,
    fixed_var: float,
    xi: float,
    p: ModelParams,
    bracket: tuple[float, float],
) -> RiemannVars:
    """State inside a rarefaction fan at ray xi.

    For alpha-fans ``fixed_var`` is z_beta and z_alpha is solved for; for
    beta-fans the converse.  The family velocity is monotone in the solved
    variable over any fan bracket, so plain bisection is used (interval
    tolerance 1e-13).  The diagonal fan is closed-form and ignores the bracket.
    """
    if family == WaveFamily.DIAGONAL_FAN:
        return RiemannVars(0.5 * xi + 0.5, 0.5 - 0.5 * xi)

    if family == WaveFamily.ALPHA_FAN:
        def make(x):
            return RiemannVars(x, fixed_var)
    elif family == WaveFamily.BETA_FAN:
        def make(x):
            return RiemannVars(fixed_var, x)
    else:
        raise BracketError(f"{family} is not a fan family")

    lo, hi = min(bracket), max(bracket)
    f_lo = _family_velocity(family, make(lo), p) - xi
    f_hi = _family_velocity(family, make(hi), p) - xi
    if f_lo == 0.0:
        return make(lo)
    if f_hi == 0.0:
        return make(hi)
    if f_lo * f_hi > 0.0:
        raise BracketError(
            f"no sign change over bracket [{lo}, {hi}] for xi={xi} ({f_lo:.3e}, {f_hi:.3e})"
        )
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        f_mid = _family_velocity(family, make(mid), p) - xi
        if f_mid == 0.0:
            return make(mid)
        if f_lo * f_mid < 0.0:
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
    return make(0.5 * (lo + hi))


def _make_wave(family: WaveFamily, before: RiemannVars, after: RiemannVars, p: ModelParams) -> Wave:
    if family in (WaveFamily.ALPHA_SHOCK, WaveFamily.BETA_SHOCK):
        sigma = shock_speed(family, before, after, p)
        return Wave(family, sigma, sigma, before, after)
    lo = _family_velocity(family, before, p)
    hi = _family_velocity(family, after, p)
    return Wave(family, lo, hi, before, after)


def solve_riemann(data: RiemannData) -> WaveFanSolution:
    """Build the global wave-fan solution for arbitrary step data.

    The five scenarios are selected by the quadrant of z_right relative to
    z_left (with tolerance CLASSIFY_TOL) and, in the north-west quadrant, by
    the position of z_alpha_R + z_beta_L relative to 1.  Exact coordinate ties
    degrade to single-wave or constant solutions.  Weak speed monotonicity of
    the emitted sequence is verified and violations raise SpeedOrderingError.
    """
    p = data.params
    zl, zr = data.z_left, data.z_right
    da = zr.z_alpha - zl.z_alpha
    db = zr.z_beta - zl.z_beta

    states: list[RiemannVars] = [zl]
    families: list[WaveFamily] = []

    def add(family: WaveFamily, nxt: RiemannVars):
        families.append(family)
        states.append(nxt)

    if abs(da) <= CLASSIFY_TOL and abs(db) <= CLASSIFY_TOL:
        scenario = "constant"
    elif abs(da) <= CLASSIFY_TOL:
        add(WaveFamily.BETA_FAN if db < 0 else WaveFamily.BETA_SHOCK, zr)
        scenario = families[0].value
    elif abs(db) <= CLASSIFY_TOL:
        add(WaveFamily.ALPHA_SHOCK if da < 0 else WaveFamily.ALPHA_FAN, zr)
        scenario = families[0].value
    elif da < 0 and db < 0:
        # z_left north-east of z_right
        mid = RiemannVars(zr.z_alpha, zl.z_beta)
        add(WaveFamily.ALPHA_SHOCK, mid)
        add(WaveFamily.BETA_FAN, zr)
        scenario = "alpha-shock + beta-fan"
    elif da < 0 and db > 0:
        # south-east
        mid = RiemannVars(zr.z_alpha, zl.z_beta)
        add(WaveFamily.ALPHA_SHOCK, mid)
        add(WaveFamily.BETA_SHOCK, zr)
        scenario = "alpha-shock + beta-shock"
    elif da > 0 and db > 0:
        # south-west (z_alpha_R + z_beta_L < 1 is automatic here)
        mid = RiemannVars(zr.z_alpha, zl.z_beta)
        add(WaveFamily.ALPHA_FAN, mid)
        add(WaveFamily.BETA_SHOCK, zr)
        scenario = "alpha-fan + beta-shock"
    else:
        # north-west: two fans, possibly routed through the diagonal
        s = zr.z_alpha + zl.z_beta
        if s < 1.0 - CLASSIFY_TOL:
            mid = RiemannVars(zr.z_alpha, zl.z_beta)
            add(WaveFamily.ALPHA_FAN, mid)
            add(WaveFamily.BETA_FAN, zr)
            scenario = "alpha-fan + beta-fan"
        else:
            # ties (s == 1) are treated as a three-fan with an empty diagonal leg
            d1 = RiemannVars(1.0 - zl.z_beta, zl.z_beta)
            d2 = RiemannVars(zr.z_alpha, 1.0 - zr.z_alpha)
            add(WaveFamily.ALPHA_FAN, d1)
            add(WaveFamily.DIAGONAL_FAN, d2)
            add(WaveFamily.BETA_FAN, zr)
            scenario = "alpha-fan + diagonal-fan + beta-fan"

    waves = []
    for family, before, after in zip(families, states[:-1], states[1:]):
        # drop zero-length legs produced by ties
        if (
            abs(before.z_alpha - after.z_alpha) <= CLASSIFY_TOL
            and abs(before.z_beta - after.z_beta) <= CLASSIFY_TOL
        ):
            continue
        waves.append(_make_wave(family, before, after, p))

    # rebuild constant states consistent with the retained waves
    kept_states = [zl] + [w.state_after for w in waves]
    for k in range(len(waves) - 1):
        if waves[k].speed_hi > waves[k + 1].speed_lo + 1e-9:
            raise SpeedOrderingError(
                f"wave speeds out of order: {waves[k].speed_hi} > {waves[k + 1].speed_lo} "
                f"({scenario}, zl={zl}, zr={zr})"
            )

    return WaveFanSolution(data, tuple(waves), tuple(kept_states), scenario)


def eval_solution(sol: WaveFanSolution, xi: float) -> RiemannVars:
    """Evaluate the self-similar solution at ray xi.

    A ray exactly at a shock speed returns the state after (right of) the
    shock.
    """
    for k, w in enumerate(sol.waves):
        if xi < w.speed_lo:
            return sol.constant_states[k]
        if xi <= w.speed_hi:
            if w.is_shock:
                return w.state_after
            if w.family == WaveFamily.ALPHA_FAN:
                return fan_state_at(
                    w.family, w.state_before.z_beta, xi, sol.data.params,
                    (w.state_before.z_alpha, w.state_after.z_alpha),
                )
            if w.family == WaveFamily.BETA_FAN:
                return fan_state_at(
                    w.family, w.state_before.z_alpha, xi, sol.data.params,
                    (w.state_before.z_beta, w.state_after.z_beta),
                )
            return fan_state_at(w.family, 0.0, xi, sol.data.params, (0.0, 0.0))
    return sol.constant_states[-1]


def r0(rho_left: Densities, rho_right: Densities, p: ModelParams) -> Densities:
    """Riemann solution at the origin ray, in density variables."""
    data = RiemannData(z_from_rho(rho_left, p), z_from_rho(rho_right, p), p)
    return rho_from_z(eval_solution(solve_riemann(data), 0.0), p)


def export_profile_csv(sol: WaveFanSolution, xis, fileobj) -> None:
    """Write the sampled profile as delimited text: xi, z pair, density pair."""
    writer = csv.writer(fileobj)
    writer.writerow(["xi", "z_alpha", "z_beta", "rho_circ", "rho_bullet"])
    for xi in xis:
        z = eval_solution(sol, float(xi))
        rho = rho_from_z(z, sol.data.params)
        writer.writerow(
            [f"{xi:.10g}", f"{z.z_alpha:.12g}", f"{z.z_beta:.12g}",
             f"{rho.rho_circ:.12g}", f"{rho.rho_bullet:.12g}"]
        )


# --- scalar single-species TASEP baseline -----------------------------------

def tasep_riemann(rho_left: float, rho_right: float, xi: float) -> float:
    """Scalar TASEP Riemann solution (current rho (1 - rho)) at ray xi."""
    if not (0.0 <= rho_left <= 1.0 and 0.0 <= rho_right <= 1.0):
        raise DomainError("scalar densities must lie in [0, 1]")
    if rho_left > rho_right:
        lo, hi = 1.0 - 2.0 * rho_left, 1.0 - 2.0 * rho_right
        if xi < lo:
            return rho_left
        if xi > hi:
            return rho_right
        return 0.5 * (1.0 - xi)
    if rho_left < rho_right:
        sigma = 1.0 - rho_left - rho_right
        return rho_left if xi < sigma else rho_right
    return rho_left


def extremal_current(rho_left: float, rho_right: float) -> float:
    """Stationary scalar-TASEP current from the extremal current principle."""
    if not (0.0 <= rho_left <= 1.0 and 0.0 <= rho_right <= 1.0):
        raise DomainError("scalar densities must lie in [0, 1]")

    def j(r):
        return r * (1.0 - r)

    if rho_left > rho_right:
        if rho_right <= 0.5 <= rho_left:
            return 0.25
        return max(j(rho_left), j(rho_right))
    return min(j(rho_left), j(rho_right))
