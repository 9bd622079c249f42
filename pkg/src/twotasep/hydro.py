"""Exact algebra of the two-species TASEP hydrodynamics.

Implements the mappings between coarse-grained densities ``(rho_circ,
rho_bullet)`` and the pair of Riemann variables ``(z_alpha, z_beta)``, the
species currents, the characteristic velocities, domain predicates and the
particle-exchange duality.  Everything here is closed-form rational algebra in
double precision; all functions are pure.

Conventions: ``bullet`` particles hop right at rate ``beta``, ``circ``
particles hop left at rate ``alpha``, opposite species swap at rate 1; holes
are the remaining fraction ``rho_star = 1 - rho_circ - rho_bullet``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateDerivativeError, DomainError, SingularDenominatorError

#: slack used to absorb floating-point round-off at domain boundaries
CLAMP_TOL = 1e-12

#: when True, z_from_rho / rho_from_z re-check their defining relations at
#: every call (slow; meant for debugging)
DEBUG_CHECKS = False


@dataclass(frozen=True)
class ModelParams:
    """Bulk swap rates of the two species with holes."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise DomainError(f"rates must be positive, got alpha={self.alpha}, beta={self.beta}")

    @property
    def z_alpha_max(self) -> float:
        return min(1.0, self.alpha)

    @property
    def z_beta_max(self) -> float:
        return min(1.0, self.beta)


@dataclass(frozen=True)
class Densities:
    rho_circ: float
    rho_bullet: float

    @property
    def rho_star(self) -> float:
        return 1.0 - self.rho_circ - self.rho_bullet

    def validate(self, tol: float = CLAMP_TOL) -> "Densities":
        """Return a copy clamped to the simplex; raise if farther than tol outside."""
        rc, rb = self.rho_circ, self.rho_bullet
        if rc < -tol or rb < -tol or rc + rb > 1.0 + tol:
            raise DomainError(f"densities ({rc}, {rb}) outside the simplex")
        rc = min(max(rc, 0.0), 1.0)
        rb = min(max(rb, 0.0), 1.0)
        if rc + rb > 1.0:
            excess = rc + rb - 1.0
            rc -= excess * rc / (rc + rb)
            rb = 1.0 - rc
        return Densities(rc, rb)


@dataclass(frozen=True)
class RiemannVars:
    z_alpha: float
    z_beta: float


@dataclass(frozen=True)
class Currents:
    j_circ: float
    j_bullet: float


@dataclass(frozen=True)
class CharVelocities:
    v_alpha: float
    v_beta: float


def in_physical_domain(z: RiemannVars, p: ModelParams, tol: float = CLAMP_TOL) -> bool:
    """True iff z satisfies all three domain inequalities within tol."""
    za, zb = z.z_alpha, z.z_beta
    return (
        -tol <= za <= p.z_alpha_max + tol
        and -tol <= zb <= p.z_beta_max + tol
        and za + zb <= 1.0 + tol
    )


def _require_domain(z: RiemannVars, p: ModelParams, tol: float = CLAMP_TOL) -> RiemannVars:
    if not in_physical_domain(z, p, tol):
        raise DomainError(f"z=({z.z_alpha}, {z.z_beta}) outside physical domain for {p}")
    za = min(max(z.z_alpha, 0.0), p.z_alpha_max)
    zb = min(max(z.z_beta, 0.0), p.z_beta_max)
    if za + zb > 1.0:
        za, zb = za / (za + zb), zb / (za + zb)
    return RiemannVars(za, zb)


def density_relation_residuals(rho: Densities, z: RiemannVars, p: ModelParams) -> tuple[float, float]:
    """Residuals of the two implicit relations defining z in terms of rho.

    Each relation is a sum of three simple poles in the respective z variable;
    both vanish identically on the exact (rho, z) pair.
    """
    rc, rb, rs = rho.rho_circ, rho.rho_bullet, rho.rho_star
    za, zb = z.z_alpha, z.z_beta
    r_a = rc / za + rb / (za - 1.0) + rs / (za - p.alpha)
    r_b = rb / zb + rc / (zb - 1.0) + rs / (zb - p.beta)
    return r_a, r_b


def current_relation_residuals(z: RiemannVars, j: Currents, p: ModelParams) -> tuple[float, float]:
    """Residuals of the linear relations tying the currents to (z_alpha, z_beta)."""
    jc, jb = j.j_circ, j.j_bullet
    za, zb = z.z_alpha, z.z_beta
    r_a = jc / za + jb / (za - 1.0) - (jc + jb) / (za - p.alpha) + 1.0
    r_b = jb / zb + jc / (zb - 1.0) - (jc + jb) / (zb - p.beta) - 1.0
    return r_a, r_b


def z_from_rho(rho: Densities, p: ModelParams) -> RiemannVars:
    """Map densities to Riemann variables (minus square-root branch)."""
    rho = rho.validate()
    rc, rb = rho.rho_circ, rho.rho_bullet
    a, b = p.alpha, p.beta

    qa = 1.0 - rb + a * (rc + rb)
    da = qa * qa - 4.0 * a * rc
    qb = 1.0 - rc + b * (rc + rb)
    db = qb * qb - 4.0 * b * rb
    if da < 0.0 or db < 0.0:
        if da < -CLAMP_TOL or db < -CLAMP_TOL:
            raise DomainError(f"negative discriminant for rho=({rc}, {rb}), p={p}")
        da = max(da, 0.0)
        db = max(db, 0.0)
    za = 0.5 * (qa - math.sqrt(da))
    zb = 0.5 * (qb - math.sqrt(db))

    z = _require_domain(RiemannVars(za, zb), p)
    if DEBUG_CHECKS:
        ra, rbb = density_relation_residuals(rho, z, p)
        assert abs(ra) < 1e-9 and abs(rbb) < 1e-9, (rho, z, ra, rbb)
    return z


def _rho_denominator(za: float, zb: float, a: float, b: float) -> float:
    return a * b * (1.0 - za - zb) + za * zb * (a + b - 1.0)


def rho_from_z(z: RiemannVars, p: ModelParams) -> Densities:
    """Invert the density -> Riemann-variable map.

    On the diagonal z_alpha + z_beta = 1 the map is the identity; elsewhere the
    closed rational form is used.  Raises SingularDenominatorError if the
    common denominator vanishes (possible only for alpha + beta < 1 at the
    corner of the domain).
    """
    z = _require_domain(z, p)
    za, zb = z.z_alpha, z.z_beta
    a, b = p.alpha, p.beta

    if za + zb > 1.0 - CLAMP_TOL:
        return Densities(za, zb)

    den = _rho_denominator(za, zb, a, b)
    if abs(den) < 1e-13:
        raise SingularDenominatorError(
            f"rho(z) denominator vanished at z=({za}, {zb}) for {p}"
        )
    rc = za * (1.0 - zb) * (b * (1.0 - za) - zb * (1.0 - a)) / den
    rb = zb * (1.0 - za) * (a * (1.0 - zb) - za * (1.0 - b)) / den
    rho = Densities(rc, rb).validate(tol=1e-9)
    if DEBUG_CHECKS:
        ra, rbb = density_relation_residuals(rho, z, p)
        assert abs(ra) < 1e-8 and abs(rbb) < 1e-8, (z, rho, ra, rbb)
    return rho


def currents_from_z(z: RiemannVars, p: ModelParams) -> Currents:
    """Species currents as functions of the Riemann variables."""
    z = _require_domain(z, p)
    rho = rho_from_z(z, p)
    za, zb = z.z_alpha, z.z_beta
    jc = za * (zb - 1.0) + rho.rho_circ * (za - zb)
    jb = zb * (1.0 - za) + rho.rho_bullet * (za - zb)
    return Currents(jc, jb)


def currents_from_rho(rho: Densities, p: ModelParams) -> Currents:
    return currents_from_z(z_from_rho(rho, p), p)


def _velocities_interior(za: float, zb: float, p: ModelParams) -> tuple[float, float]:
    """Ratio form of the characteristic velocities.

    Valid wherever z_alpha avoids {0, 1, alpha} and z_beta avoids {0, 1, beta};
    remains exact on the diagonal (reduces to 2 z_alpha - 1 there).
    """
    a, b = p.alpha, p.beta
    rho = rho_from_z(RiemannVars(za, zb), p)
    rc, rb, rs = rho.rho_circ, rho.rho_bullet, rho.rho_star
    jc = za * (zb - 1.0) + rc * (za - zb)
    jb = zb * (1.0 - za) + rb * (za - zb)

    na = jc / za**2 + jb / (za - 1.0) ** 2 - (jc + jb) / (za - a) ** 2
    ea = rc / za**2 + rb / (za - 1.0) ** 2 + rs / (za - a) ** 2
    nb = jb / zb**2 + jc / (zb - 1.0) ** 2 - (jc + jb) / (zb - b) ** 2
    eb = rb / zb**2 + rc / (zb - 1.0) ** 2 + rs / (zb - b) ** 2
    if ea == 0.0 or eb == 0.0:
        raise DegenerateDerivativeError(f"degenerate derivative at z=({za}, {zb})")
    return na / ea, nb / eb


_POLE_TOL = 1e-11


def char_velocities(z: RiemannVars, p: ModelParams) -> CharVelocities:
    """Characteristic velocities (eigenvalues of the current Jacobian), v_alpha <= v_beta.

    Points sitting exactly on a pole of the rational form (z component equal to
    0, 1 or its rate) are evaluated by one-sided Richardson extrapolation from
    the interior.
    """
    z = _require_domain(z, p)
    za, zb = z.z_alpha, z.z_beta

    if za + zb > 1.0 - _POLE_TOL:
        v = 2.0 * za - 1.0
        return CharVelocities(v, v)

    poles_a = (0.0, 1.0, p.alpha)
    poles_b = (0.0, 1.0, p.beta)
    on_pole_a = any(abs(za - q) < _POLE_TOL for q in poles_a)
    on_pole_b = any(abs(zb - q) < _POLE_TOL for q in poles_b)
    if on_pole_a or on_pole_b:
        return _velocities_extrapolated(za, zb, p, on_pole_a, on_pole_b)

    va, vb = _velocities_interior(za, zb, p)
    return CharVelocities(va, vb)


def _velocities_extrapolated(za, zb, p, shift_a, shift_b) -> CharVelocities:
    """One-sided Richardson extrapolation toward a pole of the rational form."""
    h1, h2 = 1e-5, 5e-6

    def shifted(h):
        x = za + h if shift_a and za < p.z_alpha_max / 2 else za - h if shift_a else za
        y = zb + h if shift_b and zb < p.z_beta_max / 2 else zb - h if shift_b else zb
        return _velocities_interior(x, y, p)

    va1, vb1 = shifted(h1)
    va2, vb2 = shifted(h2)
    # step halving: first-order Richardson
    va = 2.0 * va2 - va1
    vb = 2.0 * vb2 - vb1
    return CharVelocities(va, vb)


def duality_transform(p: ModelParams, z: RiemannVars) -> tuple[ModelParams, RiemannVars]:
    """Particle-exchange involution.

    Swapping the two species maps (alpha, beta, z_alpha, z_beta) to
    (beta, alpha, z_beta, z_alpha); densities swap and currents map to
    (-j_bullet, -j_circ).  Applying the transform twice is the identity.
    """
    _require_domain(z, p)
    return ModelParams(p.beta, p.alpha), RiemannVars(z.z_beta, z.z_alpha)
