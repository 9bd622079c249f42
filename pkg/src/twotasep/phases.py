"""Phase classification and phase-diagram generation.

A bulk state is labelled per Riemann variable by the sign of its
characteristic velocity: positive means the variable is imposed by the left
boundary, negative by the right boundary, and |v| below a tolerance means it is
bulk-driven.  The ordering v_alpha <= v_beta leaves five admissible label
pairs.  Grids are produced over the z-domain or over a two-axis sweep of
boundary rates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import PhaseClassificationError
from .hydro import ModelParams, RiemannVars, char_velocities, in_physical_domain

#: default |v| threshold for bulk-induced detection
DEFAULT_V_TOL = 1e-6


class Induction(enum.Enum):
    LEFT = "L"
    RIGHT = "R"
    BULK = "B"


@dataclass(frozen=True)
class Phase:
    induction_alpha: Induction
    induction_beta: Induction


#: the five admissible phases, in a fixed order used for grid encoding
ALLOWED_PHASES = (
    Phase(Induction.LEFT, Induction.LEFT),
    Phase(Induction.RIGHT, Induction.RIGHT),
    Phase(Induction.RIGHT, Induction.LEFT),
    Phase(Induction.BULK, Induction.LEFT),
    Phase(Induction.RIGHT, Induction.BULK),
)

#: degenerate locus marker: both velocities vanish (diagonal point z = (1/2, 1/2)
#: and its tolerance neighbourhood); reported separately, not as one of the five
DIAGONAL_DEGENERATE = "diagonal-degenerate"

PHASE_CODE_ABSENT = -1
PHASE_CODE_DIAGONAL = len(ALLOWED_PHASES)

_PHASE_TO_CODE = {ph: i for i, ph in enumerate(ALLOWED_PHASES)}


def phase_name(phase) -> str:
    if phase == DIAGONAL_DEGENERATE:
        return DIAGONAL_DEGENERATE
    return f"{phase.induction_alpha.value}{phase.induction_beta.value}"


def phase_code(phase) -> int:
    if phase == DIAGONAL_DEGENERATE:
        return PHASE_CODE_DIAGONAL
    return _PHASE_TO_CODE[phase]


def classify_phase(z_bulk: RiemannVars, p: ModelParams, v_tol: float = DEFAULT_V_TOL):
    """Label a bulk state by the signs of its characteristic velocities.

    Returns one of ALLOWED_PHASES, or DIAGONAL_DEGENERATE when both velocities
    vanish within v_tol (only possible near the diagonal point where the two
    families collapse).  A label pair that is forbidden by the velocity
    ordering raises PhaseClassificationError.
    """
    v = char_velocities(z_bulk, p)

    def label(x):
        if abs(x) <= v_tol:
            return Induction.BULK
        return Induction.LEFT if x > 0 else Induction.RIGHT

    la, lb = label(v.v_alpha), label(v.v_beta)
    if la == Induction.BULK and lb == Induction.BULK:
        return DIAGONAL_DEGENERATE
    phase = Phase(la, lb)
    if phase not in _PHASE_TO_CODE:
        raise PhaseClassificationError(
            f"forbidden phase pair ({la.value}, {lb.value}) at z={z_bulk}: "
            f"v=({v.v_alpha}, {v.v_beta})"
        )
    return phase


def phase_diagram_z(p: ModelParams, resolution: int, v_tol: float = DEFAULT_V_TOL):
    """Phase grid over the physical z-domain.

    Cell centres are classified; cells outside the domain carry
    PHASE_CODE_ABSENT.  Returns (grid, z_alpha_axis, z_beta_axis) with the grid
    indexed [i_beta, i_alpha] (row-major over z_beta then z_alpha).
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    za_ax = (np.arange(resolution) + 0.5) * p.z_alpha_max / resolution
    zb_ax = (np.arange(resolution) + 0.5) * p.z_beta_max / resolution
    grid = np.full((resolution, resolution), PHASE_CODE_ABSENT, dtype=np.int64)
    for j, zb in enumerate(zb_ax):
        for i, za in enumerate(za_ax):
            z = RiemannVars(float(za), float(zb))
            if not in_physical_domain(z, p):
                continue
            grid[j, i] = phase_code(classify_phase(z, p, v_tol))
    return grid, za_ax, zb_ax


def count_phase_regions(grid: np.ndarray) -> dict[int, int]:
    """Connected-component count (4-connectivity) per phase code present."""
    from scipy import ndimage

    counts = {}
    for code in range(len(ALLOWED_PHASES)):
        mask = grid == code
        if mask.any():
            _, n = ndimage.label(mask)
            counts[code] = int(n)
    return counts


@dataclass(frozen=True)
class RateSweep:
    """Two-axis sweep through boundary-rate space around a base configuration."""

    axis_x: str
    range_x: tuple[float, float]
    axis_y: str
    range_y: tuple[float, float]
    base: "object"  # BoundaryRates

    def __post_init__(self):
        from .steady import BoundaryRates

        valid = set(BoundaryRates.__dataclass_fields__)
        if self.axis_x not in valid or self.axis_y not in valid:
            raise ValueError(f"sweep axes must be boundary-rate fields, got "
                             f"{self.axis_x!r}, {self.axis_y!r}")
        if self.axis_x == self.axis_y:
            raise ValueError("sweep axes must differ")


@dataclass(frozen=True)
class SweepCell:
    rate_x: float
    rate_y: float
    state: "object | None"  # SteadyState on success
    error: str | None = None

    @property
    def converged(self) -> bool:
        return self.state is not None


def phase_diagram_rates(p: ModelParams, sweep: RateSweep, resolution: int, cfg=None):
    """Grid of steady-state solutions over a boundary-rate sweep.

    Non-converged cells are flagged via SweepCell.error, never fabricated.
    Cells are independent; results do not depend on evaluation order.
    """
    from dataclasses import replace

    from .errors import NonConvergenceError, TwoTasepError
    from .steady import SolverConfig, solve_steady_state

    if cfg is None:
        cfg = SolverConfig()
    xs = np.linspace(sweep.range_x[0], sweep.range_x[1], resolution)
    ys = np.linspace(sweep.range_y[0], sweep.range_y[1], resolution)
    cells = []
    for y in ys:
        row = []
        for x in xs:
            rates = replace(sweep.base, **{sweep.axis_x: float(x), sweep.axis_y: float(y)})
            try:
                st = solve_steady_state(rates, p, cfg)
                row.append(SweepCell(float(x), float(y), st))
            except NonConvergenceError as exc:
                row.append(SweepCell(float(x), float(y), None, error=str(exc)))
            except TwoTasepError as exc:
                row.append(SweepCell(float(x), float(y), None, error=str(exc)))
        cells.append(row)
    return cells, xs, ys


class TasepPhase(enum.Enum):
    LI = "LI"
    RI = "RI"
    BI = "BI"


def tasep_phase(rho_left: float, rho_right: float) -> TasepPhase:
    """Scalar-TASEP phase from the sign of the bulk characteristic velocity."""
    from .riemann import tasep_riemann

    bulk = tasep_riemann(rho_left, rho_right, 0.0)
    v = 1.0 - 2.0 * bulk
    if abs(v) <= 1e-12:
        return TasepPhase.BI
    return TasepPhase.LI if v > 0 else TasepPhase.RI
