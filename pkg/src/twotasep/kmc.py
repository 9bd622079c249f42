"""Continuous-time kinetic Monte Carlo for the microscopic two-species TASEP.

Event-driven (rejection-free) dynamics on a ring or an open lattice with
reservoir moves at the first and last site.  Serves as the independent oracle
for the hydrodynamic currents, bulk densities and boundary densities.

Site occupations are encoded as integers: 0 = hole (star), 1 = bullet
(right-mover), 2 = circ (left-mover).  Bulk moves act on bonds:
bullet-star swaps at rate beta, star-circ at rate alpha, bullet-circ at
rate 1.  The enabled-bond set is maintained incrementally in per-class
buckets, so every event costs O(1).  Occupation averages are time-weighted
between events; currents are counted as signed crossings per bond.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ConfigError
from .hydro import Currents, Densities, ModelParams

STAR, BULLET, CIRC = 0, 1, 2

_N_BLOCKS_DEFAULT = 20


class Topology(enum.Enum):
    RING = "ring"
    OPEN = "open"


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class SimConfig:
    length: int
    params: ModelParams
    topology: Topology = Topology.RING
    boundary: "object | None" = None  # BoundaryRates for OPEN
    t_burn: float | None = None       # defaults to 10 * length
    t_measure: float | None = None    # defaults to 100 * length
    seed: int = 0
    initial_fill: Densities | np.ndarray = Densities(1.0 / 3.0, 1.0 / 3.0)
    n_blocks: int = _N_BLOCKS_DEFAULT

    def __post_init__(self):
        if self.length < 2:
            raise ConfigError("lattice length must be >= 2")
        if self.topology == Topology.OPEN and self.boundary is None:
            raise ConfigError("open topology requires boundary rates")
        if self.topology == Topology.RING and self.boundary is not None:
            raise ConfigError("ring topology admits no boundary rates")
        if self.n_blocks < 2:
            raise ConfigError("need at least 2 blocks for error bars")

    @property
    def burn_time(self) -> float:
        return 10.0 * self.length if self.t_burn is None else self.t_burn

    @property
    def measure_time(self) -> float:
        return 100.0 * self.length if self.t_measure is None else self.t_measure


@dataclass(frozen=True)
class Measurement:
    profile_circ: np.ndarray
    profile_bullet: np.ndarray
    rho_site1: Densities
    rho_siteL: Densities
    j_circ: float
    j_bullet: float
    j_circ_err: float
    j_bullet_err: float
    boundary_currents: "dict | None"
    total_time: float
    n_events: int
    seed: int

    @property
    def rho_bulk_estimate(self) -> Densities:
        """Bulk density from the central fifth of the profile."""
        n = self.profile_circ.size
        lo, hi = int(0.4 * n), int(0.6 * n)
        return Densities(
            float(self.profile_circ[lo:hi].mean()),
            float(self.profile_bullet[lo:hi].mean()),
        )


def boundary_event_rates(occupation: int, side: Side, rates) -> list[tuple[int, float]]:
    """Enabled reservoir moves for a boundary site in a given occupation.

    Left boundary (site 1): circ can be replaced by a bullet (swap-type rate)
    or leave as a hole (hole-exchange rate); a hole can be filled by a bullet.
    Right boundary (site L): mirror image with the species roles exchanged.
    A bullet at the left and a circ at the right have no reservoir move.
    """
    if side == Side.LEFT:
        if occupation == CIRC:
            return [(BULLET, rates.nu_bullet_circ_l), (STAR, rates.nu_star_circ_l)]
        if occupation == STAR:
            return [(BULLET, rates.nu_bullet_star_l)]
        return []
    if occupation == BULLET:
        return [(STAR, rates.nu_bullet_star_r), (CIRC, rates.nu_bullet_circ_r)]
    if occupation == STAR:
        return [(CIRC, rates.nu_star_circ_r)]
    return []


@njit(cache=True, inline="always")
def _bond_class(a, b):
    if a == BULLET and b == STAR:
        return 0
    if a == STAR and b == CIRC:
        return 1
    if a == BULLET and b == CIRC:
        return 2
    return -1


@njit(cache=True)
def _refresh_bond(i, s, ring, cls, members, count, pos):
    L = s.size
    j = (i + 1) % L if ring else i + 1
    c_new = _bond_class(s[i], s[j])
    c_old = cls[i]
    if c_new == c_old:
        return
    if c_old >= 0:
        # swap-remove from the old bucket
        k = pos[c_old, i]
        last = members[c_old, count[c_old] - 1]
        members[c_old, k] = last
        pos[c_old, last] = k
        count[c_old] -= 1
        pos[c_old, i] = -1
    if c_new >= 0:
        members[c_new, count[c_new]] = i
        pos[c_new, i] = count[c_new]
        count[c_new] += 1
    cls[i] = c_new


@njit(cache=True)
def _kmc_run(s, alpha, beta, ring, br, t_burn, t_measure, n_blocks, seed):
    """Core Gillespie loop. ``br`` holds the six boundary rates
    (bullet_star_l, star_circ_l, bullet_circ_l, bullet_star_r, star_circ_r,
    bullet_circ_r); ignored on a ring."""
    np.random.seed(seed)
    L = s.size
    nb = L if ring else L - 1
    t_total = t_burn + t_measure
    block_dt = t_measure / n_blocks if t_measure > 0 else 1.0

    cls = np.full(nb, -1, np.int64)
    members = np.empty((3, nb), np.int64)
    count = np.zeros(3, np.int64)
    pos = np.full((3, nb), -1, np.int64)
    for i in range(nb):
        _refresh_bond(i, s, ring, cls, members, count, pos)

    acc_b = np.zeros(L)
    acc_c = np.zeros(L)
    last_t = np.zeros(L)

    blk_bullet = np.zeros(n_blocks)   # bulk bullet right-crossings
    blk_circ = np.zeros(n_blocks)     # bulk circ left-crossings
    blk_l_b = np.zeros(n_blocks)      # bullets injected at left
    blk_l_c = np.zeros(n_blocks)      # circs extracted at left
    blk_r_b = np.zeros(n_blocks)      # bullets extracted at right
    blk_r_c = np.zeros(n_blocks)      # circs injected at right

    rates3 = np.array([beta, alpha, 1.0])
    t = 0.0
    n_events = 0

    while True:
        r_bulk = rates3[0] * count[0] + rates3[1] * count[1] + rates3[2] * count[2]
        r_left = 0.0
        r_right = 0.0
        if not ring:
            if s[0] == CIRC:
                r_left = br[2] + br[1]
            elif s[0] == STAR:
                r_left = br[0]
            if s[L - 1] == BULLET:
                r_right = br[3] + br[5]
            elif s[L - 1] == STAR:
                r_right = br[4]
        r_tot = r_bulk + r_left + r_right
        if r_tot <= 0.0:
            break
        t_next = t - math.log(np.random.random()) / r_tot
        if t_next >= t_total:
            break
        t = t_next
        n_events += 1
        in_measure = t > t_burn
        if in_measure:
            k = int((t - t_burn) / block_dt)
            if k >= n_blocks:
                k = n_blocks - 1
        else:
            k = 0

        x = np.random.random() * r_tot
        handled = False
        for c in range(3):
            mass = rates3[c] * count[c]
            if x < mass:
                idx = int(x / rates3[c])
                if idx >= count[c]:
                    idx = count[c] - 1
                i = members[c, idx]
                j = (i + 1) % L if ring else i + 1
                # flush time-weighted occupations before the swap
                if in_measure:
                    for site in (i, j):
                        t0 = last_t[site]
                        if t0 < t_burn:
                            t0 = t_burn
                        if s[site] == BULLET:
                            acc_b[site] += t - t0
                        elif s[site] == CIRC:
                            acc_c[site] += t - t0
                    if c == 0:
                        blk_bullet[k] += 1.0
                    elif c == 1:
                        blk_circ[k] += 1.0
                    else:
                        blk_bullet[k] += 1.0
                        blk_circ[k] += 1.0
                tmp = s[i]
                s[i] = s[j]
                s[j] = tmp
                last_t[i] = t
                last_t[j] = t
                lo = i - 1
                if ring or lo >= 0:
                    _refresh_bond(lo % L if ring else lo, s, ring, cls, members, count, pos)
                _refresh_bond(i, s, ring, cls, members, count, pos)
                hi = i + 1
                if ring or hi < nb:
                    _refresh_bond(hi % nb if ring else hi, s, ring, cls, members, count, pos)
                handled = True
                break
            x -= mass

        if handled:
            continue

        # boundary move (open lattice only)
        if x < r_left:
            site = 0
            if in_measure:
                t0 = max(last_t[site], t_burn)
                if s[site] == BULLET:
                    acc_b[site] += t - t0
                elif s[site] == CIRC:
                    acc_c[site] += t - t0
            if s[site] == CIRC:
                if x < br[2]:
                    s[site] = BULLET       # circ -> bullet
                    if in_measure:
                        blk_l_b[k] += 1.0
                        blk_l_c[k] += 1.0
                else:
                    s[site] = STAR         # circ -> star
                    if in_measure:
                        blk_l_c[k] += 1.0
            else:
                s[site] = BULLET           # star -> bullet
                if in_measure:
                    blk_l_b[k] += 1.0
            last_t[site] = t
            _refresh_bond(0, s, ring, cls, members, count, pos)
        else:
            x -= r_left
            site = L - 1
            if in_measure:
                t0 = max(last_t[site], t_burn)
                if s[site] == BULLET:
                    acc_b[site] += t - t0
                elif s[site] == CIRC:
                    acc_c[site] += t - t0
            if s[site] == BULLET:
                if x < br[3]:
                    s[site] = STAR         # bullet -> star
                    if in_measure:
                        blk_r_b[k] += 1.0
                else:
                    s[site] = CIRC         # bullet -> circ
                    if in_measure:
                        blk_r_b[k] += 1.0
                        blk_r_c[k] += 1.0
            else:
                s[site] = CIRC             # star -> circ
                if in_measure:
                    blk_r_c[k] += 1.0
            last_t[site] = t
            _refresh_bond(nb - 1, s, ring, cls, members, count, pos)

    # final flush over [max(last_t, t_burn), t_total]
    if t_measure > 0:
        for site in range(L):
            t0 = last_t[site]
            if t0 < t_burn:
                t0 = t_burn
            if s[site] == BULLET:
                acc_b[site] += t_total - t0
            elif s[site] == CIRC:
                acc_c[site] += t_total - t0

    return acc_b, acc_c, blk_bullet, blk_circ, blk_l_b, blk_l_c, blk_r_b, blk_r_c, n_events


def _boundary_rate_array(boundary) -> np.ndarray:
    if boundary is None:
        return np.zeros(6)
    return np.array(
        [
            boundary.nu_bullet_star_l,
            boundary.nu_star_circ_l,
            boundary.nu_bullet_circ_l,
            boundary.nu_bullet_star_r,
            boundary.nu_star_circ_r,
            boundary.nu_bullet_circ_r,
        ]
    )


def make_lattice(length: int, fill: Densities, rng: np.random.Generator,
                 exact_counts: bool = True) -> np.ndarray:
    """Random initial lattice at the given densities.

    exact_counts places round(rho * L) particles of each species and shuffles
    (density exactly matched; the natural ring initial condition);
    otherwise sites are filled independently.
    """
    fill = fill.validate()
    if exact_counts:
        n_b = round(fill.rho_bullet * length)
        n_c = round(fill.rho_circ * length)
        s = np.full(length, STAR, dtype=np.int8)
        s[:n_b] = BULLET
        s[n_b:n_b + n_c] = CIRC
        rng.shuffle(s)
        return s
    u = rng.random(length)
    s = np.full(length, STAR, dtype=np.int8)
    s[u < fill.rho_bullet] = BULLET
    s[(u >= fill.rho_bullet) & (u < fill.rho_bullet + fill.rho_circ)] = CIRC
    return s


def run(cfg: SimConfig) -> Measurement:
    """Simulate and measure a steady-state trajectory."""
    rng = np.random.default_rng(cfg.seed)
    if isinstance(cfg.initial_fill, np.ndarray):
        s = cfg.initial_fill.astype(np.int8).copy()
        if s.size != cfg.length:
            raise ConfigError("explicit initial state has wrong length")
    else:
        s = make_lattice(cfg.length, cfg.initial_fill, rng,
                         exact_counts=cfg.topology == Topology.RING)

    ring = cfg.topology == Topology.RING
    br = _boundary_rate_array(cfg.boundary)
    out = _kmc_run(
        s, cfg.params.alpha, cfg.params.beta, ring, br,
        float(cfg.burn_time), float(cfg.measure_time), cfg.n_blocks,
        cfg.seed & 0x7FFFFFFF,
    )
    acc_b, acc_c, blk_b, blk_c, blk_l_b, blk_l_c, blk_r_b, blk_r_c, n_events = out

    t_meas = cfg.measure_time
    nb = cfg.length if ring else cfg.length - 1
    block_dt = t_meas / cfg.n_blocks

    prof_b = acc_b / t_meas
    prof_c = acc_c / t_meas

    jb_blocks = blk_b / (nb * block_dt)
    jc_blocks = -blk_c / (nb * block_dt)
    nblk = cfg.n_blocks

    def _mean_se(blocks):
        m = float(np.mean(blocks))
        se = float(np.std(blocks, ddof=1) / math.sqrt(nblk))
        return m, se

    jb, jb_err = _mean_se(jb_blocks)
    jc, jc_err = _mean_se(jc_blocks)

    boundary = None
    if not ring:
        lb, lb_err = _mean_se(blk_l_b / block_dt)
        lc, lc_err = _mean_se(-blk_l_c / block_dt)
        rb, rb_err = _mean_se(blk_r_b / block_dt)
        rc, rc_err = _mean_se(-blk_r_c / block_dt)
        boundary = {
            "left": Currents(lc, lb), "left_err": Currents(lc_err, lb_err),
            "right": Currents(rc, rb), "right_err": Currents(rc_err, rb_err),
        }

    return Measurement(
        profile_circ=prof_c,
        profile_bullet=prof_b,
        rho_site1=Densities(float(prof_c[0]), float(prof_b[0])),
        rho_siteL=Densities(float(prof_c[-1]), float(prof_b[-1])),
        j_circ=jc, j_bullet=jb, j_circ_err=jc_err, j_bullet_err=jb_err,
        boundary_currents=boundary,
        total_time=cfg.burn_time + cfg.measure_time,
        n_events=int(n_events),
        seed=cfg.seed,
    )


def step_initial_condition_run(
    rho_left: Densities,
    rho_right: Densities,
    p: ModelParams,
    length: int,
    t: float,
    seed: int,
    n_replicas: int = 1,
    t_avg: float = 0.0,
):
    """Empirical density profile of a step initial condition at time t.

    The lattice is a ring with the step at the midpoint; the wrap-around
    interface at site 0 emits the complementary waves, so t must be small
    enough that no wave crosses a quarter of the ring.  Sites are filled
    independently at rho_left (left half) and rho_right (right half).
    When t_avg > 0 the occupations are additionally time-averaged over the
    window [t - t_avg/2, t + t_avg/2]; the self-similar profile varies only at
    second order in t_avg / t, so a short window suppresses noise without
    biasing the comparison.  Returns per-site (rho_circ, rho_bullet) averaged
    over replicas, to be compared along xi = (site - length/2) / t.
    """
    if length % 2:
        raise ConfigError("length must be even")
    if not (0.0 <= t_avg < 2.0 * t):
        raise ConfigError("t_avg must lie in [0, 2 t)")
    v_max = 1.0 + max(p.alpha, p.beta)
    if (t + 0.5 * t_avg) * v_max > 0.45 * length:
        raise ConfigError(f"t={t} too large: waves reach the lattice edges")

    half = length // 2
    prof_c = np.zeros(length)
    prof_b = np.zeros(length)
    for r in range(n_replicas):
        rng = np.random.default_rng((seed, r))
        s = np.empty(length, dtype=np.int8)
        s[:half] = make_lattice(half, rho_left, rng, exact_counts=False)
        s[half:] = make_lattice(length - half, rho_right, rng, exact_counts=False)
        out = _kmc_run(
            s, p.alpha, p.beta, True, np.zeros(6),
            float(t - 0.5 * t_avg), float(t_avg), 2,
            (seed * 1_000_003 + r) & 0x7FFFFFFF,
        )
        if t_avg > 0:
            prof_b += out[0] / t_avg
            prof_c += out[1] / t_avg
        else:
            prof_c += s == CIRC
            prof_b += s == BULLET
    return prof_c / n_replicas, prof_b / n_replicas
