"""Command-line interface.

Subcommands: riemann, steady, phases, simulate, validate.  Every file output
is written atomically and accompanied by a JSON run manifest
(<output>.manifest.json) recording the resolved configuration and seeds.

Exit codes: 0 success, 1 failed validation checks, 2 invalid input/domain
errors, 3 solver non-convergence (best iterate still emitted).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

import numpy as np

from . import kmc
from ._io import Manifest, render_csv, write_json_atomic, write_text_atomic
from .errors import NonConvergenceError, TwoTasepError
from .hydro import Densities, ModelParams, RiemannVars, rho_from_z, z_from_rho
from .phases import (
    PHASE_CODE_ABSENT,
    PHASE_CODE_DIAGONAL,
    ALLOWED_PHASES,
    DIAGONAL_DEGENERATE,
    RateSweep,
    phase_diagram_rates,
    phase_diagram_z,
    phase_name,
)
from .riemann import RiemannData, export_profile_csv, solve_riemann
from .steady import BoundaryRates, SolverConfig, solve_steady_state
from .validate import SUITES, run_suite

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_NO_CONVERGENCE = 3


def _pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}")
    return float(parts[0]), float(parts[1])


def _emit(out: str | None, text: str, manifest: Manifest | None = None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        write_text_atomic(out, text)
        if manifest is not None:
            manifest.outputs.append(out)
            manifest.write(out + ".manifest.json")


_RATE_KEYS = (
    "nu_bullet_star_l", "nu_star_circ_l", "nu_bullet_circ_l",
    "nu_bullet_star_r", "nu_star_circ_r", "nu_bullet_circ_r",
)


def _boundary_from_args(args) -> BoundaryRates:
    values = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
        rates = cfg.get("rates", cfg)
        for k in _RATE_KEYS:
            if k in rates:
                values[k] = float(rates[k])
        if "alpha" in cfg:
            args.alpha = float(cfg["alpha"])
        if "beta" in cfg:
            args.beta = float(cfg["beta"])
    for k in _RATE_KEYS:
        v = getattr(args, k, None)
        if v is not None:
            values[k] = v
    nu = getattr(args, "nu", None)
    if nu is not None:
        for k in _RATE_KEYS:
            values.setdefault(k, nu)
    missing = [k for k in _RATE_KEYS if k not in values]
    if missing:
        raise TwoTasepError(f"missing boundary rates: {', '.join(missing)}")
    return BoundaryRates(**values)


def cmd_riemann(args) -> int:
    p = ModelParams(args.alpha, args.beta)
    if args.zl is not None and args.zr is not None:
        zl = RiemannVars(*args.zl)
        zr = RiemannVars(*args.zr)
    elif args.rhol is not None and args.rhor is not None:
        zl = z_from_rho(Densities(*args.rhol), p)
        zr = z_from_rho(Densities(*args.rhor), p)
    else:
        raise TwoTasepError("provide either --zl/--zr or --rhol/--rhor")

    sol = solve_riemann(RiemannData(zl, zr, p))
    manifest = Manifest(
        "riemann",
        {"alpha": p.alpha, "beta": p.beta,
         "zl": [zl.z_alpha, zl.z_beta], "zr": [zr.z_alpha, zr.z_beta],
         "xi_samples": args.xi_samples},
    )

    lines = [f"scenario: {sol.scenario}"]
    for w in sol.waves:
        kind = "shock" if w.is_shock else "fan"
        if w.is_shock:
            lines.append(f"  {w.family.value}: {kind} at speed {w.speed_lo:.6g}")
        else:
            lines.append(
                f"  {w.family.value}: {kind} over speeds "
                f"[{w.speed_lo:.6g}, {w.speed_hi:.6g}]"
            )
    if not sol.waves:
        lines.append("  (no waves: equal states)")
    sys.stdout.write("\n".join(lines) + "\n")

    if sol.waves:
        lo = min(w.speed_lo for w in sol.waves) - 0.2
        hi = max(w.speed_hi for w in sol.waves) + 0.2
    else:
        lo, hi = -1.0, 1.0
    xis = np.linspace(lo, hi, args.xi_samples)
    csv_text = render_csv(lambda fh: export_profile_csv(sol, xis, fh))
    _emit(args.out, csv_text, manifest)

    if args.plot:
        rows = [r.split(",") for r in csv_text.strip().splitlines()[1:]]
        cols = np.array(rows, dtype=float).T
        from .plotting import plot_profile

        plot_profile(cols[0], cols[1], cols[2], cols[3], cols[4], args.plot)
        manifest.outputs.append(args.plot)
        if args.out:
            manifest.write(args.out + ".manifest.json")
    return EXIT_OK


def cmd_steady(args) -> int:
    rates = _boundary_from_args(args)
    p = ModelParams(args.alpha, args.beta)
    cfg = SolverConfig(
        damping=args.damping, tolerance=args.tolerance,
        max_iterations=args.max_iter,
    )
    manifest = Manifest(
        "steady",
        {"alpha": p.alpha, "beta": p.beta, "rates": asdict(rates),
         "solver": {"damping": cfg.damping, "tolerance": cfg.tolerance,
                    "max_iterations": cfg.max_iterations}},
    )
    status = EXIT_OK
    try:
        state = solve_steady_state(rates, p, cfg)
        payload = {"schema_version": 1, "converged": True, **state.to_dict()}
    except NonConvergenceError as exc:
        state = exc.best
        payload = {"schema_version": 1, "converged": False, **state.to_dict()}
        status = EXIT_NO_CONVERGENCE
        print(f"warning: {exc}", file=sys.stderr)
    _emit(args.out, json.dumps(payload, indent=2) + "\n", manifest)
    return status


def cmd_phases(args) -> int:
    p = ModelParams(args.alpha, args.beta)
    if args.mode == "z":
        grid, za_ax, zb_ax = phase_diagram_z(p, args.resolution, v_tol=args.v_tol)
        manifest = Manifest(
            "phases",
            {"mode": "z", "alpha": p.alpha, "beta": p.beta,
             "resolution": args.resolution, "v_tol": args.v_tol},
        )

        def rows(fh):
            fh.write("z_alpha,z_beta,phase\n")
            for j, zb in enumerate(zb_ax):
                for i, za in enumerate(za_ax):
                    code = grid[j, i]
                    if code == PHASE_CODE_ABSENT:
                        label = ""
                    elif code == PHASE_CODE_DIAGONAL:
                        label = DIAGONAL_DEGENERATE
                    else:
                        label = phase_name(ALLOWED_PHASES[code])
                    fh.write(f"{za:.10g},{zb:.10g},{label}\n")

        _emit(args.out, render_csv(rows), manifest)
        if args.svg:
            from .plotting import plot_phase_grid

            plot_phase_grid(grid, za_ax, zb_ax, p, args.svg)
            manifest.outputs.append(args.svg)
            if args.out:
                manifest.write(args.out + ".manifest.json")
        return EXIT_OK

    # rates mode: two-axis boundary-rate sweep around an all-equal base
    base = BoundaryRates(*(args.base_rate,) * 6)
    sweep = RateSweep(args.axis_x, tuple(args.range_x), args.axis_y,
                      tuple(args.range_y), base)
    cells, xs, ys = phase_diagram_rates(p, sweep, args.resolution)
    manifest = Manifest(
        "phases",
        {"mode": "rates", "alpha": p.alpha, "beta": p.beta,
         "resolution": args.resolution, "axis_x": args.axis_x,
         "axis_y": args.axis_y, "range_x": list(args.range_x),
         "range_y": list(args.range_y), "base_rate": args.base_rate},
    )

    def rows(fh):
        fh.write(f"{args.axis_x},{args.axis_y},phase,converged,"
                 "rho_bulk_circ,rho_bulk_bullet\n")
        for row in cells:
            for cell in row:
                if cell.converged:
                    st = cell.state
                    fh.write(
                        f"{cell.rate_x:.10g},{cell.rate_y:.10g},"
                        f"{phase_name(st.phase)},1,"
                        f"{st.rho_bulk.rho_circ:.10g},{st.rho_bulk.rho_bullet:.10g}\n"
                    )
                else:
                    fh.write(f"{cell.rate_x:.10g},{cell.rate_y:.10g},,0,,\n")

    _emit(args.out, render_csv(rows), manifest)
    return EXIT_OK


def cmd_simulate(args) -> int:
    p = ModelParams(args.alpha, args.beta)
    topology = kmc.Topology(args.topology)
    boundary = _boundary_from_args(args) if topology == kmc.Topology.OPEN else None
    cfg = kmc.SimConfig(
        length=args.length, params=p, topology=topology, boundary=boundary,
        t_burn=args.t_burn, t_measure=args.t_measure, seed=args.seed,
        initial_fill=Densities(*args.fill),
    )
    manifest = Manifest(
        "simulate",
        {"alpha": p.alpha, "beta": p.beta, "topology": args.topology,
         "length": args.length, "t_burn": cfg.burn_time,
         "t_measure": cfg.measure_time,
         "rates": asdict(boundary) if boundary else None,
         "fill": list(args.fill)},
        seeds=[args.seed],
    )
    m = kmc.run(cfg)

    payload = {
        "schema_version": 1,
        "j_circ": m.j_circ, "j_circ_err": m.j_circ_err,
        "j_bullet": m.j_bullet, "j_bullet_err": m.j_bullet_err,
        "rho_site1": [m.rho_site1.rho_circ, m.rho_site1.rho_bullet],
        "rho_siteL": [m.rho_siteL.rho_circ, m.rho_siteL.rho_bullet],
        "rho_bulk": [m.rho_bulk_estimate.rho_circ, m.rho_bulk_estimate.rho_bullet],
        "total_time": m.total_time,
        "n_events": m.n_events,
        "seed": m.seed,
    }
    if m.boundary_currents is not None:
        payload["boundary_currents"] = {
            side: [c.j_circ, c.j_bullet]
            for side, c in m.boundary_currents.items()
        }
    _emit(args.out, json.dumps(payload, indent=2) + "\n", manifest)

    if args.profile_out:
        def rows(fh):
            fh.write("site,rho_circ,rho_bullet\n")
            for i in range(cfg.length):
                fh.write(f"{i + 1},{m.profile_circ[i]:.8g},{m.profile_bullet[i]:.8g}\n")

        write_text_atomic(args.profile_out, render_csv(rows))
        manifest.outputs.append(args.profile_out)
        if args.out:
            manifest.write(args.out + ".manifest.json")
    if args.plot:
        from .plotting import plot_density_profile

        plot_density_profile(
            np.arange(1, cfg.length + 1), m.profile_circ, m.profile_bullet, args.plot
        )
    return EXIT_OK


def cmd_validate(args) -> int:
    if args.suite not in SUITES:
        print(f"error: unknown suite {args.suite!r}; choose from "
              f"{', '.join(sorted(SUITES))}", file=sys.stderr)
        return EXIT_BAD_INPUT
    results = run_suite(args.suite)
    width = max(len(r.name) for r in results)
    all_ok = True
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        all_ok = all_ok and r.passed
        print(f"{r.name:<{width}}  {mark}  [{r.seconds:7.2f}s]  {r.detail}")
    return EXIT_OK if all_ok else EXIT_CHECK_FAILED


def _add_rate_flags(sub):
    sub.add_argument("--config", help="JSON config file with alpha/beta/rates")
    sub.add_argument("--nu", type=float,
                     help="set all six boundary rates to this value")
    for k in _RATE_KEYS:
        sub.add_argument(f"--{k.replace('_', '-')}", dest=k, type=float)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="twotasep",
        description="Hydrodynamics of the two-species TASEP: Riemann problems, "
                    "open-boundary steady states, phase diagrams and "
                    "kinetic Monte Carlo.",
    )
    ap.add_argument("--threads", type=int, default=1,
                    help="internal parallelism hint (results are independent of it)")
    sp = ap.add_subparsers(dest="command", required=True)

    r = sp.add_parser("riemann", help="solve a Riemann problem, sample the profile")
    r.add_argument("--alpha", type=float, required=True)
    r.add_argument("--beta", type=float, required=True)
    r.add_argument("--zl", type=_pair, help="left state 'z_alpha,z_beta'")
    r.add_argument("--zr", type=_pair, help="right state 'z_alpha,z_beta'")
    r.add_argument("--rhol", type=_pair, help="left state 'rho_circ,rho_bullet'")
    r.add_argument("--rhor", type=_pair, help="right state 'rho_circ,rho_bullet'")
    r.add_argument("--xi-samples", type=int, default=201)
    r.add_argument("--out", help="profile CSV path (default: stdout)")
    r.add_argument("--plot", help="also render the profile to this image file")
    r.set_defaults(fn=cmd_riemann)

    s = sp.add_parser("steady", help="open-boundary steady state")
    s.add_argument("--alpha", type=float, default=0.8)
    s.add_argument("--beta", type=float, default=0.9)
    _add_rate_flags(s)
    s.add_argument("--damping", type=float, default=0.5)
    s.add_argument("--tolerance", type=float, default=1e-10)
    s.add_argument("--max-iter", type=int, default=100_000)
    s.add_argument("--out", help="JSON path (default: stdout)")
    s.set_defaults(fn=cmd_steady)

    ph = sp.add_parser("phases", help="phase diagram over z or boundary rates")
    ph.add_argument("--mode", choices=["z", "rates"], default="z")
    ph.add_argument("--alpha", type=float, default=0.8)
    ph.add_argument("--beta", type=float, default=0.9)
    ph.add_argument("--resolution", type=int, default=200)
    ph.add_argument("--v-tol", type=float, default=None,
                    help="bulk-induction velocity tolerance "
                         "(default: two grid cells)")
    ph.add_argument("--axis-x", default="nu_bullet_star_l")
    ph.add_argument("--axis-y", default="nu_star_circ_r")
    ph.add_argument("--range-x", type=_pair, default=(0.1, 1.5))
    ph.add_argument("--range-y", type=_pair, default=(0.1, 1.5))
    ph.add_argument("--base-rate", type=float, default=0.5)
    ph.add_argument("--out", help="CSV path (default: stdout)")
    ph.add_argument("--svg", help="render the grid to this SVG file (z mode)")
    ph.set_defaults(fn=cmd_phases)

    sim = sp.add_parser("simulate", help="kinetic Monte Carlo run")
    sim.add_argument("--alpha", type=float, default=0.8)
    sim.add_argument("--beta", type=float, default=0.9)
    sim.add_argument("--topology", choices=["ring", "open"], default="ring")
    sim.add_argument("--length", type=int, default=1000)
    sim.add_argument("--t-burn", type=float, default=None)
    sim.add_argument("--t-measure", type=float, default=None)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--fill", type=_pair, default=(1 / 3, 1 / 3),
                     help="initial densities 'rho_circ,rho_bullet'")
    _add_rate_flags(sim)
    sim.add_argument("--out", help="measurement JSON path (default: stdout)")
    sim.add_argument("--profile-out", help="per-site density CSV path")
    sim.add_argument("--plot", help="render the density profile to this image file")
    sim.set_defaults(fn=cmd_simulate)

    v = sp.add_parser("validate", help="run a named validation suite")
    v.add_argument("suite")
    v.set_defaults(fn=cmd_validate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "phases" and args.v_tol is None:
        p = ModelParams(args.alpha, args.beta)
        args.v_tol = 2.0 * max(p.z_alpha_max, p.z_beta_max) / args.resolution
    try:
        return args.fn(args)
    except TwoTasepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
