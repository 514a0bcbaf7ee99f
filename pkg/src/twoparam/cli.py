"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 usage or input
error, 3 the computation left its domain (chart escape, turning point).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from twoparam import __version__
from twoparam import dynamics as dyn
from twoparam import group as grp
from twoparam import lie
from twoparam import modes as md
from twoparam.errors import (
    ChartDomainError,
    ChartEscapeError,
    EvanescentError,
    InvalidInputError,
    TurningPointError,
    TwoParamError,
)
from twoparam.export import QUANTITIES, export_grid
from twoparam.verify import SUITES, RunConfig, load_config, render, run_verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _config(args) -> RunConfig:
    return load_config(args.config) if args.config else RunConfig()


def _floats(values):
    return [float(v) for v in values]


# ----------------------------------------------------------------------------
# verbs


def cmd_verify(args) -> int:
    suites = []
    for item in args.suite or []:
        suites.extend(s for s in item.split(",") if s)
    report = run_verify(_config(args), suites or None, workers=args.workers)
    if args.json:
        print(render(report, metadata=args.metadata))
    else:
        for c in report.checks:
            res = "-" if c.residual is None else f"{c.residual:.3g}"
            tol = "-" if c.tolerance is None else f"{c.tolerance:.3g}"
            print(f"{c.status.upper():8s} {c.id:55s} residual={res} tol={tol}")
        counts = report.counts()
        print(f"{counts['pass']} passed, {counts['flagged']} flagged, {counts['fail']} failed")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_geodesic(args) -> int:
    cfg = _config(args).geometry
    x0 = _floats(args.x0)
    s0 = dyn.KinState.of(np.array([x0[0]]), np.array([x0[1:]]), np.array([_floats(args.v)]))
    traj = dyn.integrate_free_motion(s0, args.t_end, args.step, cfg)
    err = traj.straightness_error()[:, 0]
    _emit({
        "t_end": float(traj.times[-1]),
        "steps": len(traj.times) - 1,
        "final_position": traj.positions[-1, 0].tolist(),
        "final_velocity": traj.velocities[-1, 0].tolist(),
        "max_straightness_error": float(err.max()),
    })
    return EXIT_OK


def cmd_modes(args) -> int:
    cfg = _config(args)
    params = md.ModeParams(args.m2, args.xi, args.kk, args.sign)
    s = np.linspace(cfg.grid_min, cfg.grid_max, cfg.grid_nodes)
    if args.csv:
        print(export_grid(cfg, "modes", "-", m2=args.m2, xi=args.xi, kk=args.kk, sign=args.sign),
              end="")
        return EXIT_OK
    out = {"params": {"m2": args.m2, "xi": args.xi, "kk": args.kk, "sign": args.sign}}
    if params.mass_term == 0 and params.kk > 1:
        out["exact_residual_max"] = float(md.exact_residual(args.kk, args.sign, s).max())
        c0, d0, _ = md.exact_massless_jet(args.kk, args.sign, s[0])
        sol = md.solve_mode_ode(params, complex(c0), complex(d0), s[0], s[-1], args.step)
        out["ode_vs_exact_max"] = float(
            np.abs(sol.chi - md.exact_massless(args.kk, args.sign, sol.grid)).max())
    else:
        sol = md.solve_mode_ode(params, 1.0, 0.0, s[0], s[-1], args.step)
    out["ode_residual_max"] = float(md.ode_residual(sol, params).max())
    out["abs_chi_end"] = float(abs(sol.chi[-1]))
    _emit(out)
    return EXIT_OK


def cmd_wkb(args) -> int:
    cfg = _config(args)
    params = md.ModeParams(args.m2, args.xi, args.kk, 1)
    st = md.wkb_initial(params, cfg.grid_min, cfg.grid_max, cfg.grid_nodes)
    history = []
    for _ in range(args.order):
        nxt = md.wkb_iterate(st, params)
        change = np.abs(nxt.w - st.w[2:-2]).max() / np.abs(st.w).max()
        history.append({"order": nxt.order, "nodes": len(nxt.grid), "relative_change": float(change)})
        st = nxt
    _emit({"params": {"m2": args.m2, "xi": args.xi, "kk": args.kk}, "iterations": history,
           "w_range": [float(st.w.min()), float(st.w.max())]})
    return EXIT_OK


def cmd_unruh(args) -> int:
    rep = md.amplitude_report(args.de, args.kk, args.sign)
    omega = rep["omega"]
    quad = md.fourier_oracle(omega)
    rep["fourier_oracle"] = {"real": quad.real, "imag": quad.imag,
                             "closed_form": float(md.fourier_closed_form(omega))}
    _emit(rep)
    return EXIT_OK


def cmd_invariants(args) -> int:
    spec = lie.subalgebra(args.spec, args.sign)
    basis = lie.invariant_space(spec, args.species, args.convention)
    out = basis.to_json()
    out["subalgebra"] = {"name": spec.name, "sign": spec.sign, "generators": list(spec.generators)}
    _emit(out)
    return EXIT_OK


def cmd_transform(args) -> int:
    cfg = _config(args).geometry
    g = grp.sample_group_element(args.seed, args.scale, cfg.branch)
    x = np.asarray(_floats(args.x))
    xp = grp.flt_apply(g, x, cfg)
    res = grp.verify_B_invariance(g, x, cfg)
    _emit({"seed": args.seed, "x": x.tolist(), "x_image": xp.tolist(),
           "invariance_residual": float(np.abs(res).max()),
           "projective_agreement": float(np.abs(xp - grp.projective_apply(g, x, cfg)).max())})
    return EXIT_OK


def cmd_export(args) -> int:
    cfg = _config(args)
    opts = {k: v for k, v in (("m2", args.m2), ("xi", args.xi), ("kk", args.kk),
                               ("order", args.order), ("field", args.field)) if v is not None}
    text = export_grid(cfg, args.quantity, args.out, **opts)
    if args.out == "-":
        print(text, end="")
    else:
        print(f"wrote {args.quantity} table to {args.out}", file=sys.stderr)
    return EXIT_OK


# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twoparam", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", help="flat key = value file with RunConfig fields")
        sp.set_defaults(func=fn)
        return sp

    sp = verb("verify", cmd_verify, "run verification suites")
    sp.add_argument("--suite", action="append", help=f"one of {', '.join(SUITES)} (repeatable)")
    sp.add_argument("--json", action="store_true", help="print the JSON report")
    sp.add_argument("--metadata", action="store_true", help="include runtimes in the JSON")
    sp.add_argument("--workers", type=int, default=1)

    sp = verb("geodesic", cmd_geodesic, "integrate free motion from one state")
    sp.add_argument("--x0", nargs=4, required=True, metavar=("T", "X1", "X2", "X3"))
    sp.add_argument("--v", nargs=3, required=True, metavar=("V1", "V2", "V3"))
    sp.add_argument("--t-end", type=float, default=0.5)
    sp.add_argument("--step", type=float, default=0.01)

    sp = verb("modes", cmd_modes, "solve the mode equation")
    sp.add_argument("--m2", type=float, default=0.0)
    sp.add_argument("--xi", type=float, default=0.0)
    sp.add_argument("--kk", type=float, default=2.0)
    sp.add_argument("--sign", type=int, choices=(1, -1), default=1)
    sp.add_argument("--step", type=float, default=0.01)
    sp.add_argument("--csv", action="store_true", help="print the mode table as CSV")

    sp = verb("wkb", cmd_wkb, "iterate the WKB frequency equation")
    sp.add_argument("--order", type=int, default=1)
    sp.add_argument("--m2", type=float, default=1.0)
    sp.add_argument("--xi", type=float, default=0.0)
    sp.add_argument("--kk", type=float, default=10.0)

    sp = verb("unruh", cmd_unruh, "static-detector transition amplitude")
    sp.add_argument("--de", type=float, required=True)
    sp.add_argument("--kk", type=float, required=True)
    sp.add_argument("--sign", type=int, choices=(1, -1), default=1)

    sp = verb("invariants", cmd_invariants, "invariant tensors of a subalgebra")
    sp.add_argument("--spec", required=True, help="TypeI, TypeII, H1..H8, K1..K5, o14, Example1")
    sp.add_argument("--species", required=True, choices=lie.SPECIES)
    sp.add_argument("--convention", choices=lie.CONVENTIONS, default="contravariant")
    sp.add_argument("--sign", choices=("+", "-"), default="+")

    sp = verb("transform", cmd_transform, "apply a sampled group element to a point")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--x", nargs=4, default=["0.1", "0.2", "-0.1", "0.05"],
                    metavar=("X0", "X1", "X2", "X3"))
    sp.add_argument("--scale", type=float, default=0.5)

    sp = verb("export", cmd_export, "write a CSV table")
    sp.add_argument("--quantity", required=True, choices=QUANTITIES)
    sp.add_argument("--out", required=True, help="output path, or - for stdout")
    sp.add_argument("--m2", type=float)
    sp.add_argument("--xi", type=float)
    sp.add_argument("--kk", type=float)
    sp.add_argument("--order", type=int)
    sp.add_argument("--field", choices=("metric_B", "ym", "bi"))
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ChartEscapeError, ChartDomainError, TurningPointError, EvanescentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (InvalidInputError, TwoParamError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
