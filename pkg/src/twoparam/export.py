"""Plot-ready CSV tables. Floats are written with ``repr`` so equal inputs give
byte-identical files."""

from __future__ import annotations

import csv
import io
import os

import numpy as np

from twoparam import dynamics as dyn
from twoparam import geometry as geo
from twoparam import modes as md
from twoparam.errors import InvalidInputError

__all__ = [
    "QUANTITIES",
    "write_csv",
    "mode_table",
    "wkb_table",
    "amplitude_table",
    "trajectory_table",
    "density_table",
    "export_grid",
]

QUANTITIES = ("modes", "wkb", "amplitude", "trajectory", "density")


def _cell(v) -> str:
    if isinstance(v, (str, int, np.integer)):
        return str(v)
    return repr(float(v))


def to_csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows) -> str:
    """Write a table; ``path="-"`` returns the text without touching the filesystem."""
    text = to_csv_text(header, rows)
    if path == "-":
        return text
    try:
        with open(os.fspath(path), "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise InvalidInputError(f"cannot write {path}: {exc.strerror or exc}") from None
    return text


def mode_table(params: md.ModeParams, grid):
    """Columns s, re_chi, im_chi, abs_chi, w.

    The massless case with k.k > 1 uses the closed form. Otherwise the mode
    equation is integrated from the left edge with first-order WKB data.
    """
    grid = np.asarray(grid, dtype=float)
    header = ["s", "re_chi", "im_chi", "abs_chi", "w"]
    if grid.size == 0:
        return header, []
    w = np.abs(md.wkb_w0_cosh(params, grid))
    if params.mass_term == 0 and params.kk > 1:
        chi = md.exact_massless(params.kk, params.sign, grid)
    else:
        s0 = grid[0]
        c0 = 0.5 / np.cosh(s0) / np.sqrt(w[0])
        d0 = c0 * (-np.tanh(s0) + 1j * params.sign * w[0])
        step = (grid[-1] - s0) / max(1, len(grid) - 1)
        sol = md.solve_mode_ode(params, c0, d0, s0, grid[-1], step if step > 0 else 1.0)
        chi = sol.chi if len(sol.chi) == len(grid) else np.interp(grid, sol.grid, sol.chi)
    rows = zip(grid, chi.real, chi.imag, np.abs(chi), w)
    return header, list(rows)


def wkb_table(params: md.ModeParams, grid, order: int = 1):
    """Columns s and w_n; each iteration trims two nodes from either end."""
    header = ["s", f"w{order}"]
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        return header, []
    st = md.WKBState(grid, np.abs(md.wkb_w0_cosh(params, grid)), 0)
    for _ in range(order):
        st = md.wkb_iterate(st, params)
    return header, list(zip(st.grid, st.w))


def amplitude_table(de_values, kk_values, sign: int = 1):
    header = ["delta_e", "kk", "amplitude"]
    rows = []
    for kk in np.asarray(kk_values, dtype=float):
        for de in np.asarray(de_values, dtype=float):
            rows.append((de, kk, float(md.unruh_amplitude(de, kk, sign))))
    return header, rows


def trajectory_table(cfg: geo.GeometryConfig, n: int = 10, seed: int = 0, t_end: float = 0.5,
                     step: float = 0.01):
    """Sampled free-motion trajectories with their straight-line deviation."""
    header = ["trajectory", "t", "x1", "x2", "x3", "v1", "v2", "v3", "straightness_error"]
    if n == 0:
        return header, []
    rng = np.random.default_rng(seed)
    scale = cfg.l1 * np.sqrt(abs(cfg.b))
    s0 = dyn.KinState.of(np.zeros(n), rng.uniform(-0.2, 0.2, (n, 3)) * scale,
                         rng.uniform(-0.3, 0.3, (n, 3)))
    traj = dyn.integrate_free_motion(s0, t_end, step, cfg)
    err = traj.straightness_error()
    rows = []
    for k in range(n):
        for i, t in enumerate(traj.times):
            rows.append((k, t, *traj.positions[i, k], *traj.velocities[i, k], err[i, k]))
    return header, rows


def density_table(points, quantity: str = "ym", ca: float = 0.7, cb: float = -0.4, cc: float = 0.3,
                  cfg: geo.GeometryConfig = geo.DEFAULT):
    """Point coordinates followed by the flattened components of a field."""
    pts = np.asarray(points, dtype=float).reshape(-1, 4)
    if len(pts) == 0:
        probe = geo.eval_grid(quantity, np.zeros((1, 4)), ca=ca, cb=cb, cc=cc, cfg=cfg)[2]
        return ["x0", "x1", "x2", "x3", *probe], []
    pts, flat, labels = geo.eval_grid(quantity, pts, ca=ca, cb=cb, cc=cc, cfg=cfg)
    return ["x0", "x1", "x2", "x3", *labels], [(*p, *f) for p, f in zip(pts, flat)]


def export_grid(config, quantity: str, path, **opts) -> str:
    """Dispatch on ``quantity`` using the grid and geometry of a :class:`RunConfig`.

    Keyword options override the defaults: ``m2``, ``xi``, ``kk``, ``sign``,
    ``order``, ``de_values``, ``kk_values``, ``n``, ``points``, ``field``,
    ``grid``.
    """
    if quantity not in QUANTITIES:
        raise InvalidInputError(f"unknown quantity {quantity!r}; choose from {list(QUANTITIES)}")
    grid = opts.get("grid")
    if grid is None:
        grid = np.linspace(config.grid_min, config.grid_max, config.grid_nodes)
    params = md.ModeParams(opts.get("m2", 0.0), opts.get("xi", 0.0), opts.get("kk", 2.0),
                           opts.get("sign", 1))
    if quantity == "modes":
        header, rows = mode_table(params, grid)
    elif quantity == "wkb":
        header, rows = wkb_table(params, grid, opts.get("order", 1))
    elif quantity == "amplitude":
        de = opts.get("de_values", np.linspace(0.0, 10.0, 41))
        kk = opts.get("kk_values", (1.5, 2.0, 5.0, 10.0))
        header, rows = amplitude_table(de, kk, opts.get("sign", 1))
    elif quantity == "trajectory":
        header, rows = trajectory_table(config.geometry, opts.get("n", 10), config.seed)
    else:
        points = opts.get("points")
        if points is None:
            rng = np.random.default_rng(config.seed)
            points = rng.uniform(-0.4, 0.4, (config.samples, 4))
            points = points[geo.in_chart(points)]
        header, rows = density_table(points, opts.get("field", "ym"))
    return write_csv(path, header, rows)
