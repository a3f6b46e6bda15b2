"""Command-line front end.

    python -m hyperinv selftest
    python -m hyperinv transform-table --z-re 1 --output table.csv
    python -m hyperinv disk-recon --grid-n 21 --grid-extent 0.6
    python -m hyperinv surface-recon --K -4
    python -m hyperinv limit-study

Exit codes: 0 success, 1 failed self-test, 2 usage error, 3 bad input data.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import RectBivariateSpline, RegularGridInterpolator, griddata

from . import geometry as geo
from . import numerics, spherical
from . import surface as surf
from . import xray_disk as xd

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3

FIELD_HEADER = ["x", "y", "value_re", "value_im"]
TRANSFORM_HEADER = [
    "lambda", "tau_quad_re", "tau_quad_im", "tau_closed_re", "tau_closed_im",
    "sigma_closed_re", "sigma_closed_im", "product_re", "product_im",
    "target_re", "target_im", "residual",
]
KERNEL_HEADER = ["r", "tau_re", "tau_im", "sigma_re", "sigma_im", "tau_sinh_re", "tau_sinh_im"]
RECON_HEADER = ["x", "y", "f_true", "f_reconstructed", "abs_error"]

COMMANDS = ("selftest", "disk-recon", "surface-recon", "transform-table", "kernel-table", "limit-study")
DEFAULT_GRID_N = {"disk-recon": 21, "surface-recon": 5, "limit-study": 3}


class InputError(Exception):
    pass


def fmt(v) -> str:
    return format(float(v), ".17g")


# ---------------------------------------------------------------------------
# argument handling


def _float_list(text):
    text = text.strip()
    if not text:
        return []
    try:
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def build_parser():
    p = argparse.ArgumentParser(
        prog="hyperinv",
        description="Attenuated geodesic normal operators on the disk and a genus-2 surface.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p.add_argument("command", choices=COMMANDS, help="what to run")
    p.add_argument("--z-re", type=float, default=0.5, help="real part of the attenuation z")
    p.add_argument("--z-im", type=float, default=0.0, help="imaginary part of z")
    p.add_argument("--K", type=float, default=-1.0, help="constant curvature (negative)")
    p.add_argument("--n-theta", type=int, default=64, help="fiber directions per point")
    p.add_argument("--n-r", type=int, default=600, help="Gauss-Legendre nodes along each ray")
    p.add_argument("--radius", type=float, default=None,
                   help="bump support radius; None means 1.0 on the disk and the largest radius "
                        "keeping a 0.2 margin inside the octagon on the surface")
    p.add_argument("--fd-step", type=float, default=1e-3, help="finite-difference step of the Laplacian")
    p.add_argument("--grid-n", type=int, default=None,
                   help="samples per axis; None means 21 (disk-recon), 5 (surface-recon), 3 (limit-study)")
    p.add_argument("--grid-extent", type=float, default=0.6, help="grid covers [-extent, extent]^2 in disk coordinates")
    p.add_argument("--input", type=Path, default=None,
                   help="field CSV with header x,y,value_re,value_im (disk-recon only); None uses the built-in bump")
    p.add_argument("--output", type=Path, default=None, help="output CSV; None means <command>.csv")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized self-test fields")
    p.add_argument("--allow-noncompact", action="store_true",
                   help="extend CSV fields by their nearest value instead of zero outside the sample hull")
    p.add_argument("--lambdas", type=_float_list, default=[0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0],
                   help="comma-separated spectral parameters for transform-table (empty string for none)")
    p.add_argument("--r-values", type=_float_list, default=[0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0],
                   help="comma-separated radii for kernel-table")
    p.add_argument("--z-list", type=_float_list, default=[0.4, 0.2, 0.1, 0.05],
                   help="attenuations used by limit-study")
    p.add_argument("--orbit-cutoff", type=float, default=12.0,
                   help="orbit-sum cutoff distance for surface data")
    p.add_argument("--perturb-octagon", type=float, default=0.0,
                   help="distort the octagon translation lengths and skip its self-check (negative control)")
    return p


@dataclass(frozen=True)
class RunConfig:
    command: str
    z: complex
    K: float
    res: xd.OperatorResolution
    radius: float | None
    grid_n: int
    grid_extent: float
    input: Path | None
    output: Path
    seed: int
    allow_noncompact: bool
    lambdas: tuple
    r_values: tuple
    z_list: tuple
    orbit_cutoff: float
    perturb_octagon: float


def parse_config(argv=None) -> RunConfig:
    parser = build_parser()
    a = parser.parse_args(argv)
    problems = []
    if not a.K < 0:
        problems.append("--K must be negative")
    if a.command != "selftest" and a.command != "kernel-table" and not a.z_re > 0:
        problems.append("--z-re must be positive")
    if a.command == "kernel-table" and not a.z_re > 0:
        problems.append("--z-re must be positive")
    if a.n_theta < 4:
        problems.append("--n-theta must be at least 4")
    if a.n_r < 2:
        problems.append("--n-r must be at least 2")
    if not a.fd_step > 0:
        problems.append("--fd-step must be positive")
    if a.radius is not None and not a.radius > 0:
        problems.append("--radius must be positive")
    grid_n = a.grid_n if a.grid_n is not None else DEFAULT_GRID_N.get(a.command, 5)
    if grid_n < 1:
        problems.append("--grid-n must be at least 1")
    if not 0 <= a.grid_extent < 1:
        problems.append("--grid-extent must lie in [0, 1)")
    if a.input is not None and a.command != "disk-recon":
        problems.append("--input is only used by disk-recon")
    if any(r < 0 for r in a.r_values):
        problems.append("--r-values must be non-negative")
    if a.command == "limit-study":
        if len(a.z_list) < 3 or any(not 0 < z <= 0.5 for z in a.z_list):
            problems.append("--z-list needs at least three values in (0, 0.5]")
    if not a.orbit_cutoff > 4:
        problems.append("--orbit-cutoff must exceed 4")
    if problems:
        parser.error("; ".join(problems))
    output = a.output if a.output is not None else Path(f"{a.command}.csv")
    res = xd.OperatorResolution(n_theta=a.n_theta, n_r=a.n_r, h=a.fd_step)
    return RunConfig(
        a.command, complex(a.z_re, a.z_im), a.K, res, a.radius, grid_n, a.grid_extent,
        a.input, output, a.seed, a.allow_noncompact, tuple(a.lambdas), tuple(a.r_values),
        tuple(a.z_list), a.orbit_cutoff, a.perturb_octagon,
    )


# ---------------------------------------------------------------------------
# output helpers


def write_csv(path: Path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else fmt(v) for v in row])


def write_plot_script(csv_path: Path, value_column: str = "f_reconstructed"):
    """A gnuplot script drawing the reconstruction and its error as heat maps."""
    script = csv_path.with_suffix(".gp")
    header = read_header(csv_path)
    vcol = header.index(value_column) + 1
    ecol = header.index("abs_error") + 1
    text = f"""# generated by hyperinv; run with: gnuplot {script.name}
set datafile separator ','
set key autotitle columnhead
set terminal pngcairo size 1200,500
set output '{csv_path.stem}.png'
set multiplot layout 1,2
set size ratio -1
set view map
set title '{value_column}'
plot '{csv_path.name}' using 1:2:{vcol} with points pointtype 5 pointsize 1.5 palette notitle
set title 'abs_error'
plot '{csv_path.name}' using 1:2:{ecol} with points pointtype 5 pointsize 1.5 palette notitle
unset multiplot
"""
    script.write_text(text)
    return script


def read_header(path: Path):
    with open(path, newline="") as fh:
        return next(csv.reader(fh))


def grid_points(n, extent):
    xs = np.linspace(-extent, extent, n) if n > 1 else np.zeros(1)
    # row-major: y outer, x inner
    return np.array([complex(x, y) for y in xs for x in xs])


# ---------------------------------------------------------------------------
# field input


def read_field_csv(path: Path):
    try:
        fh = open(path, newline="")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}")
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != FIELD_HEADER:
            raise InputError(f"{path}: header must be exactly {','.join(FIELD_HEADER)}")
        pts, vals = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise InputError(f"{path}:{lineno}: expected 4 columns, got {len(row)}")
            try:
                x, y, vr, vi = (float(v) for v in row)
            except ValueError:
                raise InputError(f"{path}:{lineno}: non-numeric entry")
            if not all(math.isfinite(v) for v in (x, y, vr, vi)):
                raise InputError(f"{path}:{lineno}: non-finite entry")
            if not x * x + y * y < 1.0:
                raise InputError(f"{path}:{lineno}: point ({x}, {y}) is outside the unit disk")
            pts.append((x, y))
            vals.append(complex(vr, vi))
    if len(pts) < 3:
        raise InputError(f"{path}: need at least three samples")
    return np.array(pts), np.array(vals)


def field_from_samples(pts, vals, allow_noncompact=False, n_grid=201):
    """Resample scattered values to a grid and interpolate bilinearly on it."""
    axis = np.linspace(-1.0, 1.0, n_grid)
    X, Y = np.meshgrid(axis, axis, indexing="ij")
    parts = []
    for comp in (vals.real, vals.imag):
        try:
            lin = griddata(pts, comp, (X, Y), method="linear", fill_value=np.nan)
        except Exception as e:  # qhull errors for degenerate point sets
            raise InputError(f"cannot triangulate the samples: {e}")
        outside = np.isnan(lin)
        if allow_noncompact:
            lin[outside] = griddata(pts, comp, (X[outside], Y[outside]), method="nearest")
        else:
            lin[outside] = 0.0
        parts.append(RegularGridInterpolator((axis, axis), lin, method="linear", bounds_error=False, fill_value=0.0))
    bound = float(np.max(np.abs(vals))) * 1.1
    re, im = parts

    def ev(w):
        w = np.asarray(w, dtype=complex)
        xy = np.stack((w.real.ravel(), w.imag.ravel()), axis=-1)
        return (re(xy) + 1j * im(xy)).reshape(w.shape)

    support = math.inf
    if not allow_noncompact:
        support = float(np.max(geo.distance(pts[:, 0] + 1j * pts[:, 1], 0j)))
    return xd.ScalarField(ev, bound, support)


def tabulated_normal_op(f: xd.ScalarField, p: xd.AttenuationParam, res, r_max=8.0, dr=0.1, n_angle=64):
    """``Pi_0^(z) f`` on a polar grid about 0, interpolated by bicubic splines.

    Beyond ``r_max`` the data relax to the mean over the outermost circle
    (0 for compactly supported input).
    """
    r = np.arange(-3 * dr, r_max + 3.5 * dr, dr)
    da = 2 * math.pi / n_angle
    alpha = np.arange(-3, n_angle + 4) * da
    pts = np.tanh(r[:, None] / 2) * np.exp(1j * alpha[None, :])
    vals = xd.normal_op_attenuated(f, p, pts.ravel(), res).reshape(pts.shape)
    sre = RectBivariateSpline(r, alpha, vals.real, kx=3, ky=3, s=0)
    sim = RectBivariateSpline(r, alpha, vals.imag, kx=3, ky=3, s=0)
    outer = np.argmin(np.abs(r - r_max))
    far = complex(np.mean(vals[outer, 3 : 3 + n_angle])) if not math.isfinite(f.support_radius) else 0j

    def ev(w):
        w = np.asarray(w, dtype=complex)
        with np.errstate(divide="ignore"):
            rr = 2 * np.arctanh(np.minimum(np.abs(w), 1.0))
        aa = np.mod(np.angle(w), 2 * np.pi)
        inner = sre.ev(np.minimum(rr, r_max), aa) + 1j * sim.ev(np.minimum(rr, r_max), aa)
        s = np.clip((rr - (r_max - 1.0)), 0.0, 1.0)
        chi = 1.0 - s**3 * (10.0 - 15.0 * s + 6.0 * s * s)
        return far + chi * (inner - far)

    return xd.ScalarField(ev, float(np.max(np.abs(vals))) * 1.01 + 1e-300)


# ---------------------------------------------------------------------------
# commands


def run_transform_table(cfg: RunConfig):
    z = cfg.z
    kern = xd.kernel_tau(z)
    rows = []
    for lam in cfg.lambdas:
        quad = spherical.spherical_transform(kern, lam)
        tau = spherical.tau_tilde_closed(z, lam)
        sig = spherical.sigma_tilde_closed(z, lam)
        prod = tau * sig
        target = 4 * math.pi**2 / ((z + 0.5) ** 2 + lam**2)
        resid = max(abs(quad - tau) / abs(tau), abs(prod - target) / abs(target))
        rows.append([lam, quad.real, quad.imag, tau.real, tau.imag, sig.real, sig.imag,
                     prod.real, prod.imag, target.real, target.imag, resid])
    write_csv(cfg.output, TRANSFORM_HEADER, rows)
    worst = max((r[-1] for r in rows), default=0.0)
    print(f"wrote {len(rows)} rows to {cfg.output}; max residual {worst:.3e}")
    return EXIT_OK


def run_kernel_table(cfg: RunConfig):
    tau, sig = xd.kernel_tau(cfg.z), xd.kernel_sigma(cfg.z)
    rows = []
    for r in cfg.r_values:
        if r == 0:
            t = s = complex(math.inf)
        else:
            t, s = complex(tau(r)), complex(sig(r))
        ts = complex(tau.jacobian_form(r))
        rows.append([r, t.real, t.imag, s.real, s.imag, ts.real, ts.imag])
    write_csv(cfg.output, KERNEL_HEADER, rows)
    print(f"wrote {len(rows)} rows to {cfg.output}")
    return EXIT_OK


def _disk_inputs(cfg: RunConfig, p):
    if cfg.input is None:
        rho = cfg.radius if cfg.radius is not None else 1.0
        F = xd.smooth_bump(rho)
        truth = xd.radial_field(F, 1.0, rho)
        data = xd.radial_data_field(F, rho, p.z / p.sqrt_neg_k)
        # the tabulated profile is in the unit-curvature model
        k = p.sqrt_neg_k
        scaled = xd.ScalarField(lambda w: data(w) / k, data.bound / k)
        return truth, scaled
    pts, vals = read_field_csv(cfg.input)
    truth = field_from_samples(pts, vals, cfg.allow_noncompact)
    if not np.any(vals):
        return truth, xd.ScalarField(lambda w: np.zeros(np.shape(w), complex), 0.0)
    return truth, tabulated_normal_op(truth, p, cfg.res)


def _recon_rows(pts, truth, recon):
    rows = []
    for w, t, r in zip(pts, truth, recon):
        rows.append([w.real, w.imag, t.real, r.real, abs(r - t)])
    return rows


def run_disk_recon(cfg: RunConfig):
    p = xd.AttenuationParam(cfg.z, cfg.K)
    truth, data = _disk_inputs(cfg, p)
    pts = grid_points(cfg.grid_n, cfg.grid_extent)
    t0 = time.time()
    recon = xd.reconstruct_disk(data, p, pts, cfg.res)
    f_true = truth(pts)
    write_csv(cfg.output, RECON_HEADER, _recon_rows(pts, f_true, recon))
    write_plot_script(cfg.output)
    scale = max(float(np.max(np.abs(f_true))), 1e-300)
    err = float(np.max(np.abs(recon - f_true)))
    print(f"wrote {len(pts)} rows to {cfg.output} in {time.time() - t0:.1f} s; "
          f"max abs error {err:.3e}, relative {err / scale:.3e}")
    return EXIT_OK


def _surface_setup(cfg: RunConfig):
    G = surf.octagon_group(cfg.perturb_octagon, check=cfg.perturb_octagon == 0.0)
    f = surf.surface_bump(G, radius=cfg.radius)
    return G, f


def _lift_columns(pts, G):
    lifts = surf.reduce_points(pts, G)
    return lifts


def run_surface_recon(cfg: RunConfig):
    p = xd.AttenuationParam(cfg.z, cfg.K)
    G, f = _surface_setup(cfg)
    g = surf.orbit_normal_op_field(f, p, G, cutoff=cfg.orbit_cutoff)
    pts = grid_points(cfg.grid_n, cfg.grid_extent)
    lifts = _lift_columns(pts, G)
    recon = surf.reconstruct_surface(g, p, pts, G, cfg.res)
    f_true = f(lifts)
    rows = [row + [l.real, l.imag] for row, l in zip(_recon_rows(pts, f_true, recon), lifts)]
    write_csv(cfg.output, RECON_HEADER + ["lift_x", "lift_y"], rows)
    write_plot_script(cfg.output)
    err = float(np.max(np.abs(recon - f_true)))
    print(f"wrote {len(pts)} rows to {cfg.output}; max abs error {err:.3e}")
    return EXIT_OK


def run_limit_study(cfg: RunConfig):
    G, f = _surface_setup(cfg)
    pts = grid_points(cfg.grid_n, cfg.grid_extent)
    lifts = _lift_columns(pts, G)
    f0 = f.shifted(-surf.surface_mean(f, G).real)
    data = {}

    def provider(field, p):
        key = p.z
        if key not in data:
            data[key] = surf.orbit_normal_op_field(field, p, G, cutoff=cfg.orbit_cutoff)
        return data[key]

    zs = tuple(cfg.z_list)
    header = RECON_HEADER + ["lift_x", "lift_y"] + [f"recon_z{z:g}" for z in zs] + ["error_indicator"]
    rows = []
    for w, l in zip(pts, lifts):
        res = surf.reconstruct_surface_limit(f, provider, w, G, cfg.K, cfg.res, zs)
        t = complex(f0(l))
        rows.append([w.real, w.imag, t.real, res.value.real, abs(res.value - t), l.real, l.imag]
                    + [v.real for _, v in res.per_z] + [res.error])
    write_csv(cfg.output, header, rows)
    write_plot_script(cfg.output)
    print(f"wrote {len(rows)} rows to {cfg.output}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# self-test


def _selftest_rows(cfg: RunConfig):
    rng = np.random.default_rng(cfg.seed)
    rows = []

    def check(name, residual, tol):
        rows.append((name, float(residual), tol, bool(residual < tol)))

    zs, lams = (0.5, 1.0), (0.0, 1.0, 2.0)
    r = max(abs(spherical.spherical_transform(xd.kernel_tau(z), l) - spherical.tau_tilde_closed(z, l))
            / abs(spherical.tau_tilde_closed(z, l)) for z in zs for l in lams)
    check("gamma-int identity", r, 1e-6)

    r = max(abs(spherical.tau_tilde_closed(z, l) * spherical.sigma_tilde_closed(z, l) * ((z + 0.5) ** 2 + l * l)
                / (4 * math.pi**2) - 1) for z in zs for l in lams)
    check("sigma-times-tau product", r, 1e-12)

    rr = np.linspace(0.2, 3.0, 15)
    worst = 0.0
    for lam in (0.0, 1.0):
        F = lambda x: np.asarray(spherical.phi_lambda(lam, np.asarray(x)))
        lap = spherical.radial_laplacian(F, rr, 1e-3)
        resid = np.abs(lap + (lam**2 + 0.25) * F(rr)) / ((lam**2 + 0.25) * np.max(np.abs(F(rr))))
        worst = max(worst, float(np.max(resid)))
    check("spherical-function eigenvalue", worst, 1e-5)

    w = rng.uniform(-0.9, 0.9) * 0.5 + 0.3j * rng.uniform(-1, 1)
    p = xd.AttenuationParam(0.5, -1.0)
    one = xd.ScalarField(lambda x: np.ones(np.shape(x), complex), 1.0)
    check("constant normal operator", abs(xd.normal_op_attenuated(one, p, w) * 0.5 / (4 * math.pi) - 1), 1e-6)
    const_data = xd.ScalarField(lambda x: np.full(np.shape(x), 4 * math.pi / 0.5, complex), 4 * math.pi / 0.5)
    check("constant disk reconstruction", abs(xd.reconstruct_disk(const_data, p, w) - 1), 1e-6)

    ex = numerics.extrapolate_to_zero([(z, 3 - 2 * z + 5 * z * z) for z in (0.4, 0.2, 0.1)])
    check("neville exactness on quadratics", abs(ex.value - 3), 1e-12)

    G = surf.octagon_group(cfg.perturb_octagon, check=False)
    m = G.relator_product()
    check("octagon relator", max(abs(m.b), abs(abs(m.a.real) - 1)), 1e-7)
    side = 0.0
    for s, g in enumerate(G.pairings):
        src = np.array(G.side_endpoints((s + 4) % 8))
        dst = np.array(G.side_endpoints(s))
        img = g(src)
        side = max(side, min(np.max(np.abs(img - dst)), np.max(np.abs(img[::-1] - dst))))
    check("octagon side pairing", side, 1e-9)
    _, area = surf.surface_mean(lambda x: np.ones(np.shape(x)), G, return_area=True)
    check("Gauss-Bonnet area", abs(area / (4 * math.pi) - 1), 1e-3)

    q = 0.3 * rng.uniform(-1, 1) + 0.3j * rng.uniform(-1, 1)
    worst = 0.0
    for s in rng.integers(0, 8, size=4):
        back, _ = surf.reduce_to_fundamental(G.pairings[s](q), G)
        worst = max(worst, abs(back.coord - q))
    check("reduction round trip", worst, 1e-9)

    pk = xd.AttenuationParam(1.0, -4.0)
    pu, pref = surf.rescale_to_unit_curvature(pk)
    cdata = surf.SurfaceField(lambda x: np.full(np.shape(x), pref["pi"] * 4 * math.pi / pu.z.real, complex),
                              pref["pi"] * 4 * math.pi / pu.z.real)
    check("surface constant chain (K=-4)", abs(surf.reconstruct_surface(cdata, pk, q, G, mean_radius=3.0) - 1), 1e-6)

    worst = 0.0
    for _ in range(5):
        c = complex(*rng.uniform(-0.5, 0.5, 2))
        amp = rng.uniform(0.5, 2.0)
        fld = xd.ScalarField(lambda x, c=c, amp=amp: amp * np.cos(3 * x.real + 2 * x.imag + c.real), amp)
        val = abs(xd.normal_op_attenuated(fld, p, c))
        worst = max(worst, val / (4 * math.pi / p.z.real * amp))
    check("uniform bound on Pi_0^(z) (ratio)", worst, 1 + 1e-6)
    return rows


def run_selftest(cfg: RunConfig):
    rows = _selftest_rows(cfg)
    width = max(len(r[0]) for r in rows)
    print(f"{'check':<{width}}  {'residual':>12}  {'tolerance':>9}  verdict")
    for name, resid, tol, ok in rows:
        print(f"{name:<{width}}  {resid:12.3e}  {tol:9.3g}  {'pass' if ok else 'FAIL'}")
    failed = [r for r in rows if not r[3]]
    print(f"{len(rows) - len(failed)}/{len(rows)} checks passed")
    return EXIT_FAIL if failed else EXIT_OK


RUNNERS = {
    "selftest": run_selftest,
    "disk-recon": run_disk_recon,
    "surface-recon": run_surface_recon,
    "transform-table": run_transform_table,
    "kernel-table": run_kernel_table,
    "limit-study": run_limit_study,
}


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK
    try:
        return RUNNERS[cfg.command](cfg)
    except InputError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"cannot write output: {e.filename}: {e.strerror}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as e:
        print(f"invalid argument: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
