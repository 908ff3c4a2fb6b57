"""Command-line surface.

Inputs and outputs are in the units of the active configuration (natural
units by default: L = pi, hbar = 1, 2m = 1, E0 = 1; pass ``--config`` with
a JSON file for SI).  Matrices emitted by ``quantize`` are always in
internal dimensionless units (momentum in pi*hbar/L, energy in E0).
"""

from __future__ import annotations

import math
import sys

import click
import numpy as np

from . import coherent, dynamics, io, quantization
from .checks import SUITES, run_suite
from .eigensystem import eigen_basis, energy, norm_constant
from .model import GridSpec, load_config, natural_config
from .specfun import gauss_legendre


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="JSON config file (keys L, mass, hbar, nu, units, particle).")
@click.option("--nu", type=float, default=None, help="Potential strength (overrides config).")
@click.option("--nmax", type=int, default=64, show_default=True,
              help="Eigenbasis truncation.")
@click.option("--units", type=click.Choice(["SI", "natural"]), default="natural",
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed for randomized invariant sampling.")
@click.pass_context
def main(ctx, config_path, nu, nmax, units, seed):
    """SUSYQM coherent states for Poschl-Teller confining potentials."""
    if config_path is not None:
        cfg = load_config(config_path)
    elif units == "natural":
        cfg = natural_config(nu=nu or 0.0)
    else:
        raise click.UsageError("--units SI requires --config with physical values")
    if nu is not None:
        from .model import make_config
        cfg = make_config(cfg.L, cfg.mass, cfg.hbar, nu)
    ctx.obj = {"config": cfg, "nmax": nmax, "seed": seed}


def _cfg(ctx):
    return ctx.obj["config"]


@main.command()
@click.option("--count", type=int, default=8, show_default=True,
              help="Number of eigenstates in the table.")
@click.option("--samples", type=int, default=0,
              help="Sample the eigenfunctions on this many x points.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="CSV output for sampled eigenfunctions (columns x, phi_0, ...).")
@click.pass_context
def eigen(ctx, count, samples, out_path):
    """Dump the (n, E_n, Z_n) table and optionally sampled eigenfunctions."""
    cfg = _cfg(ctx)
    click.echo(f"# nu = {cfg.nu}, L = {cfg.L}, E0 = {cfg.E0:.17g}")
    click.echo("n,E_n,Z_n")
    for n in range(count):
        click.echo("%d,%.17g,%.17g"
                   % (n, energy(n, cfg.nu) * cfg.E0, norm_constant(n, cfg.nu, cfg.L)))
    if out_path:
        m = samples or 512
        x = np.linspace(0.0, cfg.L, m)
        basis = eigen_basis(cfg.nu, count - 1)
        vals = basis.values(math.pi * x / cfg.L) * math.sqrt(math.pi / cfg.L)
        with open(out_path, "w") as fh:
            fh.write("x," + ",".join(f"phi_{n}" for n in range(count)) + "\n")
            for j in range(m):
                fh.write("%.17g," % x[j]
                         + ",".join("%.17g" % vals[n, j] for n in range(count)) + "\n")
        click.echo(f"wrote {out_path}")


@main.command()
@click.option("--q", type=float, required=True)
@click.option("--p", type=float, required=True)
@click.option("--dump-wavefunction", "wf_path", type=click.Path(dir_okay=False))
@click.option("--dump-coeffs", "coeff_path", type=click.Path(dir_okay=False))
@click.option("--samples", type=int, default=1024, show_default=True)
@click.pass_context
def cs(ctx, q, p, wf_path, coeff_path, samples):
    """Construct a coherent state at label (q, p)."""
    cfg = _cfg(ctx)
    tq = math.pi * q / cfg.L
    pt = p / cfg.p_scale
    state = coherent.coherent_state(cfg.nu, tq, pt, nmax=ctx.obj["nmax"])
    click.echo(f"# label: q={q} p={p} nu={cfg.nu}")
    click.echo(f"eigenvalue = {state.eigenvalue.real:.12g} + {state.eigenvalue.imag:.12g}i"
               " (units pi*hbar/L)")
    click.echo(f"normalization N (internal units) = {state.normalization:.12g}")
    click.echo(f"truncation mass = {state.coeffs.truncation_mass:.6e}")
    if wf_path:
        x = np.linspace(0.0, cfg.L, samples)
        vals = coherent.cs_wavefunction(cfg.nu, q, p, x, L=cfg.L, hbar=cfg.hbar)
        with open(wf_path, "w") as fh:
            fh.write("x,re,im,abs2\n")
            for xi, v in zip(x, vals):
                fh.write("%.17g,%.17g,%.17g,%.17g\n"
                         % (xi, v.real, v.imag, abs(v) ** 2))
        click.echo(f"wrote {wf_path}")
    if coeff_path:
        with open(coeff_path, "w") as fh:
            fh.write("n,re,im,abs2\n")
            for n, c in enumerate(state.coeffs.coeffs):
                fh.write("%d,%.17g,%.17g,%.17g\n" % (n, c.real, c.imag, abs(c) ** 2))
        click.echo(f"wrote {coeff_path}")


def _parse_symbol(spec: str, nu: float):
    builtin_names = ("position", "superpotential", "inverse_sin_squared",
                     "momentum", "kinetic", "classical_hamiltonian")
    if spec in builtin_names:
        return quantization.builtin_symbol(spec, nu)
    expr, _, deg = spec.rpartition(":")
    if not expr:
        raise click.UsageError(
            f"--symbol must be one of {builtin_names} or 'expr:pdeg'")
    degree = int(deg)
    if degree not in (0, 1, 2):
        raise click.UsageError("p-degree must be 0, 1, or 2")
    namespace = {"sin": np.sin, "cos": np.cos, "tan": np.tan, "exp": np.exp,
                 "sqrt": np.sqrt, "log": np.log, "pi": math.pi, "abs": np.abs}

    def u(q):
        return eval(expr, {"__builtins__": {}}, dict(namespace, q=q))  # noqa: S307

    kwargs = {f"u{degree}": u}
    return quantization.ClassicalSymbol(name=spec, **kwargs)


@main.command(name="quantize")
@click.option("--symbol", "symbol_spec", required=True,
              help="Built-in name or 'u-expr:pdeg' with q in (0, pi).")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@click.pass_context
def quantize_cmd(ctx, symbol_spec, out_path):
    """Quantize a classical symbol; write the eigenbasis matrix as JSON."""
    cfg = _cfg(ctx)
    nmax = ctx.obj["nmax"]
    symbol = _parse_symbol(symbol_spec, cfg.nu)
    op = quantization.quantize(symbol, cfg.nu, nmax=nmax, as_matrix=True)
    io.emit_matrix_json(op.matrix, out_path)
    click.echo(f"wrote {out_path} (kind={op.kind}, internal units)")


@main.command()
@click.option("--q", type=float, required=True)
@click.option("--p", type=float, required=True)
@click.pass_context
def symbols(ctx, q, p):
    """Print a lower-symbol comparison report at the label (q, p)."""
    cfg = _cfg(ctx)
    nu = cfg.nu
    tq = math.pi * q / cfg.L
    pt = p / cfg.p_scale
    rows = []
    val = quantization.lower_symbol(
        quantization.known_operator("momentum_op", nu, nmax=ctx.obj["nmax"]), nu, tq, pt)
    rows.append(("momentum", val, pt))
    val = quantization.lower_symbol(
        quantization.known_operator("superpotential_op", nu), nu, tq, pt)
    rows.append(("superpotential", val, -(nu + 1.0) / math.tan(tq)))
    val = quantization.lower_symbol(
        quantization.known_operator("inverse_sin_squared_op", nu), nu, tq, pt)
    rows.append(("potential", val,
                 (2.0 * nu + 2.0) / (2.0 * nu + 1.0) / math.sin(tq) ** 2))
    val = quantization.lower_symbol(
        quantization.known_operator("kinetic_op", nu, nmax=ctx.obj["nmax"]), nu, tq, pt)
    rows.append(("kinetic", val,
                 pt**2 + (nu + 1.0) ** 2 / ((2.0 * nu + 1.0) * math.sin(tq) ** 2)))
    val = quantization.lower_symbol(
        quantization.known_operator("position_op", nu), nu, tq, pt)
    rows.append(("position", val, None))
    click.echo(f"# lower symbols at q={q}, p={p}, nu={nu} (internal units)")
    click.echo("name,measured,closed_form,delta")
    for name, measured, expect in rows:
        if expect is None:
            click.echo(f"{name},{measured:.12g},n/a,n/a")
        else:
            click.echo(f"{name},{measured:.12g},{expect:.12g},{measured - expect:+.3e}")


@main.command()
@click.option("--nu0cs", "--nu-cs", "nu_cs", type=float, default=None,
              help="CS family parameter for the analysis (defaults to --nu).")
@click.option("--q0", type=float, required=True)
@click.option("--p0", type=float, required=True)
@click.option("--t", "time_spec", default="0", show_default=True,
              help='Evolution time, or "avg" for the time-averaged distribution.')
@click.option("--qgrid", type=int, default=256, show_default=True)
@click.option("--pgrid", type=int, default=256, show_default=True)
@click.option("--pmax", type=float, default=12.0, show_default=True,
              help="Momentum bound in units of pi*hbar/L.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@click.pass_context
def husimi(ctx, nu_cs, q0, p0, time_spec, qgrid, pgrid, pmax, out_path):
    """Phase-space distribution of the (possibly evolved) coherent state."""
    cfg = _cfg(ctx)
    nu_cs = cfg.nu if nu_cs is None else nu_cs
    tq0 = math.pi * q0 / cfg.L
    pt0 = p0 / cfg.p_scale
    state = coherent.cs_coefficients(nu_cs, tq0, pt0, nmax=ctx.obj["nmax"], nu_basis=0.0)
    grid = GridSpec(q_count=qgrid, p_count=pgrid, p_max=pmax)
    if time_spec == "avg":
        dist = dynamics.time_averaged_husimi(state, nu_cs, grid)
    else:
        tt = float(time_spec) / cfg.t_scale
        dist = dynamics.husimi(dynamics.evolve(state, tt), nu_cs, grid)
    dist.meta.update({"nu_cs": nu_cs, "q0": q0, "p0": p0, "t": time_spec,
                      "units": "config", "L": cfg.L})
    io.emit_grid(dist, out_path, q_scale=cfg.L / math.pi, p_scale=cfg.p_scale,
                 rho_scale=1.0 / cfg.hbar)
    click.echo(f"wrote {out_path} (mass = {dist.mass:.8f})")


@main.command()
@click.option("--q0", type=float, required=True)
@click.option("--p0", type=float, required=True)
@click.option("--t", type=float, required=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@click.pass_context
def evolve(ctx, q0, p0, t, out_path):
    """Evolve the coherent state under the nu=0 Hamiltonian; dump coefficients."""
    cfg = _cfg(ctx)
    tq0 = math.pi * q0 / cfg.L
    pt0 = p0 / cfg.p_scale
    state = coherent.cs_coefficients(cfg.nu, tq0, pt0, nmax=ctx.obj["nmax"], nu_basis=0.0)
    evolved = dynamics.evolve(state, t / cfg.t_scale)
    with open(out_path, "w") as fh:
        fh.write("n,re,im,abs2\n")
        for n, c in enumerate(evolved.coeffs):
            fh.write("%d,%.17g,%.17g,%.17g\n" % (n, c.real, c.imag, abs(c) ** 2))
    click.echo(f"wrote {out_path}")


@main.command()
@click.option("--E", "energy_value", type=float, required=True,
              help="Semi-classical energy in config units.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@click.option("--points", type=int, default=400, show_default=True)
@click.pass_context
def trajectory(ctx, energy_value, out_path, points):
    """Classical phase trajectory at energy E."""
    cfg = _cfg(ctx)
    pts = dynamics.classical_trajectory(energy_value / cfg.E0, cfg.nu, n_points=points)
    io.emit_trajectory(pts, out_path, q_scale=cfg.L / math.pi, p_scale=cfg.p_scale,
                       meta={"E": energy_value, "nu": cfg.nu, "units": "config"})
    click.echo(f"wrote {out_path}")


@main.command()
@click.option("--suite", type=click.Choice(SUITES), default="all", show_default=True)
@click.option("--tol", type=float, default=None,
              help="Override the default bound for every case in the suite.")
@click.option("--grid-n", type=int, default=256, show_default=True,
              help="Grid resolution of the dynamics checks.")
@click.pass_context
def check(ctx, suite, tol, grid_n):
    """Run an invariant suite; exit nonzero on any failure."""
    report = run_suite(suite, tol=tol, seed=ctx.obj["seed"], grid_n=grid_n)
    click.echo(report.render())
    if not report.passed:
        sys.exit(1)


@main.command()
@click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--overlay", "overlay_path", type=click.Path(exists=True, dir_okay=False),
              default=None)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
def render(in_path, overlay_path, out_path):
    """Render a grid CSV as a heatmap PNG (blue-to-red ramp)."""
    io.render_heatmap(in_path, out_path, overlay_csv=overlay_path)
    click.echo(f"wrote {out_path}")


if __name__ == "__main__":
    main()
