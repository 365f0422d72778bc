"""Command-line interface.

Every subcommand prints machine-readable output: a single JSON object
by default, or CSV with ``--format csv``.  All quantities use reduced
units hbar = m = k_B = 1 unless overridden with --mass / --hbar-scale;
the active convention is echoed back inside the ``params`` block of
each JSON result, so a saved output line fully documents its inputs.

Exit codes: 0 success, 1 physics domain errors, 2 usage errors.
"""

from __future__ import annotations

import functools
import io
import json
import math
import sys

import click
import numpy as np

from . import thermo
from .errors import (
    ConvergenceError,
    DomainError,
    FeasibilityError,
    NoSolutionError,
    QuadratureError,
)
from .oracle import verification_suite
from .specfun import riemann_zeta
from .thermo import GasSpec, Statistics, ThermoState
from .trap import (
    BOX,
    Trap,
    dos_parameters,
    dos_quadrature,
    potential,
    unit_ball_volume,
)

_PHYSICS_ERRORS = (
    DomainError,
    FeasibilityError,
    ConvergenceError,
    NoSolutionError,
    QuadratureError,
)


# ---------------------------------------------------------------------
# Output plumbing
# ---------------------------------------------------------------------

def _round_floats(obj):
    if isinstance(obj, float):
        if math.isinf(obj) or math.isnan(obj):
            return str(obj)
        return round(obj, 10)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _emit_scalar(ctx: click.Context, result: dict) -> None:
    fmt = ctx.obj["format"]
    if fmt == "json":
        click.echo(json.dumps(_round_floats(result)))
        return
    flat = {k: v for k, v in result.items() if k != "params"}
    buf = io.StringIO()
    buf.write(",".join(flat.keys()) + "\n")
    buf.write(",".join(_csv_cell(v) for v in flat.values()))
    click.echo(buf.getvalue())


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _emit_table(ctx: click.Context, rows: list[dict], columns: list[str],
                params: dict | None = None, extra: dict | None = None) -> None:
    fmt = ctx.obj["format"]
    if fmt == "json":
        payload: dict = {"rows": rows}
        if extra:
            payload.update(extra)
        if params is not None:
            payload["params"] = params
        click.echo(json.dumps(_round_floats(payload)))
        return
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_csv_cell(row[c]) for c in columns))
    click.echo("\n".join(lines))


def _physics_command(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except _PHYSICS_ERRORS as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


# ---------------------------------------------------------------------
# Shared options and parameter resolution
# ---------------------------------------------------------------------

class ExponentType(click.ParamType):
    """A positive float or the literal 'box'."""

    name = "exponent"

    def convert(self, value, param, ctx):
        if isinstance(value, float):
            return value
        if str(value).lower() == "box":
            return BOX
        try:
            n = float(value)
        except ValueError:
            self.fail(f"{value!r} is not a number or 'box'", param, ctx)
        if not n > 0.0:
            self.fail(f"exponent must be positive, got {n}", param, ctx)
        return n


EXPONENT = ExponentType()


def _trap_options(fn):
    for opt in reversed([
        click.option("--dim", type=float, required=True, help="Space dimension D (> 0, may be fractional)."),
        click.option("--exponent", type=EXPONENT, required=True, help="Trap exponent n, or 'box' for the rigid unit-radius box."),
        click.option("--A", "strength", type=float, default=None, help="Trap strength A in U(r) = A r^n (finite exponents only)."),
        click.option("--density", type=float, default=None, help="Homogeneous particle density (box only)."),
        click.option("--mass", type=float, default=1.0, show_default=True, help="Particle mass in reduced units."),
        click.option("--hbar-scale", type=float, default=1.0, show_default=True, help="Value of hbar in reduced units."),
    ]):
        fn = opt(fn)
    return fn


def _resolve_trap(dim, exponent, strength, density, mass) -> Trap:
    if math.isinf(exponent):
        if strength is not None:
            raise click.UsageError("--A does not apply to the box; use --density")
        if density is None:
            raise click.UsageError("the box requires --density")
        return Trap.box(dim, m=mass)
    if density is not None:
        raise click.UsageError("--density applies only to '--exponent box'")
    return Trap(D=dim, n=exponent, A=1.0 if strength is None else strength, m=mass)


def _params_block(trap: Trap, hbar: float, **extra) -> dict:
    block = {
        "dim": trap.D,
        "exponent": "box" if trap.is_box else trap.n,
        "A": None if trap.is_box else trap.A,
        "mass": trap.m,
        "units": {"hbar": hbar, "mass": trap.m, "k_B": 1.0},
    }
    block.update(extra)
    return block


def _read_config(path: str) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise click.UsageError(
                    f"{path}:{lineno}: expected key=value, got {line!r}"
                )
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


# ---------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------

@click.group()
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
              show_default=True, help="Output format.")
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Flat key=value file supplying option defaults; explicit flags win.")
@click.pass_context
def cli(ctx, fmt, config):
    """Thermodynamics of ideal quantum gases in power-law traps."""
    ctx.ensure_object(dict)
    ctx.obj["format"] = fmt
    if config is not None:
        defaults = _read_config(config)
        ctx.default_map = {name: dict(defaults) for name in cli.commands}


@cli.command("feasibility")
@click.option("--dim", type=float, required=True, help="Space dimension D.")
@click.option("--exponent", type=EXPONENT, required=True, help="Trap exponent n or 'box'.")
@click.pass_context
@_physics_command
def feasibility_cmd(ctx, dim, exponent):
    """Whether a Bose gas condenses in this geometry (D/2 + D/n > 1)."""
    feasible = thermo.bec_feasible(dim, exponent)
    gamma = dim / 2.0 + (0.0 if math.isinf(exponent) else dim / exponent)
    result = {
        "feasible": feasible,
        "gamma": gamma,
        "params": {"dim": dim, "exponent": "box" if math.isinf(exponent) else exponent},
    }
    _emit_scalar(ctx, result)


@cli.command("fermi-energy")
@_trap_options
@click.option("--N", "number", type=float, default=None, help="Particle count (finite exponents).")
@click.pass_context
@_physics_command
def fermi_energy_cmd(ctx, dim, exponent, strength, density, mass, hbar_scale, number):
    """Fermi energy and Fermi temperature of the trapped gas."""
    trap = _resolve_trap(dim, exponent, strength, density, mass)
    if trap.is_box:
        e_f = thermo.box_fermi_energy(dim, density, mass, hbar=hbar_scale)
        params = _params_block(trap, hbar_scale, density=density)
    else:
        if number is None:
            raise click.UsageError("--N is required for a finite exponent")
        gas = GasSpec(statistics=Statistics.FERMI, N=number, trap=trap)
        e_f = thermo.fermi_energy(gas, hbar=hbar_scale)
        params = _params_block(trap, hbar_scale, N=number)
    _emit_scalar(ctx, {"E_F": e_f, "T_F": e_f, "params": params})


@cli.command("bec-temperature")
@_trap_options
@click.option("--N", "number", type=float, default=None, help="Particle count (finite exponents).")
@click.pass_context
@_physics_command
def bec_temperature_cmd(ctx, dim, exponent, strength, density, mass, hbar_scale, number):
    """Condensation temperature, or null when the geometry forbids BEC."""
    trap = _resolve_trap(dim, exponent, strength, density, mass)
    gamma = trap.gamma
    if trap.is_box:
        t_b = thermo.box_bec_temperature(dim, density, mass, hbar=hbar_scale)
        params = _params_block(trap, hbar_scale, density=density)
    else:
        if number is None:
            raise click.UsageError("--N is required for a finite exponent")
        gas = GasSpec(statistics=Statistics.BOSE, N=number, trap=trap)
        t_b = thermo.bec_temperature(gas, hbar=hbar_scale)
        params = _params_block(trap, hbar_scale, N=number)
    result = {
        "feasible": t_b is not None,
        "T_B": t_b,
        "gamma": gamma,
        "params": params,
    }
    _emit_scalar(ctx, result)


@cli.command("condensed-fraction")
@_trap_options
@click.option("--N", "number", type=float, default=None, help="Particle count (needed with --T).")
@click.option("--T", "temperature", type=float, default=None, help="Absolute temperature.")
@click.option("--t-over-tb", type=float, default=None, help="Temperature as a fraction of T_B.")
@click.pass_context
@_physics_command
def condensed_fraction_cmd(ctx, dim, exponent, strength, density, mass, hbar_scale,
                           number, temperature, t_over_tb):
    """Condensed fraction N0/N = 1 - (T/T_B)^gamma below the transition."""
    if t_over_tb is not None:
        if temperature is not None:
            raise click.UsageError("give either --T or --t-over-tb, not both")
        if not t_over_tb >= 0.0:
            raise click.UsageError("--t-over-tb must be >= 0")
        gamma = dim / 2.0 + (0.0 if math.isinf(exponent) else dim / exponent)
        if not thermo.bec_feasible(dim, exponent):
            raise FeasibilityError(f"no condensation for D/2 + D/n = {gamma} <= 1")
        frac = 1.0 - t_over_tb**gamma if t_over_tb <= 1.0 else 0.0
        result = {
            "condensed_fraction": frac,
            "gamma": gamma,
            "t_over_tb": t_over_tb,
            "params": {
                "dim": dim,
                "exponent": "box" if math.isinf(exponent) else exponent,
            },
        }
        _emit_scalar(ctx, result)
        return
    if temperature is None:
        raise click.UsageError("give --t-over-tb, or --T together with --N")
    trap = _resolve_trap(dim, exponent, strength, density, mass)
    n_total = number if number is not None else (
        density * unit_ball_volume(dim) if trap.is_box else None
    )
    if n_total is None:
        raise click.UsageError("--N is required with --T")
    gas = GasSpec(statistics=Statistics.BOSE, N=n_total, trap=trap)
    split = thermo.condensed_fraction(gas, temperature, hbar=hbar_scale)
    result = {
        "condensed_fraction": split.N0 / gas.N,
        "N0": split.N0,
        "N_thermal": split.N_thermal,
        "T_B": split.T_B,
        "params": _params_block(trap, hbar_scale, N=n_total, T=temperature),
    }
    _emit_scalar(ctx, result)


@cli.command("dos")
@_trap_options
@click.option("--energy", type=float, required=True, help="Energy at which to evaluate rho.")
@click.pass_context
@_physics_command
def dos_cmd(ctx, dim, exponent, strength, density, mass, hbar_scale, energy):
    """Density of states at one energy, with a quadrature cross-check."""
    if math.isinf(exponent):
        # the box density of states does not depend on the filling
        if strength is not None:
            raise click.UsageError("--A does not apply to the box")
        trap = Trap.box(dim, m=mass)
    else:
        trap = _resolve_trap(dim, exponent, strength, density, mass)
    dos = dos_parameters(trap, hbar=hbar_scale)
    rho_quad = dos_quadrature(
        lambda r: potential(trap, r), dim, energy, m=mass, hbar=hbar_scale
    )
    result = {
        "energy": energy,
        "rho": dos.evaluate(energy),
        "rho_quadrature": rho_quad,
        "prefactor": dos.prefactor,
        "exponent_of_energy": dos.exponent,
        "gamma": dos.gamma,
        "params": _params_block(trap, hbar_scale),
    }
    _emit_scalar(ctx, result)


@cli.command("solve-mu")
@_trap_options
@click.option("--stat", type=click.Choice(["fermi", "bose"]), required=True, help="Quantum statistics.")
@click.option("--N", "number", type=float, default=None, help="Particle count.")
@click.option("--T", "temperature", type=float, required=True, help="Temperature (> 0).")
@click.pass_context
@_physics_command
def solve_mu_cmd(ctx, dim, exponent, strength, density, mass, hbar_scale,
                 stat, number, temperature):
    """Chemical potential fixing the particle number at temperature T."""
    trap = _resolve_trap(dim, exponent, strength, density, mass)
    if number is None:
        if not trap.is_box:
            raise click.UsageError("--N is required for a finite exponent")
        number = density * unit_ball_volume(dim)
    gas = GasSpec(statistics=Statistics[stat.upper()], N=number, trap=trap)
    sol = thermo.solve_mu(gas, temperature, hbar=hbar_scale)
    result = {
        "mu": sol.state.mu,
        "fugacity": sol.state.fugacity,
        "T": temperature,
        "params": _params_block(trap, hbar_scale, N=number, stat=stat),
    }
    if sol.condensate is not None:
        result["N0"] = sol.condensate.N0
        result["N_thermal"] = sol.condensate.N_thermal
        result["T_B"] = sol.condensate.T_B
    _emit_scalar(ctx, result)


@cli.command("profile")
@_trap_options
@click.option("--space/--momentum", "spatial", default=None, required=True,
              help="Sample the spatial or the momentum distribution.")
@click.option("--stat", type=click.Choice(["fermi", "bose"]), required=True, help="Quantum statistics.")
@click.option("--N", "number", type=float, required=True, help="Particle count.")
@click.option("--T", "temperature", type=float, required=True,
              help="Temperature; 0 selects the sharp Fermi profile.")
@click.option("--rmax", default="auto", show_default=True,
              help="Grid end (radius or momentum), or 'auto'.")
@click.option("--points", type=int, default=200, show_default=True, help="Number of grid points.")
@click.pass_context
@_physics_command
def profile_cmd(ctx, dim, exponent, strength, density, mass, hbar_scale,
                spatial, stat, number, temperature, rmax, points):
    """Radial density profile as r,density (or p,density) samples."""
    trap = _resolve_trap(dim, exponent, strength, density, mass)
    if points < 2:
        raise click.UsageError("--points must be at least 2")
    gas = GasSpec(statistics=Statistics[stat.upper()], N=number, trap=trap)
    kind = "spatial" if spatial else "momentum"
    upper = _profile_upper(gas, kind, temperature, rmax, hbar_scale)
    grid = np.linspace(0.0, upper, points)
    prof = thermo.density_profile(
        gas, kind=kind, T=temperature, grid=grid, hbar=hbar_scale
    )
    var = "r" if spatial else "p"
    rows = [
        {var: float(x), "density": float(v)}
        for x, v in zip(prof.grid, prof.values)
    ]
    params = _params_block(
        trap, hbar_scale, N=number, T=temperature, stat=stat, kind=kind,
        points=points, rmax=upper,
    )
    _emit_table(ctx, rows, [var, "density"], params=params,
                extra={"normalization": prof.normalization})


def _profile_upper(gas: GasSpec, kind: str, T: float, rmax, hbar: float) -> float:
    if isinstance(rmax, str) and rmax != "auto":
        try:
            return float(rmax)
        except ValueError:
            raise click.UsageError(f"--rmax must be a number or 'auto', got {rmax!r}")
    if not isinstance(rmax, str):
        return float(rmax)
    trap = gas.trap
    if T == 0.0:
        e_f = thermo.fermi_energy(gas, hbar=hbar)
        if kind == "spatial":
            edge = 1.0 if trap.is_box else (e_f / trap.A) ** (1.0 / trap.n)
        else:
            edge = math.sqrt(2.0 * trap.m * e_f)
        return 1.25 * edge
    state = thermo.solve_mu(gas, T, hbar=hbar).state
    top = max(state.mu, 0.0) + 10.0 * T
    if kind == "spatial":
        return 1.0 if trap.is_box else (top / trap.A) ** (1.0 / trap.n)
    return math.sqrt(2.0 * trap.m * top)


@cli.command("verify")
@click.option("--quick", is_flag=True, help="Run a trimmed comparison grid.")
@click.option("--hbar-scale", type=float, default=1.0, show_default=True, help="Value of hbar in reduced units.")
@click.pass_context
@_physics_command
def verify_cmd(ctx, quick, hbar_scale):
    """Compare every closed form against its brute-force oracle."""
    reports = verification_suite(hbar=hbar_scale, quick=quick)
    rows = [
        {
            "check": r.label,
            "closed_form": r.closed_form,
            "oracle": r.oracle,
            "abs_err": r.abs_err,
            "rel_err": r.rel_err,
            "tol": r.tol,
            "ok": r.ok,
        }
        for r in reports
    ]
    n_bad = sum(1 for r in reports if not r.ok)
    _emit_table(
        ctx, rows,
        ["check", "closed_form", "oracle", "abs_err", "rel_err", "tol", "ok"],
        extra={"passed": len(reports) - n_bad, "failed": n_bad},
    )
    if n_bad:
        sys.exit(1)


def main() -> None:
    cli(prog_name="trapgas")


if __name__ == "__main__":
    main()
