"""Command-line front end: radial scans, Stokes profiles, paraxial formulas and the verification suite.

    python -m app.cli cd --mbar 1 --lf 2 --theta-k 0.1 --b-max 2 --n 400
    python -m app.cli angle-scan --mbar 1 --lf 2 --b 0.25 --theta-max 0.25
    python -m app.cli stokes --mbar 1 --lf-medium 2 --theta-k 0.1 --z 0,0.01,0.1,0.2
    python -m app.cli verify

Exit codes: 0 success, 2 usage or configuration error, 3 numerical-domain
error, 4 verification failure.
"""
import logging
from functools import wraps
from typing import Dict, List

import click
from dotenv import dotenv_values

from app import settings
from app.services.action_runner import execute_action
from app.services.errors import ConfigurationValidationError, NumericalDomainError
from app.services.serialization import render, write_output
from app.services.verification import VerificationReport

logger = logging.getLogger(__name__)

EXIT_NUMERICAL_DOMAIN = 3
EXIT_VERIFICATION_FAILED = 4


def _parse_depths(ctx, param, value):
    if value is None or isinstance(value, list):
        return value
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise click.BadParameter(f"expected a comma-separated list of numbers, got {value!r}")


def _parse_names(ctx, param, value):
    if value is None or isinstance(value, list):
        return value
    return [item.strip() for item in value.split(",") if item.strip()]


def output_options(func):
    func = click.option(
        "--format", "format", type=click.Choice(["csv", "json"]), default="csv", show_default=True,
        help="Output format.",
    )(func)
    func = click.option("-o", "--output", default=None, help="Output file; standard output when omitted.")(func)
    return func


def scan_options(func):
    for option in reversed([
        click.option("--mbar", type=int, required=True, help="Topological charge."),
        click.option("--theta-k", "theta_k", type=float, default=settings.DEFAULT_THETA_K, show_default=True,
                     help="Pitch angle (rad)."),
        click.option("--wavelength", type=float, default=settings.DEFAULT_WAVELENGTH, show_default=True),
        click.option("--b-min", "b_min", type=float, default=settings.DEFAULT_B_MIN, show_default=True,
                     help="Smallest impact parameter (wavelengths)."),
        click.option("--b-max", "b_max", type=float, default=settings.DEFAULT_B_MAX, show_default=True,
                     help="Largest impact parameter (wavelengths)."),
        click.option("--n", "--n-points", "n_points", type=int, default=settings.DEFAULT_N_POINTS,
                     show_default=True, help="Grid points."),
    ]):
        func = option(func)
    return output_options(func)


def lf_option(func):
    return click.option("--lf", "l_f", type=int, required=True, help="Final-state multipolarity l_f.")(func)


def helicity_option(func):
    return click.option("--lambda-hel", "lambda_hel", type=click.Choice(["1", "-1"]), default="1",
                        show_default=True, help="Helicity of the mode.")(func)


def _run(action_id: str, params: dict):
    ctx = click.get_current_context()
    data = {key: value for key, value in params.items() if value is not None}
    if "lambda_hel" in data:
        data["lambda_hel"] = int(data["lambda_hel"])
    try:
        config, result = execute_action(action_id, data)
    except ConfigurationValidationError as e:
        raise click.UsageError(str(e), ctx=ctx)
    except NumericalDomainError as e:
        logger.error(f"Numerical domain error in '{action_id}': {e}")
        click.echo(f"Error: {e}", err=True)
        ctx.exit(EXIT_NUMERICAL_DOMAIN)
    if isinstance(result, VerificationReport):
        text = result.table() if config.format.value == "csv" else render(result, "json")
        write_output(text, config.output)
        if not result.passed:
            ctx.exit(EXIT_VERIFICATION_FAILED)
        return
    write_output(render(result, config.format.value, config), config.output)


def command(name: str):
    """Register a CLI command that forwards its options to the ``action_<name>`` handler."""
    action_id = name.replace("-", "_")

    def decorator(func):
        @wraps(func)
        def callback(**params):
            _run(action_id, params)
        return cli.command(name, help=func.__doc__)(callback)
    return decorator


def _config_file_defaults(ctx: click.Context, path: str) -> Dict[str, dict]:
    """Map a key=value file onto per-command option defaults; explicit flags still win."""
    values = {key.strip().lower(): value for key, value in dotenv_values(path).items() if value is not None}
    default_map: Dict[str, dict] = {}
    used = set()
    for name, cmd in ctx.command.commands.items():
        aliases = {}
        for param in cmd.params:
            aliases[param.name] = param.name
            for opt in param.opts:
                aliases[opt.lstrip("-").replace("-", "_")] = param.name
        for key, value in values.items():
            target = aliases.get(key.replace("-", "_"))
            if target is not None:
                default_map.setdefault(name, {})[target] = value
                used.add(key)
    unknown: List[str] = sorted(set(values) - used)
    if unknown:
        raise click.UsageError(f"Unknown keys in config file {path}: {', '.join(unknown)}", ctx=ctx)
    logger.debug(f"Loaded {len(used)} option default(s) from {path}")
    return default_map


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="key=value file of option defaults; explicit flags win.")
@click.pass_context
def cli(ctx, config_path):
    """Twisted-photon absorption by atoms: spin asymmetries, attenuation and polarization."""
    if config_path:
        ctx.default_map = _config_file_defaults(ctx, config_path)


@command("flux")
@scan_options
@helicity_option
def flux():
    """Local energy flux f(b) of one Bessel mode."""


@command("rate")
@scan_options
@lf_option
@helicity_option
def rate():
    """Excitation rate Gamma(b) of one mode, arbitrary units."""


@command("cd")
@scan_options
@lf_option
def cd():
    """Circular dichroism CD(b) at fixed topological charge."""


@command("rate-asym")
@scan_options
@lf_option
def rate_asym():
    """Photon-spin rate asymmetry A_Lambda(b)."""


@command("sigma-ratio")
@scan_options
@lf_option
@helicity_option
def sigma_ratio():
    """Cross section relative to the plane-wave value, sigma(b) / sigma_pw."""


@command("angle-scan")
@output_options
@click.option("--kind", type=click.Choice(["cd", "a-lambda", "a_lambda"]), default="cd", show_default=True)
@click.option("--mbar", type=int, required=True, help="Topological charge.")
@lf_option
@click.option("--b", "b", type=float, default=0.25, show_default=True, help="Impact parameter (wavelengths).")
@click.option("--wavelength", type=float, default=settings.DEFAULT_WAVELENGTH, show_default=True)
@click.option("--theta-min", "theta_min", type=float, default=0.005, show_default=True,
              help="Smallest pitch angle (rad).")
@click.option("--theta-max", "theta_max", type=float, default=0.25, show_default=True,
              help="Largest pitch angle (rad).")
@click.option("--n", "--n-points", "n_points", type=int, default=50, show_default=True, help="Grid points.")
def angle_scan():
    """CD or A_Lambda at fixed impact parameter as a function of the pitch angle."""


@command("stokes")
@scan_options
@click.option("--lf-medium", "l_f_medium", type=int, default=2, show_default=True,
              help="Absorbing multipolarity of the medium.")
@click.option("--z", "z_list", default=None, callback=_parse_depths,
              help="Comma-separated depths in plane-wave attenuation lengths.")
@click.option("--c-plus", "c_plus", type=float, default=None, help="|c_+| at launch (default 1/sqrt 2).")
@click.option("--c-minus", "c_minus", type=float, default=None, help="|c_-| at launch (default 1/sqrt 2).")
@click.option("--relative-phase", "relative_phase", type=float, default=0.0, show_default=True,
              help="Phase of c_- relative to c_+ (rad).")
def stokes():
    """Stokes profiles of a two-helicity superposition at several depths."""


@command("paraxial")
@output_options
@click.option("--kind", type=click.Choice(["cd", "a-lambda", "a_lambda"]), default="cd", show_default=True)
@click.option("--mbar", type=int, default=1, show_default=True)
@click.option("--lf", "l_f", type=int, default=2, show_default=True)
@click.option("--x-max", "x_max", type=float, default=10.0, show_default=True, help="Largest x = k b.")
@click.option("--n", "--n-points", "n_points", type=int, default=25, show_default=True)
@click.option("--numeric", is_flag=True, default=False,
              help="Evaluate the small-angle limit numerically instead of the closed form.")
@click.option("--theta-k", "theta_k", type=float, default=settings.PARAXIAL_THETA_K, show_default=True,
              help="Pitch angle of the numeric limit.")
@click.option("--export-tables", "export_tables", is_flag=True, default=False,
              help="Write every closed form as JSON.")
def paraxial():
    """Small-pitch-angle closed forms of CD and A_Lambda in x = k b."""


@command("verify")
@output_options
@click.option("--only", default=None, callback=_parse_names, help="Comma-separated check names.")
def verify():
    """Run the invariant and oracle suite; exit 4 if any check fails."""


if __name__ == "__main__":
    cli()
