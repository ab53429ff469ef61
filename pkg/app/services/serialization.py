"""Plot-ready CSV and JSON output for scans.

Output is byte-for-byte reproducible: no timestamps, fixed row order and a
fixed float format. Undefined points are written as an empty CSV field or a
JSON null, never as NaN text.
"""
import csv
import io
import logging
import math
from typing import Iterable, List, Optional, Sequence

import click
import pydantic

from app import settings
from app.vortex.observables import PitchAngleProfile, RadialProfile
from app.vortex.paraxial import ParaxialProfile, ParaxialTables
from app.vortex.polarization import StokesScan

logger = logging.getLogger(__name__)

UNITS_HEADER = "units: b in wavelengths, z in plane-wave attenuation lengths 1/mu_pw"
STOKES_HEADER = "stokes: fields at phi=0, transverse components, S3/S0=+1 for a pure Lambda=+1 mode"


def format_float(value: Optional[float]) -> str:
    if value is None or math.isnan(value):
        return ""
    return format(value, f".{settings.FLOAT_SIGNIFICANT_DIGITS}g")


def _header_lines(config: Optional[pydantic.BaseModel], extra: Sequence[str] = ()) -> List[str]:
    lines = [UNITS_HEADER, *extra]
    if config is not None:
        for key, value in config.dict().items():
            if isinstance(value, float):
                value = format_float(value)
            elif isinstance(value, list):
                value = ",".join(format_float(v) if isinstance(v, float) else str(v) for v in value)
            elif hasattr(value, "value"):
                value = value.value
            lines.append(f"{key}={'' if value is None else value}")
    return [f"# {line}" for line in lines]


def _to_csv(header: Iterable[str], columns: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buffer = io.StringIO()
    for line in header:
        buffer.write(line + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buffer.getvalue()


def profile_to_csv(profile: RadialProfile, config: Optional[pydantic.BaseModel] = None) -> str:
    """``b,value`` rows after ``#`` header lines echoing the run configuration."""
    extra = [f"observable={profile.observable_kind.value}"]
    return _to_csv(
        _header_lines(config, extra),
        ("b", "value"),
        ((format_float(p.b), format_float(p.value)) for p in profile.points),
    )


def angle_profile_to_csv(profile: PitchAngleProfile, config: Optional[pydantic.BaseModel] = None) -> str:
    """``theta_k,value`` rows; the small-angle closed form, when tabulated, is echoed in the header."""
    extra = [
        f"observable={profile.observable_kind.value}",
        f"paraxial_value={format_float(profile.paraxial_value)}",
    ]
    return _to_csv(
        _header_lines(config, extra),
        ("theta_k", "value"),
        ((format_float(p.theta_k), format_float(p.value)) for p in profile.points),
    )


def stokes_to_csv(scan: StokesScan, config: Optional[pydantic.BaseModel] = None) -> str:
    return _to_csv(
        _header_lines(config, [STOKES_HEADER]),
        ("z", "b", "S0", "S1", "S2", "S3"),
        (
            tuple(format_float(v) for v in (s.z, s.b, s.s0, s.s1, s.s2, s.s3))
            for s in scan.samples
        ),
    )


def paraxial_to_csv(profile: ParaxialProfile, config: Optional[pydantic.BaseModel] = None) -> str:
    extra = [f"paraxial={profile.kind.value}", "x = k b"]
    return _to_csv(
        _header_lines(config, extra),
        ("x", "value"),
        ((format_float(p.x), format_float(p.value)) for p in profile.points),
    )


def to_json(model: pydantic.BaseModel) -> str:
    # python floats serialize with repr, so parse_raw recovers them exactly
    return model.json(indent=2) + "\n"


def render(result: pydantic.BaseModel, fmt: str, config: Optional[pydantic.BaseModel] = None) -> str:
    # coefficient tables have no tabular layout
    if fmt == "json" or isinstance(result, ParaxialTables):
        return to_json(result)
    if isinstance(result, RadialProfile):
        return profile_to_csv(result, config)
    if isinstance(result, PitchAngleProfile):
        return angle_profile_to_csv(result, config)
    if isinstance(result, StokesScan):
        return stokes_to_csv(result, config)
    if isinstance(result, ParaxialProfile):
        return paraxial_to_csv(result, config)
    raise ValueError(f"no CSV layout for {type(result).__name__}")


def write_output(text: str, path: Optional[str]) -> None:
    """Write to ``path``, or to stdout when no path is given."""
    if path is None:
        click.echo(text, nl=False)
        return
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logger.info(f"Wrote {len(text)} characters to {path}")
