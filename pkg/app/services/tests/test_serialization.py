import csv
import io
import math

import pytest

from app.services.serialization import (
    STOKES_HEADER,
    UNITS_HEADER,
    angle_profile_to_csv,
    format_float,
    profile_to_csv,
    render,
    stokes_to_csv,
    to_json,
    write_output,
)
from app.services.verification import CheckResult
from app.vortex.observables import RadialProfile
from app.vortex.paraxial import ParaxialTables, closed_form_profile, export_tables
from app.vortex.polarization import StokesScan


def _split(text):
    header = [line[2:] for line in text.splitlines() if line.startswith("# ")]
    rows = list(csv.reader(io.StringIO("\n".join(line for line in text.splitlines() if not line.startswith("#")))))
    return header, rows


@pytest.mark.parametrize(
    "value, expected",
    [(None, ""), (math.nan, ""), (1.0, "1"), (0.1, "0.10000000000000001"), (1e22, "1e+22")],
)
def test_format_float(value, expected):
    assert format_float(value) == expected


def test_profile_to_csv(a_cd_profile, a_cd_config):
    header, rows = _split(profile_to_csv(a_cd_profile, a_cd_config))

    assert header[0] == UNITS_HEADER
    assert "observable=cd" in header
    assert "mbar=1" in header and "l_f=2" in header and "format=csv" in header
    assert rows[0] == ["b", "value"]
    assert len(rows) == 1 + len(a_cd_profile.points)
    for (b, value), point in zip(rows[1:], a_cd_profile.points):
        # 17 significant digits recover the double exactly
        assert float(b) == point.b
        assert float(value) == point.value


def test_profile_to_csv_is_reproducible(a_cd_profile, a_cd_config):
    assert profile_to_csv(a_cd_profile, a_cd_config) == profile_to_csv(
        RadialProfile.parse_raw(a_cd_profile.json()), a_cd_config
    )


def test_undefined_points_are_empty_fields(a_sigma_ratio_profile):
    _, rows = _split(profile_to_csv(a_sigma_ratio_profile))
    assert rows[1] == ["0", ""]
    assert all(value for _, value in rows[2:])


def test_undefined_points_are_json_null(a_sigma_ratio_profile):
    text = to_json(a_sigma_ratio_profile)
    assert '"value": null' in text
    assert text.endswith("\n")
    assert RadialProfile.parse_raw(text) == a_sigma_ratio_profile


def test_angle_profile_to_csv(an_angle_profile, an_angle_scan_config):
    header, rows = _split(angle_profile_to_csv(an_angle_profile, an_angle_scan_config))

    assert "observable=cd" in header
    assert f"paraxial_value={format_float(an_angle_profile.paraxial_value)}" in header
    assert "b=0.25" in header
    assert rows[0] == ["theta_k", "value"]
    assert [float(theta) for theta, _ in rows[1:]] == list(an_angle_profile.theta_k)
    assert [float(value) for _, value in rows[1:]] == list(an_angle_profile.values)


def test_render_angle_profile(an_angle_profile):
    assert render(an_angle_profile, "csv").splitlines()[3] == "theta_k,value"


def test_angle_profile_without_a_closed_form(an_angle_profile):
    profile = an_angle_profile.copy(update={"paraxial_value": None})
    header, _ = _split(angle_profile_to_csv(profile))
    assert "paraxial_value=" in header


def test_stokes_to_csv(a_stokes_scan, a_stokes_config):
    header, rows = _split(stokes_to_csv(a_stokes_scan, a_stokes_config))

    assert STOKES_HEADER in header
    assert "z_list=0,0.10000000000000001" in header
    assert rows[0] == ["z", "b", "S0", "S1", "S2", "S3"]
    assert [(float(z), float(b)) for z, b, *_ in rows[1:]] == [
        (0.0, 0.0), (0.0, 0.25), (0.0, 0.5), (0.1, 0.0), (0.1, 0.25), (0.1, 0.5),
    ]


def test_render_dispatches_on_the_result(a_cd_profile, a_stokes_scan):
    assert render(a_cd_profile, "csv").splitlines()[2] == "b,value"
    assert StokesScan.parse_raw(render(a_stokes_scan, "json")) == a_stokes_scan
    paraxial_csv = render(closed_form_profile("cd", 1, 2, [0.0, 1.0]), "csv")
    assert "x,value" in paraxial_csv.splitlines()


def test_render_tables_as_json_whatever_the_format():
    text = render(ParaxialTables.parse_obj(export_tables()), "csv")
    assert ParaxialTables.parse_raw(text).coefficient_order == "ascending powers of x"


def test_render_without_a_layout():
    with pytest.raises(ValueError):
        render(CheckResult(name="bessel_parity", passed=True, detail="", elapsed_seconds=0.0), "csv")


def test_write_output_to_stdout(capsys):
    write_output("b,value\n", None)
    assert capsys.readouterr().out == "b,value\n"


def test_write_output_to_file(tmp_path):
    path = tmp_path / "cd.csv"
    write_output("b,value\n0,1\n", str(path))
    assert path.read_bytes() == b"b,value\n0,1\n"
