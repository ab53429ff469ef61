import math

import numpy as np
import pytest

from app.cli import cli
from app.services.verification import VerificationReport
from app.vortex.absorption import TransitionSpec
from app.vortex.observables import PitchAngleProfile, RadialProfile, scan_profile
from app.vortex.paraxial import ParaxialTables, paraxial_cd

CD_ARGS = ["cd", "--mbar", "1", "--lf", "2", "--theta-k", "0.1", "--b-max", "2", "--n", "400"]


def _data_rows(output):
    return [line for line in output.splitlines() if not line.startswith("#")][1:]


def test_help_lists_the_commands(cli_runner):
    result = cli_runner.invoke(cli, ["--help"])
    assert result.exit_code == 0
    for name in ("flux", "rate", "cd", "rate-asym", "angle-scan", "sigma-ratio", "stokes", "paraxial", "verify"):
        assert name in result.output


def test_cd_scan(cli_runner):
    result = cli_runner.invoke(cli, CD_ARGS)

    assert result.exit_code == 0, result.output
    rows = _data_rows(result.output)
    assert len(rows) == 400
    b, value = rows[0].split(",")
    assert float(b) == 0.0
    assert abs(float(value) - 1.0) < 1e-6


def test_cd_scan_is_byte_for_byte_reproducible(cli_runner):
    first = cli_runner.invoke(cli, CD_ARGS)
    second = cli_runner.invoke(cli, CD_ARGS)
    assert first.output == second.output


def test_json_output(cli_runner):
    result = cli_runner.invoke(cli, CD_ARGS + ["--format", "json"])

    assert result.exit_code == 0
    expected = scan_profile("cd", 1, TransitionSpec(l_f=2), 0.1, np.linspace(0.0, 2.0, 400))
    assert RadialProfile.parse_raw(result.output) == expected


def test_output_file(cli_runner, tmp_path):
    path = tmp_path / "cd.csv"
    result = cli_runner.invoke(cli, CD_ARGS + ["-o", str(path)])

    assert result.exit_code == 0
    assert result.output == ""
    assert len(_data_rows(path.read_text())) == 400


def test_sigma_ratio_writes_undefined_points_as_empty_fields(cli_runner):
    result = cli_runner.invoke(
        cli, ["sigma-ratio", "--mbar", "1", "--lf", "2", "--lambda-hel", "1", "--n", "3", "--b-max", "1"]
    )
    assert result.exit_code == 0
    assert _data_rows(result.output)[0] == "0,"


def test_stokes(cli_runner):
    result = cli_runner.invoke(
        cli, ["stokes", "--mbar", "1", "--lf-medium", "2", "--z", "0.1,0", "--n", "3", "--b-max", "0.5"]
    )

    assert result.exit_code == 0, result.output
    rows = _data_rows(result.output)
    assert [tuple(map(float, row.split(",")[:2])) for row in rows] == [
        (0.0, 0.0), (0.0, 0.25), (0.0, 0.5), (0.1, 0.0), (0.1, 0.25), (0.1, 0.5),
    ]


def test_stokes_bad_depth_list(cli_runner):
    result = cli_runner.invoke(cli, ["stokes", "--mbar", "1", "--z", "0,deep"])
    assert result.exit_code == 2


def test_angle_scan(cli_runner):
    result = cli_runner.invoke(cli, ["angle-scan", "--mbar", "1", "--lf", "2", "--theta-max", "0.25", "--n", "6"])

    assert result.exit_code == 0, result.output
    header = [line[2:] for line in result.output.splitlines() if line.startswith("# ")]
    assert "b=0.25" in header
    reference, = [float(line.split("=")[1]) for line in header if line.startswith("paraxial_value=")]
    assert reference == pytest.approx(paraxial_cd(1, 2, math.pi / 2), rel=1e-15)
    rows = _data_rows(result.output)
    assert len(rows) == 6
    for row in rows:
        _, value = row.split(",")
        assert abs(float(value) - reference) < 0.02


def test_angle_scan_json(cli_runner):
    result = cli_runner.invoke(
        cli, ["angle-scan", "--kind", "a-lambda", "--mbar", "2", "--lf", "3", "--n", "3", "--format", "json"]
    )

    assert result.exit_code == 0
    profile = PitchAngleProfile.parse_raw(result.output)
    assert profile.observable_kind.value == "a_lambda"
    assert len(profile.points) == 3


def test_angle_scan_reversed_range_exits_with_2(cli_runner):
    result = cli_runner.invoke(
        cli, ["angle-scan", "--mbar", "1", "--lf", "2", "--theta-min", "0.3", "--theta-max", "0.2"]
    )

    assert result.exit_code == 2
    assert "theta_min < theta_max is required" in result.output


def test_paraxial_tables(cli_runner):
    result = cli_runner.invoke(cli, ["paraxial", "--export-tables"])

    assert result.exit_code == 0
    assert len(ParaxialTables.parse_raw(result.output).formulas) == 24


def test_paraxial_unsupported_entry_exits_with_3(cli_runner):
    result = cli_runner.invoke(cli, ["paraxial", "--kind", "cd", "--mbar", "5", "--lf", "2"])

    assert result.exit_code == 3
    assert "no paraxial cd formula for mbar=5, l_f=2" in result.output


def test_invalid_configuration_exits_with_2(cli_runner):
    result = cli_runner.invoke(cli, ["cd", "--mbar", "1", "--lf", "2", "--n", "1"])

    assert result.exit_code == 2
    assert "n_points >= 2 is required" in result.output


def test_missing_required_option_exits_with_2(cli_runner):
    result = cli_runner.invoke(cli, ["cd", "--lf", "2"])
    assert result.exit_code == 2


def test_config_file_with_flags_winning(cli_runner, a_config_file):
    result = cli_runner.invoke(cli, ["--config", str(a_config_file), "cd", "--mbar", "1"])

    assert result.exit_code == 0, result.output
    header = [line[2:] for line in result.output.splitlines() if line.startswith("# ")]
    assert "mbar=1" in header
    assert "l_f=2" in header
    assert "theta_k=0.20000000000000001" in header
    assert len(_data_rows(result.output)) == 3


def test_config_file_with_unknown_keys(cli_runner, tmp_path):
    path = tmp_path / "bad.env"
    path.write_text("mbar=1\ncolour=red\n")

    result = cli_runner.invoke(cli, ["--config", str(path), "cd", "--lf", "2"])

    assert result.exit_code == 2
    assert "colour" in result.output


def test_verify_subset(cli_runner):
    result = cli_runner.invoke(cli, ["verify", "--only", "bessel_parity,wigner_symmetry"])

    assert result.exit_code == 0, result.output
    assert result.output.splitlines()[-1] == "2 passed, 0 failed"


def test_verify_json(cli_runner):
    result = cli_runner.invoke(cli, ["verify", "--only", "paraxial_dipole_reduction", "--format", "json"])

    assert result.exit_code == 0
    assert VerificationReport.parse_raw(result.output).passed


def test_verify_failure_exits_with_4(cli_runner, mocker, a_failing_report):
    mocker.patch("app.actions.handlers.run_checks", return_value=a_failing_report)

    result = cli_runner.invoke(cli, ["verify"])

    assert result.exit_code == 4
    assert "FAIL" in result.output


def test_verify_unknown_check_exits_with_2(cli_runner):
    result = cli_runner.invoke(cli, ["verify", "--only", "no_such_check"])

    assert result.exit_code == 2
    assert "unknown checks: no_such_check" in result.output


@pytest.mark.slow
def test_full_verify_suite_passes(cli_runner):
    result = cli_runner.invoke(cli, ["verify"])

    assert result.exit_code == 0, result.output
    assert result.output.splitlines()[-1] == "29 passed, 0 failed"
