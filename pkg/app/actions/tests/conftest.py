import pytest
from click.testing import CliRunner

from app.services.verification import CheckResult, VerificationReport


@pytest.fixture
def cli_runner():
    return CliRunner()


@pytest.fixture
def a_config_file(tmp_path):
    path = tmp_path / "scan.env"
    path.write_text("# shared scan settings\nmbar=2\nlf=2\ntheta_k=0.2\nn=3\nb_max=1.0\n")
    return path


@pytest.fixture
def a_failing_report():
    return VerificationReport(
        results=[
            CheckResult(name="bessel_parity", passed=True, detail="residual 0", elapsed_seconds=0.0),
            CheckResult(name="exact_zeros", passed=False, detail="CD residual 0.1", elapsed_seconds=0.0),
        ]
    )
