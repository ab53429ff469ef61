import cmath
import logging

import numpy as np

from app.services.activity_logger import activity_logger, log_action_activity
from app.services.utils import linear_grid
from app.services.verification import VerificationReport, run_checks
from app.vortex import paraxial
from app.vortex.absorption import TransitionSpec
from app.vortex.observables import (
    ObservableKind,
    PitchAngleProfile,
    RadialProfile,
    paraxial_limit,
    scan_pitch_angle,
    scan_profile,
)
from app.vortex.polarization import PolarizationState, StokesScan, stokes_scan

from .configurations import (
    AngleScanConfig,
    CdConfig,
    FluxConfig,
    ParaxialConfig,
    RateAsymConfig,
    RateConfig,
    ScanConfiguration,
    SigmaRatioConfig,
    StokesConfig,
    VerifyConfig,
)

logger = logging.getLogger(__name__)


def _grid(action_config: ScanConfiguration) -> np.ndarray:
    return linear_grid(action_config.b_min, action_config.b_max, action_config.n_points)


def _scan(kind: ObservableKind, action_config: ScanConfiguration, l_f=None, lambda_hel=1) -> RadialProfile:
    profile = scan_profile(
        kind,
        action_config.mbar,
        TransitionSpec(l_f=l_f) if l_f is not None else None,
        action_config.theta_k,
        _grid(action_config),
        wavelength=action_config.wavelength,
        lambda_hel=lambda_hel,
    )
    undefined = sum(p.value is None for p in profile.points)
    if undefined:
        log_action_activity(
            action_id=kind.value,
            title=f"{undefined} undefined point(s) in the profile",
            level="WARNING",
            data={"undefined_points": [p.b for p in profile.points if p.value is None]},
        )
    logger.info(f"Computed {kind.value} on {len(profile.points)} points ({undefined} undefined)")
    return profile


@activity_logger()
def action_flux(action_config: FluxConfig) -> RadialProfile:
    return _scan(ObservableKind.FLUX, action_config, lambda_hel=action_config.lambda_hel)


@activity_logger()
def action_rate(action_config: RateConfig) -> RadialProfile:
    return _scan(ObservableKind.RATE, action_config, l_f=action_config.l_f, lambda_hel=action_config.lambda_hel)


@activity_logger()
def action_cd(action_config: CdConfig) -> RadialProfile:
    return _scan(ObservableKind.CD, action_config, l_f=action_config.l_f)


@activity_logger()
def action_rate_asym(action_config: RateAsymConfig) -> RadialProfile:
    return _scan(ObservableKind.A_LAMBDA, action_config, l_f=action_config.l_f)


@activity_logger()
def action_sigma_ratio(action_config: SigmaRatioConfig) -> RadialProfile:
    return _scan(
        ObservableKind.SIGMA_RATIO, action_config, l_f=action_config.l_f, lambda_hel=action_config.lambda_hel
    )


@activity_logger()
def action_angle_scan(action_config: AngleScanConfig) -> PitchAngleProfile:
    theta_grid = np.linspace(action_config.theta_min, action_config.theta_max, action_config.n_points)
    profile = scan_pitch_angle(
        action_config.kind,
        action_config.mbar,
        TransitionSpec(l_f=action_config.l_f),
        action_config.b,
        theta_grid,
        wavelength=action_config.wavelength,
    )
    undefined = [p.theta_k for p in profile.points if p.value is None]
    if undefined:
        log_action_activity(
            action_id="angle_scan",
            title=f"{len(undefined)} undefined point(s) in the profile",
            level="WARNING",
            data={"undefined_pitch_angles": undefined},
        )
    logger.info(f"Computed {action_config.kind.value} at b={action_config.b} on {len(profile.points)} pitch angles")
    return profile


@activity_logger()
def action_stokes(action_config: StokesConfig) -> StokesScan:
    state = PolarizationState(
        mbar=action_config.mbar,
        theta_k=action_config.theta_k,
        c_plus=action_config.c_plus,
        c_minus=action_config.c_minus * cmath.exp(1j * action_config.relative_phase),
        l_f_medium=action_config.l_f_medium,
        wavelength=action_config.wavelength,
    )
    scan = stokes_scan(state, _grid(action_config), action_config.z_list)
    logger.info(f"Computed Stokes profiles at {len(action_config.z_list)} depth(s), {len(scan.samples)} rows")
    return scan


@activity_logger()
def action_paraxial(action_config: ParaxialConfig):
    if action_config.export_tables:
        return paraxial.ParaxialTables.parse_obj(paraxial.export_tables())
    x = np.linspace(0.0, action_config.x_max, action_config.n_points)
    if not action_config.numeric:
        return paraxial.closed_form_profile(action_config.kind, action_config.mbar, action_config.l_f, x)
    values = np.atleast_1d(
        paraxial_limit(
            action_config.kind.value,
            action_config.mbar,
            TransitionSpec(l_f=action_config.l_f),
            x,
            theta_k=action_config.theta_k,
        )
    )
    return paraxial.ParaxialProfile(
        kind=action_config.kind,
        mbar=action_config.mbar,
        l_f=action_config.l_f,
        theta_k=action_config.theta_k,
        points=[paraxial.ParaxialPoint(x=float(a), value=float(v)) for a, v in zip(x, values)],
    )


@activity_logger()
def action_verify(action_config: VerifyConfig) -> VerificationReport:
    report = run_checks(action_config.only)
    failed = [r.name for r in report.results if not r.passed]
    log_action_activity(
        action_id="verify",
        title=f"Verification finished: {len(report.results) - len(failed)} passed, {len(failed)} failed",
        level="INFO" if not failed else "ERROR",
        data={"failed": failed},
    )
    return report
