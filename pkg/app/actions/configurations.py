import math
from typing import List, Optional

import pydantic

from app import settings
from app.vortex.absorption import MAX_MULTIPOLARITY
from app.vortex.observables import ObservableKind
from app.vortex.paraxial import FormulaKind
from .core import ActionConfiguration


class ScanConfiguration(ActionConfiguration):
    mbar: int = pydantic.Field(..., title="Topological charge")
    theta_k: float = pydantic.Field(settings.DEFAULT_THETA_K, title="Pitch angle (rad)")
    wavelength: float = pydantic.Field(settings.DEFAULT_WAVELENGTH, title="Wavelength")
    b_min: float = pydantic.Field(settings.DEFAULT_B_MIN, title="Smallest impact parameter (wavelengths)")
    b_max: float = pydantic.Field(settings.DEFAULT_B_MAX, title="Largest impact parameter (wavelengths)")
    n_points: int = pydantic.Field(settings.DEFAULT_N_POINTS, title="Grid points")

    @pydantic.validator("theta_k")
    def pitch_angle_in_range(cls, v: float) -> float:
        if not 0.0 < v < math.pi / 2:
            raise ValueError("theta_k in (0, pi/2) is required")
        return v

    @pydantic.validator("wavelength")
    def wavelength_positive(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("wavelength > 0 is required")
        return v

    @pydantic.validator("b_min")
    def b_min_non_negative(cls, v: float) -> float:
        if v < 0:
            raise ValueError("b_min >= 0 is required")
        return v

    @pydantic.validator("n_points")
    def enough_points(cls, v: int) -> int:
        if v < 2:
            raise ValueError("n_points >= 2 is required")
        return v

    @pydantic.root_validator(skip_on_failure=True)
    def ordered_range(cls, values: dict) -> dict:
        if not values["b_min"] < values["b_max"]:
            raise ValueError("b_min < b_max is required")
        return values


def _multipolarity(v: int) -> int:
    if not 1 <= v <= MAX_MULTIPOLARITY:
        raise ValueError(f"1 <= l_f <= {MAX_MULTIPOLARITY} is required")
    return v


def _helicity(v: int) -> int:
    if v not in (1, -1):
        raise ValueError("lambda_hel must be +1 or -1")
    return v


class FluxConfig(ScanConfiguration):
    lambda_hel: int = pydantic.Field(1, title="Helicity")

    _check_helicity = pydantic.validator("lambda_hel", allow_reuse=True)(_helicity)


class AsymmetryConfig(ScanConfiguration):
    l_f: int = pydantic.Field(..., title="Final-state multipolarity")

    _check_l_f = pydantic.validator("l_f", allow_reuse=True)(_multipolarity)


class CdConfig(AsymmetryConfig):
    pass


class RateAsymConfig(AsymmetryConfig):
    pass


class RateConfig(AsymmetryConfig):
    lambda_hel: int = pydantic.Field(1, title="Helicity")

    _check_helicity = pydantic.validator("lambda_hel", allow_reuse=True)(_helicity)


class SigmaRatioConfig(RateConfig):
    pass


class StokesConfig(ScanConfiguration):
    l_f_medium: int = pydantic.Field(2, title="Absorbing multipolarity of the medium")
    z_list: List[float] = pydantic.Field(
        default_factory=lambda: list(settings.DEFAULT_STOKES_DEPTHS),
        title="Depths (plane-wave attenuation lengths)",
    )
    c_plus: float = pydantic.Field(1.0 / math.sqrt(2.0), title="|c_+| at launch")
    c_minus: float = pydantic.Field(1.0 / math.sqrt(2.0), title="|c_-| at launch")
    relative_phase: float = pydantic.Field(0.0, title="Phase of c_- relative to c_+ (rad)")

    _check_l_f = pydantic.validator("l_f_medium", allow_reuse=True)(_multipolarity)

    @pydantic.validator("z_list")
    def depths_valid(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("at least one depth z is required")
        if any(z < 0 for z in v):
            raise ValueError("z >= 0 is required")
        return sorted(v)

    @pydantic.root_validator(skip_on_failure=True)
    def launch_not_empty(cls, values: dict) -> dict:
        if values["c_plus"] == 0 and values["c_minus"] == 0:
            raise ValueError("c_plus and c_minus must not both vanish")
        return values


class AngleScanConfig(ActionConfiguration):
    kind: ObservableKind = pydantic.Field(ObservableKind.CD, title="Observable")
    mbar: int = pydantic.Field(..., title="Topological charge")
    l_f: int = pydantic.Field(..., title="Final-state multipolarity")
    b: float = pydantic.Field(0.25, title="Impact parameter (wavelengths)")
    wavelength: float = pydantic.Field(settings.DEFAULT_WAVELENGTH, title="Wavelength")
    theta_min: float = pydantic.Field(0.005, title="Smallest pitch angle (rad)")
    theta_max: float = pydantic.Field(0.25, title="Largest pitch angle (rad)")
    n_points: int = pydantic.Field(50, title="Grid points")

    _check_l_f = pydantic.validator("l_f", allow_reuse=True)(_multipolarity)

    @pydantic.validator("kind", pre=True)
    def accept_dashes(cls, v):
        return v.replace("-", "_") if isinstance(v, str) else v

    @pydantic.validator("kind")
    def asymmetry_kind(cls, v: ObservableKind) -> ObservableKind:
        if v not in (ObservableKind.CD, ObservableKind.A_LAMBDA):
            raise ValueError("kind must be cd or a_lambda")
        return v

    @pydantic.validator("b")
    def b_non_negative(cls, v: float) -> float:
        if not (math.isfinite(v) and v >= 0):
            raise ValueError("b >= 0 is required")
        return v

    @pydantic.validator("wavelength")
    def wavelength_positive(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("wavelength > 0 is required")
        return v

    @pydantic.validator("theta_min", "theta_max")
    def pitch_angle_in_range(cls, v: float) -> float:
        if not 0.0 < v < math.pi / 2:
            raise ValueError("theta_k in (0, pi/2) is required")
        return v

    @pydantic.validator("n_points")
    def enough_points(cls, v: int) -> int:
        if v < 2:
            raise ValueError("n_points >= 2 is required")
        return v

    @pydantic.root_validator(skip_on_failure=True)
    def ordered_range(cls, values: dict) -> dict:
        if not values["theta_min"] < values["theta_max"]:
            raise ValueError("theta_min < theta_max is required")
        return values


class ParaxialConfig(ActionConfiguration):
    kind: FormulaKind = pydantic.Field(FormulaKind.CD, title="Observable")
    mbar: int = pydantic.Field(1, title="Topological charge")
    l_f: int = pydantic.Field(2, title="Final-state multipolarity")
    x_max: float = pydantic.Field(10.0, title="Largest x = k b")
    n_points: int = pydantic.Field(25, title="Grid points")
    numeric: bool = pydantic.Field(False, title="Evaluate the small-angle limit numerically")
    theta_k: float = pydantic.Field(settings.PARAXIAL_THETA_K, title="Pitch angle for the numeric limit")
    export_tables: bool = pydantic.Field(False, title="Dump every closed form as JSON")

    _check_l_f = pydantic.validator("l_f", allow_reuse=True)(_multipolarity)

    @pydantic.validator("kind", pre=True)
    def accept_dashes(cls, v):
        return v.replace("-", "_") if isinstance(v, str) else v

    @pydantic.validator("x_max")
    def x_max_positive(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("x_max > 0 is required")
        return v

    @pydantic.validator("n_points")
    def enough_points(cls, v: int) -> int:
        if v < 2:
            raise ValueError("n_points >= 2 is required")
        return v

    @pydantic.validator("theta_k")
    def pitch_angle_in_range(cls, v: float) -> float:
        if not 0.0 < v < math.pi / 2:
            raise ValueError("theta_k in (0, pi/2) is required")
        return v


class VerifyConfig(ActionConfiguration):
    only: Optional[List[str]] = pydantic.Field(None, title="Run only these checks")
