"""Polarization of a two-helicity superposition propagating through absorbing atomic matter.

A state c_- |mbar, Lambda=-1> + c_+ |mbar, Lambda=+1> keeps its topological
charge; each helicity is attenuated with its own cross-section ratio,

    c_pm(z) = c_pm(0) exp(-z r_pm(b) / 2),

with z in plane-wave attenuation lengths. Stokes parameters are built from
the transverse field of the superposition at azimuth 0.
"""
import cmath
import logging
import math
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pydantic
from numpy.typing import ArrayLike

from app.services.errors import NumericalDomainError
from .absorption import TransitionSpec
from .beam import BeamSpec, cartesian_components, circular_components, field_amplitudes, helicity_pair
from .observables import sigma_ratio

logger = logging.getLogger(__name__)


class PolarizationState(pydantic.BaseModel):
    mbar: int
    theta_k: float
    c_plus: complex = pydantic.Field(..., description="Coefficient of the Lambda=+1 mode.")
    c_minus: complex = pydantic.Field(..., description="Coefficient of the Lambda=-1 mode.")
    z: float = pydantic.Field(0.0, description="Depth, in plane-wave attenuation lengths 1/mu^pw.")
    l_f_medium: int = pydantic.Field(2, description="Dominant absorbing multipolarity of the medium.")
    medium_weights: Optional[Dict[int, float]] = pydantic.Field(
        None, description="Weights of several absorbing multipolarities; defaults to l_f_medium alone."
    )
    wavelength: float = 1.0
    b: Optional[float] = pydantic.Field(
        None, description="Impact parameter the coefficients refer to once attenuated; None while uniform."
    )

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @pydantic.validator("c_plus", "c_minus", pre=True)
    def finite_complex(cls, v) -> complex:
        v = complex(v)
        if not cmath.isfinite(v):
            raise ValueError("coefficients must be finite")
        return v

    @pydantic.validator("z")
    def depth_non_negative(cls, v: float) -> float:
        if v < 0:
            raise ValueError("z >= 0 is required")
        return v

    @pydantic.validator("medium_weights")
    def weights_positive(cls, v: Optional[Dict[int, float]]) -> Optional[Dict[int, float]]:
        if v is not None:
            if not v or any(w < 0 for w in v.values()) or sum(v.values()) <= 0:
                raise ValueError("medium weights must be non-negative with a positive sum")
            for l_f in v:
                TransitionSpec(l_f=l_f)
        return v

    @pydantic.root_validator(skip_on_failure=True)
    def not_empty_at_launch(cls, values: dict) -> dict:
        if values["z"] == 0 and values["c_plus"] == 0 and values["c_minus"] == 0:
            raise ValueError("c_plus and c_minus must not both vanish at z = 0")
        return values

    @property
    def weights(self) -> Dict[int, float]:
        return self.medium_weights or {self.l_f_medium: 1.0}

    def beams(self) -> Tuple[BeamSpec, BeamSpec]:
        return helicity_pair(self.mbar, self.theta_k, self.wavelength)


class StokesVector(pydantic.BaseModel):
    s0: float
    s1: float
    s2: float
    s3: float

    @pydantic.root_validator(skip_on_failure=True)
    def physical(cls, values: dict) -> dict:
        s0 = values["s0"]
        if s0 < 0:
            raise ValueError("S0 >= 0 is required")
        polarized = values["s1"] ** 2 + values["s2"] ** 2 + values["s3"] ** 2
        if polarized > s0 ** 2 * (1 + 1e-12) + 1e-300:
            raise ValueError("S1^2 + S2^2 + S3^2 <= S0^2 is required")
        return values

    def normalized(self) -> Optional[Tuple[float, float, float]]:
        """(S1/S0, S2/S0, S3/S0), or None at a field node."""
        if self.s0 == 0:
            return None
        return self.s1 / self.s0, self.s2 / self.s0, self.s3 / self.s0

    @property
    def degree_of_linear_polarization(self) -> Optional[float]:
        if self.s0 == 0:
            return None
        return math.hypot(self.s1, self.s2) / self.s0


def attenuation_ratio(beam: BeamSpec, tr: TransitionSpec, b: ArrayLike) -> Union[float, np.ndarray]:
    """r^tw(b) = sigma(b) / sigma^pw; inf at a vortex center where the helicity is fully absorbed."""
    return sigma_ratio(beam, tr, b)


def medium_attenuation_ratio(
    beam: BeamSpec, weights: Dict[int, float], b: ArrayLike
) -> Union[float, np.ndarray]:
    total = sum(weights.values())
    value = sum(
        (w / total) * np.asarray(attenuation_ratio(beam, TransitionSpec(l_f=l_f), b))
        for l_f, w in sorted(weights.items()) if w > 0
    )
    return float(value) if np.ndim(value) == 0 else value


def _attenuate(c: complex, depth: float, ratio: ArrayLike) -> np.ndarray:
    ratio = np.asarray(ratio, dtype=float)
    if depth == 0:
        return np.full(ratio.shape, c, dtype=complex)
    return c * np.exp(-depth * ratio / 2.0)


def _evolved_coefficients(
    state: PolarizationState, b: np.ndarray, z: float
) -> Tuple[np.ndarray, np.ndarray]:
    if z < state.z:
        raise NumericalDomainError(f"cannot propagate backwards from z={state.z} to z={z}")
    depth = z - state.z
    plus, minus = state.beams()
    if depth == 0:
        return np.full(b.shape, state.c_plus, dtype=complex), np.full(b.shape, state.c_minus, dtype=complex)
    weights = state.weights
    c_plus = _attenuate(state.c_plus, depth, medium_attenuation_ratio(plus, weights, b))
    c_minus = _attenuate(state.c_minus, depth, medium_attenuation_ratio(minus, weights, b))
    return c_plus, c_minus


def evolve(state: PolarizationState, b: float, z: float) -> PolarizationState:
    """Attenuate the coefficients from depth ``state.z`` to ``z`` at impact parameter ``b``."""
    if state.b is not None and state.b != b:
        raise NumericalDomainError(
            f"state coefficients refer to b={state.b}; cannot evolve them at b={b}"
        )
    c_plus, c_minus = _evolved_coefficients(state, np.asarray(float(b)), z)
    return state.copy(update={"c_plus": complex(c_plus), "c_minus": complex(c_minus), "z": z, "b": b})


def transverse_field(
    state: PolarizationState, b: ArrayLike, c_plus: ArrayLike, c_minus: ArrayLike
) -> Tuple[np.ndarray, np.ndarray]:
    """Transverse (E_x, E_y) of the superposition at rho = b, phi = 0."""
    b = np.asarray(b, dtype=float)
    e_x = np.zeros(b.shape, dtype=complex)
    e_y = np.zeros(b.shape, dtype=complex)
    for beam, weight in zip(state.beams(), (c_plus, c_minus)):
        a_plus, a_minus, a_zero = field_amplitudes(beam, b)
        mode_x, mode_y, _ = cartesian_components(*circular_components(a_plus, a_minus, beam.lambda_hel), a_zero)
        e_x = e_x + np.asarray(weight) * mode_x
        e_y = e_y + np.asarray(weight) * mode_y
    return e_x, e_y


def stokes_parameters(e_x: ArrayLike, e_y: ArrayLike) -> Tuple[np.ndarray, ...]:
    """S0..S3 of a transverse field; S3 = +S0 for a pure eta_{+1} field."""
    e_x = np.asarray(e_x)
    e_y = np.asarray(e_y)
    ix = np.abs(e_x) ** 2
    iy = np.abs(e_y) ** 2
    cross = e_x * np.conj(e_y)
    return ix + iy, ix - iy, 2.0 * cross.real, -2.0 * cross.imag


def stokes_profile(
    state: PolarizationState, b_grid: ArrayLike, z: Optional[float] = None
) -> List[Tuple[float, StokesVector]]:
    """Stokes vector of the superposition at each b, after propagating to depth ``z`` (default state.z)."""
    if state.b is not None:
        raise NumericalDomainError("stokes_profile needs coefficients that are uniform across the beam")
    grid = np.asarray(b_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise NumericalDomainError("b_grid must be a non-empty one-dimensional grid")
    if np.any(grid < 0):
        raise NumericalDomainError("impact parameters must be >= 0")
    z = state.z if z is None else z
    c_plus, c_minus = _evolved_coefficients(state, grid, z)
    s0, s1, s2, s3 = stokes_parameters(*transverse_field(state, grid, c_plus, c_minus))
    undefined = int(np.count_nonzero(s0 == 0))
    if undefined:
        logger.debug(f"{undefined} field node(s) with S0 = 0; normalized Stokes ratios undefined there")
    return [
        (float(b), StokesVector(s0=float(a), s1=float(p), s2=float(q), s3=float(r)))
        for b, a, p, q, r in zip(grid, s0, s1, s2, s3)
    ]


def degree_of_linear_polarization(profile: List[Tuple[float, StokesVector]]) -> np.ndarray:
    """sqrt(S1^2 + S2^2) / S0 along a profile, nan at field nodes."""
    return np.array(
        [math.nan if v.degree_of_linear_polarization is None else v.degree_of_linear_polarization
         for _, v in profile]
    )


class StokesSample(pydantic.BaseModel):
    z: float
    b: float
    s0: float
    s1: float
    s2: float
    s3: float


class StokesScan(pydantic.BaseModel):
    """Stokes profiles of one launch state at several depths, rows ordered by (z, b)."""

    mbar: int
    theta_k: float
    l_f_medium: int
    wavelength: float = 1.0
    c_plus: Tuple[float, float] = pydantic.Field(..., description="(real, imag) of the Lambda=+1 coefficient.")
    c_minus: Tuple[float, float] = pydantic.Field(..., description="(real, imag) of the Lambda=-1 coefficient.")
    samples: List[StokesSample]


def stokes_scan(state: PolarizationState, b_grid: ArrayLike, depths: List[float]) -> StokesScan:
    if not depths:
        raise NumericalDomainError("at least one depth is required")
    samples = []
    for z in sorted(depths):
        logger.debug(f"Stokes profile at z={z}")
        samples.extend(
            StokesSample(z=z, b=b, s0=v.s0, s1=v.s1, s2=v.s2, s3=v.s3)
            for b, v in stokes_profile(state, b_grid, z)
        )
    return StokesScan(
        mbar=state.mbar,
        theta_k=state.theta_k,
        l_f_medium=state.l_f_medium,
        wavelength=state.wavelength,
        c_plus=(state.c_plus.real, state.c_plus.imag),
        c_minus=(state.c_minus.real, state.c_minus.imag),
        samples=samples,
    )
