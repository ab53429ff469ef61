"""Bessel-mode (twisted) photon: kinematics, coordinate-space potential and local energy flux.

Natural units c = hbar = 1; lengths are measured in the units of ``wavelength``.
"""
import cmath
import logging
import math
from typing import NamedTuple, Tuple, Union

import numpy as np
import pydantic
from numpy.typing import ArrayLike

from .specfun import bessel_j

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)


class BeamSpec(pydantic.BaseModel):
    """One Bessel mode |kappa, m_gamma, k_z, Lambda>."""

    mbar: pydantic.StrictInt = pydantic.Field(
        ..., title="Topological charge", description="Paraxial OAM projection per photon."
    )
    lambda_hel: pydantic.StrictInt = pydantic.Field(
        ..., title="Helicity", description="Plane-wave helicity, +1 or -1."
    )
    theta_k: float = pydantic.Field(..., title="Pitch angle (rad)")
    wavelength: float = pydantic.Field(1.0, title="Wavelength")

    class Config:
        frozen = True

    @pydantic.validator("lambda_hel")
    def helicity_is_unit(cls, v: int) -> int:
        if v not in (1, -1):
            raise ValueError("|lambda_hel| = 1 is required")
        return v

    @pydantic.validator("theta_k")
    def pitch_angle_in_range(cls, v: float) -> float:
        if not 0.0 < v < math.pi / 2:
            raise ValueError("0 < theta_k < pi/2 is required")
        return v

    @pydantic.validator("wavelength")
    def wavelength_positive(cls, v: float) -> float:
        if not (math.isfinite(v) and v > 0):
            raise ValueError("wavelength > 0 is required")
        return v

    @property
    def omega(self) -> float:
        return 2.0 * math.pi / self.wavelength

    @property
    def kappa(self) -> float:
        return self.omega * math.sin(self.theta_k)

    @property
    def k_z(self) -> float:
        return self.omega * math.cos(self.theta_k)

    @property
    def m_gamma(self) -> int:
        return self.mbar + self.lambda_hel

    def mirrored(self) -> "BeamSpec":
        """Parity mirror: (mbar, Lambda) -> (-mbar, -Lambda)."""
        return self.copy(update={"mbar": -self.mbar, "lambda_hel": -self.lambda_hel})


class Kinematics(NamedTuple):
    """Derived scalars of a BeamSpec: omega, kappa = omega sin(theta_k), k_z = omega cos(theta_k), m_gamma."""

    omega: float
    kappa: float
    k_z: float
    m_gamma: int


class CylPoint(pydantic.BaseModel):
    rho: float = 0.0
    phi: float = 0.0
    z: float = 0.0
    t: float = 0.0

    class Config:
        frozen = True

    @pydantic.validator("rho")
    def rho_non_negative(cls, v: float) -> float:
        if v < 0:
            raise ValueError("rho >= 0 is required")
        return v


class FieldAmps(pydantic.BaseModel):
    """Coefficients of eta_Lambda, eta_{-Lambda} and eta_0 in the potential of one mode."""

    a_plus: complex
    a_minus: complex
    a_zero: complex
    lambda_hel: pydantic.StrictInt

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @pydantic.validator("a_plus", "a_minus", "a_zero", pre=True)
    def finite_complex(cls, v) -> complex:
        v = complex(v)
        if not cmath.isfinite(v):
            raise ValueError("field amplitudes must be finite")
        return v


def helicity_pair(mbar: int, theta_k: float, wavelength: float = 1.0) -> Tuple[BeamSpec, BeamSpec]:
    """The (mbar, Lambda=+1) and (mbar, Lambda=-1) modes sharing omega and theta_k."""
    return (
        BeamSpec(mbar=mbar, lambda_hel=1, theta_k=theta_k, wavelength=wavelength),
        BeamSpec(mbar=mbar, lambda_hel=-1, theta_k=theta_k, wavelength=wavelength),
    )


def kinematics(spec: BeamSpec) -> Kinematics:
    return Kinematics(omega=spec.omega, kappa=spec.kappa, k_z=spec.k_z, m_gamma=spec.m_gamma)


def field_amplitudes(
    spec: BeamSpec, rho: ArrayLike, phi: ArrayLike = 0.0, z: float = 0.0, t: float = 0.0
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized amplitudes (eta_Lambda, eta_{-Lambda}, eta_0) of the coordinate-space potential."""
    lam = spec.lambda_hel
    m_gamma = spec.m_gamma
    rho = np.asarray(rho, dtype=float)
    phi = np.asarray(phi, dtype=float)
    argument = spec.kappa * rho
    common = math.sqrt(spec.kappa / (2.0 * math.pi)) * cmath.exp(-1j * (spec.omega * t - spec.k_z * z))
    half = spec.theta_k / 2.0

    a_plus = (
        common * (1j) ** (-lam) * np.exp(1j * (m_gamma - lam) * phi)
        * math.cos(half) ** 2 * bessel_j(m_gamma - lam, argument)
    )
    a_minus = (
        common * (1j) ** lam * np.exp(1j * (m_gamma + lam) * phi)
        * math.sin(half) ** 2 * bessel_j(m_gamma + lam, argument)
    )
    a_zero = (
        common * (lam / SQRT2) * np.exp(1j * m_gamma * phi)
        * math.sin(spec.theta_k) * bessel_j(m_gamma, argument)
    )
    return a_plus, a_minus, a_zero


def vector_potential(spec: BeamSpec, p: CylPoint) -> FieldAmps:
    a_plus, a_minus, a_zero = field_amplitudes(spec, p.rho, p.phi, p.z, p.t)
    return FieldAmps(
        a_plus=complex(a_plus), a_minus=complex(a_minus), a_zero=complex(a_zero),
        lambda_hel=spec.lambda_hel,
    )


def circular_components(a_plus, a_minus, lambda_hel: int):
    """Reorder (eta_Lambda, eta_{-Lambda}) coefficients into (eta_{+1}, eta_{-1})."""
    if lambda_hel == 1:
        return a_plus, a_minus
    return a_minus, a_plus


def cartesian_components(c_plus_one, c_minus_one, c_zero):
    """Cartesian (E_x, E_y, E_z) from circular-basis coefficients; the common factor i*omega is dropped."""
    e_x = (-c_plus_one + c_minus_one) / SQRT2
    e_y = -1j * (c_plus_one + c_minus_one) / SQRT2
    return e_x, e_y, c_zero


def to_cartesian(f: FieldAmps) -> Tuple[complex, complex, complex]:
    c_plus_one, c_minus_one = circular_components(f.a_plus, f.a_minus, f.lambda_hel)
    e_x, e_y, e_z = cartesian_components(c_plus_one, c_minus_one, f.a_zero)
    return complex(e_x), complex(e_y), complex(e_z)


def flux_weights(spec: BeamSpec) -> Tuple[Tuple[float, int], ...]:
    """(weight, Bessel order) pairs of the bracket in the local energy flux."""
    half = spec.theta_k / 2.0
    return (
        (math.cos(half) ** 4, spec.m_gamma - spec.lambda_hel),
        (math.sin(half) ** 4, spec.m_gamma + spec.lambda_hel),
        (math.sin(spec.theta_k) ** 2 / 2.0, spec.m_gamma),
    )


def flux_prefactor(spec: BeamSpec) -> float:
    return math.cos(spec.theta_k) * spec.kappa * spec.omega ** 2 / (2.0 * math.pi)


def flux(spec: BeamSpec, rho: ArrayLike) -> Union[float, np.ndarray]:
    """Local energy flux f(rho) = cos(theta_k) (|E|^2 + |B|^2) / 4 in closed form."""
    argument = spec.kappa * np.asarray(rho, dtype=float)
    bracket = sum(weight * bessel_j(order, argument) ** 2 for weight, order in flux_weights(spec))
    value = flux_prefactor(spec) * bracket
    return float(value) if np.ndim(value) == 0 else value


def berry_phase(spec: BeamSpec) -> float:
    return 2.0 * math.pi * (1.0 - math.cos(spec.theta_k))
