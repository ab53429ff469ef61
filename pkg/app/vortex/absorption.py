"""Photoexcitation of an s-state atom by a Bessel-mode photon.

The twisted-photon amplitude factorizes into a Bessel function of the
impact parameter, a Wigner d-function of the pitch angle and the plane-wave
amplitude. The plane-wave amplitude and the energy-conserving delta factor
are set to one: every observable built here is a ratio in which they cancel,
so absolute rates are in arbitrary units.

Cross sections are reported relative to the plane-wave cross section of the
same transition in the same normalization (unit-amplitude plane wave: rate
1, energy flux omega^2), i.e. sigma(b) = omega^2 * Gamma(b) / f(b).
"""
import logging
import math
from typing import Iterable, List, Tuple, Union

import numpy as np
import pydantic
from numpy.typing import ArrayLike
from scipy import integrate

from app.services.errors import NumericalDomainError, SingularPointError
from .beam import BeamSpec, flux_prefactor, flux_weights
from .specfun import bessel_j, wigner_d, wigner_d_matrix

logger = logging.getLogger(__name__)

MAX_MULTIPOLARITY = 8

# Cross sections are expressed in units of the plane-wave value.
PLANE_WAVE_CROSS_SECTION = 1.0


class TransitionSpec(pydantic.BaseModel):
    """Excitation from l_i = m_i = 0 into a state of orbital angular momentum l_f."""

    l_f: pydantic.StrictInt = pydantic.Field(..., title="Final-state multipolarity")

    class Config:
        frozen = True

    @pydantic.validator("l_f")
    def multipolarity_in_range(cls, v: int) -> int:
        if not 1 <= v <= MAX_MULTIPOLARITY:
            raise ValueError(f"1 <= l_f <= {MAX_MULTIPOLARITY} is required")
        return v

    @property
    def label(self) -> str:
        return f"E{self.l_f}"


class AmplitudeResult(pydantic.BaseModel):
    m_f: int
    magnitude: float

    @pydantic.validator("magnitude")
    def magnitude_non_negative(cls, v: float) -> float:
        if v < 0:
            raise ValueError("magnitude >= 0 is required")
        return v


class BesselSquareSum:
    """prefactor * sum_i weight_i * J_{n_i}(kappa b)^2 with non-negative weights.

    Both the excitation rate and the local flux have this shape. Besides
    evaluating the sum, the object knows its leading small-b behaviour,
    coefficient * b**power, which is what ratios need at the vortex center.
    """

    def __init__(self, prefactor: float, kappa: float, terms: Iterable[Tuple[float, int]]):
        self.prefactor = prefactor
        self.kappa = kappa
        self.terms = tuple((float(weight), int(order)) for weight, order in terms)

    def __repr__(self) -> str:
        return f"BesselSquareSum(prefactor={self.prefactor!r}, kappa={self.kappa!r}, terms={self.terms!r})"

    def __call__(self, b: ArrayLike) -> Union[float, np.ndarray]:
        argument = self.kappa * np.asarray(b, dtype=float)
        total = np.zeros_like(argument)
        for weight, order in self.terms:
            if weight != 0.0:
                total = total + weight * np.square(bessel_j(order, argument))
        value = self.prefactor * total
        return float(value) if np.ndim(value) == 0 else value

    def leading(self) -> Tuple[float, int]:
        """(coefficient, power) of the first non-vanishing term of the small-b expansion.

        J_n(kappa b)^2 ~ ((kappa b / 2)^|n| / |n|!)^2; a sum with no non-zero
        weight returns (0.0, 0).
        """
        live = [(weight, abs(order)) for weight, order in self.terms if weight != 0.0]
        if not live:
            return 0.0, 0
        lowest = min(order for _, order in live)
        scale = (self.kappa / 2.0) ** (2 * lowest) / math.factorial(lowest) ** 2
        coefficient = self.prefactor * scale * math.fsum(w for w, order in live if order == lowest)
        return coefficient, 2 * lowest


def _check_impact_parameter(b: ArrayLike) -> np.ndarray:
    arr = np.asarray(b, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise NumericalDomainError("impact parameter b must be finite and >= 0")
    return arr


def _check_projection(tr: TransitionSpec, m_f: int) -> None:
    if abs(m_f) > tr.l_f:
        raise NumericalDomainError(f"|m_f| <= l_f is required: m_f={m_f}, l_f={tr.l_f}")


def rate_terms(beam: BeamSpec, tr: TransitionSpec) -> BesselSquareSum:
    """Gamma(b) = (kappa/2pi) sum_{m_f} J^2_{m_f - m_gamma}(kappa b) d^{l_f}_{m_f,Lambda}(theta_k)^2."""
    # column Lambda of d^{l_f}, rows m_f = -l_f..l_f
    column = wigner_d_matrix(tr.l_f, beam.theta_k)[:, beam.lambda_hel + tr.l_f]
    terms: List[Tuple[float, int]] = [
        (float(d) ** 2, m_f - beam.m_gamma)
        for m_f, d in zip(range(-tr.l_f, tr.l_f + 1), column)
    ]
    return BesselSquareSum(beam.kappa / (2.0 * math.pi), beam.kappa, terms)


def flux_terms(beam: BeamSpec) -> BesselSquareSum:
    return BesselSquareSum(flux_prefactor(beam), beam.kappa, flux_weights(beam))


def amplitude(beam: BeamSpec, tr: TransitionSpec, m_f: int, b: float) -> AmplitudeResult:
    _check_projection(tr, m_f)
    _check_impact_parameter(b)
    magnitude = (
        math.sqrt(beam.kappa / (2.0 * math.pi))
        * abs(bessel_j(m_f - beam.m_gamma, beam.kappa * b))
        * abs(wigner_d(tr.l_f, m_f, beam.lambda_hel, beam.theta_k))
    )
    return AmplitudeResult(m_f=m_f, magnitude=magnitude)


def rate(beam: BeamSpec, tr: TransitionSpec, b: ArrayLike) -> Union[float, np.ndarray]:
    """Excitation rate summed over final magnetic substates, arbitrary units."""
    _check_impact_parameter(b)
    return rate_terms(beam, tr)(b)


def cross_section(beam: BeamSpec, tr: TransitionSpec, b: ArrayLike) -> Union[float, np.ndarray]:
    """sigma(b) relative to the plane-wave cross section, using the unintegrated local flux.

    Raises SingularPointError where the local flux vanishes (vortex center,
    common Bessel nodes); ratio-safe forms live in the observables module.
    """
    arr = _check_impact_parameter(b)
    gamma = np.asarray(rate_terms(beam, tr)(arr))
    f = np.asarray(flux_terms(beam)(arr))
    if np.any(f == 0.0):
        raise SingularPointError(
            f"local flux vanishes at b={arr[f == 0.0].tolist() if arr.ndim else float(arr)}; "
            "cross section is undefined there"
        )
    value = beam.omega ** 2 * gamma / f
    return float(value) if np.ndim(value) == 0 else value


def cross_section_limit(beam: BeamSpec, tr: TransitionSpec) -> float:
    """Limit of sigma(b) as b -> 0+, possibly infinite."""
    gamma_coefficient, gamma_power = rate_terms(beam, tr).leading()
    flux_coefficient, flux_power = flux_terms(beam).leading()
    if gamma_coefficient == 0.0 or gamma_power > flux_power:
        return 0.0
    if gamma_power < flux_power:
        return math.inf
    return beam.omega ** 2 * gamma_coefficient / flux_coefficient


def plane_wave_cross_section(tr: TransitionSpec) -> float:
    """sigma^pw for the transition in the units used by ``cross_section``.

    The theta_k -> 0 limit of the twisted cross section: only m_f = Lambda
    survives and rate and flux reduce to those of a unit-amplitude plane wave.
    """
    return PLANE_WAVE_CROSS_SECTION


def disc_integrated_rate(beam: BeamSpec, tr: TransitionSpec, radius: float, n_points: int = 4001) -> float:
    """Rate integrated over a disc of the given radius around the vortex axis.

    Ideal Bessel beams are not normalizable, so the result grows with the
    radius; only ratios between helicities at a common radius are meaningful.
    """
    if radius <= 0:
        raise NumericalDomainError("radius > 0 is required")
    b = np.linspace(0.0, radius, n_points)
    return float(integrate.trapezoid(rate_terms(beam, tr)(b) * 2.0 * math.pi * b, b))
