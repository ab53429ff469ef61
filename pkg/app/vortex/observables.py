"""Circular dichroism and photon-spin rate asymmetry as functions of impact parameter.

Both observables compare the (mbar, Lambda=+1) and (mbar, Lambda=-1) modes
of a common topological charge, pitch angle and frequency. They are computed
in the cross-multiplied form

    CD  = (G+ f- - G- f+) / (G+ f- + G- f+)
    A_L = (G+ - G-) / (G+ + G-)

which equals the cross-section ratio wherever both cross sections are finite
and stays defined where a flux vanishes. Where the denominator is exactly
zero (vortex center with every channel closed) the limit b -> 0+ is taken
from the leading terms of the Bessel series.
"""
import logging
import math
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pydantic
from numpy.typing import ArrayLike

from app import settings
from app.services.errors import NumericalDomainError, UnsupportedParaxialEntry
from app.services.utils import generate_batches, parallel_map
from . import paraxial
from .absorption import (
    BesselSquareSum,
    TransitionSpec,
    cross_section,
    cross_section_limit,
    flux_terms,
    plane_wave_cross_section,
    rate_terms,
)
from .beam import BeamSpec, helicity_pair

logger = logging.getLogger(__name__)


class ObservableKind(str, Enum):
    CD = "cd"
    A_LAMBDA = "a_lambda"
    FLUX = "flux"
    RATE = "rate"
    SIGMA_RATIO = "sigma_ratio"


ASYMMETRY_KINDS = (ObservableKind.CD, ObservableKind.A_LAMBDA)


class ProfilePoint(pydantic.BaseModel):
    b: float
    # None marks an undefined (singular) point
    value: Optional[float]


class RadialProfile(pydantic.BaseModel):
    observable_kind: ObservableKind
    mbar: int
    l_f: Optional[int]
    theta_k: float
    wavelength: float = 1.0
    lambda_hel: Optional[int] = None
    points: List[ProfilePoint]

    @pydantic.validator("points")
    def strictly_increasing(cls, v: List[ProfilePoint]) -> List[ProfilePoint]:
        for previous, current in zip(v, v[1:]):
            if not current.b > previous.b:
                raise ValueError("b must be strictly increasing")
        return v

    @pydantic.root_validator(skip_on_failure=True)
    def asymmetries_bounded(cls, values: dict) -> dict:
        if values["observable_kind"] in ASYMMETRY_KINDS:
            for point in values["points"]:
                if point.value is not None and abs(point.value) > 1.0 + 1e-12:
                    raise ValueError(f"|value| <= 1 is required for asymmetries, got {point.value} at b={point.b}")
        return values

    @property
    def b(self) -> np.ndarray:
        return np.array([p.b for p in self.points])

    @property
    def values(self) -> np.ndarray:
        """Values with undefined points as nan."""
        return np.array([math.nan if p.value is None else p.value for p in self.points])


Product = Sequence[BesselSquareSum]


def _evaluate(product: Product, b: np.ndarray) -> np.ndarray:
    value = np.ones_like(b)
    for factor in product:
        value = value * np.asarray(factor(b))
    return value


def _leading(product: Product) -> Tuple[float, int]:
    coefficient, power = 1.0, 0
    for factor in product:
        c, p = factor.leading()
        coefficient *= c
        power += p
    return coefficient, power


def _limit_at_center(plus: Product, minus: Product) -> float:
    plus_coefficient, plus_power = _leading(plus)
    minus_coefficient, minus_power = _leading(minus)
    if plus_coefficient == 0.0 and minus_coefficient == 0.0:
        return math.nan
    if plus_coefficient == 0.0:
        return -1.0
    if minus_coefficient == 0.0:
        return 1.0
    if plus_power < minus_power:
        return 1.0
    if plus_power > minus_power:
        return -1.0
    return (plus_coefficient - minus_coefficient) / (plus_coefficient + minus_coefficient)


def _asymmetry(plus: Product, minus: Product, b: ArrayLike) -> Union[float, np.ndarray]:
    """(P - M) / (P + M) for non-negative products P, M of Bessel-square sums."""
    arr = np.asarray(b, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise NumericalDomainError("impact parameter b must be finite and >= 0")
    p = _evaluate(plus, arr)
    m = _evaluate(minus, arr)
    denominator = p + m
    singular = denominator == 0.0
    with np.errstate(invalid="ignore", divide="ignore"):
        value = np.where(singular, math.nan, (p - m) / np.where(singular, 1.0, denominator))
    if np.any(singular):
        limit = _limit_at_center(plus, minus)
        logger.debug(f"Using the small-b series limit {limit} at {int(np.count_nonzero(singular))} point(s)")
        # p and m vanish together only at b = 0 or through underflow next to it
        value = np.where(singular, limit, value)
    return float(value) if np.ndim(value) == 0 else value


def _pair(mbar: int, theta_k: float, wavelength: float) -> Tuple[BeamSpec, BeamSpec]:
    return helicity_pair(mbar, theta_k, wavelength)


def circular_dichroism(
    mbar: int, tr: TransitionSpec, theta_k: float, b: ArrayLike, wavelength: float = 1.0
) -> Union[float, np.ndarray]:
    """CD^(mbar, l_f)(b); nan where undefined."""
    plus, minus = _pair(mbar, theta_k, wavelength)
    return _asymmetry(
        (rate_terms(plus, tr), flux_terms(minus)),
        (rate_terms(minus, tr), flux_terms(plus)),
        b,
    )


def rate_asymmetry(
    mbar: int, tr: TransitionSpec, theta_k: float, b: ArrayLike, wavelength: float = 1.0
) -> Union[float, np.ndarray]:
    """A_Lambda^(mbar, l_f)(b); nan where undefined."""
    plus, minus = _pair(mbar, theta_k, wavelength)
    return _asymmetry((rate_terms(plus, tr),), (rate_terms(minus, tr),), b)


def sigma_ratio(beam: BeamSpec, tr: TransitionSpec, b: ArrayLike) -> Union[float, np.ndarray]:
    """r^tw(b) = sigma(b) / sigma^pw, with the b -> 0+ limit (possibly inf) where the flux vanishes."""
    arr = np.asarray(b, dtype=float)
    f = np.asarray(flux_terms(beam)(arr))
    zero = f == 0.0
    if not np.any(zero):
        value = cross_section(beam, tr, arr) / plane_wave_cross_section(tr)
    else:
        safe = np.where(zero, 1.0, arr)
        regular = np.asarray(cross_section(beam, tr, safe))
        value = np.where(zero, cross_section_limit(beam, tr), regular) / plane_wave_cross_section(tr)
        if np.any(zero & (arr > 0)):
            logger.warning("Local flux underflows away from the vortex center; using the b -> 0 limit there")
    return float(value) if np.ndim(value) == 0 else value


def _evaluate_kind(
    kind: ObservableKind, mbar: int, tr: Optional[TransitionSpec], theta_k: float,
    b: np.ndarray, wavelength: float, lambda_hel: int,
) -> np.ndarray:
    if kind == ObservableKind.CD:
        return np.asarray(circular_dichroism(mbar, tr, theta_k, b, wavelength))
    if kind == ObservableKind.A_LAMBDA:
        return np.asarray(rate_asymmetry(mbar, tr, theta_k, b, wavelength))
    beam = BeamSpec(mbar=mbar, lambda_hel=lambda_hel, theta_k=theta_k, wavelength=wavelength)
    if kind == ObservableKind.FLUX:
        return np.asarray(flux_terms(beam)(b))
    if kind == ObservableKind.RATE:
        return np.asarray(rate_terms(beam, tr)(b))
    with np.errstate(invalid="ignore"):
        value = np.asarray(sigma_ratio(beam, tr, b))
    # an infinite ratio is a singular point of the profile
    return np.where(np.isinf(value), math.nan, value)


def scan_profile(
    kind: Union[ObservableKind, str],
    mbar: int,
    tr: Optional[TransitionSpec],
    theta_k: float,
    b_grid: ArrayLike,
    wavelength: float = 1.0,
    lambda_hel: int = 1,
    workers: Optional[int] = None,
) -> RadialProfile:
    """Evaluate one observable on a b-grid; undefined points come back as None.

    The grid is split in contiguous chunks evaluated concurrently; the output
    order is the grid order whatever the scheduling.
    """
    kind = ObservableKind(kind)
    grid = np.asarray(b_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise NumericalDomainError("b_grid must be a non-empty one-dimensional grid")
    if np.any(np.diff(grid) <= 0):
        raise NumericalDomainError("b_grid must be strictly increasing")
    if tr is None and kind != ObservableKind.FLUX:
        raise NumericalDomainError(f"a transition is required for {kind.value} profiles")

    workers = workers or settings.VD_THREADS
    logger.debug(f"Scanning {kind.value} on {grid.size} points with up to {workers} worker(s)")
    chunks = parallel_map(
        lambda chunk: _evaluate_kind(kind, mbar, tr, theta_k, chunk, wavelength, lambda_hel),
        list(generate_batches(grid, math.ceil(grid.size / workers))),
        workers=workers,
    )
    values = np.concatenate([np.atleast_1d(chunk) for chunk in chunks])
    helicity_dependent = kind in (ObservableKind.FLUX, ObservableKind.RATE, ObservableKind.SIGMA_RATIO)
    return RadialProfile(
        observable_kind=kind,
        mbar=mbar,
        l_f=tr.l_f if tr is not None else None,
        theta_k=theta_k,
        wavelength=wavelength,
        lambda_hel=lambda_hel if helicity_dependent else None,
        points=[
            ProfilePoint(b=float(b), value=None if math.isnan(v) else float(v))
            for b, v in zip(grid, values)
        ],
    )


class AnglePoint(pydantic.BaseModel):
    theta_k: float
    value: Optional[float]


class PitchAngleProfile(pydantic.BaseModel):
    """An asymmetry at fixed impact parameter as a function of the pitch angle."""

    observable_kind: ObservableKind
    mbar: int
    l_f: int
    b: float
    wavelength: float = 1.0
    # small-angle closed form at x = k b, None without a tabulated entry
    paraxial_value: Optional[float] = None
    points: List[AnglePoint]

    @pydantic.validator("points")
    def strictly_increasing(cls, v: List[AnglePoint]) -> List[AnglePoint]:
        for previous, current in zip(v, v[1:]):
            if not current.theta_k > previous.theta_k:
                raise ValueError("theta_k must be strictly increasing")
        return v

    @property
    def theta_k(self) -> np.ndarray:
        return np.array([p.theta_k for p in self.points])

    @property
    def values(self) -> np.ndarray:
        return np.array([math.nan if p.value is None else p.value for p in self.points])


def _paraxial_reference(kind: ObservableKind, mbar: int, l_f: int, x: float) -> Optional[float]:
    try:
        return float(paraxial.formula(kind.value, mbar, l_f)(x))
    except UnsupportedParaxialEntry:
        return None


def scan_pitch_angle(
    kind: Union[ObservableKind, str],
    mbar: int,
    tr: TransitionSpec,
    b: float,
    theta_grid: ArrayLike,
    wavelength: float = 1.0,
    workers: Optional[int] = None,
) -> PitchAngleProfile:
    """CD or A_Lambda at one impact parameter over a grid of pitch angles, in grid order."""
    kind = ObservableKind(kind)
    if kind not in ASYMMETRY_KINDS:
        raise NumericalDomainError(f"pitch-angle scans are defined for cd and a_lambda, not {kind.value}")
    if not (math.isfinite(b) and b >= 0):
        raise NumericalDomainError("impact parameter b must be finite and >= 0")
    grid = np.asarray(theta_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise NumericalDomainError("theta_grid must be a non-empty one-dimensional grid")
    if np.any(np.diff(grid) <= 0):
        raise NumericalDomainError("theta_grid must be strictly increasing")
    if not (grid[0] > 0 and grid[-1] < math.pi / 2):
        raise NumericalDomainError("pitch angles in (0, pi/2) are required")

    evaluate = circular_dichroism if kind == ObservableKind.CD else rate_asymmetry
    workers = workers or settings.VD_THREADS
    logger.debug(f"Scanning {kind.value} over {grid.size} pitch angles at b={b}")
    values = parallel_map(lambda theta: evaluate(mbar, tr, float(theta), b, wavelength), list(grid), workers=workers)
    return PitchAngleProfile(
        observable_kind=kind,
        mbar=mbar,
        l_f=tr.l_f,
        b=b,
        wavelength=wavelength,
        paraxial_value=_paraxial_reference(kind, mbar, tr.l_f, 2.0 * math.pi * b / wavelength),
        points=[
            AnglePoint(theta_k=float(theta), value=None if math.isnan(v) else float(v))
            for theta, v in zip(grid, values)
        ],
    )


def paraxial_limit(
    kind: Union[ObservableKind, str],
    mbar: int,
    tr: TransitionSpec,
    x: ArrayLike,
    theta_k: Optional[float] = None,
    richardson: bool = True,
) -> Union[float, np.ndarray]:
    """Numeric small-pitch-angle limit of CD or A_Lambda at x = k b.

    Both observables are even in theta_k, so with ``richardson`` the values at
    theta_k and theta_k/2 are combined to cancel the theta_k^2 correction.
    """
    kind = ObservableKind(kind)
    if kind not in (ObservableKind.CD, ObservableKind.A_LAMBDA):
        raise NumericalDomainError(f"no paraxial limit for {kind.value}")
    theta_k = theta_k or settings.PARAXIAL_THETA_K
    evaluate = circular_dichroism if kind == ObservableKind.CD else rate_asymmetry
    # wavelength 1: k = 2 pi, so b = x / (2 pi)
    b = np.asarray(x, dtype=float) / (2.0 * math.pi)
    coarse = np.asarray(evaluate(mbar, tr, theta_k, b))
    if not richardson:
        value = coarse
    else:
        fine = np.asarray(evaluate(mbar, tr, theta_k / 2.0, b))
        value = (4.0 * fine - coarse) / 3.0
    return float(value) if np.ndim(value) == 0 else value
