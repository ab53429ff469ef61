"""Invariant and oracle checks run by the ``verify`` command.

Every ``check_*`` function takes no arguments, returns a short detail string
and raises VerificationFailed when its property does not hold. Checks are
discovered by prefix, so adding one here adds it to the suite.
"""
import importlib
import inspect
import logging
import math
import time
from typing import Callable, Dict, List, Optional

import numpy as np
import pydantic

from app.vortex import paraxial
from app.vortex.absorption import TransitionSpec, disc_integrated_rate, rate
from app.vortex.beam import field_amplitudes, flux, helicity_pair
from app.vortex.observables import (
    circular_dichroism,
    paraxial_limit,
    rate_asymmetry,
    scan_pitch_angle,
    scan_profile,
)
from app.vortex.polarization import PolarizationState, stokes_profile
from app.vortex.specfun import bessel_j, bessel_j_series, wigner_d, wigner_d_matrix
from .errors import ConfigurationValidationError, VerificationFailed

logger = logging.getLogger(__name__)

CHECK_PREFIX = "check_"

# fixed seed so the suite is reproducible
_SEED = 20240217


class CheckResult(pydantic.BaseModel):
    name: str
    passed: bool
    detail: str
    elapsed_seconds: float


class VerificationReport(pydantic.BaseModel):
    results: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def table(self) -> str:
        width = max([len(r.name) for r in self.results] + [5])
        lines = [f"{'check'.ljust(width)}  status  detail"]
        for r in self.results:
            lines.append(f"{r.name.ljust(width)}  {'PASS' if r.passed else 'FAIL'}    {r.detail}")
        failed = sum(not r.passed for r in self.results)
        lines.append(f"{len(self.results) - failed} passed, {failed} failed")
        return "\n".join(lines) + "\n"


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise VerificationFailed(message)


def _rng() -> np.random.Generator:
    return np.random.default_rng(_SEED)


def _b_grid(n: int = 400, b_max: float = 2.0) -> np.ndarray:
    return np.linspace(0.0, b_max, n)


# special functions

def check_bessel_parity() -> str:
    rng = _rng()
    worst = 0.0
    for n in range(0, 65):
        x = rng.uniform(0.0, 100.0, 16)
        plus = np.asarray(bessel_j(n, x))
        minus = np.asarray(bessel_j(-n, x))
        worst = max(worst, float(np.max(np.abs(minus - (-1) ** n * plus))))
    _expect(worst == 0.0, f"parity residual {worst:.3g}")
    return "J_-n = (-1)^n J_n exactly for n <= 64"


def check_bessel_recurrence() -> str:
    rng = _rng()
    worst = 0.0
    for n in range(1, 64):
        x = rng.uniform(0.1, 100.0, 32)
        jn = np.asarray(bessel_j(n, x))
        residual = np.abs(np.asarray(bessel_j(n - 1, x)) + np.asarray(bessel_j(n + 1, x)) - 2 * n / x * jn)
        worst = max(worst, float(np.max(residual / np.maximum(1.0, np.abs(jn)))))
    _expect(worst <= 1e-10, f"recurrence residual {worst:.3g}")
    return f"max residual {worst:.2g}"


def check_bessel_series_oracle() -> str:
    worst = 0.0
    for n in (-5, -1, 0, 1, 2, 7, 20):
        for x in (0.0, 0.3, 1.0, 4.0, 10.0):
            reference = bessel_j_series(n, x)
            worst = max(worst, abs(bessel_j(n, x) - reference) / max(1.0, abs(reference)))
    _expect(worst <= 1e-12, f"series mismatch {worst:.3g}")
    return f"max deviation {worst:.2g}"


def check_wigner_orthogonality() -> str:
    rng = _rng()
    worst = 0.0
    for l in range(0, 6):
        for theta in rng.uniform(0.0, math.pi, 5):
            d = wigner_d_matrix(l, float(theta))
            worst = max(worst, float(np.max(np.abs(d.T @ d - np.eye(2 * l + 1)))))
    _expect(worst <= 1e-12, f"orthogonality residual {worst:.3g}")
    return f"max residual {worst:.2g}"


def check_wigner_symmetry() -> str:
    rng = _rng()
    worst = 0.0
    for l in range(0, 9):
        theta = float(rng.uniform(0.0, math.pi))
        for m in range(-l, l + 1):
            for mp in range(-l, l + 1):
                worst = max(
                    worst,
                    abs(wigner_d(l, m, mp, theta) - (-1) ** (m - mp) * wigner_d(l, mp, m, theta)),
                )
    _expect(worst <= 1e-12, f"symmetry residual {worst:.3g}")
    return f"max residual {worst:.2g}"


def check_wigner_small_angle() -> str:
    theta = 1e-3
    checks = {
        "|d2_21|/theta": (abs(wigner_d(2, 2, 1, theta)) / theta, 1.0),
        "|d2_11|": (abs(wigner_d(2, 1, 1, theta)), 1.0),
        "|d2_0-1|/theta": (abs(wigner_d(2, 0, -1, theta)) / theta, math.sqrt(1.5)),
    }
    for label, (value, expected) in checks.items():
        _expect(abs(value / expected - 1.0) <= 1e-5, f"{label} = {value!r}, expected {expected!r}")
    return "leading small-angle magnitudes within 1e-5"


# beam

def check_flux_non_negative() -> str:
    rng = _rng()
    rho = rng.uniform(0.0, 5.0, 200)
    for mbar in range(-4, 5):
        for theta_k in (0.05, 0.5, 1.2):
            for beam in helicity_pair(mbar, theta_k):
                _expect(bool(np.all(np.asarray(flux(beam, rho)) >= 0)), f"negative flux for {beam}")
    return "flux >= 0 on random grids"


def check_flux_mirror_symmetry() -> str:
    rho = _b_grid(200)
    worst = 0.0
    for mbar in range(-4, 5):
        for beam in helicity_pair(mbar, 0.3):
            a = np.asarray(flux(beam, rho))
            b = np.asarray(flux(beam.mirrored(), rho))
            worst = max(worst, float(np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300))))
    _expect(worst <= 1e-14, f"mirror residual {worst:.3g}")
    return f"max relative residual {worst:.2g}"


def check_field_azimuthal_symmetry() -> str:
    rho = np.linspace(0.0, 2.0, 41)
    worst = 0.0
    for mbar in (-2, 0, 1, 3):
        for beam in helicity_pair(mbar, 0.5):
            reference = field_amplitudes(beam, rho, 0.0)
            for phi in np.linspace(0.0, 2.0 * math.pi, 9):
                rotated = field_amplitudes(beam, rho, float(phi))
                for a, c in zip(reference, rotated):
                    a, c = np.abs(a), np.abs(c)
                    residual = np.where(a == 0, c, np.abs(c - a) / np.maximum(a, 1e-300))
                    worst = max(worst, float(np.max(residual)))
    _expect(worst <= 1e-14, f"azimuthal residual {worst:.3g}")
    return f"max relative residual {worst:.2g}"


def check_flux_axis_power_law() -> str:
    rho = np.logspace(-6, -4, 5)
    worst = 0.0
    for mbar in range(-3, 4):
        for beam in helicity_pair(mbar, 0.3):
            m_gamma, lam = beam.m_gamma, beam.lambda_hel
            expected = 2 * min(abs(m_gamma - lam), abs(m_gamma + lam), abs(m_gamma))
            slope = np.polyfit(np.log(rho), np.log(np.asarray(flux(beam, rho))), 1)[0]
            deviation = abs(slope - expected) / max(expected, 1)
            _expect(deviation <= 0.01, f"slope {slope:.4f} for mbar={mbar}, Lambda={lam}, expected {expected}")
            worst = max(worst, deviation)
    return f"log-log slopes within {worst:.2g} of the integer exponents"


def check_flux_field_consistency() -> str:
    rho = np.linspace(0.0, 2.0, 101)
    worst = 0.0
    for mbar in (-3, -1, 0, 1, 2, 4):
        for beam in helicity_pair(mbar, 0.4):
            a_plus, a_minus, a_zero = field_amplitudes(beam, rho, phi=0.3, z=0.7, t=0.2)
            from_field = (
                math.cos(beam.theta_k) * beam.omega ** 2
                * (np.abs(a_plus) ** 2 + np.abs(a_minus) ** 2 + np.abs(a_zero) ** 2)
            )
            closed = np.asarray(flux(beam, rho))
            worst = max(worst, float(np.max(np.abs(closed - from_field) / np.maximum(closed, 1e-300))))
    _expect(worst <= 1e-10, f"flux vs |A|^2 residual {worst:.3g}")
    return f"max relative residual {worst:.2g}"


# absorption

def check_e1_flux_tracking() -> str:
    b = np.linspace(0.01, 2.0, 200)
    worst_spread = 0.0
    worst_level = 0.0
    tr = TransitionSpec(l_f=1)
    for mbar in range(-3, 4):
        for theta_k in (0.1, 0.5):
            for beam in helicity_pair(mbar, theta_k):
                ratio = beam.omega ** 2 * np.asarray(rate(beam, tr, b)) / np.asarray(flux(beam, b))
                worst_spread = max(worst_spread, float(np.std(ratio) / np.mean(ratio)))
                worst_level = max(worst_level, float(np.max(np.abs(ratio * math.cos(theta_k) - 1.0))))
    _expect(worst_spread < 1e-10, f"relative spread {worst_spread:.3g}")
    _expect(worst_level <= 1e-12, f"deviation from 1/cos(theta_k) {worst_level:.3g}")
    return f"spread {worst_spread:.2g}, level {worst_level:.2g}"


def check_rate_mirror_symmetry() -> str:
    b = _b_grid(200)
    worst = 0.0
    for l_f in (1, 2, 3):
        tr = TransitionSpec(l_f=l_f)
        for mbar in range(-3, 4):
            for beam in helicity_pair(mbar, 0.2):
                a = np.asarray(rate(beam, tr, b))
                c = np.asarray(rate(beam.mirrored(), tr, b))
                scale = np.maximum(np.abs(a), 1e-300)
                worst = max(worst, float(np.max(np.where(a == 0, np.abs(c), np.abs(a - c) / scale))))
    _expect(worst <= 1e-13, f"mirror residual {worst:.3g}")
    return f"max relative residual {worst:.2g}"


def check_center_selection_rule() -> str:
    for l_f in (1, 2, 3):
        tr = TransitionSpec(l_f=l_f)
        for mbar in range(-5, 6):
            for beam in helicity_pair(mbar, 0.3):
                open_channel = rate(beam, tr, 0.0) > 0
                _expect(
                    open_channel == (abs(beam.m_gamma) <= l_f),
                    f"Gamma(0) > 0 is {open_channel} for m_gamma={beam.m_gamma}, l_f={l_f}",
                )
    return "Gamma(0) > 0 iff |m_gamma| <= l_f"


def check_rate_bound() -> str:
    b = np.linspace(0.0, 5.0, 501)
    worst = 0.0
    for l_f in (1, 2, 3, 4):
        tr = TransitionSpec(l_f=l_f)
        for mbar in (-2, 0, 2):
            for theta_k in (0.1, 0.6, 1.2):
                for beam in helicity_pair(mbar, theta_k):
                    worst = max(worst, float(np.max(np.asarray(rate(beam, tr, b)))) / (beam.kappa / (2.0 * math.pi)))
    _expect(worst <= 1.0 + 1e-12, f"Gamma / (kappa / 2 pi) up to {worst!r}")
    return f"max Gamma / (kappa / 2 pi) = {worst:.6f}"


# observables

def check_exact_zeros() -> str:
    b = _b_grid()
    worst = 0.0
    for theta_k in (0.05, 0.1, 0.5, 1.0):
        for mbar in range(-4, 5):
            worst = max(worst, float(np.nanmax(np.abs(circular_dichroism(mbar, TransitionSpec(l_f=1), theta_k, b)))))
        for l_f in (1, 2, 3):
            worst = max(worst, float(np.nanmax(np.abs(circular_dichroism(0, TransitionSpec(l_f=l_f), theta_k, b)))))
    _expect(worst < 1e-12, f"|CD| up to {worst:.3g}")
    return f"max |CD| {worst:.2g}"


def check_asymmetry_bounds() -> str:
    b = _b_grid()
    for kind in ("cd", "a_lambda"):
        for mbar in (-2, 1, 3):
            for l_f in (2, 3):
                # RadialProfile validation rejects |value| > 1
                scan_profile(kind, mbar, TransitionSpec(l_f=l_f), 0.3, b, workers=1)
    return "|CD|, |A_Lambda| <= 1"


def check_mirror_antisymmetry() -> str:
    b = _b_grid(200)
    worst = 0.0
    for l_f in (2, 3):
        tr = TransitionSpec(l_f=l_f)
        for mbar in range(1, 5):
            for evaluate in (circular_dichroism, rate_asymmetry):
                a = np.asarray(evaluate(mbar, tr, 0.1, b))
                c = np.asarray(evaluate(-mbar, tr, 0.1, b))
                worst = max(worst, float(np.nanmax(np.abs(a + c))))
    _expect(worst <= 1e-12, f"mirror residual {worst:.3g}")
    return f"max |X(m) + X(-m)| {worst:.2g}"


def check_vortex_center_asymmetry() -> str:
    value = rate_asymmetry(1, TransitionSpec(l_f=2), 0.01, 0.0)
    _expect(abs(value + 0.2) <= 2e-3, f"A_Lambda(b=0) = {value!r}")
    return f"A_Lambda(mbar=1, l_f=2, b=0) = {value:.6f}"


def check_cd_sign_and_range() -> str:
    tr = TransitionSpec(l_f=2)
    center = circular_dichroism(1, tr, 0.1, 0.0)
    _expect(abs(center - 1.0) <= 1e-6, f"CD(b=0) = {center!r}")
    tail = np.asarray(circular_dichroism(1, tr, 0.1, np.linspace(1.5, 2.0, 101)))
    worst = float(np.nanmax(np.abs(tail)))
    _expect(worst < 0.05, f"|CD| on [1.5, 2] up to {worst:.3g}")
    return f"CD(0) = {center:.6f}, max |CD| on tail {worst:.3g}"


def check_pitch_angle_plateau() -> str:
    theta_grid = np.linspace(0.01, 0.25, 25)
    worst = 0.0
    for l_f in (2, 3):
        for mbar in (1, 2, 3):
            profile = scan_pitch_angle("cd", mbar, TransitionSpec(l_f=l_f), 0.25, theta_grid, workers=1)
            worst = max(worst, float(np.max(np.abs(profile.values - profile.paraxial_value))))
    _expect(worst < 0.02, f"plateau deviation {worst:.3g}")
    return f"max deviation {worst:.3g}"


def check_aperture_integrated_asymmetry() -> str:
    tr = TransitionSpec(l_f=2)
    plus, minus = helicity_pair(1, 0.1)
    total_plus = disc_integrated_rate(plus, tr, 100.0, n_points=40001)
    total_minus = disc_integrated_rate(minus, tr, 100.0, n_points=40001)
    value = (total_plus - total_minus) / (total_plus + total_minus)
    _expect(abs(value) < 0.01, f"integrated asymmetry {value:.3g}")
    return f"disc-integrated A_Lambda {value:.2g}"


# paraxial

def check_paraxial_oracle() -> str:
    x = np.linspace(0.0, 10.0, 25)
    worst_plain = 0.0
    worst_extrapolated = 0.0
    for kind in paraxial.FormulaKind:
        for mbar, l_f in paraxial.supported_pairs(kind):
            tr = TransitionSpec(l_f=l_f)
            reference = np.asarray(paraxial.formula(kind, mbar, l_f)(x))
            plain = np.asarray(paraxial_limit(kind.value, mbar, tr, x, theta_k=0.01, richardson=False))
            extrapolated = np.asarray(paraxial_limit(kind.value, mbar, tr, x, theta_k=0.01))
            worst_plain = max(worst_plain, float(np.max(np.abs(plain - reference))))
            worst_extrapolated = max(worst_extrapolated, float(np.max(np.abs(extrapolated - reference))))
    _expect(worst_plain <= 1e-3, f"theta_k=0.01 deviation {worst_plain:.3g}")
    _expect(worst_extrapolated <= 1e-6, f"extrapolated deviation {worst_extrapolated:.3g}")
    return f"max deviation {worst_plain:.2g}, extrapolated {worst_extrapolated:.2g}"


def check_paraxial_dipole_reduction() -> str:
    x = np.linspace(0.0, 10.0, 101)
    value = np.asarray(paraxial.paraxial_a_lambda(1, 1, x))
    expected = -1.0 / (1.0 + x ** 2)
    worst = float(np.max(np.abs(value - expected)))
    _expect(worst <= 1e-14, f"mbar=1 reduction residual {worst:.3g}")
    return f"residual {worst:.2g}"


def check_paraxial_bounds_and_asymptotics() -> str:
    x = np.linspace(0.0, 50.0, 501)
    for kind in paraxial.FormulaKind:
        for mbar, l_f in paraxial.supported_pairs(kind):
            entry = paraxial.formula(kind, mbar, l_f)
            _expect(bool(np.all(np.abs(entry(x)) <= 1.0 + 1e-15)), f"{kind.value} {mbar},{l_f} leaves [-1, 1]")
            _expect(abs(entry(1e3)) < 1e-4, f"{kind.value} {mbar},{l_f} does not vanish at large x")
    return "bounded on [0, 50], vanishing at x = 1e3"


# polarization

def _launch(l_f_medium: int) -> PolarizationState:
    c = 1.0 / math.sqrt(2.0)
    return PolarizationState(mbar=1, theta_k=0.1, c_plus=c, c_minus=c, l_f_medium=l_f_medium)


def _ratios(profile) -> np.ndarray:
    return np.array([v.normalized() for _, v in profile if v.s0 > 0])


def check_dipole_medium_invariance() -> str:
    state = _launch(1)
    b = np.linspace(1e-3, 2.0, 200)
    reference = _ratios(stokes_profile(state, b, 0.0))
    worst = 0.0
    for z in (0.01, 0.1, 0.2):
        worst = max(worst, float(np.max(np.abs(_ratios(stokes_profile(state, b, z)) - reference))))
    _expect(worst < 1e-12, f"z-dependence {worst:.3g}")
    return f"max deviation {worst:.2g}"


def check_helicity_purification() -> str:
    state = _launch(2)
    circular = []
    for z in (0.0, 0.01, 0.1, 0.2):
        (_, vector), = stokes_profile(state, [1e-3], z)
        circular.append(abs(vector.s3 / vector.s0))
    _expect(all(b >= a - 1e-12 for a, b in zip(circular, circular[1:])), f"|S3/S0| not monotone: {circular}")
    _expect(circular[-1] > 0.9, f"|S3/S0| at z=0.2 is {circular[-1]:.3g}")
    return "|S3/S0| at b=1e-3: " + ", ".join(f"{v:.3g}" for v in circular)


def check_stokes_coherence() -> str:
    worst = 0.0
    for l_f_medium in (1, 2, 3):
        state = _launch(l_f_medium)
        for z in (0.0, 0.1):
            for _, v in stokes_profile(state, _b_grid(200), z):
                if v.s0 > 0:
                    worst = max(worst, abs(v.s1 ** 2 + v.s2 ** 2 + v.s3 ** 2 - v.s0 ** 2) / v.s0 ** 2)
    _expect(worst <= 1e-12, f"coherence residual {worst:.3g}")
    return f"max residual {worst:.2g}"


def _axis_circularity(theta_k: float) -> float:
    """S3/S0 on the axis for mbar = 1 and equal helicity weights at launch.

    Both modes reach the axis through J_1: the Lambda=+1 mode (m_gamma = mbar + 1 = 2)
    puts cos^2(theta_k/2) J_1 into eta_{+1}, the Lambda=-1 mode (m_gamma = 0) puts
    cos^2(theta_k/2) J_1 into eta_{-1} and sin^2(theta_k/2) J_{-1} into eta_{+1}.
    J_{-1} = -J_1, so eta_{+1} is reduced to cos(theta_k) J_1 and S3/S0 < 0.
    """
    plus = math.cos(theta_k) ** 2
    minus = math.cos(theta_k / 2.0) ** 4
    return (plus - minus) / (plus + minus)


def check_zero_helicity_center_sign() -> str:
    state = _launch(2)
    expected = _axis_circularity(state.theta_k)
    ratios = [v.s3 / v.s0 for _, v in stokes_profile(state, [1e-3, 1e-4, 1e-5], 0.0)]
    _expect(all(r < 0 for r in ratios), f"S3/S0 signs differ near the center: {ratios}")
    worst = max(abs(r / expected - 1.0) for r in ratios)
    _expect(worst <= 1e-6, f"S3/S0 near the center {ratios}, expected {expected!r}")
    return f"S3/S0 -> {expected:.6g} at b = 1e-3, 1e-4, 1e-5"


def discover_checks(module_name: str = __name__, prefix: str = CHECK_PREFIX) -> Dict[str, Callable[[], str]]:
    module = importlib.import_module(module_name)
    return {
        name[len(prefix):]: func
        for name, func in inspect.getmembers(module, inspect.isfunction)
        if name.startswith(prefix) and func.__module__ == module.__name__
    }


def run_checks(only: Optional[List[str]] = None) -> VerificationReport:
    checks = discover_checks()
    if only:
        unknown = sorted(set(only) - set(checks))
        if unknown:
            raise ConfigurationValidationError(f"unknown checks: {', '.join(unknown)}; available: {', '.join(checks)}")
        checks = {name: checks[name] for name in only}
    results = []
    for name, check in checks.items():
        started = time.monotonic()
        try:
            detail = check()
            passed = True
        except VerificationFailed as e:
            detail = str(e)
            passed = False
        except Exception as e:
            logger.exception(f"Check '{name}' raised")
            detail = f"{type(e).__name__}: {e}"
            passed = False
        logger.debug(f"Check '{name}': {'pass' if passed else 'FAIL'} ({detail})")
        results.append(
            CheckResult(name=name, passed=passed, detail=detail, elapsed_seconds=round(time.monotonic() - started, 3))
        )
    return VerificationReport(results=results)
