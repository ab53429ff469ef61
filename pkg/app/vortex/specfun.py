"""Special functions entering the factorized twisted-photon amplitude.

Integer-order Bessel functions of the first kind and real Wigner small-d
matrix elements. All functions are pure and thread-safe.
"""
import logging
import math
import operator
from fractions import Fraction
from functools import lru_cache
from typing import Union

import numpy as np
from numpy.typing import ArrayLike
from scipy import special

from app.services.errors import SpecialFunctionDomainError

logger = logging.getLogger(__name__)

MAX_BESSEL_ORDER = 64
MAX_WIGNER_L = 16

RealOrArray = Union[float, np.ndarray]


def _as_integer(value, name: str) -> int:
    if isinstance(value, bool):
        raise SpecialFunctionDomainError(f"{name} must be an integer, got {value!r}")
    try:
        return operator.index(value)
    except TypeError:
        raise SpecialFunctionDomainError(f"{name} must be an integer, got {value!r}")


def _check_bessel_order(order) -> int:
    n = _as_integer(order, "Bessel order")
    if abs(n) > MAX_BESSEL_ORDER:
        raise SpecialFunctionDomainError(
            f"Bessel order |n| <= {MAX_BESSEL_ORDER} is supported, got n={n}"
        )
    return n


def _check_bessel_argument(x: ArrayLike) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise SpecialFunctionDomainError("Bessel argument must be finite")
    if np.any(arr < 0):
        raise SpecialFunctionDomainError("Bessel argument must be non-negative")
    return arr


def _unwrap(value: np.ndarray) -> RealOrArray:
    return float(value) if np.ndim(value) == 0 else value


def bessel_j(order: int, x: ArrayLike) -> RealOrArray:
    """J_n(x) for integer n with |n| <= 64 and x >= 0.

    Accepts a scalar or an array of arguments. Negative orders are resolved
    with J_{-n}(x) = (-1)^n J_n(x) so the parity identity holds exactly.
    """
    n = _check_bessel_order(order)
    arr = _check_bessel_argument(x)
    value = special.jv(abs(n), arr)
    if n < 0 and n % 2:
        value = -value
    return _unwrap(value)


def bessel_j_series(order: int, x: float) -> float:
    """Power series of J_n(x), summed until the terms stop contributing.

    Slow and only accurate for moderate x; kept as an independent oracle.
    """
    n = _check_bessel_order(order)
    if not math.isfinite(x) or x < 0:
        raise SpecialFunctionDomainError(f"Bessel argument must be finite and >= 0, got {x!r}")
    sign = -1.0 if (n < 0 and n % 2) else 1.0
    n = abs(n)
    half = x / 2.0
    terms = []
    k = 0
    term = half ** n / math.factorial(n)
    while True:
        terms.append(term)
        k += 1
        term = -term * half * half / (k * (k + n))
        if term == 0.0 or (k > 8 and abs(term) < 1e-18 * abs(math.fsum(terms))):
            break
    return sign * math.fsum(terms)


def _check_wigner_index(l, m, mp) -> tuple:
    l = _as_integer(l, "l")
    m = _as_integer(m, "m")
    mp = _as_integer(mp, "mp")
    if l < 0 or l > MAX_WIGNER_L:
        raise SpecialFunctionDomainError(f"0 <= l <= {MAX_WIGNER_L} is supported, got l={l}")
    if abs(m) > l or abs(mp) > l:
        raise SpecialFunctionDomainError(f"|m|, |mp| must not exceed l: l={l}, m={m}, mp={mp}")
    return l, m, mp


@lru_cache(maxsize=4096)
def _wigner_coefficients(l: int, m: int, mp: int) -> tuple:
    # (coefficient, power of cos(theta/2), power of sin(theta/2)) per summation index
    root = math.factorial(l + m) * math.factorial(l - m) * math.factorial(l + mp) * math.factorial(l - mp)
    terms = []
    for s in range(max(0, mp - m), min(l + mp, l - m) + 1):
        denominator = (
            math.factorial(l + mp - s) * math.factorial(s)
            * math.factorial(m - mp + s) * math.factorial(l - m - s)
        )
        # exact rational square: sqrt(root) / denominator = sqrt(root / denominator**2)
        magnitude = math.sqrt(Fraction(root, denominator * denominator))
        sign = -1.0 if (m - mp + s) % 2 else 1.0
        terms.append((sign * magnitude, 2 * l + mp - m - 2 * s, m - mp + 2 * s))
    return tuple(terms)


def wigner_d(l: int, m: int, mp: int, theta: float) -> float:
    """Wigner small-d element d^l_{m, mp}(theta) for integer l <= 16.

    Standard quantum-mechanics convention (explicit Wigner sum):

        d^l_{m,mp}(t) = sum_s (-1)^(m-mp+s) sqrt((l+m)!(l-m)!(l+mp)!(l-mp)!)
                        / ((l+mp-s)! s! (m-mp+s)! (l-m-s)!)
                        * cos(t/2)^(2l+mp-m-2s) * sin(t/2)^(m-mp+2s)

    Exact at theta = 0.
    """
    l, m, mp = _check_wigner_index(l, m, mp)
    if not math.isfinite(theta) or theta < 0 or theta > math.pi:
        raise SpecialFunctionDomainError(f"theta must lie in [0, pi], got {theta!r}")
    if theta == 0.0:
        return 1.0 if m == mp else 0.0
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    return math.fsum(
        coefficient * c ** cos_power * s ** sin_power
        for coefficient, cos_power, sin_power in _wigner_coefficients(l, m, mp)
    )


def wigner_d_matrix(l: int, theta: float) -> np.ndarray:
    """(2l+1) x (2l+1) matrix of d^l_{m,mp}(theta), rows and columns ordered m = -l..l."""
    l, _, _ = _check_wigner_index(l, 0, 0)
    size = 2 * l + 1
    matrix = np.empty((size, size), dtype=float)
    for i, m in enumerate(range(-l, l + 1)):
        for j, mp in enumerate(range(-l, l + 1)):
            matrix[i, j] = wigner_d(l, m, mp, theta)
    return matrix
