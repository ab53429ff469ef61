"""Closed-form spin asymmetries in the paraxial limit theta_k -> 0, with x = k b.

The quadrupole and octupole tables are stored as integer coefficients in
ascending powers of x and are the single source of truth for the printed
expressions. The electric-dipole rate asymmetry is generated for any
topological charge mbar >= 1.
"""
import logging
from enum import Enum
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pydantic
from numpy.typing import ArrayLike

from app.services.errors import UnsupportedParaxialEntry

logger = logging.getLogger(__name__)


class FormulaKind(str, Enum):
    CD = "cd"
    A_LAMBDA = "a_lambda"


class ParaxialFormula(pydantic.BaseModel):
    """numerator(x) / denominator(x), integer coefficients in ascending powers of x."""

    kind: FormulaKind
    mbar: int
    l_f: int
    numerator: Tuple[int, ...]
    denominator: Tuple[int, ...]

    class Config:
        frozen = True

    @pydantic.validator("denominator")
    def denominator_positive(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        if not v or v[0] <= 0 or any(c < 0 for c in v):
            raise ValueError("denominator must have non-negative coefficients and a positive constant term")
        return v

    def __call__(self, x: ArrayLike) -> Union[float, np.ndarray]:
        x = np.asarray(x, dtype=float)
        # numpy polyval wants descending powers
        value = np.polyval(self.numerator[::-1], x) / np.polyval(self.denominator[::-1], x)
        return float(value) if np.ndim(value) == 0 else value


# (kind, mbar, l_f) -> (numerator, denominator)
_TABLES: Dict[Tuple[FormulaKind, int, int], Tuple[Tuple[int, ...], Tuple[int, ...]]] = {
    # rate asymmetries, l_f = 2
    (FormulaKind.A_LAMBDA, 1, 2): ((-1,), (5, 0, 1)),
    (FormulaKind.A_LAMBDA, 2, 2): ((-18, 0, -4), (18, 0, 20, 0, 1)),
    (FormulaKind.A_LAMBDA, 3, 2): ((-72, 0, -162, 0, -9), (72, 0, 162, 0, 45, 0, 1)),
    (FormulaKind.A_LAMBDA, 4, 2): ((-1152, 0, -648, 0, -16), (1152, 0, 648, 0, 80, 0, 1)),
    # circular dichroism, l_f = 2
    (FormulaKind.CD, 1, 2): ((4,), (4, 0, 6, 0, 1)),
    (FormulaKind.CD, 2, 2): ((32, 0, 48), (32, 0, 84, 0, 24, 0, 1)),
    (FormulaKind.CD, 3, 2): ((576, 0, 180), (720, 0, 504, 0, 54, 0, 1)),
    (FormulaKind.CD, 4, 2): ((3456, 0, 448), (5760, 0, 1744, 0, 96, 0, 1)),
    # rate asymmetries, l_f = 3
    (FormulaKind.A_LAMBDA, 1, 3): ((-1,), (11, 0, 1)),
    (FormulaKind.A_LAMBDA, 2, 3): ((-42, 0, -4), (102, 0, 44, 0, 1)),
    (FormulaKind.A_LAMBDA, 3, 3): ((-720, 0, -378, 0, -9), (720, 0, 918, 0, 99, 0, 1)),
    (FormulaKind.A_LAMBDA, 4, 3): (
        (-4320, 0, -11520, 0, -1512, 0, -16),
        (4320, 0, 11520, 0, 3672, 0, 176, 0, 1),
    ),
    # circular dichroism, l_f = 3
    (FormulaKind.CD, 1, 3): ((10,), (10, 0, 12, 0, 1)),
    (FormulaKind.CD, 2, 3): ((120, 0, 320, 0, 120), (120, 0, 320, 0, 264, 0, 48, 0, 1)),
    (FormulaKind.CD, 3, 3): ((9720, 0, 5760, 0, 450), (9720, 0, 7200, 0, 1746, 0, 108, 0, 1)),
    (FormulaKind.CD, 4, 3): ((151200, 0, 34560, 0, 1120), (159840, 0, 57600, 0, 6304, 0, 192, 0, 1)),
}

TABLE_MBARS = (1, 2, 3, 4)
TABLE_MULTIPOLARITIES = (2, 3)


def _dipole_rate_asymmetry(mbar: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    # -1 / (1 + (2 x^4 / mbar^2) / ((mbar - 1)^2 + 2 x^2)), cleared of fractions
    m2 = mbar * mbar
    numerator = [-m2 * (mbar - 1) ** 2, 0, -2 * m2]
    denominator = [m2 * (mbar - 1) ** 2, 0, 2 * m2, 0, 2]
    # mbar = 1 leaves a common factor x^2
    while numerator[0] == 0 and denominator[0] == 0:
        numerator = numerator[2:]
        denominator = denominator[2:]
    return tuple(numerator), tuple(denominator)


def supported_pairs(kind: Union[FormulaKind, str]) -> List[Tuple[int, int]]:
    """(mbar, l_f) pairs with a closed form; l_f = 1 is listed for the table range of mbar."""
    kind = FormulaKind(kind)
    pairs = [(mbar, 1) for mbar in TABLE_MBARS]
    pairs += sorted((mbar, l_f) for (k, mbar, l_f) in _TABLES if k == kind)
    return pairs


def _unsupported(kind: FormulaKind, mbar: int, l_f: int) -> UnsupportedParaxialEntry:
    listed = ", ".join(f"(mbar={m}, l_f={l})" for m, l in supported_pairs(kind))
    extra = " and l_f=1 for any mbar >= 1" if kind == FormulaKind.A_LAMBDA else " and l_f=1 for any mbar"
    return UnsupportedParaxialEntry(
        f"no paraxial {kind.value} formula for mbar={mbar}, l_f={l_f}; supported: {listed}{extra}"
    )


def formula(kind: Union[FormulaKind, str], mbar: int, l_f: int) -> ParaxialFormula:
    kind = FormulaKind(kind)
    if l_f == 1:
        if kind == FormulaKind.CD:
            # dipole rates track the local flux, so CD vanishes identically
            return ParaxialFormula(kind=kind, mbar=mbar, l_f=1, numerator=(0,), denominator=(1,))
        if mbar < 1:
            raise _unsupported(kind, mbar, l_f)
        numerator, denominator = _dipole_rate_asymmetry(mbar)
        return ParaxialFormula(kind=kind, mbar=mbar, l_f=1, numerator=numerator, denominator=denominator)
    try:
        numerator, denominator = _TABLES[(kind, mbar, l_f)]
    except KeyError:
        raise _unsupported(kind, mbar, l_f)
    return ParaxialFormula(kind=kind, mbar=mbar, l_f=l_f, numerator=numerator, denominator=denominator)


def paraxial_a_lambda(mbar: int, l_f: int, x: ArrayLike) -> Union[float, np.ndarray]:
    return formula(FormulaKind.A_LAMBDA, mbar, l_f)(x)


def paraxial_cd(mbar: int, l_f: int, x: ArrayLike) -> Union[float, np.ndarray]:
    return formula(FormulaKind.CD, mbar, l_f)(x)


def flux_expansion(mbar: int, lambda_hel: int, x: ArrayLike, theta_k: float) -> Union[float, np.ndarray]:
    """Leading small-angle flux of the mbar = 1 modes, up to the common prefactor.

    Lambda = +1 (m_gamma = 2): x^2 theta^2 / 4.
    Lambda = -1 (m_gamma = 0): x^2 theta^2 / 4 + theta^2 / 2, the constant
    term coming from the longitudinal J_{m_gamma} component.
    """
    if mbar != 1:
        raise UnsupportedParaxialEntry(f"the flux expansion is available for mbar=1 only, got mbar={mbar}")
    if lambda_hel not in (1, -1):
        raise UnsupportedParaxialEntry(f"lambda_hel must be +1 or -1, got {lambda_hel}")
    x = np.asarray(x, dtype=float)
    value = x ** 2 * theta_k ** 2 / 4.0
    if lambda_hel == -1:
        value = value + theta_k ** 2 / 2.0
    return float(value) if np.ndim(value) == 0 else value


def export_tables() -> dict:
    """All closed forms as a JSON-ready dict, dipole entries included for mbar 1..4.

    ``ParaxialTables.parse_obj`` reads it back.
    """
    entries = []
    for kind in FormulaKind:
        for mbar, l_f in supported_pairs(kind):
            entry = formula(kind, mbar, l_f)
            entries.append(
                {
                    "kind": kind.value,
                    "mbar": mbar,
                    "l_f": l_f,
                    "numerator": list(entry.numerator),
                    "denominator": list(entry.denominator),
                }
            )
    return {"variable": "x = k b", "coefficient_order": "ascending powers of x", "formulas": entries}


class ParaxialPoint(pydantic.BaseModel):
    x: float
    value: float


class ParaxialProfile(pydantic.BaseModel):
    kind: FormulaKind
    mbar: int
    l_f: int
    # None for the closed form, the pitch angle for a numeric limit
    theta_k: Optional[float] = None
    points: List[ParaxialPoint]


class ParaxialTables(pydantic.BaseModel):
    variable: str
    coefficient_order: str
    formulas: List[ParaxialFormula]


def closed_form_profile(kind: Union[FormulaKind, str], mbar: int, l_f: int, x: ArrayLike) -> ParaxialProfile:
    entry = formula(kind, mbar, l_f)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    values = np.atleast_1d(entry(x))
    return ParaxialProfile(
        kind=entry.kind,
        mbar=mbar,
        l_f=l_f,
        points=[ParaxialPoint(x=float(a), value=float(v)) for a, v in zip(x, values)],
    )
