from .specfun import bessel_j, wigner_d, wigner_d_matrix
from .beam import (
    BeamSpec,
    CylPoint,
    FieldAmps,
    Kinematics,
    flux,
    helicity_pair,
    kinematics,
    to_cartesian,
    vector_potential,
)
from .absorption import TransitionSpec, amplitude, cross_section, plane_wave_cross_section, rate
from .observables import (
    ObservableKind,
    PitchAngleProfile,
    RadialProfile,
    circular_dichroism,
    rate_asymmetry,
    scan_pitch_angle,
    scan_profile,
)
from .paraxial import FormulaKind, ParaxialFormula, formula, paraxial_a_lambda, paraxial_cd
from .polarization import PolarizationState, StokesVector, attenuation_ratio, evolve, stokes_profile
