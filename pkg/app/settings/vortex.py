import os

from .base import env

# Worker cap for grid scans
VD_THREADS = max(1, env.int("VD_THREADS", os.cpu_count() or 1))

# Scan defaults, lengths in units of the wavelength
DEFAULT_N_POINTS = env.int("DEFAULT_N_POINTS", 400)
DEFAULT_B_MIN = env.float("DEFAULT_B_MIN", 0.0)
DEFAULT_B_MAX = env.float("DEFAULT_B_MAX", 2.0)
DEFAULT_THETA_K = env.float("DEFAULT_THETA_K", 0.1)
DEFAULT_WAVELENGTH = env.float("DEFAULT_WAVELENGTH", 1.0)
DEFAULT_STOKES_DEPTHS = env.list("DEFAULT_STOKES_DEPTHS", [0.0, 0.01, 0.1, 0.2], subcast=float)

# Pitch angle used for the numeric small-angle limit
PARAXIAL_THETA_K = env.float("PARAXIAL_THETA_K", 0.01)

# Output formatting
FLOAT_SIGNIFICANT_DIGITS = env.int("FLOAT_SIGNIFICANT_DIGITS", 17)
