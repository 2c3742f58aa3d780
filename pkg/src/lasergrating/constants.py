"""Physical constants, CODATA 2018 values hard-coded for reproducibility."""

# Exact SI defining constants
PLANCK = 6.62607015e-34          # J s
SPEED_OF_LIGHT = 299792458.0     # m/s

# Derived / measured, 10 significant digits
HBAR = 1.054571817e-34           # J s, h / 2 pi
EPSILON_0 = 8.854187813e-12      # F/m
ATOMIC_MASS = 1.660539067e-27    # kg

FOUR_PI_EPS0 = 4.0 * 3.141592653589793 * EPSILON_0
