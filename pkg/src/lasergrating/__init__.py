"""Matter-wave diffraction of absorptive molecules and nanoparticles at
standing-wave laser gratings: measurement-operator grating transforms,
Talbot coefficients, near-field (KDTLI) and far-field interferograms, and
dynamical master-equation models."""

__version__ = "0.1.0"

from .params import (  # noqa: F401
    BeamSetup,
    GratingParameters,
    InterferometerScales,
    derive_grating,
    derive_n0,
    derive_phi0,
    derive_scales,
)
from .grating import MeasurementProfile, absorption_probability, m_ell  # noqa: F401
from .talbot import b_conditional, b_numeric_oracle, b_unconditional  # noqa: F401
from .nearfield import FringeSignal, KdtliConfig, kdtli_signal, sinusoidal_visibility  # noqa: F401
from .farfield import FarFieldConfig, ScreenDensity, farfield_density  # noqa: F401
from .dynamics import LadderConfig, TwoPointKernel, ladder_analytic, ladder_ode_solve  # noqa: F401
from .rabi import RabiConfig, RabiKernel, rabi_solve  # noqa: F401
