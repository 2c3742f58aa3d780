"""Kapitza-Dirac-Talbot-Lau (mask / laser grating / mask) fringe signals.

The detected signal is a Fourier series in the third-grating shift
S(x_s) = sum_j f^2 sinc^2(j pi f) B_2j(j L/L_T) e^{2 pi i j x_s / d},
synthesized from any Talbot-coefficient source: the unconditional closed
form, its classical random-walk variant, a conditional absorption count,
or a dynamical two-point kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CutoffError, InvalidInputError
from .params import GratingParameters
from . import talbot
from .specfun import sinc

REALITY_TOL = 1e-10


@dataclass
class KdtliConfig:
    """Interferometer configuration.

    source: "quantum" | "classical" | ell (int) | a B(j, xi) callable.
    grating may be None when the source is a callable that carries its own
    parameters (dynamical kernels).
    """

    grating: GratingParameters | None
    open_fraction: float
    talbot_parameter: float
    source: object = "quantum"
    n_shift: int = 512
    j_max: int = 32
    tail: float = 1e-10

    def __post_init__(self):
        if not 0.0 < self.open_fraction < 1.0:
            raise InvalidInputError(f"open fraction must be in (0,1), got {self.open_fraction}")
        if self.talbot_parameter <= 0:
            raise InvalidInputError("talbot parameter must be positive")
        if self.n_shift < 256:
            raise InvalidInputError("need >= 256 shift samples per period")
        if self.grating is None and not callable(self.source):
            raise InvalidInputError("closed-form sources need grating parameters")


@dataclass
class FringeSignal:
    """Sampled fringe signal with its Fourier components."""

    shifts: np.ndarray            # x_s grid, units of d
    values: np.ndarray            # real signal
    components: dict              # j -> complex S_j
    mean: float
    talbot_parameter: float
    label: str = "quantum"

    def visibility_minmax(self) -> float:
        """(S_max - S_min)/(S_max + S_min) from the sampled signal."""
        smax, smin = float(np.max(self.values)), float(np.min(self.values))
        return (smax - smin) / (smax + smin)

    def harmonic_amplitudes(self):
        """One-sided amplitude spectrum: a_0 = S_0, a_j = 2 |S_j| (j >= 1)."""
        out = {0: abs(self.components[0])}
        for j, c in self.components.items():
            if j >= 1:
                out[j] = 2.0 * abs(c)
        return out


def resolve_source(config: KdtliConfig):
    """Turn the config's source spec into a B(j, xi) callable."""
    src = config.source
    if callable(src):
        return src
    if src == "quantum" or src == "classical":
        return talbot.closed_form_source(config.grating, src)
    if isinstance(src, int):
        return talbot.conditional_source(config.grating, src)
    raise InvalidInputError(f"cannot resolve coefficient source {src!r}")


def signal_components(config: KdtliConfig, source=None) -> dict:
    """Fourier components S_j of the fringe signal, j in [-j_max, j_max]."""
    if source is None:
        source = resolve_source(config)
    f = config.open_fraction
    lt = config.talbot_parameter
    orders = list(range(-config.j_max, config.j_max + 1))
    if hasattr(source, "prefetch"):
        source.prefetch([(2 * j, j * lt) for j in orders])
    comps = {}
    for j in orders:
        comps[j] = f * f * float(sinc(math.pi * j * f)) ** 2 * source(2 * j, j * lt)
    edge = max(abs(comps[config.j_max]), abs(comps[-config.j_max]))
    scale = max(abs(c) for c in comps.values())
    if scale > 0 and edge > config.tail * scale:
        raise CutoffError(
            f"j_max={config.j_max} too small: edge component {edge:.2e} "
            f"above tail bound {config.tail:.0e} of scale {scale:.2e}")
    return comps


def kdtli_signal(config: KdtliConfig) -> FringeSignal:
    """Fringe signal over one period of the third-grating shift."""
    source = resolve_source(config)
    comps = signal_components(config, source)
    shifts = np.arange(config.n_shift) / config.n_shift
    vals = np.zeros(config.n_shift, complex)
    for j, c in comps.items():
        vals += c * np.exp(2j * np.pi * j * shifts)
    resid = float(np.max(np.abs(vals.imag)))
    scale = max(float(np.max(np.abs(vals.real))), 1e-300)
    if resid > REALITY_TOL * scale:
        raise InvalidInputError(
            f"signal has imaginary residue {resid:.2e}; coefficient source is inconsistent")
    return FringeSignal(
        shifts=shifts,
        values=vals.real,
        components=comps,
        mean=float(comps[0].real),
        talbot_parameter=config.talbot_parameter,
        label=getattr(source, "label", str(config.source)),
    )


def sinusoidal_visibility(config: KdtliConfig) -> float:
    """Signed sine visibility 2 sinc^2(pi f) B_2(L/L_T) / B_0(0).

    For the unconditional closed form B_0(0) = 1; for conditional or
    kernel sources the mean transmission normalizes the contrast.  Negative
    values indicate a phase-flipped fringe.
    """
    source = resolve_source(config)
    f = config.open_fraction
    if hasattr(source, "prefetch"):
        source.prefetch([(2, config.talbot_parameter), (0, 0.0)])
    b2 = source(2, config.talbot_parameter)
    b0 = source(0, 0.0)
    if abs(b0) < 1e-14:
        raise InvalidInputError(
            "visibility undefined: zero mean transmission for this source")
    v = 2.0 * float(sinc(math.pi * f)) ** 2 * (b2 / b0)
    if abs(v.imag) > REALITY_TOL * max(1.0, abs(v.real)):
        raise InvalidInputError(f"visibility has imaginary residue {v.imag:.2e}")
    return float(v.real)


def visibility_minmax(signal: FringeSignal) -> float:
    return signal.visibility_minmax()


def mean_transmission(grating: GratingParameters, ell: int, open_fraction: float) -> float:
    """Mean conditional signal S_bar_l = f^2 B_0(0; l), the transmission
    probability of molecules with absorption count l."""
    b0 = talbot.b_conditional(0, 0.0, ell, grating)
    return open_fraction**2 * float(np.real(b0))


def mean_transmission_closed(grating: GratingParameters, ell: int,
                             open_fraction: float) -> float:
    """Closed-form mean transmission: direct double sum over recoil
    splittings with modified Bessel weights (independent of the Talbot
    coefficient route)."""
    from .specfun import bessel_i_complex
    n0 = grating.n0
    s = 0.0
    for n in range(ell + 1):
        for r in range(n + 1):
            s += complex(bessel_i_complex(2 * r - n, -0.5 * n0)).real \
                / (2.0**n * math.factorial(r) * math.factorial(n - r) * math.factorial(ell - n))
    return open_fraction**2 * math.exp(-0.5 * n0) * (0.5 * n0) ** ell * s


def velocity_average(config: KdtliConfig, dv_over_v: float,
                     n_samples: int = 21, n_sigma: float = 3.0) -> FringeSignal:
    """Fringe signal averaged over a gaussian longitudinal-velocity spread.

    Only the Talbot parameter is rescaled (L/L_T scales as 1/v); the grating
    parameters are held at their mean-velocity values.
    """
    if dv_over_v < 0:
        raise InvalidInputError("velocity spread must be >= 0")
    if dv_over_v == 0 or n_samples == 1:
        return kdtli_signal(config)
    rel = 1.0 + dv_over_v * np.linspace(-n_sigma, n_sigma, n_samples)
    rel = rel[rel > 0.05]
    weights = np.exp(-0.5 * ((rel - 1.0) / dv_over_v) ** 2)
    weights /= weights.sum()
    base = None
    acc_vals = None
    acc_comps: dict = {}
    for w, r in zip(weights, rel):
        cfg = KdtliConfig(
            grating=config.grating,
            open_fraction=config.open_fraction,
            talbot_parameter=config.talbot_parameter / r,
            source=config.source,
            n_shift=config.n_shift,
            j_max=config.j_max,
            tail=config.tail,
        )
        sig = kdtli_signal(cfg)
        if base is None:
            base = sig
            acc_vals = w * sig.values
            acc_comps = {j: w * c for j, c in sig.components.items()}
        else:
            acc_vals = acc_vals + w * sig.values
            for j, c in sig.components.items():
                acc_comps[j] += w * c
    return FringeSignal(
        shifts=base.shifts,
        values=acc_vals,
        components=acc_comps,
        mean=float(acc_comps[0].real),
        talbot_parameter=config.talbot_parameter,
        label=base.label + f",dv/v={dv_over_v:g}",
    )
