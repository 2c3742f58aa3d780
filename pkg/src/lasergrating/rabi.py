"""Three-level Rabi model of the grating: ground |0>, excited |1> with
lifetime tau decaying into a dark state |2>, driven at the position-dependent
Rabi frequency Omega(x) = Omega_0 cos(pi x).

All times are expressed in units of the interaction time t_L (constant
envelope).  The two-point master equation evolves rho(x, x') with the
Hamiltonian acting at x from the left and at x' from the right and the
position-independent jump |2><1|/sqrt(tau); the nine matrix elements per
pair form a linear system integrated adaptively, with an exact
matrix-exponential route as a second oracle.  Because the jump never feeds
the driven {|0>,|1>} sector, the ground-state element also has the closed
form K_00(x,x') = c0(x) conj(c0(x')) with c0 the damped two-level amplitude;
ground_amplitude exposes it as an independent analytic check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import InvalidInputError, RegimeError, SimulationError
from .params import GratingParameters
from .dynamics import TwoPointKernel, kernel_source
from . import nearfield

SHORT_LIFETIME_MAX = 1.0 / 50.0


@dataclass
class RabiConfig:
    """Drive parameters in interaction-time units.

    pulse_area: Omega_0 t_L at the antinode
    detuning: Delta t_L
    lifetime: tau / t_L
    """

    pulse_area: float
    detuning: float = 0.0
    lifetime: float = 1.0
    n_points: int = 256
    rtol: float = 1e-9
    atol: float = 1e-12

    def __post_init__(self):
        if self.lifetime <= 0:
            raise InvalidInputError("excited-state lifetime must be positive")
        if self.pulse_area < 0:
            raise InvalidInputError("pulse area must be >= 0")

    @classmethod
    def from_physical(cls, rabi_frequency: float, detuning: float, lifetime: float,
                      interaction_time: float, **kw) -> "RabiConfig":
        """Build from dimensional inputs (rad/s, rad/s, s, s)."""
        if interaction_time <= 0:
            raise InvalidInputError("interaction time must be positive")
        return cls(pulse_area=rabi_frequency * interaction_time,
                   detuning=detuning * interaction_time,
                   lifetime=lifetime / interaction_time, **kw)


def ground_amplitude(omega_tl, det_tl: float, tau_over_tl: float, t: float = 1.0):
    """Ground-state amplitude of the damped two-level sector after a constant
    pulse of duration t (units of t_L): first component of
    exp(-i H_eff t) |0> with H_eff = [[0, W/2], [W/2, -D - i/(2 tau)]]."""
    w = np.asarray(omega_tl, complex)
    d = -det_tl - 0.5j / tau_over_tl
    disc = np.sqrt(d * d + w * w)
    l1 = 0.5 * (d + disc)
    l2 = 0.5 * (d - disc)
    degen = np.abs(l1 - l2) < 1e-14
    safe = np.where(degen, 1.0, l1 - l2)
    out = ((l1 - d) * np.exp(-1j * l1 * t) - (l2 - d) * np.exp(-1j * l2 * t)) / safe
    out = np.where(degen, np.exp(-1j * l1 * t), out)
    return out if out.ndim else complex(out)


def _generators(x, xp, config: RabiConfig):
    om = config.pulse_area * np.cos(np.pi * x)
    omp = config.pulse_area * np.cos(np.pi * xp)
    det = config.detuning
    n = x.size
    hl = np.zeros((n, 3, 3), complex)
    hr = np.zeros((n, 3, 3), complex)
    hl[:, 1, 0] = 0.5 * om
    hl[:, 0, 1] = 0.5 * om
    hl[:, 1, 1] = -det
    hr[:, 1, 0] = 0.5 * omp
    hr[:, 0, 1] = 0.5 * omp
    hr[:, 1, 1] = -det
    jump = np.zeros((3, 3))
    jump[2, 1] = 1.0
    return hl, hr, jump, 1.0 / config.lifetime


def solve_pairs(x, xp, config: RabiConfig, method: str = "ode",
                t_eval=None) -> np.ndarray:
    """Density matrices rho(x, x'; t = t_L) for each position pair, initial
    state |0><0|.  Returns shape (n_pairs, 3, 3), or (n_times, n_pairs, 3, 3)
    when t_eval is given (ODE route only)."""
    x = np.atleast_1d(np.asarray(x, float))
    xp = np.atleast_1d(np.asarray(xp, float))
    hl, hr, jump, gamma = _generators(x, xp, config)
    n = x.size
    rho0 = np.zeros((n, 3, 3), complex)
    rho0[:, 0, 0] = 1.0
    if method == "expm":
        if t_eval is not None:
            raise InvalidInputError("t_eval is supported on the ODE route only")
        from scipy.linalg import expm
        eye = np.eye(3)
        ldl = jump.T @ jump
        out = np.empty_like(rho0)
        for k in range(n):
            gen = -1j * (np.kron(hl[k], eye) - np.kron(eye, hr[k].T)) \
                + gamma * np.kron(jump, jump) \
                - 0.5 * gamma * (np.kron(ldl, eye) + np.kron(eye, ldl.T))
            out[k] = (expm(gen) @ rho0[k].reshape(9)).reshape(3, 3)
        return out
    if method != "ode":
        raise InvalidInputError(f"unknown solver method {method!r}")

    ldl = jump.T @ jump

    def rhs(t, y):
        r = y.reshape(n, 3, 3)
        dr = -1j * (hl @ r - r @ hr)
        dr += gamma * (jump @ r @ jump.T)
        dr -= 0.5 * gamma * (ldl @ r + r @ ldl)
        return dr.ravel()

    sol = solve_ivp(rhs, (0.0, 1.0), rho0.ravel(), method="DOP853",
                    rtol=config.rtol, atol=config.atol, t_eval=t_eval)
    if not sol.success:
        raise SimulationError(f"rabi integration failed: {sol.message}")
    if t_eval is None:
        return sol.y[:, -1].reshape(n, 3, 3)
    return sol.y.T.reshape(len(sol.t), n, 3, 3)


@dataclass
class RabiKernel:
    """Ground-state two-point kernel with diagnostic diagonal populations."""

    config: RabiConfig
    kernel: TwoPointKernel
    positions: np.ndarray = field(default=None)
    populations: np.ndarray = field(default=None)  # shape (3, n_points)

    def pair_values(self, x, xp):
        return self.kernel.pair_values(x, xp)

    def line_values(self, xi, n_points):
        return self.kernel.line_values(xi, n_points)

    def transmission_profile(self):
        """p_0(x) = K_00(x, x) over one period."""
        return self.positions, self.populations[0]


def rabi_solve(config: RabiConfig, method: str = "ode") -> RabiKernel:
    """Solve the three-level two-point master equation.

    The returned kernel evaluates K_00 lazily per pair batch; diagonal
    populations are precomputed on the period grid.
    """

    def evaluator(x, xp):
        rho = solve_pairs(x, xp, config, method)
        return rho[:, 0, 0][None, :]

    kern = TwoPointKernel(model=f"rabi-{method}", channels=("00",),
                          evaluator=evaluator,
                          meta={"config": config, "grating": GratingParameters(0.0, 0.0)})
    xs = np.arange(config.n_points) / config.n_points
    rho_diag = solve_pairs(xs, xs, config, method)
    pops = np.stack([rho_diag[:, i, i].real for i in range(3)])
    return RabiKernel(config=config, kernel=kern, positions=xs, populations=pops)


def short_lifetime_parameters(config: RabiConfig) -> tuple[float, float]:
    """Effective (phi0, n0) of the incoherent single-absorber limit:
    phi0 = -t_L Delta tau^2 Omega_0^2 / (1 + 4 Delta^2 tau^2),
    n0 = t_L tau Omega_0^2 / (1 + 4 Delta^2 tau^2)."""
    area, det, tau = config.pulse_area, config.detuning, config.lifetime
    denom = 1.0 + 4.0 * det * det * tau * tau
    return -det * tau * tau * area * area / denom, tau * area * area / denom


def rabi_short_lifetime_limit(config: RabiConfig) -> RabiKernel:
    """Closed-form kernel of the short-lifetime reduction (tau << t_L):
    K_00(x,x') = e^{-n0 (c^2 + c'^2)/2} e^{i phi0 (c^2 - c'^2)} with the
    mapped parameters of short_lifetime_parameters."""
    if config.lifetime > SHORT_LIFETIME_MAX:
        raise RegimeError(
            f"short-lifetime limit requires tau <= t_L/50, got tau = {config.lifetime} t_L")
    phi0, n0 = short_lifetime_parameters(config)

    def evaluator(x, xp):
        c2 = np.cos(np.pi * x) ** 2
        cp2 = np.cos(np.pi * xp) ** 2
        vals = np.exp(-0.5 * n0 * (c2 + cp2)) * np.exp(1j * phi0 * (c2 - cp2))
        return vals[None, :]

    kern = TwoPointKernel(model="rabi-short-lifetime", channels=("00",),
                          evaluator=evaluator,
                          meta={"config": config, "phi0": phi0, "n0": n0,
                                "grating": GratingParameters(phi0, n0)})
    xs = np.arange(config.n_points) / config.n_points
    p0 = np.exp(-n0 * np.cos(np.pi * xs) ** 2)
    pops = np.stack([p0, np.zeros_like(p0), 1.0 - p0])
    return RabiKernel(config=config, kernel=kern, positions=xs, populations=pops)


def rabi_transmission_profile(config: RabiConfig, method: str = "ode"):
    """Sampled ground-state transmission probability p_0(x) over one period."""
    return rabi_solve(config, method).transmission_profile()


def rabi_kdtli(config: RabiConfig, open_fraction: float, talbot_parameter: float,
               j_max: int = 24, n_shift: int = 512,
               coeff_rtol: float = 1e-11, coeff_atol: float = 1e-13) -> nearfield.FringeSignal:
    """KDTLI fringe signal for ground-state-only detection: pipes K_00
    through the numeric Talbot bridge into the fringe synthesis.

    Coefficient production uses a tighter integrator tolerance than the
    module default so the synthesized signal meets the 1e-10 reality bound.
    """
    tight = RabiConfig(pulse_area=config.pulse_area, detuning=config.detuning,
                       lifetime=config.lifetime, n_points=config.n_points,
                       rtol=coeff_rtol, atol=coeff_atol)
    kern = rabi_solve(tight).kernel
    source = kernel_source(kern, channel="sum", n_points=max(512, config.n_points))
    source.label = f"rabi,area={config.pulse_area / math.pi:g}pi"
    cfg = nearfield.KdtliConfig(
        grating=None,
        open_fraction=open_fraction,
        talbot_parameter=talbot_parameter,
        source=source,
        n_shift=n_shift,
        j_max=j_max,
    )
    return nearfield.kdtli_signal(cfg)
