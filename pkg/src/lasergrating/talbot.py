"""Talbot coefficients of the laser grating.

Three evaluation routes are provided and cross-checked in the tests:
the conditional closed form B_j(xi; l), the unconditional closed form
B_j(xi) together with its classical random-walk variant, and a numeric
Fourier reduction of an arbitrary two-point kernel that serves as the
oracle and as the bridge for dynamical models.

Closed forms are evaluated through the branch-free Fourier coefficients of
exp(a e^{it} + b e^{-it}) instead of the textbook (ratio)^{j/2} J_j(sqrt(...))
expression, which is ambiguous where |zeta_coh| = |zeta_abs|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, ResolutionError
from .grating import MeasurementProfile, m_ell, poisson_ell_max
from .params import GratingParameters
from .specfun import exp_bessel_coeff

VARIANTS = ("quantum", "classical")
NYQUIST_MARGIN = 32


def zeta(xi, grating: GratingParameters):
    """(zeta_abs, zeta_coh, zeta_abs') at Talbot argument xi."""
    xi = np.asarray(xi, float)
    za = 0.5 * grating.n0 * np.cos(np.pi * xi)
    zc = grating.phi0 * np.sin(np.pi * xi)
    zap = grating.n0 * np.sin(0.5 * np.pi * xi) ** 2
    return za, zc, zap


def _b0(j: int, xi, grating: GratingParameters):
    # kernel exponent: i zc sin(t) - za cos(t) = a e^{it} + b e^{-it}
    # with a = (zc - za)/2, b = -(zc + za)/2
    za, zc, _ = zeta(xi, grating)
    return math.exp(-0.5 * grating.n0) * exp_bessel_coeff(j, 0.5 * (zc - za), -0.5 * (zc + za))


def b_conditional(j: int, xi, ell: int, grating: GratingParameters):
    """Conditional Talbot coefficient B_j(xi; l).

    l = 0 is the photo-depletion closed form; l >= 1 is the double sum over
    recoil splittings referencing shifted l = 0 coefficients.
    """
    if ell < 0:
        raise InvalidInputError("absorption count must be >= 0")
    j = int(j)
    if ell == 0:
        return _b0(j, xi, grating)
    za, _, _ = zeta(xi, grating)
    base = {m: _b0(m, xi, grating) for m in range(j - ell, j + ell + 1)}
    out = np.zeros(np.shape(za), complex) if np.ndim(za) else 0.0 + 0.0j
    for n in range(ell + 1):
        for r in range(n + 1):
            coef = (grating.n0 / 4.0) ** n \
                / (math.factorial(r) * math.factorial(n - r) * math.factorial(ell - n))
            out = out + coef * za ** (ell - n) * base[j - n + 2 * r]
    return out


def conditional_rows(orders, xi, ell: int, grating: GratingParameters) -> dict:
    """B_j(xi; ell) for every j in `orders` over a xi array, sharing one
    l = 0 base table across the recoil double sum (same values as
    b_conditional, one series evaluation per shifted order)."""
    if ell < 0:
        raise InvalidInputError("absorption count must be >= 0")
    orders = [int(j) for j in orders]
    lo, hi = min(orders) - ell, max(orders) + ell
    base = {m: _b0(m, xi, grating) for m in range(lo, hi + 1)}
    if ell == 0:
        return {j: base[j] for j in orders}
    za, _, _ = zeta(xi, grating)
    weights = [((grating.n0 / 4.0) ** n
                / (math.factorial(r) * math.factorial(n - r) * math.factorial(ell - n)),
                n, r)
               for n in range(ell + 1) for r in range(n + 1)]
    out = {}
    for j in orders:
        acc = 0j * za
        for coef, n, r in weights:
            acc = acc + coef * za ** (ell - n) * base[j - n + 2 * r]
        out[j] = acc
    return out


def b_unconditional(j: int, xi, grating: GratingParameters, variant: str = "quantum"):
    """Unconditional Talbot coefficient B_j(xi).

    The classical random-walk variant flips the sign of zeta_coh, which is
    the same as exchanging j with -j.
    """
    if variant not in VARIANTS:
        raise InvalidInputError(f"unknown variant {variant!r}")
    za, zc, zap = zeta(xi, grating)
    if variant == "classical":
        zc = -zc
    # exponent: i zc sin(t) + zap cos(t) - zap
    return np.exp(-zap) * exp_bessel_coeff(int(j), 0.5 * (zc + zap), 0.5 * (zap - zc))


def _kernel_line(kernel, xi: float, n_points: int):
    """Sample K(u - xi/2, u + xi/2) on the uniform period grid."""
    if hasattr(kernel, "line_values"):
        return kernel.line_values(xi, n_points)
    u = np.arange(n_points) / n_points
    if isinstance(kernel, MeasurementProfile):
        return m_ell(u - 0.5 * xi, kernel) * np.conj(m_ell(u + 0.5 * xi, kernel))
    if hasattr(kernel, "pair_values"):
        return kernel.pair_values(u - 0.5 * xi, u + 0.5 * xi)
    return kernel(u - 0.5 * xi, u + 0.5 * xi)


def b_numeric_oracle(j: int, xi: float, kernel, n_points: int = 512):
    """Numeric Fourier definition of B_j(xi): trapezoid (= uniform mean) of
    e^{-2 pi i j u} K(u - xi/2, u + xi/2) over one period.

    `kernel` may be a MeasurementProfile, an object with pair_values(x, xp),
    or a plain callable K(x, xp).
    """
    j = int(j)
    if n_points < 512:
        raise ResolutionError("kernel must be sampled on >= 512 points per period")
    if n_points // 2 < abs(j) + NYQUIST_MARGIN:
        raise ResolutionError(
            f"grid Nyquist order {n_points // 2} < |j| + {NYQUIST_MARGIN}")
    vals = _kernel_line(kernel, xi, n_points)
    u = np.arange(n_points) / n_points
    return complex(np.mean(vals * np.exp(-2j * np.pi * j * u)))


def b_numeric_row(xi: float, kernel, j_max: int, n_points: int = 512):
    """All coefficients B_j(xi), |j| <= j_max, from one kernel line via FFT."""
    if n_points < 512:
        raise ResolutionError("kernel must be sampled on >= 512 points per period")
    if n_points // 2 < j_max + NYQUIST_MARGIN:
        raise ResolutionError(
            f"grid Nyquist order {n_points // 2} < j_max + {NYQUIST_MARGIN}")
    vals = _kernel_line(kernel, xi, n_points)
    coeffs = np.fft.fft(vals) / n_points
    return {j: complex(coeffs[j % n_points]) for j in range(-j_max, j_max + 1)}


# ---------------------------------------------------------------------------
# coefficient sources: uniform callable interface B(j, xi) for the
# interferometer signal synthesis
# ---------------------------------------------------------------------------

def closed_form_source(grating: GratingParameters, variant: str = "quantum"):
    """B(j, xi) callable for the unconditional closed form."""
    if variant not in VARIANTS:
        raise InvalidInputError(f"unknown variant {variant!r}")

    def source(j: int, xi: float) -> complex:
        return complex(b_unconditional(j, float(xi), grating, variant))

    source.label = variant
    return source


def conditional_source(grating: GratingParameters, ell: int):
    """B(j, xi; l) callable for a fixed absorption count."""

    def source(j: int, xi: float) -> complex:
        return complex(b_conditional(j, float(xi), ell, grating))

    source.label = f"ell={ell}"
    return source


@dataclass
class TalbotCoefficientSet:
    """Dense coefficient table over (variant/l, j, xi grid)."""

    grating: GratingParameters
    xi: np.ndarray
    orders: np.ndarray
    tables: dict = field(default_factory=dict)  # key: "quantum"|"classical"|ell -> (n_j, n_xi)

    def rows(self):
        for key in self.tables:
            label, ell = (key, "") if isinstance(key, str) else ("conditional", key)
            tab = self.tables[key]
            for ij, j in enumerate(self.orders):
                for ix, x in enumerate(self.xi):
                    yield label, ell, int(j), float(x), tab[ij, ix]

    def write_csv(self, path):
        from .output import format_float
        with open(path, "w", newline="") as fh:
            fh.write("variant,ell,j,xi,re,im\n")
            for label, ell, j, x, v in self.rows():
                fh.write(f"{label},{ell},{j},{format_float(x)},"
                         f"{format_float(v.real)},{format_float(v.imag)}\n")


def build_coefficient_table(grating: GratingParameters,
                            xi_grid=None,
                            j_max: int = 64,
                            ells=(),
                            variants=VARIANTS) -> TalbotCoefficientSet:
    """Tabulate closed-form coefficients on a xi grid.

    Defaults: 512 xi points on [0, 2), |j| <= 64.  Conditional tables are
    added for each absorption count in `ells`; pass ells="auto" to include
    every count up to the Poisson tail rule.
    """
    if xi_grid is None:
        xi_grid = np.linspace(0.0, 2.0, 512, endpoint=False)
    xi_grid = np.asarray(xi_grid, float)
    if ells == "auto":
        ells = range(poisson_ell_max(grating) + 1)
    orders = np.arange(-j_max, j_max + 1)
    out = TalbotCoefficientSet(grating=grating, xi=xi_grid, orders=orders)
    for variant in variants:
        tab = np.empty((orders.size, xi_grid.size), complex)
        for ij, j in enumerate(orders):
            tab[ij] = b_unconditional(int(j), xi_grid, grating, variant)
        out.tables[variant] = tab
    for ell in ells:
        rows = conditional_rows(orders, xi_grid, int(ell), grating)
        tab = np.empty((orders.size, xi_grid.size), complex)
        for ij, j in enumerate(orders):
            tab[ij] = rows[int(j)]
        out.tables[int(ell)] = tab
    return out
