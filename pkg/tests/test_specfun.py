"""Special-function kernels against arbitrary-precision and quadrature oracles."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from lasergrating.errors import DomainError
from lasergrating.specfun import (SeriesTolerance, bessel_i_complex, bessel_j,
                                  exp_bessel_coeff, hyp1f1_ladder, sinc)

mpmath.mp.dps = 40


def mp_j(n, x):
    return float(mpmath.besselj(n, x))


def mp_i(n, z):
    v = mpmath.besseli(n, mpmath.mpc(z))
    return complex(v)


# ---------------------------------------------------------------------------
# bessel_j
# ---------------------------------------------------------------------------

def test_bessel_j_trivial():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 0.0) == 0.0


def test_bessel_j_derived_value():
    # independent arbitrary-precision series evaluation
    assert bessel_j(2, 3.0) == pytest.approx(mp_j(2, 3.0), rel=1e-12)


@pytest.mark.parametrize("n", [0, 1, 2, 5, 9, 23, 40])
@pytest.mark.parametrize("x", [0.05, 0.9, 4.2, 9.7, 14.0, 27.3, 48.5])
def test_bessel_j_matrix(n, x):
    ref = mp_j(n, x)
    val = bessel_j(n, x)
    if abs(ref) > 1e-280:
        assert val == pytest.approx(ref, rel=1e-10)
    else:
        assert abs(val) <= 1e-280


@pytest.mark.parametrize("n,x", [(3, 7.1), (4, -7.1), (6, 2.0), (7, -2.0)])
def test_bessel_j_parity(n, x):
    assert bessel_j(-n, x) == pytest.approx((-1) ** n * bessel_j(n, x), abs=1e-14)
    assert bessel_j(n, -x) == pytest.approx((-1) ** n * bessel_j(n, x), abs=1e-14)


def test_bessel_j_high_order_underflow():
    # J_1000(30) ~ 1e-1000: underflows to zero rather than raising
    assert bessel_j(1000, 30.0) == 0.0


def test_bessel_j_domain_errors():
    with pytest.raises(DomainError):
        bessel_j(10_001, 1.0)
    with pytest.raises(DomainError):
        bessel_j(0, float("nan"))


@given(st.integers(min_value=0, max_value=30),
       st.floats(min_value=-50.0, max_value=50.0, allow_nan=False))
@settings(max_examples=60, deadline=None)
def test_bessel_j_vs_mpmath_property(n, x):
    ref = mp_j(n, x)
    val = bessel_j(n, x)
    assert abs(val - ref) <= 1e-10 * max(1.0, abs(ref))


# ---------------------------------------------------------------------------
# bessel_i_complex
# ---------------------------------------------------------------------------

def test_bessel_i_trivial():
    assert bessel_i_complex(0, 0.0) == 1.0
    assert bessel_i_complex(3, 0.0) == 0.0


@pytest.mark.parametrize("nu", range(6))
def test_bessel_i_vs_j_identity(nu):
    x = 1.7
    lhs = bessel_i_complex(nu, 1j * x)
    rhs = 1j**nu * bessel_j(nu, x)
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_bessel_i_derived_value():
    ref = mp_i(1, 0.5 + 0.25j)
    assert bessel_i_complex(1, 0.5 + 0.25j) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("nu", [0, 1, 2, 7, 19])
@pytest.mark.parametrize("z", [0.3, 2.0 - 1.0j, -4.0 + 2.5j, 30.0j, 25.0 - 40.0j,
                               -60.0 + 10.0j, 95.0j, 99.0])
def test_bessel_i_matrix(nu, z):
    ref = mp_i(nu, z)
    val = bessel_i_complex(nu, z)
    assert abs(val - ref) <= 1e-10 * max(abs(ref), 1e-250)


def test_bessel_i_symmetries():
    z = 3.0 - 2.0j
    assert bessel_i_complex(-4, z) == pytest.approx(bessel_i_complex(4, z), rel=1e-12)
    assert bessel_i_complex(3, -z) == pytest.approx(-bessel_i_complex(3, z), rel=1e-12)


def test_bessel_i_domain_error():
    with pytest.raises(DomainError):
        bessel_i_complex(0, 120.0 + 0.0j)


# ---------------------------------------------------------------------------
# addition theorems used in the coefficient derivations
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("nu", [0, 1, 2])
def test_neumann_addition(nu):
    u, v = 0.8, 0.5
    total = sum(bessel_i_complex(j - nu, u) * bessel_i_complex(j, v)
                for j in range(-60, 61))
    assert total == pytest.approx(bessel_i_complex(nu, u + v), abs=1e-8)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_graf_special_case(n):
    u, v = 2.0, 0.7  # u > v > 0
    total = sum(bessel_j(j, u) * complex(bessel_i_complex(j + n, v)).real
                for j in range(-60, 61))
    ratio = ((u - v) / (u + v)) ** (n / 2)
    ref = ratio * bessel_j(-n, math.copysign(1.0, u + v) * math.sqrt(u * u - v * v))
    assert total == pytest.approx(ref, abs=1e-8)


# ---------------------------------------------------------------------------
# exp_bessel_coeff
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("j", [-5, -1, 0, 1, 2, 8])
def test_exp_bessel_coeff_equals_quadrature(j):
    a, b = 0.8 - 0.4j, -1.1 + 0.2j

    def f(t):
        return np.exp(a * np.exp(1j * t) + b * np.exp(-1j * t) - 1j * j * t)

    re = quad(lambda t: f(t).real, 0, 2 * np.pi, limit=200)[0] / (2 * np.pi)
    im = quad(lambda t: f(t).imag, 0, 2 * np.pi, limit=200)[0] / (2 * np.pi)
    assert exp_bessel_coeff(j, a, b) == pytest.approx(re + 1j * im, abs=1e-10)


def test_exp_bessel_coeff_reduces_to_bessel_i():
    # a = b = z/2 gives the standard expansion of exp(z cos t)
    z = 1.3 - 0.7j
    for j in range(-3, 4):
        assert exp_bessel_coeff(j, z / 2, z / 2) == pytest.approx(
            bessel_i_complex(j, z), rel=1e-11)


def test_exp_bessel_coeff_array():
    a = np.array([0.1, 0.5 + 0.2j])
    out = exp_bessel_coeff(2, a, -a)
    assert out.shape == (2,)
    assert out[0] == pytest.approx(exp_bessel_coeff(2, a[0], -a[0]))


# ---------------------------------------------------------------------------
# hyp1f1_ladder
# ---------------------------------------------------------------------------

def test_hyp1f1_at_zero():
    assert hyp1f1_ladder(1, 0.0) == pytest.approx(1.0, abs=1e-14)
    assert hyp1f1_ladder(4, 0.0) == pytest.approx(1.0, abs=1e-14)


def test_hyp1f1_ell1_closed_form():
    z = 0.3 - 0.2j
    assert hyp1f1_ladder(1, z) == pytest.approx((np.exp(z) - 1.0) / z, rel=1e-12)


@pytest.mark.parametrize("ell", [1, 2, 3, 6])
@pytest.mark.parametrize("z", [1.5 + 0.5j, -2.0 + 1.0j, -40.0, 12.0 - 9.0j, -30.0 + 25.0j])
def test_hyp1f1_vs_mpmath(ell, z):
    ref = complex(mpmath.hyp1f1(ell, ell + 1, mpmath.mpc(z)))
    assert hyp1f1_ladder(ell, z) == pytest.approx(ref, rel=1e-10)


def test_hyp1f1_integral_representation():
    # l * int_0^1 e^{z a} a^{l-1} da via adaptive quadrature
    ell, z = 3, 1.5 + 0.5j

    def f(a):
        return np.exp(z * a) * a ** (ell - 1)

    re = quad(lambda a: f(a).real, 0, 1, epsabs=1e-13)[0]
    im = quad(lambda a: f(a).imag, 0, 1, epsabs=1e-13)[0]
    ref = ell * (re + 1j * im)
    assert hyp1f1_ladder(ell, z) == pytest.approx(ref, rel=1e-8)


def test_hyp1f1_rejects_bad_input():
    with pytest.raises(DomainError):
        hyp1f1_ladder(0, 1.0)
    with pytest.raises(DomainError):
        hyp1f1_ladder(2, 200.0)


# ---------------------------------------------------------------------------
# sinc & tolerances
# ---------------------------------------------------------------------------

def test_sinc_convention():
    assert float(sinc(0.0)) == 1.0
    assert float(sinc(np.pi)) == pytest.approx(0.0, abs=1e-16)
    u = 0.73
    assert float(sinc(u)) == pytest.approx(math.sin(u) / u, rel=1e-14)


def test_series_tolerance_validation():
    with pytest.raises(DomainError):
        SeriesTolerance(rel_tol=0.0)
    with pytest.raises(DomainError):
        SeriesTolerance(max_terms=0)
