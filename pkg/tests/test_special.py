from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.integrate
import scipy.special

from orthoforms.special import (SpecialFunctionError, gauss_legendre, hyp2f1,
                                integrate_adaptive, limit_constant,
                                radial_integral, sphere_area)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("kappa", [2, 3, 4, 5])
@pytest.mark.parametrize("z", [-3.0, -0.9, -0.3, 0.0, 0.2, 0.5, 0.8, 0.95])
def test_hyp2f1_kernel_parameters_vs_scipy(n, kappa, z):
    if kappa <= n / 2:
        pytest.skip("outside the weight range")
    for a, b in [(1 - n / 2, kappa - n / 2), (1 - n / 2, 1.0)]:
        c = kappa - n / 2 + 1
        ours = hyp2f1(a, b, c, z)
        ref = float(scipy.special.hyp2f1(a, b, c, z))
        assert abs(ours - ref) < 1e-12 * max(1.0, abs(ref))


def test_hyp2f1_terminating_exact():
    # a = 0 -> constant 1;  a = -1 -> 1 - b z / c, both exact
    assert hyp2f1(0.0, 2.5, 3.5, 0.7) == 1.0
    b, c, z = 2.0, 3.0, 0.37
    assert abs(hyp2f1(-1.0, b, c, z) - (1.0 - b * z / c)) < 1e-15


def test_hyp2f1_at_one_gauss_value():
    a, b, c = -0.5, 1.0, 2.5
    ours = hyp2f1(a, b, c, 1.0)
    ref = math.gamma(c) * math.gamma(c - a - b) / (math.gamma(c - a) * math.gamma(c - b))
    assert abs(ours - ref) < 1e-14
    assert abs(ours - float(scipy.special.hyp2f1(a, b, c, 1.0))) < 1e-12


def test_hyp2f1_equal_upper_lower_is_binomial(rng):
    # F(a, b; b; z) = (1 - z)^-a
    for _ in range(20):
        a = rng.uniform(-2.0, 3.0)
        b = rng.uniform(0.3, 4.0)
        z = rng.uniform(0.0, 0.9)
        assert abs(hyp2f1(a, b, b, z) - (1.0 - z) ** (-a)) < 1e-12


def test_hyp2f1_derivative_contiguity(rng):
    # d/dz [z^b F(a, b; b+1; z)] = b z^(b-1) (1 - z)^-a, by central FD
    for _ in range(10):
        a = rng.uniform(-1.5, 1.5)
        b = rng.uniform(0.5, 3.0)
        z = rng.uniform(0.1, 0.8)
        h = 1e-6

        def lhs(t):
            return t ** b * hyp2f1(a, b, b + 1.0, t)

        fd = (lhs(z + h) - lhs(z - h)) / (2.0 * h)
        ref = b * z ** (b - 1.0) * (1.0 - z) ** (-a)
        assert abs(fd - ref) < 1e-8 * max(1.0, abs(ref))


def test_gamma_recursion(rng):
    for _ in range(30):
        x = rng.uniform(0.5, 50.0)
        assert abs(math.gamma(x + 1.0) - x * math.gamma(x)) \
            < 1e-12 * math.gamma(x + 1.0)


def test_hyp2f1_rejects_bad_arguments():
    with pytest.raises(SpecialFunctionError):
        hyp2f1(0.5, 0.5, 1.0, 1.5)
    with pytest.raises(SpecialFunctionError):
        hyp2f1(0.5, 1.0, 1.5, 1.0)  # c - a - b = 0 diverges
    with pytest.raises(SpecialFunctionError):
        hyp2f1(0.5, 0.5, -1.0, 0.3)


def test_gauss_legendre_polynomial_exact():
    # 16 nodes integrate degree-31 polynomials exactly
    val = gauss_legendre(lambda x: x ** 7 - 2 * x ** 3 + 1, 0.0, 1.0, 16)
    assert abs(val - (1.0 / 8 - 2.0 / 4 + 1.0)) < 1e-14


def test_integrate_adaptive_vs_closed_form():
    assert abs(integrate_adaptive(math.exp, 0.0, 1.0) - (math.e - 1.0)) < 1e-13
    assert abs(integrate_adaptive(lambda r: 1.0 / (1.0 + r * r), 0.0, 1.0)
               - math.pi / 4.0) < 1e-13


def test_sphere_area_small_dimensions():
    assert abs(sphere_area(0) - 2.0) < 1e-15
    assert abs(sphere_area(1) - 2.0 * math.pi) < 1e-14
    assert abs(sphere_area(2) - 4.0 * math.pi) < 1e-14
    assert abs(sphere_area(3) - 2.0 * math.pi ** 2) < 1e-13


@pytest.mark.parametrize("n,closed", [
    (2, math.pi / 4.0),                 # arctan(1)
    (3, 1.0 - 1.0 / math.sqrt(2.0)),    # -(r^2+1)^(-1/2) from 0 to 1
    (4, math.pi / 8.0 - 0.25),          # arctan/2 - r/(2(r^2+1))
])
def test_radial_integral_closed_forms(n, closed):
    assert abs(radial_integral(n) - closed) < 1e-13


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_radial_integral_vs_quad_oracle(n):
    ref, err = scipy.integrate.quad(
        lambda r: r ** (n - 2) * (r * r + 1.0) ** (-n / 2.0), 0.0, 1.0)
    assert abs(radial_integral(n) - ref) < 1e-11 + 10 * err


@pytest.mark.parametrize("kappa", [3, 4, 5, 6])
def test_limit_constant_closed_form_n2(kappa):
    ref = -math.pi / (2.0 * 4.0 ** kappa * (kappa - 1.0))
    val = limit_constant(2, kappa)
    assert abs(val - ref) < 1e-14 * abs(ref)
    assert abs(val.imag) < 1e-15


@pytest.mark.parametrize("n,kappa", [(3, 4), (3, 5), (4, 5), (4, 6)])
def test_limit_constant_vs_assembled_oracle(n, kappa):
    radial, err = scipy.integrate.quad(
        lambda r: r ** (n - 2) * (r * r + 1.0) ** (-n / 2.0), 0.0, 1.0)
    pre = ((-1j) ** n * math.gamma(kappa - n / 2 + 1) * math.gamma(n / 2)
           / (4.0 ** kappa * (kappa - n / 2) * math.gamma(kappa)))
    ref = pre * (n - 1) * sphere_area(n - 2) * radial
    val = limit_constant(n, kappa)
    assert abs(val - ref) < 1e-12 * max(1e-8, abs(ref))
    # parity of the phase: real for even n, imaginary for odd n
    if n % 2 == 0:
        assert abs(val.imag) < 1e-15
    else:
        assert abs(val.real) < 1e-15


def test_limit_constant_rejects_out_of_range():
    with pytest.raises(ValueError):
        limit_constant(1, 3)
    with pytest.raises(ValueError):
        limit_constant(4, 4)  # weight must exceed n
