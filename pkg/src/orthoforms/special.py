"""Special-function helpers: a Gauss hypergeometric evaluator for the real
parameter ranges the kernels need, Gauss-Legendre quadrature with node
doubling, and the explicit constant appearing in the boundary limit of the
singular kernel integrals.
"""
from __future__ import annotations

import math

import numpy as np


class SpecialFunctionError(ArithmeticError):
    pass


def _is_nonpositive_int(x: float) -> bool:
    return x <= 0 and abs(x - round(x)) < 1e-12


def _series(a: float, b: float, c: float, z: float, tol: float,
            max_terms: int) -> float:
    total = 1.0
    term = 1.0
    for k in range(max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (1.0 + k)) * z
        total += term
        if abs(term) < tol * max(1.0, abs(total)):
            return total
        if term == 0.0:
            return total
    raise SpecialFunctionError(
        f"hypergeometric series did not converge for z={z}")


def hyp2f1(a: float, b: float, c: float, z: float, tol: float = 1e-15,
           max_terms: int = 200_000) -> float:
    """Gauss hypergeometric function F(a, b; c; z) for real parameters with
    z < 1, or z = 1 when c - a - b > 0 (principal branch).

    Terminating cases are summed exactly; z <= -1/2 is mapped into [0, 1) by
    the Pfaff transformation z -> z/(z-1)."""
    if _is_nonpositive_int(c) and not (
            _is_nonpositive_int(a) and round(a) >= round(c)) and not (
            _is_nonpositive_int(b) and round(b) >= round(c)):
        raise SpecialFunctionError("parameter c is a non-positive integer")
    if _is_nonpositive_int(a) or _is_nonpositive_int(b):
        if _is_nonpositive_int(b) and not _is_nonpositive_int(a):
            a, b = b, a
        n_terms = int(round(-a))
        total = 1.0
        term = 1.0
        for k in range(n_terms):
            term *= (a + k) * (b + k) / ((c + k) * (1.0 + k)) * z
            total += term
        return total
    if z == 1.0:
        if c - a - b <= 0:
            raise SpecialFunctionError("divergent at z = 1")
        return (math.gamma(c) * math.gamma(c - a - b)
                / (math.gamma(c - a) * math.gamma(c - b)))
    if z > 1.0:
        raise SpecialFunctionError("argument above the branch point")
    if z <= -0.5:
        # Pfaff: F(a,b;c;z) = (1-z)^-a F(a, c-b; c; z/(z-1))
        w = z / (z - 1.0)
        return (1.0 - z) ** (-a) * _series(a, c - b, c, w, tol, max_terms)
    return _series(a, b, c, z, tol, max_terms)


# ---------------------------------------------------------------------------
# quadrature


def gauss_legendre(func, lo: float, hi: float, nodes: int) -> float:
    x, w = np.polynomial.legendre.leggauss(nodes)
    mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
    vals = np.array([func(mid + half * xi) for xi in x])
    return float(half * np.sum(w * vals))


def integrate_adaptive(func, lo: float, hi: float, tol: float = 1e-13,
                       start_nodes: int = 16, max_nodes: int = 4096) -> float:
    """Gauss-Legendre with node doubling until two refinements agree."""
    nodes = start_nodes
    prev = gauss_legendre(func, lo, hi, nodes)
    while nodes <= max_nodes:
        nodes *= 2
        cur = gauss_legendre(func, lo, hi, nodes)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise SpecialFunctionError("quadrature did not converge")


# ---------------------------------------------------------------------------
# geometric constants


def sphere_area(m: int) -> float:
    """Surface volume of the unit m-sphere in R^{m+1}."""
    if m < 0:
        raise ValueError("sphere dimension must be >= 0")
    return 2.0 * math.pi ** ((m + 1) / 2.0) / math.gamma((m + 1) / 2.0)


def radial_integral(n: int) -> float:
    """int_0^1 r^{n-2} (r^2 + 1)^{-n/2} dr for n >= 2."""
    if n < 2:
        raise ValueError("need n >= 2")
    return integrate_adaptive(lambda r: r ** (n - 2) * (r * r + 1.0) ** (-n / 2.0),
                              0.0, 1.0)


def limit_constant(n: int, kappa: float) -> complex:
    """The constant relating the shrinking-tube boundary integral of the
    singular kernel to the value of the integrand on the cycle:

    (-i)^n Gamma(kappa - n/2 + 1) Gamma(n/2) / (4^kappa (kappa - n/2)
    Gamma(kappa)) * (n - 1) vol(S^{n-2}) int_0^1 r^{n-2} (r^2+1)^{-n/2} dr.

    Only defined for n >= 2; the n = 1 cycle has codimension-1 boundary
    geometry that this normalization does not cover.
    """
    if n < 2:
        raise ValueError("the limit constant is defined for n >= 2 only")
    if kappa <= n:
        raise ValueError("need kappa > n")
    prefactor = ((-1j) ** n * math.gamma(kappa - n / 2 + 1)
                 * math.gamma(n / 2)
                 / (4.0 ** kappa * (kappa - n / 2) * math.gamma(kappa)))
    return prefactor * (n - 1) * sphere_area(n - 2) * radial_integral(n)
