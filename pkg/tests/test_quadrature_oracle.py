"""Test the adaptive Gauss-Kronrod oracle."""
from __future__ import annotations

import cmath
import math

import pytest

from oscint.exceptions import DomainError
from oscint.general_kernel import ProblemSpec, laurent_series
from oscint.poly_core import Polynomial, parse_polynomial
from oscint.power_kernel import PowerKernelSpec, complete_power, power_integral
from oscint.quadrature_oracle import oracle_integrate


def _spec(p: str, phi: str, u: float) -> ProblemSpec:
    return ProblemSpec(parse_polynomial(p), parse_polynomial(phi), u)


def test_empty_interval():
    """u = 0 needs no panels."""
    result = oracle_integrate(_spec("1", "x^3", 0.0))
    assert result.value == 0
    assert result.subdivisions == 0
    assert result.converged


def test_exact_antiderivative():
    """x^2 exp(ix^3) has the antiderivative exp(ix^3)/(3i)."""
    u = 2.0
    result = oracle_integrate(_spec("x^2", "x^3", u), 1e-14)
    assert abs(result.value - (cmath.exp(1j * u**3) - 1) / 3j) < 1e-12
    # one panel per crossing of a multiple of pi
    assert result.subdivisions >= 3


def test_error_bound_is_honest():
    """The reported error covers the distance to the closed form."""
    exact = power_integral(PowerKernelSpec(0, 3, 1.0), 2.5).value
    result = oracle_integrate(_spec("1", "x^3", 2.5), 1e-12)
    assert result.converged
    assert abs(result.value - exact) <= result.abs_error + 1e-13


def test_large_upper_limit():
    """At u = 10 the oracle meets I(inf) + exp(i*phi) h."""
    u = 10.0
    phi = parse_polynomial("x^3")
    asymptotic = laurent_series(Polynomial((1,)), phi, 20)
    expected = complete_power(PowerKernelSpec(0, 3)) + cmath.exp(1j * u**3) * (
        asymptotic.evaluate(u)
    )
    result = oracle_integrate(ProblemSpec(Polynomial((1,)), phi, u), 1e-12)
    assert abs(result.value - expected) < 1e-8


def test_infinite_limit_rejected():
    """The oracle only handles finite intervals."""
    with pytest.raises(DomainError):
        oracle_integrate(_spec("1", "x^3", math.inf))


def test_budget_exhausted():
    """A panel cap below what the tolerance needs is reported, not hidden."""
    result = oracle_integrate(_spec("x^40", "x", 1.0), 1e-14, max_subdiv=2)
    assert not result.converged
    assert result.subdivisions == 2
    assert result.abs_error > 1e-14
