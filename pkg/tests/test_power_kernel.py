"""Test the pure-power kernel routes."""
from __future__ import annotations

import cmath
import math
from fractions import Fraction

import mpmath
import pytest
from scipy import special

from oscint.const import NEUMANN_PREFACTORS, NEUMANN_TABLES, SINE_INTEGRALS
from oscint.exceptions import ConvergenceError, DomainError
from oscint.power_kernel import (
    PowerKernelSpec,
    bessel_j,
    complete_power,
    gamma_cf,
    gamma_fn,
    gamma_route,
    kummer_V,
    kummer_V_parts,
    linear_phase_closed_form,
    lower_gamma,
    neumann_coeffs,
    neumann_eval,
    neumann_limit,
    neumann_prefactor,
    neumann_prefactor_mp,
    power_integral,
    reduce_power_m,
    taylor_partial,
)


@pytest.mark.parametrize("n", sorted(SINE_INTEGRALS))
def test_sine_integrals(n):
    """Im of the complete kernel is int_0^inf sin(x^n) dx."""
    value = complete_power(PowerKernelSpec(0, n, 1.0)).imag
    assert value == pytest.approx(float(SINE_INTEGRALS[n]), rel=1e-15)


def test_complete_quadratic():
    """int_0^inf exp(ix^2) dx = sqrt(pi)/2 exp(i pi/4)."""
    value = complete_power(PowerKernelSpec(0, 2, 1.0))
    expected = math.sqrt(math.pi) / 2 * cmath.exp(1j * math.pi / 4)
    assert abs(value - expected) < 1e-15


@pytest.mark.parametrize("u", [0.3, 1.3, 2.5, 4.0, 7.5])
def test_fresnel_integrals(u):
    """c = pi/2 gives C(u) + i S(u)."""
    s, c = special.fresnel(u)
    value = power_integral(PowerKernelSpec(0, 2, math.pi / 2), u).value
    assert abs(value - complex(c, s)) < 1e-12


def test_upper_incomplete_gamma():
    """Gamma(1/2, 4) = sqrt(pi) erfc(2)."""
    value = gamma_cf(0.5, 4.0)
    expected = math.sqrt(math.pi) * math.erfc(2.0)
    assert value.real == pytest.approx(expected, rel=1e-13)
    assert abs(value.imag) < 1e-18
    assert lower_gamma(0.5, 4.0).real == pytest.approx(
        math.sqrt(math.pi) * math.erf(2.0), rel=1e-13
    )


def test_gamma_cf_errors():
    """z = 0 and an exhausted budget."""
    with pytest.raises(DomainError):
        gamma_cf(0.5, 0)
    with pytest.raises(ConvergenceError):
        gamma_cf(0.5, 0.01j, max_iter=2)


def test_gamma_poles():
    """Poles of Gamma are domain errors."""
    assert gamma_fn(5.0) == pytest.approx(24.0)
    with pytest.raises(DomainError):
        gamma_fn(-2.0)
    with pytest.raises(DomainError):
        gamma_fn(0.0)


def test_taylor_partial():
    """Small-u Taylor sum against the first terms by hand."""
    spec = PowerKernelSpec(1, 2, 1.0)
    result = taylor_partial(spec, 0.5, 30)
    # int_0^u x e^{ix^2} dx = (e^{iu^2} - 1) / (2i)
    expected = (cmath.exp(0.25j) - 1) / 2j
    assert abs(result.value - expected) < 1e-15
    assert result.route == "taylor"
    assert taylor_partial(spec, 0.0, 5).value == 0

    with pytest.raises(DomainError):
        taylor_partial(spec, 1.0, 0)
    with pytest.raises(DomainError):
        taylor_partial(spec, -1.0, 5)


@pytest.mark.parametrize(("m", "n", "u"), [(0, 3, 1.2), (1, 3, 1.5), (2, 4, 1.1)])
def test_kummer_matches_taylor(m, n, u):
    """V(u) exp(icu^n) is the kernel integral."""
    spec = PowerKernelSpec(m, n, 1.0)
    via_kummer = kummer_V(spec, u).value * cmath.exp(1j * u**n)
    via_taylor = taylor_partial(spec, u, 80).value
    assert abs(via_kummer - via_taylor) < 1e-13


def test_kummer_parts():
    """The 1F2 forms give Re V and Im V separately."""
    spec = PowerKernelSpec(0, 3, 1.0)
    value = kummer_V(spec, 1.2).value
    real, imag = kummer_V_parts(3, 0, 1.2)
    assert real == pytest.approx(value.real, abs=1e-14)
    assert imag == pytest.approx(value.imag, abs=1e-14)
    assert kummer_V_parts(3, 0, 0.0) == (0.0, 0.0)


@pytest.mark.parametrize(("m", "n", "u"), [(0, 3, 2.2), (1, 3, 2.0), (0, 4, 1.8)])
def test_gamma_route_matches_taylor(m, n, u):
    """Continued fraction and Taylor agree where both apply."""
    spec = PowerKernelSpec(m, n, 1.0)
    assert abs(gamma_route(spec, u).value - taylor_partial(spec, u, 150).value) < 1e-9


def test_power_integral_routes():
    """Dispatch on |c| u^n."""
    spec = PowerKernelSpec(0, 3, 1.0)
    assert power_integral(spec, 1.0).route == "taylor"
    assert power_integral(spec, 3.0).route == "gamma"
    assert power_integral(spec, math.inf).route == "complete"
    with pytest.raises(DomainError):
        power_integral(spec, -1.0)


def test_negative_scale_is_conjugate():
    """c -> -c conjugates the kernel integral."""
    for u in (1.2, 2.5, math.inf):
        plus = power_integral(PowerKernelSpec(1, 3, 1.0), u).value
        minus = power_integral(PowerKernelSpec(1, 3, -1.0), u).value
        assert abs(minus - plus.conjugate()) < 1e-13


def test_kernel_spec_validation():
    """m, n and c are checked."""
    assert PowerKernelSpec(2, 3).a == 1.0
    with pytest.raises(DomainError):
        PowerKernelSpec(-1, 2)
    with pytest.raises(DomainError):
        PowerKernelSpec(0, 0)
    with pytest.raises(DomainError):
        PowerKernelSpec(0, 2, 0.0)


def test_reduce_power_m():
    """Partial integration lowers m below n."""
    spec = PowerKernelSpec(4, 3, 1.0)
    reduction = reduce_power_m(spec)
    assert reduction.residual == PowerKernelSpec(1, 3, 1.0)
    assert len(reduction.boundary) == 1
    for u in (0.7, 1.1):
        rebuilt = reduction.assemble(power_integral(reduction.residual, u).value, u)
        assert abs(rebuilt - power_integral(spec, u).value) < 1e-13
    assert reduction.boundary_value(0.0) == 0

    untouched = reduce_power_m(PowerKernelSpec(1, 3, 1.0))
    assert untouched.weight == 1
    assert untouched.boundary == ()


def test_linear_phase_closed_form():
    """n = 1 by repeated partial integration."""
    value = linear_phase_closed_form(2, 1.5, 2.0)
    expected = power_integral(PowerKernelSpec(2, 1, 1.5), 2.0).value
    assert abs(value - expected) < 1e-12
    with pytest.raises(DomainError):
        linear_phase_closed_form(1, 0.0, 1.0)


@pytest.mark.parametrize("n", sorted(NEUMANN_TABLES))
def test_neumann_tables(n):
    """Exact coefficients match the reference table."""
    expansion = neumann_coeffs(n, len(NEUMANN_TABLES[n]) - 1)
    expected = tuple(Fraction(a, b) for a, b, _ in NEUMANN_TABLES[n])
    assert expansion.xi == expected
    assert expansion.nu == 1 + Fraction(1, n)


@pytest.mark.parametrize("n", sorted(NEUMANN_PREFACTORS))
def test_neumann_prefactors(n):
    """d_n in floating point and to every printed digit."""
    printed = NEUMANN_PREFACTORS[n]
    assert neumann_prefactor(n) == pytest.approx(float(printed), rel=1e-14)
    digits = len(printed) - 2
    with mpmath.workdps(40):
        deviation = abs(neumann_prefactor_mp(n, 30) - mpmath.mpf(printed))
        assert deviation < mpmath.mpf(10) ** (1 - digits)


def test_neumann_prefactor_two():
    """n = 2 closes with d_2 = sqrt(pi/2)."""
    assert neumann_prefactor(2) == pytest.approx(math.sqrt(math.pi / 2), rel=1e-15)
    assert float(neumann_prefactor_mp(2, 20)) == pytest.approx(
        math.sqrt(math.pi / 2), rel=1e-15
    )


@pytest.mark.parametrize("n", [3, 4, 5])
def test_neumann_limit(n):
    """xi_s d_n approaches the large-s limit."""
    expansion = neumann_coeffs(n, 30)
    tail = float(expansion.xi[-1]) * expansion.d_n
    assert tail == pytest.approx(neumann_limit(n), rel=2e-2)


@pytest.mark.parametrize(("n", "u"), [(2, 1.5), (3, 1.5), (4, 1.2), (5, 1.1)])
def test_neumann_eval(n, u):
    """The Bessel expansion reproduces int_0^u sin(x^n) dx."""
    expansion = neumann_coeffs(n, 25)
    expected = power_integral(PowerKernelSpec(0, n, 1.0), u).value.imag
    assert neumann_eval(expansion, u) == pytest.approx(expected, abs=1e-12)
    assert neumann_eval(expansion, 0.0) == 0.0


def test_neumann_eval_too_few_terms():
    """A short expansion at large u is flagged."""
    with pytest.raises(ConvergenceError):
        neumann_eval(neumann_coeffs(3, 2), 2.5)


def test_neumann_cache():
    """Repeated requests return the cached expansion."""
    assert neumann_coeffs(4, 10) is neumann_coeffs(4, 10)
    with pytest.raises(DomainError):
        neumann_coeffs(6, 3)
    with pytest.raises(DomainError):
        neumann_coeffs(3, -1)


@pytest.mark.parametrize(
    ("order", "z"), [(0.0, 1.0), (0.5, 2.0), (4 / 3, 7.5), (9.25, 5.0)]
)
def test_bessel_j(order, z):
    """Ascending series against scipy."""
    assert bessel_j(order, z) == pytest.approx(float(special.jv(order, z)), abs=1e-12)


def test_bessel_domain():
    """Negative order and large argument are rejected."""
    assert bessel_j(0.0, 0.0) == 1.0
    assert bessel_j(1.5, 0.0) == 0.0
    with pytest.raises(DomainError):
        bessel_j(1.0, 31.0)
    with pytest.raises(DomainError):
        bessel_j(-1.0, 1.0)
