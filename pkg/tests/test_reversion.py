"""Test series reversion and the local-expansion coefficient families."""
from __future__ import annotations

import math
from fractions import Fraction

import pytest

from oscint.const import REVERSION_FAMILIES
from oscint.exceptions import ConvergenceError, DomainError
from oscint.poly_core import Polynomial, Series, make_series, series_compose
from oscint.reversion import (
    LocalKind,
    ReversionMethod,
    family_polynomial,
    local_coefficients,
    local_expansion,
    oracle_recurrence,
    reversion_integrand,
    revert_lagrange,
    revert_multinomial,
    revert_perturbative,
)


def _rising(a: Fraction, n: int) -> Fraction:
    return math.prod((a + i for i in range(n)), start=Fraction(1))


# Multi-term recurrences quoted for two families; neither holds
_QUOTED_RECURRENCES = {
    "x+x^3+x^4": lambda b, j: (
        124 * j * (j - 1) * (j - 2) * b(j)
        + (j - 1) * (j - 2) * (7 * j - 88) * b(j - 1)
        + (j - 2) * (870 * j**2 - 3456 * j + 3347) * b(j - 2)
        + (1243 * j**3 - 9870 * j**2 + 25869 * j - 22490) * b(j - 3)
        + 8 * (4 * j - 15) * (2 * j - 7) * (4 * j - 17) * b(j - 4)
    ),
    "x+x^2+2x^3": lambda b, j: (
        7 * j * (j - 1) * b(j)
        + 16 * (j - 1) * (2 * j - 3) * b(j - 1)
        + 12 * (3 * j - 1) * (3 * j - 7) * b(j - 2)
    ),
}


def _local_phase(n: int, x0: Fraction) -> Polynomial:
    """((x0 + e)^n - x0^n) / (n x0^(n-1)) in powers of e."""
    scale = n * x0 ** (n - 1)
    return Polynomial(
        (0,) + tuple(math.comb(n, k) * x0 ** (n - k) / scale for k in range(1, n + 1))
    )


def test_catalan_reversion():
    """y = x + x^2 reverts to the signed Catalan numbers."""
    result = revert_multinomial(Polynomial((0, 1, 1)), 5)
    assert result.method is ReversionMethod.MULTINOMIAL
    assert result.beta.coeffs == (0, 1, -1, 2, -5, 14)
    assert result.beta.is_exact


@pytest.mark.parametrize("family", sorted(REVERSION_FAMILIES))
def test_multinomial_matches_recurrence(family):
    """Every family agrees with its independent recurrence."""
    beta = revert_multinomial(family_polynomial(family), 10).beta
    assert list(beta.coeffs[1:]) == oracle_recurrence(family, 10)


@pytest.mark.parametrize("k", [2, 3, -1])
def test_quadratic_family_with_k(k):
    """x + k x^2 for other k."""
    beta = revert_multinomial(family_polynomial("x+kx^2", k), 8).beta
    assert list(beta.coeffs[1:]) == oracle_recurrence("x+kx^2", 8, k)


@pytest.mark.parametrize("family", sorted(REVERSION_FAMILIES))
def test_reversion_composes_to_identity(family):
    """alpha(x(y)) = y exactly through the truncation order."""
    alpha = family_polynomial(family)
    beta = revert_multinomial(alpha, 10).beta
    composed = series_compose(Series.from_polynomial(alpha, 10), beta)
    assert composed.coeffs == Series.identity(10).coeffs


@pytest.mark.parametrize("family", ["x+kx^2", "x+x^4", "x+x^3+x^4", "x+x^2+2x^3"])
def test_methods_agree(family):
    """Multinomial, perturbative and Lagrange reversion coincide."""
    alpha = family_polynomial(family)
    multinomial = revert_multinomial(alpha, 8).beta.coeffs
    assert revert_perturbative(alpha, 8).beta.coeffs == multinomial
    assert revert_lagrange(alpha, 8).beta.coeffs == multinomial


def test_non_unit_linear_term():
    """y = 2x + x^2 is reverted with the 1/alpha_1 scaling."""
    alpha = Polynomial((0, 2, 1))
    multinomial = revert_multinomial(alpha, 6).beta
    assert multinomial.coeffs[1] == Fraction(1, 2)
    assert multinomial.coeffs[2] == Fraction(-1, 8)
    assert revert_perturbative(alpha, 6).beta.coeffs == multinomial.coeffs
    assert revert_lagrange(alpha, 6).beta.coeffs == multinomial.coeffs


def test_reversion_errors():
    """Constant or missing linear term."""
    with pytest.raises(DomainError):
        revert_multinomial(Polynomial((1, 1)), 5)
    with pytest.raises(DomainError):
        revert_lagrange(Polynomial((0, 0, 1)), 5)
    with pytest.raises(DomainError):
        family_polynomial("x+x^9")
    with pytest.raises(DomainError):
        oracle_recurrence("unknown", 3)


def test_perturbative_iteration_budget():
    """Running out of rounds raises ConvergenceError."""
    with pytest.raises(ConvergenceError) as err:
        revert_perturbative(Polynomial((0, 1, 1)), 6, max_iter=1)
    assert err.value.diagnostics["max_iter"] == 1


def test_local_coefficients():
    """First members of each local family."""
    assert local_coefficients(LocalKind.QUADRATIC, 5).values == (1, 2, 6, 20, 70)
    assert local_coefficients(LocalKind.CUBIC_KAPPA, 4).values == (1, 5, 66, 1122)
    assert local_coefficients(LocalKind.CUBIC_LAMBDA, 4).values == (1, 10, 154, 2805)
    eta = local_coefficients("quartic_eta", 8).values
    assert eta == (1, 3, 14, 77, 462, 2926, 19228, 129789)
    assert oracle_recurrence("cubic_kappa", 3) == [1, 5, 66]


def test_kappa_ratio():
    """kappa_n / kappa_(n-1) = 3 (6n-1)(3n-2) / (n (2n+1))."""
    kappa = local_coefficients(LocalKind.CUBIC_KAPPA, 12).values
    for n in range(1, 12):
        ratio = Fraction(3 * (6 * n - 1) * (3 * n - 2), n * (2 * n + 1))
        assert kappa[n] == kappa[n - 1] * ratio


def test_local_expansion_quadratic():
    """Anchor 1 for x^2: 1, -1, 3/2."""
    series = local_expansion(2, 1, 2)
    assert series.re == (1, -1, Fraction(3, 2))
    assert series.is_exact


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("x0", [Fraction(1), Fraction(2), Fraction(1, 2)])
def test_local_expansion_matches_reversion(n, x0):
    """The local series is the derivative of the reverted local phase."""
    order = 7
    expected = revert_multinomial(_local_phase(n, x0), order + 1).beta.derivative()
    series = local_expansion(n, x0, order)
    assert series.re == expected.coeffs
    assert all(value == 0 for value in series.im)


def test_local_expansion_errors():
    """Zero anchor and unsupported powers."""
    with pytest.raises(DomainError):
        local_expansion(3, 0, 4)
    with pytest.raises(DomainError):
        local_expansion(5, 1, 4)


def test_reversion_integrand():
    """x^m dx in the variable y = alpha(x)."""
    identity = reversion_integrand(Polynomial((0, 1)), 2, 5)
    assert identity.coeffs == (0, 0, 1, 0, 0, 0)

    catalan = reversion_integrand(Polynomial((0, 1, 1)), 0, 3)
    assert catalan.coeffs == (1, -2, 6, -20)
    assert catalan == make_series((1, -2, 6, -20), 3)


def test_kappa_closed_form():
    """kappa_n = 27^n (5/6)_n (1/3)_n / (n! (3/2)_n)."""
    kappa = local_coefficients(LocalKind.CUBIC_KAPPA, 10).values
    for n, value in enumerate(kappa):
        expected = (
            27**n
            * _rising(Fraction(5, 6), n)
            * _rising(Fraction(1, 3), n)
            / (math.factorial(n) * _rising(Fraction(3, 2), n))
        )
        assert value == expected


@pytest.mark.parametrize(
    ("family", "first", "residual"), [("x+x^3+x^4", 3, 65), ("x+x^2+2x^3", 2, 2)]
)
def test_quoted_recurrence_does_not_hold(family, first, residual):
    """The quoted recurrences miss, so these families use Lagrange inversion."""
    beta = revert_multinomial(family_polynomial(family), 10).beta

    def b(index: int) -> Fraction:
        return beta.coeffs[index] if index >= 0 else Fraction(0)

    assert _QUOTED_RECURRENCES[family](b, first) == residual
    assert oracle_recurrence(family, 10) == list(beta.coeffs[1:])
    assert revert_lagrange(family_polynomial(family), 10).beta.coeffs == beta.coeffs
