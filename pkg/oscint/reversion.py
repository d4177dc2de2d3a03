"""Series reversion of phase polynomials and reference coefficient families."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Dict, Iterator, List, Tuple, Union

from .const import (
    FAMILY_CUBIC_KAPPA,
    FAMILY_CUBIC_LAMBDA,
    FAMILY_QUADRATIC,
    FAMILY_QUARTIC_ETA,
    REVERSION_FAMILIES,
)
from .exceptions import ConvergenceError, DomainError
from .poly_core import (
    ComplexSeries,
    Polynomial,
    Series,
    VariableKind,
    make_series,
    parse_polynomial,
    series_compose,
)

_LOGGER = logging.getLogger(__name__)


class ReversionMethod(str, Enum):
    """How a reversion was computed."""

    MULTINOMIAL = "multinomial"
    PERTURBATIVE = "perturbative"
    LAGRANGE = "lagrange"


class LocalKind(str, Enum):
    """Coefficient families of the local (re-anchored) expansions."""

    QUADRATIC = FAMILY_QUADRATIC
    CUBIC_KAPPA = FAMILY_CUBIC_KAPPA
    CUBIC_LAMBDA = FAMILY_CUBIC_LAMBDA
    QUARTIC_ETA = FAMILY_QUARTIC_ETA


@dataclass(frozen=True)
class ReversionResult:
    """Coefficients beta_j of x(y) for y = alpha(x)."""

    beta: Series
    method: ReversionMethod
    input_alpha: Polynomial


@dataclass(frozen=True)
class LocalExpansionCoeffs:
    """Integer sequence that drives one local expansion."""

    kind: LocalKind
    values: Tuple[Fraction, ...]


def _check_alpha(alpha: Polynomial) -> None:
    if alpha.is_zero or alpha.coefficient(0) != 0:
        raise DomainError(f"Reversion needs alpha(0) = 0, got {alpha}")
    if alpha.coefficient(1) == 0:
        raise DomainError(f"Reversion needs a nonzero linear term, got {alpha}")


def _partitions(total: int, parts: int, largest: int) -> Iterator[Tuple[int, ...]]:
    """Yield ``(t_1, .., t_largest)`` with sum(i*t_i) = total, sum(t_i) = parts."""
    if parts < 0 or total < parts:
        return
    if largest == 1:
        if total == parts:
            yield (parts,)
        return
    for count in range(min(parts, total // largest), -1, -1):
        for rest in _partitions(total - largest * count, parts - count, largest - 1):
            yield rest + (count,)


def revert_multinomial(alpha: Polynomial, order: int) -> ReversionResult:
    """Revert ``y = alpha(x)`` through ``y**order`` by the multinomial recurrence.

    Each beta_t follows from the coefficient of y**t in alpha(x(y)) = y,
    expanding x**j over the partitions of t into j parts of size <= t-j+1.

    Raises:
        DomainError: alpha has a constant term or a vanishing linear term
    """
    _check_alpha(alpha)
    alpha1 = alpha.coefficient(1)
    degree = alpha.degree or 1
    beta: List[Any] = [Fraction(0), 1 / alpha1]
    for t in range(2, order + 1):
        total: Any = Fraction(0)
        for j in range(2, min(t, degree) + 1):
            alpha_j = alpha.coefficient(j)
            if alpha_j == 0:
                continue
            inner: Any = Fraction(0)
            for counts in _partitions(t, j, t - j + 1):
                term: Any = math.factorial(j)
                for index, count in enumerate(counts, start=1):
                    if count:
                        term = term * beta[index] ** count / math.factorial(count)
                inner += term
            total += alpha_j * inner
        beta.append(-total / alpha1)
    _LOGGER.debug("Multinomial reversion of %s through order %d", alpha, order)
    return ReversionResult(
        make_series(beta[: order + 1], order),
        ReversionMethod.MULTINOMIAL,
        alpha,
    )


def revert_perturbative(
    alpha: Polynomial, order: int, max_iter: int = 1000
) -> ReversionResult:
    """Revert ``y = alpha(x)`` by fixed-point iteration.

    With alpha scaled to a unit linear term the iteration
    ``x <- y - sum_{j>=2} alpha_j x**j`` is run until the coefficients
    through ``order`` stop changing; the scaling is undone at the end.

    Raises:
        DomainError: alpha has a constant term or a vanishing linear term
        ConvergenceError: Coefficients still moving after ``max_iter`` rounds
    """
    _check_alpha(alpha)
    alpha1 = alpha.coefficient(1)
    scaled = alpha * (1 / alpha1)
    tail = Series.from_polynomial(scaled - Polynomial.monomial(1, 1), order)
    identity = Series.identity(order)

    current = identity
    for iteration in range(1, max_iter + 1):
        following = identity - series_compose(tail, current)
        if following.coeffs == current.coeffs:
            _LOGGER.debug(
                "Perturbative reversion of %s stationary after %d rounds",
                alpha,
                iteration,
            )
            break
        current = following
    else:
        raise ConvergenceError(
            f"Perturbative reversion of {alpha} not stationary after {max_iter} rounds",
            {"order": order, "max_iter": max_iter},
        )

    inverse = 1 / alpha1
    beta = [c * inverse**j for j, c in enumerate(current.coeffs)]
    return ReversionResult(
        make_series(beta, order), ReversionMethod.PERTURBATIVE, alpha
    )


def revert_lagrange(alpha: Polynomial, order: int) -> ReversionResult:
    """Revert by Lagrange inversion, beta_t = [x^(t-1)] (alpha(x)/x)^(-t) / t."""
    _check_alpha(alpha)
    quotient = make_series(alpha.coeffs[1:], max(order - 1, 0))
    reciprocal = quotient.reciprocal()
    beta: List[Any] = [Fraction(0)]
    power = make_series((1,), reciprocal.truncation_order)
    for t in range(1, order + 1):
        power = power * reciprocal
        beta.append(power.coeffs[t - 1] / t)
    return ReversionResult(
        make_series(beta, order), ReversionMethod.LAGRANGE, alpha
    )


def family_polynomial(family: str, k: int = 1) -> Polynomial:
    """Phase polynomial of a named reversion family.

    Raises:
        DomainError: Unknown family
    """
    if family not in REVERSION_FAMILIES:
        raise DomainError(f"Unknown reversion family: {family}")
    if family == "x+kx^2":
        return Polynomial((0, 1, k))
    return parse_polynomial(REVERSION_FAMILIES[family])


def _two_term(
    order: int, step: int, ratio: Callable[[int], Fraction]
) -> List[Fraction]:
    """beta_1..beta_order with gamma_k = beta_{step*(k-1)+1}, gamma_1 = 1."""
    beta = [Fraction(0)] * (order + 1)
    gamma = Fraction(1)
    k = 1
    while step * (k - 1) + 1 <= order:
        if k > 1:
            gamma *= ratio(k)
        beta[step * (k - 1) + 1] = gamma
        k += 1
    return beta[1:]


def _quartic_mixed(order: int) -> List[Fraction]:
    """Five-term recurrence of x + x^2 + x^4, seeded with beta_1, beta_2."""
    beta: Dict[int, Fraction] = {1: Fraction(1), 2: Fraction(-1)}

    def b(index: int) -> Fraction:
        return beta.get(index, Fraction(0))

    for j in range(3, order + 1):
        rhs = (
            8 * (j - 1) * (j - 2) * (647 * j - 738) * b(j - 1)
            + 4 * (j - 2) * (224 * j**2 + 1504 * j - 5157) * b(j - 2)
            + 8 * (800 * j**3 - 5040 * j**2 + 8746 * j - 2655) * b(j - 3)
            - 192 * (4 * j - 15) * (2 * j - 7) * (4 * j - 17) * b(j - 4)
        )
        beta[j] = -rhs / (1147 * j * (j - 1) * (j - 2))
    return [b(j) for j in range(1, order + 1)]


def _ratio(numerator: int, denominator: int) -> Fraction:
    return Fraction(numerator, denominator)


_FAMILY_RECURRENCES: Dict[str, Callable[[int, int], List[Fraction]]] = {
    "x+kx^2": lambda order, k: _two_term(
        order, 1, lambda j: _ratio(-2 * k * (2 * j - 3), j)
    ),
    "x+x^3": lambda order, k: _two_term(
        order,
        2,
        lambda g: _ratio(-3 * (3 * g - 4) * (3 * g - 5), (2 * g - 1) * (2 * g - 2)),
    ),
    "x+x^4": lambda order, k: _two_term(
        order,
        3,
        lambda g: _ratio(
            -4 * (4 * g - 5) * (4 * g - 7) * (4 * g - 6),
            (3 * g - 3) * (3 * g - 4) * (3 * g - 2),
        ),
    ),
    "x+x^5": lambda order, k: _two_term(
        order,
        4,
        lambda g: _ratio(
            -5 * (5 * g - 9) * (5 * g - 8) * (5 * g - 7) * (5 * g - 6),
            (4 * g - 4) * (4 * g - 5) * (4 * g - 3) * (4 * g - 6),
        ),
    ),
    "x+2x^3": lambda order, k: _two_term(
        order,
        2,
        lambda g: _ratio(-3 * (3 * g - 4) * (3 * g - 5), (2 * g - 1) * (g - 1)),
    ),
    "x+2x^4": lambda order, k: _two_term(
        order,
        3,
        lambda g: _ratio(
            -8 * (4 * g - 5) * (4 * g - 7) * (4 * g - 6),
            (3 * g - 3) * (3 * g - 4) * (3 * g - 2),
        ),
    ),
    "x+2x^2+x^3": lambda order, k: _two_term(
        order,
        1,
        lambda j: _ratio(-3 * (3 * j - 2) * (3 * j - 4), 2 * j * (2 * j - 1)),
    ),
    "x+x^2+x^4": lambda order, k: _quartic_mixed(order),
}

# The multi-term recurrences quoted for these families do not hold (residual
# 65 at j = 3 for x+x^3+x^4, 2 at j = 2 for x+x^2+2x^3); Lagrange inversion
# is the oracle instead
_LAGRANGE_FAMILIES = ("x+x^3+x^4", "x+x^2+2x^3")


def local_coefficients(kind: Union[LocalKind, str], count: int) -> LocalExpansionCoeffs:
    """First ``count`` members of a local-expansion integer sequence.

    ``quadratic`` gives the central binomials C(2l, l), the cubic families
    start at index 0 and ``quartic_eta`` at eta_1.
    """
    kind = LocalKind(kind)
    values: List[Fraction] = []
    if kind is LocalKind.QUADRATIC:
        values = [Fraction(math.comb(2 * l, l)) for l in range(count)]
    elif kind is LocalKind.CUBIC_KAPPA:
        value = Fraction(1)
        for n in range(count):
            if n:
                value = value * 3 * (6 * n - 1) * (3 * n - 2) / (n * (2 * n + 1))
            values.append(value)
    elif kind is LocalKind.CUBIC_LAMBDA:
        value = Fraction(1)
        for n in range(count):
            if n:
                value = value * 3 * (6 * n - 1) * (3 * n + 1) / ((n + 1) * (2 * n + 1))
            values.append(value)
    else:
        value = Fraction(1)
        for j in range(1, count + 1):
            if j > 1:
                value = value * 2 * (4 * j - 5) / j
            values.append(value)
    return LocalExpansionCoeffs(kind, tuple(values))


def oracle_recurrence(family: str, count: int, k: int = 1) -> List[Fraction]:
    """Reference coefficients computed without the general reversion code.

    Reversion families return beta_1..beta_count; local families return the
    first ``count`` members of their sequence. ``k`` only matters for
    ``x+kx^2``.

    Raises:
        DomainError: Unknown family
    """
    if family in _FAMILY_RECURRENCES:
        return _FAMILY_RECURRENCES[family](count, k)
    if family in _LAGRANGE_FAMILIES:
        beta = revert_lagrange(family_polynomial(family), count).beta
        return list(beta.coeffs[1 : count + 1])
    try:
        kind = LocalKind(family)
    except ValueError as err:
        raise DomainError(f"Unknown coefficient family: {family}") from err
    return list(local_coefficients(kind, count).values)


def local_expansion(n: int, x0: Any, order: int) -> ComplexSeries:
    """d(epsilon)/dy around ``x0`` for the monomial phase ``x**n``.

    Here (x0 + epsilon)**n = x0**n + n*x0**(n-1)*y, so the integrand
    becomes exp(i*n*x0**(n-1)*y) times the returned series in y.

    Raises:
        DomainError: ``x0 == 0`` or ``n`` not in {2, 3, 4}
    """
    if x0 == 0:
        raise DomainError("Local expansion needs a nonzero anchor")
    if isinstance(x0, int):
        x0 = Fraction(x0)
    coefficients: List[Any] = []
    if n == 2:
        central = local_coefficients(LocalKind.QUADRATIC, order + 1).values
        coefficients = [
            central[l] * (-1) ** l / (2 * x0) ** l for l in range(order + 1)
        ]
    elif n == 3:
        kappa = local_coefficients(LocalKind.CUBIC_KAPPA, order // 2 + 1).values
        lam = local_coefficients(LocalKind.CUBIC_LAMBDA, order // 2 + 1).values
        for power in range(order + 1):
            j = power // 2
            if power % 2 == 0:
                coefficients.append((2 * j + 1) * kappa[j] / (3 * x0**2) ** j)
            else:
                coefficients.append(
                    -(2 * j + 2) * lam[j] / (3**j * x0 ** (2 * j + 1))
                )
    elif n == 4:
        eta = local_coefficients(LocalKind.QUARTIC_ETA, order + 1).values
        coefficients = [
            (-1) ** j * (j + 1) * eta[j] / (2 * x0) ** j for j in range(order + 1)
        ]
    else:
        raise DomainError(f"Local expansions exist for n = 2, 3, 4, not {n}")
    return ComplexSeries(tuple(coefficients), (), VariableKind.POWER_OF_X, order)


def reversion_integrand(alpha: Polynomial, m: int, order: int) -> Series:
    """Coefficients gamma_t with x**m dx = sum_t gamma_t y**t dy for y = alpha(x).

    Integrals of x**m exp(i*alpha(x)) then become sums of gamma_t times
    integrals of y**t exp(i*y).
    """
    beta = revert_multinomial(alpha, order + 1).beta
    integrand = beta.power(m) * beta.derivative()
    return integrand.truncate(order)
