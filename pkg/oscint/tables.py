"""Reference-table reproduction, curve data and oracle cross-checks.

Row-parallel work runs through :func:`gather_rows`, which fans the rows
out to worker threads and returns results in input order.
"""
from __future__ import annotations

import asyncio
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, TypeVar, Union

import mpmath
import numpy as np
from scipy.optimize import brentq

from .config import EvalConfig, thread_limit
from .const import (
    DECIMAL_DIGITS,
    INFINITY_TABLE,
    INFINITY_TABLE_TOL,
    NEUMANN_PREFACTORS,
    NEUMANN_TABLES,
    ORACLE_DEFAULT_TOL,
    SINE_INTEGRALS,
    TABLE_DIGITS,
)
from .exceptions import DomainError
from .general_kernel import ProblemSpec, complete_general, evaluate
from .poly_core import Polynomial, parse_polynomial
from .power_kernel import (
    PowerKernelSpec,
    complete_power,
    neumann_coeffs,
    neumann_prefactor,
    neumann_prefactor_mp,
)
from .quadrature_oracle import oracle_integrate
from .reversion import (
    ReversionMethod,
    family_polynomial,
    revert_lagrange,
    revert_multinomial,
    revert_perturbative,
)

_LOGGER = logging.getLogger(__name__)

_T = TypeVar("_T")

TABLE_INFINITY = "infinity"
TABLE_NEUMANN = "neumann"
TABLE_POWERS = "powers"
TABLE_ALL = "all"
TABLE_CHOICES = (TABLE_INFINITY, TABLE_NEUMANN, TABLE_POWERS, TABLE_ALL)

PART_REAL = "real"
PART_IMAG = "imag"
PART_ABS = "abs"
PART_CHOICES = (PART_REAL, PART_IMAG, PART_ABS)

NEUMANN_PREFACTOR_RTOL = 1e-12
SINE_INTEGRAL_RTOL = 1e-15
CHECK_ABS_TOL = 1e-8

_HALF_ULP = Fraction(1, 2 * 10**TABLE_DIGITS)

# Upper limits for the built-in check batch
DEFAULT_CHECK_LIMITS = (0.5, 1.0, 2.0)


@dataclass(frozen=True)
class TableCheck:
    """One reproduced table entry."""

    table: str
    label: str
    expected: str
    computed: str
    deviation: float
    ok: bool

    def as_row(self) -> Dict[str, Any]:
        """Mapping for the output writers."""
        return {
            "table": self.table,
            "entry": self.label,
            "expected": self.expected,
            "computed": self.computed,
            "deviation": self.deviation,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class CheckRow:
    """Evaluator against the quadrature oracle for one problem."""

    spec: ProblemSpec
    value: complex
    oracle: complex
    delta: float
    allowed: float
    method: str
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        """Agreement within the allowed deviation."""
        return self.delta <= self.allowed

    def as_row(self) -> Dict[str, Any]:
        """Mapping for the output writers."""
        return {
            "p": str(self.spec.p),
            "phi": str(self.spec.phi),
            "u": self.spec.u,
            "re": self.value.real,
            "im": self.value.imag,
            "oracle_re": self.oracle.real,
            "oracle_im": self.oracle.imag,
            "delta": self.delta,
            "allowed": self.allowed,
            "method": self.method,
            "ok": self.ok,
        }


def format_complex(value: complex) -> str:
    """Complex number with 17 significant digits, ``"0"`` for zero."""
    if value == 0:
        return "0"
    digits = DECIMAL_DIGITS
    return f"{value.real:#.{digits}g} {value.imag:+#.{digits}g}i"


def fraction_decimal(value: Fraction, digits: int = TABLE_DIGITS) -> str:
    """Decimal expansion rounded half-up to ``digits`` places.

    Values in (-1, 1) are written without the leading zero (``.125...``).
    """
    sign = "-" if value < 0 else ""
    magnitude = abs(value)
    scaled = (2 * magnitude.numerator * 10**digits + magnitude.denominator) // (
        2 * magnitude.denominator
    )
    whole, fraction = divmod(scaled, 10**digits)
    head = str(whole) if whole else ""
    return f"{sign}{head}.{fraction:0{digits}d}"


async def gather_rows(
    jobs: Sequence[Callable[[], _T]], limit: Optional[int] = None
) -> List[_T]:
    """Run blocking row jobs on worker threads, at most ``limit`` at once.

    Results come back in the order of ``jobs``.
    """
    semaphore = asyncio.Semaphore(limit or thread_limit())

    async def run(job: Callable[[], _T]) -> _T:
        async with semaphore:
            return await asyncio.to_thread(job)

    return list(await asyncio.gather(*(run(job) for job in jobs)))


# Table reproduction


def neumann_table(n: int, terms: int) -> List[Dict[str, Any]]:
    """Rows (s, numerator, denominator, decimal) of the Neumann coefficients."""
    if terms < 1:
        raise DomainError(f"Number of table rows must be >= 1, got {terms}")
    expansion = neumann_coeffs(n, terms - 1)
    return [
        {
            "s": s,
            "numerator": xi.numerator,
            "denominator": xi.denominator,
            "decimal": fraction_decimal(xi),
        }
        for s, xi in enumerate(expansion.xi)
    ]


def reversion_table(
    family: str,
    order: int,
    method: Union[ReversionMethod, str] = ReversionMethod.MULTINOMIAL,
    k: int = 1,
) -> List[Dict[str, Any]]:
    """Rows (index, numerator, denominator) of the reversion coefficients."""
    alpha = family_polynomial(family, k)
    method = ReversionMethod(method)
    if method is ReversionMethod.PERTURBATIVE:
        result = revert_perturbative(alpha, order)
    elif method is ReversionMethod.LAGRANGE:
        result = revert_lagrange(alpha, order)
    else:
        result = revert_multinomial(alpha, order)
    return [
        {
            "index": j,
            "numerator": Fraction(result.beta[j]).numerator,
            "denominator": Fraction(result.beta[j]).denominator,
        }
        for j in range(1, order + 1)
    ]


def _infinity_row(
    p_text: str, phi_text: str, re: float, im: float, J: int
) -> TableCheck:
    p = parse_polynomial(p_text)
    phi = parse_polynomial(phi_text)
    value = complete_general(p, phi, J, INFINITY_TABLE_TOL).value
    deviation = max(abs(value.real - re), abs(value.imag - im))
    return TableCheck(
        TABLE_INFINITY,
        f"p={p_text}, phi={phi_text}",
        format_complex(complex(re, im)),
        format_complex(value),
        deviation,
        deviation <= INFINITY_TABLE_TOL,
    )


def infinity_jobs(
    config: Optional[EvalConfig] = None,
) -> List[Callable[[], TableCheck]]:
    """One job per row of the complete-integral table."""
    J = (config or EvalConfig()).J
    return [
        lambda row=row: _infinity_row(*row, J)  # type: ignore[misc]
        for row in INFINITY_TABLE
    ]


def reproduce_neumann() -> List[TableCheck]:
    """Exact Neumann coefficients and their prefactors."""
    checks: List[TableCheck] = []
    for n, rows in NEUMANN_TABLES.items():
        computed = neumann_table(n, len(rows))
        for (numerator, denominator, decimal), row in zip(rows, computed):
            xi = Fraction(row["numerator"], row["denominator"])
            exact = xi == Fraction(numerator, denominator)
            # printed expansions carry at least TABLE_DIGITS places
            same_digits = abs(Fraction("0" + decimal) - xi) <= _HALF_ULP
            deviation = float(abs(xi - Fraction(numerator, denominator)))
            checks.append(
                TableCheck(
                    TABLE_NEUMANN,
                    f"xi[{n},{row['s']}]",
                    f"{numerator}/{denominator} {decimal}",
                    f"{row['numerator']}/{row['denominator']} {row['decimal']}",
                    deviation,
                    exact and same_digits,
                )
            )

        expected = NEUMANN_PREFACTORS[n]
        precise = neumann_prefactor_mp(n, TABLE_DIGITS)
        deviation = abs(neumann_prefactor(n) - float(expected)) / float(expected)
        checks.append(
            TableCheck(
                TABLE_NEUMANN,
                f"d[{n}]",
                expected,
                mpmath.nstr(precise, TABLE_DIGITS),
                deviation,
                deviation <= NEUMANN_PREFACTOR_RTOL,
            )
        )
    return checks


def reproduce_powers() -> List[TableCheck]:
    """Im of the complete power integrals against the sine integrals."""
    checks: List[TableCheck] = []
    for n, expected in SINE_INTEGRALS.items():
        value = complete_power(PowerKernelSpec(0, n, 1.0)).imag
        reference = float(expected)
        deviation = abs(value - reference) / reference
        checks.append(
            TableCheck(
                TABLE_POWERS,
                f"int sin(x^{n})",
                expected,
                f"{value:.{DECIMAL_DIGITS}g}",
                deviation,
                deviation <= SINE_INTEGRAL_RTOL,
            )
        )
    return checks


async def reproduce_tables(
    which: str = TABLE_ALL, config: Optional[EvalConfig] = None
) -> List[TableCheck]:
    """Recompute the selected reference tables."""
    if which not in TABLE_CHOICES:
        raise DomainError(f"Unknown table {which!r}, expected one of {TABLE_CHOICES}")
    checks: List[TableCheck] = []
    if which in (TABLE_INFINITY, TABLE_ALL):
        checks.extend(await gather_rows(infinity_jobs(config)))
    if which in (TABLE_NEUMANN, TABLE_ALL):
        checks.extend(reproduce_neumann())
    if which in (TABLE_POWERS, TABLE_ALL):
        checks.extend(reproduce_powers())
    failed = sum(not check.ok for check in checks)
    _LOGGER.info(
        "Reproduced %d table entries, %d outside tolerance", len(checks), failed
    )
    return checks


# Curves


_PART_KEYS = {PART_REAL: "re", PART_IMAG: "im", PART_ABS: "abs"}


def curve_rows(
    p: Polynomial,
    phi: Polynomial,
    u_max: float,
    samples: int,
    config: Optional[EvalConfig] = None,
) -> List[Dict[str, Any]]:
    """I(u) on ``samples`` equal steps of [0, u_max]."""
    if u_max <= 0 or not math.isfinite(u_max):
        raise DomainError(f"u_max must be positive and finite, got {u_max}")
    if samples < 1:
        raise DomainError(f"Need at least one sample, got {samples}")
    rows = []
    for u in np.linspace(0.0, u_max, samples + 1):
        if u == 0:
            value = 0j
        else:
            value = evaluate(ProblemSpec(p, phi, float(u)), config).value
        rows.append(
            {"u": float(u), "re": value.real, "im": value.imag, "abs": abs(value)}
        )
    return rows


def curve_column(rows: Sequence[Dict[str, Any]], part: str) -> List[Dict[str, Any]]:
    """Project curve rows onto ``u`` and one part of I(u)."""
    try:
        key = _PART_KEYS[part]
    except KeyError as err:
        raise DomainError(f"Unknown curve part {part!r}") from err
    return [{"u": row["u"], part: row[key]} for row in rows]


def _integrand_part(
    p: Polynomial, phi: Polynomial, part: str
) -> Callable[[float], float]:
    if part == PART_REAL:
        return lambda x: float(p(x)) * math.cos(float(phi(x)))
    if part == PART_IMAG:
        return lambda x: float(p(x)) * math.sin(float(phi(x)))
    raise DomainError(
        f"Extrema are located for the real or imaginary part, not {part!r}"
    )


def curve_extrema(
    p: Polynomial, phi: Polynomial, rows: Sequence[Dict[str, Any]], part: str
) -> List[float]:
    """Interior extrema of Re or Im I(u), refined with brentq.

    Brackets are sign changes of the matching integrand part between
    neighbouring samples.
    """
    f = _integrand_part(p, phi, part)
    grid = [row["u"] for row in rows]
    values = [f(u) for u in grid]
    extrema: List[float] = []
    for (a, fa), (b, fb) in zip(zip(grid, values), zip(grid[1:], values[1:])):
        if fb == 0 and b != grid[-1]:
            extrema.append(b)
        elif fa * fb < 0:
            extrema.append(float(brentq(f, a, b, xtol=1e-14)))
    return extrema


# Oracle checks


def check_row(
    spec: ProblemSpec,
    config: Optional[EvalConfig] = None,
    oracle_tol: float = ORACLE_DEFAULT_TOL,
) -> CheckRow:
    """Compare evaluate() with the quadrature oracle on one problem."""
    result = evaluate(spec, config)
    oracle = oracle_integrate(spec, oracle_tol)
    allowed = max(CHECK_ABS_TOL, result.error_estimate + oracle.abs_error)
    return CheckRow(
        spec,
        result.value,
        oracle.value,
        abs(result.value - oracle.value),
        allowed,
        result.method,
        dict(result.diagnostics),
    )


def default_check_specs() -> List[ProblemSpec]:
    """Table rows at a few finite upper limits."""
    return [
        ProblemSpec(parse_polynomial(p_text), parse_polynomial(phi_text), u)
        for p_text, phi_text, _, _ in INFINITY_TABLE
        for u in DEFAULT_CHECK_LIMITS
    ]


async def check_specs(
    specs: Sequence[ProblemSpec],
    config: Optional[EvalConfig] = None,
    oracle_tol: float = ORACLE_DEFAULT_TOL,
) -> List[CheckRow]:
    """Oracle cross-check of every spec, in input order."""
    jobs = [
        lambda spec=spec: check_row(spec, config, oracle_tol)  # type: ignore[misc]
        for spec in specs
    ]
    rows = await gather_rows(jobs)
    failed = sum(not row.ok for row in rows)
    _LOGGER.info("Checked %d rows against the oracle, %d failed", len(rows), failed)
    return rows
