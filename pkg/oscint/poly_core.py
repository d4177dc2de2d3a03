"""Polynomials, truncated power series and their arithmetic.

Coefficients are kept exact as :class:`fractions.Fraction` whenever the
inputs are integers or parsed from text; floats are accepted and simply
propagate through the same code paths.
"""
from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from .exceptions import DomainError, PolynomialError

_LOGGER = logging.getLogger(__name__)

Coefficient = Union[Fraction, float]
Scalar = Union[Fraction, float, complex]

_NUMBER = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?"
_TERM_RE = re.compile(rf"([+-]?)({_NUMBER})?(?:\*?(x)(?:(?:\^|\*\*)(\d+))?)?")


def _coerce(value: Any) -> Coefficient:
    """Normalise a real coefficient to Fraction (exact) or float."""
    if isinstance(value, bool):
        raise PolynomialError(f"Boolean is not a coefficient: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        number = float(value)
        if not math.isfinite(number):
            raise PolynomialError(f"Non-finite coefficient: {value!r}")
        return number
    raise PolynomialError(f"Unsupported coefficient type: {type(value).__name__}")


def _coerce_scalar(value: Any) -> Scalar:
    """Like _coerce but also admits complex values."""
    if isinstance(value, (complex, np.complexfloating)):
        number = complex(value)
        if not (math.isfinite(number.real) and math.isfinite(number.imag)):
            raise PolynomialError(f"Non-finite coefficient: {value!r}")
        return number
    return _coerce(value)


def _is_zero(value: Any) -> bool:
    return bool(value == 0)


@dataclass(frozen=True)
class Polynomial:
    """Dense real polynomial, ``coeffs[k]`` multiplies ``x**k``.

    Trailing zeros are stripped on construction so the last stored
    coefficient is the leading one. The zero polynomial stores no
    coefficients and has degree ``None``.
    """

    coeffs: Tuple[Coefficient, ...] = ()

    def __post_init__(self) -> None:
        """Normalise coefficients and strip trailing zeros."""
        values = [_coerce(c) for c in self.coeffs]
        while values and _is_zero(values[-1]):
            values.pop()
        object.__setattr__(self, "coeffs", tuple(values))

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[Any]) -> Polynomial:
        """Build a polynomial from an iterable of coefficients."""
        return cls(tuple(coeffs))

    @classmethod
    def monomial(cls, coefficient: Any, power: int) -> Polynomial:
        """Return ``coefficient * x**power``."""
        if power < 0:
            raise PolynomialError(f"Negative power: {power}")
        return cls((0,) * power + (coefficient,))

    @property
    def degree(self) -> Optional[int]:
        """Highest power with a nonzero coefficient, None for zero."""
        if not self.coeffs:
            return None
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        """True for the identically zero polynomial."""
        return not self.coeffs

    @property
    def is_exact(self) -> bool:
        """True when every coefficient is a Fraction."""
        return all(isinstance(c, Fraction) for c in self.coeffs)

    def coefficient(self, power: int) -> Coefficient:
        """Coefficient of ``x**power`` (zero beyond the degree)."""
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return Fraction(0)

    def __call__(self, x: Any) -> Any:
        """Evaluate by Horner's rule."""
        result: Any = Fraction(0)
        for coefficient in reversed(self.coeffs):
            result = result * x + coefficient
        return result

    def evaluate_array(self, xs: Any) -> np.ndarray:
        """Vectorised float evaluation."""
        if self.is_zero:
            return np.zeros_like(np.asarray(xs, dtype=float))
        return np.polynomial.polynomial.polyval(np.asarray(xs), self.to_numpy())

    def to_numpy(self) -> np.ndarray:
        """Coefficients as a float array, lowest power first."""
        return np.array([float(c) for c in self.coeffs], dtype=float)

    def __add__(self, other: Any) -> Polynomial:
        if not isinstance(other, Polynomial):
            other = Polynomial((other,))
        size = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(
            tuple(self.coefficient(k) + other.coefficient(k) for k in range(size))
        )

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: Any) -> Polynomial:
        if not isinstance(other, Polynomial):
            other = Polynomial((other,))
        return self + (-other)

    def __mul__(self, other: Any) -> Polynomial:
        if not isinstance(other, Polynomial):
            factor = _coerce(other)
            return Polynomial(tuple(c * factor for c in self.coeffs))
        if self.is_zero or other.is_zero:
            return Polynomial()
        product: List[Any] = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                product[i + j] += a * b
        return Polynomial(tuple(product))

    __rmul__ = __mul__

    def derivative(self) -> Polynomial:
        """Return p'."""
        return Polynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def antiderivative(self) -> Polynomial:
        """Return the antiderivative that vanishes at the origin."""
        return Polynomial(
            (Fraction(0),) + tuple(c / (k + 1) for k, c in enumerate(self.coeffs))
        )

    def divmod(self, divisor: Polynomial) -> Tuple[Polynomial, Polynomial]:
        """Polynomial long division, ``self = quotient*divisor + remainder``.

        Raises:
            PolynomialError: Division by the zero polynomial
        """
        if divisor.is_zero:
            raise PolynomialError("Division by the zero polynomial")
        remainder: List[Any] = list(self.coeffs)
        dd = len(divisor.coeffs) - 1
        lead = divisor.coeffs[-1]
        if len(remainder) <= dd:
            return Polynomial(), self
        quotient: List[Any] = [Fraction(0)] * (len(remainder) - dd)
        for k in range(len(remainder) - 1, dd - 1, -1):
            factor = remainder[k] / lead
            quotient[k - dd] = factor
            if _is_zero(factor):
                continue
            for j, d in enumerate(divisor.coeffs):
                remainder[k - dd + j] -= factor * d
        return Polynomial(tuple(quotient)), Polynomial(tuple(remainder[:dd]))

    def shift(self, anchor: Any) -> Polynomial:
        """Taylor shift: coefficients of ``p(anchor + h)`` in powers of h."""
        anchor = _coerce(anchor)
        shifted: List[Any] = []
        for k in range(len(self.coeffs)):
            total: Any = Fraction(0)
            for j in range(k, len(self.coeffs)):
                total += self.coeffs[j] * math.comb(j, k) * anchor ** (j - k)
            shifted.append(total)
        return Polynomial(tuple(shifted))

    def without_constant(self) -> Polynomial:
        """Drop the constant term."""
        return Polynomial((Fraction(0),) + self.coeffs[1:])

    def is_even(self) -> bool:
        """Only even powers present."""
        return all(_is_zero(c) for c in self.coeffs[1::2])

    def is_odd(self) -> bool:
        """Only odd powers present."""
        return all(_is_zero(c) for c in self.coeffs[0::2])

    def decimate(self, offset: int) -> Polynomial:
        """Coefficients ``offset, offset+2, ...`` as a polynomial in ``y = x**2``."""
        return Polynomial(self.coeffs[offset::2])

    def as_monomial(self) -> Optional[Tuple[Coefficient, int]]:
        """Return ``(c, n)`` when the polynomial is ``c*x**n``."""
        nonzero = [(k, c) for k, c in enumerate(self.coeffs) if not _is_zero(c)]
        if len(nonzero) != 1:
            return None
        power, coefficient = nonzero[0]
        return coefficient, power

    def critical_points(self, lo: float, hi: float) -> List[float]:
        """Sorted real zeros of p' strictly inside (lo, hi)."""
        derivative = self.derivative()
        if derivative.degree is None or derivative.degree == 0:
            return []
        roots = np.polynomial.polynomial.polyroots(derivative.to_numpy())
        scale = max(1.0, abs(lo), abs(hi))
        points = sorted(
            float(r.real)
            for r in np.atleast_1d(roots)
            if abs(r.imag) <= 1e-10 * scale and lo < r.real < hi
        )
        return points

    def __str__(self) -> str:
        return format_polynomial(self)


def poly_eval(p: Polynomial, x: Any) -> Any:
    """Evaluate ``p`` at ``x`` with Horner's rule."""
    return p(x)


def _parse_number(token: str) -> Fraction:
    """Exact value of an integer, decimal or ``a/b`` token."""
    try:
        if "/" in token:
            numerator, denominator = token.split("/")
            if int(denominator) == 0:
                raise PolynomialError(f"Zero denominator in {token!r}")
            return Fraction(numerator) / int(denominator)
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as err:
        raise PolynomialError(f"Invalid coefficient {token!r}") from err


def parse_polynomial(text: str) -> Polynomial:
    """Parse ``"c0,c1,c2"`` or a monomial sum such as ``"1+2x^3-x^5"``.

    Coefficients may be integers, decimals (exponent allowed) or ``a/b``
    rationals; all are read exactly.

    Raises:
        PolynomialError: Text does not follow the grammar
    """
    compact = "".join(text.split())
    if not compact:
        raise PolynomialError("Empty polynomial text")

    if "," in compact:
        coeffs: List[Fraction] = []
        for token in compact.split(","):
            sign = -1 if token.startswith("-") else 1
            body = token.lstrip("+-")
            if not body or len(token) - len(body) > 1:
                raise PolynomialError(f"Invalid coefficient {token!r} in {text!r}")
            coeffs.append(sign * _parse_number(body))
        return Polynomial(tuple(coeffs))

    terms: Dict[int, Fraction] = {}
    position = 0
    while position < len(compact):
        match = _TERM_RE.match(compact, position)
        if match is None or match.end() == position:
            raise PolynomialError(f"Cannot parse {text!r} at column {position}")
        sign, number, variable, power = match.groups()
        if number is None and variable is None:
            raise PolynomialError(f"Dangling sign in {text!r} at column {position}")
        if position > 0 and not sign:
            raise PolynomialError(f"Missing operator in {text!r} at column {position}")
        value = _parse_number(number) if number is not None else Fraction(1)
        if sign == "-":
            value = -value
        exponent = 0 if variable is None else int(power) if power else 1
        terms[exponent] = terms.get(exponent, Fraction(0)) + value
        position = match.end()

    size = max(terms) + 1
    return Polynomial(tuple(terms.get(k, Fraction(0)) for k in range(size)))


def _format_coefficient(value: Coefficient) -> str:
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return repr(float(value))


def format_polynomial(p: Polynomial) -> str:
    """Monomial-sum text that parses back to ``p``."""
    if p.is_zero:
        return "0"
    parts: List[str] = []
    for power, coefficient in enumerate(p.coeffs):
        if _is_zero(coefficient):
            continue
        negative = coefficient < 0
        magnitude = _format_coefficient(-coefficient if negative else coefficient)
        if power == 0:
            body = magnitude
        else:
            monomial = "x" if power == 1 else f"x^{power}"
            body = monomial if magnitude == "1" else f"{magnitude}{monomial}"
        if parts:
            parts.append(("-" if negative else "+") + body)
        else:
            parts.append(("-" if negative else "") + body)
    return "".join(parts)


# Truncated power series


def _pad(values: Sequence[Any], order: int, coerce: Any) -> Tuple[Any, ...]:
    coerced = [coerce(v) for v in values[: order + 1]]
    coerced.extend([Fraction(0)] * (order + 1 - len(coerced)))
    return tuple(coerced)


def _convolve(a: Sequence[Any], b: Sequence[Any], order: int) -> List[Any]:
    out: List[Any] = [Fraction(0)] * (order + 1)
    for i, x in enumerate(a[: order + 1]):
        if _is_zero(x):
            continue
        for j in range(min(len(b), order + 1 - i)):
            out[i + j] += x * b[j]
    return out


def _valuation(values: Sequence[Any], order: int) -> int:
    for k, value in enumerate(values[: order + 1]):
        if not _is_zero(value):
            return k
    return order + 1


@dataclass(frozen=True)
class Series:
    """Power series in x known through ``x**truncation_order``.

    Coefficients beyond the truncation order are unknown rather than zero,
    and every operation reports the order through which its result is valid.
    """

    coeffs: Tuple[Scalar, ...]
    truncation_order: int

    def __post_init__(self) -> None:
        """Validate the order and pad coefficients to ``order + 1``."""
        if self.truncation_order < 0:
            raise PolynomialError(f"Negative truncation order: {self.truncation_order}")
        object.__setattr__(
            self, "coeffs", _pad(self.coeffs, self.truncation_order, self._coerce)
        )

    _coerce = staticmethod(_coerce_scalar)

    @classmethod
    def from_polynomial(cls, p: Polynomial, order: int) -> Series:
        """Series of a polynomial truncated at ``order``."""
        return make_series(p.coeffs, order)

    @classmethod
    def identity(cls, order: int) -> Series:
        """The series ``x``."""
        return make_series((0, 1), order)

    @property
    def is_exact(self) -> bool:
        """True when every coefficient is a Fraction."""
        return all(isinstance(c, Fraction) for c in self.coeffs)

    @property
    def valuation(self) -> int:
        """Index of the first nonzero coefficient (order + 1 if none known)."""
        return _valuation(self.coeffs, self.truncation_order)

    def __getitem__(self, power: int) -> Scalar:
        return self.coeffs[power]

    def __len__(self) -> int:
        return len(self.coeffs)

    def truncate(self, order: int) -> Series:
        """Lower the truncation order."""
        return make_series(self.coeffs, min(order, self.truncation_order))

    def __add__(self, other: Series) -> Series:
        order = min(self.truncation_order, other.truncation_order)
        return make_series(
            [a + b for a, b in zip(self.coeffs[: order + 1], other.coeffs)], order
        )

    def __neg__(self) -> Series:
        return make_series([-c for c in self.coeffs], self.truncation_order)

    def __sub__(self, other: Series) -> Series:
        return self + (-other)

    def __mul__(self, other: Any) -> Series:
        if not isinstance(other, Series):
            factor = _coerce_scalar(other)
            return make_series([c * factor for c in self.coeffs], self.truncation_order)
        order = min(
            self.truncation_order + other.valuation,
            other.truncation_order + self.valuation,
        )
        return make_series(_convolve(self.coeffs, other.coeffs, order), order)

    __rmul__ = __mul__

    def reciprocal(self) -> Series:
        """Multiplicative inverse; needs a nonzero constant term."""
        lead = self.coeffs[0]
        if _is_zero(lead):
            raise DomainError("Series without constant term has no reciprocal")
        inverse: List[Any] = [1 / lead]
        for k in range(1, self.truncation_order + 1):
            total: Any = Fraction(0)
            for j in range(1, k + 1):
                total += self.coeffs[j] * inverse[k - j]
            inverse.append(-total / lead)
        return make_series(inverse, self.truncation_order)

    def power(self, exponent: int) -> Series:
        """Non-negative integer power by repeated multiplication."""
        if exponent < 0:
            raise DomainError(f"Negative series power: {exponent}")
        result = make_series((1,), self.truncation_order)
        for _ in range(exponent):
            result = result * self
        return result

    def derivative(self) -> Series:
        """Termwise derivative, valid through one order less."""
        if self.truncation_order == 0:
            raise PolynomialError("Derivative of an order-0 series is unknown")
        return make_series(
            [k * c for k, c in enumerate(self.coeffs) if k > 0],
            self.truncation_order - 1,
        )

    def antiderivative(self) -> Series:
        """Termwise antiderivative vanishing at the origin."""
        return make_series(
            [Fraction(0)] + [c / (k + 1) for k, c in enumerate(self.coeffs)],
            self.truncation_order + 1,
        )

    def evaluate(self, x: Any) -> Any:
        """Sum of the known terms at ``x``."""
        result: Any = Fraction(0)
        for coefficient in reversed(self.coeffs):
            result = result * x + coefficient
        return result


def _require_fraction(value: Any) -> Fraction:
    coerced = _coerce(value)
    if not isinstance(coerced, Fraction):
        raise PolynomialError(f"Rational series needs exact coefficients: {value!r}")
    return coerced


class RationalSeries(Series):
    """Series whose coefficients are exact Fractions."""

    _coerce = staticmethod(_require_fraction)


def make_series(values: Sequence[Any], order: int) -> Series:
    """Build a RationalSeries when exact, a plain Series otherwise."""
    if all(isinstance(v, (Fraction, int)) and not isinstance(v, bool) for v in values):
        return RationalSeries(tuple(values), order)
    return Series(tuple(values), order)


def series_compose(outer: Series, inner: Series) -> Series:
    """Return ``outer(inner(x))``.

    Raises:
        PolynomialError: ``inner`` has a nonzero constant term
    """
    if not _is_zero(inner.coeffs[0]):
        raise PolynomialError("Inner series of a composition must vanish at 0")
    order = min(outer.truncation_order, inner.truncation_order)
    inner = inner.truncate(order)
    result: Series = make_series((outer.coeffs[order],), order)
    for k in range(order - 1, -1, -1):
        product = _convolve(result.coeffs, inner.coeffs, order)
        product[0] += outer.coeffs[k]
        result = make_series(product, order)
    return result


class VariableKind(str, Enum):
    """Expansion variable of a ComplexSeries."""

    POWER_OF_X = "power_of_x"
    POWER_OF_INVERSE_X = "power_of_inverse_x"


@dataclass(frozen=True)
class ComplexSeries:
    """Complex series stored as separate real and imaginary parts.

    Keeping the parts apart lets Gaussian rationals stay exact. For
    ``POWER_OF_INVERSE_X`` index j multiplies ``x**-j`` and index 0 must
    vanish.
    """

    re: Tuple[Coefficient, ...]
    im: Tuple[Coefficient, ...]
    variable_kind: VariableKind
    truncation_order: int

    def __post_init__(self) -> None:
        """Pad both parts and check the inverse-variable constraint."""
        if self.truncation_order < 0:
            raise PolynomialError(f"Negative truncation order: {self.truncation_order}")
        object.__setattr__(self, "re", _pad(self.re, self.truncation_order, _coerce))
        object.__setattr__(self, "im", _pad(self.im, self.truncation_order, _coerce))
        if self.variable_kind is VariableKind.POWER_OF_INVERSE_X and not (
            _is_zero(self.re[0]) and _is_zero(self.im[0])
        ):
            raise PolynomialError("Inverse-power series cannot have a constant term")

    @classmethod
    def from_complex(
        cls, values: Sequence[complex], kind: VariableKind, order: int
    ) -> ComplexSeries:
        """Build from complex doubles."""
        numbers = [complex(v) for v in values]
        return cls(
            tuple(v.real for v in numbers), tuple(v.imag for v in numbers), kind, order
        )

    @property
    def coeffs(self) -> Tuple[complex, ...]:
        """Coefficients as complex doubles."""
        return tuple(complex(float(a), float(b)) for a, b in zip(self.re, self.im))

    @property
    def is_exact(self) -> bool:
        """True when both parts are exact."""
        return all(isinstance(c, Fraction) for c in self.re + self.im)

    def coefficient(self, index: int) -> complex:
        """Coefficient ``index`` as a complex double."""
        return complex(float(self.re[index]), float(self.im[index]))

    def _check(self, other: ComplexSeries) -> int:
        if other.variable_kind is not self.variable_kind:
            raise PolynomialError("Cannot combine series in different variables")
        return min(self.truncation_order, other.truncation_order)

    def __add__(self, other: ComplexSeries) -> ComplexSeries:
        order = self._check(other)
        return ComplexSeries(
            tuple(a + b for a, b in zip(self.re[: order + 1], other.re)),
            tuple(a + b for a, b in zip(self.im[: order + 1], other.im)),
            self.variable_kind,
            order,
        )

    def __neg__(self) -> ComplexSeries:
        return ComplexSeries(
            tuple(-a for a in self.re),
            tuple(-b for b in self.im),
            self.variable_kind,
            self.truncation_order,
        )

    def __sub__(self, other: ComplexSeries) -> ComplexSeries:
        return self + (-other)

    def __mul__(self, other: ComplexSeries) -> ComplexSeries:
        order = self._check(other)
        rr = _convolve(self.re, other.re, order)
        ii = _convolve(self.im, other.im, order)
        ri = _convolve(self.re, other.im, order)
        ir = _convolve(self.im, other.re, order)
        return ComplexSeries(
            tuple(a - b for a, b in zip(rr, ii)),
            tuple(a + b for a, b in zip(ri, ir)),
            self.variable_kind,
            order,
        )

    def times_i(self) -> ComplexSeries:
        """Multiply by the imaginary unit exactly."""
        return ComplexSeries(
            tuple(-b for b in self.im),
            self.re,
            self.variable_kind,
            self.truncation_order,
        )

    def scale(self, factor: Coefficient) -> ComplexSeries:
        """Multiply by a real factor."""
        return ComplexSeries(
            tuple(a * factor for a in self.re),
            tuple(b * factor for b in self.im),
            self.variable_kind,
            self.truncation_order,
        )

    def is_zero_through(self, order: int) -> bool:
        """All coefficients up to ``order`` vanish (exactly)."""
        return all(
            _is_zero(a) and _is_zero(b)
            for a, b in zip(self.re[: order + 1], self.im[: order + 1])
        )

    def max_abs(self, order: Optional[int] = None) -> float:
        """Largest coefficient magnitude up to ``order``."""
        stop = self.truncation_order if order is None else order
        return max((abs(c) for c in self.coeffs[: stop + 1]), default=0.0)

    def evaluate(self, x: float) -> complex:
        """Sum of the known terms at ``x`` (``1/x`` for inverse powers)."""
        inverse = self.variable_kind is VariableKind.POWER_OF_INVERSE_X
        variable = 1.0 / x if inverse else x
        result = 0j
        for coefficient in reversed(self.coeffs):
            result = result * variable + coefficient
        return result


def phase_breakpoints(
    phi: Polynomial, lo: float, hi: float, step: float, cap: int
) -> List[float]:
    """Split [lo, hi] so that phi is monotone with |Δφ| <= step on each piece.

    Points are the critical points of phi plus the level crossings
    ``phi(x) = k*step`` on every monotone piece, found with brentq.

    Raises:
        DomainError: More than ``cap`` pieces would be needed
    """
    if hi <= lo:
        return [lo, hi] if hi == lo else [hi, lo]
    if step <= 0:
        raise DomainError(f"Phase step must be positive, got {step}")

    anchors = [lo] + phi.critical_points(lo, hi) + [hi]
    values = [float(phi(a)) for a in anchors]
    estimate = sum(abs(b - a) for a, b in zip(values, values[1:])) / step
    if estimate + len(anchors) > cap:
        raise DomainError(
            f"Phase varies by {estimate * step:.3g} rad on [{lo}, {hi}], more than "
            f"{cap} pieces of {step} rad"
        )

    points = [lo]
    for (a, fa), (b, fb) in zip(zip(anchors, values), zip(anchors[1:], values[1:])):
        low, high = sorted((fa, fb))
        first = math.floor(low / step) + 1
        last = math.ceil(high / step) - 1
        levels = [k * step for k in range(first, last + 1)]
        if fa > fb:
            levels.reverse()
        for level in levels:
            points.append(
                float(brentq(lambda x, t=level: float(phi(x)) - t, a, b, xtol=1e-14))
            )
        points.append(b)

    _LOGGER.debug("Split [%s, %s] into %d phase pieces", lo, hi, len(points) - 1)
    return points
