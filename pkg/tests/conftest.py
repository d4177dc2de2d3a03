"""Fixtures for oscint tests."""
from __future__ import annotations

from fractions import Fraction
from typing import List, Tuple

import numpy as np
import pytest

from oscint.config import EvalConfig
from oscint.const import ENV_THREADS
from oscint.poly_core import Polynomial, parse_polynomial


@pytest.fixture(autouse=True)
def thread_cap(monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep the row pool small and deterministic."""
    monkeypatch.setenv(ENV_THREADS, "2")


@pytest.fixture
def default_config() -> EvalConfig:
    """Default evaluation settings."""
    return EvalConfig()


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for randomised problems."""
    return np.random.default_rng(20240611)


@pytest.fixture
def quartic_phase() -> Polynomial:
    """phi = x + x^4."""
    return parse_polynomial("x+x^4")


@pytest.fixture
def cubic_phase() -> Polynomial:
    """phi = x + x^3."""
    return parse_polynomial("x+x^3")


@pytest.fixture
def random_rationals(rng: np.random.Generator) -> List[Tuple[Polynomial, Polynomial]]:
    """Twenty (p, phi) pairs with small rational coefficients."""
    pairs = []
    for _ in range(20):
        degree = int(rng.integers(2, 5))
        phi_coeffs = [Fraction(0)] + [
            Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
            for _ in range(degree)
        ]
        if phi_coeffs[-1] == 0:
            phi_coeffs[-1] = Fraction(1)
        p_coeffs = [
            Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
            for _ in range(int(rng.integers(1, 4)))
        ]
        if all(c == 0 for c in p_coeffs):
            p_coeffs[0] = Fraction(1)
        pairs.append((Polynomial(tuple(p_coeffs)), Polynomial(tuple(phi_coeffs))))
    return pairs
