from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from subdivkit.catalog import load_catalog
from subdivkit.numeric import LaurentPolynomial
from subdivkit.scheme import SubdivisionScheme, dual_binary_mask

small_fractions = st.fractions(min_value=-20, max_value=20, max_denominator=50)
nonzero_fractions = small_fractions.filter(lambda x: x != 0)


@st.composite
def laurent_polynomials(draw, max_terms: int = 7, nonzero: bool = False) -> LaurentPolynomial:
    low = draw(st.integers(min_value=-6, max_value=6))
    coeffs = draw(st.lists(small_fractions, min_size=0 if not nonzero else 1, max_size=max_terms))
    if nonzero:
        coeffs[0] = draw(nonzero_fractions)
    return LaurentPolynomial(low, tuple(coeffs))


def random_rule_weights(rng: random.Random, count: int, bound: int = 10**6) -> list[Fraction]:
    """``count`` random nonzero rationals with numerators and denominators up to ``bound``."""
    out = []
    while len(out) < count:
        num = rng.randint(-bound, bound)
        if num:
            out.append(Fraction(num, rng.randint(1, bound)))
    return out


def random_dual_scheme(rng: random.Random, points: int, affine: bool = False) -> SubdivisionScheme:
    """Random dual ``points``-point binary scheme; ``affine`` makes each rule sum to one."""
    while True:
        weights = random_rule_weights(rng, points)
        if affine:
            weights[-1] = 1 - sum(weights[:-1])
        if weights[-1] != 0:
            return SubdivisionScheme(dual_binary_mask(weights), f"random-{points}pt")


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()
