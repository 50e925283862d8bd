"""Exact scalars, Laurent polynomials and small dense matrices.

Every scheme coefficient is a :class:`fractions.Fraction`.  Floating point is
only produced by :func:`spectral_radius`; everything else stays exact.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import mpmath
import numpy as np

Rational = Fraction

_RATIONAL_RE = re.compile(r"(-?\d+)(?:/(\d+))?")
_DECIMAL_RE = re.compile(r"-?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")


def parse_rational(token: str) -> Fraction:
    """Parse a ``"p/q"`` (or integer ``"p"``) token.

    The sign must sit on the numerator, the denominator must be positive and
    no whitespace is tolerated anywhere in the token.
    """
    if not isinstance(token, str):
        raise ValueError(f"rational token must be a string, got {token!r}")
    match = _RATIONAL_RE.fullmatch(token)
    if match is None:
        raise ValueError(f"malformed rational token {token!r}")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {token!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def parse_number(token: str) -> Fraction:
    """Parse either a ``"p/q"`` token or a decimal literal, exactly."""
    token = token.strip()
    if "/" in token or _RATIONAL_RE.fullmatch(token):
        return parse_rational(token)
    if _DECIMAL_RE.fullmatch(token):
        return Fraction(token)
    raise ValueError(f"malformed number {token!r}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LaurentPolynomial:
    """``sum(coefficients[i] * c**(lowest_degree + i))`` in trimmed form.

    The constructor trims zeros at both ends, so equal polynomials compare
    equal structurally.  The zero polynomial has no coefficients and
    ``lowest_degree == 0``.
    """

    lowest_degree: int
    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        coeffs = [Fraction(c) for c in self.coefficients]
        low = int(self.lowest_degree)
        start = 0
        while start < len(coeffs) and coeffs[start] == 0:
            start += 1
        end = len(coeffs)
        while end > start and coeffs[end - 1] == 0:
            end -= 1
        if start == end:
            low, coeffs = 0, []
        else:
            low, coeffs = low + start, coeffs[start:end]
        object.__setattr__(self, "lowest_degree", low)
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def from_coefficients(
        cls, coefficients: Iterable, lowest_degree: int = 0
    ) -> LaurentPolynomial:
        return cls(lowest_degree, tuple(Fraction(c) for c in coefficients))

    @classmethod
    def from_mapping(cls, terms: Mapping[int, Fraction]) -> LaurentPolynomial:
        terms = {k: v for k, v in terms.items() if v != 0}
        if not terms:
            return cls(0, ())
        low, high = min(terms), max(terms)
        return cls(low, tuple(terms.get(k, Fraction(0)) for k in range(low, high + 1)))

    @classmethod
    def monomial(cls, degree: int, coefficient=1) -> LaurentPolynomial:
        return cls(degree, (Fraction(coefficient),))

    @classmethod
    def zero(cls) -> LaurentPolynomial:
        return cls(0, ())

    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def highest_degree(self) -> int:
        return self.lowest_degree + len(self.coefficients) - 1

    @property
    def degree_span(self) -> int:
        if self.is_zero():
            raise ValueError("degree span of the zero polynomial is undefined")
        return len(self.coefficients) - 1

    def coefficient(self, degree: int) -> Fraction:
        i = degree - self.lowest_degree
        if 0 <= i < len(self.coefficients):
            return self.coefficients[i]
        return Fraction(0)

    def terms(self) -> dict[int, Fraction]:
        return {
            self.lowest_degree + i: c for i, c in enumerate(self.coefficients) if c != 0
        }

    def shifted(self, k: int) -> LaurentPolynomial:
        """Multiply by ``c**k``."""
        return LaurentPolynomial(self.lowest_degree + k, self.coefficients)

    def normalized(self) -> LaurentPolynomial:
        """The same coefficients with the lowest degree moved to zero."""
        return LaurentPolynomial(0, self.coefficients)

    def __add__(self, other: LaurentPolynomial) -> LaurentPolynomial:
        terms = self.terms()
        for k, v in other.terms().items():
            terms[k] = terms.get(k, Fraction(0)) + v
        return LaurentPolynomial.from_mapping(terms)

    def __neg__(self) -> LaurentPolynomial:
        return LaurentPolynomial(self.lowest_degree, tuple(-c for c in self.coefficients))

    def __sub__(self, other: LaurentPolynomial) -> LaurentPolynomial:
        return self + (-other)

    def __mul__(self, other) -> LaurentPolynomial:
        if isinstance(other, LaurentPolynomial):
            return laurent_multiply(self, other)
        factor = Fraction(other)
        return LaurentPolynomial(self.lowest_degree, tuple(c * factor for c in self.coefficients))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPolynomial:
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = LaurentPolynomial.monomial(0)
        for _ in range(k):
            result = result * self
        return result

    def __call__(self, x):
        return sum(c * x ** (self.lowest_degree + i) for i, c in enumerate(self.coefficients))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k, c in self.terms().items():
            mono = "" if k == 0 else ("c" if k == 1 else f"c^{k}")
            coef = str(c)
            if mono and c == 1:
                coef = ""
            elif mono and c == -1:
                coef = "-"
            elif mono:
                coef += "*"
            parts.append(coef + mono if mono else coef)
        return " + ".join(parts).replace("+ -", "- ")


def laurent_multiply(a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial:
    if a.is_zero() or b.is_zero():
        return LaurentPolynomial.zero()
    out = [Fraction(0)] * (len(a.coefficients) + len(b.coefficients) - 1)
    for i, x in enumerate(a.coefficients):
        if x == 0:
            continue
        for j, y in enumerate(b.coefficients):
            out[i + j] += x * y
    return LaurentPolynomial(a.lowest_degree + b.lowest_degree, tuple(out))


def laurent_substitute_power(a: LaurentPolynomial, k: int) -> LaurentPolynomial:
    """Return ``a(c**k)``."""
    if k < 1:
        raise ValueError(f"power must be >= 1, got {k}")
    return LaurentPolynomial.from_mapping({d * k: v for d, v in a.terms().items()})


def _poly_divmod(num: list[Fraction], den: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    # coefficient lists are low -> high degree; den[-1] != 0
    rem = list(num)
    if len(rem) < len(den):
        return [], rem
    quot = [Fraction(0)] * (len(rem) - len(den) + 1)
    lead = den[-1]
    for d in range(len(quot) - 1, -1, -1):
        c = rem[d + len(den) - 1] / lead
        quot[d] = c
        if c:
            for i, v in enumerate(den):
                rem[d + i] -= c * v
    rem = rem[: len(den) - 1]
    while rem and rem[-1] == 0:
        rem.pop()
    return quot, rem


def try_divide(a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial | None:
    """Exact Laurent quotient ``a / b``, or ``None`` when ``b`` does not divide ``a``.

    Monomials are units in the Laurent ring, so only the trimmed polynomial
    parts take part in the long division.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if a.is_zero():
        return LaurentPolynomial.zero()
    quot, rem = _poly_divmod(list(a.coefficients), list(b.coefficients))
    if rem or not quot:
        return None
    return LaurentPolynomial(a.lowest_degree - b.lowest_degree, tuple(quot))


# ---------------------------------------------------------------------------
# Small dense matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmallMatrix:
    """Square matrix of exact rationals; :meth:`entry` is 1-based."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.rows)
        if not rows or any(len(row) != len(rows) for row in rows):
            raise ValueError("SmallMatrix must be square and non-empty")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> SmallMatrix:
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def identity(cls, size: int) -> SmallMatrix:
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(size)) for i in range(size)))

    @property
    def size(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> Fraction:
        if not (1 <= i <= self.size and 1 <= j <= self.size):
            raise IndexError(f"entry ({i}, {j}) outside a {self.size}x{self.size} matrix")
        return self.rows[i - 1][j - 1]

    def __matmul__(self, other: SmallMatrix) -> SmallMatrix:
        if other.size != self.size:
            raise ValueError("size mismatch")
        cols = list(zip(*other.rows))
        return SmallMatrix(
            tuple(tuple(sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols) for row in self.rows)
        )

    def to_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.rows])

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.rows)


def infinity_norm(m: SmallMatrix) -> Fraction:
    """Maximum absolute row sum, exactly."""
    return max(sum((abs(x) for x in row), Fraction(0)) for row in m.rows)


def characteristic_polynomial(m: SmallMatrix) -> LaurentPolynomial:
    """``det(x I - m)`` as an exact polynomial in ``x``.

    Reduces to upper Hessenberg form by rational similarity transforms and
    then runs the usual Hessenberg determinant recurrence.
    """
    n = m.size
    h = [list(row) for row in m.rows]
    for k in range(n - 2):
        pivot = next((i for i in range(k + 1, n) if h[i][k] != 0), None)
        if pivot is None:
            continue
        if pivot != k + 1:
            h[pivot], h[k + 1] = h[k + 1], h[pivot]
            for row in h:
                row[pivot], row[k + 1] = row[k + 1], row[pivot]
        hk = h[k + 1]
        for i in range(k + 2, n):
            if h[i][k] == 0:
                continue
            f = h[i][k] / hk[k]
            hi = h[i]
            for j in range(k, n):
                if hk[j]:
                    hi[j] -= f * hk[j]
            for row in h:
                if row[i]:
                    row[k + 1] += f * row[i]

    # polys[r] = characteristic polynomial of the leading r x r block
    polys: list[list[Fraction]] = [[Fraction(1)]]
    for r in range(1, n + 1):
        prev = polys[-1]
        new = [Fraction(0)] + prev
        diag = h[r - 1][r - 1]
        if diag:
            for i, c in enumerate(prev):
                new[i] -= diag * c
        prod = Fraction(1)
        for i in range(1, r):
            prod *= h[r - i][r - i - 1]
            if prod == 0:
                break
            c = prod * h[r - i - 1][r - 1]
            if c:
                for d, v in enumerate(polys[r - i - 1]):
                    new[d] -= c * v
        polys.append(new)
    return LaurentPolynomial(0, tuple(polys[-1]))


def _poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    return [x / a[-1] for x in a]


def _square_free_part(p: list[Fraction]) -> list[Fraction]:
    deriv = [i * c for i, c in enumerate(p)][1:]
    if not deriv:
        return p
    g = _poly_gcd(p, deriv)
    if len(g) == 1:
        return p
    quot, _ = _poly_divmod(p, g)
    return quot


def _polished_roots(p: list[Fraction], tol: float) -> list:
    """All roots of the square-free polynomial ``p``, each accurate well beyond ``tol``."""
    degree = len(p) - 1
    digits = max(40, int(-math.log10(tol)) + 25)
    with mpmath.workdps(digits):
        eps = mpmath.mpf(10) ** (10 - digits)
        coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(p)]
        lead = coeffs[0]
        coeffs = [c / lead for c in coeffs]

        def fallback() -> list:
            return list(mpmath.polyroots(coeffs, maxsteps=400, extraprec=2 * digits))

        deriv = [c * (degree - i) for i, c in enumerate(coeffs[:-1])]
        seeds = np.roots([float(c) for c in coeffs])
        if len(seeds) != degree or not np.all(np.isfinite(seeds)):
            return fallback()
        roots = []
        for seed in seeds:
            z = mpmath.mpc(complex(seed))
            for _ in range(100):
                dz = mpmath.polyval(coeffs, z) / mpmath.polyval(deriv, z)
                z -= dz
                if abs(dz) <= eps * max(abs(z), eps):
                    break
            else:
                return fallback()
            roots.append(z)
        # Distinct seeds may be drawn to one root; then some root was missed.
        for i in range(len(roots)):
            for j in range(i):
                if abs(roots[i] - roots[j]) <= 1000 * eps * max(abs(roots[i]), eps):
                    return fallback()
        return roots


def spectral_radius(m: SmallMatrix, tol: float = 1e-12) -> float:
    """Largest eigenvalue modulus of ``m`` to absolute accuracy ``tol``.

    Works on the exact characteristic polynomial: the zero-root factor is
    split off and repeated roots are removed by an exact gcd with the
    derivative, so defective and triangular matrices cost nothing extra.
    """
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    char = characteristic_polynomial(m)
    # trimming already dropped the x**k factor of zero eigenvalues
    p = list(char.coefficients)
    if len(p) == 1:
        return 0.0
    p = _square_free_part(p)
    if len(p) == 1:
        return 0.0
    if len(p) == 2:
        return float(abs(p[0] / p[1]))
    return float(max(abs(z) for z in _polished_roots(p, tol)))
