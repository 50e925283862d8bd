"""Hölder regularity bounds and polynomial reproduction/generation degrees."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, NamedTuple

from .conversion import ConversionResult, convert
from .numeric import (
    LaurentPolynomial,
    SmallMatrix,
    format_rational,
    infinity_norm,
    spectral_radius,
    try_divide,
)
from .scheme import SubdivisionScheme, check_convergence_condition


class NotAnalyzable(ValueError):
    pass


class NotConvergent(ValueError):
    pass


class SmoothingFactorization(NamedTuple):
    order: int
    remainder: LaurentPolynomial


def smoothing_factor(arity: int) -> LaurentPolynomial:
    """``(1 + c + ... + c**(arity-1)) / arity``."""
    return LaurentPolynomial(0, tuple(Fraction(1, arity) for _ in range(arity)))


def smoothing_factorization(scheme: SubdivisionScheme) -> SmoothingFactorization:
    """Largest ``p`` with ``symbol = smoothing_factor**p * remainder`` exactly."""
    sigma = smoothing_factor(scheme.mask.arity)
    remainder = scheme.mask.symbol()
    order = 0
    while True:
        q = try_divide(remainder, sigma)
        if q is None:
            return SmoothingFactorization(order, remainder)
        remainder, order = q, order + 1


def transfer_matrices(remainder: LaurentPolynomial, arity: int) -> list[SmallMatrix]:
    """The ``t + 1`` matrices ``E_q[i][j] = e[t + i - arity*j + q]`` (1-based ``i, j``).

    ``e`` are the remainder coefficients after moving the lowest degree to
    zero, ``t`` is their degree span, and out-of-range ``e`` read as zero.
    """
    if remainder.is_zero():
        raise ValueError("remainder must be nonzero")
    e = remainder.coefficients
    t = len(e) - 1
    if t < 1:
        raise ValueError("transfer matrices need a remainder of degree span >= 1")

    def coeff(k: int) -> Fraction:
        return e[k] if 0 <= k <= t else Fraction(0)

    return [
        SmallMatrix(
            tuple(
                tuple(coeff(t + i - arity * j + q) for j in range(1, t + 1))
                for i in range(1, t + 1)
            )
        )
        for q in range(t + 1)
    ]


@dataclass(frozen=True)
class RegularityReport:
    arity: int
    order: int
    remainder: LaurentPolynomial
    remainder_coeffs: tuple[Fraction, ...]
    matrices: tuple[SmallMatrix, ...]
    spectral_radii: tuple[float, ...]
    inf_norms: tuple[Fraction, ...]
    xi_lower: float
    xi_upper: float
    xi_mid: float
    r_lower: float
    r_upper: float
    r_mid: float
    depth: int = 1

    @property
    def xi_upper_exact(self) -> Fraction:
        """The upper bound on the joint spectral radius as an exact rational (depth 1)."""
        if not self.inf_norms:
            return abs(self.remainder_coeffs[0])
        return max(self.inf_norms)


def _regularity(order: int, arity: int, xi: float) -> float:
    if xi <= 0:
        return math.inf
    return order - math.log(xi, arity)


def _product(mats: tuple[SmallMatrix, ...]) -> SmallMatrix:
    out = mats[0]
    for m in mats[1:]:
        out = out @ m
    return out


def holder_regularity(
    scheme: SubdivisionScheme, depth: int = 1, tol: float = 1e-12
) -> RegularityReport:
    """Regularity ``r = p - log_s(xi)`` with ``xi`` bracketed by spectral radii and norms.

    ``xi`` lies between the largest spectral radius and the largest infinity
    norm over all products of ``depth`` transfer matrices (each taken to the
    power ``1/depth``); the midpoint of that bracket gives ``r_mid``.
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    s = scheme.mask.arity
    order, remainder = smoothing_factorization(scheme)
    nu = remainder.normalized()
    e = nu.coefficients
    if len(e) == 1:
        xi = float(abs(e[0]))
        if xi == 0:
            raise NotAnalyzable("remainder vanishes")
        r = _regularity(order, s, xi)
        return RegularityReport(
            s, order, nu, e, (), (), (), xi, xi, xi, r, r, r, depth
        )
    mats = tuple(transfer_matrices(nu, s))
    if depth == 1:
        products = mats
    else:
        products = tuple(_product(c) for c in itertools.product(mats, repeat=depth))
    radii = tuple(spectral_radius(m, tol) for m in products)
    norms = tuple(infinity_norm(m) for m in products)
    xi_lower = max(radii) ** (1.0 / depth)
    xi_upper = float(max(norms)) ** (1.0 / depth)
    if xi_upper == 0:
        raise NotAnalyzable("all transfer matrices vanish")
    xi_lower = min(xi_lower, xi_upper)
    xi_mid = (xi_lower + xi_upper) / 2
    return RegularityReport(
        arity=s,
        order=order,
        remainder=nu,
        remainder_coeffs=e,
        matrices=mats,
        spectral_radii=radii,
        inf_norms=norms,
        xi_lower=xi_lower,
        xi_upper=xi_upper,
        xi_mid=xi_mid,
        r_lower=_regularity(order, s, xi_upper),
        r_upper=_regularity(order, s, xi_lower),
        r_mid=_regularity(order, s, xi_mid),
        depth=depth,
    )


# ---------------------------------------------------------------------------
# Polynomial generation and reproduction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrecisionReport:
    degree_of_precision: int
    degree_of_generation: int
    shift: Fraction | None


def degree_of_generation(scheme: SubdivisionScheme) -> int:
    return smoothing_factorization(scheme).order - 1


def _refine_window(scheme: SubdivisionScheme, data: list[Fraction]) -> dict[int, Fraction]:
    """Refined values whose every contributing source index lies inside ``data``."""
    mask = scheme.mask
    r = mask.arity
    w = len(data)
    out = {}
    for i in range(mask.first_index, r * (w - 1) + mask.last_index + 1):
        # source j contributes when first_index <= i - r*j <= last_index
        j_lo = -((mask.last_index - i) // r)
        j_hi = (i - mask.first_index) // r
        js = [j for j in range(j_lo, j_hi + 1) if mask.coefficient(i - r * j) != 0]
        if js and js[0] >= 0 and js[-1] < w:
            out[i] = sum((mask.coefficient(i - r * j) * data[j] for j in js), Fraction(0))
    return out


def _window(scheme: SubdivisionScheme, degree: int) -> int:
    return 2 * scheme.mask.width + degree + 2


def degree_of_precision(scheme: SubdivisionScheme, max_degree: int = 16) -> PrecisionReport:
    """Largest ``d <= max_degree`` such that samples of ``x**d`` refine to samples of ``x**d``.

    Input samples sit at the integers; refined samples at ``(i + shift)/r``
    where the shift is read off from how linear data refines.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    if not check_convergence_condition(scheme).passed:
        raise NotConvergent(f"{scheme.name or 'scheme'} fails the coset-sum condition")
    dog = degree_of_generation(scheme)
    r = scheme.mask.arity
    if max_degree == 0:
        return PrecisionReport(0, dog, None)
    w = _window(scheme, 1)
    linear = _refine_window(scheme, [Fraction(j) for j in range(w)])
    shifts = {v * r - i for i, v in linear.items()}
    if len(shifts) != 1:
        return PrecisionReport(0, dog, None)
    shift = shifts.pop()
    best = 1
    for d in range(2, max_degree + 1):
        w = _window(scheme, d)
        refined = _refine_window(scheme, [Fraction(j) ** d for j in range(w)])
        if any(v != (Fraction(i) + shift) ** d / r**d for i, v in refined.items()):
            break
        best = d
    return PrecisionReport(best, dog, shift)


# ---------------------------------------------------------------------------
# Binary / quaternary comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegularityPair:
    binary: RegularityReport
    quaternary: RegularityReport
    conversion: ConversionResult

    @property
    def delta_mid(self) -> float:
        return self.quaternary.r_mid - self.binary.r_mid

    @property
    def delta_lower(self) -> float:
        return self.quaternary.r_lower - self.binary.r_lower

    @property
    def delta_upper(self) -> float:
        return self.quaternary.r_upper - self.binary.r_upper


def regularity_pair_report(binary: SubdivisionScheme, depth: int = 1) -> RegularityPair:
    result = convert(binary)
    return RegularityPair(
        holder_regularity(binary, depth), holder_regularity(result.quaternary, depth), result
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def format_real(x: float, digits: int = 12) -> float | str:
    """Round to ``digits`` significant digits; non-finite values become strings."""
    if not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    return float(f"{x:.{digits}g}")


def regularity_to_dict(report: RegularityReport) -> dict[str, Any]:
    return {
        "arity": report.arity,
        "smoothing_order": report.order,
        "remainder_lowest_degree": report.remainder.lowest_degree,
        "remainder_coefficients": [format_rational(c) for c in report.remainder_coeffs],
        "depth": report.depth,
        "spectral_radii": [format_real(x) for x in report.spectral_radii],
        "inf_norms": [format_rational(x) for x in report.inf_norms],
        "xi_lower": format_real(report.xi_lower),
        "xi_upper": format_real(report.xi_upper),
        "xi_upper_exact": format_rational(report.xi_upper_exact) if report.depth == 1 else None,
        "xi_mid": format_real(report.xi_mid),
        "r_lower": format_real(report.r_lower),
        "r_mid": format_real(report.r_mid),
        "r_upper": format_real(report.r_upper),
    }


def precision_to_dict(report: PrecisionReport) -> dict[str, Any]:
    return {
        "degree_of_precision": report.degree_of_precision,
        "degree_of_generation": report.degree_of_generation,
        "shift": None if report.shift is None else format_rational(report.shift),
    }


def pair_to_dict(pair: RegularityPair) -> dict[str, Any]:
    return {
        "binary": regularity_to_dict(pair.binary),
        "quaternary": regularity_to_dict(pair.quaternary),
        "quaternary_rule_widths": list(pair.conversion.rule_widths),
        "delta_r_mid": format_real(pair.delta_mid),
    }
