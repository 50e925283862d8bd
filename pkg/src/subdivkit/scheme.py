"""Masks, stencils and subdivision schemes of arbitrary arity.

A scheme of arity ``r`` maps a polygon ``g`` to a finer one by

    g'[i] = sum_j mask[i - r*j] * g[j]

so output index ``i = r*phi + eta`` is an affine combination of the source
points ``g[phi + o]`` with weights ``mask[eta - r*o]``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable

from .numeric import LaurentPolynomial, format_rational, parse_rational


class MaskFormatError(ValueError):
    """A mask document could not be parsed."""


@dataclass(frozen=True)
class Mask:
    """Coefficient ``coefficients[i]`` sits at mask index ``first_index + i``."""

    arity: int
    first_index: int
    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.arity, int) or self.arity < 2:
            raise ValueError(f"arity must be an integer >= 2, got {self.arity!r}")
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("mask needs at least one coefficient")
        if coeffs[0] == 0 or coeffs[-1] == 0:
            raise ValueError("first and last mask coefficients must be nonzero")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_symbol(cls, symbol: LaurentPolynomial, arity: int) -> Mask:
        if symbol.is_zero():
            raise ValueError("the zero symbol does not define a mask")
        return cls(arity, symbol.lowest_degree, symbol.coefficients)

    @classmethod
    def from_mapping(cls, arity: int, values: dict[int, Fraction]) -> Mask:
        return cls.from_symbol(LaurentPolynomial.from_mapping(values), arity)

    @property
    def last_index(self) -> int:
        return self.first_index + len(self.coefficients) - 1

    @property
    def width(self) -> int:
        return len(self.coefficients)

    def coefficient(self, k: int) -> Fraction:
        i = k - self.first_index
        if 0 <= i < len(self.coefficients):
            return self.coefficients[i]
        return Fraction(0)

    def items(self) -> Iterable[tuple[int, Fraction]]:
        for i, c in enumerate(self.coefficients):
            yield self.first_index + i, c

    def symbol(self) -> LaurentPolynomial:
        return LaurentPolynomial(self.first_index, self.coefficients)

    def is_palindromic(self) -> bool:
        return self.coefficients == self.coefficients[::-1]


@dataclass(frozen=True)
class Stencil:
    """Weights producing the refined points of one phase.

    ``g'[r*phi + phase] = sum(w * g[phi + o] for o, w in zip(offsets, weights))``
    """

    phase: int
    offsets: tuple[int, ...]
    weights: tuple[Fraction, ...]

    @property
    def width(self) -> int:
        return len(self.weights)

    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def mask_indices(self, arity: int) -> tuple[int, ...]:
        return tuple(self.phase - arity * o for o in self.offsets)


@dataclass(frozen=True)
class SubdivisionScheme:
    mask: Mask
    name: str = ""
    provenance: str = ""

    @property
    def arity(self) -> int:
        return self.mask.arity


@dataclass(frozen=True)
class ConvergenceCheck:
    sums: dict[int, Fraction] = field(hash=False)
    passed: bool


def phases(arity: int) -> range:
    """Phase labels centred on zero: ``(-1, 0)`` for binary, ``(-2, ..., 1)`` for quaternary."""
    return range(-(arity // 2), arity - arity // 2)


def phase_of(index: int, arity: int) -> tuple[int, int]:
    """Split a refined index into ``(phi, phase)`` with ``index = arity*phi + phase``."""
    half = arity // 2
    phase = (index + half) % arity - half
    return (index - phase) // arity, phase


def stencils(scheme: SubdivisionScheme | Mask) -> list[Stencil]:
    """One stencil per phase; together they partition the mask coefficients."""
    mask = scheme.mask if isinstance(scheme, SubdivisionScheme) else scheme
    r = mask.arity
    grouped: dict[int, list[tuple[int, Fraction]]] = {eta: [] for eta in phases(r)}
    for k, c in mask.items():
        if c == 0:
            continue
        phi, eta = phase_of(k, r)
        # k = eta - r*o  with  o = -phi
        grouped[eta].append((-phi, c))
    result = []
    for eta, pairs in grouped.items():
        pairs.sort()
        result.append(
            Stencil(eta, tuple(o for o, _ in pairs), tuple(w for _, w in pairs))
        )
    return result


def mask_from_stencils(arity: int, rules: Iterable[Stencil]) -> Mask:
    values: dict[int, Fraction] = {}
    for st in rules:
        for k, w in zip(st.mask_indices(arity), st.weights):
            values[k] = values.get(k, Fraction(0)) + w
    return Mask.from_mapping(arity, values)


def dual_binary_mask(weights: Iterable) -> Mask:
    """Binary mask of a dual ``2n``-point scheme from its ``2n`` rule weights.

    ``weights`` are the coefficients of one binary rule in increasing index
    order; the other rule uses them reversed.  The resulting mask spans
    indices ``-2n .. 2n-1`` and is symmetric about ``-1/2``.
    """
    w = [Fraction(x) for x in weights]
    if not w or len(w) % 2:
        raise ValueError("a dual binary scheme needs an even, nonzero number of weights")
    half = len(w) // 2
    values: dict[int, Fraction] = {}
    for k in range(-2 * half, 2 * half):
        # weight j (0-based) carries the even label 2*(j - half + 1)
        label = k + 2 if k % 2 == 0 else 1 - k
        values[k] = w[label // 2 + half - 1]
    return Mask.from_mapping(2, values)


def check_convergence_condition(scheme: SubdivisionScheme | Mask) -> ConvergenceCheck:
    """Every phase's weights must sum to one for the scheme to have a chance to converge."""
    sums = {st.phase: st.total() for st in stencils(scheme)}
    return ConvergenceCheck(sums, all(v == 1 for v in sums.values()))


# ---------------------------------------------------------------------------
# JSON mask files
# ---------------------------------------------------------------------------


def mask_to_dict(scheme: SubdivisionScheme) -> dict[str, Any]:
    return {
        "name": scheme.name,
        "arity": scheme.mask.arity,
        "first_index": scheme.mask.first_index,
        "coefficients": [format_rational(c) for c in scheme.mask.coefficients],
    }


def mask_from_dict(doc: Any, provenance: str = "") -> SubdivisionScheme:
    if not isinstance(doc, dict):
        raise MaskFormatError("mask document must be a JSON object")
    missing = {"name", "arity", "first_index", "coefficients"} - doc.keys()
    if missing:
        raise MaskFormatError(f"mask document lacks {', '.join(sorted(missing))}")
    name, arity, first, coeffs = doc["name"], doc["arity"], doc["first_index"], doc["coefficients"]
    if not isinstance(name, str):
        raise MaskFormatError("name must be a string")
    for key, value in (("arity", arity), ("first_index", first)):
        if not isinstance(value, int) or isinstance(value, bool):
            raise MaskFormatError(f"{key} must be an integer")
    if not isinstance(coeffs, list):
        raise MaskFormatError("coefficients must be a list of 'p/q' strings")
    try:
        values = [parse_rational(tok) for tok in coeffs]
        mask = Mask(arity, first, tuple(values))
    except ValueError as exc:
        raise MaskFormatError(str(exc)) from exc
    return SubdivisionScheme(mask, name, provenance)


def dumps_mask(scheme: SubdivisionScheme) -> str:
    return json.dumps(mask_to_dict(scheme), indent=2) + "\n"


def loads_mask(text: str, provenance: str = "") -> SubdivisionScheme:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MaskFormatError(f"invalid JSON: {exc}") from exc
    return mask_from_dict(doc, provenance)


def load_mask(path: str | Path) -> SubdivisionScheme:
    path = Path(path)
    return loads_mask(path.read_text(encoding="utf-8"), provenance=f"file {path.name}")


def save_mask(scheme: SubdivisionScheme, path: str | Path) -> None:
    Path(path).write_text(dumps_mask(scheme), encoding="utf-8")
