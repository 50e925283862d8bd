"""Binary to quaternary conversion of dual even-point schemes.

Two binary refinement steps compose into one quaternary step.  The closed
form double sums below give the four quaternary rules directly from the
binary rule weights; :func:`convert_via_symbol` does the same through the
symbol product ``A(c) * A(c**2)`` and serves as an independent check.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .numeric import laurent_multiply, laurent_substitute_power
from .scheme import Mask, Stencil, SubdivisionScheme, phases, stencils


class ConversionError(ValueError):
    """Base class for masks the closed-form conversion cannot handle."""


class WrongArity(ConversionError):
    pass


class WrongParity(ConversionError):
    pass


class NotDual(ConversionError):
    """The binary mask is not the symmetric mask of a dual scheme."""


@dataclass(frozen=True)
class ConversionResult:
    quaternary: SubdivisionScheme
    parity: str  # "even" or "odd"
    m: int
    rule_widths: tuple[int, int, int, int]
    rules: tuple[Stencil, ...]

    @property
    def points(self) -> int:
        """Number of binary rule weights, i.e. the ``2n`` of a ``2n``-point scheme."""
        return 4 * self.m if self.parity == "even" else 4 * self.m + 2


def _require_binary(binary: SubdivisionScheme) -> None:
    if binary.mask.arity != 2:
        raise WrongArity(f"expected a binary mask, got arity {binary.mask.arity}")


def rule_weights(binary: SubdivisionScheme) -> list[Fraction]:
    """The ``2n`` weights of one binary rule, in increasing index order.

    The mask must have ``4n`` coefficients and be symmetric, as every dual
    ``2n``-point scheme is.
    """
    _require_binary(binary)
    coeffs = binary.mask.coefficients
    if len(coeffs) % 4:
        raise WrongParity(
            f"a dual even-point mask has a multiple of 4 coefficients, got {len(coeffs)}"
        )
    if coeffs != coeffs[::-1]:
        raise NotDual("binary mask is not symmetric")
    return list(coeffs[0::2])


def _alignment(binary: SubdivisionScheme, n: int) -> int:
    # The formulas assume the mask starts at -2n.  A mask shifted by s has
    # symbol c**s A(c), so the composed symbol moves by 3s.
    return 3 * (binary.mask.first_index + 2 * n)


def _rules_to_mask(rules: dict[int, dict[int, Fraction]], shift: int) -> Mask:
    values: dict[int, Fraction] = {}
    for eta, rule in rules.items():
        for offset, w in rule.items():
            k = eta - 4 * offset + shift
            values[k] = values.get(k, Fraction(0)) + w
    return Mask.from_mapping(4, values)


def _even_rules(beta: Callable[[int], Fraction], m: int) -> dict[int, dict[int, Fraction]]:
    rules: dict[int, dict[int, Fraction]] = {eta: {} for eta in phases(4)}

    def add(eta: int, offset: int, value: Fraction) -> None:
        rules[eta][offset] = rules[eta].get(offset, Fraction(0)) + value

    for lam in range(-m + 1, m + 1):
        for al in range(-2 * m, 2 * m):
            o = al + lam
            add(-2, o, beta(4 - 4 * lam) * beta(-2 * al) + beta(2 - 4 * lam) * beta(2 + 2 * al))
            add(-1, o, beta(4 * lam - 2) * beta(-2 * al) + beta(4 * lam) * beta(2 + 2 * al))
            add(0, o, beta(4 - 4 * lam) * beta(2 + 2 * al))
            add(0, o + 1, beta(2 - 4 * lam) * beta(-2 * al))
            add(1, o, beta(4 * lam - 2) * beta(2 + 2 * al))
            add(1, o + 1, beta(4 * lam) * beta(-2 * al))
    return rules


def _odd_rules(beta: Callable[[int], Fraction], m: int) -> dict[int, dict[int, Fraction]]:
    rules: dict[int, dict[int, Fraction]] = {eta: {} for eta in phases(4)}

    def add(eta: int, offset: int, value: Fraction) -> None:
        rules[eta][offset] = rules[eta].get(offset, Fraction(0)) + value

    for lam in range(-m, m + 1):
        for al in range(-2 * m, 2 * m + 2):
            o = al + lam
            add(-2, o - 1, beta(2 - 4 * lam) * beta(2 * al))
            add(-2, o, beta(-4 * lam) * beta(2 - 2 * al))
            add(-1, o - 1, beta(4 * lam) * beta(2 * al))
            add(-1, o, beta(2 + 4 * lam) * beta(2 - 2 * al))
            add(0, o, beta(2 - 4 * lam) * beta(2 - 2 * al) + beta(-4 * lam) * beta(2 * al))
            add(1, o, beta(4 * lam) * beta(2 - 2 * al) + beta(2 + 4 * lam) * beta(2 * al))
    return rules


def _labelled(weights: list[Fraction]) -> Callable[[int], Fraction]:
    # weights[j] is the rule weight with even label 2*(j - n + 1)
    n = len(weights) // 2
    table = {2 * (j - n + 1): w for j, w in enumerate(weights)}
    return lambda label: table.get(label, Fraction(0))


def _result(
    binary: SubdivisionScheme, mask: Mask, parity: str, m: int, provenance: str
) -> ConversionResult:
    rules = tuple(stencils(mask))
    widest = max(st.width for st in rules)
    name = f"quat-{widest}pt-from-{binary.name}" if binary.name else f"quat-{widest}pt"
    scheme = SubdivisionScheme(mask, name, provenance)
    widths = tuple(st.width for st in rules)
    return ConversionResult(scheme, parity, m, widths, rules)  # type: ignore[arg-type]


def _check_m(m: int | None, inferred: int, parity: str) -> int:
    if m is not None and m != inferred:
        raise WrongParity(f"mask implies m={inferred} for the {parity} case, not m={m}")
    return inferred


def convert_even(binary: SubdivisionScheme, m: int | None = None) -> ConversionResult:
    """Quaternary scheme of a dual ``4m``-point binary scheme (``m >= 1``)."""
    weights = rule_weights(binary)
    n = len(weights) // 2
    if n % 2:
        raise WrongParity(f"{2 * n}-point scheme: the even case needs 4m rule weights")
    m = _check_m(m, n // 2, "even")
    rules = _even_rules(_labelled(weights), m)
    mask = _rules_to_mask(rules, _alignment(binary, n))
    return _result(binary, mask, "even", m, "closed-form conversion, even case")


def convert_odd(binary: SubdivisionScheme, m: int | None = None) -> ConversionResult:
    """Quaternary scheme of a dual ``(4m+2)``-point binary scheme (``m >= 0``)."""
    weights = rule_weights(binary)
    n = len(weights) // 2
    if n % 2 == 0:
        raise WrongParity(f"{2 * n}-point scheme: the odd case needs 4m+2 rule weights")
    m = _check_m(m, (n - 1) // 2, "odd")
    rules = _odd_rules(_labelled(weights), m)
    mask = _rules_to_mask(rules, _alignment(binary, n))
    return _result(binary, mask, "odd", m, "closed-form conversion, odd case")


def convert(binary: SubdivisionScheme) -> ConversionResult:
    """Dispatch to :func:`convert_even` or :func:`convert_odd` by weight count."""
    n = len(rule_weights(binary)) // 2
    return convert_even(binary) if n % 2 == 0 else convert_odd(binary)


def convert_via_symbol(binary: SubdivisionScheme) -> SubdivisionScheme:
    """Quaternary scheme with symbol ``A(c) * A(c**2)``; valid for any binary mask."""
    _require_binary(binary)
    a = binary.mask.symbol()
    product = laurent_multiply(a, laurent_substitute_power(a, 2))
    try:
        rule_weights(binary)
        provenance = "symbol product"
    except ConversionError:
        provenance = "symbol product, outside the closed-form conversion"
    name = f"quat-from-{binary.name}" if binary.name else "quat-from-symbol"
    return SubdivisionScheme(Mask.from_symbol(product, 4), name, provenance)


# ---------------------------------------------------------------------------
# Rule listings
# ---------------------------------------------------------------------------


def _index_text(var: str, scale: int, shift: int) -> str:
    head = f"{scale}{var}" if scale != 1 else var
    if shift == 0:
        return head
    return f"{head}{shift:+d}"


@dataclass(frozen=True)
class RuleListing:
    arity: int
    rules: tuple[Stencil, ...]

    def lines(self) -> list[str]:
        out = []
        for st in self.rules:
            lhs = f"g'[{_index_text('phi', self.arity, st.phase)}]"
            if not st.weights:
                out.append(f"{lhs} = 0")
                continue
            terms = []
            for o, w in zip(st.offsets, st.weights):
                sign = "-" if w < 0 else "+"
                terms.append((sign, f"{abs(w)} g[{_index_text('phi', 1, o)}]"))
            text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
            for sign, body in terms[1:]:
                text += f" {sign} {body}"
            out.append(f"{lhs} = {text}")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


def expand_rule_text(result: ConversionResult | SubdivisionScheme) -> RuleListing:
    """Per-phase rules ``g'[r*phi+eta] = sum w g[phi+o]`` with exact weights."""
    if isinstance(result, ConversionResult):
        return RuleListing(4, result.rules)
    return RuleListing(result.mask.arity, tuple(stencils(result)))


__all__ = [
    "ConversionError",
    "ConversionResult",
    "NotDual",
    "RuleListing",
    "WrongArity",
    "WrongParity",
    "convert",
    "convert_even",
    "convert_odd",
    "convert_via_symbol",
    "expand_rule_text",
    "rule_weights",
]
