"""Regression of the built-in catalog against reference values.

Three groups of checks:

* ``convert``: both conversion routes reproduce each tabulated quaternary mask;
* ``holder``: midpoint regularity within ``HOLDER_TOLERANCE`` of the reference
  decimals, and the lower/mid/upper ordering;
* ``precision``: degree of precision and of generation for all fourteen schemes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

from .analysis import degree_of_precision, format_real, holder_regularity
from .catalog import PAIRS, Catalog, UnknownScheme, default_catalog
from .conversion import ConversionError, convert, convert_via_symbol
from .scheme import Mask

GROUPS = ("convert", "holder", "precision")
HOLDER_TOLERANCE = 2e-2
# exact bounds that miss a reference decimal by more than this are flagged
REFERENCE_SLACK = 1e-6

# binary scheme -> (binary r, quaternary r)
REFERENCE_REGULARITY: dict[str, tuple[float, float]] = {
    "binary-siddiqi-4pt": (4.124809715, 4.12397897),
    "binary-siddiqi-6pt": (6.383689358, 6.378805452),
    "binary-siddiqi-8pt": (8.575077912, 8.561638397),
    "binary-binomial-10pt": (3.768111637, 4.571743466),
    "binary-siddiqi-10pt": (10.67905327, 10.65483615),
    "binary-siddiqi-12pt": (12.72368201, 12.69332847),
}

# binary scheme -> (degree of precision, degree of generation); the
# quaternary partner carries the same pair
REFERENCE_DEGREES: dict[str, tuple[int, int]] = {
    "binary-chaikin-2pt": (1, 2),
    "binary-siddiqi-4pt": (1, 4),
    "binary-siddiqi-6pt": (1, 6),
    "binary-siddiqi-8pt": (1, 8),
    "binary-binomial-10pt": (9, 10),
    "binary-siddiqi-10pt": (1, 10),
    "binary-siddiqi-12pt": (1, 12),
}


@dataclass(frozen=True)
class Check:
    group: str
    name: str
    passed: bool
    detail: str
    data: dict[str, Any] = field(default_factory=dict, compare=False, hash=False)


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_text(self) -> str:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.group:<9} {c.name}  {c.detail}" for c in self.checks]
        failed = len(self.failures())
        lines.append(f"{len(self.checks) - failed}/{len(self.checks)} checks passed")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "checks": [
                {"group": c.group, "name": c.name, "passed": c.passed, "detail": c.detail, **c.data}
                for c in self.checks
            ],
        }


def _mismatches(a: Mask, b: Mask) -> int:
    lo = min(a.first_index, b.first_index)
    hi = max(a.last_index, b.last_index)
    return sum(a.coefficient(k) != b.coefficient(k) for k in range(lo, hi + 1))


def _lookup(catalog: Catalog, name: str):
    try:
        return catalog[name], None
    except UnknownScheme as exc:
        return None, str(exc)


def _convert_checks(catalog: Catalog) -> Iterable[Check]:
    for binary_name, quat_name in PAIRS.items():
        label = f"{binary_name} -> {quat_name}"
        binary, err = _lookup(catalog, binary_name)
        quat, err2 = _lookup(catalog, quat_name)
        if err or err2:
            yield Check("convert", label, False, err or err2)
            continue
        try:
            theorem = convert(binary).quaternary.mask
        except ConversionError as exc:
            yield Check("convert", label, False, f"{quat_name}: closed form failed: {exc}")
            continue
        symbol = convert_via_symbol(binary).mask
        bad_t = _mismatches(theorem, quat.mask)
        bad_s = _mismatches(symbol, quat.mask)
        ok = bad_t == 0 and bad_s == 0
        detail = (
            f"{quat.mask.width} coefficients exact"
            if ok
            else f"{quat_name}: {bad_t} closed-form and {bad_s} symbol-product mismatches"
        )
        yield Check("convert", label, ok, detail, {"theorem_mismatches": bad_t, "symbol_mismatches": bad_s})


def _holder_checks(catalog: Catalog) -> Iterable[Check]:
    for binary_name, targets in REFERENCE_REGULARITY.items():
        for name, target in zip((binary_name, PAIRS[binary_name]), targets):
            scheme, err = _lookup(catalog, name)
            if err:
                yield Check("holder", name, False, err)
                continue
            rep = holder_regularity(scheme)
            delta = rep.r_mid - target
            ordered = rep.r_lower <= rep.r_mid <= rep.r_upper
            ok = abs(delta) <= HOLDER_TOLERANCE and ordered
            outside = target < rep.r_lower - REFERENCE_SLACK or target > rep.r_upper + REFERENCE_SLACK
            detail = (
                f"r_mid={rep.r_mid:.9f} reference={target} delta={delta:+.3e} "
                f"bounds=[{rep.r_lower:.9f}, {rep.r_upper:.9f}]"
            )
            if not ordered:
                detail += " bounds out of order"
            if outside:
                detail += " reference outside exact bounds"
            yield Check(
                "holder",
                name,
                ok,
                detail,
                {
                    "r_mid": format_real(rep.r_mid),
                    "r_lower": format_real(rep.r_lower),
                    "r_upper": format_real(rep.r_upper),
                    "reference": target,
                    "delta": format_real(delta),
                    "reference_outside_bounds": outside,
                },
            )


def _precision_checks(catalog: Catalog) -> Iterable[Check]:
    for binary_name, expected in REFERENCE_DEGREES.items():
        for name in (binary_name, PAIRS[binary_name]):
            scheme, err = _lookup(catalog, name)
            if err:
                yield Check("precision", name, False, err)
                continue
            rep = degree_of_precision(scheme)
            got = (rep.degree_of_precision, rep.degree_of_generation)
            ok = got == expected
            yield Check(
                "precision",
                name,
                ok,
                f"DoP={got[0]} DoG={got[1]} expected {expected[0]}/{expected[1]}",
                {"dop": got[0], "dog": got[1], "expected": list(expected)},
            )


def run_verify(only: Iterable[str] | None = None, catalog: Catalog | None = None) -> VerifyReport:
    catalog = catalog if catalog is not None else default_catalog()
    groups = tuple(only) if only else GROUPS
    unknown = set(groups) - set(GROUPS)
    if unknown:
        raise ValueError(f"unknown check group(s): {', '.join(sorted(unknown))}")
    runners = {"convert": _convert_checks, "holder": _holder_checks, "precision": _precision_checks}
    checks: list[Check] = []
    for g in GROUPS:
        if g in groups:
            checks.extend(runners[g](catalog))
    return VerifyReport(tuple(checks))
