from __future__ import annotations

import json
import math
from fractions import Fraction

import pytest

from subdivkit.analysis import (
    NotConvergent,
    degree_of_generation,
    degree_of_precision,
    holder_regularity,
    pair_to_dict,
    regularity_pair_report,
    regularity_to_dict,
    smoothing_factor,
    smoothing_factorization,
    transfer_matrices,
)
from subdivkit.catalog import PAIRS, catalog_get
from subdivkit.numeric import LaurentPolynomial, SmallMatrix, try_divide
from subdivkit.scheme import Mask, SubdivisionScheme

from test_scheme import CATALOG_NAMES

F = Fraction


def scheme_of(arity, first, coeffs, name="test"):
    return SubdivisionScheme(Mask(arity, first, tuple(F(c) for c in coeffs)), name)


CUBIC_BSPLINE = scheme_of(2, -2, [F(1, 8), F(4, 8), F(6, 8), F(4, 8), F(1, 8)], "cubic-bspline")
FOUR_POINT_INTERPOLATING = scheme_of(
    2, -3, [F(-1, 16), 0, F(9, 16), 1, F(9, 16), 0, F(-1, 16)], "four-point-interpolating"
)


def test_factorization_four_point():
    order, nu = smoothing_factorization(catalog_get("binary-siddiqi-4pt"))
    assert order == 5
    assert nu.normalized().coefficients == (F(1, 12), F(11, 6), F(1, 12))


def test_factorization_quat_five_point():
    order, nu = smoothing_factorization(catalog_get("quat-5pt"))
    assert order == 5
    expected = tuple(F(k, 144) for k in (1, 22, 23, 484, 23, 22, 1))
    assert nu.normalized().coefficients == expected


def test_factorization_chaikin():
    order, nu = smoothing_factorization(catalog_get("binary-chaikin-2pt"))
    assert order == 3
    assert nu.coefficients == (F(2),)


def test_factorization_bspline_oracle():
    order, nu = smoothing_factorization(CUBIC_BSPLINE)
    assert order == 4 and nu.coefficients == (F(2),)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_factorization_is_maximal(name):
    scheme = catalog_get(name)
    _, nu = smoothing_factorization(scheme)
    assert try_divide(nu, smoothing_factor(scheme.mask.arity)) is None


def test_factorization_ignores_monomial_shift():
    base = catalog_get("binary-siddiqi-6pt").mask
    moved = scheme_of(2, base.first_index + 5, base.coefficients)
    a = smoothing_factorization(catalog_get("binary-siddiqi-6pt"))
    b = smoothing_factorization(moved)
    assert a.order == b.order and a.remainder.normalized() == b.remainder.normalized()


def test_transfer_matrices_four_point():
    nu = LaurentPolynomial.from_coefficients([F(1, 12), F(11, 6), F(1, 12)])
    e0, e1, e2 = transfer_matrices(nu, 2)
    assert e0 == SmallMatrix.from_rows([[F(11, 6), 0], [F(1, 12), F(1, 12)]])
    assert e1 == SmallMatrix.from_rows([[F(1, 12), F(1, 12)], [0, F(11, 6)]])
    assert e2 == SmallMatrix.from_rows([[0, F(11, 6)], [0, F(1, 12)]])


def test_transfer_matrices_quat_five_point():
    e = [F(k, 144) for k in (1, 22, 23, 484, 23, 22, 1)]
    mats = transfer_matrices(LaurentPolynomial.from_coefficients(e), 4)
    assert len(mats) == 7 and all(m.size == 6 for m in mats)
    z = F(0)
    assert mats[0] == SmallMatrix.from_rows(
        [
            [e[3], z, z, z, z, z],
            [e[4], e[0], z, z, z, z],
            [e[5], e[1], z, z, z, z],
            [e[6], e[2], z, z, z, z],
            [z, e[3], z, z, z, z],
            [z, e[4], e[0], z, z, z],
        ]
    )
    assert all(mats[4].entry(i, 1) == 0 for i in range(1, 7))


def test_transfer_matrices_span_one():
    a, b = F(1, 3), F(2, 3)
    mats = transfer_matrices(LaurentPolynomial.from_coefficients([a, b]), 2)
    # (E_q)_11 = e[1 + 1 - 2 + q]
    assert [m.entry(1, 1) for m in mats] == [a, b]


def test_transfer_matrices_need_span():
    with pytest.raises(ValueError):
        transfer_matrices(LaurentPolynomial.monomial(0, 2), 2)


def test_holder_four_point_exact_bounds():
    rep = holder_regularity(catalog_get("binary-siddiqi-4pt"))
    exact = 5 - math.log2(11 / 6)
    assert rep.r_lower == pytest.approx(exact, abs=1e-12)
    assert rep.r_mid == pytest.approx(exact, abs=1e-12)
    assert rep.r_upper == pytest.approx(exact, abs=1e-12)
    assert rep.xi_upper_exact == F(11, 6)
    assert rep.spectral_radii == pytest.approx([11 / 6, 11 / 6, 1 / 12], abs=1e-12)
    assert abs(rep.r_mid - 4.124809715) < 2e-2


def test_holder_quat_five_point():
    rep = holder_regularity(catalog_get("quat-5pt"))
    assert rep.order == 5 and rep.arity == 4
    assert rep.xi_upper_exact == F(121, 36)
    assert abs(rep.r_mid - 4.12397897) < 2e-2


def test_holder_chaikin_and_bspline():
    rep = holder_regularity(catalog_get("binary-chaikin-2pt"))
    assert (rep.r_lower, rep.r_mid, rep.r_upper) == (2.0, 2.0, 2.0)
    assert rep.matrices == ()
    assert holder_regularity(CUBIC_BSPLINE).r_mid == pytest.approx(3.0)


def test_holder_four_point_interpolating_brackets_two():
    # the classical interpolating four-point scheme has regularity exactly 2
    rep = holder_regularity(FOUR_POINT_INTERPOLATING)
    assert rep.order == 4
    assert rep.r_lower <= 2.0 <= rep.r_upper + 1e-12


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_holder_bounds_are_ordered(name):
    rep = holder_regularity(catalog_get(name))
    assert rep.r_lower <= rep.r_mid <= rep.r_upper
    assert rep.xi_lower <= rep.xi_upper
    assert rep.xi_upper == pytest.approx(float(rep.xi_upper_exact))


def test_deeper_products_tighten_the_bracket():
    scheme = catalog_get("binary-siddiqi-6pt")
    one = holder_regularity(scheme, depth=1)
    two = holder_regularity(scheme, depth=2)
    assert one.r_lower <= two.r_lower + 1e-12
    assert two.r_upper <= one.r_upper + 1e-12
    assert two.r_lower <= two.r_upper


def test_pair_report_chaikin():
    pair = regularity_pair_report(catalog_get("binary-chaikin-2pt"))
    assert (pair.binary.r_mid, pair.quaternary.r_mid) == (2.0, 2.0)
    assert pair.delta_mid == 0


def test_pair_report_six_point_uses_converted_scheme():
    pair = regularity_pair_report(catalog_get("binary-siddiqi-6pt"))
    assert pair.conversion.quaternary.mask == catalog_get("quat-8pt").mask
    assert pair.binary.r_lower <= pair.binary.r_upper
    doc = pair_to_dict(pair)
    assert doc["quaternary_rule_widths"] == [9, 9, 8, 8]
    json.dumps(doc)


def test_report_serialization_precision():
    doc = regularity_to_dict(holder_regularity(catalog_get("binary-siddiqi-4pt")))
    assert doc["xi_upper_exact"] == "11/6"
    assert doc["remainder_coefficients"] == ["1/12", "11/6", "1/12"]
    assert len(repr(doc["r_mid"]).replace(".", "").lstrip("0")) <= 12
    assert doc["r_mid"] == pytest.approx(5 - math.log2(11 / 6), abs=1e-11)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_generation_degree_matches_order(name):
    scheme = catalog_get(name)
    assert degree_of_generation(scheme) + 1 == smoothing_factorization(scheme).order


def test_precision_examples():
    assert degree_of_precision(catalog_get("binary-chaikin-2pt")).degree_of_precision == 1
    rep = degree_of_precision(catalog_get("binary-binomial-10pt"))
    assert (rep.degree_of_precision, rep.degree_of_generation) == (9, 10)
    rep = degree_of_precision(catalog_get("quat-14pt-binomial"))
    assert (rep.degree_of_precision, rep.degree_of_generation) == (9, 10)


def test_precision_shift_for_dual_schemes():
    assert degree_of_precision(catalog_get("binary-siddiqi-4pt")).shift == F(1, 2)
    assert degree_of_precision(catalog_get("quat-5pt")).shift == F(3, 2)


def test_precision_independent_oracles():
    rep = degree_of_precision(CUBIC_BSPLINE)
    assert (rep.degree_of_precision, rep.degree_of_generation, rep.shift) == (1, 3, 0)
    rep = degree_of_precision(FOUR_POINT_INTERPOLATING)
    assert (rep.degree_of_precision, rep.degree_of_generation, rep.shift) == (3, 3, 0)


def test_precision_respects_max_degree():
    rep = degree_of_precision(catalog_get("binary-binomial-10pt"), max_degree=4)
    assert rep.degree_of_precision == 4
    assert degree_of_precision(catalog_get("binary-chaikin-2pt"), max_degree=0).degree_of_precision == 0


def test_precision_not_convergent():
    with pytest.raises(NotConvergent):
        degree_of_precision(scheme_of(4, 0, [F(1, 2), F(1, 2)]))


@pytest.mark.parametrize("binary", sorted(PAIRS))
def test_precision_not_above_generation(binary):
    for name in (binary, PAIRS[binary]):
        rep = degree_of_precision(catalog_get(name))
        assert rep.degree_of_precision <= rep.degree_of_generation
