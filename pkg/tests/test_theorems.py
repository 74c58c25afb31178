from fractions import Fraction

import pytest

from thetacong.congruence import (
    AbnormalInput,
    abnormal_verify,
    b_value,
    etafamily_verify,
    family_enumerate,
    figure_pairs,
)
from thetacong.congruence.theorems import family_modulus, family_r
from thetacong.errors import ExcludedCaseError, HypothesisError
from thetacong.etaforms import eta_pow
from thetacong.partitions import build_f, pr_exact
from thetacong.qseries import agree

ETA_ELL_PAIRS = [(23, 5), (23, 7), (47, 7), (47, 13), (71, 13), (71, 19), (95, 13), (95, 17), (119, 11), (119, 13)]


@pytest.fixture(scope="module")
def rows_349():
    return family_enumerate(349)


def test_family_modulus_and_r():
    assert family_modulus(3, 1) == 6
    assert family_modulus(5, 1) == 4
    assert family_modulus(23, 1) == 1
    assert family_modulus(1, 2) == 6
    assert family_r(3, 7, 1) == 17
    assert family_r(1, 7, 2) == 3


def test_family_counts_theorem_range(rows_349):
    r1 = [row for row in rows_349 if row.r1 is not None]
    assert len(r1) == 309
    ram = sorted((row.r1, row.ell) for row in r1 if row.ramanujan)
    assert ram == [(179, 13), (197, 19), (1259, 61)]


def test_family_counts_with_table_rows():
    rows = family_enumerate(349, table_rows=True, probe=False)
    assert sum(row.r1 is not None for row in rows) == 375
    assert any(row.a == 23 for row in rows)


def test_family_row_fields(rows_349):
    row = next(row for row in rows_349 if row.ell == 7 and row.a == 3)
    assert (row.r1, row.r2, row.modulus) == (17, 3, 6)
    assert row.ramanujan is False
    for row in rows_349:
        assert (row.ell - 1) % row.modulus == 0
        assert row.a <= 2 * row.ell + 1
        if row.r1 is not None:
            assert row.r1 == row.a * (row.ell - 1) - 1


def test_ramanujan_rows_vanish():
    assert pr_exact(179, 8)[(13 + 179) // 24] % 13 == 0
    assert etafamily_verify(179, 13, 1, 1000) == 0


def test_figure_pairs():
    pairs = figure_pairs()
    assert len(pairs) == 66
    assert {p.a for p in pairs} <= set(range(3, 22, 2))
    assert all(p.r <= 501 and 5 <= p.ell <= 1583 and p.case == 1 for p in pairs)
    assert (17, 7) in {(p.r, p.ell) for p in pairs}
    # pairs past the a <= 2 ell + 1 cap still carry the congruence (trivially)
    for r, ell in ((67, 5), (113, 7)):
        assert (r, ell) in {(p.r, p.ell) for p in pairs}
        assert build_f(r, ell, 0, 500).series.is_zero()
    assert len(figure_pairs(include_case2=True)) > 66
    assert figure_pairs(r_max=10) == [p for p in pairs if p.r <= 10]


@pytest.mark.parametrize("r, ell, case, alpha", [(17, 7, 1, 3), (3, 7, 2, 3), (9, 13, 2, None), (15, 19, 2, None)])
def test_etafamily_examples(r, ell, case, alpha):
    got = etafamily_verify(r, ell, case, 2000)
    n = ((1 if case == 1 else 3) * ell + r) // 24
    assert got == pr_exact(r, n)[n] % ell
    if alpha is not None:
        assert got == alpha


@pytest.mark.parametrize("r, ell, case", [(23 * 10 - 1, 11, 1), (23 * 12 - 1, 13, 1), (21 * 10 - 3, 11, 2), (21 * 16 - 3, 17, 2)])
def test_table_rows_hold(r, ell, case):
    with pytest.raises(HypothesisError):
        etafamily_verify(r, ell, case, 500)
    etafamily_verify(r, ell, case, 500, table_rows=True)


def test_etafamily_side_conditions():
    with pytest.raises(HypothesisError):
        etafamily_verify(5, 7, 1)
    with pytest.raises(HypothesisError):
        etafamily_verify(19, 7, 1)  # a = 10/3 is not an integer
    with pytest.raises(ExcludedCaseError):
        etafamily_verify(35, 7, 1)
    with pytest.raises(ValueError):
        etafamily_verify(17, 7, 3)


def test_b_value():
    assert b_value(23, 5) == Fraction(5, 2)
    assert b_value(1, 5) == 4 * ((5 + Fraction(22, 10)) // 4) - Fraction(5, 2)
    assert AbnormalInput.of(47, 13).b_value == Fraction(13, 2)


@pytest.mark.parametrize("r, ell", ETA_ELL_PAIRS)
def test_abnormal_eta_ell(r, ell):
    shape = abnormal_verify(r, ell, 1, 2000)
    assert shape.kind == "eta_ell" and shape.b == ell and shape.scalar != 0
    if (r, ell) == (23, 7):
        assert shape.scalar == 3


def test_abnormal_eta3():
    assert abnormal_verify(21, 5, 2, 2000).scalar == 1
    assert abnormal_verify(45, 7, 2, 2000).scalar == 2
    with pytest.raises(HypothesisError):
        abnormal_verify(45, 7, 2, 2000, strict=True)


def test_abnormal_mixed():
    shape = abnormal_verify(23, 5, 3, 2000)
    assert shape.kind == "eta_ell2_minus_eta" and shape.scalar == 2
    # (12/5) = -1, so 2 * (-eta^25 - eta) = 3 (eta^25 + eta) mod 5
    fm = build_f(23, 5, -1, 2000).series
    assert agree(fm, (eta_pow(25, 5, 2000) + eta_pow(1, 5, 2000)) * 3)


def test_abnormal_hypotheses():
    with pytest.raises(HypothesisError) as err:
        abnormal_verify(17, 7, 1, 500)
    assert "b(r, ell)" in str(err.value)
    with pytest.raises(HypothesisError):
        abnormal_verify(23, 7, 2, 500)
    with pytest.raises(HypothesisError):
        abnormal_verify(23, 7, 3, 500)
    with pytest.raises(ValueError):
        abnormal_verify(23, 7, 4)
