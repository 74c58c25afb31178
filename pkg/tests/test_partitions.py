import pytest

from oracles import colored_partitions, enumerate_colored
from thetacong.errors import ExcludedCaseError, PrecisionError
from thetacong.etaforms import cusp_member, eta_pow
from thetacong.partitions import (
    ChecksumError,
    TableCache,
    build_f,
    build_f0_via_lemma,
    genfunc_weight_times_2,
    pr_exact,
    pr_mod,
    prtable_path,
    read_prtable,
    write_prtable,
)
from thetacong.qseries import agree, first_difference, power, v_op


def test_pr_exact_examples():
    assert list(pr_exact(1, 10).values) == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
    assert pr_exact(2, 3).values == (1, 2, 5, 10)
    assert pr_exact(1, 100)[100] == 190569292
    assert pr_exact(1, 5)[-1] == 0
    with pytest.raises(IndexError):
        pr_exact(1, 5)[6]
    with pytest.raises(ValueError):
        pr_exact(0, 5)


@pytest.mark.parametrize("r", [1, 2, 3, 5, 8, 24])
def test_pr_exact_matches_product_oracle(r):
    assert list(pr_exact(r, 120).values) == colored_partitions(r, 120)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_pr_exact_matches_enumeration(r):
    assert [enumerate_colored(r, n) for n in range(9)] == list(pr_exact(r, 8).values)


def test_pr_mod_examples():
    t = pr_mod(1, 5, 30)
    assert t.ell == 5 and t.n_max == 30
    assert all(t[5 * n + 4] == 0 for n in range(6))
    assert t[3] == 3
    assert pr_mod(17, 7, 3)[1] == 3


@pytest.mark.parametrize("r", [1, 4, 9, 23])
@pytest.mark.parametrize("ell", [5, 7, 11, 13, 6133])
def test_pr_mod_agrees_with_exact(r, ell):
    exact = pr_exact(r, 400).reduce(ell)
    assert list(pr_mod(r, ell, 400).values) == list(exact.values)


def test_table_reduce_and_head():
    t = pr_exact(3, 20)
    assert t.reduce(7)[20] == t[20] % 7
    assert t.head(5).n_max == 5
    with pytest.raises(ValueError):
        t.reduce(7).reduce(5)
    with pytest.raises(IndexError):
        t.head(30)


def test_genfunc_weights():
    assert genfunc_weight_times_2(1, 5, 0) == 19
    assert genfunc_weight_times_2(1, 5, -1) == 95
    assert genfunc_weight_times_2(3, 7, 1) == 3 * 7 * 41


def test_build_f_examples():
    f = build_f(1, 5, 0, 200).series
    assert f.is_zero()
    g = build_f(1, 7, -1, 500)
    assert g.meta.eta_exponent == 23
    assert g.series.support_classes() <= {23}
    h = build_f(17, 7, 0, 600).series
    # (7N + 17)/24 = 1 at N = 1
    assert h[1] == 3
    with pytest.raises(ExcludedCaseError):
        build_f(5, 5, 0, 100)
    with pytest.raises(ValueError):
        build_f(1, 5, 2, 100)


def test_build_f_short_table():
    with pytest.raises(PrecisionError):
        build_f(3, 7, 0, 500, table=pr_mod(3, 7, 10))


def test_build_f_uses_exact_table():
    a = build_f(3, 11, -1, 800, table=pr_exact(3, 40)).series
    b = build_f(3, 11, -1, 800).series
    assert agree(a, b)


def _decomposes(r, ell, trunc):
    f0 = build_f(r, ell, 0, trunc // ell + 1).series
    total = v_op(f0, ell).truncate(trunc)
    for delta in (-1, 1):
        total = total + build_f(r, ell, delta, trunc).series
    return first_difference(total, eta_pow(-r, ell, trunc)) is None


@pytest.mark.parametrize("r", [1, 3, 8, 17, 23])
@pytest.mark.parametrize("ell", [5, 7, 11, 13])
def test_decomposition(r, ell):
    if r % ell == 0:
        pytest.skip("excluded pair")
    assert _decomposes(r, ell, 1500)


@pytest.mark.parametrize("r", [1, 3, 11, 23])
@pytest.mark.parametrize("ell", [5, 7])
def test_lemma_construction(r, ell):
    assert first_difference(build_f0_via_lemma(r, ell, 400), build_f(r, ell, 0, 400).series) is None


def _ord(f):
    return None if f.is_zero() else f.order()


def test_membership_of_combined_series():
    checked = 0
    for ell in (5, 7, 11, 13):
        trunc = 24 * (ell * ell // 24 + 6)
        for r in range(1, 60, 2):
            if r % ell == 0:
                continue
            f0 = build_f(r, ell, 0, trunc).series
            fm = build_f(r, ell, -1, trunc).series
            if any(o is not None and o <= 0 for o in (_ord(f0), _ord(fm))):
                continue
            g = power(f0, ell, trunc) + fm * 2
            ok, _ = cusp_member(g, ell * ell - r - 1, (-r) % 24, ell)
            assert ok, (r, ell)
            checked += 1
    assert checked >= 60


def test_prtable_round_trip(tmp_path):
    for table in (pr_exact(5, 60), pr_mod(5, 7, 60)):
        path = prtable_path(tmp_path, table.r, table.ell)
        write_prtable(path, table)
        back = read_prtable(path)
        assert (back.r, back.ell, back.n_max) == (table.r, table.ell, table.n_max)
        assert list(back.values) == list(table.values)
    text = prtable_path(tmp_path, 5, None).read_text().splitlines()
    assert text[0] == "PRTABLE 1 r=5 ell=0 nmax=60"
    assert text[-1].startswith("CHECKSUM sha256=")


def test_prtable_corruption_detected(tmp_path):
    path = prtable_path(tmp_path, 1, 5)
    write_prtable(path, pr_mod(1, 5, 20))
    lines = path.read_text().splitlines(keepends=True)
    lines[3] = "4\n" if lines[3] != "4\n" else "3\n"
    path.write_text("".join(lines))
    with pytest.raises(ChecksumError):
        read_prtable(path)


def test_table_cache(tmp_path):
    cache = TableCache(tmp_path, initial=64)
    t = cache.get(3, 7, 10)
    assert t.n_max == 64
    assert cache.get(3, 7, 50) is t
    assert cache.get(3, 7, 100).n_max == 128
    assert prtable_path(tmp_path, 3, 7).exists()
    reader = TableCache(tmp_path, build=False)
    assert reader.get(3, 7, 100).n_max == 128
    with pytest.raises(FileNotFoundError):
        reader.get(3, 7, 500)
    with pytest.raises(FileNotFoundError):
        reader.get(5, 11, 1)
