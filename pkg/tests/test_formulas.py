from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from ktrees.errors import InvalidParams, UnsupportedBranch
from ktrees.formulas import (
    avg_nc,
    avg_nc_asymptotic,
    avg_plane,
    moment_table_nc_k2,
    moment_table_plane_k3,
    moments_by_summation,
    root_nc,
    root_plane,
    single_label_nc,
    single_label_nc_printed,
    single_label_nc_upper_variant,
    single_label_plane,
    thm1_root,
    thm1_total,
    thm2_root,
    thm2_total,
    total_nc,
    total_plane,
)
from ktrees.trees import compositions, histogram


@pytest.mark.parametrize("fn, args, expected", [
    (thm1_root, (1, (1, 1)), 1),
    (thm1_root, (2, (1, 1)), 1),
    (thm1_root, (1, (0, 2)), 0),
    (thm1_total, ((1, 1),), 2),
    (thm1_total, ((1, 0, 0, 1),), 2),
    (thm1_total, ((3,),), 2),
    (thm2_root, (2, (1, 1)), 1),
    (thm2_root, (1, (1, 1)), 1),
    (thm2_root, (2, (2, 0)), 0),
    (thm2_total, ((1, 1),), 2),
    (thm2_total, ((0, 2),), 0),
    (thm2_total, ((3,),), 3),
    (total_plane, (2, 3), 10),
    (root_plane, (3, 2, 2), 2),
    (root_plane, (2, 3, 2), 3),
    (total_nc, (1, 3), 3),
    (total_nc, (2, 2), 3),
    (root_nc, (2, 3, 2), 5),
    (single_label_plane, (2, 2, 2, 1), 2),
    (single_label_plane, (2, 2, 2, 2), 0),
    (single_label_plane, (1, 4, 1, 4), 5),
    (single_label_nc, (1, 3, 1, 3), 3),
    (single_label_nc, (2, 2, 1, 1), 2),
    (single_label_nc, (2, 2, 1, 0), 0),
])
def test_examples(fn, args, expected):
    assert fn(*args) == expected


def test_averages_examples():
    assert avg_plane(2, 2, 2) == Fraction(2, 3)
    for n in range(1, 9):
        assert avg_nc(1, n, 1) == n


def test_refined_against_oracle(oracle):
    for k, n in [(2, 5), (3, 4)]:
        plane, nc = oracle.plane_counts(k, n), oracle.nc_counts(k, n)
        for comp in compositions(k, n):
            for h in range(1, k + 1):
                assert thm1_root(h, comp) == plane.get((h, comp.counts), 0)
                assert thm2_root(h, comp) == nc.get((h, comp.counts), 0)


@given(st.integers(1, 5), st.integers(2, 9), st.data())
@settings(max_examples=60, deadline=None)
def test_roots_sum_to_total(k, n, data):
    comp = data.draw(st.sampled_from(list(compositions(k, n))))
    assert sum(thm1_root(h, comp) for h in range(1, k + 1)) == thm1_total(comp)
    assert sum(thm2_root(h, comp) for h in range(1, k + 1)) == thm2_total(comp)


@given(st.integers(1, 5), st.integers(2, 9), st.data())
@settings(max_examples=60, deadline=None)
def test_zero_root_label_count_gives_zero(k, n, data):
    comp = data.draw(st.sampled_from([c for c in compositions(k, n) if 0 in c.counts]
                                     or [None]))
    if comp is None:
        return
    h = comp.counts.index(0) + 1
    assert thm1_root(h, comp) == 0
    assert thm2_root(h, comp) == 0


def test_counts_are_nonnegative():
    for k in range(1, 5):
        for n in range(1, 8):
            for comp in compositions(k, n):
                assert thm1_total(comp) >= 0 and thm2_total(comp) >= 0


def test_plane_root_totals_are_fuss_catalan():
    for k in range(1, 5):
        for n in range(2, 11):
            assert root_plane(k, n, k) * (k * (n - 1) + 1) == comb((k + 1) * (n - 1), n - 1)
            assert sum(root_plane(k, n, h) for h in range(1, k + 1)) == total_plane(k, n)
            assert sum(root_nc(k, n, h) for h in range(1, k + 1)) == total_nc(k, n)


def test_single_label_plane_matches_summation():
    for k in range(1, 5):
        for n in range(1, 8):
            for h in range(1, k + 1):
                for ell in range(n + 1):
                    want = sum(thm1_total(c) for c in compositions(k, n) if c[h] == ell)
                    assert single_label_plane(k, n, h, ell) == want


def test_single_label_nc_printed_lower_branch():
    for k in range(1, 6):
        for n in range(1, 7):
            for h in range(1, (k + 1) // 2 + 1):
                for ell in range(n + 1):
                    want = sum(thm2_total(c) for c in compositions(k, n) if c[h] == ell)
                    assert single_label_nc_printed(k, n, h, ell) == want


def test_single_label_nc_upper_branch_is_refused():
    with pytest.raises(UnsupportedBranch):
        single_label_nc_printed(3, 4, 3, 1)
    assert single_label_nc(3, 4, 3, 1) == sum(
        thm2_total(c) for c in compositions(3, 4) if c[3] == 1)


UPPER_READINGS = {
    "constant top 3(n-1)": lambda k, h: (3, 0),
    "first top only": lambda k, h: (4 * k - 4 * h + 3, 0),
    "first top and last offset": lambda k, h: (4 * k - 4 * h + 3, -1),
}


def _upper_reading_matches(reading):
    for k in range(2, 7):
        for n in range(2, 8):
            for h in range((k + 1) // 2 + 1, k + 1):
                first_coeff, offset = UPPER_READINGS[reading](k, h)
                for ell in range(n + 1):
                    want = sum(thm2_total(c) for c in compositions(k, n) if c[h] == ell)
                    if single_label_nc_upper_variant(k, n, h, ell, first_coeff, offset) != want:
                        return False
    return True


@pytest.mark.parametrize("reading, matches", [
    ("constant top 3(n-1)", False), ("first top only", False), ("first top and last offset", True),
])
def test_upper_branch_readings(reading, matches):
    assert _upper_reading_matches(reading) is matches


def test_averages_against_oracle(oracle):
    for k in range(1, 4):
        for n in range(1, 7):
            plane, nc = oracle.plane(k, n), oracle.nc(k, n)
            for h in range(1, k + 1):
                assert avg_plane(k, n, h) == Fraction(
                    sum(histogram(t, k)[h] for t in plane), len(plane))
                assert avg_nc(k, n, h) == Fraction(
                    sum(histogram(t, k)[h] for t in nc), len(nc))


def test_averages_sum_to_n():
    for k in range(1, 7):
        for n in range(1, 21):
            assert sum(avg_plane(k, n, h) for h in range(1, k + 1)) == n
            assert sum(avg_nc(k, n, h) for h in range(1, k + 1)) == n


def test_avg_nc_asymptotic_trend():
    for k in (2, 3, 4):
        for h in range(1, k + 1):
            gaps = [abs(float(avg_nc(k, n, h)) - avg_nc_asymptotic(k, n, h)) for n in (10, 100, 1000)]
            assert gaps[2] < gaps[1] < gaps[0] or gaps[2] < 1e-6


def test_moment_table_examples():
    assert moment_table_nc_k2(2).covariances[1, 1] == Fraction(2, 9)
    assert moment_table_plane_k3(5).covariances[1, 1] == Fraction(11, 12)
    assert moment_table_plane_k3(3).means_by_root[1, 1] == Fraction(9, 5)
    assert moment_table_nc_k2(2).means_by_root[2, 1] == 1


@pytest.mark.parametrize("n", range(2, 9))
def test_moment_tables_match_summation(n):
    for table, family, k in [(moment_table_plane_k3(n), "plane", 3),
                             (moment_table_nc_k2(n), "noncrossing", 2)]:
        summed = moments_by_summation(family, k, n)
        assert table.means == summed.means
        assert table.covariances == summed.covariances
        assert table.means_by_root == summed.means_by_root


def test_invalid_inputs():
    with pytest.raises(InvalidParams):
        thm1_root(3, (1, 1))
    with pytest.raises(InvalidParams):
        total_plane(0, 3)
    with pytest.raises(InvalidParams):
        moment_table_plane_k3(1)
    with pytest.raises(InvalidParams):
        single_label_plane(2, 3, 1, 4)
