from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from selbergsums.zeros_io import (DATA_ENV, CoverageError, ZeroFileError, ZeroTable, deviation_profile,
                                  empirical_count, format_zero_table, load_bundled, parse_zero_file,
                                  parse_zero_text, read_manifest, verify_checksum, with_offline_zero)
from selbergsums import data_dir


def test_bundled_tables_have_expected_size(zeta_zeros, chi4_zeros):
    assert len(zeta_zeros) == 10_000
    assert zeta_zeros.ordinates[0] == pytest.approx(14.134725141734693, abs=1e-10)
    assert len(chi4_zeros) == 1000
    assert chi4_zeros.ordinates[0] == pytest.approx(6.020948904697, abs=1e-9)


@pytest.mark.parametrize("k", [1, 2, 100, 5000, 10000])
def test_zeta_zeros_spot_check(zeta_zeros, k):
    mpmath.mp.dps = 20
    assert zeta_zeros.ordinates[k - 1] == pytest.approx(float(mpmath.zetazero(k).imag), abs=5e-10)


def test_chi4_zeros_are_zeros():
    t = load_bundled("lchi4").ordinates[:3]
    for g in t:
        val = mpmath.dirichlet(mpmath.mpc(0.5, g), [0, 1, 0, -1])
        assert abs(val) < 1e-8


def test_checksums_match_manifest():
    man = read_manifest()
    for name in ("zeta_zeros.txt", "lchi4_zeros.txt"):
        assert verify_checksum(data_dir() / name, man)


def test_checksum_mismatch_is_detected(tmp_path):
    (tmp_path / "zeta_zeros.txt").write_text("14.134725141734693\n")
    (tmp_path / "MANIFEST").write_text("zeta_zeros.txt, 00ff, nowhere\n")
    with pytest.raises(ZeroFileError, match="checksum"):
        load_bundled("zeta", tmp_path)


def test_env_var_selects_data_dir(tmp_path, monkeypatch):
    (tmp_path / "zeta_zeros.txt").write_text("14.134725141734693\n21.022039638771555\n")
    monkeypatch.setenv(DATA_ENV, str(tmp_path))
    assert len(load_bundled("zeta")) == 2


@pytest.mark.parametrize("text, fragment", [
    ("14.1\n13.0\n", "line 2: ordinates not ascending"),
    ("14.1\n14.1\n", "not ascending"),
    ("14.1\nabc\n", "line 2: not a number"),
    ("-3.0\n", "positive"),
    ("0.5 14.1\n14.2\n", "line 2: expected beta gamma"),
    ("1.5 14.1\n", "beta"),
    ("nan\n", "non-finite"),
])
def test_parse_errors_name_the_line(text, fragment):
    with pytest.raises(ZeroFileError, match=fragment):
        parse_zero_text(text)


def test_missing_file_names_path(tmp_path):
    with pytest.raises(FileNotFoundError, match="nothere.txt"):
        parse_zero_file(tmp_path / "nothere.txt")


def test_comments_and_blank_lines_are_skipped():
    t = parse_zero_text("# header\n\n14.5\n  \n# mid\n20.0\n")
    assert list(t.ordinates) == [14.5, 20.0]


@given(st.lists(st.floats(0.01, 1e6, allow_nan=False), min_size=1, max_size=60, unique=True))
def test_round_trip_is_bit_identical(values):
    t = ZeroTable(np.sort(np.array(values)))
    back = parse_zero_text(format_zero_table(t, "round trip"))
    assert np.array_equal(back.ordinates, t.ordinates)


def test_two_column_round_trip():
    t = ZeroTable(np.array([3.0, 3.0, 14.1]), np.array([0.9, 0.1, 0.5]))
    back = parse_zero_text(format_zero_table(t))
    assert np.array_equal(back.betas, t.betas)
    assert not back.on_critical_line


def test_counting(zeta_zeros):
    assert empirical_count(zeta_zeros, 100.0) == 29
    assert empirical_count(zeta_zeros, 14.0) == 0
    assert empirical_count(zeta_zeros, 14.134725141734693) == 1
    with pytest.raises(CoverageError):
        empirical_count(zeta_zeros, 1e5)


@given(st.floats(15, 9800), st.floats(15, 9800))
def test_counting_is_monotone(zeta_zeros, a, b):
    lo, hi = sorted((a, b))
    assert empirical_count(zeta_zeros, lo) <= empirical_count(zeta_zeros, hi)


def test_deviation_profile_bounded(zeta_zeros, zeta):
    prof = deviation_profile(zeta_zeros, zeta, np.arange(50, 1001, 10))
    assert prof.max_scaled_deviation < 1.0
    assert deviation_profile(zeta_zeros, zeta, []).max_scaled_deviation == 0.0
    with pytest.raises(ValueError):
        deviation_profile(zeta_zeros, zeta, [1.0])


def test_truncate_keeps_coverage(zeta_zeros):
    sub = zeta_zeros.truncate(50.0)
    assert len(sub) == 10 and sub.max_ordinate == 50.0
    with pytest.raises(CoverageError):
        sub.truncate(60.0)


def test_offline_zero_pair(zeta_zeros):
    t = with_offline_zero(zeta_zeros.truncate(100.0), 0.9, 10.0)
    assert len(t) == 31
    assert sorted(t.real_parts()[:2]) == pytest.approx([0.1, 0.9])
    with pytest.raises(ValueError):
        with_offline_zero(zeta_zeros, 0.5, 10.0)
