from __future__ import annotations

import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from selbergsums.coeffs import (CoeffError, DirichletCoeffs, PrimeSieve, ZetaCoeffs, load_character_table,
                                prime_sum_limit, prime_sum_limits, von_mangoldt)


def _mangoldt_oracle(n: int) -> float:
    primes = [p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, int(p ** 0.5) + 1))]
    return math.log(primes[0]) if len(primes) == 1 else 0.0


@given(st.integers(1, 5000))
def test_von_mangoldt_matches_trial_division(n):
    assert von_mangoldt(n) == pytest.approx(_mangoldt_oracle(n), abs=1e-15)


def test_sieve_prime_powers():
    s = PrimeSieve(100)
    assert list(s.prime_powers[:10]) == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]
    assert 97 in s and 91 not in s


def test_chebyshev_psi_oracle():
    # psi(100) = log lcm(1..100)
    k, lam = ZetaCoeffs().prime_power_table(100)
    assert math.fsum(lam.real) == pytest.approx(math.log(math.lcm(*range(1, 101))), rel=1e-14)


def test_dirichlet_validation():
    with pytest.raises(CoeffError):
        DirichletCoeffs(4, {1: 1, 3: 2})  # not unimodular
    with pytest.raises(CoeffError):
        DirichletCoeffs(4, {1: 1, 2: 1, 3: -1})  # value on a non-unit


def test_character_table_errors(tmp_path):
    p = tmp_path / "chi.csv"
    p.write_text("1, 1\n")
    with pytest.raises(CoeffError, match="residue"):
        load_character_table(p)


def test_chi4_coefficients():
    c = DirichletCoeffs(4, {1: 1, 3: -1})
    assert c.lambda_F(9) == pytest.approx(math.log(3))
    assert c.lambda_F(27) == pytest.approx(-math.log(3))
    assert c.lambda_F(4) == 0
    assert c.parity == 1


def test_prime_sum_first_limit_is_minus_euler_gamma():
    # sum_{n<=X} Lambda(n)/n - log X -> -gamma_0
    est = prime_sum_limits(ZetaCoeffs(), 2, 1e7)[0]
    assert abs(est.value.real + float(mpmath.euler)) <= max(est.error_bar, 1e-4)
    assert est.error_bar < 1e-3


def test_prime_sum_limit_chi4_first_is_minus_log_derivative():
    # sum chi(n) Lambda(n)/n = -L'/L(1, chi_4)
    oracle = -float(mpmath.diff(lambda s: mpmath.dirichlet(s, [0, 1, 0, -1]), 1)
                    / mpmath.dirichlet(1, [0, 1, 0, -1]))
    est = prime_sum_limits(DirichletCoeffs(4, {1: 1, 3: -1}), 1, 1e7)[0]
    assert abs(est.value.real - oracle) <= 3 * est.error_bar + 1e-6


def test_prime_sum_limit_bad_args():
    with pytest.raises(ValueError):
        prime_sum_limit(ZetaCoeffs(), 0, 100)
    with pytest.raises(ValueError):
        prime_sum_limits(ZetaCoeffs(), 0)
