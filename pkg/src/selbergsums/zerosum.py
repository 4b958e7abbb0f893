"""Gaussian-weighted sums over zeros and their explicit-formula evaluations.

For h(s) = exp(u s^2 - v s) the sum over nontrivial zeros is

    sum_rho h(rho) = m_F (e^{u-v} + 1) + 2 log Q G(v)
                     - sum_n Lambda_F(n) G(v + log n)
                     - sum_n conj(Lambda_F(n))/n G(v - log n)
                     + (e^{u/4 - v/2}/pi) sum_j lam_j L_j(u, v)
                     - sum_j lam_j I_j(u, v)

with G(y) = exp(-y^2/4u)/sqrt(4 pi u), L_j the log-modulus integral and I_j
the kernel integral of the j-th gamma factor.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .coeffs import CoeffProvider
from .descriptor import SelbergDescriptor, degree, log_conductor
from .special import (DEFAULT_QUAD, EULER_GAMMA, QuadratureSpec, gaussian_density,
                      kernel_integral_I, log_modulus_integral)
from .zeros_io import ZeroTable

# Gaussian exponent beyond which prime-sum terms are dropped
PRIME_CUTOFF_EXPONENT = 40.0


class IncompleteSumWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ZeroSumParams:
    u: float
    v: float
    T: float

    def __post_init__(self):
        if not self.u > 0:
            raise ValueError(f"u must be positive, got {self.u}")
        if not self.T >= 1:
            raise ValueError(f"T must be at least 1, got {self.T}")
        if self.u * self.T ** 2 < 25:
            warnings.warn(f"u T^2 = {self.u * self.T ** 2:.3g} < 25: the truncated sum is not effectively complete",
                          IncompleteSumWarning, stacklevel=3)

    @property
    def tail_bound(self) -> float:
        """Size of the error term e^{-uT^2} (log T)^2 / T."""
        return math.exp(-self.u * self.T ** 2) * math.log(self.T) ** 2 / self.T


@dataclass(frozen=True)
class SumReport:
    computed: complex
    predicted: complex
    params: ZeroSumParams
    zero_count_used: int
    truncation_bound: float
    residual: complex = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "residual", self.computed - self.predicted)


def csum(values) -> complex:
    """Exactly rounded sum of a complex array (real and imaginary parts separately)."""
    values = np.asarray(values, dtype=complex)
    return complex(math.fsum(values.real), math.fsum(values.imag))


def paired_zero_sum(table: ZeroTable, T: float, fn) -> complex:
    """sum over zeros with |gamma| <= T of fn(rho), each listed rho paired with conj(rho).

    The multiset of zeros is assumed closed under conjugation, which holds for
    self-dual F.  `fn` maps a complex array to a complex array.
    """
    sub = table.truncate(T)
    if not len(sub):
        return 0j
    rho = sub.rhos()
    return csum(np.concatenate([fn(rho), fn(np.conj(rho))]))


def gaussian_zero_sum(zeros: ZeroTable, params: ZeroSumParams) -> complex:
    u, v = params.u, params.v
    return paired_zero_sum(zeros, params.T, lambda r: np.exp(u * r * r - v * r))


def truncation_tail_bound(zeros: ZeroTable, u: float, v: float, T1: float, T2: float) -> float:
    """Bound on |change| of the sum when T grows from T1 to T2 (zeros on the line)."""
    g = zeros.truncate(T2).ordinates
    g = g[g > T1]
    return 2 * math.fsum(np.exp(u * (0.25 - g * g)) * math.exp(abs(v) / 2))


# -- small-u main terms ------------------------------------------------------------------

def _check_unit_interval(u: float) -> None:
    if not 0 < u < 1:
        raise ValueError(f"u must lie in (0, 1), got {u}")


def gaussian_sum_main_term(desc: SelbergDescriptor, u: float) -> float:
    """d/sqrt(16 pi u) (log(1/u) - gamma_0) + log(q / (4 pi)^d) / sqrt(4 pi u)."""
    _check_unit_interval(u)
    d = degree(desc)
    return (d / math.sqrt(16 * math.pi * u) * (math.log(1 / u) - EULER_GAMMA)
            + (log_conductor(desc) - d * math.log(4 * math.pi)) / math.sqrt(4 * math.pi * u))


def zeta_main_term_closed_form(u: float) -> float:
    """The zeta case written out: (log(1/u) - log(16 pi^2) - gamma_0) / sqrt(16 pi u)."""
    return (math.log(1 / u) - math.log(16 * math.pi ** 2) - EULER_GAMMA) / math.sqrt(16 * math.pi * u)


def gaussian_sum_prime_term(desc: SelbergDescriptor, u: float, m: int, sign: str) -> complex:
    """Leading term at v = -log m ("plus") or v = +log m ("minus")."""
    _check_unit_interval(u)
    if m < 2:
        raise ValueError(f"m must be at least 2, got {m}")
    lam = _provider(desc).lambda_F(m)
    scale = 1 / math.sqrt(4 * math.pi * u)
    if sign == "plus":
        return -lam * scale
    if sign == "minus":
        return -lam.conjugate() / m * scale
    raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")


def _provider(desc: SelbergDescriptor) -> CoeffProvider:
    if desc.coeffs is None:
        raise ValueError(f"descriptor {desc.name!r} carries no coefficients")
    return desc.coeffs


# -- the exact right side --------------------------------------------------------------

def default_n_max(u: float, v: float) -> int:
    """Smallest n with (|v| + log n)^2 / 4u beyond the cutoff exponent."""
    return max(2, int(math.exp(math.sqrt(4 * u * PRIME_CUTOFF_EXPONENT) + abs(v))) + 1)


@dataclass(frozen=True)
class ExplicitSide:
    total: complex
    terms: dict[str, complex]
    n_max: int


def gaussian_sum_explicit_rhs(desc: SelbergDescriptor, u: float, v: float, n_max: int | None = None,
                              spec: QuadratureSpec = DEFAULT_QUAD) -> ExplicitSide:
    """Every term of the exact explicit formula for sum_rho exp(u rho^2 - v rho)."""
    _check_unit_interval(u)
    n_max = n_max or default_n_max(u, v)
    k, lam = _provider(desc).prime_power_table(n_max)
    logk = np.log(k.astype(float))
    terms = {
        "pole": desc.pole_order * (math.exp(u - v) + 1.0) + 0j,
        "log_Q": 2 * desc.log_q * float(gaussian_density(v, u)) + 0j,
        "primes_plus": -csum(lam * gaussian_density(v + logk, u)),
        "primes_minus": -csum(np.conj(lam) / k * gaussian_density(v - logk, u)),
        "log_modulus": math.exp(u / 4 - v / 2) / math.pi * csum(
            [g.lam * log_modulus_integral(g.lam, g.mu, u, v, spec) for g in desc.gamma_factors]),
        "kernel": -csum([g.lam * kernel_integral_I(g.lam, g.mu, u, v, spec) for g in desc.gamma_factors]),
    }
    return ExplicitSide(csum(list(terms.values())), terms, n_max)


def gaussian_sum_report(zeros: ZeroTable, desc: SelbergDescriptor, params: ZeroSumParams,
                        n_max: int | None = None) -> SumReport:
    rhs = gaussian_sum_explicit_rhs(desc, params.u, params.v, n_max)
    return SumReport(gaussian_zero_sum(zeros, params), rhs.total, params,
                     int(np.searchsorted(zeros.ordinates, params.T, side="right")), params.tail_bound)


# -- the un-weighted sum of n^rho ---------------------------------------------------------

def landau_sum(zeros: ZeroTable, desc: SelbergDescriptor, n: int, T: float) -> tuple[complex, complex]:
    """(sum_{|gamma|<=T} n^rho, -(T/pi) Lambda_F(n))."""
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    logn = math.log(n)
    computed = paired_zero_sum(zeros, T, lambda r: np.exp(r * logn))
    return computed, -(T / math.pi) * _provider(desc).lambda_F(n)
