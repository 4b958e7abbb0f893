"""Generalized Li coefficients: from zeros, from the arithmetic formula, asymptotically."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .coeffs import PrimeSumEstimate, prime_sum_limits
from .descriptor import SelbergDescriptor, counting_density, degree
from .special import EULER_GAMMA, hurwitz_power_sum, psi_series_sum, quad
from .zeros_io import ZeroTable
from .zerosum import csum

DOUBLE_PRECISION_N_CAP = 30


class Method(str, enum.Enum):
    ZERO_SUM = "zerosum"
    ARITHMETIC = "arithmetic"
    ASYMPTOTIC = "asymptotic"


class PrecisionError(ArithmeticError):
    """Cancellation in a binomial sum exceeded the working precision."""


@dataclass(frozen=True)
class LiCoefficient:
    n: int
    value: complex
    method: Method
    error_bar: float
    # smooth estimate of the zeros beyond the table; kept apart from `value`
    tail: complex = 0j

    @property
    def corrected(self) -> complex:
        return self.value + self.tail


@dataclass(frozen=True)
class PrecisionContext:
    working_digits: int = 30

    def __post_init__(self):
        if self.working_digits < 15:
            raise ValueError("working_digits must be at least 15")

    def check(self, n: int) -> None:
        if abs(n) > 20 and self.working_digits < 2 * abs(n):
            raise PrecisionError(f"n = {n} needs at least {2 * abs(n)} working digits")


# -- from zeros -------------------------------------------------------------------------------

def _li_terms(rho: np.ndarray, n: int) -> np.ndarray:
    return -np.expm1(n * np.log1p(-1 / rho))


def li_zero_sum(zeros: ZeroTable, n: int, T: float | None = None, desc: SelbergDescriptor | None = None) -> LiCoefficient:
    """sum_{|gamma|<=T} [1 - (1 - 1/rho)^n], each listed zero paired with its conjugate.

    With a descriptor, the smooth tail beyond T (zeros on the line, counted by
    the main-term density) is estimated; its size is the error bar.
    """
    if n == 0:
        raise ValueError("Li coefficient index must be nonzero")
    T = zeros.max_ordinate if T is None else T
    sub = zeros.truncate(T)
    value = 0j
    if len(sub):
        rho = sub.rhos()
        value = csum(np.concatenate([_li_terms(rho, n), _li_terms(np.conj(rho), n)]))
    tail = li_tail(desc, n, T) if desc is not None and T > 0 else 0.0
    bar = abs(tail) if desc is not None else _crude_tail(n, T)
    return LiCoefficient(n, value, Method.ZERO_SUM, bar, complex(tail))


def _crude_tail(n: int, T: float) -> float:
    # degree-one density without a descriptor
    if T <= 2 * math.pi:
        return math.inf
    return n * n * (math.log(T / (2 * math.pi)) + 1) / (2 * math.pi * T)


def li_tail(desc: SelbergDescriptor, n: int, T: float) -> float:
    """int_T^inf (2 - 2 cos(n theta(t))) dM(t), theta(t) = 2 arctan(1/(2t))."""
    if T <= 0:
        raise ValueError("T must be positive")
    n = abs(n)

    def g(t):
        th = 2 * math.atan(0.5 / t)
        return 2 * (1 - math.cos(n * th)) * counting_density(desc, t)

    # beyond t = 64 n the integrand is n^2/t^2 times the density to high accuracy
    far = max(T, 64.0 * n)
    near = 0.0
    if far > T:
        edges = np.geomspace(T, far, 33)
        near = math.fsum(quad(g, a, b) for a, b in zip(edges[:-1], edges[1:]))
    d = degree(desc)
    # int_far^inf (n th)^2 ((d/2pi) log(t/2pi) + log q/2pi) dt with th ~ 1/t - 1/(12 t^3)
    lq = counting_density(desc, 2 * math.pi)  # = log q / 2pi
    far_part = n * n * (d / (2 * math.pi) * (math.log(far / (2 * math.pi)) + 1) + lq) / far
    return near + far_part


# -- arithmetic formula ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ArithmeticBreakdown:
    pole: complex
    linear: complex
    prime_sums: complex
    psi_terms: complex
    hurwitz_terms: complex


def li_arithmetic(desc: SelbergDescriptor, n: int, X: float = 1e7,
                  prec: PrecisionContext | None = None,
                  limits: list[PrimeSumEstimate] | None = None) -> LiCoefficient:
    """lambda_F(-n) from the arithmetic formula, summed in extended precision.

        m_F + n (log Q - (d/2) gamma_0)
        - sum_{l=1}^n C(n,l) (-1)^(l-1)/(l-1)! lim_X [sum_{k<=X} Lambda_F(k)/k (log k)^(l-1) - (m_F/l)(log X)^l]
        + n sum_j lam_j (-1/a_j + sum_{l>=1} a_j/(l(l+a_j)))
        + sum_j sum_{k=2}^n C(n,k) (-lam_j)^k sum_{l>=0} (l + a_j)^(-k),       a_j = lam_j + mu_j
    """
    if n < 1:
        raise ValueError("arithmetic formula is for n >= 1")
    prec = prec or PrecisionContext(max(30, 2 * n + 10))
    prec.check(n)
    if desc.coeffs is None:
        raise ValueError("descriptor carries no coefficients")
    if limits is None or len(limits) < n:
        limits = prime_sum_limits(desc.coeffs, n, X)
    with mpmath.workdps(prec.working_digits):
        parts, bar = _arithmetic_parts(desc, n, limits)
        total = parts.pole + parts.linear + parts.prime_sums + parts.psi_terms + parts.hurwitz_terms
        value = complex(total)
    return LiCoefficient(n, value, Method.ARITHMETIC, bar)


def _mpc(z: complex):
    return mpmath.mpc(z.real, z.imag)


def _arithmetic_parts(desc: SelbergDescriptor, n: int, limits) -> tuple[ArithmeticBreakdown, float]:
    d = mpmath.mpf(degree(desc))
    g0 = mpmath.euler
    pole = mpmath.mpf(desc.pole_order)
    linear = n * (mpmath.log(mpmath.mpf(desc.q_scale)) - d / 2 * g0)
    terms = []
    bar = mpmath.mpf(0)
    for l in range(1, n + 1):
        weight = mpmath.binomial(n, l) * (-1) ** (l - 1) / mpmath.factorial(l - 1)
        est = limits[l - 1]
        terms.append(-weight * _mpc(est.value))
        bar += abs(weight) * est.error_bar
    prime_sums = _tracked_sum(terms)
    psi_terms = mpmath.mpf(0)
    hurwitz_terms = mpmath.mpf(0)
    for g in desc.gamma_factors:
        lam = mpmath.mpf(g.lam)
        a = lam + _mpc(g.mu)
        psi_terms += n * lam * (-1 / a + mpmath.digamma(1 + a) + g0)
        hk = [mpmath.binomial(n, k) * (-lam) ** k * mpmath.zeta(k, a) for k in range(2, n + 1)]
        hurwitz_terms += _tracked_sum(hk) if hk else 0
    parts = ArithmeticBreakdown(pole, linear, prime_sums, psi_terms, hurwitz_terms)
    # double-precision inputs carry ~1e-16 relative error into every term
    scale = max([abs(t) for t in terms] + [mpmath.mpf(1)])
    bar += 1e-15 * float(scale)
    return parts, float(bar)


def _tracked_sum(terms):
    """Sum that raises if the digits lost to cancellation exceed the working precision."""
    total = mpmath.fsum(terms)
    biggest = max(abs(t) for t in terms)
    if biggest and total:
        lost = float(mpmath.log10(biggest / abs(total)))
        if lost > mpmath.mp.dps - 3:
            raise PrecisionError(f"cancellation lost {lost:.1f} of {mpmath.mp.dps} digits")
    return total


def li_arithmetic_double(desc: SelbergDescriptor, n: int, limits: list[PrimeSumEstimate]) -> complex:
    """The same formula in double precision (n capped); a cross-check of the extended path."""
    if not 1 <= n <= DOUBLE_PRECISION_N_CAP:
        raise PrecisionError(f"double-precision arithmetic formula is capped at n = {DOUBLE_PRECISION_N_CAP}")
    total = [desc.pole_order + n * (desc.log_q - degree(desc) / 2 * EULER_GAMMA)]
    for l in range(1, n + 1):
        total.append(-math.comb(n, l) * (-1) ** (l - 1) / math.factorial(l - 1) * limits[l - 1].value)
    for g in desc.gamma_factors:
        a = g.lam + g.mu
        total.append(n * g.lam * psi_series_sum(a))
        total += [math.comb(n, k) * (-g.lam) ** k * hurwitz_power_sum(a, k) for k in range(2, n + 1)]
    return csum(total)


# -- asymptotics ---------------------------------------------------------------------------------

def li_constant(desc: SelbergDescriptor) -> float:
    """c_F = (d/2)(gamma_0 - 1) + (1/2) log(lam Q^2), lam = prod lam_j^(2 lam_j)."""
    log_lam = math.fsum(2 * g.lam * math.log(g.lam) for g in desc.gamma_factors)
    return degree(desc) / 2 * (EULER_GAMMA - 1) + 0.5 * (log_lam + 2 * desc.log_q)


def li_asymptotic(desc: SelbergDescriptor, n: int) -> LiCoefficient:
    if n < 1:
        raise ValueError("asymptotic formula is for n >= 1")
    val = degree(desc) / 2 * n * math.log(n) + li_constant(desc) * n
    return LiCoefficient(n, complex(val), Method.ASYMPTOTIC, math.sqrt(n) * math.log(n + 1))


def li_constant_deviation(coef: LiCoefficient, desc: SelbergDescriptor, corrected: bool = True) -> float:
    """|lambda(-n)/n - (d/2) log n - c_F|."""
    val = (coef.corrected if corrected else coef.value).real
    n = abs(coef.n)
    return abs(val / n - degree(desc) / 2 * math.log(n) - li_constant(desc))


# -- positivity ------------------------------------------------------------------------------------

@dataclass(frozen=True)
class PositivityRow:
    n: int
    re_value: float
    passed: bool


@dataclass(frozen=True)
class PositivityReport:
    rows: list[PositivityRow]

    @property
    def all_positive(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def first_failure(self) -> int | None:
        return next((r.n for r in self.rows if not r.passed), None)

    def verdict(self) -> str:
        n_max = self.rows[-1].n if self.rows else 0
        if self.all_positive:
            return f"consistent with RH up to n = {n_max}"
        return f"Re lambda(n) <= 0 first at n = {self.first_failure}"


def li_positivity_report(zeros: ZeroTable, n_max: int, T: float | None = None) -> PositivityReport:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    T = zeros.max_ordinate if T is None else T
    sub = zeros.truncate(T)
    rows = []
    if len(sub):
        rho = sub.rhos()
        both = np.concatenate([rho, np.conj(rho)])
        log_ratio = np.log1p(-1 / both)
        for n in range(1, n_max + 1):
            val = csum(-np.expm1(n * log_ratio)).real
            rows.append(PositivityRow(n, val, val > 0))
    else:
        rows = [PositivityRow(n, 0.0, False) for n in range(1, n_max + 1)]
    return PositivityReport(rows)


def li_closed_form_first() -> float:
    """lambda_1 for zeta: 1 + gamma_0/2 - log(4 pi)/2."""
    return 1 + EULER_GAMMA / 2 - math.log(4 * math.pi) / 2
