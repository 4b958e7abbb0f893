"""Both sides of the explicit formula for a scaled, shifted test function.

The zero side is

    sum_rho e^{v(rho-1/2)} int f(x/u) e^{x(rho-1/2)} dx = sum_rho e^{v(rho-1/2)} u Phi(u(rho-1/2))

with Phi(s) = int f(x) e^{xs} dx.  The arithmetic side has eight term groups:
two prime sums, two pole terms, the log Q term, the digamma term and two
gamma-factor integrals.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .coeffs import CoeffProvider
from .descriptor import SelbergDescriptor, counting_density, degree, log_conductor
from .special import (DEFAULT_QUAD, QuadratureSpec, cquad, digamma, log_fourier_rhs, quad)
from .zeros_io import CoverageError, ZeroTable
from .zerosum import csum

TWO_PI = 2 * math.pi


class ConditionError(ValueError):
    """A test function fails one of the grid checks required by a formula."""


# -- test functions -------------------------------------------------------------------

class TestFunction:
    """Even, real test function with f, its Fourier transform and Phi(s) = int f e^{xs}.

    Subclasses provide `value`, `fourier`, `transform`, `fourier_derivative`,
    `fourier_envelope` (an upper bound for |fhat(t)|) and the regularity constants.
    """

    __test__ = False  # not a pytest class
    name = "test"
    has_closed_transform = True
    decay_b = 1.0
    holder_eps = 1.0
    holder_D = 1.0

    @property
    def f0(self) -> float:
        return float(self.value(0.0))

    def value(self, x):
        raise NotImplementedError

    def fourier(self, t):
        raise NotImplementedError

    def transform(self, s):
        raise NotImplementedError

    def fourier_derivative(self, t):
        t = np.asarray(t, dtype=float)
        h = 1e-6 * np.maximum(1.0, np.abs(t))
        return (self.fourier(t + h) - self.fourier(t - h)) / (2 * h)

    def fourier_envelope(self, t):
        raise NotImplementedError

    def fourier_cutoff(self, tol: float) -> float:
        """Smallest t (on a doubling-then-bisection search) with envelope(t') < tol for t' >= t."""
        hi = 1.0
        while self.fourier_envelope(hi) >= tol:
            hi *= 2
            if hi > 1e12:
                raise ConditionError(f"{self.name}: transform does not decay below {tol}")
        lo = 0.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if self.fourier_envelope(mid) >= tol:
                lo = mid
            else:
                hi = mid
        return hi

    def fourier_log_tail(self, t: float, lam: float) -> float:
        """int_{lam t}^inf fhat(-s/lam) log s ds, beyond the quadrature cutoff (negligible by default)."""
        return 0.0

    def kinks(self) -> list[float]:
        """Points where f is not smooth."""
        return []

    def support_radius(self) -> float:
        return math.inf

    def spec(self) -> str:
        return self.name

    def __add__(self, other: "TestFunction") -> "CombinedTestFunction":
        return CombinedTestFunction([(1.0, self), (1.0, other)])

    def __rmul__(self, c: float) -> "CombinedTestFunction":
        return CombinedTestFunction([(float(c), self)])


@dataclass(frozen=True, eq=False)
class Gaussian(TestFunction):
    """exp(-x^2/(4w)) / sqrt(4 pi w); Phi(s) = exp(w s^2), fhat(t) = exp(-w t^2)."""

    w: float = 0.05

    def __post_init__(self):
        if not self.w > 0:
            raise ValueError("Gaussian width w must be positive")

    @property
    def name(self):
        return f"gaussian:w={self.w:g}"

    def value(self, x):
        return np.exp(-np.square(x) / (4 * self.w)) / math.sqrt(4 * math.pi * self.w)

    def fourier(self, t):
        return np.exp(-self.w * np.square(t))

    def fourier_derivative(self, t):
        return -2 * self.w * np.asarray(t) * np.exp(-self.w * np.square(t))

    def transform(self, s):
        return np.exp(self.w * np.square(s))

    def fourier_envelope(self, t):
        return math.exp(-self.w * t * t)

    @property
    def holder_D(self):
        return 1.0 / (4 * self.w)


@dataclass(frozen=True, eq=False)
class BiExponential(TestFunction):
    """exp(-a|x|); Phi(s) = 2a/(a^2 - s^2) on |Re s| < a, fhat(t) = 2a/(a^2 + t^2)."""

    a: float = 1.2

    def __post_init__(self):
        if not self.a > 0.5:
            raise ConditionError(f"two-sided exponential needs a > 1/2, got {self.a}")

    @property
    def name(self):
        return f"biexp:a={self.a:g}"

    @property
    def decay_b(self):
        return self.a - 0.5

    @property
    def holder_D(self):
        return self.a

    def value(self, x):
        return np.exp(-self.a * np.abs(x))

    def fourier(self, t):
        return 2 * self.a / (self.a ** 2 + np.square(t))

    def fourier_derivative(self, t):
        t = np.asarray(t, dtype=float)
        return -4 * self.a * t / (self.a ** 2 + t * t) ** 2

    def transform(self, s):
        s = np.asarray(s, dtype=complex)
        if np.any(np.abs(s.real) >= self.a):
            raise ConditionError("Phi(s) of the two-sided exponential needs |Re s| < a")
        return 2 * self.a / (self.a ** 2 - s * s)

    def fourier_envelope(self, t):
        return 2 * self.a / (self.a ** 2 + t * t)

    def fourier_log_tail(self, t, lam):
        # int_{lam t}^inf (2a/(a^2 + s^2/lam^2)) log s ds ~ 2a lam^2 (log(lam t) + 1)/(lam t)
        x = lam * t
        return 2 * self.a * lam * lam * (math.log(x) + 1) / x

    def kinks(self):
        return [0.0]


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss_legendre(n: int):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


@dataclass(frozen=True, eq=False)
class Bump(TestFunction):
    """exp(-1/(1 - (x/r)^2)) on |x| < r, zero outside; transforms by Gauss-Legendre."""

    r: float = 3.0
    nodes: int = 800
    has_closed_transform = False

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("bump radius must be positive")

    @property
    def name(self):
        return f"bump:r={self.r:g}"

    @property
    def holder_D(self):
        return 2.0 / self.r

    def value(self, x):
        y = np.asarray(x, dtype=float) / self.r
        inside = np.abs(y) < 1
        den = np.where(inside, 1 - y * y, 1.0)
        return np.where(inside, np.exp(-1 / den), 0.0)

    def _half_line(self):
        x, w = _gauss_legendre(self.nodes)
        return (x + 1) * self.r / 2, w * self.r / 2

    def transform(self, s):
        s = np.asarray(s, dtype=complex)
        x, w = self._half_line()
        fx = w * self.value(x)
        flat = s.reshape(-1)
        out = np.empty(flat.shape, dtype=complex)
        for i in range(0, flat.size, 512):
            out[i:i + 512] = 2 * (np.cosh(np.outer(flat[i:i + 512], x)) @ fx)
        return out.reshape(s.shape) if s.ndim else complex(out[0])

    def fourier(self, t):
        t = np.asarray(t, dtype=float)
        x, w = self._half_line()
        fx = w * self.value(x)
        flat = t.reshape(-1)
        out = np.empty(flat.shape)
        for i in range(0, flat.size, 512):
            out[i:i + 512] = 2 * (np.cos(np.outer(flat[i:i + 512], x)) @ fx)
        cut = self.fourier_cutoff(1e-17)
        out[np.abs(flat) > cut] = 0.0
        return out.reshape(t.shape) if t.ndim else float(out[0])

    def fourier_envelope(self, t):
        # empirical bound, checked against the numeric transform in the tests
        return 1.34 * min(1.0, 5 * math.exp(-math.sqrt(self.r * abs(t))))

    def kinks(self):
        return [-self.r, self.r]

    def support_radius(self):
        return self.r


@dataclass(frozen=True, eq=False)
class CombinedTestFunction(TestFunction):
    """Finite linear combination sum_k c_k f_k."""

    terms: list = field(default_factory=list)

    @property
    def name(self):
        return " + ".join(f"{c:g}*{f.name}" for c, f in self.terms)

    @property
    def has_closed_transform(self):
        return all(f.has_closed_transform for _, f in self.terms)

    @property
    def decay_b(self):
        return min(f.decay_b for _, f in self.terms)

    def _combine(self, attr, *args):
        return sum(c * getattr(f, attr)(*args) for c, f in self.terms)

    def value(self, x):
        return self._combine("value", x)

    def fourier(self, t):
        return self._combine("fourier", t)

    def fourier_derivative(self, t):
        return self._combine("fourier_derivative", t)

    def transform(self, s):
        return self._combine("transform", s)

    def fourier_envelope(self, t):
        return sum(abs(c) * f.fourier_envelope(t) for c, f in self.terms)

    def fourier_log_tail(self, t, lam):
        return sum(c * f.fourier_log_tail(t, lam) for c, f in self.terms)

    def kinks(self):
        return sorted({k for _, f in self.terms for k in f.kinks()})

    def support_radius(self):
        return max(f.support_radius() for _, f in self.terms)

    def __add__(self, other):
        extra = other.terms if isinstance(other, CombinedTestFunction) else [(1.0, other)]
        return CombinedTestFunction(self.terms + extra)

    def __rmul__(self, c):
        return CombinedTestFunction([(c * a, f) for a, f in self.terms])


_SPEC_RE = re.compile(r"^(gaussian|biexp|bump):(\w+)=([0-9.eE+-]+)$")


def parse_test_function(spec: str) -> TestFunction:
    """`gaussian:w=0.05`, `biexp:a=1.2` or `bump:r=3`."""
    m = _SPEC_RE.match(spec.strip())
    if not m:
        raise ValueError(f"bad test function spec {spec!r}; want e.g. gaussian:w=0.05")
    kind, key, val = m.groups()
    expected = {"gaussian": "w", "biexp": "a", "bump": "r"}[kind]
    if key != expected:
        raise ValueError(f"{kind} takes parameter {expected!r}, got {key!r}")
    x = float(val)
    return {"gaussian": Gaussian, "biexp": BiExponential, "bump": Bump}[kind](x)


BUNDLED_TEST_FUNCTIONS = ("gaussian:w=0.05", "biexp:a=1.2", "bump:r=3")


# -- grid checks on the test-function hypotheses --------------------------------------

@dataclass(frozen=True)
class ConditionReport:
    normalized: bool
    weighted_decay: bool
    holder_at_zero: bool
    holder_uniform: bool
    log_integrable: bool

    @property
    def ok(self) -> bool:
        return all((self.normalized, self.weighted_decay, self.holder_at_zero, self.log_integrable))


def check_conditions(f: TestFunction, x_max: float = 40.0, points: int = 4000) -> ConditionReport:
    x = np.linspace(-x_max, x_max, points + 1)
    fx = np.asarray(f.value(x), dtype=complex)
    eps = 1e-9
    normalized = bool(np.allclose(fx, 0.5 * (f.value(x + eps) + f.value(x - eps)), atol=1e-6))
    weighted = np.abs(fx) * np.exp((0.5 + f.decay_b) * np.abs(x))
    # bounded weighted profile that does not blow up at the ends of the grid
    weighted_decay = bool(np.all(np.isfinite(weighted)) and weighted[-1] <= weighted.max() and weighted.max() < 1e8)
    h = np.logspace(-8, -1, 30)
    f0 = f.f0
    holder0 = np.abs(f.value(h) - f0) <= f.holder_D * h ** f.holder_eps * (1 + 1e-9) + 1e-14
    holder0 &= np.abs(f.value(-h) - f0) <= f.holder_D * h ** f.holder_eps * (1 + 1e-9) + 1e-14
    dx = np.diff(x)
    slopes = np.abs(np.diff(fx.real)) / dx ** f.holder_eps
    holder_uniform = bool(np.all(slopes <= f.holder_D * (1 + 1e-6) + 1e-12))
    t = np.logspace(0, 3, 40)
    tail = np.abs(f.fourier(t)) * t * np.log(t + 1)
    log_integrable = bool(tail[-1] <= max(tail.max(), 1e-300) and np.all(np.isfinite(tail)))
    return ConditionReport(normalized, weighted_decay, bool(np.all(holder0)), holder_uniform, log_integrable)


def require_conditions(f: TestFunction, shifted: bool = False) -> None:
    rep = check_conditions(f)
    if not rep.ok or (shifted and not rep.holder_uniform):
        raise ConditionError(f"{f.name}: test-function conditions fail on the grid: {rep}")


# -- zero side ------------------------------------------------------------------------------

def zero_side_tail(f: TestFunction, desc: SelbergDescriptor, u: float, v: float, T: float,
                   spec: QuadratureSpec = DEFAULT_QUAD) -> complex:
    """Smooth estimate of the part of the zero side beyond T (zeros on the line)."""
    upper = f.fourier_cutoff(1e-18) / u
    if upper <= T:
        return 0j

    def g(t):
        return 2 * u * math.cos(v * t) * float(np.real(f.fourier(u * t))) * counting_density(desc, t)

    return complex(_oscillatory_tail(g, T, upper, spec))


def _oscillatory_tail(g, a, b, spec):
    edges = np.linspace(a, b, 65) if b - a > 64 else np.array([a, b])
    return math.fsum(quad(g, lo, hi, spec, "zero-side tail") for lo, hi in zip(edges[:-1], edges[1:]))


def zero_side(zeros: ZeroTable, f: TestFunction, u: float, v: float, T: float | None = None) -> complex:
    """sum_{|gamma|<=T} e^{v(rho-1/2)} u Phi(u(rho-1/2)), conjugate-paired."""
    if not u > 0:
        raise ValueError("u must be positive")
    T = zeros.max_ordinate if T is None else T
    sub = zeros.truncate(T)
    if not len(sub):
        return 0j
    rho = sub.rhos()
    z = np.concatenate([rho, np.conj(rho)]) - 0.5
    if sub.on_critical_line:
        # Phi(i u gamma) = fhat(-u gamma)
        phi = np.asarray(f.fourier(-u * z.imag), dtype=complex)
    else:
        phi = np.asarray(f.transform(u * z), dtype=complex)
    return csum(np.exp(v * z) * u * phi)


def zero_side_cutoff(f: TestFunction, u: float, tol: float = 1e-12) -> float:
    """Ordinate beyond which the transform weight is below tol."""
    return f.fourier_cutoff(tol) / u


# -- arithmetic side ------------------------------------------------------------------------

@dataclass(frozen=True)
class ExplicitFormulaReport:
    zero_side: complex
    arithmetic_side: complex
    term_breakdown: dict[str, complex]
    residual: complex
    error_budget: float = 0.0


def _provider(desc: SelbergDescriptor) -> CoeffProvider:
    if desc.coeffs is None:
        raise ValueError(f"descriptor {desc.name!r} carries no coefficients")
    return desc.coeffs


def _prime_reach(f: TestFunction, u: float, v: float, limit: int) -> int:
    """n_max beyond which f((+-log n - v)/u)/sqrt(n) is negligible (capped at limit)."""
    if f.support_radius() < math.inf:
        return min(limit, max(2, int(math.exp(abs(v) + u * f.support_radius())) + 1))
    x = 1.0
    while x < 1e3 and abs(f.value(x)) * math.exp(-0.5 * max(0.0, u * x - abs(v))) > 1e-20:
        x *= 1.25
    reach = abs(v) + u * x
    return min(limit, max(2, int(math.exp(min(reach, 50.0))) + 1))


def prime_sum_terms(desc: SelbergDescriptor, f: TestFunction, u: float, v: float,
                    n_max: int) -> tuple[complex, complex, float]:
    """(T1, T2, tail estimate) with n <= n_max; tail via the smooth prime-power density m_F dx."""
    k, lam = _provider(desc).prime_power_table(n_max)
    logk = np.log(k.astype(float))
    w = 1 / np.sqrt(k.astype(float))
    t1 = -csum(lam * w * f.value((logk - v) / u))
    t2 = -csum(np.conj(lam) * w * f.value((-logk - v) / u))
    tail = 0.0
    if desc.pole_order:
        y0 = math.log(n_max)

        def dens(y, sign):
            # sum over n > n_max of n^{-1/2} f((sign log n - v)/u) ~ int e^{y/2} f(...) dy
            return math.exp(y / 2) * float(np.real(f.value((sign * y - v) / u)))

        if abs(f.value((y0 - v) / u)) * math.exp(y0 / 2) > 1e-30 or abs(f.value((-y0 - v) / u)) * math.exp(y0 / 2) > 1e-30:
            upper = y0 + 200 * u
            tail = -desc.pole_order * (quad(lambda y: dens(y, 1), y0, upper) + quad(lambda y: dens(y, -1), y0, upper))
    return t1, t2, tail


def arithmetic_side(desc: SelbergDescriptor, f: TestFunction, u: float, v: float,
                    n_max: int | None = None, spec: QuadratureSpec = DEFAULT_QUAD,
                    check: bool = True) -> dict[str, complex]:
    """All eight term groups, keyed by name."""
    if not 0 < u <= 1:
        raise ValueError(f"u must lie in (0, 1], got {u}")
    if check:
        require_conditions(f, shifted=v != 0)
    n_max = n_max or _prime_reach(f, u, v, 10**7)
    t1, t2, tail = prime_sum_terms(desc, f, u, v, n_max)
    fv = complex(f.value(-v / u))
    terms: dict[str, complex] = {
        "primes_plus": t1,
        "primes_minus": t2,
        "primes_tail": complex(tail),
        "pole_plus": desc.pole_order * u * math.exp(v / 2) * complex(f.transform(u / 2)),
        "pole_minus": desc.pole_order * u * math.exp(-v / 2) * complex(f.transform(-u / 2)),
        "log_Q": 2 * fv * desc.log_q,
        "digamma": fv * csum([g.lam * (digamma(g.lam / 2 + g.mu) + digamma(g.lam / 2 + g.mu.conjugate()))
                              for g in desc.gamma_factors]),
    }
    t7 = []
    t8 = []
    for g in desc.gamma_factors:
        t7.append(-g.lam * _gamma_integral(f, u, v, g.lam, g.lam / 2 + g.mu, -1.0, spec))
        t8.append(-g.lam * _gamma_integral(f, u, v, g.lam, g.lam / 2 + g.mu.conjugate(), 1.0, spec))
    terms["gamma_left"] = csum(t7)
    terms["gamma_right"] = csum(t8)
    return terms


def _gamma_integral(f: TestFunction, u: float, v: float, lam: float, a: complex, sign: float,
                    spec: QuadratureSpec) -> complex:
    """int_0^inf (f((sign lam x - v)/u) - f(-v/u)) e^{-a x}/(1 - e^{-x}) dx."""
    fv = complex(f.value(-v / u))
    decay = a.real
    x_end = (math.log(1 / spec.abs_tol) + 10) / decay

    def g(x):
        if x < 1e-12:
            x = 1e-12
        return (complex(f.value((sign * lam * x - v) / u)) - fv) * np.exp(-a * x) / -math.expm1(-x)

    # breakpoints: kinks of f mapped back to x, and the scale u/lam near 0
    pts = {u / lam, 1.0}
    for k in f.kinks() + [0.0]:
        x = (u * k + v) / (sign * lam)
        if 0 < x < x_end:
            pts.add(x)
    if f.support_radius() < math.inf:
        for k in (-f.support_radius(), f.support_radius()):
            x = (u * k + v) / (sign * lam)
            if 0 < x < x_end:
                pts.add(x)
    center = v / (sign * lam)
    if 0 < center < x_end:
        for d in (-8, -3, -1, 1, 3, 8):
            x = center + d * u / lam
            if 0 < x < x_end:
                pts.add(x)
    edges = sorted(p for p in pts if 0 < p < x_end)
    edges = [0.0] + edges + [x_end]
    return sum((cquad(g, lo, hi, spec, "gamma-factor integral") for lo, hi in zip(edges[:-1], edges[1:])), 0j)


def counting_offset(zeros: ZeroTable, desc: SelbergDescriptor, T: float, samples: int = 20000) -> float:
    """Mean of N(t) - M(t) over [T/2, T], M the smooth counting term."""
    t = np.linspace(T / 2, T, samples)
    n = np.searchsorted(zeros.ordinates, t, side="right")
    return float(np.mean(n - _smooth_count(desc, t)))


def explicit_formula_report(zeros: ZeroTable, desc: SelbergDescriptor, f: TestFunction, u: float,
                            v: float, T: float | None = None, tail: bool = True) -> ExplicitFormulaReport:
    """Zero side, arithmetic side and their residual.

    When the transform weight is not negligible at the end of the table, the
    zeros beyond T are replaced by the smooth counting density.  The sum is then
    cut midway between the last two ordinates, and the boundary term
    (N - M - c) w(T) of the integration by parts is subtracted, c being the
    mean offset of N - M.
    """
    T = zeros.max_ordinate if T is None else T
    budget = 0.0
    cut = zero_side_cutoff(f, u, 1e-18)
    if tail and zeros.on_critical_line and cut > T:
        g = zeros.truncate(T).ordinates
        if len(g) < 2:
            raise CoverageError("tail correction needs at least two zeros below T")
        T = 0.5 * (g[-1] + g[-2])
        zs = zero_side(zeros, f, u, v, T)
        w_T = 2 * u * math.cos(v * T) * float(np.real(f.fourier(u * T)))
        offset = counting_offset(zeros, desc, T)
        s_T = (len(g) - 1) - float(_smooth_count(desc, T)) - offset
        zs += zero_side_tail(f, desc, u, v, T) - s_T * w_T
        # what is left is int (N - M - c) w' beyond T, a fraction of one weight
        budget = 0.25 * abs(w_T) + 2 * u * f.fourier_envelope(u * T) / max(1.0, math.log(T))
    else:
        zs = zero_side(zeros, f, u, v, T)
    terms = arithmetic_side(desc, f, u, v)
    ar = csum(list(terms.values()))
    return ExplicitFormulaReport(zs, ar, terms, zs - ar, budget)


# -- small-u predictions ---------------------------------------------------------------------

@dataclass(frozen=True)
class ShiftClass:
    kind: str  # "generic", "zero", "plus" (v = log m), "minus" (v = -log m)
    m: int = 0


def classify_shift(v: float, tol: float = 1e-12, m_max: int = 10**6) -> ShiftClass:
    if abs(v) <= tol:
        return ShiftClass("zero")
    m = round(math.exp(abs(v))) if abs(v) < math.log(m_max) + 1 else 0
    hits = [k for k in (m - 1, m, m + 1) if 2 <= k <= m_max and abs(abs(v) - math.log(k)) <= tol]
    if len(hits) > 1:
        raise ValueError(f"shift {v} is ambiguous between log {hits[0]} and log {hits[1]}")
    if hits:
        return ShiftClass("plus" if v > 0 else "minus", hits[0])
    return ShiftClass("generic")


def even_part_log_integral(f: TestFunction, lam: float, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """int_0^inf ((f(lam x) + f(-lam x))/2 - f(0) e^{-x}) dx/x."""
    return -log_fourier_rhs(f, lam, spec)


def scaled_sum_v0_prediction(desc: SelbergDescriptor, f: TestFunction, u: float,
                             spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Small-u value of the zero side at v = 0:

        f(0) (2 log Q - d log u) - 2 sum_j lam_j int_0^inf ((f(lam_j x)+f(-lam_j x))/2 - f(0)e^{-x}) dx/x
    """
    f0 = f.f0
    return (f0 * (2 * desc.log_q - degree(desc) * math.log(u))
            - 2 * math.fsum(g.lam * even_part_log_integral(f, g.lam, spec) for g in desc.gamma_factors))


def scaled_sum_v0_prediction_alt(desc: SelbergDescriptor, f: TestFunction, u: float,
                                 spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Variant constant -f(0)[2 log Q + sum_j lam_j log|(lam_j/2 + mu_j) u^2|]; reported, not used."""
    f0 = f.f0
    const = 2 * desc.log_q + math.fsum(g.lam * math.log(abs((g.lam / 2 + g.mu) * u * u)) for g in desc.gamma_factors)
    return (-f0 * const
            - 2 * math.fsum(g.lam * even_part_log_integral(f, g.lam, spec) for g in desc.gamma_factors))


def scaled_sum_prediction(desc: SelbergDescriptor, f: TestFunction, u: float, v: float) -> complex:
    """Leading small-u value of the zero side for a given shift v."""
    if not 0 < u < 0.5:
        raise ValueError(f"u must lie in (0, 1/2), got {u}")
    cls = classify_shift(v)
    if cls.kind == "generic":
        return 0j
    if cls.kind == "zero":
        if not np.isclose(f.value(1e-12), f.value(-1e-12), atol=1e-9):
            raise ConditionError("v = 0 prediction needs f continuous at 0")
        return complex(scaled_sum_v0_prediction(desc, f, u))
    lam = _provider(desc).lambda_F(cls.m)
    coef = lam if cls.kind == "plus" else lam.conjugate()
    return -coef * f.f0 / math.sqrt(cls.m)


# -- counting error integral ------------------------------------------------------------------

def _weight(f: TestFunction, u: float, T):
    T = np.asarray(T, dtype=float)
    return np.real(f.fourier(-u * T) + f.fourier(u * T))


def _weight_derivative(f: TestFunction, u: float, T):
    T = np.asarray(T, dtype=float)
    return u * np.real(f.fourier_derivative(u * T) - f.fourier_derivative(-u * T))


def _smooth_count(desc: SelbergDescriptor, T):
    T = np.asarray(T, dtype=float)
    d = degree(desc)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = d / TWO_PI * T * np.log(T / TWO_PI) + T / TWO_PI * (log_conductor(desc) - d)
    return np.where(T > 0, val, 0.0)


def counting_error_integral(desc: SelbergDescriptor, f: TestFunction, u: float, zeros: ZeroTable,
                            T_max: float, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """-u int_0^inf (N(T) - M(T)) d/dT (fhat(-uT) + fhat(uT)) dT, M the smooth counting term.

    N is the step function of the zero table.  Between consecutive ordinates
    N is constant, so its part is summed exactly; M g' is integrated by
    quadrature on the same intervals.
    """
    if not zeros.on_critical_line:
        raise ValueError("the counting error integral assumes every zero on the critical line")
    if f.fourier_envelope(u * T_max) > 1e-8:
        raise CoverageError(f"transform mass beyond u T_max = {u * T_max:g} exceeds 1e-8")
    g_ord = zeros.truncate(T_max).ordinates
    g_at = _weight(f, u, g_ord)
    g_end = float(_weight(f, u, T_max))
    n = len(g_ord)
    # sum_k k (g(gamma_{k+1}) - g(gamma_k)) with gamma_{n+1} := T_max
    step = math.fsum(np.arange(1, n + 1) * (np.append(g_at[1:], g_end) - g_at)) if n else 0.0
    edges = np.concatenate([[0.0], g_ord, [T_max]])
    edges = _refine(edges, 2.0 / u * 0.25)

    def mg(T):
        return float(_smooth_count(desc, T) * _weight_derivative(f, u, T))

    smooth = math.fsum(quad(mg, lo, hi, spec, "counting error integral")
                       for lo, hi in zip(edges[:-1], edges[1:]) if hi > lo)
    # beyond T_max: N is frozen at n, and the integral of M g' is done on [T_max, cutoff]
    cut = max(T_max, zero_side_cutoff(f, u, 1e-18))
    beyond = n * (0.0 - g_end)
    if cut > T_max:
        beyond_edges = _refine(np.array([T_max, cut]), 2.0 / u * 0.25)
        smooth += math.fsum(quad(mg, lo, hi, spec) for lo, hi in zip(beyond_edges[:-1], beyond_edges[1:]))
    return -u * (step + beyond - smooth)


def _refine(edges: np.ndarray, max_width: float) -> np.ndarray:
    out = [edges[0]]
    for lo, hi in zip(edges[:-1], edges[1:]):
        k = max(1, int(math.ceil((hi - lo) / max_width)))
        out.extend(np.linspace(lo, hi, k + 1)[1:])
    return np.array(out)


def counting_identity_terms(desc: SelbergDescriptor, f: TestFunction, u: float,
                            spec: QuadratureSpec = DEFAULT_QUAD) -> dict[str, float]:
    """Analytic terms of the rearranged zero sum over all ordinates at v = 0."""
    d = degree(desc)
    f0 = f.f0
    return {
        "log_q": f0 * log_conductor(desc),
        "log_2pi_u": -d * math.log(TWO_PI * u) * f0,
        "log_fourier": -d * even_part_log_integral(f, 1.0, spec),
    }


def counting_error_by_rearrangement(desc: SelbergDescriptor, f: TestFunction, u: float,
                                    zeros: ZeroTable, T_max: float) -> float:
    """The same error integral, as (zero side at v = 0) minus its analytic terms."""
    zs = zero_side(zeros, f, u, 0.0, T_max).real
    return zs - math.fsum(counting_identity_terms(desc, f, u).values())


__all__ = [
    "BUNDLED_TEST_FUNCTIONS", "BiExponential", "Bump", "CombinedTestFunction", "ConditionError",
    "ConditionReport", "ExplicitFormulaReport", "Gaussian", "ShiftClass", "TestFunction",
    "arithmetic_side", "check_conditions", "counting_offset", "classify_shift", "counting_error_by_rearrangement",
    "counting_error_integral", "counting_identity_terms", "even_part_log_integral",
    "explicit_formula_report", "parse_test_function", "require_conditions", "scaled_sum_prediction",
    "scaled_sum_v0_prediction", "scaled_sum_v0_prediction_alt", "zero_side", "zero_side_cutoff",
    "zero_side_tail",
]
