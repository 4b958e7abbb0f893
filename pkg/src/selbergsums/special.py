"""Special functions and quadrature kernels shared by the explicit formulas."""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, special as sp

EULER_GAMMA = float(np.euler_gamma)
SQRT_PI = math.sqrt(math.pi)


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved error estimate {achieved:.3g})")
        self.achieved = achieved


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("quadrature tolerances must be positive")

    def gaussian_cutoff(self, scale: float = 1.0) -> float:
        """Half-width W (in units of the Gaussian exponent) with e^{-W} < abs_tol/scale."""
        return math.log(max(scale, 1.0) / self.abs_tol)


DEFAULT_QUAD = QuadratureSpec()


def quad(f: Callable[[float], float], a: float, b: float, spec: QuadratureSpec = DEFAULT_QUAD,
         what: str = "integral", **kw) -> float:
    """scipy.integrate.quad that raises instead of warning on non-convergence."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err, *rest = integrate.quad(
            f, a, b, epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.max_subdivisions,
            full_output=1, **kw)
    ier = rest[1] if len(rest) > 1 else 0
    if ier not in (0,) and err > max(spec.abs_tol, spec.rel_tol * abs(val)) * 1e3:
        raise QuadratureError(f"{what} on [{a}, {b}] did not converge", err)
    return val


def cquad(f: Callable[[float], complex], a: float, b: float, spec: QuadratureSpec = DEFAULT_QUAD,
          what: str = "integral", **kw) -> complex:
    re = quad(lambda x: f(x).real, a, b, spec, what, **kw)
    im = quad(lambda x: f(x).imag, a, b, spec, what, **kw)
    return complex(re, im)


# -- digamma ---------------------------------------------------------------------

def digamma(z: complex) -> complex:
    z = complex(z)
    if z.real <= 0:
        raise ValueError(f"digamma is only offered for Re(z) > 0, got {z}")
    val = complex(sp.digamma(z))
    return val if z.imag else complex(val.real, 0.0)


def kernel_h(x):
    """1/(e^x - 1) - 1/x + 1, which lies in [0, 1] for x > 0."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-3
    xs = np.where(small, 1.0, x)
    out = 1.0 / np.expm1(xs) - 1.0 / xs + 1.0
    series = 0.5 + x / 12.0 - x**3 / 720.0
    res = np.where(small, series, out)
    return float(res) if res.ndim == 0 else res


def digamma_by_integral(z: complex, spec: QuadratureSpec = DEFAULT_QUAD) -> complex:
    """log z - int_0^inf h(x) e^{-zx} dx; the quadrature oracle for `digamma`."""
    z = complex(z)
    if z.real <= 0:
        raise ValueError("integral representation needs Re(z) > 0")
    upper = spec.gaussian_cutoff() / z.real + 1.0
    tail = cquad(lambda x: kernel_h(x) * cmath.exp(-z * x), 0.0, upper, spec, "digamma integral",
                 points=[1.0] if upper > 1 else None)
    return cmath.log(z) - tail


# -- Gaussian integrals ---------------------------------------------------------------

def gaussian_fourier(u: float, a: complex) -> complex:
    """Closed form of int e^{-u t^2 + i t a} dt = sqrt(pi/u) exp(-a^2/(4u))."""
    if not u > 0:
        raise ValueError(f"Gaussian Fourier integral needs u > 0, got {u}")
    return math.sqrt(math.pi / u) * cmath.exp(-complex(a) ** 2 / (4 * u))


def gaussian_density(y, u: float):
    """exp(-y^2/(4u)) / sqrt(4 pi u)."""
    return np.exp(-np.square(y) / (4 * u)) / math.sqrt(4 * math.pi * u)


def kernel_integral_I(lam: float, mu: complex, u: float, v: float,
                      spec: QuadratureSpec = DEFAULT_QUAD) -> complex:
    """Sum of the two kernel-weighted Gaussian integrals of the gamma factor.

        int_0^inf h(x) e^{-mu x}          G(v + lam x) dx
      + int_0^inf h(x) e^{-(lam+conj mu)x} G(v - lam x) dx

    with G(y) = e^{-y^2/4u}/sqrt(4 pi u).  Each integrand is cut off where the
    Gaussian factor falls below abs_tol.
    """
    if not (u > 0 and lam > 0):
        raise ValueError("kernel integral needs u > 0 and lambda > 0")
    mu = complex(mu)
    half = math.sqrt(4 * u * spec.gaussian_cutoff(1.0 / math.sqrt(4 * math.pi * u)))

    def piece(center: float, damp: complex, sign: float) -> complex:
        lo = max(0.0, (center - half) / lam)
        hi = (center + half) / lam
        if hi <= 0:
            return 0j
        mid = center / lam
        pts = [mid] if lo < mid < hi else None
        return cquad(lambda x: kernel_h(x) * cmath.exp(-damp * x) * gaussian_density(v + sign * lam * x, u),
                     lo, hi, spec, "kernel integral", points=pts)

    return piece(-v, mu, 1.0) + piece(v, lam + mu.conjugate(), -1.0)


def log_modulus_integral(lam: float, mu: complex, u: float, v: float,
                         spec: QuadratureSpec = DEFAULT_QUAD) -> complex:
    """int log|(lam/2 + mu) + i lam t| exp(-u t^2 + i t (u - v)) dt over the real line."""
    if not u > 0:
        raise ValueError(f"log-modulus integral needs u > 0, got {u}")
    a = lam / 2 + complex(mu)
    omega = u - v
    t_max = math.sqrt((spec.gaussian_cutoff() + 2 * math.log(10 + 1 / u)) / u)

    def even(t):
        return 0.5 * (math.log(abs(a + 1j * lam * t)) + math.log(abs(a - 1j * lam * t))) * math.exp(-u * t * t)

    def odd(t):
        return 0.5 * (math.log(abs(a + 1j * lam * t)) - math.log(abs(a - 1j * lam * t))) * math.exp(-u * t * t)

    if abs(omega) * t_max < 1.0:
        re = 2 * quad(lambda t: even(t) * math.cos(omega * t), 0.0, t_max, spec, "log-modulus integral")
        im = 2 * quad(lambda t: odd(t) * math.sin(omega * t), 0.0, t_max, spec, "log-modulus integral") \
            if complex(mu).imag else 0.0
    else:
        re = 2 * quad(even, 0.0, t_max, spec, "log-modulus integral", weight="cos", wvar=omega)
        im = 2 * quad(odd, 0.0, t_max, spec, "log-modulus integral", weight="sin", wvar=omega) \
            if complex(mu).imag else 0.0
    return complex(re, im)


def log_modulus_integral_rescaled(lam: float, mu: float, u: float,
                                  spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """The v = u case after t -> t/sqrt(u): int_0^inf log(a^2 + lam^2 t^2/u) e^{-t^2} dt/sqrt(u).

    Real mu only; used as a second quadrature path for `log_modulus_integral`.
    """
    a = lam / 2 + mu
    t_max = math.sqrt(spec.gaussian_cutoff() + 10.0)
    val = quad(lambda t: math.log(a * a + lam * lam * t * t / u) * math.exp(-t * t), 0.0, t_max, spec)
    return val / math.sqrt(u)


def log_modulus_main_terms(lam: float, u: float, constant: str = "expansion") -> float:
    """Small-u main terms of the log-modulus integral at v = 0 or v = u.

    ``constant`` selects the constant term: "expansion" uses sqrt(pi/(4u)) log(lam^2/4),
    which is what the direct Gaussian expansion produces; "wide" and "wide_halved"
    use sqrt(pi/u) log(lam^2/4) and sqrt(pi/u) log(lam^2/2). Only "expansion" is
    bounded as u -> 0 for every lam; the others are kept for comparison.
    """
    lead = math.sqrt(math.pi / (4 * u)) * (math.log(1 / u) - EULER_GAMMA)
    consts = {
        "expansion": math.sqrt(math.pi / (4 * u)) * math.log(lam * lam / 4),
        "wide": math.sqrt(math.pi / u) * math.log(lam * lam / 4),
        "wide_halved": math.sqrt(math.pi / u) * math.log(lam * lam / 2),
    }
    return lead + consts[constant]


# -- series ----------------------------------------------------------------------------

# B_2, B_4, ..., B_20
_BERNOULLI = [1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510,
              43867 / 798, -174611 / 330]


def hurwitz_power_sum(a: complex, k: int, n_direct: int = 64) -> complex:
    """sum_{l>=0} (l + a)^(-k): direct sum of n_direct terms plus an Euler-Maclaurin tail."""
    if k < 2:
        raise ValueError(f"power sum needs k >= 2, got {k}")
    a = complex(a)
    if a.real <= 0:
        raise ValueError(f"power sum needs Re(a) > 0, got {a}")
    n = max(int(n_direct), int(abs(a.imag)) + 32)
    l = np.arange(n, dtype=float)
    terms = (l + a) ** (-k)
    head = complex(math.fsum(terms.real), math.fsum(terms.imag))
    x = n + a
    tail = x ** (1 - k) / (k - 1) + 0.5 * x ** (-k)
    # f^(2j-1)(x) = -(k)_(2j-1) x^(-k-2j+1); EM term is -B_2j/(2j)! f^(2j-1)
    rising = float(k)
    fact = 2.0
    for j, b2j in enumerate(_BERNOULLI, start=1):
        m = 2 * j - 1
        if j > 1:
            rising *= (k + m - 2) * (k + m - 1)
            fact *= (2 * j - 1) * (2 * j)
        term = b2j / fact * rising * x ** (-k - m)
        tail += term
        if abs(term) < 1e-18 * abs(head):
            break
    val = head + tail
    return val if a.imag else complex(val.real, 0.0)


def psi_series_sum(a: complex) -> complex:
    """-1/a + sum_{l>=1} a/(l(l+a)), via the identity sum = digamma(1+a) + Euler gamma."""
    a = complex(a)
    if abs(a) < 1e-12:
        raise ValueError("psi series has a pole at a = 0")
    if a.real <= 0:
        raise ValueError(f"psi series needs Re(a) > 0, got {a}")
    return -1 / a + digamma(1 + a) + EULER_GAMMA


def psi_series_direct(a: complex, terms: int = 10**6) -> complex:
    """Brute-force partial sum of the psi series with an a/N tail correction."""
    a = complex(a)
    l = np.arange(1, terms + 1, dtype=float)
    s = a / (l * (l + a))
    head = complex(math.fsum(s.real), math.fsum(s.imag))
    return -1 / a + head + a / (terms + 0.5)


# -- log-Fourier identity -------------------------------------------------------------

def log_fourier_lhs(f, lam: float, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """(1/(pi lam)) int_0^inf fhat(-t/lam) log t dt for an even real test function."""
    t_cut = lam * f.fourier_cutoff(spec.abs_tol * 1e-3)

    def g(t):
        return float(np.real(f.fourier(-t / lam)))

    head = quad(g, 0.0, min(1.0, t_cut), spec, "log-Fourier integral", weight="alg-loga", wvar=(0.0, 0.0))
    tail = 0.0
    if t_cut > 1.0:
        tail = quad(lambda t: g(t) * math.log(t), 1.0, t_cut, spec, "log-Fourier integral",
                    points=[k * lam for k in range(1, 6) if k * lam < t_cut] or None)
        tail += f.fourier_log_tail(t_cut / lam, lam)
    return (head + tail) / (math.pi * lam)


def log_fourier_rhs(f, lam: float, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """-int_0^inf ((f(lam x) + f(-lam x))/2 - f(0) e^{-x}) dx/x."""
    f0 = float(np.real(f.f0))

    def g(x):
        if x < 1e-8:
            x = 1e-8
        even = 0.5 * float(np.real(f.value(lam * x) + f.value(-lam * x)))
        return (even - f0 * math.exp(-x)) / x

    reach = f.support_radius() / lam
    pts = sorted({p / lam for p in f.kinks() if p > 0} | {1.0})
    split = max(pts[-1], min(reach, 50.0))
    head = quad(g, 0.0, split, spec, "log-Fourier integral", points=[p for p in pts if p < split] or None)
    tail = quad(g, split, math.inf, spec, "log-Fourier integral")
    return -(head + tail)


def log_fourier_identity_residual(f, lam: float, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """|LHS - RHS| of the log-Fourier identity, both sides by independent quadratures."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    return abs(log_fourier_lhs(f, lam, spec) - log_fourier_rhs(f, lam, spec))
