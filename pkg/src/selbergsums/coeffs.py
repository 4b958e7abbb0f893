"""Dirichlet-series coefficients and the generalized von Mangoldt function.

Providers know how to produce Lambda_F(n) for one concrete L-function
(zeta or a Dirichlet L-function given by an explicit character table) and
how to tabulate it on all prime powers up to a limit.  The tabulation is
backed by a cached numpy sieve.
"""
from __future__ import annotations

import functools
import math
import threading
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DEFAULT_SIEVE_LIMIT = 10**7
LOG10 = math.log(10.0)


class CoeffError(ValueError):
    pass


def von_mangoldt(n: int) -> float:
    """log p if n = p^k (k >= 1), else 0."""
    n = int(n)
    if n < 1:
        raise ValueError(f"von Mangoldt needs n >= 1, got {n}")
    if n == 1:
        return 0.0
    p = _smallest_prime_factor(n)
    while n % p == 0:
        n //= p
    return math.log(p) if n == 1 else 0.0


def _smallest_prime_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return n


class PrimeSieve:
    """Sieve of Eratosthenes up to `limit` with a sorted prime-power table."""

    def __init__(self, limit: int):
        if limit < 2:
            raise ValueError("sieve limit must be at least 2")
        self.limit = int(limit)
        flags = np.ones(self.limit + 1, dtype=bool)
        flags[:2] = False
        flags[4::2] = False
        for p in range(3, math.isqrt(self.limit) + 1, 2):
            if flags[p]:
                flags[p * p::2 * p] = False
        self.is_prime = flags
        self.primes = np.flatnonzero(flags)

        ks = [self.primes]
        ps = [self.primes]
        for p in self.primes[self.primes <= math.isqrt(self.limit)]:
            p = int(p)
            powers = []
            q = p * p
            while q <= self.limit:
                powers.append(q)
                q *= p
            ks.append(np.array(powers, dtype=np.int64))
            ps.append(np.full(len(powers), p, dtype=np.int64))
        k = np.concatenate(ks).astype(np.int64)
        p = np.concatenate(ps).astype(np.int64)
        order = np.argsort(k, kind="stable")
        self.prime_powers = k[order]
        self.prime_power_base = p[order]

    def __contains__(self, n: int) -> bool:
        return 0 <= n <= self.limit and bool(self.is_prime[n])


@functools.lru_cache(maxsize=4)
def get_sieve(limit: int = DEFAULT_SIEVE_LIMIT) -> PrimeSieve:
    return PrimeSieve(limit)


class CoeffProvider:
    """Base class; subclasses define `character_value` and `pole_order`."""

    pole_order = 0
    self_dual = True
    label = "generic"

    def __init__(self):
        self._cache: dict[int, complex] = {}
        self._lock = threading.Lock()

    def character_value(self, n: int) -> complex:
        raise NotImplementedError

    def lambda_F(self, n: int) -> complex:
        n = int(n)
        if n < 1:
            raise ValueError(f"Lambda_F needs n >= 1, got {n}")
        with self._lock:
            hit = self._cache.get(n)
        if hit is not None:
            return hit
        lam = von_mangoldt(n)
        val = complex(self.character_value(n) * lam) if lam else 0j
        with self._lock:
            self._cache[n] = val
        return val

    def b(self, n: int) -> complex:
        """b(n) = Lambda_F(n) / log n (zero at n = 1)."""
        return 0j if n == 1 else self.lambda_F(n) / math.log(n)

    def prime_power_table(self, limit: int) -> tuple[np.ndarray, np.ndarray]:
        """(k, Lambda_F(k)) for every prime power k <= limit, ascending in k."""
        sieve = get_sieve(max(int(limit), DEFAULT_SIEVE_LIMIT))
        sel = sieve.prime_powers <= limit
        k = sieve.prime_powers[sel]
        logp = np.log(sieve.prime_power_base[sel].astype(float))
        return k, self._character_array(k) * logp

    def _character_array(self, k: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class ZetaCoeffs(CoeffProvider):
    pole_order = 1
    label = "zeta"

    def character_value(self, n: int) -> complex:
        return 1.0

    def _character_array(self, k):
        return np.ones(len(k), dtype=complex)


class DirichletCoeffs(CoeffProvider):
    """Coefficients of L(s, chi) for a character given as a value table."""

    def __init__(self, modulus: int, values: dict[int, complex]):
        super().__init__()
        if modulus < 1:
            raise CoeffError("modulus must be positive")
        self.modulus = int(modulus)
        table = np.zeros(self.modulus, dtype=complex)
        for r, v in values.items():
            table[int(r) % self.modulus] = complex(v)
        self.table = table
        self._validate()
        self.label = f"dirichlet:{self.modulus}"
        self.self_dual = bool(np.all(np.abs(table.imag) < 1e-12))

    def _validate(self):
        q, t = self.modulus, self.table
        if abs(t[1 % q] - 1) > 1e-12:
            raise CoeffError("character must satisfy chi(1) = 1")
        units = [r for r in range(q) if math.gcd(r, q) == 1]
        for r in range(q):
            if math.gcd(r, q) != 1 and t[r] != 0:
                raise CoeffError(f"character must vanish on non-unit residue {r}")
            if math.gcd(r, q) == 1 and abs(abs(t[r]) - 1) > 1e-12:
                raise CoeffError(f"|chi({r})| must be 1")
        for a in units:
            for b in units:
                if abs(t[a * b % q] - t[a] * t[b]) > 1e-9:
                    raise CoeffError(f"character not multiplicative at ({a}, {b})")

    @property
    def parity(self) -> int:
        """0 for even characters, 1 for odd ones."""
        return 0 if self.table[-1 % self.modulus].real > 0 else 1

    def character_value(self, n: int) -> complex:
        return self.table[n % self.modulus]

    def _character_array(self, k):
        return self.table[k % self.modulus]


def load_character_table(path: str | Path) -> dict[int, complex]:
    """Read ``residue, re, im`` lines; unlisted residues map to zero."""
    values: dict[int, complex] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3:
            raise CoeffError(f"{path}:{lineno}: expected 'residue, re, im'")
        try:
            values[int(parts[0])] = complex(float(parts[1]), float(parts[2]))
        except ValueError as exc:
            raise CoeffError(f"{path}:{lineno}: {exc}") from None
    return values


def lambda_F(provider: CoeffProvider, n: int) -> complex:
    return provider.lambda_F(n)


# -- the prime sums in the arithmetic Li formula ---------------------------------

def _csum(values: np.ndarray) -> complex:
    return complex(math.fsum(values.real), math.fsum(values.imag))


def prime_sum_limit(provider: CoeffProvider, l: int, X: float) -> complex:
    """sum_{k<=X} Lambda_F(k)/k (log k)^(l-1) - (m_F/l)(log X)^l at a finite X."""
    if l < 1:
        raise ValueError(f"prime sum index l must be >= 1, got {l}")
    if X < 2:
        raise ValueError("prime sum needs X >= 2")
    k, lam = provider.prime_power_table(int(X))
    logk = np.log(k.astype(float))
    terms = lam / k * logk ** (l - 1)
    return _csum(terms) - provider.pole_order / l * math.log(X) ** l


@dataclass(frozen=True)
class PrimeSumEstimate:
    l: int
    value: complex
    error_bar: float
    raw: complex  # plain truncation at X_max


def _hann_weight_tail(a: np.ndarray, y0: float, width: float) -> np.ndarray:
    """int_a^{y0+width} sin^2(pi (y-y0)/width) dy for a in [y0, y0+width]."""
    def anti(y):
        z = (y - y0) / width
        return width * (z / 2 - np.sin(2 * np.pi * z) / (4 * np.pi))
    return anti(y0 + width) - anti(a)


def _window_average(logk, terms, pole, l, y_end, width):
    """Hann-weighted mean of the truncated approximant over log X in [y_end-width, y_end]."""
    y0 = y_end - width
    base = _csum(terms[logk <= y0])
    inside = (logk > y0) & (logk <= y_end)
    total_w = width / 2
    stepped = base + _csum(terms[inside] * _hann_weight_tail(logk[inside], y0, width)) / total_w
    x, w = np.polynomial.legendre.leggauss(64)
    y = y0 + (x + 1) * width / 2
    hann = np.sin(np.pi * (y - y0) / width) ** 2
    smooth = pole / l * math.fsum(w * hann * y ** l) * (width / 2) / total_w
    return stepped - smooth


def prime_sum_limits(provider: CoeffProvider, l_max: int, X: float = DEFAULT_SIEVE_LIMIT,
                     width: float = LOG10) -> list[PrimeSumEstimate]:
    """Estimate the X -> infinity limits for l = 1..l_max.

    The truncation error oscillates with the zeros of F, so the limit is taken
    as a smooth (Hann-window) average of the approximant over the last decade
    of log X.  The error bar is the change between that average and the one
    over a window ending half a decade earlier.
    """
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    k, lam = provider.prime_power_table(int(X))
    logk = np.log(k.astype(float))
    y_end = math.log(X)
    base = lam / k
    out = []
    for l in range(1, l_max + 1):
        terms = base * logk ** (l - 1)
        est = _window_average(logk, terms, provider.pole_order, l, y_end, width)
        prev = _window_average(logk, terms, provider.pole_order, l, y_end - width / 2, width)
        raw = _csum(terms) - provider.pole_order / l * y_end ** l
        scale = max(abs(est), y_end ** l / l)
        bar = abs(est - prev) + 64 * np.finfo(float).eps * scale
        out.append(PrimeSumEstimate(l, est, float(bar), raw))
    return out
