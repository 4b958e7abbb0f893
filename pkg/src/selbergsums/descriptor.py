"""Functional-equation data of a Selberg-class function and its invariants.

A descriptor holds the completed form

    Q^s * prod_j Gamma(lambda_j s + mu_j) * F(s)

together with the root number, the pole order at s = 1 and a coefficient
provider.  Degree, conductor and the smooth zero-counting main term are all
derived from it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .coeffs import CoeffProvider, DirichletCoeffs, ZetaCoeffs, load_character_table

TWO_PI = 2.0 * math.pi


class DescriptorError(ValueError):
    """Invalid descriptor data or descriptor file."""


@dataclass(frozen=True)
class GammaFactor:
    lam: float
    mu: complex = 0j

    def __post_init__(self):
        if not self.lam > 0:
            raise DescriptorError(f"gamma factor needs lambda > 0, got {self.lam}")
        if complex(self.mu).real < 0:
            raise DescriptorError(f"gamma factor needs Re(mu) >= 0, got {self.mu}")
        object.__setattr__(self, "mu", complex(self.mu))


@dataclass(frozen=True)
class CountingConstants:
    c1: float
    degree: float
    conductor: float


@dataclass(frozen=True)
class SelbergDescriptor:
    gamma_factors: tuple[GammaFactor, ...]
    q_scale: float
    root_number: complex = 1 + 0j
    pole_order: int = 0
    coeffs: CoeffProvider | None = field(default=None, compare=False)
    name: str = ""
    # zero-free region near Re(s) = 1 needed by the arithmetic Li formula;
    # a documented assumption, never checked numerically
    assume_zero_free_region: bool = True

    def __post_init__(self):
        factors = tuple(self.gamma_factors)
        if not factors:
            raise DescriptorError("descriptor needs at least one gamma factor")
        object.__setattr__(self, "gamma_factors", factors)
        if not self.q_scale > 0:
            raise DescriptorError(f"Q must be positive, got {self.q_scale}")
        if abs(abs(self.root_number) - 1.0) > 1e-12:
            raise DescriptorError(f"|omega| must be 1, got {abs(self.root_number)!r}")
        if self.pole_order < 0:
            raise DescriptorError("pole order m_F must be nonnegative")

    @property
    def degree(self) -> float:
        return degree(self)

    @property
    def conductor(self) -> float:
        return conductor(self)

    @property
    def log_q(self) -> float:
        return math.log(self.q_scale)

    def counting_constants(self) -> CountingConstants:
        d = degree(self)
        return CountingConstants(
            c1=(log_conductor(self) - d * (math.log(TWO_PI) + 1.0)) / TWO_PI,
            degree=d,
            conductor=conductor(self),
        )


def degree(desc: SelbergDescriptor) -> float:
    return 2.0 * math.fsum(g.lam for g in desc.gamma_factors)


def log_conductor(desc: SelbergDescriptor) -> float:
    """log q_F, accumulated in log space so large degrees cannot overflow."""
    d = degree(desc)
    return math.fsum(
        [d * math.log(TWO_PI), 2.0 * math.log(desc.q_scale)]
        + [2.0 * g.lam * math.log(g.lam) for g in desc.gamma_factors]
    )


def conductor(desc: SelbergDescriptor) -> float:
    return math.exp(log_conductor(desc))


def counting_main_term(desc: SelbergDescriptor, T: float) -> float:
    """Smooth part (d/2pi) T log T + c1 T of the zero-counting function."""
    if not T > 0:
        raise ValueError(f"counting main term needs T > 0, got {T}")
    c = desc.counting_constants()
    return c.degree / TWO_PI * T * math.log(T) + c.c1 * T


def counting_density(desc: SelbergDescriptor, T: float) -> float:
    """Derivative of `counting_main_term`: (d/2pi) log(T/2pi) + log(q)/2pi."""
    return (degree(desc) * math.log(T / TWO_PI) + log_conductor(desc)) / TWO_PI


# -- bundled descriptors -------------------------------------------------------

def zeta_descriptor() -> SelbergDescriptor:
    return SelbergDescriptor(
        gamma_factors=(GammaFactor(0.5, 0j),),
        q_scale=math.pi ** -0.5,
        root_number=1 + 0j,
        pole_order=1,
        coeffs=ZetaCoeffs(),
        name="zeta",
    )


def dirichlet_descriptor(coeffs: DirichletCoeffs, root_number: complex = 1 + 0j,
                         name: str | None = None) -> SelbergDescriptor:
    """L(s, chi) for a primitive character; the parity picks mu in {0, 1/2}."""
    q = coeffs.modulus
    return SelbergDescriptor(
        gamma_factors=(GammaFactor(0.5, 0.5 * coeffs.parity),),
        q_scale=math.sqrt(q / math.pi),
        root_number=root_number,
        pole_order=0,
        coeffs=coeffs,
        name=name or f"dirichlet:{q}",
    )


def chi4_descriptor() -> SelbergDescriptor:
    """L(s, chi_-4), the nontrivial character mod 4 (odd, self-dual, omega = 1)."""
    return dirichlet_descriptor(DirichletCoeffs(4, {1: 1, 3: -1}), name="dirichlet:4:1")


# -- descriptor files -----------------------------------------------------------

_KEYS = {"name", "Q", "omega_re", "omega_im", "m_F", "coeffs", "gamma"}


def _resolve_character(q: int, index: str, base: Path) -> Path:
    from . import data_dir

    fname = f"chi_{q}_{index}.csv"
    for folder in (base, data_dir()):
        cand = folder / fname
        if cand.exists():
            return cand
    raise DescriptorError(f"character table {fname} not found next to descriptor or in bundled data")


def parse_descriptor(text: str, base: Path | None = None) -> SelbergDescriptor:
    """Parse the line-oriented ``key = value`` descriptor format."""
    base = base or Path.cwd()
    vals: dict[str, str] = {}
    gammas: list[GammaFactor] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DescriptorError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise DescriptorError(f"line {lineno}: unknown key {key!r}")
        if key == "gamma":
            parts = [p.strip() for p in value.split(",")]
            if len(parts) != 3:
                raise DescriptorError(f"line {lineno}: gamma needs lambda,mu_re,mu_im")
            try:
                lam, mre, mim = (float(p) for p in parts)
                gammas.append(GammaFactor(lam, complex(mre, mim)))
            except ValueError as exc:
                raise DescriptorError(f"line {lineno}: {exc}") from None
        else:
            if key in vals:
                raise DescriptorError(f"line {lineno}: duplicate key {key!r}")
            vals[key] = value
    try:
        q_scale = float(vals["Q"])
        omega = complex(float(vals.get("omega_re", "1")), float(vals.get("omega_im", "0")))
        m_f = int(vals.get("m_F", "0"))
    except KeyError as exc:
        raise DescriptorError(f"missing required key {exc.args[0]!r}") from None
    except ValueError as exc:
        raise DescriptorError(str(exc)) from None

    spec = vals.get("coeffs", "zeta")
    if spec == "zeta":
        coeffs: CoeffProvider = ZetaCoeffs()
    elif spec.startswith("dirichlet:"):
        try:
            _, q_str, index = spec.split(":")
            q = int(q_str)
        except ValueError:
            raise DescriptorError(f"bad coeffs spec {spec!r}; want dirichlet:<q>:<index>") from None
        coeffs = DirichletCoeffs(q, load_character_table(_resolve_character(q, index, base)))
    else:
        raise DescriptorError(f"unknown coeffs spec {spec!r}")
    return SelbergDescriptor(
        gamma_factors=tuple(gammas),
        q_scale=q_scale,
        root_number=omega,
        pole_order=m_f,
        coeffs=coeffs,
        name=vals.get("name", spec),
    )


def load_descriptor(path: str | Path) -> SelbergDescriptor:
    path = Path(path)
    return parse_descriptor(path.read_text(encoding="utf-8"), base=path.parent)


def format_descriptor(desc: SelbergDescriptor, coeffs_spec: str) -> str:
    lines = [
        f"name = {desc.name}",
        f"Q = {desc.q_scale!r}",
        f"omega_re = {desc.root_number.real!r}",
        f"omega_im = {desc.root_number.imag!r}",
        f"m_F = {desc.pole_order}",
        f"coeffs = {coeffs_spec}",
    ]
    lines += [f"gamma = {g.lam!r},{g.mu.real!r},{g.mu.imag!r}" for g in desc.gamma_factors]
    return "\n".join(lines) + "\n"


__all__ = [
    "CountingConstants", "DescriptorError", "GammaFactor", "SelbergDescriptor",
    "chi4_descriptor", "conductor", "counting_density", "counting_main_term", "degree",
    "dirichlet_descriptor", "format_descriptor", "load_descriptor", "log_conductor",
    "parse_descriptor", "zeta_descriptor",
]
