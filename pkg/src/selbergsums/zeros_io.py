"""Zero-ordinate tables: parsing, validation, counting and bundled data."""
from __future__ import annotations

import hashlib
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .descriptor import SelbergDescriptor, counting_main_term

DATA_ENV = "SELBERGSUMS_DATA"


class ZeroFileError(ValueError):
    """Malformed zero file; the message names the offending line."""


class CoverageError(ValueError):
    """A computation needs ordinates beyond the end of the table."""


@dataclass(frozen=True)
class ZeroTable:
    ordinates: np.ndarray
    betas: np.ndarray | None = None
    source: str = ""
    max_ordinate: float = field(default=0.0)

    def __post_init__(self):
        g = np.asarray(self.ordinates, dtype=float)
        object.__setattr__(self, "ordinates", g)
        if g.size and np.any(g <= 0):
            raise ZeroFileError("ordinates must be positive")
        if self.betas is not None:
            b = np.asarray(self.betas, dtype=float)
            if b.shape != g.shape:
                raise ZeroFileError("betas and ordinates differ in length")
            if np.any((b <= 0) | (b >= 1)):
                raise ZeroFileError("betas must lie in (0, 1)")
            object.__setattr__(self, "betas", b)
            # distinct zeros may share an ordinate off the line
            if g.size > 1 and np.any(np.diff(g) < 0):
                raise ZeroFileError("ordinates must be ascending")
        elif g.size > 1 and np.any(np.diff(g) <= 0):
            raise ZeroFileError("ordinates must be strictly ascending")
        if not self.max_ordinate:
            object.__setattr__(self, "max_ordinate", float(g[-1]) if g.size else 0.0)

    def __len__(self) -> int:
        return int(self.ordinates.size)

    @property
    def on_critical_line(self) -> bool:
        return self.betas is None

    def real_parts(self) -> np.ndarray:
        return np.full(len(self), 0.5) if self.betas is None else self.betas

    def rhos(self) -> np.ndarray:
        """rho = beta + i gamma for every listed (upper half-plane) zero."""
        return self.real_parts() + 1j * self.ordinates

    def require(self, T: float) -> None:
        if T > self.max_ordinate:
            raise CoverageError(f"T = {T} exceeds table coverage {self.max_ordinate}")

    def truncate(self, T: float) -> "ZeroTable":
        self.require(T)
        k = int(np.searchsorted(self.ordinates, T, side="right"))
        betas = None if self.betas is None else self.betas[:k]
        return ZeroTable(self.ordinates[:k], betas, self.source, max_ordinate=T)


def parse_zero_text(text: str, source: str = "") -> ZeroTable:
    gammas: list[float] = []
    betas: list[float] = []
    two_col: bool | None = None
    prev = 0.0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if two_col is None:
            two_col = len(parts) == 2
        if len(parts) != (2 if two_col else 1):
            raise ZeroFileError(f"line {lineno}: expected {'beta gamma' if two_col else 'one ordinate'}")
        try:
            nums = [float(p) for p in parts]
        except ValueError:
            raise ZeroFileError(f"line {lineno}: not a number: {line!r}") from None
        if not all(math.isfinite(x) for x in nums):
            raise ZeroFileError(f"line {lineno}: non-finite value")
        g = nums[-1]
        if g <= 0:
            raise ZeroFileError(f"line {lineno}: ordinate must be positive, got {g}")
        if gammas and (g < prev or (g == prev and not two_col)):
            raise ZeroFileError(f"line {lineno}: ordinates not ascending ({g} after {prev})")
        if two_col and not 0 < nums[0] < 1:
            raise ZeroFileError(f"line {lineno}: beta must lie in (0, 1)")
        gammas.append(g)
        if two_col:
            betas.append(nums[0])
        prev = g
    return ZeroTable(np.array(gammas, dtype=float), np.array(betas) if two_col else None, source)


def parse_zero_file(path: str | Path) -> ZeroTable:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"zero file not found: {path}")
    try:
        return parse_zero_text(path.read_text(encoding="utf-8"), source=str(path))
    except ZeroFileError as exc:
        raise ZeroFileError(f"{path}: {exc}") from None


def format_zero_table(table: ZeroTable, header: str | None = None) -> str:
    """Serialize with repr floats so parse(format(t)) is bit-identical."""
    lines = [f"# {header}"] if header else []
    if table.betas is None:
        lines += [repr(float(g)) for g in table.ordinates]
    else:
        lines += [f"{float(b)!r} {float(g)!r}" for b, g in zip(table.betas, table.ordinates)]
    return "\n".join(lines) + "\n"


def write_zero_file(table: ZeroTable, path: str | Path, header: str | None = None) -> None:
    Path(path).write_text(format_zero_table(table, header), encoding="utf-8")


# -- counting ----------------------------------------------------------------------

def empirical_count(table: ZeroTable, T: float) -> int:
    """Number of listed ordinates in (0, T]."""
    table.require(T)
    return int(np.searchsorted(table.ordinates, T, side="right"))


@dataclass(frozen=True)
class CountSnapshot:
    T: float
    empirical: int
    main_term: float
    deviation: float


@dataclass(frozen=True)
class DeviationProfile:
    snapshots: list[CountSnapshot]

    @property
    def max_scaled_deviation(self) -> float:
        """max |deviation| / log T over the grid (0 for an empty grid)."""
        return max((abs(s.deviation) / math.log(s.T) for s in self.snapshots), default=0.0)


def deviation_profile(table: ZeroTable, desc: SelbergDescriptor, T_grid) -> DeviationProfile:
    snaps = []
    for T in T_grid:
        T = float(T)
        if T <= 1:
            raise ValueError(f"grid points must exceed 1, got {T}")
        n = empirical_count(table, T)
        m = counting_main_term(desc, T)
        snaps.append(CountSnapshot(T, n, m, n - m))
    return DeviationProfile(snaps)


# -- synthetic tables -----------------------------------------------------------------

def with_offline_zero(table: ZeroTable, beta: float, gamma: float) -> ZeroTable:
    """Add the off-line pair beta + i gamma and 1 - beta + i gamma (functional-equation mirror)."""
    if not 0 < beta < 1 or beta == 0.5:
        raise ValueError("off-line beta must lie in (0, 1) and differ from 1/2")
    g = np.concatenate([table.ordinates, [gamma, gamma]])
    b = np.concatenate([table.real_parts(), [beta, 1 - beta]])
    order = np.argsort(g, kind="stable")
    return ZeroTable(g[order], b[order], f"{table.source} + synthetic ({beta}, {gamma})",
                     max_ordinate=table.max_ordinate)


# -- bundled data ------------------------------------------------------------------------

BUNDLED = {"zeta": "zeta_zeros.txt", "lchi4": "lchi4_zeros.txt", "dirichlet:4:1": "lchi4_zeros.txt"}


def default_data_dir() -> Path:
    from . import data_dir

    env = os.environ.get(DATA_ENV)
    return Path(env) if env else data_dir()


def read_manifest(folder: Path | None = None) -> dict[str, tuple[str, str]]:
    folder = folder or default_data_dir()
    out = {}
    path = folder / "MANIFEST"
    if not path.exists():
        return out
    for raw in path.read_text(encoding="utf-8").splitlines():
        if not raw.strip() or raw.startswith("#"):
            continue
        name, digest, source = (p.strip() for p in raw.split(",", 2))
        out[name] = (digest, source)
    return out


def verify_checksum(path: Path, manifest: dict[str, tuple[str, str]]) -> bool:
    entry = manifest.get(path.name)
    if entry is None:
        return False
    return hashlib.sha256(path.read_bytes()).hexdigest() == entry[0]


def load_bundled(name: str = "zeta", folder: Path | None = None, verify: bool = True) -> ZeroTable:
    folder = folder or default_data_dir()
    try:
        fname = BUNDLED[name]
    except KeyError:
        raise ValueError(f"no bundled zero table named {name!r}") from None
    path = folder / fname
    if verify:
        manifest = read_manifest(folder)
        if path.name in manifest and not verify_checksum(path, manifest):
            raise ZeroFileError(f"{path}: checksum does not match MANIFEST")
    return parse_zero_file(path)
