"""Command-line driver: one subcommand per verification.

Exit codes: 0 when every band check passes, 1 when one fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import math
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .coeffs import prime_sum_limits
from .descriptor import DescriptorError, SelbergDescriptor, chi4_descriptor, load_descriptor, zeta_descriptor
from .li import (Method, PrecisionContext, li_arithmetic, li_asymptotic, li_positivity_report, li_zero_sum)
from .report import Report
from .special import QuadratureSpec
from .weil import (classify_shift, explicit_formula_report, parse_test_function, scaled_sum_prediction,
                   zero_side)
from .zeros_io import (BUNDLED, CoverageError, ZeroFileError, ZeroTable, default_data_dir, deviation_profile,
                       load_bundled, parse_zero_file)
from .zerosum import (IncompleteSumWarning, ZeroSumParams, gaussian_sum_explicit_rhs, gaussian_sum_main_term,
                      gaussian_sum_prime_term, gaussian_zero_sum, landau_sum)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
BUILTIN_DESCRIPTORS = {"zeta": zeta_descriptor, "lchi4": chi4_descriptor, "dirichlet:4:1": chi4_descriptor}


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    descriptor: SelbergDescriptor
    zeros: ZeroTable
    output_format: str = "pretty"
    output_path: Path | None = None
    deterministic: bool = False
    quad: QuadratureSpec = QuadratureSpec()


# -- argument parsing helpers ------------------------------------------------------------------

def float_list(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def parse_shift(text: str) -> str | float:
    """'u', 'log:m', '-log:m' or a number."""
    t = text.strip()
    if t == "u":
        return "u"
    sign = 1.0
    if t.startswith("-log:"):
        sign, t = -1.0, t[1:]
    if t.startswith("log:"):
        try:
            m = int(t[4:])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad log:m shift {text!r}") from None
        if m < 2:
            raise argparse.ArgumentTypeError("log:m needs m >= 2")
        return sign * math.log(m)
    try:
        return float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad shift {text!r}; use a number, 'u', 'log:m' or '-log:m'") from None


def int_range(text: str) -> list[int]:
    """'1..5', '1,3,7' or '-3..-1'."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..")
                out += list(range(int(lo), int(hi) + 1))
            elif part:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad index list {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty index list")
    if 0 in out:
        raise argparse.ArgumentTypeError("Li coefficient index must be nonzero")
    return out


def grid(text: str) -> list[float]:
    """'50:1000:50' (start:stop:step, inclusive) or a comma list."""
    if ":" in text:
        try:
            a, b, s = (float(x) for x in text.split(":"))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad grid {text!r}; want start:stop:step") from None
        if s <= 0 or b < a:
            raise argparse.ArgumentTypeError("grid needs step > 0 and stop >= start")
        n = int(math.floor((b - a) / s + 1e-9))
        return [a + k * s for k in range(n + 1)]
    return float_list(text)


def _resolve_descriptor(spec: str) -> SelbergDescriptor:
    if spec in BUILTIN_DESCRIPTORS:
        return BUILTIN_DESCRIPTORS[spec]()
    path = Path(spec)
    if not path.exists():
        raise InputError(f"descriptor file not found: {path}")
    try:
        return load_descriptor(path)
    except (DescriptorError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _resolve_zeros(spec: str | None, desc: SelbergDescriptor) -> ZeroTable:
    if spec is None:
        key = desc.name if desc.name in BUNDLED else None
        if key is None:
            raise InputError(f"no bundled zero table for {desc.name!r}; pass --zeros")
        spec = key
    if spec in BUNDLED:
        path = default_data_dir() / BUNDLED[spec]
        if not path.exists():
            raise InputError(f"zero file not found: {path}")
        try:
            return load_bundled(spec)
        except ZeroFileError as exc:
            raise InputError(str(exc)) from None
    path = Path(spec)
    if not path.exists():
        raise InputError(f"zero file not found: {path}")
    try:
        return parse_zero_file(path)
    except ZeroFileError as exc:
        raise InputError(str(exc)) from None


def _config(args) -> RunConfig:
    desc = _resolve_descriptor(args.descriptor)
    zeros = _resolve_zeros(args.zeros, desc)
    quad = QuadratureSpec(args.rel_tol, args.abs_tol, args.max_subdivisions)
    return RunConfig(desc, zeros, args.format, Path(args.output) if args.output else None, args.deterministic, quad)


def _shift(v: str | float, u: float) -> float:
    return u if v == "u" else float(v)


# -- subcommands ----------------------------------------------------------------------------------

def cmd_gsum(cfg: RunConfig, args) -> Report:
    """Gaussian zero sums against their small-u prediction."""
    desc, zeros = cfg.descriptor, cfg.zeros
    T = args.T or zeros.max_ordinate
    rep = Report("gsum", summary={"descriptor": desc.name, "T": T, "band": args.band})
    for u in args.u:
        v = _shift(args.v, u)
        params = ZeroSumParams(u, v, T)
        cls = classify_shift(v)
        computed = gaussian_zero_sum(zeros, params)
        if args.exact or cls.kind == "generic" and args.v != "u":
            predicted = gaussian_sum_explicit_rhs(desc, u, v, spec=cfg.quad).total
            kind, bound = "exact", 10 * params.tail_bound + 1e-6
        elif args.v == "u" or cls.kind == "zero":
            predicted, kind, bound = complex(gaussian_sum_main_term(desc, u)), "main_term", args.band
        else:
            # e^{-v rho} with v = -log m is the sum weighted by m^rho
            sign = "plus" if cls.kind == "minus" else "minus"
            predicted = gaussian_sum_prime_term(desc, u, cls.m, sign)
            kind, bound = f"prime_{sign}", args.band
        residual = computed - predicted
        ok = abs(residual) <= bound
        rep.passed &= ok
        rep.add(u=u, v=v, comparison=kind, computed=computed, predicted=predicted, residual=residual,
                bound=bound, zero_count=len(zeros.truncate(T)), tail_bound=params.tail_bound, passed=ok)
    return rep


def cmd_weil(cfg: RunConfig, args) -> Report:
    desc, zeros = cfg.descriptor, cfg.zeros
    f = parse_test_function(args.f)
    T = args.T or zeros.max_ordinate
    rep = Report("weil", summary={"descriptor": desc.name, "test_function": f.name, "T": T})
    if args.sweep_u:
        us = sorted(args.sweep_u, reverse=True)
        rows = []
        for u in us:
            v = _shift(args.v, u)
            zs = zero_side(zeros, f, u, v, T)
            pred = scaled_sum_prediction(desc, f, u, v)
            rows.append((u, v, zs, pred, zs - pred))
        K = abs(rows[0][4]) / rows[0][0]
        for u, v, zs, pred, res in rows:
            ok = abs(res) <= K * u
            rep.passed &= ok
            rep.add(u=u, v=v, zero_side=zs, prediction=pred, residual=res, K_u=K * u, passed=ok)
        rep.summary["K"] = K
        rep.summary["linear_decay"] = rep.passed
        return rep
    u = args.u
    v = _shift(args.v, u)
    out = explicit_formula_report(zeros, desc, f, u, v, T)
    tol = 1e-6 * (1 + abs(out.zero_side)) + out.error_budget
    rep.passed = abs(out.residual) <= tol
    for name, val in out.term_breakdown.items():
        rep.add(term=name, value=val)
    rep.add(term="arithmetic_side", value=out.arithmetic_side)
    rep.add(term="zero_side", value=out.zero_side)
    rep.add(term="residual", value=out.residual)
    rep.summary.update(u=u, v=v, tolerance=tol, error_budget=out.error_budget)
    return rep


def cmd_li(cfg: RunConfig, args) -> Report:
    desc, zeros = cfg.descriptor, cfg.zeros
    T = args.T or zeros.max_ordinate
    methods = [Method(m.strip()) for m in args.methods.split(",")]
    rep = Report("li", summary={"descriptor": desc.name, "T": T, "X": args.X})
    positive_ns = [n for n in args.n if n > 0]
    limits = None
    if Method.ARITHMETIC in methods and positive_ns:
        limits = prime_sum_limits(desc.coeffs, max(positive_ns), args.X)
    for n in args.n:
        got = {}
        for m in methods:
            if m is Method.ZERO_SUM:
                # lambda(-n) is compared with the arithmetic value
                c = li_zero_sum(zeros, -n, T, desc)
            elif m is Method.ARITHMETIC:
                if n < 0:
                    continue
                c = li_arithmetic(desc, n, args.X, PrecisionContext(max(args.digits, 2 * n + 10)), limits)
            else:
                if n < 0:
                    continue
                c = li_asymptotic(desc, n)
            got[m] = c
            rep.add(n=n, method=m.value, re=c.value.real, im=c.value.imag, error_bar=c.error_bar)
        if Method.ZERO_SUM in got and Method.ARITHMETIC in got:
            zs, ar = got[Method.ZERO_SUM], got[Method.ARITHMETIC]
            ok = abs(ar.value - zs.value) <= ar.error_bar + zs.error_bar
            rep.passed &= ok
    if args.check_positivity:
        n_max = max(abs(n) for n in args.n)
        pos = li_positivity_report(zeros, n_max, T)
        rep.passed &= pos.all_positive
        rep.summary["positivity"] = pos.verdict()
        for row in pos.rows:
            rep.add(n=row.n, method="positivity", re=row.re_value, im=0.0, error_bar=0.0, positive=row.passed)
    return rep


def cmd_count(cfg: RunConfig, args) -> Report:
    desc, zeros = cfg.descriptor, cfg.zeros
    if not args.T_grid:
        raise InputError("empty T grid")
    prof = deviation_profile(zeros, desc, args.T_grid)
    rep = Report("count", summary={"descriptor": desc.name, "band": args.band})
    for s in prof.snapshots:
        ok = abs(s.deviation) <= args.band * math.log(s.T)
        rep.passed &= ok
        rep.add(T=s.T, empirical=s.empirical, main_term=s.main_term, deviation=s.deviation, passed=ok)
    rep.summary["max_deviation_over_logT"] = prof.max_scaled_deviation
    return rep


def cmd_landau(cfg: RunConfig, args) -> Report:
    desc, zeros = cfg.descriptor, cfg.zeros
    rep = Report("landau", summary={"descriptor": desc.name, "T": args.T, "band": args.band})
    for n in args.n:
        if n < 2:
            raise InputError("landau needs n >= 2")
        computed, predicted = landau_sum(zeros, desc, n, args.T)
        bound = args.band * n ** 1.5 * math.log(args.T)
        ok = abs(computed - predicted) <= bound
        rep.passed &= ok
        rep.add(n=n, computed=computed, predicted=predicted, difference=computed - predicted, bound=bound,
                constant=abs(computed - predicted) / (n ** 1.5 * math.log(args.T)), passed=ok)
    return rep


COMMANDS = {"gsum": cmd_gsum, "thm1": cmd_gsum, "weil": cmd_weil, "li": cmd_li, "count": cmd_count, "landau": cmd_landau}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--descriptor", default="zeta",
                        help="descriptor file, or a built-in name: zeta, lchi4 (default: zeta)")
    common.add_argument("--zeros", help="zero file, or a bundled table name (default: the table bundled for the descriptor)")
    common.add_argument("--format", choices=("csv", "json", "pretty"), default="pretty")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--deterministic", action="store_true",
                        help="guarantee byte-identical output (sums are always exactly rounded; this also fixes row order)")
    common.add_argument("--rel-tol", type=float, default=1e-10)
    common.add_argument("--abs-tol", type=float, default=1e-12)
    common.add_argument("--max-subdivisions", type=int, default=2000)

    p = argparse.ArgumentParser(prog="selbergsums", description="Numerical checks of explicit formulas for L-functions.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gsum", aliases=["thm1"], parents=[common],
                       help="Gaussian zero sums against their small-u behaviour")
    s.add_argument("--u", type=float_list, required=True, help="comma-separated widths")
    s.add_argument("--v", type=parse_shift, default=0.0, help="shift: number, 'u', 'log:m' or '-log:m'")
    s.add_argument("--T", type=float, help="ordinate cutoff (default: end of table)")
    s.add_argument("--band", type=float, default=2.0, help="allowed |residual| for asymptotic comparisons")
    s.add_argument("--exact", action="store_true", help="compare with the exact explicit formula instead")

    s = sub.add_parser("weil", parents=[common], help="both sides of the explicit formula")
    s.add_argument("--f", default="gaussian:w=0.05", help="gaussian:w=..., biexp:a=... or bump:r=...")
    s.add_argument("--u", type=float, default=1.0)
    s.add_argument("--v", type=parse_shift, default=0.0)
    s.add_argument("--T", type=float)
    s.add_argument("--sweep-u", type=float_list, help="check |zero side - prediction| <= K u over these u")

    s = sub.add_parser("li", parents=[common], help="Li coefficients")
    s.add_argument("--n", type=int_range, required=True, help="indices, e.g. 1..5")
    s.add_argument("--methods", default="zerosum,arithmetic")
    s.add_argument("--X", type=float, default=1e7, help="prime-sum cutoff")
    s.add_argument("--T", type=float)
    s.add_argument("--digits", type=int, default=30, help="working digits for the binomial sums")
    s.add_argument("--check-positivity", action="store_true")

    s = sub.add_parser("count", parents=[common], help="zero counting against its smooth main term")
    s.add_argument("--T-grid", type=grid, default=grid("50:1000:50"), help="start:stop:step or a comma list")
    s.add_argument("--band", type=float, default=2.0, help="allowed |deviation| / log T")

    s = sub.add_parser("landau", parents=[common], help="sum of n^rho over zeros")
    s.add_argument("--n", type=lambda t: [int(x) for x in t.split(",")], default=[2])
    s.add_argument("--T", type=float, default=500.0)
    s.add_argument("--band", type=float, default=3.0, help="allowed |difference| / (n^1.5 log T)")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    try:
        cfg = _config(args)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IncompleteSumWarning)
            rep = COMMANDS[args.command](cfg, args)
    except (InputError, CoverageError, ZeroFileError, DescriptorError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = rep.render(cfg.output_format)
    if cfg.output_path:
        cfg.output_path.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_PASS if rep.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
