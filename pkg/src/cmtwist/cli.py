"""Command-line front end: twist tables, single-twist reports, identity
verification, and special-prime listings.

Commands
    table [m_min] [m_max]   BSD-style rows for admissible twists in range
    twist M                 full report for one twisting integer
    verify SCENARIO...      run named identity checks; exit 0 iff all pass
    special-primes q limit  ascending special split primes up to limit

Global flags may be given after the command name: --curve, --curve-file,
--precision, --threads, --format, --output.  Each flag has an environment
override CMTWIST_<NAME> (e.g. CMTWIST_PRECISION); explicit flags win.

Exit codes: 0 all checks pass, 1 a bound or identity violation (or a
flagged row), 2 usage error.
"""

from __future__ import annotations

import argparse
import multiprocessing
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction

from . import bsd
from .bsd import BSDError, BSDReport, NotApplicable
from .coeffs import CoeffError, ap_range
from .lseries import LSeriesError, algebraic_part, series_cutoff
from .qfield import (
    ALLOWED_Q,
    QFieldError,
    QuadInt,
    cornacchia_split,
    normalize_mod4,
    special_split_primes,
    split_type,
    sqrt_minus_q,
)
from .registry import Curve, RegistryError, phi_of, resolve_curve

ENV_PREFIX = "CMTWIST_"
USAGE_ERROR = 2
CHECK_FAILED = 1


@dataclass(frozen=True)
class RunConfig:
    curve_label: str
    curve_file: str | None
    precision: int
    threads: int
    fmt: str            # "csv" | "text"
    output: str | None  # path, or None for stdout


def _env(name: str, fallback: str | None = None) -> str | None:
    return os.environ.get(ENV_PREFIX + name, fallback)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--curve", default=_env("CURVE", "49a"),
                        help="curve label (default 49a; env CMTWIST_CURVE)")
    common.add_argument("--curve-file", default=_env("CURVE_FILE"),
                        help="file of curve records: label a1 a2 a3 a4 a6 q w [omega]")
    common.add_argument("--precision", type=int,
                        default=int(_env("PRECISION", "15")),
                        help="working decimal digits, >= 15 (default 15)")
    common.add_argument("--threads", type=int, default=int(_env("THREADS", "1")),
                        help="worker processes for table scans (default 1)")
    common.add_argument("--format", dest="fmt", choices=("csv", "text"),
                        default=_env("FORMAT", "text"),
                        help="output format (default text)")
    common.add_argument("--output", default=_env("OUTPUT"),
                        help="output path (default: standard output)")

    ap = argparse.ArgumentParser(
        prog="cmtwist",
        description="Central L-values of quadratic twists of CM curves "
                    "with 2-adic bound and Tamagawa-factor checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", parents=[common],
                       help="rows for all admissible twists in a range")
    p.add_argument("m_min", nargs="?", type=int, default=1)
    p.add_argument("m_max", nargs="?", type=int, default=1000)

    p = sub.add_parser("twist", parents=[common],
                       help="full report for a single twisting integer")
    p.add_argument("M", type=int)

    p = sub.add_parser("verify", parents=[common],
                       help="identity checks: eisenstein-base, "
                            "averaging:<pi,...>, lemma-div:<n>, character, "
                            "tamagawa-cross")
    p.add_argument("scenarios", nargs="+", metavar="SCENARIO")

    p = sub.add_parser("special-primes", parents=[common],
                       help="ascending special split primes up to a limit")
    p.add_argument("q", type=int)
    p.add_argument("limit", type=int)

    return ap


def _config_from(args: argparse.Namespace, parser: argparse.ArgumentParser) -> RunConfig:
    if args.precision < 15:
        parser.error("--precision must be at least 15")
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    return RunConfig(curve_label=args.curve, curve_file=args.curve_file,
                     precision=args.precision, threads=args.threads,
                     fmt=args.fmt, output=args.output)


def _emit(config: RunConfig, lines: list[str]) -> None:
    text = "\n".join(lines) + ("\n" if lines else "")
    if config.output:
        with open(config.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _format_rows(rows: list[list[str]], fmt: str) -> list[str]:
    if fmt == "csv":
        return [",".join(r) for r in rows]
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return ["  ".join(f.ljust(w) for f, w in zip(r, widths)).rstrip()
            for r in rows]


# --------------------------------------------------------------- table

# Per-process state for table workers: the curve, the L-series precision,
# a calibrated Hecke character, and a shared a_p table (fork-safe, built
# once per worker in the initializer).
_WORKER: dict = {}


def _table_digits(precision: int) -> int:
    # three guard digits over the 10 printed, more if asked for
    return max(12, precision - 3)


def _init_table_worker(curve: Curve, digits: int, n_max: int) -> None:
    from .eisenstein import calibrate_character

    chi = calibrate_character(curve)
    _WORKER.update(curve=curve, digits=digits, chi=chi,
                   ap=ap_range(curve, n_max, chi=chi))


def _table_job(M: int):
    """(M, csv fields, slack, failure message); fields None = no row."""
    curve: Curve = _WORKER["curve"]
    try:
        rep = bsd.theorem18_check(curve, M, target_digits=_WORKER["digits"],
                                  chi=_WORKER["chi"], ap_map=_WORKER["ap"])
    except NotApplicable:
        return M, None, None, None
    except (BSDError, LSeriesError, CoeffError, ValueError) as exc:
        return M, None, None, str(exc)
    if rep.lvalue.lalg == 0:
        return M, None, None, None          # vanishing central value
    if rep.indeterminate:
        return M, None, None, "rational recognition failed"
    slack = rep.lvalue.ord2 - rep.bound_rhs
    return M, bsd.csv_row(curve, rep), slack, None


def cmd_table(config: RunConfig, curve: Curve, m_min: int, m_max: int) -> tuple[list[str], int]:
    digits = _table_digits(config.precision)
    candidates = []
    for M in range(max(m_min, 2), m_max + 1):
        try:
            if bsd.classify_twist(curve, M).admissible:
                candidates.append(M)
        except BSDError:
            continue            # square factor: never admissible
    n_max = series_cutoff(curve, m_max if m_max else 1, digits)
    if config.threads == 1 or len(candidates) < 2:
        _init_table_worker(curve, digits, n_max)
        results = [_table_job(M) for M in candidates]
    else:
        ctx = multiprocessing.get_context("fork")
        chunk = max(1, len(candidates) // (4 * config.threads))
        with ProcessPoolExecutor(max_workers=config.threads, mp_context=ctx,
                                 initializer=_init_table_worker,
                                 initargs=(curve, digits, n_max)) as pool:
            results = list(pool.map(_table_job, candidates, chunksize=chunk))

    rows = [bsd.CSV_HEADER[:]]
    flagged = []
    violations = 0
    hist: dict[int, int] = {}
    for M, fields, slack, err in sorted(results):
        if err is not None:
            flagged.append(f"# M={M} flagged: {err}")
            continue
        if fields is None:
            continue
        rows.append(fields)
        hist[slack] = hist.get(slack, 0) + 1
        if fields[8] != "1":
            violations += 1
    lines = _format_rows(rows, config.fmt) if len(rows) > 1 else \
        ([",".join(rows[0])] if config.fmt == "csv" else [])
    lines.extend(flagged)
    lines.append(f"# rows={len(rows) - 1}")
    lines.append("# bound slack histogram: " +
                 (" ".join(f"{s}:{hist[s]}" for s in sorted(hist)) or "(empty)"))
    code = CHECK_FAILED if (violations or flagged) else 0
    return lines, code


# --------------------------------------------------------------- twist

def _twist_text(curve: Curve, rep: BSDReport) -> list[str]:
    spec = rep.spec
    sign = "+" if spec.epsilon >= 0 else "-"
    lines = [
        f"curve {curve.label}: q={curve.q}, conductor {curve.conductor}, "
        f"root number {curve.w:+d}",
        f"twist M={spec.M} (D = {sign}{spec.M})",
    ]
    if spec.factors:
        facs = ", ".join(
            f"{f.p} ({f.kind}{', special' if f.special else ''})"
            for f in spec.factors)
    else:
        facs = "(none)"
    lines.append(f"factors: {facs}")
    lines.append(f"r(M)={spec.r_of_M}  k(M)={spec.k_of_M}")
    res = rep.lvalue
    lines.append(f"|L(E^(D),1)| = {float(abs(res.analytic_value)):.10g}"
                 f"  ({res.n_terms} terms)")
    if curve.lattice_shift:
        lines.append(f"listed value |L|/2^{curve.lattice_shift} = "
                     f"{float(abs(res.analytic_value)) / 2**curve.lattice_shift:.10g}")
    if res.lalg is None:
        lines.append("L^alg: not recognized (indeterminate)")
    else:
        lines.append(f"L^alg = {res.lalg.numerator}/{res.lalg.denominator}"
                     + ("" if res.lalg == 0 else f"  (ord2 = {res.ord2})"))
    if res.lalg == 0:
        lines.append(f"bound: vanishing value, holds trivially "
                     f"(rhs = {rep.bound_rhs})")
    else:
        state = "holds" if rep.bound_holds else "VIOLATED"
        slack = "" if res.lalg is None else \
            f" (slack {res.ord2 - rep.bound_rhs})"
        lines.append(f"bound: ord2 >= r(M) - phi = {rep.bound_rhs} -> "
                     f"{state}{slack}")
    if rep.tamagawa.entries:
        tam = "; ".join(f"c_{e.p}: ord2={e.ord2} [{e.rule}]"
                        for e in rep.tamagawa.entries)
        lines.append(f"tamagawa: {tam}; total ord2 = "
                     f"{rep.tamagawa.product_ord2}")
    if rep.sha_ord2_predicted is not None:
        note = f"  flags: {','.join(rep.sha_flags)}" if rep.sha_flags else ""
        lines.append(f"predicted sha ord2 = {rep.sha_ord2_predicted}{note}")
    return lines


def cmd_twist(config: RunConfig, curve: Curve, M: int) -> tuple[list[str], int]:
    spec = bsd.classify_twist(curve, M)   # BSDError (e.g. square factor) -> usage
    if not spec.admissible:
        lines = [f"curve {curve.label}: twist M={M} is not admissible:"]
        lines += [f"  - {r}" for r in spec.reasons]
        return lines, 0
    rep = bsd.theorem18_check(curve, M, target_digits=_table_digits(config.precision))
    if config.fmt == "csv":
        lines = [",".join(bsd.CSV_HEADER), ",".join(bsd.csv_row(curve, rep))]
    else:
        lines = _twist_text(curve, rep)
    ok = rep.bound_holds and not rep.indeterminate
    return lines, 0 if ok else CHECK_FAILED


# -------------------------------------------------------------- verify

def _parse_pi_entry(entry: str, q: int) -> QuadInt:
    """One twisting-prime entry: 'a+b*t' literally, or a rational prime
    (auto-split when split, sign-normalized to 1 mod 4)."""
    text = entry.strip().replace(" ", "")
    if text.endswith("*t"):
        body = text[:-2]
        cut = max(body.rfind("+", 1), body.rfind("-", 1))
        if cut < 1:
            raise ValueError(f"cannot parse {entry!r} as a+b*t")
        a, b = int(body[:cut]), int(body[cut:])
        return QuadInt(q, a, b)
    try:
        p = int(text)
    except ValueError:
        raise ValueError(
            f"cannot parse {entry!r}: expected a rational prime or an "
            f"'a+b*t' literal (e.g. -3 or 1-4*t)"
        ) from None
    kind = split_type(q, abs(p))
    if kind == "ramified":
        raise ValueError(f"{p} ramifies in Q(sqrt(-{q}))")
    if kind == "split":
        return normalize_mod4(cornacchia_split(q, abs(p)))
    return QuadInt(q, p if p % 4 == 1 else -p, 0)


def _verify_one(config: RunConfig, curve: Curve, scenario: str) -> tuple[str, bool]:
    from . import eisenstein as eis

    prec = config.precision
    name, _, arg = scenario.partition(":")

    if name == "eisenstein-base":
        ctx = eis.make_context(curve, precision=max(prec, 30))
        char = eis.calibrate_character(curve)
        val = eis.prop2_sum(ctx, char, sqrt_minus_q(curve.q))
        import mpmath as mp
        with mp.workdps(ctx.dps):
            amp, _phase = eis.phase_split(val)
            if curve.lalg_base is not None:
                target = curve.lalg_base
            else:
                target = Fraction(float(amp)).limit_denominator(64)
            residual = float(abs(amp - mp.mpf(target.numerator) / target.denominator))
        ok = residual < 1e-8
        return (f"eisenstein-base[{curve.label}]: |sum| = {float(amp):.12g}, "
                f"recognized {target}, residual {residual:.3g}", ok)

    if name == "averaging":
        if not arg:
            raise ValueError("averaging needs a pi list, e.g. averaging:-3")
        pis = [_parse_pi_entry(e, curve.q) for e in arg.split(",")]
        ctx = eis.make_context(curve, precision=max(prec, 30))
        char = eis.calibrate_character(curve)
        rep = eis.averaging_check(ctx, char, pis)
        ord2 = "n/a" if rep.ord2 is None else str(rep.ord2)
        msg = (f"averaging[{rep.label}: {arg}]: "
               f"|LHS-RHS| = {float(rep.residual):.3g}, "
               f"ord2 = {ord2} (need >= {rep.bound})")
        if rep.note:
            msg += f" [{rep.note}]"
        return msg, rep.ok

    if name == "lemma-div":
        n = int(arg) if arg else 10
        ok = eis.lemma_div_bruteforce(n)
        return f"lemma-div[n={n}]: {2 ** n} sign vectors checked", ok

    if name == "character":
        c1 = eis.calibrate_character(curve)
        c2 = eis.calibrate_character(curve, skip=c1.samples)
        ok = c1.values == c2.values
        return (f"character[{curve.label}]: {c1.samples} + {c2.samples} "
                f"disjoint split primes, tables "
                f"{'agree' if ok else 'DISAGREE'}, chi(-1) = -1", ok)

    if name == "tamagawa-cross":
        from .qfield import _is_prime

        limit = int(arg) if arg else 1000
        counts: dict[str, int] = {}
        try:
            for p in range(3, limit, 2):
                if not _is_prime(p) or curve.conductor % p == 0:
                    continue
                _, rule = bsd.tamagawa_ord2_at(curve, p)
                counts[rule] = counts.get(rule, 0) + 1
        except BSDError as exc:
            return f"tamagawa-cross[{curve.label}]: {exc}", False
        total = sum(counts.values())
        detail = " ".join(f"{k}:{counts[k]}" for k in sorted(counts))
        return (f"tamagawa-cross[{curve.label}]: {total} primes < {limit} "
                f"agree ({detail})", True)

    raise ValueError(f"unknown scenario {scenario!r}")


def cmd_verify(config: RunConfig, curve: Curve, scenarios: list[str]) -> tuple[list[str], int]:
    lines = []
    all_ok = True
    for sc in scenarios:
        msg, ok = _verify_one(config, curve, sc)
        all_ok &= ok
        lines.append(f"{'PASS' if ok else 'FAIL'}  {msg}")
    return lines, 0 if all_ok else CHECK_FAILED


# ------------------------------------------------------ special-primes

def cmd_special_primes(config: RunConfig, q: int, limit: int) -> tuple[list[str], int]:
    primes = special_split_primes(q, limit)
    if config.fmt == "csv":
        lines = ["p"] + [str(p) for p in primes]
    else:
        lines = [", ".join(str(p) for p in primes) if primes else "(none)"]
    return lines, 0


# ----------------------------------------------------------------- main

def _ensure_base_value(curve: Curve, config: RunConfig) -> Curve:
    """Fill in L^(alg)(E, 1) for user curves that do not record it.

    The valuation bound needs phi(E), which depends on the base algebraic
    value; builtin curves carry it, user curves get it computed once here.
    """
    if curve.lalg_base is not None:
        return curve
    res = algebraic_part(curve, 1, target_digits=_table_digits(config.precision))
    if res.lalg is None:
        raise RegistryError(
            f"could not recognize the base L-value of {curve.label} "
            f"(residual {res.lalg_residual:.2e}); check omega"
        )
    return replace(curve, lalg_base=res.lalg)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        config = _config_from(args, parser)
        if args.command == "special-primes":
            if args.q not in ALLOWED_Q:
                parser.error(f"q must be one of {sorted(ALLOWED_Q)}")
            if args.limit < 1:
                parser.error("limit must be positive")
            lines, code = cmd_special_primes(config, args.q, args.limit)
        else:
            curve = resolve_curve(config.curve_label, config.curve_file)
            curve = _ensure_base_value(curve, config)
            if args.command == "table":
                if not (1 <= args.m_min <= args.m_max <= 10 ** 6):
                    parser.error("need 1 <= m_min <= m_max <= 10^6")
                lines, code = cmd_table(config, curve, args.m_min, args.m_max)
            elif args.command == "twist":
                if args.M < 1:
                    parser.error("M must be a positive integer")
                lines, code = cmd_twist(config, curve, args.M)
            else:
                lines, code = cmd_verify(config, curve, args.scenarios)
        _emit(config, lines)
        return code
    except SystemExit as exc:         # argparse uses 2 for usage errors
        return int(exc.code or 0)
    except (BSDError, RegistryError, QFieldError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
