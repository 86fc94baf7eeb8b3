"""Command-line front end.

Subcommands:
  chars    print the character-group structure and defect diagnostics for q
  lvalue   evaluate L(1, chi, a) for the non-principal characters mod q
  expsum   weighted character sums and the complete sum for (p, f)
  verify   run one exact-identity check and exit nonzero on tolerance breach
  sweep    evaluate a mean-value target over many moduli; emit CSV/JSON rows
  cache    inspect or clear the on-disk cache

Examples:
  lfunlab lvalue --q 4 --a 1
  lfunlab verify --target lemma2 --p 13 --f 1,0,3,2
  lfunlab sweep --target lemma4 --primes 101..499 --a 2 --out lemma4.csv

Exit codes: 0 success, 2 validation error (bad flags or domain violations),
1 internal numeric failure (an asserted identity broke tolerance, or I/O).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

from . import lfun, meanval
from .arith import euler_phi, factorize, is_prime
from .cache import ReportCache, default_cache_dir
from .chars import get_table, orthogonality_defect, nonprincipal_period_sum_defect
from .expsum import Polynomial, complete_sum, lemma2_defect, lemma3_report, weighted_char_sum_all
from .meanval import MeanValueReport, ResidualSeries, build_report, cross_terms, residual_sweep
from .specfun import ShiftParam

CSV_COLUMNS = (
    "target",
    "q",
    "a_num",
    "a_den",
    "k",
    "lhs_re",
    "lhs_im",
    "paper_main",
    "oracle_main",
    "residual",
    "normalized_residual",
    "route_agreement",
)


@dataclass(frozen=True)
class RunConfig:
    """Parsed invocation; one evaluation plan."""

    subcommand: str
    q: int | None = None
    moduli: tuple[int, ...] | None = None
    a: ShiftParam | None = None
    k: int | None = None
    f: Polynomial | None = None
    degree: int | None = None
    method: str = "closed_direct"
    n_terms: int | None = None
    target: str | None = None
    char_index: int | None = None
    out: str | None = None
    cache_dir: str | None = None
    jobs: int = 1
    seed: int | None = None
    clear: bool = False


# ---------------------------------------------------------------------------
# Report serialization

def _sig15(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".15g")


def _report_row(r: MeanValueReport) -> dict:
    return {
        "target": r.target,
        "q": r.q,
        "a_num": r.a.numerator,
        "a_den": r.a.denominator,
        "k": r.k,
        "lhs_re": r.lhs.real,
        "lhs_im": r.lhs.imag,
        "paper_main": r.paper_main,
        "oracle_main": r.oracle_main,
        "residual": r.residual,
        "normalized_residual": r.normalized_residual,
        "route_agreement": r.route_agreement,
    }


def render_csv(reports) -> str:
    """The fixed 12-column schema with 15-significant-digit floats."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        row = _report_row(r)
        writer.writerow(
            [
                row["target"],
                row["q"],
                row["a_num"],
                row["a_den"],
                "" if row["k"] is None else row["k"],
                _sig15(row["lhs_re"]),
                _sig15(row["lhs_im"]),
                _sig15(row["paper_main"]),
                _sig15(row["oracle_main"]),
                _sig15(row["residual"]),
                _sig15(row["normalized_residual"]),
                _sig15(row["route_agreement"]),
            ]
        )
    return buf.getvalue()


def render_json(reports, series: ResidualSeries | None = None) -> str:
    """Same field names as the CSV, plus per-report flags and the sweep fit."""
    rows = []
    for r in reports:
        row = _report_row(r)
        row["flags"] = list(r.flags)
        rows.append(row)
    doc: dict = {"reports": rows}
    if series is not None:
        beta = None if math.isnan(series.beta) else series.beta
        constant = None if math.isnan(series.constant) else series.constant
        doc["fit"] = {"beta": beta, "constant": constant}
        doc["skipped"] = [{"q": q, "reason": reason} for q, reason in series.skipped]
    return json.dumps(doc, indent=2) + "\n"


def emit_report(reports, path: str | None, series: ResidualSeries | None = None) -> None:
    """Write reports to path (.csv or .json by extension); stdout if no path."""
    if isinstance(reports, MeanValueReport):
        reports = [reports]
    if path is None:
        sys.stdout.write(render_csv(reports))
        return
    if path.endswith(".json"):
        payload = render_json(reports, series)
    elif path.endswith(".csv"):
        payload = render_csv(reports)
    else:
        raise ValueError(f"output path must end in .csv or .json, got {path!r}")
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(payload)


# ---------------------------------------------------------------------------
# Argument parsing

def _parse_moduli(primes: str | None, moduli: str | None) -> tuple[int, ...]:
    if (primes is None) == (moduli is None):
        raise ValueError("exactly one of --primes A..B or --moduli n1,n2,... is required")
    if primes is not None:
        lo_hi = primes.split("..")
        if len(lo_hi) != 2:
            raise ValueError(f"--primes wants a range like 101..499, got {primes!r}")
        try:
            lo, hi = int(lo_hi[0]), int(lo_hi[1])
        except ValueError as exc:
            raise ValueError(f"--primes wants integer endpoints, got {primes!r}") from exc
        if lo > hi:
            raise ValueError(f"--primes range is empty: {primes!r}")
        return tuple(n for n in range(max(lo, 2), hi + 1) if is_prime(n))
    try:
        return tuple(int(tok.strip()) for tok in moduli.split(",") if tok.strip())
    except ValueError as exc:
        raise ValueError(f"--moduli wants a comma list of integers, got {moduli!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lfunlab",
        description="verification laboratory for shifted L-series mean values",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_cache_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--cache", action="store_true", help="enable the on-disk cache at the default directory")
        p.add_argument("--cache-dir", help="enable the on-disk cache at this directory")

    p_chars = sub.add_parser("chars", help="character-group structure and defects for one modulus")
    p_chars.add_argument("--q", type=int, required=True)
    p_chars.add_argument("--out", help="write the exponent table as JSON")
    add_cache_args(p_chars)

    p_lval = sub.add_parser("lvalue", help="L(1, chi, a) for the non-principal characters mod q")
    p_lval.add_argument("--q", type=int, required=True)
    p_lval.add_argument("--a", default="0")
    p_lval.add_argument("--j", type=int, default=None, help="single character index")
    p_lval.add_argument("--method", default="closed_direct", choices=lfun.METHODS)
    p_lval.add_argument("--n-terms", type=int, default=None, help="truncation length for --method truncated")
    add_cache_args(p_lval)

    p_exp = sub.add_parser("expsum", help="weighted character sums for (p, f)")
    p_exp.add_argument("--p", type=int, required=True)
    p_exp.add_argument("--f", required=True, help="polynomial coefficients a0,a1,...,ak")
    p_exp.add_argument("--j", type=int, default=None, help="single character index")

    p_ver = sub.add_parser("verify", help="run one exact-identity check")
    p_ver.add_argument(
        "--target",
        required=True,
        choices=("orthogonality", "lemma1", "lemma2", "lemma3", "thm2", "recombination"),
    )
    p_ver.add_argument("--q", type=int)
    p_ver.add_argument("--p", type=int)
    p_ver.add_argument("--a", default="1")
    p_ver.add_argument("--k", type=int)
    p_ver.add_argument("--f", help="polynomial coefficients a0,a1,...,ak")
    p_ver.add_argument("--n-terms", type=int, default=None)
    add_cache_args(p_ver)

    p_swp = sub.add_parser("sweep", help="evaluate a mean-value target over many moduli")
    p_swp.add_argument("--target", required=True, choices=meanval.TARGETS)
    p_swp.add_argument("--primes", help="inclusive prime range A..B")
    p_swp.add_argument("--moduli", help="explicit comma-separated modulus list")
    p_swp.add_argument("--a", required=True)
    p_swp.add_argument("--k", type=int)
    p_swp.add_argument("--f", help="fixed polynomial for thm2 sweeps")
    p_swp.add_argument("--degree", type=int, help="sample a polynomial of this degree per modulus (thm2)")
    p_swp.add_argument("--seed", type=int, default=0, help="seed for polynomial sampling")
    p_swp.add_argument("--method", default="closed_direct", choices=lfun.METHODS)
    p_swp.add_argument("--jobs", type=int, default=1, help="parallel workers across moduli")
    p_swp.add_argument("--out", help="output path (.csv or .json)")
    add_cache_args(p_swp)

    p_cache = sub.add_parser("cache", help="inspect or clear the on-disk cache")
    p_cache.add_argument("--cache-dir", help="cache directory (default: env or ~/.cache/lfunlab)")
    p_cache.add_argument("--clear", action="store_true")

    return parser


def _config_from(ns: argparse.Namespace) -> RunConfig:
    f = Polynomial.parse(ns.f) if getattr(ns, "f", None) else None
    a = ShiftParam.of(ns.a) if getattr(ns, "a", None) is not None else None
    moduli = None
    if ns.subcommand == "sweep":
        moduli = _parse_moduli(ns.primes, ns.moduli)
    q = getattr(ns, "q", None)
    p = getattr(ns, "p", None)
    return RunConfig(
        subcommand=ns.subcommand,
        q=q if q is not None else p,
        moduli=moduli,
        a=a,
        k=getattr(ns, "k", None),
        f=f,
        degree=getattr(ns, "degree", None),
        method=getattr(ns, "method", "closed_direct"),
        n_terms=getattr(ns, "n_terms", None),
        target=getattr(ns, "target", None),
        char_index=getattr(ns, "j", None),
        out=getattr(ns, "out", None),
        cache_dir=getattr(ns, "cache_dir", None),
        jobs=getattr(ns, "jobs", 1),
        seed=getattr(ns, "seed", None),
        clear=getattr(ns, "clear", False),
    )


def _cache_from(cfg: RunConfig, ns: argparse.Namespace) -> ReportCache | None:
    if cfg.cache_dir:
        return ReportCache(cfg.cache_dir)
    if getattr(ns, "cache", False):
        return ReportCache(default_cache_dir())
    return None


# ---------------------------------------------------------------------------
# Subcommand handlers (return exit codes)

def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValueError(message)


def _handle_chars(cfg: RunConfig, cache: ReportCache | None) -> int:
    t = get_table(cfg.q)
    if cache is not None:
        cache.put_table(t)
    phi = t.phi
    print(f"modulus q = {t.q}: phi(q) = {phi}, character group exponent = {t.exponent}")
    for c in t.components:
        gens = ", ".join(str(g) for g in c.generators)
        orders = ", ".join(str(s) for s in c.orders)
        print(f"  component mod {c.prime_power}: generators ({gens}), orders ({orders})")
    print(f"orthogonality defect = {orthogonality_defect(t):.3e} (tolerance {1e-9 * phi:.3e})")
    print(f"non-principal period-sum defect = {nonprincipal_period_sum_defect(t):.3e}")
    if cfg.out:
        doc = {
            "q": t.q,
            "phi": t.phi,
            "exponent": t.exponent,
            "principal_index": t.principal_index,
            "value_exponents": t.value_exponents.tolist(),
            "conjugate_map": t.conjugate_map.tolist(),
        }
        with open(cfg.out, "w", encoding="utf-8") as handle:
            json.dump(doc, handle)
        print(f"wrote exponent table to {cfg.out}")
    return 0


def _handle_lvalue(cfg: RunConfig, cache: ReportCache | None) -> int:
    t = get_table(cfg.q)
    _require(t.phi > 1, f"modulus {cfg.q} has no non-principal characters")
    a = cfg.a if cfg.a is not None else ShiftParam(0)
    if 0 < a.numerator < a.denominator:
        print(f"note: shift a = {a} < 1 lies outside the mean-value theorems' range a >= 1")
    indices = [cfg.char_index] if cfg.char_index is not None else [
        j for j in range(t.phi) if j != t.principal_index
    ]
    for j in indices:
        res = lfun.evaluate(t, j, a, cfg.method, cfg.n_terms)
        print(
            f"j={j}: L(1, chi_{j}, {a}) = {res.value.real:.8f}{res.value.imag:+.8f}i"
            f"  [{res.method}, error bound {res.error_bound:.2e}]"
        )
    return 0


def _handle_expsum(cfg: RunConfig) -> int:
    p = cfg.q
    f = cfg.f
    _require(f is not None, "--f is required")
    t = get_table(p)
    sums = weighted_char_sum_all(t, f)
    total = complete_sum(p, f.coefficients)
    print(f"p = {p}, f = {f}  (degree {f.degree}, sqrt(p) = {math.sqrt(p):.6f})")
    print(f"complete sum over y=1..p-1: {total.real:+.6f}{total.imag:+.6f}i  |T| = {abs(total):.6f}")
    indices = [cfg.char_index] if cfg.char_index is not None else range(t.phi)
    for j in indices:
        s = sums[j]
        tag = " (principal)" if j == t.principal_index else ""
        print(f"j={j}{tag}: S = {s.real:+.6f}{s.imag:+.6f}i  |S| = {abs(s):.6f}")
    return 0


def _handle_verify(cfg: RunConfig, cache: ReportCache | None) -> int:
    target = cfg.target
    if target == "orthogonality":
        _require(cfg.q is not None, "--q is required")
        t = get_table(cfg.q)
        defect = orthogonality_defect(t)
        tol = 1e-9 * t.phi
        print(f"orthogonality defect for q={cfg.q}: {defect:.3e} (tolerance {tol:.3e})")
        return 0 if defect < tol else 1

    if target == "lemma1":
        _require(cfg.q is not None, "--q is required")
        t = get_table(cfg.q)
        _require(t.phi > 1, f"modulus {cfg.q} has no non-principal characters")
        a = cfg.a
        n_terms = cfg.n_terms if cfg.n_terms is not None else lfun.default_truncation(t.q)
        worst_gap = 0.0
        worst_excess = -math.inf
        for j in range(t.phi):
            if j == t.principal_index:
                continue
            direct = lfun.l1_chi_a(t, j, a, "closed_direct")
            lemma = lfun.l1_chi_a(t, j, a, "closed_lemma1")
            trunc = lfun.l1_chi_a_truncated(t, j, a, n_terms)
            worst_gap = max(worst_gap, abs(direct.value - lemma.value))
            worst_excess = max(
                worst_excess,
                abs(direct.value - trunc.value) - trunc.error_bound,
                abs(lemma.value - trunc.value) - trunc.error_bound,
            )
        print(f"closed-route gap for q={cfg.q}, a={a}: {worst_gap:.3e} (tolerance 1e-09)")
        print(f"worst closed-vs-truncated excess over the rigorous bound: {worst_excess:.3e} (must be < 0)")
        return 0 if worst_gap < 1e-9 and worst_excess < 0 else 1

    if target == "lemma2":
        _require(cfg.q is not None and cfg.f is not None, "--p and --f are required")
        t = get_table(cfg.q)
        defect = lemma2_defect(t, cfg.f)
        tol = 1e-7 * cfg.q
        print(f"difference-sum identity defect for p={cfg.q}, f={cfg.f}: {defect:.3e} (tolerance {tol:.3e})")
        return 0 if defect < tol else 1

    if target == "lemma3":
        _require(cfg.q is not None and cfg.f is not None, "--p and --f are required")
        audit = lemma3_report(cfg.q, cfg.f)
        n_deg = len(audit.degenerate_x)
        print(
            f"completed sums for p={audit.p}, f={cfg.f}: {len(audit.entries)} values, "
            f"{n_deg} degenerate {list(audit.degenerate_x)}"
        )
        print(f"  bound |T| <= eff_deg*sqrt(p)+1 holds: {audit.bounds_ok}")
        print(f"  degenerate values all exactly p-1: {audit.degenerate_values_ok}")
        print(f"  degenerate count <= degree-1: {audit.degenerate_count_ok}")
        print(f"  degenerate x >= p^(1/degree): {audit.degenerate_x_bound_ok}")
        return 0 if audit.all_ok else 1

    if target == "thm2":
        _require(cfg.q is not None and cfg.f is not None, "--p and --f are required")
        direct = meanval.thm2_lhs_direct(cfg.q, cfg.f, cfg.a, cfg.method, cache)
        decomposed = meanval.thm2_lhs_decomposed(cfg.q, cfg.f, cfg.a, cfg.method, cache)
        gap = abs(direct - decomposed)
        tol = 1e-6 * cfg.q * cfg.q
        print(f"direct     = {direct:.12g}")
        print(f"decomposed = {decomposed.real:.12g}{decomposed.imag:+.3e}i")
        print(f"split identity gap for p={cfg.q}: {gap:.3e} (tolerance {tol:.3e})")
        return 0 if gap < tol else 1

    # recombination
    _require(cfg.q is not None and cfg.k is not None, "--q and --k are required")
    ct = cross_terms(cfg.q, cfg.k, cfg.a, cache)
    lhs = meanval.thm1_lhs(cfg.q, cfg.k, cfg.a, cache=cache)
    gap = abs(lhs - ct.recombined)
    phi = euler_phi(factorize(cfg.q))
    tol = 1e-8 * phi
    print(f"m1 = {ct.m1:.10g}  (predicted {ct.m1_predicted:.10g})")
    print(f"m2 = {ct.m2:.10g}  (predicted {ct.m2_predicted:.10g})")
    print(f"m3 = {ct.m3:.10g}  (predicted {ct.m3_predicted:.10g})")
    print(f"recombination gap for q={cfg.q}, k={cfg.k}, a={cfg.a}: {gap:.3e} (tolerance {tol:.3e})")
    return 0 if gap < tol else 1


def _handle_sweep(cfg: RunConfig, cache: ReportCache | None) -> int:
    series = residual_sweep(
        cfg.target,
        cfg.moduli,
        cfg.a,
        k=cfg.k,
        f=cfg.f,
        degree=cfg.degree,
        seed=cfg.seed,
        method=cfg.method,
        jobs=cfg.jobs,
        cache=cache,
    )
    emit_report(list(series.reports), cfg.out, series)
    info = sys.stdout if cfg.out else sys.stderr
    print(
        f"{cfg.target}: {len(series.reports)} reports, {len(series.skipped)} skipped; "
        f"fit |residual| ~ C q^beta with beta = {series.beta:.4f}, C = {series.constant:.4g}; "
        f"max |normalized residual| = {series.max_normalized_abs:.6g}",
        file=info,
    )
    for r in series.reports:
        if r.flags:
            print(f"flag q={r.q}: {', '.join(r.flags)}", file=info)
    if cfg.out:
        print(f"wrote {cfg.out}", file=info)
    return 0


def _handle_cache(cfg: RunConfig) -> int:
    directory = cfg.cache_dir or default_cache_dir()
    cache = ReportCache(directory)
    entries = cache.entries()
    tables = sum(1 for e in entries if e.startswith("table_"))
    lvecs = sum(1 for e in entries if e.startswith("lvec_"))
    print(f"cache directory: {directory}")
    print(f"entries: {tables} character tables, {lvecs} L-value vectors")
    if cfg.clear:
        removed = cache.clear()
        print(f"cleared {removed} entries")
    return 0


def run(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = _config_from(ns)
        cache = _cache_from(cfg, ns) if ns.subcommand != "cache" else None
        if cfg.subcommand == "chars":
            return _handle_chars(cfg, cache)
        if cfg.subcommand == "lvalue":
            return _handle_lvalue(cfg, cache)
        if cfg.subcommand == "expsum":
            return _handle_expsum(cfg)
        if cfg.subcommand == "verify":
            return _handle_verify(cfg, cache)
        if cfg.subcommand == "sweep":
            return _handle_sweep(cfg, cache)
        return _handle_cache(cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


def main() -> int:
    return run()


if __name__ == "__main__":
    sys.exit(main())
