"""Second moments of shifted L-values over non-principal characters.

Four target statistics, each paired with a closed-form main term and, where
one exists, an independent diagonal-class prediction:

  lemma4  sum_{chi != chi0} chi(a) |L(1,chi)|^2
  eq1     sum_{chi != chi0} |L(1,chi,a)|^2
  thm1    sum_{chi != chi0} chi(k) |L(1,chi,a)|^2
  thm2    sum_{chi != chi0} |S(chi,f)|^2 |L(1,chi,a)|^2   (S over a prime p)

The exact layer (character sums, the thm2 decomposition through the
difference-polynomial identity, the cross-term recombination) is asserted in
tests; main-term agreement is reported, never asserted, because two of the
published main terms show constant-level tension with the direct computation
(see the flags carried on reports).  Residual sweeps fit log |residual|
against log q so the decay exponent lands in the output rather than in a
hand-waved tolerance.
"""

from __future__ import annotations

import logging
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from . import lfun
from .arith import divisors, euler_phi, factorize, is_prime, moebius
from .cache import ReportCache
from .chars import CharacterTable, get_table
from .expsum import Polynomial, difference_sums, sample_polynomial, weighted_char_sum_all
from .specfun import ShiftParam, digamma, floor_ratio, harmonic, hurwitz_zeta

log = logging.getLogger("lfunlab")

TARGETS = ("lemma4", "eq1", "thm1", "thm2")

_ZETA2 = math.pi * math.pi / 6.0

# Divisor-sum reading for the thm2 main term: the statement mixes the sweep
# modulus q into a theorem about a prime p, so d runs over {1, p}.  Recorded
# on every thm2 report.
THM2_DIVISOR_NOTE = "divisor_sum_over_d|p"

TENSION_FLAG = "main_term_tension"


@dataclass(frozen=True)
class MeanValueQuery:
    """One evaluation request: target statistic, modulus, shift, weights."""

    target: str
    q: int
    a: ShiftParam
    k: int | None = None
    f: Polynomial | None = None
    method: str = "closed_direct"


def make_query(target: str, q: int, a, k: int | None = None, f: Polynomial | None = None,
               method: str = "closed_direct") -> MeanValueQuery:
    query = MeanValueQuery(target, q, ShiftParam.of(a), k, f, method)
    validate_query(query)
    return query


def _check_modulus(q) -> None:
    if not isinstance(q, int) or isinstance(q, bool) or q < 3:
        raise ValueError(f"modulus must be an integer >= 3, got {q!r}")


def validate_query(query: MeanValueQuery) -> None:
    if query.target not in TARGETS:
        raise ValueError(f"unknown target {query.target!r}; expected one of {TARGETS}")
    _check_modulus(query.q)
    if query.method not in lfun.METHODS:
        raise ValueError(f"unknown method {query.method!r}; expected one of {lfun.METHODS}")
    a = query.a
    if query.target == "lemma4":
        if not a.is_integer or a.numerator < 2:
            raise ValueError(f"lemma4 weight must be an integer >= 2, got a={a}")
        if math.gcd(a.numerator, query.q) != 1:
            raise ValueError(f"lemma4 weight a={a} must be coprime to q={query.q}")
        return
    if a.numerator < a.denominator:
        raise ValueError(f"shift must satisfy a >= 1, got a={a}")
    if query.target == "eq1":
        return
    if query.target == "thm1":
        k = query.k
        if not isinstance(k, int) or isinstance(k, bool) or k < 2:
            raise ValueError(f"thm1 weight k must be an integer >= 2, got {k!r}")
        if math.gcd(k, query.q) != 1:
            raise ValueError(f"thm1 weight k={k} must be coprime to q={query.q}")
        return
    # thm2
    if not is_prime(query.q):
        raise ValueError(f"thm2 modulus must be prime, got {query.q}")
    if query.f is None:
        raise ValueError("thm2 requires a polynomial")
    if not query.f.coprime_to(query.q):
        raise ValueError(f"p={query.q} divides every coefficient of {query.f}")
    if a.is_integer and math.gcd(a.numerator, query.q) != 1:
        raise ValueError(f"integer shift a={a} must be coprime to p={query.q}")


# ---------------------------------------------------------------------------
# L-value vectors, memoized in-process and optionally on disk.

_LVEC_MEMO: dict[tuple, np.ndarray] = {}
_LVEC_MEMO_CAP = 128


def _lvalue_vector(t: CharacterTable, a: ShiftParam, method: str,
                   cache: ReportCache | None = None) -> np.ndarray:
    """L(1, chi, a) for all characters by the requested route (principal = 0).

    Memoized per (q, a, method); the disk cache stores the closed routes only
    (the truncated route is the oracle and is recomputed on purpose).
    """
    n_terms = lfun.default_truncation(t.q) if method == "truncated" else None
    key = (t.q, a.numerator, a.denominator, method, n_terms)
    hit = _LVEC_MEMO.get(key)
    if hit is not None:
        return hit
    vec = None
    if cache is not None and method != "truncated":
        vec = cache.get_lvec(t.q, a.numerator, a.denominator, method)
        if vec is not None and len(vec) != t.phi:
            vec = None
    if vec is None:
        if method == "truncated":
            vec, _ = lfun.truncated_vector(t, a, n_terms)
            vec[t.principal_index] = 0.0
        else:
            vec = lfun.l1a_vector(t, a, method)
        if cache is not None and method != "truncated":
            cache.put_lvec(t.q, a.numerator, a.denominator, method, vec)
    if len(_LVEC_MEMO) >= _LVEC_MEMO_CAP:
        _LVEC_MEMO.clear()
    _LVEC_MEMO[key] = vec
    return vec


def clear_memo() -> None:
    _LVEC_MEMO.clear()


def _table(q: int, cache: ReportCache | None) -> CharacterTable:
    if cache is None:
        return get_table(q)
    t = cache.get_table(q)
    if t is None:
        t = get_table(q)
        cache.put_table(t)
    return t


def _squared_weights(t: CharacterTable, lvec: np.ndarray) -> np.ndarray:
    w = np.abs(lvec) ** 2
    w[t.principal_index] = 0.0
    return w


def _char_weighted_moment(t: CharacterTable, weights: np.ndarray, x: int) -> complex:
    """sum_{chi != chi0} chi(x) w_chi for a real weight vector."""
    col = t.values_matrix()[:, x % t.q]
    return complex(col @ weights)


def _sieve_factor(q: int) -> float:
    """prod_{p | q} (1 - p^-2), the coprimality correction to zeta(2)."""
    out = 1.0
    for p in factorize(q).primes():
        out *= 1.0 - 1.0 / (p * p)
    return out


def _mobius_divisor_terms(q: int) -> list[tuple[int, int]]:
    """(d, mu(d)) over squarefree divisors d | q."""
    out = []
    for d in divisors(factorize(q)):
        mu = moebius(factorize(d))
        if mu != 0:
            out.append((d, mu))
    return out


# ---------------------------------------------------------------------------
# lemma4: sum chi(a) |L(1, chi)|^2

def lemma4_lhs(q: int, a, method: str = "closed_direct",
               cache: ReportCache | None = None) -> complex:
    query = make_query("lemma4", q, a, method=method)
    t = _table(q, cache)
    lvec = _lvalue_vector(t, ShiftParam(0), method, cache)
    return _char_weighted_moment(t, _squared_weights(t, lvec), query.a.numerator)


def lemma4_main(q: int, a) -> float:
    make_query("lemma4", q, a)
    a_int = ShiftParam.of(a).numerator
    phi = euler_phi(factorize(q))
    return phi / a_int * _ZETA2 * _sieve_factor(q)


# ---------------------------------------------------------------------------
# eq1: sum |L(1, chi, a)|^2

class Eq1Main(NamedTuple):
    full: float
    first_term_only: float


def eq1_lhs(q: int, a, method: str = "closed_direct",
            cache: ReportCache | None = None) -> float:
    query = make_query("eq1", q, a, method=method)
    t = _table(q, cache)
    lvec = _lvalue_vector(t, query.a, method, cache)
    return float(_squared_weights(t, lvec).sum())


def eq1_main(q: int, a) -> Eq1Main:
    """Published main term and its first-term-only variant.

    full  = phi(q) sum_{d|q} mu(d)/d^2 zeta(2, a/d)
            - (4 phi(q)/a) sum_{d|q} mu(d)/d H_[a/d]
    first = the zeta sum alone.  The harmonic correction drives the full
    value negative for small a, while the LHS is a sum of squares; the first
    term alone is exactly the diagonal prediction, since
    sum_{d|q} mu(d) = 0 cancels the n = 0 boundary of the Hurwitz zetas.
    """
    query = make_query("eq1", q, a)
    a = query.a
    phi = euler_phi(factorize(q))
    zeta_sum = 0.0
    harmonic_sum = 0.0
    for d, mu in _mobius_divisor_terms(q):
        zeta_sum += mu / (d * d) * hurwitz_zeta(2.0, a.div_value(d))
        harmonic_sum += mu / d * harmonic(floor_ratio(a, d))
    first = phi * zeta_sum
    full = first - 4.0 * phi / a.real_value * harmonic_sum
    return Eq1Main(full, first)


# ---------------------------------------------------------------------------
# thm1: sum chi(k) |L(1, chi, a)|^2

def thm1_lhs(q: int, k: int, a, method: str = "closed_direct",
             cache: ReportCache | None = None) -> complex:
    query = make_query("thm1", q, a, k=k)
    t = _table(q, cache)
    lvec = _lvalue_vector(t, query.a, method, cache)
    return _char_weighted_moment(t, _squared_weights(t, lvec), k)


def thm1_main(q: int, k: int, a) -> float:
    """(phi(q)/(a (k-1))) sum_{d|q} mu(d)/d sum_{l=[a/(kd)]+1}^{[a/d]} 1/l.

    Inner blocks with an empty l-range contribute exactly 0.  The weight k
    enters as the written integer; only character evaluation reduces it mod q.
    """
    query = make_query("thm1", q, a, k=k)
    a = query.a
    phi = euler_phi(factorize(q))
    total = 0.0
    for d, mu in _mobius_divisor_terms(q):
        lo = floor_ratio(a, k * d)
        hi = floor_ratio(a, d)
        block = harmonic(hi) - harmonic(lo) if hi > lo else 0.0
        total += mu / d * block
    return phi / (a.real_value * (k - 1)) * total


def thm1_diagonal_oracle(q: int, k: int, a) -> float:
    """phi(q) sum_{n >= 1, gcd(n,q)=1} 1/((n+a)(kn+a)), in closed form.

    This is the m = kn exact-equality class of the orthogonality expansion of
    thm1_lhs: an independent prediction of the dominant contribution.  The
    Mobius sieve turns each class into sums of 1/((dm+a)(kdm+a)) whose
    partial fractions telescope to digamma differences:

        sum_m 1/((dm+a)(kdm+a)) = [psi(1 + a/d) - psi(1 + a/(kd))]/(a (k-1) d).

    At a = 0 the partial fractions collapse and the value is
    (phi(q)/k) zeta(2) prod_{p|q}(1 - p^-2).
    """
    _check_modulus(q)
    if not isinstance(k, int) or isinstance(k, bool) or k < 2:
        raise ValueError(f"weight k must be an integer >= 2, got {k!r}")
    if math.gcd(k, q) != 1:
        raise ValueError(f"weight k={k} must be coprime to q={q}")
    a = ShiftParam.of(a)
    phi = euler_phi(factorize(q))
    if a.is_zero:
        return phi / k * _ZETA2 * _sieve_factor(q)
    total = 0.0
    af = a.real_value
    for d, mu in _mobius_divisor_terms(q):
        total += mu / d * (digamma(1.0 + a.div_value(d)) - digamma(1.0 + a.div_value(k * d)))
    return phi / (af * (k - 1)) * total


# ---------------------------------------------------------------------------
# thm2: sum |S(chi, f)|^2 |L(1, chi, a)|^2 over a prime modulus

def thm2_lhs_direct(p: int, f: Polynomial, a, method: str = "closed_direct",
                    cache: ReportCache | None = None) -> float:
    query = make_query("thm2", p, a, f=f, method=method)
    t = _table(p, cache)
    lvec = _lvalue_vector(t, query.a, method, cache)
    s = weighted_char_sum_all(t, f)
    return float((np.abs(s) ** 2 * _squared_weights(t, lvec)).sum())


def thm2_lhs_decomposed(p: int, f: Polynomial, a, method: str = "closed_direct",
                        cache: ReportCache | None = None) -> complex:
    """(p-1) eq1-statistic + sum_{x=2}^{p-1} T(g_x) sum_chi chi(x) |L(1,chi,a)|^2.

    Splitting |S(chi,f)|^2 through the difference-polynomial identity turns
    the direct statistic into a diagonal part plus complete exponential sums
    against chi(x)-weighted moments; both sides are mathematically equal, so
    |direct - decomposed| is a floating-point-level end-to-end check of the
    whole exponential-sum layer.
    """
    query = make_query("thm2", p, a, f=f, method=method)
    t = _table(p, cache)
    lvec = _lvalue_vector(t, query.a, method, cache)
    w = _squared_weights(t, lvec)
    g = difference_sums(p, f)
    moments = t.values_matrix()[:, 2:].T @ w  # chi(x)-weighted moment per x = 2..p-1
    return complex((p - 1) * w.sum() + g @ moments)


def thm2_main(p: int, a, k_deg: int) -> float:
    """p^2 sum_{d|p} mu(d)/d^2 zeta(2, a/d) - (4 p^2/a) sum_{d|p} mu(d)/d H_[a/d],
    with d running over {1, p}."""
    if not isinstance(k_deg, int) or isinstance(k_deg, bool) or k_deg < 1:
        raise ValueError(f"polynomial degree must be an integer >= 1, got {k_deg!r}")
    if not is_prime(p):
        raise ValueError(f"thm2 modulus must be prime, got {p}")
    a = ShiftParam.of(a)
    if a.numerator < a.denominator:
        raise ValueError(f"shift must satisfy a >= 1, got a={a}")
    p2 = float(p * p)
    zeta_part = p2 * (hurwitz_zeta(2.0, a.real_value) - hurwitz_zeta(2.0, a.div_value(p)) / (p * p))
    harm_part = 4.0 * p2 / a.real_value * (harmonic(floor_ratio(a, 1)) - harmonic(floor_ratio(a, p)) / p)
    return zeta_part - harm_part


# ---------------------------------------------------------------------------
# Cross terms of the shift decomposition

@dataclass(frozen=True)
class CrossTerms:
    """The three mixed sums appearing when |L(1,chi,a)|^2 is expanded through
    L(1,chi) - a sum_n chi(n)/(n(n+a)), with the predicted leading
    expressions attached for side-by-side comparison (never asserted)."""

    q: int
    k: int
    a: ShiftParam
    m1: complex  # sum chi(k) T(chi, a) L(1, conj chi)
    m2: complex  # sum chi(k) T(conj chi, a) L(1, chi)
    m3: complex  # sum chi(k) |T(chi, a)|^2
    m1_predicted: float
    m2_predicted: float
    m3_predicted: float
    unshifted_moment: complex  # sum chi(k) |L(1, chi)|^2
    recombined: complex        # unshifted - a(m1 + m2) + a^2 m3


def cross_terms(q: int, k: int, a, cache: ReportCache | None = None) -> CrossTerms:
    query = make_query("thm1", q, a, k=k)
    a = query.a
    t = _table(q, cache)
    lvec = _lvalue_vector(t, ShiftParam(0), "closed_direct", cache)
    tvec = lfun.tail_vector(t, a)
    tvec[t.principal_index] = 0.0
    col = t.values_matrix()[:, k % q]
    conj = t.conjugate_map
    m1 = complex(col @ (tvec * lvec[conj]))
    m2 = complex(col @ (np.conj(tvec) * lvec))
    m3 = complex(col @ (np.abs(tvec) ** 2))
    unshifted = complex(col @ (np.abs(lvec) ** 2))
    af = a.real_value
    recombined = unshifted - af * (m1 + m2) + af * af * m3

    phi = euler_phi(factorize(q))
    sieve = _ZETA2 * _sieve_factor(q)
    h_d = 0.0
    h_kd = 0.0
    for d, mu in _mobius_divisor_terms(q):
        h_d += mu / d * harmonic(floor_ratio(a, d))
        h_kd += mu / d * harmonic(floor_ratio(a, k * d))
    m1_pred = phi / (af * k) * sieve - phi / (af * af * k) * h_d
    m2_pred = phi / (af * k) * sieve + phi / (af * af) * h_kd
    m3_pred = (
        phi / (af * af * k) * sieve
        + phi / (af**3 * k * (k - 1)) * h_d
        - k * phi / (af**3 * (k - 1)) * h_kd
    )
    return CrossTerms(q, k, a, m1, m2, m3, m1_pred, m2_pred, m3_pred, unshifted, recombined)


# ---------------------------------------------------------------------------
# Reports and sweeps

@dataclass(frozen=True)
class MeanValueReport:
    """Flattened, serialization-ready result of one query."""

    target: str
    q: int
    a: ShiftParam
    k: int | None
    f: Polynomial | None
    method: str
    lhs: complex
    lhs_imag_abs: float
    paper_main: float
    oracle_main: float | None
    residual: float
    normalized_residual: float
    route_agreement: float
    flags: tuple[str, ...]


def normalization(target: str, q: int, k_deg: int | None = None) -> float:
    """The error-term scale each residual is measured against."""
    if target in ("thm1", "eq1"):
        return euler_phi(factorize(q)) * math.log(q) / math.sqrt(q)
    if target == "lemma4":
        return math.log(q) ** 2
    if target == "thm2":
        if not k_deg:
            raise ValueError("thm2 normalization needs the polynomial degree")
        return float(q) ** (2.0 - 1.0 / k_deg)
    raise ValueError(f"unknown target {target!r}")


def _statistic(query: MeanValueQuery, t: CharacterTable, lvec: np.ndarray,
               sq_abs_char_sums: np.ndarray | None) -> complex:
    w = _squared_weights(t, lvec)
    if query.target == "eq1":
        return complex(w.sum())
    if query.target == "lemma4":
        return _char_weighted_moment(t, w, query.a.numerator)
    if query.target == "thm1":
        return _char_weighted_moment(t, w, query.k)
    return complex((sq_abs_char_sums * w).sum())


def build_report(query: MeanValueQuery, cache: ReportCache | None = None) -> MeanValueReport:
    """Evaluate the query, compare lfun routes, and assemble the report row."""
    validate_query(query)
    t = _table(query.q, cache)
    lvec_shift = ShiftParam(0) if query.target == "lemma4" else query.a
    sq_sums = None
    if query.target == "thm2":
        sq_sums = np.abs(weighted_char_sum_all(t, query.f)) ** 2

    methods = ["closed_direct", "closed_lemma1"]
    if query.method == "truncated":
        methods.append("truncated")
    stats = {
        m: _statistic(query, t, _lvalue_vector(t, lvec_shift, m, cache), sq_sums)
        for m in methods
    }
    lhs = stats[query.method]
    route_agreement = max(
        abs(stats[m1] - stats[m2]) for i, m1 in enumerate(methods) for m2 in methods[i + 1:]
    )

    if query.target == "lemma4":
        paper_main = lemma4_main(query.q, query.a)
        oracle_main = None
    elif query.target == "eq1":
        main = eq1_main(query.q, query.a)
        paper_main, oracle_main = main.full, main.first_term_only
    elif query.target == "thm1":
        paper_main = thm1_main(query.q, query.k, query.a)
        oracle_main = thm1_diagonal_oracle(query.q, query.k, query.a)
    else:
        paper_main = thm2_main(query.q, query.a, query.f.degree)
        oracle_main = (query.q - 1) * eq1_main(query.q, query.a).first_term_only

    residual = lhs.real - paper_main
    k_deg = query.f.degree if query.target == "thm2" else None
    flags = []
    if abs(residual) > 0.5 * abs(paper_main):
        flags.append(TENSION_FLAG)
    if query.target == "thm2":
        flags.append(THM2_DIVISOR_NOTE)

    return MeanValueReport(
        target=query.target,
        q=query.q,
        a=query.a,
        k=query.k if query.target == "thm1" else (k_deg if query.target == "thm2" else None),
        f=query.f,
        method=query.method,
        lhs=complex(lhs),
        lhs_imag_abs=abs(lhs.imag),
        paper_main=float(paper_main),
        oracle_main=None if oracle_main is None else float(oracle_main),
        residual=float(residual),
        normalized_residual=float(residual / normalization(query.target, query.q, k_deg)),
        route_agreement=float(route_agreement),
        flags=tuple(flags),
    )


@dataclass(frozen=True)
class ResidualSeries:
    """Sweep output: per-modulus reports plus the fitted residual growth law
    |residual| ~ C q^beta (least squares on the log-log cloud)."""

    target: str
    reports: tuple[MeanValueReport, ...]
    skipped: tuple[tuple[int, str], ...]
    beta: float
    constant: float

    @property
    def max_normalized_abs(self) -> float:
        if not self.reports:
            return 0.0
        return max(abs(r.normalized_residual) for r in self.reports)


def _fit_residuals(reports: Iterable[MeanValueReport]) -> tuple[float, float]:
    points = [(math.log(r.q), math.log(abs(r.residual))) for r in reports if r.residual != 0.0]
    if len(points) < 2:
        return float("nan"), float("nan")
    xs, ys = zip(*points)
    beta, log_c = np.polyfit(np.array(xs), np.array(ys), 1)
    return float(beta), float(math.exp(log_c))


def _sweep_query(target: str, q: int, a: ShiftParam, k: int | None,
                 f: Polynomial | None, degree: int | None, seed: int | None,
                 method: str) -> MeanValueQuery:
    if target == "thm2" and f is None:
        if degree is None:
            raise ValueError("thm2 sweep needs --f or a degree to sample")
        rng = random.Random((seed if seed is not None else 0) * 1_000_003 + q)
        f = sample_polynomial(rng, degree, q)
    return make_query(target, q, a, k=k, f=f, method=method)


def _report_for(args: tuple) -> MeanValueReport:
    query, cache_dir = args
    cache = ReportCache(cache_dir) if cache_dir is not None else None
    return build_report(query, cache)


def residual_sweep(target: str, moduli: Iterable[int], a, k: int | None = None,
                   f: Polynomial | None = None, degree: int | None = None,
                   seed: int | None = None, method: str = "closed_direct",
                   jobs: int = 1, cache: ReportCache | None = None) -> ResidualSeries:
    """Evaluate the target over a modulus list, skipping invalid moduli.

    Reports come back ordered by modulus regardless of worker scheduling;
    the fit runs on |residual| > 0 rows only.
    """
    a = ShiftParam.of(a)
    if target == "thm2" and f is None and degree is None:
        raise ValueError("thm2 sweep needs --f or a degree to sample")
    queries: list[MeanValueQuery] = []
    skipped: list[tuple[int, str]] = []
    for q in moduli:
        try:
            queries.append(_sweep_query(target, q, a, k, f, degree, seed, method))
        except ValueError as exc:
            log.warning("skipping q=%s: %s", q, exc)
            skipped.append((q, str(exc)))
    cache_dir = cache.directory if cache is not None else None
    if jobs > 1 and len(queries) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_report_for, [(qu, cache_dir) for qu in queries]))
    else:
        reports = [build_report(qu, cache) for qu in queries]
    reports.sort(key=lambda r: r.q)
    beta, constant = _fit_residuals(reports)
    return ResidualSeries(target, tuple(reports), tuple(skipped), beta, constant)
