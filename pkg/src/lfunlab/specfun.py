"""Real special functions and the exact rational shift parameter.

The two analytic workhorses are the digamma function psi(x) and the Hurwitz
zeta function zeta(s, alpha), both evaluated by shifting the argument into the
asymptotic regime and applying a fixed-order expansion with Bernoulli numbers
through B14.  Both are scalar, pure-stdlib, and deterministic; accuracy is
~1e-13 absolute for psi and ~1e-12 relative for zeta on the domains used here.

ShiftParam carries the series shift a as an exact reduced fraction so that
floor quantities like [a/d] never go through floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

# Bernoulli numbers B_2, B_4, ..., B_14 as exact ratios.
_B2K = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
)

# Coefficients B_{2k} / (2k) of x^{-2k} in the digamma asymptotic series.
_PSI_COEFFS = tuple(b / (2.0 * (k + 1)) for k, b in enumerate(_B2K))

_SHIFT_CUTOFF = 10.0  # asymptotic series kicks in at x >= 10


def digamma(x: float) -> float:
    """psi(x) for real x > 0, absolute error below 1e-13.

    Small arguments are shifted up with psi(x) = psi(x+1) - 1/x until
    x >= 10, where ln x - 1/(2x) - sum B_{2k}/(2k x^{2k}) (k <= 7) applies;
    the first omitted term is below 5e-17 there.
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError(f"digamma requires finite x > 0, got {x}")
    shift = 0.0
    while x < _SHIFT_CUTOFF:
        shift -= 1.0 / x
        x += 1.0
    w = 1.0 / (x * x)
    series = 0.0
    for c in reversed(_PSI_COEFFS):
        series = (series + c) * w
    return shift + math.log(x) - 0.5 / x - series


def hurwitz_zeta(s: float, alpha: float) -> float:
    """zeta(s, alpha) = sum_{n>=0} (n + alpha)^(-s) for s > 1, alpha > 0.

    Terms with n + alpha < 10 are summed directly; the remainder is the
    Euler-Maclaurin tail at c = M + alpha:

        c^(1-s)/(s-1) + c^(-s)/2
          + sum_{j=1..7} B_{2j}/(2j)! * s(s+1)...(s+2j-2) * c^(1-s-2j).

    Relative error stays below 1e-12 for the s used here (s = 2; any fixed
    s in (1, ~30] is safe at this cutoff).
    """
    s = float(s)
    alpha = float(alpha)
    if not math.isfinite(s) or s <= 1.0:
        raise ValueError(f"hurwitz_zeta requires s > 1, got {s}")
    if not math.isfinite(alpha) or alpha <= 0.0:
        raise ValueError(f"hurwitz_zeta requires alpha > 0, got {alpha}")
    m = max(0, math.ceil(_SHIFT_CUTOFF - alpha))
    direct = math.fsum((n + alpha) ** (-s) for n in range(m))
    c = m + alpha
    tail = c ** (1.0 - s) / (s - 1.0) + 0.5 * c ** (-s)
    rising = s  # s (s+1) ... (s + 2j - 2), grown incrementally
    cpow = c ** (-1.0 - s)  # c^{1 - s - 2j}, grown by c^{-2} per step
    inv_c2 = 1.0 / (c * c)
    for j, b in enumerate(_B2K, start=1):
        tail += b / math.factorial(2 * j) * rising * cpow
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        cpow *= inv_c2
    return direct + tail


def harmonic(n: int) -> float:
    """H_n = sum_{l=1..n} 1/l, with H_0 = 0."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError(f"harmonic expects an integer n >= 0, got {n!r}")
    return math.fsum(1.0 / l for l in range(1, n + 1))


@dataclass(frozen=True)
class ShiftParam:
    """Series shift a as an exact nonnegative rational numerator/denominator."""

    numerator: int
    denominator: int = 1

    def __post_init__(self) -> None:
        num, den = self.numerator, self.denominator
        if not isinstance(num, int) or not isinstance(den, int):
            raise ValueError("ShiftParam needs integer numerator and denominator")
        if den == 0:
            raise ValueError("ShiftParam denominator must be nonzero")
        if den < 0:
            num, den = -num, -den
        if num < 0:
            raise ValueError(f"shift must be >= 0, got {num}/{den}")
        g = math.gcd(num, den)
        object.__setattr__(self, "numerator", num // g)
        object.__setattr__(self, "denominator", den // g)

    @classmethod
    def of(cls, value) -> "ShiftParam":
        """Coerce an int, string ("7/2" or "3.5"), Fraction, or ShiftParam.

        Decimal strings are promoted exactly (3.5 -> 7/2); binary floats are
        rejected so that no silently-inexact shifts enter the exact layer.
        """
        if isinstance(value, ShiftParam):
            return value
        if isinstance(value, bool):
            raise ValueError(f"cannot interpret {value!r} as a shift")
        if isinstance(value, int):
            return cls(value, 1)
        if isinstance(value, Fraction):
            return cls(value.numerator, value.denominator)
        if isinstance(value, str):
            try:
                frac = Fraction(value.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"cannot parse shift {value!r}") from exc
            return cls(frac.numerator, frac.denominator)
        raise ValueError(f"cannot interpret {value!r} as a shift (floats must be strings)")

    @property
    def real_value(self) -> float:
        return self.numerator / self.denominator

    @property
    def is_integer(self) -> bool:
        return self.denominator == 1

    @property
    def is_zero(self) -> bool:
        return self.numerator == 0

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def div_value(self, d: int) -> float:
        """a/d as a float with a single rounding."""
        return self.numerator / (self.denominator * d)

    def __str__(self) -> str:
        if self.denominator == 1:
            return str(self.numerator)
        return f"{self.numerator}/{self.denominator}"


def floor_ratio(a: ShiftParam, d: int) -> int:
    """Exact integer floor of a/d for d >= 1."""
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"floor_ratio expects an integer d >= 1, got {d!r}")
    return a.numerator // (a.denominator * d)
