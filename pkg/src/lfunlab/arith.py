"""Elementary multiplicative arithmetic.

Integer factorization by deterministic trial division, the multiplicative
functions built on top of it (Euler phi, Moebius mu, divisor lists), smallest
primitive roots of prime powers, and discrete-logarithm tables for cyclic unit
groups.  Everything here is exact integer arithmetic; no floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Factorization:
    """Prime factorization n = prod p_i^e_i with p_1 < p_2 < ... ."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def factorize(n: int) -> Factorization:
    """Factor a positive integer by trial division.

    Deterministic and exact for any n this package handles (moduli stay far
    below 2**32, so the sqrt(n) scan is cheap).
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError(f"factorize expects an integer, got {n!r}")
    if n < 1:
        raise ValueError(f"factorize expects n >= 1, got {n}")
    if n > 2**32:
        raise ValueError(f"factorize supports n <= 2^32, got {n}")
    m = n
    factors = []
    for p in (2, 3):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    # remaining prime factors are of the form 6k +- 1
    p = 5
    while p * p <= m:
        for q in (p, p + 2):
            if m % q == 0:
                e = 0
                while m % q == 0:
                    m //= q
                    e += 1
                factors.append((q, e))
        p += 6
    if m > 1:
        factors.append((m, 1))
    factors.sort()
    return Factorization(n, tuple(factors))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = factorize(n)
    return len(f.factors) == 1 and f.factors[0][1] == 1


def euler_phi(f: Factorization) -> int:
    """phi(n) from the factorization: prod p^(e-1) (p - 1)."""
    phi = 1
    for p, e in f.factors:
        phi *= p ** (e - 1) * (p - 1)
    return phi


def moebius(f: Factorization) -> int:
    """mu(n): 0 if any square divides n, else (-1)^(number of prime factors)."""
    for _, e in f.factors:
        if e > 1:
            return 0
    return -1 if len(f.factors) % 2 else 1


def divisors(f: Factorization) -> list[int]:
    """All positive divisors of n, ascending."""
    divs = [1]
    for p, e in f.factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def gcd(a: int, b: int) -> int:
    return math.gcd(a, b)


def _multiplicative_order_is(g: int, m: int, order: int, order_f: Factorization) -> bool:
    """True iff g has full multiplicative order `order` modulo m.

    Checks g^(order/r) != 1 for every prime r | order; assumes g^order == 1,
    which holds for units by Euler's theorem when order = phi(m).
    """
    for r in order_f.primes():
        if pow(g, order // r, m) == 1:
            return False
    return True


def primitive_root(pk: int) -> int:
    """Smallest primitive root modulo pk.

    Only moduli with cyclic unit groups are accepted: 1, 2, 4, p^e, 2 p^e for
    odd primes p.  Candidates are scanned in increasing order and the order
    check uses the factored group order, so the result is deterministic.
    """
    if pk < 1:
        raise ValueError(f"primitive_root expects pk >= 1, got {pk}")
    if pk in (1, 2):
        return 1  # trivial unit group
    if pk == 4:
        return 3
    f = factorize(pk)
    odd = [(p, e) for p, e in f.factors if p != 2]
    two_exp = next((e for p, e in f.factors if p == 2), 0)
    cyclic = len(odd) == 1 and two_exp <= 1
    if not cyclic:
        raise ValueError(f"unit group mod {pk} is not cyclic; no primitive root exists")
    phi = euler_phi(f)
    phi_f = factorize(phi)
    for g in range(2, pk):
        if math.gcd(g, pk) != 1:
            continue
        if _multiplicative_order_is(g, pk, phi, phi_f):
            return g
    raise ValueError(f"no primitive root found modulo {pk}")  # unreachable for valid pk


def discrete_log_table(pk: int, g: int) -> dict[int, int]:
    """Map unit residue -> exponent t with g^t = residue (mod pk).

    g must generate the full unit group; the table has exactly phi(pk)
    entries, one per unit, with exponents 0 .. phi(pk)-1.
    """
    if pk < 1:
        raise ValueError(f"discrete_log_table expects pk >= 1, got {pk}")
    if pk > 1 and math.gcd(g, pk) != 1:
        raise ValueError(f"{g} is not a unit modulo {pk}")
    phi = euler_phi(factorize(pk))
    table: dict[int, int] = {}
    x = 1 % pk
    for t in range(phi):
        if x in table:
            raise ValueError(f"{g} does not generate the units modulo {pk}")
        table[x] = t
        x = (x * g) % pk
    if x != 1 % pk:
        raise ValueError(f"{g} does not generate the units modulo {pk}")
    return table
