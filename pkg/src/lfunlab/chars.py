"""Dirichlet character tables with exact root-of-unity bookkeeping.

The character group mod q is assembled from the cyclic components of the unit
group: one generator per odd prime power, the usual two-generator structure
<-1> x <5> for 2^e with e >= 3.  A character is an exponent tuple over those
components, ordered lexicographically, and every character value is stored as
an integer v with chi(n) = exp(2 pi i v / L), where L is the lcm of the
component orders.  Floats appear only when a caller asks for complex values;
all table contents are exact integers, so cached tables are bit-reproducible.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .arith import discrete_log_table, euler_phi, factorize, primitive_root

_MAX_MODULUS = 10**5  # phi(q) * q exponent entries must stay desk-scale


@dataclass(frozen=True)
class GroupComponent:
    """One cyclic factor of the unit group mod q."""

    prime_power: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]


@dataclass(eq=False)
class CharacterTable:
    """All phi(q) Dirichlet characters mod q as an integer exponent matrix.

    value_exponents[j, n] = v means chi_j(n) = exp(2 pi i v / exponent);
    the sentinel -1 marks gcd(n, q) > 1 where chi_j(n) = 0.  Character j = 0
    (the all-zero exponent tuple, first in lexicographic order) is principal.
    """

    q: int
    phi: int
    exponent: int
    components: tuple[GroupComponent, ...]
    value_exponents: np.ndarray
    conjugate_map: np.ndarray
    principal_index: int = 0
    _values: np.ndarray | None = field(default=None, init=False, repr=False)
    _roots: np.ndarray | None = field(default=None, init=False, repr=False)

    def roots_of_unity(self) -> np.ndarray:
        """exp(2 pi i v / L) for v = 0 .. L-1."""
        if self._roots is None:
            angles = 2.0 * np.pi * np.arange(self.exponent) / self.exponent
            self._roots = np.exp(1j * angles)
        return self._roots

    def values_matrix(self) -> np.ndarray:
        """Complex phi(q) x q matrix of character values (column n = residue n)."""
        if self._values is None:
            roots = self.roots_of_unity()
            exps = self.value_exponents
            vals = roots[np.where(exps >= 0, exps, 0)]
            vals[exps < 0] = 0.0
            self._values = vals
        return self._values

    def unit_residues(self) -> np.ndarray:
        return np.nonzero(self.value_exponents[self.principal_index] >= 0)[0]


def _two_power_logs(e: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-residue logs (t0, t1) with u = (-1)^t0 5^t1 mod 2^e, e >= 3."""
    pk = 2**e
    half = 2 ** (e - 2)
    t0 = np.full(pk, -1, dtype=np.int64)
    t1 = np.full(pk, -1, dtype=np.int64)
    x = 1
    for i in range(half):
        t0[x], t1[x] = 0, i
        t0[pk - x], t1[pk - x] = 1, i
        x = (x * 5) % pk
    return t0, t1


def _component_logs(q: int) -> tuple[list[GroupComponent], list[int], np.ndarray]:
    """Components, cyclic orders, and per-residue log matrix of shape (q, r)."""
    components: list[GroupComponent] = []
    orders: list[int] = []
    log_columns: list[np.ndarray] = []
    residues = np.arange(q, dtype=np.int64)
    for p, e in factorize(q).factors:
        pk = p**e
        if p == 2:
            if e == 1:
                continue  # units mod 2 are trivial
            if e == 2:
                components.append(GroupComponent(4, (3,), (2,)))
                orders.append(2)
                col = np.array([-1, 0, -1, 1], dtype=np.int64)
                log_columns.append(col[residues % 4])
                continue
            components.append(GroupComponent(pk, (pk - 1, 5), (2, 2 ** (e - 2))))
            orders.extend((2, 2 ** (e - 2)))
            t0, t1 = _two_power_logs(e)
            log_columns.append(t0[residues % pk])
            log_columns.append(t1[residues % pk])
            continue
        g = primitive_root(pk)
        order = euler_phi(factorize(pk))
        components.append(GroupComponent(pk, (g,), (order,)))
        orders.append(order)
        dense = np.full(pk, -1, dtype=np.int64)
        for u, t in discrete_log_table(pk, g).items():
            dense[u] = t
        log_columns.append(dense[residues % pk])
    if log_columns:
        logs = np.stack(log_columns, axis=1)
    else:
        logs = np.zeros((q, 0), dtype=np.int64)
    return components, orders, logs


def _exponent_tuples(orders: list[int], phi: int) -> np.ndarray:
    """All exponent tuples in lexicographic order (last component fastest)."""
    r = len(orders)
    tuples = np.zeros((phi, r), dtype=np.int64)
    idx = np.arange(phi, dtype=np.int64)
    for i in range(r - 1, -1, -1):
        tuples[:, i] = idx % orders[i]
        idx //= orders[i]
    return tuples


def build_character_table(q: int) -> CharacterTable:
    """Construct the full character table mod q.

    Accepts 1 <= q <= 1e5 (the exponent matrix has phi(q) * q entries).
    q = 1 yields the single character that is identically 1, with every
    integer landing in the unit residue class 0.
    """
    if not isinstance(q, int) or isinstance(q, bool) or q < 1:
        raise ValueError(f"modulus must be a positive integer, got {q!r}")
    if q > _MAX_MODULUS:
        raise ValueError(f"modulus {q} exceeds the table memory bound {_MAX_MODULUS}")
    components, orders, logs = _component_logs(q)
    phi = euler_phi(factorize(q))
    big_l = math.lcm(*orders) if orders else 1
    tuples = _exponent_tuples(orders, phi)

    units = (
        np.nonzero(np.gcd(np.arange(q, dtype=np.int64), q) == 1)[0]
        if q > 1
        else np.array([0], dtype=np.int64)
    )
    weights = np.array([big_l // s for s in orders], dtype=np.int64)
    unit_exps = (tuples * weights) @ logs[units].T % big_l

    exps = np.full((phi, q), -1, dtype=np.int32)
    exps[:, units] = unit_exps.astype(np.int32)

    radix = np.array(orders, dtype=np.int64)
    conj_tuples = np.where(tuples == 0, 0, radix - tuples)
    place = np.ones(len(orders), dtype=np.int64)
    for i in range(len(orders) - 2, -1, -1):
        place[i] = place[i + 1] * orders[i + 1]
    conjugate_map = conj_tuples @ place if len(orders) else np.zeros(phi, dtype=np.int64)

    return CharacterTable(
        q=q,
        phi=phi,
        exponent=big_l,
        components=tuple(components),
        value_exponents=exps,
        conjugate_map=np.asarray(conjugate_map, dtype=np.int64),
    )


@functools.lru_cache(maxsize=16)
def get_table(q: int) -> CharacterTable:
    """Memoized build_character_table; sweeps touching one modulus at a time
    keep at most a handful of tables alive."""
    return build_character_table(q)


def char_value(t: CharacterTable, j: int, n: int) -> complex:
    """chi_j(n) as a complex number (0 on non-units)."""
    if not 0 <= j < t.phi:
        raise ValueError(f"character index {j} out of range for modulus {t.q}")
    v = int(t.value_exponents[j, n % t.q])
    if v < 0:
        return 0j
    return complex(t.roots_of_unity()[v])


def is_principal(t: CharacterTable, j: int) -> bool:
    return j == t.principal_index


def conjugate_index(t: CharacterTable, j: int) -> int:
    """Index of the complex-conjugate character of chi_j."""
    if not 0 <= j < t.phi:
        raise ValueError(f"character index {j} out of range for modulus {t.q}")
    return int(t.conjugate_map[j])


def orthogonality_defect(t: CharacterTable) -> float:
    """max over unit pairs (n, l) of |sum_chi chi(n) conj(chi(l)) - phi [n==l]|."""
    units = t.unit_residues()
    v = t.values_matrix()[:, units]
    gram = v.conj().T @ v
    gram[np.diag_indices_from(gram)] -= t.phi
    return float(np.abs(gram).max())


def nonprincipal_period_sum_defect(t: CharacterTable) -> float:
    """max over chi != chi_0 of |sum_{n=1..q} chi(n)| (exactly 0 in theory)."""
    if t.phi == 1:
        return 0.0
    sums = t.values_matrix().sum(axis=1)
    sums[t.principal_index] = 0.0
    return float(np.abs(sums).max())
