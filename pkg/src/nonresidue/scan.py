"""Exhaustive searches and counts over residues modulo a prime.

Least nonresidues and primitive roots, the exact count J of
simultaneous nonresidues up to H, Dirichlet character partial sums,
and the closed-form bound quantities reported next to them.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InternalError, InvalidArgument
from .modarith import (
    ModulusContext,
    discrete_log_table,
    find_primitive_root,
    is_prime,
)

MAX_TABLE_PRIME = 1 << 26


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise InvalidArgument(f"{p} is not prime")


def least_q_nonresidue(p: int, q: int) -> int:
    """Smallest n >= 2 that is not a q-th power modulo p."""
    _require_prime(p)
    if q < 2 or (p - 1) % q or not is_prime(q):
        raise InvalidArgument(f"{q} is not a prime divisor of {p - 1}")
    e = (p - 1) // q
    n = 2
    while pow(n, e, p) == 1:
        n += 1
    return n


def least_simultaneous_nonresidue(p: int, targets: Sequence[int] | None = None) -> int:
    """Smallest n >= 2 that is a q-th power nonresidue for every target q."""
    ctx = ModulusContext.create(p, targets)
    cofs = ctx.cofactors
    n = 2
    while n % p == 0 or any(pow(n, c, p) == 1 for c in cofs):
        n += 1
    return n


def least_primitive_root(p: int) -> int:
    """Least primitive root, cross-checked against the all-divisor nonresidue scan."""
    if p < 3:
        raise InvalidArgument("p must be an odd prime")
    _require_prime(p)
    g = find_primitive_root(p)
    n = least_simultaneous_nonresidue(p, None)
    if g != n:
        raise InternalError(f"primitive root {g} differs from least nonresidue {n} mod {p}")
    return g


# Below this bound (p-1)**2 fits in int64 and numpy can do the arithmetic.
_NUMPY_PRIME_LIMIT = 1 << 31


def _powmod_array(bases: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.ones_like(bases)
    b = bases % p
    while e:
        if e & 1:
            result = result * b % p
        b = b * b % p
        e >>= 1
    return result


def count_by_euler(ctx: ModulusContext, H: int) -> int:
    """Count n <= H that fail Euler's criterion for every target."""
    p = ctx.p
    cofs = ctx.cofactors
    if p < _NUMPY_PRIME_LIMIT:
        ns = np.arange(1, H + 1, dtype=np.int64)
        keep = np.ones(H, dtype=bool)
        for c in cofs:
            keep &= _powmod_array(ns, c, p) != 1
        return int(keep.sum())
    return sum(1 for n in range(1, H + 1) if all(pow(n, c, p) != 1 for c in cofs))


def count_by_index(ctx: ModulusContext, H: int, table: Sequence[int] | None = None) -> int:
    """Count n <= H with the index coprime to the product of the targets."""
    if table is None:
        table = discrete_log_table(ctx.p, ctx.g)
    prod = math.prod(ctx.targets)
    if prod < _NUMPY_PRIME_LIMIT:
        ind = np.asarray(table[1 : H + 1], dtype=np.int64)
        return int((np.gcd(ind, prod) == 1).sum())
    return sum(1 for n in range(1, H + 1) if math.gcd(table[n], prod) == 1)


def count_simultaneous_nonresidues(
    p: int, targets: Sequence[int] | None, H: int, table: Sequence[int] | None = None
) -> int:
    """Exact J for ``1 <= H < p``, computed two independent ways."""
    if not 1 <= H < p:
        raise InvalidArgument(f"need 1 <= H < p, got H = {H}, p = {p}")
    ctx = ModulusContext.create(p, targets)
    j1 = count_by_euler(ctx, H)
    j2 = count_by_index(ctx, H, table)
    if j1 != j2:
        raise InternalError(f"J mismatch modulo {p}: Euler {j1}, index {j2}")
    return j1


def main_term(H: int, targets: Sequence[int]) -> float:
    """``H * prod(1 - 1/q)``, the density prediction for J."""
    return H * math.prod(1 - 1 / q for q in targets)


def _check_character(p: int, k: int) -> None:
    _require_prime(p)
    if p > MAX_TABLE_PRIME:
        raise InvalidArgument(f"p = {p} too large for an index table")
    if k % (p - 1) == 0:
        raise InvalidArgument("k = 0 mod p-1 is the principal character")


def _character_values(table: Sequence[int], p: int, k: int, H: int) -> np.ndarray:
    ind = np.asarray(table[1 : H + 1], dtype=np.int64)
    return np.exp(2j * np.pi * ((k * ind) % (p - 1)) / (p - 1))


_QUARTER_TURNS = (1 + 0j, 1j, -1 + 0j, -1j)


def _root_of_unity(e: int, m: int) -> complex:
    """``exp(2 pi i e / m)``, exact at multiples of a quarter turn."""
    if 4 * e % m == 0:
        return _QUARTER_TURNS[4 * e // m % 4]
    return cmath.exp(2j * math.pi * e / m)


def character_partial_sum(
    p: int, k: int, H: int, table: Sequence[int] | None = None
) -> complex:
    """``sum_{n <= H} chi(n)`` with ``chi(n) = exp(2 pi i k ind(n) / (p-1))``.

    Terms are grouped by the exponent ``k*ind(n) mod (p-1)`` and counted
    exactly, so only one root of unity per class enters the float sum.
    """
    _check_character(p, k)
    if not 0 <= H <= p - 1:
        raise InvalidArgument(f"need 0 <= H <= p-1, got {H}")
    if table is None:
        table = discrete_log_table(p, find_primitive_root(p))
    counts: dict[int, int] = {}
    m = p - 1
    for n in range(1, H + 1):
        e = k * table[n] % m
        counts[e] = counts.get(e, 0) + 1
    terms = [c * _root_of_unity(e, m) for e, c in sorted(counts.items())]
    return complex(math.fsum(z.real for z in terms), math.fsum(z.imag for z in terms))


@dataclass(frozen=True)
class CharacterSumSeries:
    p: int
    k: int
    order: int
    H: tuple[int, ...]
    sums: tuple[complex, ...]


def character_sum_series(
    p: int, k: int, Hs: Sequence[int] | None = None, table: Sequence[int] | None = None
) -> CharacterSumSeries:
    """Partial sums for many H at once (all ``1..p-1`` by default)."""
    _check_character(p, k)
    if table is None:
        table = discrete_log_table(p, find_primitive_root(p))
    running = np.cumsum(_character_values(table, p, k, p - 1))
    Hs = tuple(range(1, p)) if Hs is None else tuple(Hs)
    if any(not 1 <= H <= p - 1 for H in Hs):
        raise InvalidArgument("every H must lie in [1, p-1]")
    sums = tuple(complex(running[H - 1]) for H in Hs)
    return CharacterSumSeries(p, k, (p - 1) // math.gcd(k, p - 1), Hs, sums)


def character_sum_matrix(p: int, table: Sequence[int] | None = None) -> np.ndarray:
    """Row k-1 holds the partial sums for H = 1..p-1 of the k-th character."""
    if table is None:
        table = discrete_log_table(p, find_primitive_root(p))
    ind = np.asarray(table[1:p], dtype=np.int64)
    ks = np.arange(1, p - 1, dtype=np.int64)[:, None]
    vals = np.exp(2j * np.pi * ((ks * ind[None, :]) % (p - 1)) / (p - 1))
    return np.cumsum(vals, axis=1)


def polya_vinogradov_bound(p: int) -> float:
    return math.sqrt(p) * math.log(p) + 1


def burgess_rhs(p: int, H: float, m: int, constant: float = 1.0) -> float:
    """``constant * H**(1-1/m) * p**((m+1)/(4m^2)) * (log p)**(1/m)``."""
    if m < 1:
        raise InvalidArgument("m must be >= 1")
    return constant * H ** (1 - 1 / m) * p ** ((m + 1) / (4 * m * m)) * math.log(p) ** (1 / m)


def theorem_parameters(p: int, r: int, constant: float = 1.0) -> dict:
    """Interval length H and Burgess exponent m used for r targets modulo p."""
    if r < 1:
        raise InvalidArgument("r must be >= 1")
    lp = math.log(p)
    l5r = math.log(5 * r)
    H = p**0.25 * math.exp((constant + 3) * math.sqrt(lp) * math.sqrt(l5r)) * lp
    m = math.floor(math.sqrt(lp) / math.sqrt(l5r))
    return {"H": H, "m": m}


@dataclass(frozen=True)
class NonresidueReport:
    p: int
    targets: tuple[int, ...]
    least_simultaneous: int
    least_primitive_root: int
    exponent_ratio: float
    bound_H: float
    bound_m: int
    J_exact: int | None = None
    J_main_term: float | None = None


def nonresidue_report(
    p: int,
    targets: Sequence[int] | None = None,
    constant: float = 1.0,
    H: int | None = None,
) -> NonresidueReport:
    ctx = ModulusContext.create(p, targets)
    n = least_simultaneous_nonresidue(p, ctx.targets)
    g = ctx.g
    params = theorem_parameters(p, ctx.r, constant)
    J = main = None
    if H is not None:
        J = count_simultaneous_nonresidues(p, ctx.targets, H)
        main = main_term(H, ctx.targets)
    return NonresidueReport(
        p, ctx.targets, n, g, math.log(n) / math.log(p), params["H"], params["m"], J, main
    )
