"""Exact modular arithmetic underneath everything else.

Deterministic primality and factorization for integers below 2**62,
primitive-root search, and discrete logarithms restricted to the
prime-order subgroups that decide q-th power residuosity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import InternalError, InvalidArgument

MAX_MODULUS = 1 << 62
TRIAL_DIVISION_LIMIT = 10**6
# Subgroup orders up to this are solved by a plain scan; larger ones by
# baby-step/giant-step against a table precomputed in the context.
LINEAR_SCAN_LIMIT = 64
BABY_STEP_CAP = 1 << 18

# Deterministic for every n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def mod_pow(base: int, exp: int, modulus: int) -> int:
    if modulus < 2:
        raise InvalidArgument(f"modulus must be >= 2, got {modulus}")
    if exp < 0:
        raise InvalidArgument("exponent must be nonnegative")
    return pow(base, exp, modulus)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def small_primes(limit: int) -> tuple[int, ...]:
    """All primes below ``limit`` by the sieve of Eratosthenes."""
    if limit < 3:
        return ()
    sieve = bytearray([1]) * limit
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(limit - 1) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytes(len(range(i * i, limit, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def primes_between(lo: int, hi: int) -> list[int]:
    if hi < 2 or hi < lo:
        return []
    return [p for p in small_primes(hi + 1) if p >= lo]


def _brent_rho(n: int) -> int:
    """A nontrivial factor of the odd composite ``n``; seeds are fixed."""
    for c in range(1, 200):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise InternalError(f"rho failed to split {n}")


def _split_large(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split_large(r, out)
        _split_large(r, out)
        return
    d = _brent_rho(n)
    _split_large(d, out)
    _split_large(n // d, out)


@dataclass(frozen=True)
class FactoredInteger:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise InvalidArgument(f"malformed factorization {self.factors}")
            last = p
            prod *= p**e
        if prod != self.value:
            raise InvalidArgument(f"factors do not multiply to {self.value}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def omega(self) -> int:
        return len(self.factors)

    @property
    def tau(self) -> int:
        return math.prod(e + 1 for _, e in self.factors)

    @classmethod
    def from_dict(cls, value: int, exps: Mapping[int, int]) -> "FactoredInteger":
        return cls(value, tuple(sorted(exps.items())))


def factorize(m: int) -> FactoredInteger:
    """Complete factorization of ``1 <= m < 2**62``.

    Trial division by primes below 10**6, then Miller-Rabin and Brent's
    rho on whatever cofactor is left.
    """
    if m < 1:
        raise InvalidArgument(f"cannot factor {m}")
    if m >= MAX_MODULUS:
        raise InvalidArgument(f"{m} exceeds the supported range 2**62")
    exps: dict[int, int] = {}
    rest = m
    for p in small_primes(TRIAL_DIVISION_LIMIT):
        if p * p > rest:
            break
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            exps[p] = e
    if rest > 1:
        _split_large(rest, exps)
    return FactoredInteger.from_dict(m, exps)


def is_primitive_root(g: int, p: int, pm1: FactoredInteger) -> bool:
    if g % p == 0:
        return False
    return all(pow(g, (p - 1) // q, p) != 1 for q in pm1.primes)


def find_primitive_root(p: int, pm1: FactoredInteger | None = None) -> int:
    """Smallest primitive root modulo the prime ``p`` (1 for p = 2)."""
    if not is_prime(p):
        raise InvalidArgument(f"{p} is not prime")
    if p == 2:
        return 1
    if pm1 is None:
        pm1 = factorize(p - 1)
    elif pm1.value != p - 1:
        raise InvalidArgument("pm1 must factor p - 1")
    for g in range(2, p):
        if is_primitive_root(g, p, pm1):
            return g
    raise InternalError(f"no primitive root found modulo {p}")


def discrete_log_table(p: int, g: int) -> list[int]:
    """``table[x]`` is the index of x to base g; ``table[0]`` is -1."""
    table = [-1] * p
    y = 1
    for k in range(p - 1):
        table[y] = k
        y = y * g % p
    return table


@dataclass(frozen=True)
class ResidueVector:
    """Indices of x reduced modulo each target prime."""

    components: tuple[int, ...]
    moduli: tuple[int, ...]

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __add__(self, other: "ResidueVector") -> "ResidueVector":
        return ResidueVector(
            tuple((a + b) % q for a, b, q in zip(self.components, other.components, self.moduli)),
            self.moduli,
        )

    def __sub__(self, other: "ResidueVector") -> "ResidueVector":
        return ResidueVector(
            tuple((a - b) % q for a, b, q in zip(self.components, other.components, self.moduli)),
            self.moduli,
        )

    def all_nonzero(self) -> bool:
        return all(self.components)

    @classmethod
    def zero(cls, moduli: Sequence[int]) -> "ResidueVector":
        return cls((0,) * len(moduli), tuple(moduli))


def _baby_table(h: int, q: int, p: int) -> Mapping[int, int]:
    m = min(math.isqrt(q - 1) + 1, BABY_STEP_CAP)
    table = {}
    y = 1
    for j in range(m):
        table.setdefault(y, j)
        y = y * h % p
    return table


@dataclass(frozen=True)
class ModulusContext:
    """A prime modulus with its primitive root and chosen target primes.

    Build with :meth:`create`; the constructor does no validation.
    """

    p: int
    pm1: FactoredInteger
    g: int
    targets: tuple[int, ...]
    cofactors: tuple[int, ...]
    subgen: tuple[int, ...]
    _baby: tuple[Mapping[int, int] | None, ...] = field(repr=False, compare=False, default=())

    @classmethod
    def create(
        cls,
        p: int,
        targets: Iterable[int] | None = None,
        *,
        g: int | None = None,
        pm1: FactoredInteger | None = None,
    ) -> "ModulusContext":
        if p < 2 or p >= MAX_MODULUS or not is_prime(p):
            raise InvalidArgument(f"{p} is not a supported prime")
        if pm1 is None:
            pm1 = factorize(p - 1)
        if p == 2:
            if targets:
                raise InvalidArgument("p = 2 admits no target primes")
            return cls(2, pm1, 1, (), (), (), ())
        if g is None:
            g = find_primitive_root(p, pm1)
        elif not is_primitive_root(g, p, pm1):
            raise InvalidArgument(f"{g} is not a primitive root modulo {p}")
        if targets is None:
            tset = pm1.primes
        else:
            tset = tuple(sorted(set(targets)))
            if len(tset) != len(tuple(targets)):
                raise InvalidArgument("targets must be distinct")
            for q in tset:
                if q not in pm1.primes:
                    raise InvalidArgument(f"{q} is not a prime divisor of {p - 1}")
        if not tset:
            raise InvalidArgument("at least one target prime is required")
        cofactors = tuple((p - 1) // q for q in tset)
        subgen = tuple(pow(g, c, p) for c in cofactors)
        baby = tuple(
            _baby_table(h, q, p) if q > LINEAR_SCAN_LIMIT else None
            for h, q in zip(subgen, tset)
        )
        return cls(p, pm1, g, tset, cofactors, subgen, baby)

    def with_targets(self, targets: Iterable[int] | None) -> "ModulusContext":
        return ModulusContext.create(self.p, targets, g=self.g, pm1=self.pm1)

    @property
    def r(self) -> int:
        return len(self.targets)


def _check_unit(x: int, ctx: ModulusContext) -> None:
    if x % ctx.p == 0:
        raise InvalidArgument(f"{x} is divisible by p = {ctx.p}")


def power_residue_test(x: int, ctx: ModulusContext, i: int) -> bool:
    """True iff x is a ``targets[i]``-th power residue (Euler's criterion)."""
    _check_unit(x, ctx)
    return pow(x, ctx.cofactors[i], ctx.p) == 1


def is_simultaneous_nonresidue(x: int, ctx: ModulusContext) -> bool:
    _check_unit(x, ctx)
    p = ctx.p
    return all(pow(x, c, p) != 1 for c in ctx.cofactors)


def index_mod_q(x: int, ctx: ModulusContext, i: int) -> int:
    """Index of x to base g, reduced modulo ``targets[i]``.

    Solves ``subgen[i]**k == x**cofactor[i] (mod p)`` for k in [0, q).
    """
    _check_unit(x, ctx)
    p = ctx.p
    q = ctx.targets[i]
    h = ctx.subgen[i]
    y = pow(x, ctx.cofactors[i], p)
    if y == 1:
        return 0
    baby = ctx._baby[i]
    if baby is None:
        z = 1
        for k in range(q):
            if z == y:
                return k
            z = z * h % p
    else:
        m = len(baby)
        giant = pow(h, q - m, p)  # h**(-m)
        for step in range(-(-q // m)):
            j = baby.get(y)
            if j is not None:
                return (step * m + j) % q
            y = y * giant % p
    raise InternalError(f"no subgroup log for {x} modulo {p}, q = {q}; corrupted context")


def residue_vector(x: int, ctx: ModulusContext) -> ResidueVector:
    return ResidueVector(
        tuple(index_mod_q(x, ctx, i) for i in range(ctx.r)), ctx.targets
    )
