"""Shrinking a simultaneous nonresidue by a ratio of two of its divisors.

If n is a q-th power nonresidue for every target q and has enough
divisors, some pair d_i < d_j makes ``n * d_i / d_j`` a smaller
simultaneous nonresidue. The pair is found by the vector selection in
:mod:`nonresidue.selection` applied to the residue vectors of the
divisors with the vector of n as the forbidden difference.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalError, InvalidArgument, PreconditionViolation, TooFewDivisors
from .modarith import (
    FactoredInteger,
    ModulusContext,
    ResidueVector,
    factorize,
    power_residue_test,
    residue_vector,
)
from .selection import ForbiddenVector, required_length, valid_pairs


@dataclass(frozen=True)
class ReductionStep:
    n: int
    d_i: int
    d_j: int
    n_prime: int
    verified: tuple[bool, ...]

    @property
    def ratio(self) -> float:
        return self.d_j / self.d_i


def divisor_vectors(
    n: FactoredInteger, ctx: ModulusContext
) -> tuple[list[int], list[ResidueVector]]:
    """Ascending divisors of n with their residue vectors.

    Only the prime factors need a discrete log; a divisor's vector is
    the exponent-weighted sum of theirs.
    """
    moduli = ctx.targets
    prime_vecs = {p: residue_vector(p, ctx).components for p, _ in n.factors}
    pairs = [(1, (0,) * len(moduli))]
    for p, e in n.factors:
        v = prime_vecs[p]
        grown = []
        for d, dv in pairs:
            pk = 1
            for k in range(e + 1):
                grown.append((d * pk, tuple((a + k * b) % q for a, b, q in zip(dv, v, moduli))))
                pk *= p
        pairs = grown
    pairs.sort()
    return [d for d, _ in pairs], [ResidueVector(v, moduli) for _, v in pairs]


def _check_nonresidue(n: int, ctx: ModulusContext) -> None:
    if n < 1:
        raise InvalidArgument(f"n must be positive, got {n}")
    if n % ctx.p == 0:
        raise InvalidArgument(f"{n} is divisible by p = {ctx.p}")
    for i, q in enumerate(ctx.targets):
        if power_residue_test(n, ctx, i):
            raise PreconditionViolation(f"{n} is a {q}-th power residue modulo {ctx.p}")


def reduce_nonresidue(n: int | FactoredInteger, ctx: ModulusContext) -> ReductionStep:
    """One reduction step; picks the admissible pair with the largest ratio d_j/d_i.

    Ties on the ratio go to the smallest i, then the smallest j.
    """
    fn = n if isinstance(n, FactoredInteger) else factorize(n)
    n = fn.value
    _check_nonresidue(n, ctx)
    need = required_length(ctx.targets)
    if fn.tau < need:
        raise TooFewDivisors(n, fn.tau, need)
    divs, vecs = divisor_vectors(fn, ctx)
    b = ForbiddenVector.from_residue_vector(residue_vector(n, ctx))
    best = None
    for i, j in valid_pairs(vecs, b):
        # Compare d_j/d_i exactly; strict so the first maximal pair wins.
        if best is None or divs[j] * divs[best[0]] > divs[best[1]] * divs[i]:
            best = (i, j)
    if best is None:
        raise InternalError(f"no admissible divisor pair for n = {n} modulo {ctx.p}")
    d_i, d_j = divs[best[0]], divs[best[1]]
    n_prime = n // d_j * d_i
    verified = tuple(not power_residue_test(n_prime, ctx, k) for k in range(ctx.r))
    if not all(verified) or n_prime >= n:
        raise InternalError(f"reduction of {n} to {n_prime} failed verification")
    return ReductionStep(n, d_i, d_j, n_prime, verified)


def reduction_chain(n: int, ctx: ModulusContext) -> list[ReductionStep]:
    """Reduce repeatedly until the current value has too few divisors."""
    steps = []
    current = factorize(n)
    while True:
        try:
            step = reduce_nonresidue(current, ctx)
        except TooFewDivisors:
            return steps
        steps.append(step)
        current = factorize(step.n_prime)


def least_reducible(ctx: ModulusContext, cap: int, taus: list[int] | None = None) -> int | None:
    """Least simultaneous nonresidue n <= cap with enough divisors, if any.

    ``taus`` may hold precomputed divisor counts indexed by n.
    """
    need = required_length(ctx.targets)
    p = ctx.p
    for n in range(2, cap + 1):
        if n % p == 0:
            continue
        tau = taus[n] if taus is not None else factorize(n).tau
        if tau < need:
            continue
        if all(pow(n, c, p) != 1 for c in ctx.cofactors):
            return n
    return None


def divisor_counts(x: int) -> list[int]:
    """tau(n) for 0 <= n <= x by a divisor sieve."""
    taus = [0] * (x + 1)
    for d in range(1, x + 1):
        for m in range(d, x + 1, d):
            taus[m] += 1
    return taus
