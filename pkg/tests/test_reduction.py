import itertools
import random

import pytest

from nonresidue.divisors import enumerate_divisors
from nonresidue.errors import InvalidArgument, PreconditionViolation, TooFewDivisors
from nonresidue.modarith import ModulusContext, factorize, primes_between, residue_vector
from nonresidue.reduction import (
    divisor_counts,
    divisor_vectors,
    least_reducible,
    reduce_nonresidue,
    reduction_chain,
)
from nonresidue.selection import ForbiddenVector, select_pair_avoiding_forbidden


def is_sim_nonres(n, p, targets):
    return all(pow(n, (p - 1) // q, p) != 1 for q in targets)


def test_divisor_vectors_match_direct():
    ctx = ModulusContext.create(211)
    for n in (1, 12, 360, 2 * 3 * 5 * 7 * 11, 1024):
        divs, vecs = divisor_vectors(factorize(n), ctx)
        assert divs == enumerate_divisors(n)
        assert vecs == [residue_vector(d, ctx) for d in divs]


def test_example_n12_p7():
    ctx = ModulusContext.create(7, [2])
    divs, vecs = divisor_vectors(factorize(12), ctx)
    assert divs == [1, 2, 3, 4, 6, 12]
    assert [v[0] for v in vecs] == [0, 0, 1, 0, 1, 1]
    b = residue_vector(12, ctx)
    assert b.components == (1,)
    # First admissible pair is (1, 2), giving 12 * 1 / 2 = 6.
    i, j = select_pair_avoiding_forbidden(vecs, ForbiddenVector.from_residue_vector(b))
    assert (divs[i], divs[j]) == (1, 2)
    assert is_sim_nonres(6, 7, [2])
    # The reduction itself maximizes d_j / d_i: (1, 4) beats (3, 12) on the tie.
    step = reduce_nonresidue(12, ctx)
    assert (step.d_i, step.d_j, step.n_prime) == (1, 4, 3)
    assert step.verified == (True,)


def test_too_few_divisors():
    ctx = ModulusContext.create(7)
    with pytest.raises(TooFewDivisors) as exc:
        reduce_nonresidue(3, ctx)
    assert exc.value.tau == 2 and exc.value.threshold == 7
    assert reduction_chain(3, ctx) == []


def test_rejects_residue_and_multiple_of_p():
    ctx = ModulusContext.create(7, [2])
    with pytest.raises(PreconditionViolation):
        reduce_nonresidue(4, ctx)
    with pytest.raises(InvalidArgument):
        reduce_nonresidue(14, ctx)


def test_chain_from_12():
    ctx = ModulusContext.create(7, [2])
    chain = reduction_chain(12, ctx)
    assert [s.n for s in chain] == [12]
    assert chain[-1].n_prime == 3


def test_chain_properties_random():
    rng = random.Random(2024)
    primes = primes_between(50, 3000)
    for _ in range(300):
        p = rng.choice(primes)
        base = ModulusContext.create(p)
        r = rng.randint(1, min(3, base.r))
        ctx = base.with_targets(rng.sample(base.targets, r))
        n = rng.randrange(2, 50000)
        if n % p == 0 or not is_sim_nonres(n, p, ctx.targets):
            continue
        chain = reduction_chain(n, ctx)
        values = [n] + [s.n_prime for s in chain]
        assert values == sorted(values, reverse=True) and len(set(values)) == len(values)
        for s in chain:
            assert s.n % s.d_i == 0 and s.n % s.d_j == 0 and s.d_i < s.d_j
            assert is_sim_nonres(s.n_prime, p, ctx.targets)


def test_arithmetic_identity():
    for p in primes_between(3, 400):
        base = ModulusContext.create(p)
        for r in range(1, min(3, base.r) + 1):
            for ts in itertools.combinations(base.targets, r):
                ctx = base.with_targets(ts)
                n = least_reducible(ctx, 5000)
                if n is None:
                    continue
                step = reduce_nonresidue(n, ctx)
                b = residue_vector(n, ctx)
                lhs = residue_vector(step.n_prime, ctx)
                rhs = b + residue_vector(step.d_i, ctx) - residue_vector(step.d_j, ctx)
                assert lhs == rhs and lhs.all_nonzero()


def test_least_reducible_uses_taus():
    taus = divisor_counts(2000)
    assert taus[12] == 6 and taus[1] == 1
    ctx = ModulusContext.create(7, [2])
    assert least_reducible(ctx, 100) == least_reducible(ctx, 100, taus) == 6
    assert least_reducible(ctx, 0) is None
