"""Divisor enumeration, well-spaced divisor chains and neighbor statistics."""

from __future__ import annotations

import math
from bisect import bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Sequence

import numpy as np

from .errors import InvalidArgument
from .modarith import FactoredInteger, factorize

# Relative width of the band in which a floating comparison d > rho*D is
# treated as a tie.
TIE_BAND = 1e-12

Ratio = int | Fraction | float


def enumerate_divisors(n: FactoredInteger | int) -> list[int]:
    if isinstance(n, int):
        if n < 1:
            raise InvalidArgument(f"no divisors for {n}")
        n = factorize(n)
    divs = [1]
    for p, e in n.factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    divs.sort()
    return divs


def spf_sieve(x: int) -> np.ndarray:
    """``spf[n]`` is the smallest prime factor of n for 2 <= n <= x."""
    spf = np.zeros(x + 1, dtype=np.int64)
    for i in range(2, math.isqrt(x) + 1):
        if spf[i] == 0:
            block = spf[i * i :: i]
            block[block == 0] = i
    rest = np.nonzero(spf == 0)[0]
    spf[rest] = rest
    return spf


def factor_with_spf(n: int, spf: np.ndarray) -> FactoredInteger:
    exps: dict[int, int] = {}
    m = n
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        exps[p] = e
    return FactoredInteger.from_dict(n, exps)


def _exceeds(d: int, base: int, rho: Ratio) -> bool:
    """``d > rho * base``; float ties within the band count as not exceeding."""
    if isinstance(rho, (int, Fraction)):
        return d > rho * base
    return d > rho * base * (1 + TIE_BAND)


@dataclass(frozen=True)
class WellSpacedSubset:
    divisors: tuple[int, ...]
    ratio: Ratio

    def __len__(self):
        return len(self.divisors)

    def blocks(self, divs: Sequence[int]) -> list[list[int]]:
        """Split ``divs`` into runs ``D_i <= d < D_{i+1}``."""
        out = []
        starts = list(self.divisors) + [math.inf]
        for lo, hi in zip(starts, starts[1:]):
            out.append([d for d in divs if lo <= d < hi])
        return out


def _check_ratio(rho: Ratio) -> None:
    if not isinstance(rho, Real) or not rho > 1:
        raise InvalidArgument(f"spacing ratio must exceed 1, got {rho}")


def well_spaced_subset(divs: Sequence[int], rho: Ratio) -> WellSpacedSubset:
    """Greedy chain ``D_1 = 1``, ``D_i`` = least divisor exceeding ``rho * D_{i-1}``."""
    _check_ratio(rho)
    if not divs or divs[0] != 1:
        raise InvalidArgument("divisor list must start at 1")
    chain = [1]
    for d in divs:
        if _exceeds(d, chain[-1], rho):
            chain.append(d)
    return WellSpacedSubset(tuple(chain), rho)


def neighbor_pair_count(
    divs: Sequence[int], sigma: float | None = None, *, ratio: Ratio | None = None
) -> int:
    """Ordered pairs of distinct divisors with ``|log(d'/d'')| <= sigma``.

    Give ``ratio`` (= e**sigma) instead of ``sigma`` for an exact test
    ``d'' <= ratio * d'`` when the ratio is an integer or Fraction.
    """
    if (sigma is None) == (ratio is None):
        raise InvalidArgument("give exactly one of sigma and ratio")
    if ratio is None:
        if not sigma > 0:
            raise InvalidArgument("sigma must be positive")
        ratio = math.exp(sigma)
    count = 0
    divs = sorted(divs)
    n = len(divs)
    if isinstance(ratio, (int, Fraction)):
        for i, d in enumerate(divs):
            j = i + 1
            while j < n and divs[j] <= ratio * d:
                j += 1
            count += j - i - 1
    else:
        for i, d in enumerate(divs):
            j = bisect_right(divs, ratio * d * (1 + TIE_BAND), lo=i + 1)
            count += j - i - 1
    return 2 * count


def block_collision_count(divs: Sequence[int], rho: Ratio) -> int:
    """Sum of ``|B|(|B|-1)`` over the blocks cut out by the greedy chain."""
    blocks = well_spaced_subset(divs, rho).blocks(divs)
    return sum(len(b) * (len(b) - 1) for b in blocks)


def longest_clustered_run(divs: Sequence[int], rho: Ratio) -> int:
    """Longest run of consecutive divisors whose adjacent ratios are all ``< rho``.

    A chain of divisors with small consecutive ratios can always be
    refined by the divisors lying between its members, so the longest
    such chain is a run of adjacent divisors. Float ties count as not
    clustered.
    """
    best = run = 1 if divs else 0
    for a, b in zip(divs, divs[1:]):
        if isinstance(rho, (int, Fraction)):
            close = b < rho * a
        else:
            close = b < rho * a * (1 - TIE_BAND)
        run = run + 1 if close else 1
        best = max(best, run)
    return best


def _check_range(x: int, t: int, c: float) -> None:
    if x < 2:
        raise InvalidArgument("x must be at least 2")
    if t < 2:
        raise InvalidArgument("t must be at least 2")
    if c <= 0 or t > math.log(x) ** (1 / c):
        raise InvalidArgument(f"t = {t} outside 2 <= t <= (log x)^(1/c) for x = {x}, c = {c}")


def spacing_threshold(x: int, t: int, c: float) -> float:
    """``x ** (1 / t**c)``."""
    return math.exp(math.log(x) / t**c)


def _count_spaced(args) -> int:
    lo, hi, t, rho, spf = args
    good = 0
    for n in range(lo, hi):
        divs = enumerate_divisors(factor_with_spf(n, spf))
        chain = 1
        last = 1
        for d in divs:
            if _exceeds(d, last, rho):
                last = d
                chain += 1
                if chain >= t:
                    good += 1
                    break
    return good


def _count_clustered(args) -> int:
    lo, hi, t, c, spf = args
    hits = 0
    for n in range(lo, hi):
        divs = enumerate_divisors(factor_with_spf(n, spf))
        if len(divs) < t:
            continue
        if longest_clustered_run(divs, spacing_threshold(n, t, c)) >= t:
            hits += 1
    return hits


def _chunks(x: int, workers: int) -> list[tuple[int, int]]:
    pieces = max(1, workers) * 4
    step = -(-x // pieces)
    return [(lo, min(lo + step, x + 1)) for lo in range(1, x + 1, step)]


def _run(fn, x: int, extra: tuple, workers: int) -> int:
    spf = spf_sieve(x)
    jobs = [(lo, hi, *extra, spf) for lo, hi in _chunks(x, workers)]
    if workers <= 1:
        return sum(map(fn, jobs))
    with ProcessPoolExecutor(workers) as pool:
        return sum(pool.map(fn, jobs))


def count_well_spaced(x: int, t: int, rho: Ratio, workers: int = 1) -> int:
    """How many n <= x have a greedy chain of at least t divisors spaced by rho."""
    _check_ratio(rho)
    return _run(_count_spaced, x, (t, rho), workers)


def spacing_density_experiment(x: int, t: int, c: float, workers: int = 1) -> dict:
    """Fraction of n <= x having t divisors with consecutive ratios above ``x**(1/t**c)``."""
    _check_range(x, t, c)
    rho = spacing_threshold(x, t, c)
    good = count_well_spaced(x, t, rho, workers)
    return {"count_good": good, "count_total": x, "fraction": good / x, "rho": rho}


def sharpness_probe(x: int, t: int, c: float, workers: int = 1) -> dict:
    """Count n <= x having t divisors with every consecutive ratio below ``n**(1/t**c)``."""
    if not c < 1 / math.log(2):
        raise InvalidArgument(f"probe needs c < 1/log 2, got {c}")
    _check_range(x, t, c)
    hits = _run(_count_clustered, x, (t, c), workers)
    return {"count_clustered": hits, "count_total": x}
