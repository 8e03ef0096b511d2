"""Subsequences whose pairwise differences avoid a forbidden value.

Three layers, each built on the previous one:

* exact integers avoiding a single difference ``a``;
* integers avoiding a difference ``a`` modulo a prime ``q``;
* vectors over F_{p_1} x ... x F_{p_r}: find ``i < j`` whose difference
  misses ``b`` in every coordinate.

Indices are 0-based throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

from .errors import InternalError, InvalidArgument, PreconditionViolation
from .modarith import ResidueVector, is_prime


@dataclass(frozen=True)
class SelectionResult:
    indices: tuple[int, ...]
    avoided: int
    modulus: int | None = None

    def __len__(self):
        return len(self.indices)

    def is_valid(self, values: Sequence[int]) -> bool:
        """Re-check the certificate against ``values``."""
        if any(not 0 <= i < len(values) for i in self.indices):
            return False
        if list(self.indices) != sorted(set(self.indices)):
            return False
        chosen = [values[i] for i in self.indices]
        for x in chosen:
            for y in chosen:
                d = x - y
                if self.modulus is None:
                    if d == self.avoided:
                        return False
                elif (d - self.avoided) % self.modulus == 0:
                    return False
        return True


@dataclass(frozen=True)
class ForbiddenVector:
    components: tuple[int, ...]
    moduli: tuple[int, ...]

    def __post_init__(self):
        if len(self.components) != len(self.moduli):
            raise InvalidArgument("components and moduli differ in length")
        for b, q in zip(self.components, self.moduli):
            if not 1 <= b < q:
                raise InvalidArgument(f"forbidden component {b} is not a nonzero residue mod {q}")

    @classmethod
    def from_residue_vector(cls, v: ResidueVector) -> "ForbiddenVector":
        return cls(tuple(v.components), tuple(v.moduli))


def select_avoiding_difference(values: Sequence[int], a: int) -> SelectionResult:
    """Keep at least half (rounded up) of ``values`` with no difference equal to ``a``.

    Indices are grouped by ``values[i] - values[j]`` being a multiple of
    ``a``. Inside a group each member sits an integer number k of steps
    of size ``a`` away from the group's first index; only the members
    whose k has the majority parity are kept (even wins ties). Two kept
    members then differ by an even multiple of ``a``, never by ``a``.
    """
    if a == 0:
        raise InvalidArgument("forbidden difference must be nonzero")
    if not values:
        raise InvalidArgument("values must be nonempty")
    if not all(isinstance(v, int) for v in (a, *values)):
        raise InvalidArgument("values and difference must be integers")
    step = abs(a)
    anchors: dict[int, int] = {}
    halves: dict[int, tuple[list[int], list[int]]] = {}
    for i, v in enumerate(values):
        cls = v % step
        if cls not in anchors:
            anchors[cls] = v
            halves[cls] = ([], [])
        k = (v - anchors[cls]) // step
        halves[cls][k & 1].append(i)
    keep: list[int] = []
    for even, odd in halves.values():
        keep.extend(even if len(even) >= len(odd) else odd)
    return SelectionResult(tuple(sorted(keep)), a)


def min_length_mod(q: int, u: Fraction | int | float) -> int:
    """Shortest sequence length meeting the modular selection hypothesis."""
    u = Fraction(u)
    if q == 2:
        return math.ceil(2 * u)
    return math.ceil(2 * u * q / (q - 1))


def select_avoiding_difference_mod(
    values: Sequence[int], q: int, a: int, u: Fraction | int | float
) -> SelectionResult:
    """At least ``ceil(u)`` indices with no pairwise difference congruent to ``a`` mod ``q``.

    Needs ``len(values) >= ceil(2uq/(q-1))``, or ``ceil(2u)`` when q = 2.
    """
    if not is_prime(q):
        raise InvalidArgument(f"modulus {q} is not prime")
    if a % q == 0:
        raise InvalidArgument(f"forbidden difference {a} is 0 mod {q}")
    u = Fraction(u)
    if u <= 1:
        raise InvalidArgument("u must exceed 1")
    need = min_length_mod(q, u)
    if len(values) < need:
        raise PreconditionViolation(
            f"need at least {need} values for q={q}, u={u}; got {len(values)}"
        )
    if q == 2:
        even = [i for i, v in enumerate(values) if v % 2 == 0]
        odd = [i for i, v in enumerate(values) if v % 2 == 1]
        return SelectionResult(tuple(even if len(even) >= len(odd) else odd), a, 2)

    inv = pow(a, -1, q)
    scaled = [v * inv % q for v in values]
    counts = [0] * q
    for v in scaled:
        counts[v] += 1
    h = counts.index(min(counts))
    survivors = [i for i, v in enumerate(scaled) if v != h]
    shifted = [(scaled[i] - h) % q for i in survivors]
    inner = select_avoiding_difference(shifted, 1)
    return SelectionResult(tuple(survivors[k] for k in inner.indices), a, q)


def _stage_requirement(q: int, keep: int) -> int:
    """Input length that guarantees ``keep`` survivors from one modular stage.

    The modular selection yields ``ceil(u)`` survivors for any real
    ``u > keep - 1``, so the bound ``t >= 2uq/(q-1)`` becomes the strict
    ``t > 2(keep-1)q/(q-1)``.
    """
    if q == 2:
        return 2 * keep - 1
    return (2 * (keep - 1) * q) // (q - 1) + 1


def schedule(targets: Sequence[int]) -> list[int]:
    """Coordinate order used by the chained construction: largest prime first."""
    return sorted(targets, reverse=True)


def required_length(targets: Sequence[int]) -> int:
    """Sequence length at which the chained construction always finds a pair.

    Every coordinate but the last is filtered by the modular selection;
    the last one only needs three survivors, since among x_i, x_j, x_k
    the three ordered differences cannot all equal a nonzero b.
    """
    if len(set(targets)) != len(targets):
        raise InvalidArgument("targets must be distinct")
    if not targets:
        return 2
    order = schedule(targets)
    need = min(3, _stage_requirement(order[-1], 2))
    for q in reversed(order[:-1]):
        need = _stage_requirement(q, need)
    return need


def _pair_ok(vj: Sequence[int], vi: Sequence[int], b: ForbiddenVector) -> bool:
    return all((x - y - c) % q for x, y, c, q in zip(vj, vi, b.components, b.moduli))


def valid_pairs(
    vectors: Sequence[ResidueVector | Sequence[int]], b: ForbiddenVector
) -> Iterator[tuple[int, int]]:
    """All ``(i, j)``, ``i < j``, in lexicographic order, whose difference avoids ``b``."""
    for i, j in combinations(range(len(vectors)), 2):
        if _pair_ok(vectors[j], vectors[i], b):
            yield i, j


def _largest_u(q: int, t: int) -> Fraction:
    return Fraction(t, 2) if q == 2 else Fraction(t * (q - 1), 2 * q)


def _constructive_pair(vectors, b: ForbiddenVector) -> tuple[int, int]:
    alive = list(range(len(vectors)))
    coord = {q: k for k, q in enumerate(b.moduli)}
    order = schedule(b.moduli)
    for q in order[:-1]:
        k = coord[q]
        col = [vectors[i][k] for i in alive]
        res = select_avoiding_difference_mod(col, q, b.components[k], _largest_u(q, len(col)))
        alive = [alive[s] for s in res.indices]
    q = order[-1]
    k = coord[q]
    col = [vectors[i][k] for i in alive]
    u = _largest_u(q, len(col))
    if u > 1:
        res = select_avoiding_difference_mod(col, q, b.components[k], u)
        return alive[res.indices[0]], alive[res.indices[1]]
    # q = 3 with three survivors: their ordered differences cannot all be b.
    for s, t in ((0, 1), (1, 2), (0, 2)):
        if (col[t] - col[s] - b.components[k]) % q:
            return alive[s], alive[t]
    raise InternalError("constructive pair search exhausted its survivors")


def select_pair_avoiding_forbidden(
    vectors: Sequence[ResidueVector | Sequence[int]],
    b: ForbiddenVector,
    method: str = "exhaustive",
) -> tuple[int, int]:
    """Indices ``i < j`` with ``vectors[j] - vectors[i]`` avoiding ``b`` coordinatewise.

    ``method="exhaustive"`` returns the lexicographically first valid
    pair; ``"constructive"`` follows the chained modular selection.
    """
    need = required_length(b.moduli)
    if len(vectors) < need:
        raise PreconditionViolation(f"need {need} vectors, got {len(vectors)}")
    if method == "exhaustive":
        for pair in valid_pairs(vectors, b):
            return pair
        raise InternalError("no admissible pair despite sufficient length")
    if method == "constructive":
        i, j = _constructive_pair(vectors, b)
        if not _pair_ok(vectors[j], vectors[i], b):
            raise InternalError(f"constructive pair ({i}, {j}) does not avoid {b}")
        return i, j
    raise InvalidArgument(f"unknown method {method!r}")
