"""Lehmer-code ranking of permutations.

Ranks are lexicographic over one-line notation: rank 0 is the identity,
rank n!-1 is the fully reversed permutation.
"""

from __future__ import annotations

from math import factorial


def perm_rank(perm: tuple[int, ...] | list[int]) -> int:
    """Lexicographic rank of a permutation of 0..n-1."""
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError("not a permutation of 0..n-1")
    rank = 0
    remaining = list(range(n))
    for i, p in enumerate(perm):
        idx = remaining.index(p)
        rank += idx * factorial(n - 1 - i)
        remaining.pop(idx)
    return rank


def perm_unrank(rank: int, n: int) -> tuple[int, ...]:
    """Inverse of perm_rank: the permutation of 0..n-1 with the given rank."""
    if not 0 <= rank < factorial(n):
        raise ValueError(f"rank {rank} outside 0..{n}!-1")
    remaining = list(range(n))
    out = []
    for i in range(n):
        f = factorial(n - 1 - i)
        idx, rank = divmod(rank, f)
        out.append(remaining.pop(idx))
    return tuple(out)
