"""Permutations of {0, ..., n-1} stored as tuples of images."""

from __future__ import annotations

import math
from typing import Iterable

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def is_permutation(values: Iterable[int], n: int | None = None) -> bool:
    """True when ``values`` is a bijection of {0, ..., len(values)-1}."""
    seq = list(values)
    if n is not None and len(seq) != n:
        return False
    m = len(seq)
    seen = [False] * m
    for v in seq:
        if not isinstance(v, int) or not 0 <= v < m or seen[v]:
            return False
        seen[v] = True
    return True


def compose(p: Perm, q: Perm) -> Perm:
    """p after q: x -> p[q[x]]."""
    return tuple(p[q[x]] for x in range(len(q)))


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[y] = x
    return tuple(out)


def power(p: Perm, k: int) -> Perm:
    """k-th compositional power; k may be negative."""
    if k < 0:
        p, k = inverse(p), -k
    result = identity(len(p))
    while k:
        if k & 1:
            result = compose(p, result)
        p = compose(p, p)
        k >>= 1
    return result


def cycles(p: Perm) -> list[tuple[int, ...]]:
    """Cycle decomposition; each cycle starts at its smallest element."""
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        x = p[start]
        while x != start:
            seen[x] = True
            cyc.append(x)
            x = p[x]
        out.append(tuple(cyc))
    return out


def period(p: Perm) -> int:
    """Least L >= 1 with p^L = identity (lcm of the cycle lengths)."""
    return math.lcm(*(len(c) for c in cycles(p)))


def commute(p: Perm, q: Perm) -> bool:
    return compose(p, q) == compose(q, p)
