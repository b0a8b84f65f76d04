"""Compositions, partitions, rearrangements and the subset/composition bijection.

Compositions are tuples of positive integers; partitions are stored as
weakly increasing tuples.  Generator subsets of S_n are frozensets of
integers in 1..n-1.
"""

from __future__ import annotations

from itertools import combinations

Composition = tuple
Partition = tuple


def compositions_of(n: int) -> list[Composition]:
    """All compositions of n in lexicographic order.

    >>> compositions_of(3)
    [(1, 1, 1), (1, 2), (2, 1), (3,)]
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return [()]
    out = []
    for first in range(1, n + 1):
        for rest in compositions_of(n - first):
            out.append((first,) + rest)
    return out


def partitions_of(n: int, smallest: int = 1) -> list[Partition]:
    """All partitions of n as weakly increasing tuples, lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return [()]
    out = []
    for k in range(smallest, n + 1):
        for rest in partitions_of(n - k, k):
            out.append((k,) + rest)
    return out


def partition_of(c) -> Partition:
    """Canonical (weakly increasing) representative of the class of c."""
    return tuple(sorted(c))


def rearrangements(c) -> list[Composition]:
    """Distinct permutations of the parts of c, in lexicographic order."""
    items = sorted(c)
    out = []
    n = len(items)
    if n == 0:
        return [()]

    # standard next-permutation walk over the sorted multiset
    cur = list(items)
    while True:
        out.append(tuple(cur))
        i = n - 2
        while i >= 0 and cur[i] >= cur[i + 1]:
            i -= 1
        if i < 0:
            return out
        j = n - 1
        while cur[j] <= cur[i]:
            j -= 1
        cur[i], cur[j] = cur[j], cur[i]
        cur[i + 1:] = reversed(cur[i + 1:])


def subsets_of(n: int) -> list[frozenset]:
    """All subsets of the Coxeter generators {1, ..., n-1}, by size then lex."""
    gens = range(1, n)
    return [frozenset(c) for k in range(n) for c in combinations(gens, k)]


def phi(J, n: int) -> Composition:
    """Gap composition of the complement of J in {1, ..., n-1}.

    >>> phi({1, 2, 3, 4, 5, 6, 7, 9, 10}, 11)
    (8, 3)
    """
    if n == 0:
        return ()
    J = set(J)
    if not J <= set(range(1, n)):
        raise ValueError(f"{sorted(J)} is not a subset of 1..{n - 1}")
    cuts = [0] + [t for t in range(1, n) if t not in J] + [n]
    return tuple(cuts[i] - cuts[i - 1] for i in range(1, len(cuts)))


def phi_inverse(c) -> frozenset:
    """The generator subset J with phi(J, sum(c)) == c."""
    if any(x < 1 for x in c):
        raise ValueError(f"not a composition: {c}")
    n = sum(c)
    cuts = set()
    t = 0
    for x in c[:-1]:
        t += x
        cuts.add(t)
    return frozenset(s for s in range(1, n) if s not in cuts)


def coarsens(coarse, fine) -> bool:
    """True when fine refines coarse, i.e. coarse is obtained by merging
    consecutive runs of parts of fine."""
    if sum(coarse) != sum(fine):
        return False
    i = 0
    for x in coarse:
        acc = 0
        while acc < x and i < len(fine):
            acc += fine[i]
            i += 1
        if acc != x:
            return False
    return i == len(fine)


def parse_composition(text: str) -> Composition:
    """Parse "3,5" or the digit shorthand "35" (parts at most 9).

    The empty string and "e" denote the empty composition.
    """
    text = text.strip()
    if text in ("", "e", "ε"):
        return ()
    if "," in text:
        parts = tuple(int(x) for x in text.split(","))
    else:
        parts = tuple(int(ch) for ch in text)
    if any(x < 1 for x in parts):
        raise ValueError(f"parts must be positive: {text!r}")
    return parts


def format_composition(c) -> str:
    return ",".join(str(x) for x in c)
