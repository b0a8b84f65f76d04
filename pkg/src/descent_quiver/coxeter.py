"""Independent checks through the Coxeter side of the picture.

Two oracles live here.  The first is the category of alleys (J; s_1, ..., s_l)
for the symmetric group with its action of the generators and its
difference operator, together with the length-preserving map ``phi_alley``
onto labeled forests.  The second computes the descent algebra directly in
the rational group algebra of S_n.

Permutations act on the right: ``i.w = w[i-1]`` in one-line notation, and
``i.(uv) = (i.u).v``.
"""

from __future__ import annotations

import random
from math import factorial
from itertools import permutations
from typing import NamedTuple

import numpy as np

from .forest import Delta, FormalSum, delta, orbit
from .numbers import phi, subsets_of


# ---------------------------------------------------------------------------
# permutations

def identity(n: int) -> tuple:
    return tuple(range(1, n + 1))


def compose(u, v) -> tuple:
    """uv with i.(uv) = (i.u).v."""
    return tuple(v[x - 1] for x in u)


def inverse(w) -> tuple:
    out = [0] * len(w)
    for i, x in enumerate(w, 1):
        out[x - 1] = i
    return tuple(out)


def descents(w) -> frozenset:
    return frozenset(i for i in range(1, len(w)) if w[i - 1] > w[i])


def longest_element(J, n: int) -> tuple:
    """w_J: reverses every maximal block of points joined by generators in J."""
    J = set(J)
    out = []
    start = 1
    for i in range(1, n + 1):
        if i == n or i not in J:
            out.extend(range(i, start - 1, -1))
            start = i + 1
    return tuple(out)


def conjugate_generator(s: int, w) -> int:
    """s^w = w^-1 s w, which must again be a simple transposition."""
    a, b = sorted((w[s - 1], w[s]))
    if b != a + 1:
        raise ValueError(f"{s}^{w} is not a simple transposition")
    return a


# ---------------------------------------------------------------------------
# alleys

class Alley(NamedTuple):
    n: int
    J: frozenset
    walk: tuple = ()

    @property
    def length(self) -> int:
        return len(self.walk)

    def chain(self) -> list:
        """J, J - {s_1}, J - {s_1, s_2}, ..."""
        out = [self.J]
        cur = set(self.J)
        for s in self.walk:
            cur.discard(s)
            out.append(frozenset(cur))
        return out

    def end(self) -> frozenset:
        return self.J - set(self.walk)


class InvalidAlley(ValueError):
    pass


def make_alley(n: int, J, walk=()) -> Alley:
    J = frozenset(J)
    walk = tuple(walk)
    if not J <= set(range(1, n)):
        raise InvalidAlley(f"{sorted(J)} is not a set of generators of S_{n}")
    if len(set(walk)) != len(walk) or not set(walk) <= J:
        raise InvalidAlley(f"walk {walk} is not a list of distinct elements of {sorted(J)}")
    return Alley(n, J, walk)


def alleys_of(n: int) -> list:
    out = []
    for J in subsets_of(n):
        for k in range(len(J) + 1):
            for walk in permutations(sorted(J), k):
                out.append(Alley(n, J, walk))
    return out


def alley_product(a1: Alley, a2: Alley):
    """a1 o a2, or None when a2 does not start where a1 ends."""
    if a1.n != a2.n or a2.J != a1.end():
        return None
    return Alley(a1.n, a1.J, a1.walk + a2.walk)


def s_action(a: Alley, t: int) -> Alley:
    omega = compose(longest_element(a.J, a.n), longest_element(a.J | {t}, a.n))
    J = frozenset(conjugate_generator(s, omega) for s in a.J)
    return Alley(a.n, J, tuple(conjugate_generator(s, omega) for s in a.walk))


def act_word(a: Alley, word) -> Alley:
    for t in word:
        a = s_action(a, t)
    return a


def alley_orbit(a: Alley) -> set:
    seen = {a}
    todo = [a]
    while todo:
        b = todo.pop()
        for t in range(1, a.n):
            c = s_action(b, t)
            if c not in seen:
                seen.add(c)
                todo.append(c)
    return seen


def delta_alley(a: Alley) -> FormalSum:
    """delta(a) = b - b.s_1 with b = (J - {s_1}; s_2, ..., s_l)."""
    if not a.walk:
        return FormalSum({a: 1})
    s1 = a.walk[0]
    b = Alley(a.n, a.J - {s1}, a.walk[1:])
    out = FormalSum({b: 1})
    out.add_term(s_action(b, s1), -1)
    return out


def Delta_alley(x) -> FormalSum:
    """Iterate delta until only length-0 alleys remain."""
    if isinstance(x, Alley):
        x = FormalSum({x: 1})
    out = FormalSum()
    work = FormalSum(x)
    while work:
        nxt = FormalSum()
        for a, c in work.items():
            if a.walk:
                nxt.add(delta_alley(a), c)
            else:
                out.add_term(a, c)
        work = nxt
    return out


def phi_alley(a: Alley):
    """The labeled forest corresponding to an alley.

    The chain of subsets is read from its smallest end: the parts of
    phi(J - {s_1..s_l}) are the leaves, and adding s_i back merges the two
    adjacent trees meeting at point s_i under a node labeled i.
    """
    if not (set(a.walk) <= a.J and len(set(a.walk)) == len(a.walk)):
        raise InvalidAlley(f"{a} is not an alley")
    # each tree is stored with the last point it covers
    trees = []
    pos = 0
    for part in phi(a.end(), a.n):
        pos += part
        trees.append([part, pos])
    for i in range(a.length, 0, -1):
        s = a.walk[i - 1]
        k = next(j for j, (_, last) in enumerate(trees) if last == s)
        left, right = trees[k], trees[k + 1]
        trees[k:k + 2] = [[(left[0], i, right[0]), right[1]]]
    return tuple(t for t, _ in trees)


def phi_sum(x) -> FormalSum:
    return FormalSum(x).map_keys(phi_alley)


def check_orbits(n: int) -> bool:
    """S*-orbits of alleys map onto Polya orbits of forests."""
    done = set()
    for a in alleys_of(n):
        if a in done:
            continue
        orb = alley_orbit(a)
        done |= orb
        if {phi_alley(b) for b in orb} != set(orbit(phi_alley(a))):
            return False
    return True


def check_delta(n: int) -> bool:
    """phi commutes with delta and with Delta on every alley."""
    for a in alleys_of(n):
        X = phi_alley(a)
        if phi_sum(delta_alley(a)) != delta(X):
            return False
        if phi_sum(Delta_alley(a)) != Delta(X):
            return False
    return True


def check_lengths(n: int) -> bool:
    from .forest import length
    return all(length(phi_alley(a)) == a.length for a in alleys_of(n))


# ---------------------------------------------------------------------------
# descent algebra inside the group algebra

def _mask(J) -> int:
    m = 0
    for s in J:
        m |= 1 << (s - 1)
    return m


def _unmask(m: int, n: int) -> frozenset:
    return frozenset(s for s in range(1, n) if m >> (s - 1) & 1)


class SymmetricGroup:
    """All of S_n as an integer array (0-based values), with descent masks."""

    def __init__(self, n: int):
        self.n = n
        self.perms = np.array(list(permutations(range(n))), dtype=np.int8).reshape(-1, n)
        self.inv = np.argsort(self.perms, axis=1).astype(np.int8)
        self.masks = self.descent_masks(self.perms)

    def descent_masks(self, arr):
        m = np.zeros(arr.shape[:-1], dtype=np.int64)
        for i in range(self.n - 1):
            m |= (arr[..., i] > arr[..., i + 1]).astype(np.int64) << i
        return m

    def __len__(self):
        return len(self.perms)


def descent_class_sum(J, n: int) -> FormalSum:
    """x_J: the sum of the permutations whose descents all lie in J."""
    J = frozenset(J)
    return FormalSum({w: 1 for w in permutations(range(1, n + 1)) if descents(w) <= J})


def group_algebra_product(x, y) -> FormalSum:
    out = FormalSum()
    for u, cu in x.items():
        for v, cv in y.items():
            out.add_term(compose(u, v), cu * cv)
    return out


class ClosureFailure(AssertionError):
    """A product of class sums is not constant on exact descent classes."""


def _product_counts(G: SymmetricGroup, J_mask: int, K_masks, rows):
    """For each w in ``rows``: #{u : Des(u) in J, Des(u^-1 w) in K} per K."""
    U = np.nonzero((G.masks & ~J_mask) == 0)[0]
    Uinv = G.inv[U]
    out = np.zeros((len(K_masks), len(rows)), dtype=np.int64)
    for start in range(0, len(rows), 64):
        W = G.perms[rows[start:start + 64]]
        # v = u^-1 w in one-line form: v[j] = w[u^-1[j]]
        V = np.take_along_axis(W[:, None, :], Uinv[None, :, :].astype(np.int64), axis=2)
        vm = G.descent_masks(V)
        for k, K in enumerate(K_masks):
            out[k, start:start + 64] = ((vm & ~K) == 0).sum(axis=1)
    return out


def _class_representatives(G: SymmetricGroup, per_class: int, rng):
    """Row indices of up to ``per_class`` permutations of each exact descent class."""
    reps = {}
    for idx in range(len(G)):
        reps.setdefault(int(G.masks[idx]), []).append(idx)
    out = {}
    for m, idxs in reps.items():
        if per_class is None or len(idxs) <= per_class:
            out[m] = idxs
        else:
            out[m] = [idxs[0]] + rng.sample(idxs[1:], per_class - 1)
    return out


def _to_x_basis(d: dict, n: int) -> dict:
    """Convert exact-class coefficients d_D to x_L coefficients by inclusion-exclusion."""
    out = {}
    full = (1 << (n - 1)) - 1 if n > 0 else 0
    for L in range(full + 1):
        c = 0
        for D, v in d.items():
            if D & L == L:
                c += (-1) ** bin(D & ~L).count("1") * v
        if c:
            out[L] = c
    return out


def solomon_structure_constants(n: int, pairs=None, per_class=None, seed: int = 0) -> dict:
    """{(J, K): {L: c_JKL}} for the requested pairs (all pairs by default).

    The product x_J x_K is evaluated on ``per_class`` permutations of every
    exact descent class (all of them when None) and must be constant there.
    """
    rng = random.Random(seed)
    G = SymmetricGroup(n)
    subsets = subsets_of(n)
    if pairs is None:
        pairs = [(J, K) for J in subsets for K in subsets]
    classes = _class_representatives(G, per_class, rng)
    rows = np.array([i for m in sorted(classes) for i in classes[m]], dtype=np.int64)
    owner = [m for m in sorted(classes) for _ in classes[m]]
    by_J = {}
    for J, K in pairs:
        by_J.setdefault(frozenset(J), []).append(frozenset(K))
    out = {}
    for J, Ks in by_J.items():
        counts = _product_counts(G, _mask(J), [_mask(K) for K in Ks], rows)
        for k, K in enumerate(Ks):
            d = {}
            for m, v in zip(owner, counts[k]):
                v = int(v)
                if d.setdefault(m, v) != v:
                    raise ClosureFailure(f"x_{sorted(J)} x_{sorted(K)} is not constant on descent class {sorted(_unmask(m, n))}")
            out[(J, K)] = {_unmask(L, n): c for L, c in _to_x_basis(d, n).items()}
    return out


def solomon_product(J, K, n: int) -> dict:
    """c_JKL with x_J x_K = sum_L c_JKL x_L, computed exhaustively."""
    return solomon_structure_constants(n, [(frozenset(J), frozenset(K))])[(frozenset(J), frozenset(K))]


def descent_span_dimension(n: int) -> int:
    """Rank of {x_J} written in the basis of exact descent class sums."""
    from .linalg import rank
    subsets = subsets_of(n)
    index = {D: i for i, D in enumerate(subsets)}
    rows = [{index[D]: 1 for D in subsets if D <= J} for J in subsets]
    return rank(rows)


def oracle_report(n: int, seed: int = 0, sample_pairs: int = 64) -> dict:
    """Closure of the descent algebra plus alley/forest agreement checks.

    Up to n = 6 every pair (J, K) is checked on every permutation.  Beyond
    that a seeded sample of pairs is checked on three permutations of each
    descent class.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        # S_0 is trivial: one empty subset, one permutation
        checks = {"n": 0, "orbits": "PASS", "delta": "PASS", "lengths": "PASS"}
        return {"n": 0, "solomon_closure": "PASS", "solomon_mode": "trivial",
                "pairs_checked": 0, "dim_descent": 1, "alley_checks": checks}
    subsets = subsets_of(n)
    S = frozenset(range(1, n))
    closure = "PASS"
    try:
        if n <= 6:
            consts = solomon_structure_constants(n)
            mode = "exhaustive"
        else:
            rng = random.Random(seed)
            all_pairs = [(J, K) for J in subsets for K in subsets]
            pairs = rng.sample(all_pairs, min(sample_pairs, len(all_pairs)))
            if (S, S) not in pairs:
                pairs.append((S, S))
            consts = solomon_structure_constants(n, pairs, per_class=3, seed=seed)
            mode = f"sampled pairs={len(pairs)} per_class=3"
    except ClosureFailure:
        consts, mode, closure = {}, "failed", "FAIL"
    # x_S is the sum of all of S_n, so x_S x_S = n! x_S
    if n >= 1 and closure == "PASS" and consts.get((S, S)) != {S: factorial(n)}:
        closure = "FAIL"
    dim = descent_span_dimension(n)
    alley_n = min(n, 5)
    report = {
        "n": n,
        "solomon_closure": closure,
        "solomon_mode": mode,
        "pairs_checked": len(consts),
        "dim_descent": dim,
        "alley_checks": {
            "n": alley_n,
            "orbits": "PASS" if check_orbits(alley_n) else "FAIL",
            "delta": "PASS" if check_delta(alley_n) else "FAIL",
            "lengths": "PASS" if check_lengths(alley_n) else "FAIL",
        },
    }
    return report


__all__ = [
    "Alley",
    "ClosureFailure",
    "Delta_alley",
    "alley_orbit",
    "alley_product",
    "alleys_of",
    "descent_class_sum",
    "delta_alley",
    "group_algebra_product",
    "longest_element",
    "make_alley",
    "oracle_report",
    "phi_alley",
    "s_action",
    "solomon_product",
    "solomon_structure_constants",
]
