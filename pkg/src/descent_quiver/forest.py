"""Labeled and unlabeled binary forests.

Representation
--------------
A leaf is a positive ``int``.  An unlabeled node is a pair ``(left, right)``;
a labeled node is a triple ``(left, label, right)``.  A forest is a tuple of
trees; a forest of length zero is simply a composition.  Everything is an
immutable tuple, so forests can be hashed, memoized and used as dict keys.

Polya classes are represented by a canonical representative: for unlabeled
forests the nondecreasing representative under the tree order, for labeled
forests the parts sorted by ``(tree order of erased part, label sequence)``.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache

from .numbers import partition_of, rearrangements


class FormalSum(dict):
    """Finite linear combination ``{basis element: coefficient}``.

    Zero coefficients are never stored.  Coefficients are ints or Fractions.
    """

    def add_term(self, key, coef=1):
        if not coef:
            return
        c = self.get(key, 0) + coef
        if c:
            self[key] = c
        else:
            del self[key]

    def add(self, other, scale=1):
        """In-place ``self += scale * other``."""
        for key, coef in other.items():
            self.add_term(key, scale * coef)
        return self

    def __add__(self, other):
        return FormalSum(self).add(other)

    def __sub__(self, other):
        return FormalSum(self).add(other, -1)

    def __neg__(self):
        return FormalSum({k: -v for k, v in self.items()})

    def scaled(self, scale):
        if not scale:
            return FormalSum()
        return FormalSum({k: v * scale for k, v in self.items()})

    def map_keys(self, fn):
        """Push forward along fn, combining coefficients of colliding images."""
        out = FormalSum()
        for key, coef in self.items():
            out.add_term(fn(key), coef)
        return out

    def __repr__(self):
        if not self:
            return "0"
        return " + ".join(f"{v}*{k!r}" for k, v in self.items())


# ---------------------------------------------------------------------------
# structure

def is_leaf(t) -> bool:
    return isinstance(t, int)


def is_labeled_node(t) -> bool:
    return isinstance(t, tuple) and len(t) == 3


def children(t):
    """(left, right) of a node, labeled or not."""
    return (t[0], t[2]) if len(t) == 3 else (t[0], t[1])


@lru_cache(maxsize=None)
def tree_value(t) -> int:
    if isinstance(t, int):
        return t
    left, right = children(t)
    return tree_value(left) + tree_value(right)


@lru_cache(maxsize=None)
def tree_length(t) -> int:
    if isinstance(t, int):
        return 0
    left, right = children(t)
    return 1 + tree_length(left) + tree_length(right)


def tree_foliage(t) -> tuple:
    if isinstance(t, int):
        return (t,)
    left, right = children(t)
    return tree_foliage(left) + tree_foliage(right)


def foliage(X) -> tuple:
    out = ()
    for t in X:
        out += tree_foliage(t)
    return out


def squash(X) -> tuple:
    return tuple(tree_value(t) for t in X)


def length(X) -> int:
    return sum(tree_length(t) for t in X)


def value(X) -> int:
    return sum(tree_value(t) for t in X)


def tree_labels(t) -> list:
    """Node labels of a labeled tree in prefix order."""
    if isinstance(t, int):
        return []
    return [t[1]] + tree_labels(t[0]) + tree_labels(t[2])


def shift_labels(t, k: int):
    if isinstance(t, int) or k == 0:
        return t
    return (shift_labels(t[0], k), t[1] + k, shift_labels(t[2], k))


def shift_forest(X, k: int):
    return tuple(shift_labels(t, k) for t in X)


@lru_cache(maxsize=None)
def erase_tree(t):
    if isinstance(t, int):
        return t
    return (erase_tree(t[0]), erase_tree(t[2]))


def erase(X):
    """Remove node labels."""
    return tuple(erase_tree(t) for t in X)


def is_labeled_forest(X) -> bool:
    """Labels are exactly 1..l and increase away from the roots."""
    labels = []

    def walk(t, parent):
        if isinstance(t, int):
            return t >= 1
        if len(t) != 3:
            return False
        if t[1] <= parent:
            return False
        labels.append(t[1])
        return walk(t[0], t[1]) and walk(t[2], t[1])

    if not all(walk(t, 0) for t in X):
        return False
    return sorted(labels) == list(range(1, len(labels) + 1))


# ---------------------------------------------------------------------------
# products and factorization

def bullet(X, Y):
    """The product X . Y substituting the trees of Y for the leaves of X.

    Returns None (the zero element) when the foliage of X differs from the
    squash of Y.  Labels of Y are shifted by the length of X.
    """
    if foliage(X) != squash(Y):
        return None
    labeled = any(isinstance(t, tuple) and len(t) == 3 for t in X + Y)
    shift = length(X) if labeled else 0
    Ys = iter(shift_forest(Y, shift) if shift else Y)

    def graft(t):
        if isinstance(t, int):
            return next(Ys)
        if len(t) == 3:
            return (graft(t[0]), t[1], graft(t[2]))
        return (graft(t[0]), graft(t[1]))

    return tuple(graft(t) for t in X)


def _find_label(X, label):
    """Index of the part whose root carries ``label`` (roots only)."""
    for i, t in enumerate(X):
        if isinstance(t, tuple) and t[1] == label:
            return i
    raise ValueError(f"no root labeled {label}")


def split_first(X):
    """Split the node labeled 1; return (i, Y) with Y relabeled down by one.

    The node labeled 1 is necessarily a root, sitting in part i.
    """
    i = _find_label(X, 1)
    left, _, right = X[i]
    Y = X[:i] + (left, right) + X[i + 1:]
    return i, shift_forest(Y, -1)


def unique_factorization(X) -> list:
    """Length-one labeled forests whose left-to-right product is X."""
    factors = []
    while length(X) > 0:
        i, Y = split_first(X)
        s = squash(Y)
        factors.append(s[:i] + ((s[i], 1, s[i + 1]),) + s[i + 2:])
        X = Y
    return factors


def product(forests):
    """Left-to-right bullet product; None if any step is zero."""
    it = iter(forests)
    acc = next(it)
    for Y in it:
        acc = bullet(acc, Y)
        if acc is None:
            return None
    return acc


# ---------------------------------------------------------------------------
# tree order and canonical class keys

@lru_cache(maxsize=None)
def tree_key(t):
    """Sort key realizing the tree order on unlabeled trees.

    Smaller squash first; for equal squash the longer tree is smaller;
    then left subtrees, then right subtrees.
    """
    if isinstance(t, int):
        return (t, 0)
    left, right = t
    return (tree_value(t), -tree_length(t), tree_key(left), tree_key(right))


def tree_less(X, Y) -> bool:
    return tree_key(X) < tree_key(Y)


def forest_key(X):
    """Lexicographic key of an unlabeled forest under the tree order."""
    return tuple(tree_key(t) for t in X)


def nondecreasing_rep(X):
    """Parts of an unlabeled forest sorted into nondecreasing tree order."""
    return tuple(sorted(X, key=tree_key))


@lru_cache(maxsize=None)
def _labeled_part_key(t):
    return (tree_key(erase_tree(t)), tuple(tree_labels(t)))


def class_key(X):
    """Canonical representative of the Polya class of X (labeled or not)."""
    if any(isinstance(t, tuple) and len(t) == 3 for t in X):
        return tuple(sorted(X, key=_labeled_part_key))
    return tuple(sorted(X, key=tree_key))


def orbit(X) -> list:
    """Distinct rearrangements of the parts of X (the terms of [X])."""
    distinct = []
    index = {}
    ids = []
    for t in X:
        if t not in index:
            index[t] = len(distinct)
            distinct.append(t)
        ids.append(index[t])
    return [tuple(distinct[i] for i in w) for w in rearrangements(ids)]


def expand(c) -> FormalSum:
    """The class sum [c] as a formal sum of forests."""
    return FormalSum({Y: 1 for Y in orbit(c)})


def expand_sum(x) -> FormalSum:
    out = FormalSum()
    for c, coef in x.items():
        for Y in orbit(c):
            out.add_term(Y, coef)
    return out


class NotAClassSum(ValueError):
    """A formal sum of forests is not a combination of Polya class sums."""


def collect_classes(x, check=True) -> FormalSum:
    """Rewrite a formal sum of forests as a combination of class sums.

    With ``check`` every class must appear with all of its members carrying
    the same coefficient; otherwise NotAClassSum is raised.
    """
    groups = {}
    for Y, coef in x.items():
        groups.setdefault(class_key(Y), []).append(coef)
    out = FormalSum()
    for key, coefs in groups.items():
        if check:
            if len(set(coefs)) != 1 or len(coefs) != len(orbit(key)):
                raise NotAClassSum(f"class {key} has member coefficients {coefs}")
        out.add_term(key, coefs[0])
    return out


def polya_class(X):
    return class_key(X)


def alpha(X) -> int:
    """Index of the stabilizer of X in the stabilizer of its erasure."""
    big = len(orbit(X))
    small = len(orbit(erase(X)))
    assert big % small == 0
    return big // small


def class_product(a, b) -> FormalSum:
    """Product of two combinations of class sums, by full expansion."""
    ea, eb = expand_sum(a), expand_sum(b)
    prod = FormalSum()
    for X, cx in ea.items():
        for Y, cy in eb.items():
            Z = bullet(X, Y)
            if Z is not None:
                prod.add_term(Z, cx * cy)
    return collect_classes(prod)


# ---------------------------------------------------------------------------
# difference operators

def delta(X) -> FormalSum:
    """One step of the difference operator on a labeled forest."""
    if length(X) == 0:
        return FormalSum({X: 1})
    i, Y = split_first(X)
    Yi = Y[:i] + (Y[i + 1], Y[i]) + Y[i + 2:]
    out = FormalSum({Y: 1})
    out.add_term(Yi, -1)
    return out


def Delta(x) -> FormalSum:
    """Iterate delta to exhaustion; x is a forest or a formal sum of forests.

    The result is a formal sum of compositions.
    """
    if not isinstance(x, dict):
        x = FormalSum({x: 1})
    out = FormalSum()
    work = FormalSum(x)
    while work:
        nxt = FormalSum()
        for X, c in work.items():
            if length(X) == 0:
                out.add_term(X, c)
            else:
                nxt.add(delta(X), c)
        work = nxt
    return out


# ---------------------------------------------------------------------------
# branch action

class InvalidBranch(ValueError):
    pass


def branch_act_forest_term(X, a: int, b: int, labeled=None) -> FormalSum:
    """X.<a|b>: replace each leaf a+b in turn by the node (a, b).

    For a labeled forest the new node gets label length(X) + 1.  A forest
    of length zero is treated as labeled unless ``labeled`` is False.
    """
    if not a < b:
        raise InvalidBranch(f"<{a}|{b}> needs a < b")
    target = a + b
    if labeled is None:
        labeled = not any(isinstance(t, tuple) and len(t) == 2 for t in X)
    node = (a, length(X) + 1, b) if labeled else (a, b)
    out = FormalSum()

    def variants(t):
        # every way of replacing exactly one leaf `target` inside t
        if isinstance(t, int):
            return [node] if t == target else []
        if len(t) == 3:
            return ([(v, t[1], t[2]) for v in variants(t[0])]
                    + [(t[0], t[1], v) for v in variants(t[2])])
        return [(v, t[1]) for v in variants(t[0])] + [(t[0], v) for v in variants(t[1])]

    for i, t in enumerate(X):
        for v in variants(t):
            out.add_term(X[:i] + (v,) + X[i + 1:], 1)
    return out


def branch_act_forest(x, a: int, b: int, classes: bool = False, labeled=None) -> FormalSum:
    """Branch action on a forest or formal sum of forests.

    With ``classes`` the keys of x are class representatives; the action is
    applied to the expanded sum and the result re-collected into classes.
    """
    if not isinstance(x, dict):
        x = FormalSum({x: 1})
    src = expand_sum(x) if classes else x
    out = FormalSum()
    for X, c in src.items():
        out.add(branch_act_forest_term(X, a, b, labeled), c)
    return collect_classes(out) if classes else out


# ---------------------------------------------------------------------------
# prefix labeling

def F_label(X):
    """Label an unlabeled forest part by part, prefix order inside each part."""
    counter = [0]

    def lab(t):
        if isinstance(t, int):
            return t
        counter[0] += 1
        me = counter[0]
        left = lab(t[0])
        right = lab(t[1])
        return (left, me, right)

    return tuple(lab(t) for t in X)


def is_aligned(X) -> bool:
    """Every node has left squash strictly below right squash."""
    def ok(t):
        if isinstance(t, int):
            return True
        left, right = children(t)
        return tree_value(left) < tree_value(right) and ok(left) and ok(right)

    return all(ok(t) for t in X)


# ---------------------------------------------------------------------------
# subtree addressing and the ~ moves

def subtrees(X):
    """(address, subtree, parent label or None) for every subtree of X.

    An address is (part index, tuple of 0/1 child steps).
    """
    out = []

    def walk(t, part, path, parent):
        out.append(((part, path), t, parent))
        if isinstance(t, tuple):
            left, right = children(t)
            lbl = t[1] if len(t) == 3 else None
            walk(left, part, path + (0,), lbl)
            walk(right, part, path + (1,), lbl)

    for i, t in enumerate(X):
        walk(t, i, (), None)
    return out


def _replace_in_tree(t, path, new):
    if not path:
        return new
    step, rest = path[0], path[1:]
    if len(t) == 3:
        if step == 0:
            return (_replace_in_tree(t[0], rest, new), t[1], t[2])
        return (t[0], t[1], _replace_in_tree(t[2], rest, new))
    if step == 0:
        return (_replace_in_tree(t[0], rest, new), t[1])
    return (t[0], _replace_in_tree(t[1], rest, new))


def replace_subtree(X, address, new):
    part, path = address
    return X[:part] + (_replace_in_tree(X[part], path, new),) + X[part + 1:]


def _is_prefix(p, q):
    return p[0] == q[0] and q[1][:len(p[1])] == p[1]


def sim_moves(X):
    """Forests reachable from labeled X by one move of either kind."""
    out = set()
    subs = subtrees(X)
    for i in range(len(subs)):
        ai, ti, pi = subs[i]
        for j in range(i + 1, len(subs)):
            aj, tj, pj = subs[j]
            if ti == tj or tree_value(ti) != tree_value(tj):
                continue
            if _is_prefix(ai, aj) or _is_prefix(aj, ai):
                continue
            li = ti[1] if isinstance(ti, tuple) else None
            lj = tj[1] if isinstance(tj, tuple) else None
            ok = True
            for parent in (pi, pj):
                for lbl in (li, lj):
                    if parent is not None and lbl is not None and parent >= lbl:
                        ok = False
            if not ok:
                continue
            out.add(replace_subtree(replace_subtree(X, ai, tj), aj, ti))
    for i in range(len(X)):
        for j in range(i + 1, len(X)):
            if X[i] != X[j]:
                Y = list(X)
                Y[i], Y[j] = Y[j], Y[i]
                out.add(tuple(Y))
    return out


def sim_closure(X) -> set:
    """Class keys of every forest ~-equivalent to labeled X.

    Breadth-first over both moves; exponential, meant for small tests.
    """
    start = class_key(X)
    seen = {start}
    forests = {start}
    queue = deque([start])
    while queue:
        Y = queue.popleft()
        for Z in sim_moves(Y):
            if Z in forests:
                continue
            forests.add(Z)
            queue.append(Z)
            seen.add(class_key(Z))
    return seen


# ---------------------------------------------------------------------------
# text form

def format_tree(t) -> str:
    if isinstance(t, int):
        return str(t)
    if len(t) == 3:
        return f"({format_tree(t[0])},{format_tree(t[2])})#{t[1]}"
    return f"({format_tree(t[0])},{format_tree(t[1])})"


def format_forest(X) -> str:
    return " ".join(format_tree(t) for t in X)


class ParseError(ValueError):
    pass


def parse_forest(text: str):
    """Inverse of format_forest for labeled and unlabeled forests."""
    s = text.strip()
    pos = 0

    def tree():
        nonlocal pos
        if pos >= len(s):
            raise ParseError(f"unexpected end of {text!r}")
        if s[pos] == "(":
            pos += 1
            left = tree()
            if s[pos:pos + 1] != ",":
                raise ParseError(f"expected ',' at {pos} in {text!r}")
            pos += 1
            right = tree()
            if s[pos:pos + 1] != ")":
                raise ParseError(f"expected ')' at {pos} in {text!r}")
            pos += 1
            if s[pos:pos + 1] == "#":
                pos += 1
                return (left, _int(), right)
            return (left, right)
        return _int()

    def _int():
        nonlocal pos
        start = pos
        while pos < len(s) and s[pos].isdigit():
            pos += 1
        if start == pos:
            raise ParseError(f"expected integer at {start} in {text!r}")
        return int(s[start:pos])

    parts = []
    while pos < len(s):
        parts.append(tree())
        if pos < len(s):
            if s[pos] != " ":
                raise ParseError(f"expected space at {pos} in {text!r}")
            while pos < len(s) and s[pos] == " ":
                pos += 1
    return tuple(parts)


# ---------------------------------------------------------------------------
# small helpers used elsewhere

def partition_of_forest(X):
    return partition_of(squash(X))


def random_labeled_forest(rng, n_parts: int, n_nodes: int, max_leaf: int = 3):
    """A random labeled forest built by random branch steps (tests, CLI)."""
    X = tuple(rng.randint(1, max_leaf) for _ in range(n_parts))
    for _ in range(n_nodes):
        leaves = [(addr, t) for addr, t, _ in subtrees(X) if isinstance(t, int)]
        addr, v = rng.choice(leaves)
        a = rng.randint(1, max_leaf)
        b = rng.randint(1, max_leaf)
        # grow downward: new nodes get labels larger than all existing ones
        X = replace_subtree(X, addr, (a, length(X) + 1, b))
    # leaf values changed; that is fine, the forest is still valid
    return X
