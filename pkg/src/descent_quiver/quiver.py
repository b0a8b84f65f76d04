"""The quiver Q_n, its path algebra, and the map iota into forest classes.

A path is stored destination-first: ``Path(dest, word)`` where ``dest`` is a
partition (weakly increasing tuple) and ``word`` is a tuple of branch symbols
``(a, b)`` with a < b.  The first symbol is the edge arriving at ``dest``;
each further symbol prepends an edge on the source side, splitting a part
a + b of the current source into a and b.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .forest import (
    FormalSum,
    InvalidBranch,
    branch_act_forest_term,
    children,
    collect_classes,
    F_label,
    forest_key,
    is_aligned,
    length,
    nondecreasing_rep,
    orbit,
    squash,
    tree_value,
)
from .lie import pi_forest
from .numbers import format_composition, parse_composition, partition_of, partitions_of


class Edge(NamedTuple):
    source: tuple
    target: tuple
    a: int
    b: int


class Path(NamedTuple):
    dest: tuple
    word: tuple = ()

    @property
    def source(self):
        return replay(self.dest, self.word)

    def __len__(self):
        return len(self.word)

    def __str__(self):
        return format_path(self)


@dataclass
class Quiver:
    n: int
    vertices: list
    edges: list

    def isolated(self):
        touched = {e.source for e in self.edges} | {e.target for e in self.edges}
        return [v for v in self.vertices if v not in touched]


def merge(p, a: int, b: int):
    """Replace parts a and b of p by a + b (p must contain them)."""
    parts = list(p)
    parts.remove(a)
    parts.remove(b)
    parts.append(a + b)
    return tuple(sorted(parts))


def split(p, a: int, b: int):
    """Replace a part a + b of p by a and b, or None if there is none."""
    if a + b not in p:
        return None
    parts = list(p)
    parts.remove(a + b)
    parts += [a, b]
    return tuple(sorted(parts))


def replay(dest, word):
    """Source of dest.word, or None when some step has no part to split."""
    cur = tuple(dest)
    for a, b in word:
        cur = split(cur, a, b)
        if cur is None:
            return None
    return cur


def build_quiver(n: int) -> Quiver:
    """Vertices are the partitions of n; p -> q merges two distinct parts."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    vertices = partitions_of(n)
    edges = []
    for p in vertices:
        vals = sorted(set(p))
        for i, a in enumerate(vals):
            for b in vals[i + 1:]:
                edges.append(Edge(p, merge(p, a, b), a, b))
    return Quiver(n, vertices, edges)


def edge_path(e: Edge) -> Path:
    return Path(e.target, ((e.a, e.b),))


def branch_moves(p):
    """Branch symbols (a, b) applicable at source p, in lexicographic order."""
    out = []
    for v in sorted(set(p)):
        for a in range(1, (v + 1) // 2):
            out.append((a, v - a))
    return sorted(out)


def paths_of(n: int) -> list:
    """Every path of Q_n, ordered by (source, dest, word)."""
    out = []

    def grow(dest, word, src):
        out.append(Path(dest, word))
        for a, b in branch_moves(src):
            grow(dest, word + ((a, b),), split(src, a, b))

    for p in partitions_of(n):
        grow(p, (), p)
    out.sort(key=lambda P: (P.source, P.dest, P.word))
    return out


def grade(P: Path):
    return (P.source, P.dest)


def branch_act_path(x, a: int, b: int):
    """Source-side extension P.<a|b>; zero (None / empty sum) if impossible."""
    if not a < b:
        raise InvalidBranch(f"<{a}|{b}> needs a < b")
    if isinstance(x, Path):
        if x.source is None or a + b not in x.source:
            return None
        return Path(x.dest, x.word + ((a, b),))
    out = FormalSum()
    for P, c in x.items():
        Q = branch_act_path(P, a, b)
        if Q is not None:
            out.add_term(Q, c)
    return out


def concat(P1: Path, P2: Path):
    """P1 followed by P2 (the path algebra product), or None."""
    if P1.dest != P2.source:
        return None
    return Path(P2.dest, P2.word + P1.word)


def multiply(x, y) -> FormalSum:
    out = FormalSum()
    for P1, c1 in x.items():
        for P2, c2 in y.items():
            P = concat(P1, P2)
            if P is not None:
                out.add_term(P, c1 * c2)
    return out


def as_sum(x) -> FormalSum:
    if isinstance(x, Path):
        return FormalSum({x: 1})
    return x


# ---------------------------------------------------------------------------
# iota and its unlabeled shadow

class IotaCoefficientError(AssertionError):
    """iota produced a class with coefficient other than one."""


def iota_path(P: Path) -> FormalSum:
    """iota(P) as a combination of labeled class keys (coefficients 1)."""
    terms = FormalSum({X: 1 for X in orbit(P.dest)})
    for a, b in P.word:
        nxt = FormalSum()
        for X, c in terms.items():
            nxt.add(branch_act_forest_term(X, a, b, labeled=True), c)
        terms = nxt
    classes = collect_classes(terms)
    bad = {k: v for k, v in classes.items() if v != 1}
    if bad:
        raise IotaCoefficientError(f"iota({P}) has non-unit classes {bad}")
    return classes


def iota(x) -> FormalSum:
    """iota of a path or a formal sum of paths."""
    out = FormalSum()
    for P, c in as_sum(x).items():
        out.add(iota_path(P), c)
    return out


def _unlabeled_terms(P: Path, cache=None) -> dict:
    """E(iota(P)) expanded into unlabeled forests with multiplicities."""
    if cache is not None and P in cache:
        return cache[P]
    if not P.word:
        terms = {X: 1 for X in orbit(P.dest)}
    else:
        prev = _unlabeled_terms(Path(P.dest, P.word[:-1]), cache)
        a, b = P.word[-1]
        terms = {}
        for X, c in prev.items():
            for Y, cy in branch_act_forest_term(X, a, b, labeled=False).items():
                terms[Y] = terms.get(Y, 0) + c * cy
    if cache is not None:
        cache[P] = terms
    return terms


def E_iota(x) -> FormalSum:
    """E(iota(x)) as a combination of unlabeled class keys."""
    out = FormalSum()
    for P, c in as_sum(x).items():
        out.add(collect_classes(FormalSum(_unlabeled_terms(P))), c)
    return out


def delta_iota_path(P: Path, cache=None) -> dict:
    """Delta(iota(P)) = pi(E(iota(P))) as a dict composition -> int."""
    out = {}
    for X, c in _unlabeled_terms(P, cache).items():
        for w, cw in pi_forest(X).items():
            out[w] = out.get(w, 0) + c * cw
    return {w: v for w, v in out.items() if v}


def delta_iota(x) -> FormalSum:
    out = FormalSum()
    for P, c in as_sum(x).items():
        out.add(delta_iota_path(P), c)
    return out


# ---------------------------------------------------------------------------
# forests back to paths

class NotAligned(ValueError):
    pass


def path_of_forest(X) -> Path:
    """The path whose i-th symbol records the child squashes of node i."""
    if not is_aligned(X):
        raise NotAligned(f"{X} is not aligned")
    l = length(X)
    word = [None] * l

    def walk(t):
        if isinstance(t, int):
            return
        left, right = children(t)
        word[t[1] - 1] = (tree_value(left), tree_value(right))
        walk(left)
        walk(right)

    for t in X:
        walk(t)
    return Path(partition_of(squash(X)), tuple(word))


class FactorizationError(ValueError):
    pass


_MF_MEMO: dict = {}


def main_factorization(X) -> FormalSum:
    """An element P of the path algebra with E(iota(P)) == [X].

    X is an unlabeled forest, aligned and with parts in nondecreasing tree
    order.  Coefficients are Fractions.
    """
    X = tuple(X)
    if X != nondecreasing_rep(X):
        raise FactorizationError(f"{X} is not nondecreasing")
    if not is_aligned(X):
        raise FactorizationError(f"{X} is not aligned")
    if X in _MF_MEMO:
        return _MF_MEMO[X]
    if length(X) == 0:
        result = FormalSum({Path(partition_of(X), ()): Fraction(1)})
        _MF_MEMO[X] = result
        return result
    P = path_of_forest(F_label(X))
    image = E_iota(P)
    lead = image.pop(X, 0)
    if not lead:
        raise FactorizationError(f"[{X}] missing from E(iota({P}))")
    result = FormalSum({P: Fraction(1)})
    key = forest_key(X)
    # largest residual classes first for a stable output order
    for Y in sorted(image, key=forest_key, reverse=True):
        if not forest_key(Y) < key:
            raise FactorizationError(f"residual {Y} is not below {X}")
        result.add(main_factorization(Y), -image[Y])
    result = result.scaled(Fraction(1, lead))
    _MF_MEMO[X] = result
    return result


# ---------------------------------------------------------------------------
# text and exports

def format_path(P: Path) -> str:
    word = "".join(f"<{a}|{b}>" for a, b in P.word)
    return f"{format_composition(P.dest)} ; {word}" if word else f"{format_composition(P.dest)} ;"


def parse_path(text: str) -> Path:
    dest_text, _, word_text = text.partition(";")
    dest = partition_of(parse_composition(dest_text))
    word = []
    for chunk in word_text.replace(" ", "").split(">"):
        if not chunk:
            continue
        if not chunk.startswith("<") or "|" not in chunk:
            raise ValueError(f"bad branch symbol in {text!r}")
        a, b = chunk[1:].split("|")
        word.append((int(a), int(b)))
    P = Path(dest, tuple(word))
    if P.source is None:
        raise ValueError(f"{text!r} is not a path")
    return P


def format_element(x) -> list:
    """[[coefficient, path text], ...] in path order."""
    return [[str(c), format_path(P)] for P, c in sorted(x.items(), key=lambda t: (t[0].source, t[0].dest, t[0].word))]


def vertex_name(p) -> str:
    return format_composition(p) if p else "e"


def export_dot(q: Quiver) -> str:
    lines = [f'digraph Q{q.n} {{', "  rankdir=BT;"]
    for v in q.vertices:
        lines.append(f'  "{vertex_name(v)}";')
    for e in q.edges:
        lines.append(f'  "{vertex_name(e.source)}" -> "{vertex_name(e.target)}" [label="<{e.a}|{e.b}>"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def quiver_dict(q: Quiver) -> dict:
    return {
        "n": q.n,
        "vertices": [vertex_name(v) for v in q.vertices],
        "edges": [
            {"src": vertex_name(e.source), "dst": vertex_name(e.target), "a": e.a, "b": e.b}
            for e in q.edges
        ],
    }


def export_json(obj) -> str:
    if isinstance(obj, Quiver):
        data = quiver_dict(obj)
    else:
        data = {"terms": format_element(as_sum(obj))}
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
