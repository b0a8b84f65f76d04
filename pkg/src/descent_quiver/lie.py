"""Lie expansion of unlabeled forests and aligned renderings.

``pi`` replaces every node (X, Y) by the bracket XY - YX in the free
associative algebra on the positive integers and concatenates across parts.
Its kernel is generated by antisymmetry (N) and Jacobi (J) elements, which
``aligned_rendering`` uses to rewrite a forest into aligned forests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .forest import (
    FormalSum,
    children,
    is_aligned,
    replace_subtree,
    tree_length,
    tree_value,
)


@lru_cache(maxsize=None)
def _pi_tree(t):
    if isinstance(t, int):
        return {(t,): 1}
    left, right = children(t)
    pl, pr = _pi_tree(left), _pi_tree(right)
    out = {}
    for u, cu in pl.items():
        for v, cv in pr.items():
            c = cu * cv
            out[u + v] = out.get(u + v, 0) + c
            out[v + u] = out.get(v + u, 0) - c
    return {w: c for w, c in out.items() if c}


def pi_tree(t) -> FormalSum:
    return FormalSum(_pi_tree(t))


def pi_forest(X) -> dict:
    """pi of a single unlabeled forest, as a plain dict (hot path)."""
    acc = {(): 1}
    for t in X:
        pt = _pi_tree(t)
        nxt = {}
        for u, cu in acc.items():
            for v, cv in pt.items():
                w = u + v
                nxt[w] = nxt.get(w, 0) + cu * cv
        acc = nxt
    return acc


def pi(x) -> FormalSum:
    """pi of a forest or a formal sum of unlabeled forests."""
    if not isinstance(x, dict):
        return FormalSum({k: v for k, v in pi_forest(x).items() if v})
    out = FormalSum()
    for X, c in x.items():
        for w, cw in pi_forest(X).items():
            out.add_term(w, c * cw)
    return out


# ---------------------------------------------------------------------------
# aligned renderings

class RenderingError(ValueError):
    """A node has two equal integer children; its class lies in ker Delta."""


@dataclass(frozen=True)
class Step:
    """One rewrite: ``coef * generator`` was added to the running sum.

    ``kind`` is "N" (antisymmetry, 2 terms) or "J" (Jacobi, 3 terms);
    ``terms`` lists the forests of the generator, all with coefficient 1.
    """

    kind: str
    address: tuple
    coef: object
    terms: tuple


@dataclass
class RenderCertificate:
    steps: list = field(default_factory=list)

    def generator_sum(self) -> FormalSum:
        out = FormalSum()
        for step in self.steps:
            for X in step.terms:
                out.add_term(X, step.coef)
        return out


def _offending(X, order: str):
    """Address of a node with squash(left) >= squash(right), or None.

    ``order`` "deep": deepest first, then leftmost.  "top": shallowest
    first, then leftmost.
    """
    found = []

    def walk(t, part, path):
        if isinstance(t, int):
            return
        left, right = children(t)
        walk(left, part, path + (0,))
        walk(right, part, path + (1,))
        if tree_value(left) >= tree_value(right):
            found.append(((part, path), t))

    for i, t in enumerate(X):
        walk(t, i, ())
    if not found:
        return None
    if order == "deep":
        return max(found, key=lambda f: (len(f[0][1]), [-f[0][0]] + [-s for s in f[0][1]]))
    return min(found, key=lambda f: (len(f[0][1]), f[0][0], f[0][1]))


def _rewrite(X, address, node, equal_mode: str):
    """The generator used to eliminate the offending node at ``address``.

    Returns a list of (kind, terms) generators applied in sequence to X; the
    first term of each generator is the forest being replaced.
    """
    left, right = node
    sl, sr = tree_value(left), tree_value(right)
    if sl > sr:
        swapped = replace_subtree(X, address, (right, left))
        return [("N", (X, swapped))]
    # equal squash
    if isinstance(left, int) and isinstance(right, int):
        raise RenderingError(f"node {node} has equal integer children")
    rotate = tree_length(right) > 0 and (equal_mode == "rotate" or tree_length(left) == 0)
    if rotate:
        r1, r2 = right
        a = replace_subtree(X, address, (r2, (left, r1)))
        b = replace_subtree(X, address, (r1, (r2, left)))
        return [("J", (X, a, b))]
    # swap first, then rotate using the children of the old left subtree
    l1, l2 = left
    swapped = replace_subtree(X, address, (right, left))
    a = replace_subtree(X, address, (l2, (right, l1)))
    b = replace_subtree(X, address, (l1, (l2, right)))
    return [("N", (X, swapped)), ("J", (swapped, a, b))]


def aligned_rendering(x, order: str = "deep", equal_mode: str = "rotate", max_steps: int = 100000):
    """Rewrite x modulo N + J into a combination of aligned forests.

    x is an unlabeled forest or a formal sum of them.  Returns (A, cert) with
    A supported on aligned forests, pi(A) == pi(x), and
    A - x == cert.generator_sum().
    """
    if not isinstance(x, dict):
        x = FormalSum({x: 1})
    work = FormalSum(x)
    result = FormalSum()
    cert = RenderCertificate()
    steps = 0
    while work:
        X = next(iter(work))
        c = work.pop(X)
        hit = _offending(X, order)
        if hit is None:
            result.add_term(X, c)
            continue
        address, node = hit
        gens = _rewrite(X, address, node, equal_mode)
        # each generator g = T0 + T1 (+ T2) replaces coef*T0 by -coef*(T1 + T2),
        # i.e. adds -coef*g to the running sum
        coef = c
        for kind, terms in gens:
            cert.steps.append(Step(kind, address, -coef, terms))
            coef = -coef
        for Y in gens[-1][1][1:]:
            work.add_term(Y, coef)
        steps += len(gens)
        if steps > max_steps:
            raise RuntimeError("aligned rendering did not terminate")
    return result, cert


def useful_rendering(x):
    """First rendering strategy whose result does not cancel to zero.

    Returns (A, cert, strategy) or (FormalSum(), None, None) if every
    strategy collapses.
    """
    for order in ("deep", "top"):
        for mode in ("rotate", "swap"):
            A, cert = aligned_rendering(x, order, mode)
            if A:
                return A, cert, (order, mode)
    return FormalSum(), None, None


def jacobi_element(X, Y, Z) -> FormalSum:
    """(X,(Y,Z)) + (Z,(X,Y)) + (Y,(Z,X)) as single-part forests."""
    out = FormalSum()
    out.add_term(((X, (Y, Z)),), 1)
    out.add_term(((Z, (X, Y)),), 1)
    out.add_term(((Y, (Z, X)),), 1)
    return out


def antisymmetry_element(X, Y) -> FormalSum:
    out = FormalSum()
    out.add_term(((X, Y),), 1)
    out.add_term(((Y, X),), 1)
    return out


__all__ = [
    "RenderCertificate",
    "RenderingError",
    "Step",
    "aligned_rendering",
    "antisymmetry_element",
    "is_aligned",
    "jacobi_element",
    "pi",
    "pi_forest",
    "pi_tree",
    "useful_rendering",
]
