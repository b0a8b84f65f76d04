"""Randomized and exhaustive property checks on forests, iota and Delta.

Each ``check_*`` function returns a list of counterexamples (empty when the
property holds), so callers can both assert and report.
"""

from __future__ import annotations

import random

from .forest import (
    Delta,
    FormalSum,
    alpha,
    class_key,
    collect_classes,
    erase,
    length,
    nondecreasing_rep,
    orbit,
    product,
    replace_subtree,
    sim_closure,
    subtrees,
    unique_factorization,
)
from .lie import pi
from .numbers import partitions_of
from .quiver import (
    E_iota,
    build_quiver,
    delta_iota,
    edge_path,
    iota_path,
    main_factorization,
    path_of_forest,
    paths_of,
)


def random_forest(rng: random.Random, n: int, steps: int, aligned: bool = False):
    """A random labeled forest of value n grown by ``steps`` leaf splits.

    Each split replaces a leaf v >= 2 by a node with label length + 1 and
    leaves a, v - a; with ``aligned`` only splits with a < v - a are used.
    """
    parts = list(rng.choice(partitions_of(n)))
    rng.shuffle(parts)
    X = tuple(parts)
    for _ in range(steps):
        lo = 3 if aligned else 2
        leaves = [(addr, t) for addr, t, _ in subtrees(X) if isinstance(t, int) and t >= lo]
        if not leaves:
            break
        addr, v = rng.choice(leaves)
        a = rng.randint(1, (v - 1) // 2 if aligned else v - 1)
        X = replace_subtree(X, addr, (a, length(X) + 1, v - a))
    return X


def check_unique_factorization(rng, trials=200, max_length=7, max_value=9):
    bad = []
    for _ in range(trials):
        X = random_forest(rng, rng.randint(2, max_value), rng.randint(0, max_length))
        if length(X) == 0:
            continue
        factors = unique_factorization(X)
        if len(factors) != length(X) or product(factors) != X:
            bad.append(X)
    return bad


def check_delta_pi(rng, trials=200, max_value=9):
    """Delta = pi o E on random labeled forests."""
    bad = []
    for _ in range(trials):
        n = rng.randint(1, max_value)
        X = random_forest(rng, n, rng.randint(0, n - 1))
        if Delta(X) != pi(erase(X)):
            bad.append(X)
    return bad


def check_erase_class(rng, trials=200, max_value=9):
    """E[X] = alpha_X [E(X)]."""
    bad = []
    for _ in range(trials):
        n = rng.randint(1, max_value)
        X = random_forest(rng, n, rng.randint(0, n - 1))
        erased = FormalSum()
        for Y in orbit(X):
            erased.add_term(erase(Y), 1)
        if collect_classes(erased) != FormalSum({class_key(erase(X)): alpha(X)}):
            bad.append(X)
    return bad


def check_iota_disjoint(n: int):
    """Distinct paths have iota images with disjoint class supports."""
    owner = {}
    bad = []
    for P in paths_of(n):
        for c in iota_path(P):
            if c in owner:
                bad.append((owner[c], P))
            owner[c] = P
    return bad


def check_iota_wiggle(rng, trials=100, max_value=8):
    """iota(path of X) is the sum of the classes ~ X, each once."""
    bad = []
    for _ in range(trials):
        n = rng.randint(3, max_value)
        X = random_forest(rng, n, rng.randint(1, n), aligned=True)
        if length(X) == 0:
            continue
        image = iota_path(path_of_forest(X))
        if image != FormalSum({c: 1 for c in sim_closure(X)}):
            bad.append(X)
    return bad


def check_nodes_in_image(n: int):
    """Delta(iota(e)) is nonzero for every edge e of Q_n."""
    return [e for e in build_quiver(n).edges if not delta_iota(edge_path(e))]


def check_main_factorization(rng, trials=100, max_value=8):
    """E(iota(main_factorization(X))) = [X] for aligned nondecreasing X."""
    bad = []
    for _ in range(trials):
        n = rng.randint(1, max_value)
        X = nondecreasing_rep(erase(random_forest(rng, n, rng.randint(0, n), aligned=True)))
        if E_iota(main_factorization(X)) != FormalSum({X: 1}):
            bad.append(X)
    return bad


def run_property_suite(seed: int = 0, n_max: int = 7, trials: int = 60) -> dict:
    """All checks at modest sizes; maps check name to counterexample count."""
    rng = random.Random(seed)
    return {
        "unique_factorization": len(check_unique_factorization(rng, trials)),
        "delta_equals_pi_erase": len(check_delta_pi(rng, trials)),
        "erase_class": len(check_erase_class(rng, trials)),
        "iota_disjoint": len(check_iota_disjoint(min(n_max, 7))),
        "iota_wiggle": len(check_iota_wiggle(rng, trials)),
        "nodes_in_image": len(check_nodes_in_image(n_max)),
        "main_factorization": len(check_main_factorization(rng, trials)),
    }


__all__ = [
    "check_delta_pi",
    "check_erase_class",
    "check_iota_disjoint",
    "check_iota_wiggle",
    "check_main_factorization",
    "check_nodes_in_image",
    "check_unique_factorization",
    "random_forest",
    "run_property_suite",
]
