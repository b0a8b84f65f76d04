import json
from functools import lru_cache

import pytest

from descent_quiver.checks import (
    check_iota_disjoint,
    check_iota_wiggle,
    check_main_factorization,
    check_nodes_in_image,
)
from descent_quiver.forest import FormalSum, nondecreasing_rep, parse_forest
from descent_quiver.numbers import partitions_of
from descent_quiver.quiver import (
    E_iota,
    Path,
    build_quiver,
    concat,
    export_dot,
    export_json,
    format_path,
    iota,
    main_factorization,
    multiply,
    parse_path,
    paths_of,
    vertex_name,
)


def brute_edges(n):
    out = set()
    for p in partitions_of(n):
        for i in range(len(p)):
            for j in range(len(p)):
                if i != j and p[i] < p[j]:
                    rest = [x for k, x in enumerate(p) if k not in (i, j)]
                    out.add((p, tuple(sorted(rest + [p[i] + p[j]])), p[i], p[j]))
    return out


@lru_cache(maxsize=None)
def paths_from(src):
    """Number of paths starting at src, counted by merging pairs of distinct values."""
    vals = sorted(set(src))
    total = 1
    for i, a in enumerate(vals):
        for b in vals[i + 1:]:
            rest = list(src)
            rest.remove(a)
            rest.remove(b)
            total += paths_from(tuple(sorted(rest + [a + b])))
    return total


@pytest.mark.parametrize("n", range(0, 10))
def test_edges_match_brute(n):
    q = build_quiver(n)
    assert {(e.source, e.target, e.a, e.b) for e in q.edges} == brute_edges(n)
    assert q.vertices == partitions_of(n)


def test_q8_shape():
    q = build_quiver(8)
    assert len(q.vertices) == 22
    assert len(q.edges) == 28
    assert {vertex_name(v) for v in q.isolated()} == {"1,1,1,1,1,1,1,1", "2,2,2,2"}


@pytest.mark.parametrize("n", range(1, 10))
def test_path_counts(n):
    assert len(paths_of(n)) == sum(paths_from(p) for p in partitions_of(n))
    assert len(set(paths_of(n))) == len(paths_of(n))


def test_small_path_counts_frozen():
    assert [len(paths_of(n)) for n in range(1, 9)] == [1, 2, 4, 8, 16, 33, 72, 166]


def test_path_text_roundtrip():
    for P in paths_of(7):
        assert parse_path(format_path(P)) == P
    with pytest.raises(ValueError):
        parse_path("3,4 ; <2|5>")


def test_concat_and_multiply():
    P1 = parse_path("7 ; <3|4>")
    P2 = parse_path("3,4 ; <1|2>")
    assert concat(P2, P1) == parse_path("7 ; <3|4><1|2>")
    assert concat(P1, P2) is None
    assert multiply(FormalSum({P2: 2}), FormalSum({P1: 3})) == FormalSum({parse_path("7 ; <3|4><1|2>"): 6})


def test_iota_example():
    P = parse_path("3,4 ; <1|3><1|2>")
    classes = iota(P)
    assert len(classes) == 2 and set(classes.values()) == {1}


def test_main_factorization_example():
    X = nondecreasing_rep(parse_forest("(1,(1,2)) 3"))
    assert main_factorization(X) == FormalSum({
        parse_path("3,4 ; <1|3><1|2>"): 1,
        parse_path("3,4 ; <1|2><1|3>"): -1,
    })
    assert E_iota(main_factorization(X)) == FormalSum({X: 1})


@pytest.mark.parametrize("n", range(1, 8))
def test_iota_images_disjoint(n):
    assert check_iota_disjoint(n) == []


@pytest.mark.parametrize("n", range(1, 11))
def test_every_edge_survives_delta_iota(n):
    assert check_nodes_in_image(n) == []


def test_iota_wiggle(rng):
    assert check_iota_wiggle(rng, trials=80) == []


def test_main_factorization_random(rng):
    assert check_main_factorization(rng, trials=80) == []


def test_exports():
    q = build_quiver(5)
    dot = export_dot(q)
    assert dot.startswith("digraph Q5 {") and dot.count("->") == len(q.edges)
    data = json.loads(export_json(q))
    assert data["n"] == 5 and len(data["edges"]) == len(q.edges)
    assert export_json(q) == export_json(build_quiver(5))
    terms = json.loads(export_json(Path((3, 4), ((1, 2),))))["terms"]
    assert terms == [["1", "3,4 ; <1|2>"]]
