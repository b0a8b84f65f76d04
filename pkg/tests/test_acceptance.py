"""Acceptance suite: one pass/fail line per primary criterion.

Patterns are coefficient tuples in word order, scaled so the first is 1.

Run under pytest (``pytest tests/test_acceptance.py -s``) or directly as a
script (``python3 tests/test_acceptance.py``).
"""

import random
import sys
from fractions import Fraction
from functools import lru_cache

import pytest

from descent_quiver.checks import (
    check_delta_pi,
    check_erase_class,
    check_iota_disjoint,
    check_iota_wiggle,
    check_main_factorization,
    check_nodes_in_image,
    check_unique_factorization,
)
from descent_quiver.coxeter import check_delta, check_orbits, descent_span_dimension, solomon_structure_constants
from descent_quiver.linalg import kernel_delta_iota, minimal_generator_count, path_bases, quotient_dimension
from descent_quiver.quiver import build_quiver, delta_iota, vertex_name
from q8_reference import ROWS, proportional, row_elements
from descent_quiver.relations import (
    DEDUP_CONVENTION,
    branch_relations,
    jacobi_relations,
    verify_conjecture,
)

SEED = 20240611


@lru_cache(maxsize=None)
def kernel(n):
    return kernel_delta_iota(n, path_bases(n))


def minimal_counts():
    expected = {6: 1, 7: 4, 8: 11, 9: 24, 10: 48}
    got = {n: minimal_generator_count(kernel(n))["total"] for n in expected}
    return got == expected, f"got {got}"


def conjecture():
    verdicts = {n: verify_conjecture(n)["verdict"] for n in range(6, 11)}
    return all(v == "PASS" for v in verdicts.values()), f"verdicts {verdicts}"


def quotient_dims():
    got = {n: quotient_dimension(n, kernel(n)) for n in range(1, 11)}
    bad = {n: d for n, d in got.items() if d != 2 ** (n - 1)}
    return not bad, f"mismatches {bad}" if bad else "2^(n-1) for n=1..10"


def q8_structure():
    q = build_quiver(8)
    iso = sorted(vertex_name(v) for v in q.isolated())
    ok = len(q.vertices) == 22 and iso == ["1,1,1,1,1,1,1,1", "2,2,2,2"]
    return ok, f"vertices={len(q.vertices)} isolated={iso}"


def _pattern(x):
    """Coefficients in word order, scaled so the first is 1."""
    coeffs = [Fraction(c) for _, c in sorted(x.items(), key=lambda t: t[0].word)]
    return "(" + ",".join(str(c / coeffs[0]) for c in coeffs) + ")"


def q8_table():
    """Every reference row must equal an emitted relation up to scalar."""
    problems = []
    branch = branch_relations(8)
    jac = jacobi_relations(8)
    emitted = [x for _, _, x in branch] + [P for _, P in jac]
    two = [x for p, R, x in branch if R.kind == 2 and p == (3, 5)]
    if not any({P.word for P in x} == {((1, 2), (1, 4)), ((1, 4), (1, 2))} for x in two):
        problems.append("no <1|2><1|4> - <1|4><1|2> relation at 35")
    three = sorted((vertex_name(p), sorted(R.terms().values())) for p, R, _ in branch if R.kind == 3)
    if three != [("1,3,4", [-2, 1, 1]), ("3,5", [-2, 1, 1]), ("4,4", [-2, 1, 1])]:
        problems.append(f"length-3 branch relations {three}")
    dests = {vertex_name(P.dest) for _, x in jac for P in x}
    if dests != {"1,1,6", "1,7", "2,6", "8"}:
        problems.append(f"Jacobi vertices {sorted(dests)}")
    target = sorted(Fraction(c) for c in (1, -1, -2, -1))
    four = [sorted(Fraction(c) for c in x.values()) for _, x in jac if len(x) == 4]
    if not any(sorted(c / r for c in v) == target for v in four for r in v):
        problems.append(f"no 4-term Jacobi relation with coefficients (1,-1,-2,-1) up to scalar and order; "
                        f"found {[tuple(int(c) for c in v) for v in four]}")
    matched = 0
    for p, expr, x in row_elements(8):
        hit = [y for y in emitted if proportional(x, y)]
        if hit:
            matched += 1
            continue
        near = [y for y in emitted if set(y) == set(x)]
        note = f"emitted pattern {_pattern(near[0])}" if near else "no emitted relation on the same paths"
        literal = "in" if not delta_iota(x) else "not in"
        problems.append(f"row {expr} at {vertex_name(p)}: pattern {_pattern(x)} {literal} ker(Delta iota); {note}")
    detail = f"{matched}/{len(ROWS)} reference rows matched up to scalar"
    return not problems, detail + ("; " + "; ".join(problems) if problems else "")


def soft_counts():
    targets_b = {6: 0, 7: 1, 8: 4, 9: 10, 10: 22}
    targets_j = {6: 1, 7: 3, 8: 7, 9: 14, 10: 29}
    lines = []
    for n in range(6, 11):
        b = len(branch_relations(n))
        j = len(jacobi_relations(n))
        j_raw = len(jacobi_relations(n, dedupe=False))
        mark = "" if (b, j) == (targets_b[n], targets_j[n]) else " (differs)"
        lines.append(f"n={n} branch {b}/{targets_b[n]} jacobi {j}/{targets_j[n]} raw {j_raw}{mark}")
    ideal_ok, _ = conjecture()
    return ideal_ok, " | ".join(lines) + f" | dedup: {DEDUP_CONVENTION}"


def lemma_suites():
    rng = random.Random(SEED)
    counts = {
        "unique_factorization": len(check_unique_factorization(rng, 300, max_length=7)),
        "delta_pi": len(check_delta_pi(rng, 300, max_value=9)),
        "erase_class": len(check_erase_class(rng, 300)),
        "iota_disjoint": sum(len(check_iota_disjoint(n)) for n in range(1, 8)),
        "iota_wiggle": len(check_iota_wiggle(rng, 200, max_value=8)),
        "nodes_in_image": sum(len(check_nodes_in_image(n)) for n in range(1, 11)),
        "main_factorization": len(check_main_factorization(rng, 200, max_value=8)),
        "alley_orbits": sum(not check_orbits(n) for n in range(1, 6)),
        "alley_delta": sum(not check_delta(n) for n in range(1, 6)),
        "solomon": 0,
    }
    for n in range(1, 7):
        try:
            solomon_structure_constants(n)
        except AssertionError:
            counts["solomon"] += 1
        if descent_span_dimension(n) != 2 ** (n - 1):
            counts["solomon"] += 1
    bad = {k: v for k, v in counts.items() if v}
    return not bad, f"failures {bad}" if bad else f"{len(counts)} suites clean"


CRITERIA = [
    ("minimal relation counts n=6..10", minimal_counts),
    ("ideal equals kernel n=6..10", conjecture),
    ("quotient dimension n=1..10", quotient_dims),
    ("Q_8 structure", q8_structure),
    ("Q_8 relation table", q8_table),
    ("soft relation counts n=6..10", soft_counts),
    ("lemma-level property suites", lemma_suites),
]


def report(name, ok, detail, stream=sys.stdout):
    print(f"ACCEPTANCE {'PASS' if ok else 'FAIL'}: {name} :: {detail}", file=stream)


@pytest.mark.parametrize("name,fn", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(name, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print()
        report(name, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for name, fn in CRITERIA:
        ok, detail = fn()
        report(name, ok, detail)
        failed += not ok
    sys.exit(1 if failed else 0)
