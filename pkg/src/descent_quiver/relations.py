"""Branch and Jacobi relations for the quiver presentation, and their check.

Branch templates are words in split symbols; applying one to a vertex p
gives a combination of paths ending at p.  Jacobi relations come from the
aligned rendering of a Jacobi element with a tail of leaves appended,
pulled back to the path algebra through ``main_factorization``.

Candidates are counted after identifying elements that agree up to a
nonzero rational scalar within one (source, dest) grade.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from .forest import FormalSum, collect_classes, format_tree, nondecreasing_rep, tree_value
from .lie import RenderingError, jacobi_element, useful_rendering
from .linalg import (
    element_grade,
    ideal_generated,
    kernel_delta_iota,
    minimal_generator_count,
    path_bases,
)
from .quiver import (
    E_iota,
    Path,
    build_quiver,
    delta_iota,
    format_element,
    main_factorization,
    quiver_dict,
    replay,
    vertex_name,
)
from .numbers import format_composition, partitions_of

log = logging.getLogger(__name__)

DEDUP_CONVENTION = "candidates identified when equal up to a nonzero rational scalar within one (source, dest) grade"


@dataclass(frozen=True)
class BranchTemplate:
    """``symbols`` is (a, b, c, d) for length 2 or (a, b, c, d, x, y) for length 3."""

    symbols: tuple

    @property
    def kind(self) -> int:
        return len(self.symbols) // 2

    def terms(self) -> FormalSum:
        """The template as a combination of words in split symbols."""
        s = self.symbols
        ab, cd = (s[0], s[1]), (s[2], s[3])
        out = FormalSum()
        if self.kind == 2:
            out.add_term((ab, cd), 1)
            out.add_term((cd, ab), -1)
            return out
        xy = (s[4], s[5])
        out.add_term((ab, cd, xy), 1)
        out.add_term((xy, ab, cd), 1)
        out.add_term((ab, xy, cd), -1)
        out.add_term((cd, xy, ab), -1)
        return out

    def __str__(self):
        out = []
        for w, c in sorted(self.terms().items()):
            word = "".join(f"<{a}|{b}>" for a, b in w)
            out.append(f"{c:+d}{word}" if c not in (1, -1) else ("+" if c > 0 else "-") + word)
        return "".join(out).lstrip("+")


def _two_way_ok(a, b, c, d) -> bool:
    return a + b not in (c, d) and c + d not in (a, b)


def _symbols(limit: int):
    return [(a, b) for s in range(3, limit + 1) for a in range(1, (s + 1) // 2) for b in [s - a]]


def branch_templates(n: int) -> list:
    """Every template whose symbols could all act inside a partition of n."""
    syms = sorted(_symbols(n))
    out = []
    for i, (a, b) in enumerate(syms):
        for c, d in syms[i + 1:]:
            if _two_way_ok(a, b, c, d):
                out.append(BranchTemplate((a, b, c, d)))
    for i, (a, b) in enumerate(syms):
        for c, d in syms[i:]:
            if not _two_way_ok(a, b, c, d):
                continue
            for x, y in syms:
                right = a + b == c + d and a + b in (x, y)
                left = x + y in (a, b) and x + y in (c, d)
                if right or left:
                    out.append(BranchTemplate((a, b, c, d, x, y)))
    return out


def apply_template(p, R: BranchTemplate) -> FormalSum:
    """p.R: each word becomes the path from its source into p, when defined."""
    out = FormalSum()
    for w, c in R.terms().items():
        if replay(p, w) is not None:
            out.add_term(Path(tuple(p), w), c)
    return out


def _normalized(x: FormalSum):
    """Canonical scalar multiple: first coefficient (in path order) is 1."""
    items = sorted(x.items(), key=lambda t: t[0].word)
    lead = Fraction(items[0][1])
    return tuple((P, Fraction(c) / lead) for P, c in items)


def _dedupe(entries):
    seen = set()
    out = []
    for entry in entries:
        key = (element_grade(entry[-1]), _normalized(entry[-1]))
        if key in seen:
            continue
        seen.add(key)
        out.append(entry)
    return out


def branch_relations(n: int, check: bool = True, dedupe: bool = True) -> list:
    """(vertex, template, p.R) for every nonzero p.R, deduplicated by default."""
    found = []
    for R in branch_templates(n):
        for p in partitions_of(n):
            x = apply_template(p, R)
            if x:
                found.append((p, R, x))
    if dedupe:
        found = _dedupe(found)
    if check:
        for p, R, x in found:
            if delta_iota(x):
                raise AssertionError(f"branch relation {R} at {format_composition(p)} is not in the kernel")
    return found


# ---------------------------------------------------------------------------
# Jacobi relations

@dataclass(frozen=True)
class JacobiSpec:
    """Arguments of a Jacobi element plus the partition of leaves appended."""

    args: tuple
    tail: tuple

    @property
    def value(self) -> int:
        return sum(tree_value(t) for t in self.args) + sum(self.tail)

    def shape_text(self) -> str:
        return "J(" + ",".join(format_tree(t) for t in self.args) + ")"

    def __str__(self):
        tail = format_composition(self.tail) if self.tail else "e"
        return f"{self.shape_text()} q={tail}"


def jacobi_shapes(n: int) -> list:
    out = []
    for x in range(1, n + 1):
        for y in range(x + 1, n + 1):
            for z in range(y + 1, n - x - y + 1):
                if x + y != z:
                    out.append((x, y, z))
    for x1 in range(1, n + 1):
        for x2 in range(x1 + 1, n + 1):
            for y in range(1, n + 1):
                for z in range(y + 1, n + 1):
                    if x1 + x2 + y + z <= n and x1 + x2 in (y, z, y + z):
                        out.append(((x1, x2), y, z))
    return out


def jacobi_specs(n: int) -> list:
    out = []
    for args in jacobi_shapes(n):
        rest = n - sum(tree_value(t) for t in args)
        for q in partitions_of(rest):
            out.append(JacobiSpec(tuple(args), q))
    return out


def jacobi_element_with_tail(spec: JacobiSpec) -> FormalSum:
    return jacobi_element(*spec.args).map_keys(lambda X: X + spec.tail)


def jacobi_relation(spec: JacobiSpec):
    """(P, target) with E(iota(P)) == target, or None when no rendering helps.

    ``target`` is the class combination sum [A_i q] of a useful aligned
    rendering.
    """
    try:
        A, _, _ = useful_rendering(jacobi_element(*spec.args))
    except RenderingError as err:
        log.info("event=jacobi_skip spec=%s reason=%s", spec, err)
        return None
    if not A:
        log.info("event=jacobi_skip spec=%s reason=zero_rendering", spec)
        return None
    target = FormalSum()
    P = FormalSum()
    for X, c in A.items():
        Y = nondecreasing_rep(X + spec.tail)
        target.add_term(Y, c)
        P.add(main_factorization(Y), c)
    if not P:
        return None
    return P, target


def jacobi_relations(n: int, check: bool = True, dedupe: bool = True) -> list:
    """(spec, P) for every Jacobi spec of total value n, deduplicated by default."""
    found = []
    for spec in jacobi_specs(n):
        res = jacobi_relation(spec)
        if res is None:
            continue
        P, target = res
        if check:
            if E_iota(P) != collect_classes(FormalSum(target), check=False):
                raise AssertionError(f"E(iota(P)) differs from the rendering for {spec}")
            if delta_iota(P):
                raise AssertionError(f"Jacobi relation {spec} is not in the kernel")
        found.append((spec, P))
    return _dedupe(found) if dedupe else found


# ---------------------------------------------------------------------------
# conjecture check and presentation

def _lengths(x) -> set:
    return {len(P.word) for P in x}


def verify_conjecture(n: int, relations=None) -> dict:
    """Compare the ideal of branch and Jacobi relations with ker(Delta o iota)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if relations is None:
        raw_branch = branch_relations(n, dedupe=False)
        raw_jacobi = jacobi_relations(n, dedupe=False)
        branch, jacobi = _dedupe(raw_branch), _dedupe(raw_jacobi)
        gens = [x for _, _, x in branch] + [P for _, P in jacobi]
    else:
        branch, jacobi, gens = None, None, list(relations)
    bases = path_bases(n)
    kernel = kernel_delta_iota(n, bases)
    ideal = ideal_generated(gens, n, bases)
    mismatches = []
    for g in sorted(set(kernel.rows) | set(ideal.rows)):
        dk, di = kernel.dim(g), ideal.dim(g)
        # both sides are in RREF over the same basis, so equal spaces have equal rows
        if kernel.rows.get(g) != ideal.rows.get(g):
            mismatches.append({
                "source": vertex_name(g[0]), "dest": vertex_name(g[1]),
                "dim_kernel": dk, "dim_ideal": di,
            })
    lengths = set()
    for x in gens:
        lengths |= _lengths(x)
    minimal = minimal_generator_count(kernel)["total"] if kernel.dim() else 0
    report = {
        "n": n,
        "dim_kernel": kernel.dim(),
        "dim_ideal": ideal.dim(),
        "mismatched_grades": mismatches,
        "relation_lengths": sorted(lengths),
        "lengths_two_or_three": lengths <= {2, 3},
        "minimal": minimal,
        "verdict": "PASS" if not mismatches and lengths <= {2, 3} else "FAIL",
    }
    if branch is not None:
        report["branch"] = len(branch)
        report["jacobi"] = len(jacobi)
        report["branch_candidates"] = len(raw_branch)
        report["jacobi_candidates"] = len(raw_jacobi)
        report["dedup_convention"] = DEDUP_CONVENTION
    return report


def relations_document(n: int, verify: bool = True) -> dict:
    """The CLI-facing relations report."""
    raw_branch = branch_relations(n, dedupe=False)
    raw_jacobi = jacobi_relations(n, dedupe=False)
    branch, jacobi = _dedupe(raw_branch), _dedupe(raw_jacobi)
    doc = {
        "n": n,
        "branch": [
            {"vertex": vertex_name(p), "template": str(R), "paths": format_element(x)}
            for p, R, x in branch
        ],
        "jacobi": [
            {"shape": spec.shape_text(), "tail": vertex_name(spec.tail), "paths": format_element(P)}
            for spec, P in jacobi
        ],
        "counts": {
            "branch": len(branch),
            "jacobi": len(jacobi),
            "branch_candidates": len(raw_branch),
            "jacobi_candidates": len(raw_jacobi),
        },
        "dedup_convention": DEDUP_CONVENTION,
    }
    gens = [x for _, _, x in branch] + [P for _, P in jacobi]
    if verify:
        report = verify_conjecture(n, gens)
        doc["counts"]["minimal"] = report["minimal"]
        doc["conjecture"] = report["verdict"]
    else:
        bases = path_bases(n)
        kernel = kernel_delta_iota(n, bases)
        doc["counts"]["minimal"] = minimal_generator_count(kernel)["total"] if kernel.dim() else 0
    return doc


def emit_presentation(n: int, verify: bool = True) -> dict:
    """Quiver plus relations plus counts, as one JSON-ready document."""
    doc = relations_document(n, verify)
    doc["quiver"] = quiver_dict(build_quiver(n))
    return doc


__all__ = [
    "BranchTemplate",
    "DEDUP_CONVENTION",
    "JacobiSpec",
    "apply_template",
    "branch_relations",
    "branch_templates",
    "emit_presentation",
    "jacobi_element_with_tail",
    "jacobi_relation",
    "jacobi_relations",
    "jacobi_shapes",
    "jacobi_specs",
    "relations_document",
    "verify_conjecture",
]
