"""Exact sparse linear algebra over the rationals, graded by (source, dest).

Rows are sparse dicts ``{column: coefficient}``.  Elimination is fraction
free: integer rows are combined as ``a*s - b*r`` and divided by their
content, and Fractions appear only when the reduced row echelon form is
produced at the end.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .forest import FormalSum
from .quiver import Path, branch_moves, delta_iota_path, merge, paths_of, split

Rat = Fraction


class BasisIndex:
    """Bijection between basis elements and dense indices, in insertion order."""

    def __init__(self, items=()):
        self.items = []
        self.index = {}
        for x in items:
            self.add(x)

    def add(self, x) -> int:
        if x not in self.index:
            self.index[x] = len(self.items)
            self.items.append(x)
        return self.index[x]

    def __len__(self):
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def __contains__(self, x):
        return x in self.index


def _integral(row: dict) -> dict:
    """Scale a rational row to a primitive integer row with positive lead."""
    if not row:
        return {}
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = den * v.denominator // gcd(den, v.denominator)
    out = {k: int(v * den) for k, v in row.items() if v}
    return _primitive(out)


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g not in (0, 1):
        row = {k: v // g for k, v in row.items()}
    return row


class Echelon:
    """Incrementally maintained echelon basis of integer rows.

    ``pivots`` maps the leading column of each stored row to the row.
    """

    def __init__(self):
        self.pivots = {}

    def reduce(self, row: dict) -> dict:
        row = _integral(row)
        while row:
            p = min(row)
            base = self.pivots.get(p)
            if base is None:
                return row
            a, b = base[p], row[p]
            new = {k: a * v for k, v in row.items()}
            for k, v in base.items():
                w = new.get(k, 0) - b * v
                if w:
                    new[k] = w
                else:
                    new.pop(k, None)
            row = _primitive(new) if new else {}
        return row

    def insert(self, row: dict) -> bool:
        """Add row to the span; True if the rank went up."""
        row = self.reduce(row)
        if not row:
            return False
        self.pivots[min(row)] = row
        return True

    def __len__(self):
        return len(self.pivots)

    def rref(self) -> list:
        """Reduced row echelon form as Fraction rows sorted by pivot."""
        done = {}
        for p in sorted(self.pivots, reverse=True):
            row = {k: Fraction(v) for k, v in self.pivots[p].items()}
            for q in [k for k in row if k != p and k in done]:
                c = row[q]
                for k, v in done[q].items():
                    w = row.get(k, 0) - c * v
                    if w:
                        row[k] = w
                    else:
                        row.pop(k, None)
            lead = row[p]
            done[p] = {k: v / lead for k, v in row.items()}
        return [done[p] for p in sorted(done)]


def echelon_of(rows) -> Echelon:
    ech = Echelon()
    for r in rows:
        ech.insert(r)
    return ech


def rref(rows) -> list:
    return echelon_of(rows).rref()


def rank(rows) -> int:
    return len(echelon_of(rows))


def nullspace(rows, ncols: int) -> list:
    """Basis (in RREF) of {v : M v = 0} for the sparse matrix with these rows."""
    R = rref(rows)
    pivot_cols = [min(r) for r in R]
    free = [c for c in range(ncols) if c not in set(pivot_cols)]
    basis = []
    for f in free:
        v = {f: Fraction(1)}
        for p, r in zip(pivot_cols, R):
            c = r.get(f)
            if c:
                v[p] = -c
        basis.append(v)
    return rref(basis)


def transpose(rows) -> list:
    cols = {}
    for i, r in enumerate(rows):
        for j, v in r.items():
            cols.setdefault(j, {})[i] = v
    return [cols[j] for j in sorted(cols)]


def left_kernel(rows) -> list:
    """Basis (in RREF) of {c : sum_i c_i row_i = 0}."""
    return nullspace(transpose(rows), len(rows))


# ---------------------------------------------------------------------------
# graded subspaces of the path algebra

def grade_length(g) -> int:
    src, dst = g
    return len(src) - len(dst)


class GradedSubspace:
    """Per (source, dest) grade: the grade's path basis and RREF rows."""

    def __init__(self, n: int, bases: dict):
        self.n = n
        self.bases = bases          # grade -> BasisIndex of Paths (sorted by word)
        self.rows = {}              # grade -> list of RREF rows (index -> Fraction)

    def set_rows(self, g, rows):
        rows = list(rows)
        if rows:
            self.rows[g] = rows
        else:
            self.rows.pop(g, None)

    def dim(self, g=None) -> int:
        if g is None:
            return sum(len(r) for r in self.rows.values())
        return len(self.rows.get(g, ()))

    def grades(self):
        return sorted(self.rows, key=lambda g: (grade_length(g), g))

    def vectors(self, g) -> list:
        basis = self.bases[g]
        return [FormalSum({basis[i]: c for i, c in r.items()}) for r in self.rows.get(g, ())]

    def all_vectors(self):
        for g in self.grades():
            for v in self.vectors(g):
                yield g, v

    def dims(self) -> dict:
        return {g: len(r) for g, r in self.rows.items()}


def path_bases(n: int) -> dict:
    """grade -> BasisIndex of the paths in that grade, ordered by word."""
    groups = {}
    for P in paths_of(n):
        groups.setdefault((P.source, P.dest), []).append(P)
    return {g: BasisIndex(sorted(ps, key=lambda P: P.word)) for g, ps in groups.items()}


def element_grade(x):
    grades = {(P.source, P.dest) for P in x}
    if len(grades) != 1:
        raise ValueError(f"element is not homogeneous: grades {sorted(grades)}")
    return grades.pop()


def to_row(x, basis: BasisIndex) -> dict:
    return {basis.index[P]: c for P, c in x.items()}


def _grade_kernel(paths, cache=None) -> list:
    """Left kernel of the Delta(iota(P)) rows for one grade's paths."""
    cache = {} if cache is None else cache
    cols = BasisIndex()
    rows = []
    for P in paths:
        img = delta_iota_path(P, cache)
        rows.append({cols.add(w): c for w, c in sorted(img.items())})
    return left_kernel(rows)


def kernel_delta_iota(n: int, bases=None, parallel: bool = False) -> GradedSubspace:
    """The ideal ker(Delta o iota) of the path algebra of Q_n, grade by grade.

    With ``parallel`` the grades are handed to worker processes; the result
    is identical because each grade is computed independently.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    bases = bases or path_bases(n)
    out = GradedSubspace(n, bases)
    order = sorted(bases, key=lambda g: (grade_length(g), g))
    if parallel:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor() as pool:
            results = pool.map(_grade_kernel, [bases[g].items for g in order], chunksize=8)
            for g, rows in zip(order, results):
                out.set_rows(g, rows)
        return out
    cache = {}
    for g in order:
        out.set_rows(g, _grade_kernel(bases[g].items, cache))
    return out


def quotient_dimension(n: int, kernel: GradedSubspace) -> int:
    return sum(len(b) for b in kernel.bases.values()) - kernel.dim()


# ---------------------------------------------------------------------------
# arrow multiplication

def arrow_multiples(x):
    """All products e*x and x*e with single arrows e, as (grade, element).

    x is homogeneous.  Source-side products extend the word; destination
    side products prepend the arrow's symbol and merge two parts of dest.
    """
    src, dst = element_grade(x)
    out = []
    for a, b in branch_moves(src):
        y = FormalSum({Path(P.dest, P.word + ((a, b),)): c for P, c in x.items()})
        out.append(((split(src, a, b), dst), y))
    vals = sorted(set(dst))
    for i, a in enumerate(vals):
        for b in vals[i + 1:]:
            d2 = merge(dst, a, b)
            y = FormalSum({Path(d2, ((a, b),) + P.word): c for P, c in x.items()})
            out.append(((src, d2), y))
    return out


def ideal_generated(gens, n: int, bases=None) -> GradedSubspace:
    """Two-sided ideal generated by homogeneous elements of the path algebra.

    Grades are processed by increasing path length; each grade collects its
    generators plus all arrow multiples of the already closed shorter grades,
    so one pass reaches the fixed point.
    """
    bases = bases or path_bases(n)
    pending = {}
    for x in gens:
        if x:
            pending.setdefault(element_grade(x), []).append(x)
    out = GradedSubspace(n, bases)
    order = sorted(bases, key=lambda g: (grade_length(g), g))
    for g in order:
        items = pending.pop(g, [])
        if not items:
            continue
        basis = bases[g]
        ech = echelon_of(to_row(x, basis) for x in items)
        out.set_rows(g, ech.rref())
        for v in out.vectors(g):
            for g2, y in arrow_multiples(v):
                pending.setdefault(g2, []).append(y)
    assert not pending, f"multiples landed outside the path basis: {list(pending)[:3]}"
    return out


def products_with_arrows(I: GradedSubspace) -> GradedSubspace:
    """R*I + I*R where R is the arrow ideal."""
    pending = {}
    for g, v in I.all_vectors():
        for g2, y in arrow_multiples(v):
            pending.setdefault(g2, []).append(y)
    out = GradedSubspace(I.n, I.bases)
    for g, items in pending.items():
        basis = I.bases[g]
        out.set_rows(g, rref(to_row(x, basis) for x in items))
    return out


def minimal_generator_count(I: GradedSubspace) -> dict:
    """Size of a minimal generating set of the ideal I, total and per grade.

    Requires I to be an ideal inside R^2 (checked): the count in grade g is
    dim I_g - dim (R I + I R)_g.
    """
    for g in I.rows:
        if grade_length(g) < 2:
            raise ValueError(f"ideal has elements of length < 2 in grade {g}")
    RI = products_with_arrows(I)
    by_grade = {}
    for g in I.grades():
        inner = RI.dim(g)
        if inner:
            # R I + I R must lie inside I
            merged = echelon_of(list(I.rows[g]) + list(RI.rows[g]))
            if len(merged) != I.dim(g):
                raise ValueError(f"R I + I R is not contained in I at grade {g}")
        count = I.dim(g) - inner
        if count:
            by_grade[g] = count
    return {"total": sum(by_grade.values()), "by_grade": by_grade}


def minimal_generators(I: GradedSubspace) -> list:
    """Elements of I completing a basis of (R I + I R) in each grade."""
    RI = products_with_arrows(I)
    out = []
    for g in I.grades():
        ech = echelon_of(RI.rows.get(g, ()))
        for row, v in zip(I.rows[g], I.vectors(g)):
            if ech.insert(row):
                out.append(v)
    return out


def membership(x, S: GradedSubspace) -> bool:
    """True iff the homogeneous element x lies in S."""
    if not x:
        return True
    try:
        g = element_grade(x)
    except ValueError:
        return False
    if g not in S.bases:
        return False
    rows = S.rows.get(g, ())
    ech = echelon_of(rows)
    return not ech.reduce(to_row(x, S.bases[g]))


def subspace_contains(big: GradedSubspace, small: GradedSubspace) -> bool:
    for g in small.rows:
        ech = echelon_of(big.rows.get(g, ()))
        for r in small.rows[g]:
            if ech.reduce(r):
                return False
    return True
