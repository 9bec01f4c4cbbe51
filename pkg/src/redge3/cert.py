"""Inequality certificate for ``E(v) <= alpha*N1(v) + beta*N(v)``.

Each case of the inductive argument yields one constraint ``a*alpha + b*beta >= c``.
Constraints either come straight from the case analysis or from a table of
reached vertices ``w_i`` with probabilities ``lambda_i`` and lower bounds on
``Delta1(w_i)``, ``Delta(w_i)``; the table rule is ``a = sum(lambda_i*Delta1)``,
``b = sum(lambda_i*Delta)``. Everything is exact.

The catalogue has 27 entries (one coefficient-wise repetition and two implied
entries kept on purpose) plus a separately flagged implied bound
``beta >= 6/13``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

F = Fraction


class Source(str, enum.Enum):
    DIRECT = "direct"
    FROM_TABLE = "from_table"


@dataclass(frozen=True)
class CaseTable:
    case_label: str
    rhs_c: Fraction
    rows: tuple[tuple[Fraction, int, int], ...]  # (lambda, Delta1, Delta)

    def __post_init__(self):
        if not self.rows:
            raise ValueError("a case table needs at least one row")


@dataclass(frozen=True)
class LinearInequality:
    coeff_alpha: Fraction
    coeff_beta: Fraction
    rhs: Fraction
    case_label: str
    source: Source = Source.DIRECT
    tables: tuple[CaseTable, ...] = ()
    implied: bool = False  # flagged: implied by another catalogue entry

    def __post_init__(self):
        if self.coeff_alpha == 0 and self.coeff_beta == 0:
            raise ValueError("inequality needs a nonzero left side")

    def slack(self, alpha: Fraction, beta: Fraction) -> Fraction:
        return self.coeff_alpha * alpha + self.coeff_beta * beta - self.rhs

    def same_coefficients(self, other: "LinearInequality") -> bool:
        return (self.coeff_alpha, self.coeff_beta, self.rhs) == (
            other.coeff_alpha, other.coeff_beta, other.rhs)

    def implies(self, other: "LinearInequality") -> bool:
        """Same left side and a rhs at least as large."""
        return ((self.coeff_alpha, self.coeff_beta) == (other.coeff_alpha, other.coeff_beta)
                and self.rhs >= other.rhs)

    def __str__(self):
        def term(c, name):
            if c == 0:
                return None
            return name if c == 1 else f"{c}*{name}"
        lhs = " + ".join(t for t in (term(self.coeff_alpha, "alpha"),
                                     term(self.coeff_beta, "beta")) if t)
        return f"{lhs} >= {self.rhs}"


@dataclass
class InequalitySystem:
    inequalities: list[LinearInequality]
    extras: list[LinearInequality] = field(default_factory=list)

    def __len__(self):
        return len(self.inequalities)

    def __iter__(self):
        return iter(self.inequalities)

    def by_label(self, label: str) -> LinearInequality:
        for q in self.inequalities + self.extras:
            if q.case_label == label:
                return q
        raise KeyError(label)


@dataclass(frozen=True)
class CertPoint:
    alpha: Fraction
    beta: Fraction


def inequality_from_table(t: CaseTable) -> LinearInequality:
    a = sum((lam * d1 for lam, d1, _ in t.rows), F(0))
    b = sum((lam * d for lam, _, d in t.rows), F(0))
    return LinearInequality(a, b, t.rhs_c, t.case_label, Source.FROM_TABLE, (t,))


# --- catalogue ----------------------------------------------------------------

def _rows(*rows):
    return tuple((F(lam), d1, d) for lam, d1, d in rows)


# (label, rhs, tables or None, direct coefficients or None)
_DIRECT = {
    "1": (F(1), F(1), F(1)),
    "2.a": (F(0), F(1), F(2, 5)),
    "2.b.i": (F(1, 2), F(2), F(1)),
}

_TABLES: list[tuple[str, Fraction, list[tuple]]] = [
    ("2.b.ii-1", F(7, 4), [_rows(("1/2", 0, 3), ("1/8", 0, 4), ("1/8", 0, 5), ("1/4", 0, 4))]),
    ("2.b.ii-2", F(19, 8), [_rows(("5/8", 1, 4), ("1/8", 1, 5), ("1/4", 1, 4))]),
    ("2.b.ii-3", F(5, 2), [_rows(("3/4", 1, 4), ("1/8", 1, 4), ("1/8", 1, 5))]),
    ("2.c.i-1", F(5, 2), [_rows((1, 2, 3))]),
    ("2.c.i-2", F(3, 2), [_rows(("1/2", 1, 2), ("1/2", 1, 3))]),
    ("2.c.ii.1", F(3, 2), [_rows(("1/2", 0, 2), ("1/4", 1, 3), ("1/4", 1, 4))]),
    ("2.c.ii.2-1", F(5, 2), [_rows(("1/4", 0, 3), ("1/2", 1, 5), ("1/4", 1, 5))]),
    ("2.c.ii.2-2", F(5, 2), [_rows(("1/4", 1, 4), ("1/2", 1, 4), ("1/4", 1, 5))]),
    ("2.c.ii.2-3", F(9, 4), [_rows(("1/4", 0, 3), ("1/4", 0, 4), ("1/4", 1, 6), ("1/4", 1, 6))]),
    ("2.c.ii.2-4", F(9, 4), [_rows(("1/4", 0, 3), ("1/4", 1, 5), ("1/4", 1, 5), ("1/4", 1, 6))]),
    ("2.c.ii.2-5", F(9, 4), [_rows(("1/4", 1, 4), ("1/4", 1, 4), ("1/4", 1, 5), ("1/4", 1, 5))]),
    ("2.c.ii.3-1", F(9, 4), [_rows(("1/4", 0, 4), ("1/4", 0, 5), ("1/8", 0, 4), ("1/8", 0, 6),
                                   ("1/4", 0, 5))]),
    ("2.c.ii.3-2", F(11, 4), [_rows(("1/4", 1, 5), ("1/8", 1, 6), ("1/8", 1, 7), ("1/2", 1, 5)),
                              _rows(("1/4", 1, 6), ("1/8", 1, 6), ("1/8", 1, 5), ("1/2", 1, 5))]),
    ("2.c.iii", F(9, 4), [_rows(("3/4", 1, 4), ("1/4", 1, 3))]),
    ("2.c.iii.1-1", F(4), [_rows((1, 3, 5))]),
    ("2.c.iii.1-2", F(3), [_rows(("3/4", 2, 4), ("1/4", 2, 5))]),
    ("2.c.iii.2a", F(9, 4), [_rows(("3/4", 1, 3), ("1/4", 1, 6))]),
    ("2.c.iii.2b-1", F(29, 8), [_rows(("5/8", 2, 5), ("3/8", 2, 6))]),
    ("2.c.iii.2b-2", F(3), [_rows(("1/4", 1, 4), ("3/8", 1, 5), ("3/8", 1, 6))]),
    ("2.c.iii.2c-1", F(4), [_rows(("3/8", 3, 6), ("5/8", 3, 6))]),
    ("2.c.iii.2c-2", F(4), [_rows(("3/16", 2, 6), ("3/16", 2, 7), ("5/8", 2, 6))]),
    ("2.c.iii.2c-3", F(27, 8), [_rows(("1/4", 2, 5), ("3/8", 2, 6), ("3/8", 2, 5))]),
    ("2.c.iii.2c-4", F(27, 8), [_rows(("1/4", 1, 5), ("3/8", 1, 6), ("3/16", 1, 6),
                                      ("3/16", 1, 7))]),
    ("2.c.iii.2c-5", F(61, 16), [_rows(("3/8", 2, 6), ("3/16", 2, 7), ("7/16", 2, 6))]),
]

# coefficients as displayed next to each table; the table rule must reproduce them
DISPLAYED: dict[str, tuple[Fraction, Fraction, Fraction]] = {
    "1": (F(1), F(1), F(1)),
    "2.a": (F(0), F(1), F(2, 5)),
    "2.b.i": (F(1, 2), F(2), F(1)),
    "2.b.ii-1": (F(0), F(29, 8), F(7, 4)),  # shown reduced: beta >= 14/29
    "2.b.ii-2": (F(1), F(33, 8), F(19, 8)),
    "2.b.ii-3": (F(1), F(33, 8), F(5, 2)),
    "2.c.i-1": (F(2), F(3), F(5, 2)),
    "2.c.i-2": (F(1), F(5, 2), F(3, 2)),
    "2.c.ii.1": (F(1, 2), F(11, 4), F(3, 2)),
    "2.c.ii.2-1": (F(3, 4), F(9, 2), F(5, 2)),
    "2.c.ii.2-2": (F(1), F(17, 4), F(5, 2)),
    "2.c.ii.2-3": (F(1, 2), F(19, 4), F(9, 4)),
    "2.c.ii.2-4": (F(3, 4), F(19, 4), F(9, 4)),
    "2.c.ii.2-5": (F(1), F(9, 2), F(9, 4)),
    "2.c.ii.3-1": (F(0), F(19, 4), F(9, 4)),
    "2.c.ii.3-2": (F(1), F(43, 8), F(11, 4)),
    "2.c.iii": (F(1), F(15, 4), F(9, 4)),
    "2.c.iii.1-1": (F(3), F(5), F(4)),
    "2.c.iii.1-2": (F(2), F(17, 4), F(3)),
    "2.c.iii.2a": (F(1), F(15, 4), F(9, 4)),
    "2.c.iii.2b-1": (F(2), F(43, 8), F(29, 8)),
    "2.c.iii.2b-2": (F(1), F(41, 8), F(3)),
    "2.c.iii.2c-1": (F(3), F(6), F(4)),
    "2.c.iii.2c-2": (F(2), F(99, 16), F(4)),
    "2.c.iii.2c-3": (F(2), F(43, 8), F(27, 8)),
    "2.c.iii.2c-4": (F(1), F(95, 16), F(27, 8)),
    "2.c.iii.2c-5": (F(2), F(99, 16), F(61, 16)),
}

IMPLIED = {"2.b.ii-2", "2.c.iii.2c-5"}  # weaker than 2.b.ii-3 and 2.c.iii.2c-2

CATALOGUE_ORDER = ["1", "2.a", "2.b.i"] + [label for label, _, _ in _TABLES]


def builtin_system() -> InequalitySystem:
    """The full catalogue in case order; table entries go through the table rule."""
    out: list[LinearInequality] = []
    for label in CATALOGUE_ORDER[:3]:
        a, b, c = _DIRECT[label]
        out.append(LinearInequality(a, b, c, label))
    for label, rhs, tables in _TABLES:
        derived = [inequality_from_table(CaseTable(label, rhs, rows)) for rows in tables]
        first = derived[0]
        for other in derived[1:]:
            if not other.same_coefficients(first):
                raise AssertionError(f"{label}: alternative tables disagree")
        out.append(LinearInequality(first.coeff_alpha, first.coeff_beta, first.rhs, label,
                                    Source.FROM_TABLE, tuple(d.tables[0] for d in derived),
                                    implied=label in IMPLIED))
    extra = LinearInequality(F(0), F(1), F(6, 13), "2.c.ii-implied", implied=True)
    return InequalitySystem(out, [extra])


# --- evaluation ----------------------------------------------------------------

def is_feasible(s: InequalitySystem, p: CertPoint) -> tuple[bool, list[Fraction]]:
    slacks = [q.slack(p.alpha, p.beta) for q in s.inequalities]
    return all(x >= 0 for x in slacks), slacks


def tight_set(s: InequalitySystem, p: CertPoint) -> list[str]:
    ok, slacks = is_feasible(s, p)
    if not ok:
        raise ValueError("point is infeasible")
    return [q.case_label for q, x in zip(s.inequalities, slacks) if x == 0]


def _meet(l1, l2) -> tuple[Fraction, Fraction] | None:
    (a1, b1, c1), (a2, b2, c2) = l1, l2
    det = a1 * b2 - a2 * b1
    if det == 0:
        return None
    return (c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det


def minimize(s: InequalitySystem, objective: tuple) -> tuple[CertPoint, Fraction]:
    """Exact 2-variable LP over the system plus ``alpha, beta >= 0``.

    Candidates are all pairwise intersections of boundary lines, the axes
    included; the feasible minimizer with lexicographically smallest
    ``(alpha, beta)`` is returned.
    """
    oa, ob = (F(x) for x in objective)
    if oa < 0 or ob < 0 or (oa == 0 and ob == 0):
        raise ValueError("objective must be nonnegative and nonzero")
    lines = [(q.coeff_alpha, q.coeff_beta, q.rhs) for q in s.inequalities]
    lines += [(F(1), F(0), F(0)), (F(0), F(1), F(0))]
    best = None
    for l1, l2 in combinations(lines, 2):
        pt = _meet(l1, l2)
        if pt is None:
            continue
        a, b = pt
        if a < 0 or b < 0 or not all(q.slack(a, b) >= 0 for q in s.inequalities):
            continue
        key = (oa * a + ob * b, a, b)
        if best is None or key < best:
            best = key
    if best is None:
        raise ValueError("no feasible vertex: objective unbounded or system infeasible")
    value, a, b = best
    return CertPoint(a, b), value


def upper_bound(n: int, p: CertPoint, s: InequalitySystem | None = None) -> Fraction:
    """Bound on ``E`` at any vertex of an ``n``-facet instance.

    The top vertex gets ``1 + alpha*(n-3) + beta*(2n-7)`` (the mean over its
    three lower neighbors, whose ``N`` values sum to at most ``6n-21``); every
    other vertex gets ``(alpha + 2*beta)*(n-3)``. The two agree up to
    ``1 - beta``, so the first dominates whenever ``beta <= 1``.
    """
    if n < 4:
        raise ValueError("n >= 4 required")
    ok, _ = is_feasible(s or builtin_system(), p)
    if not ok:
        raise ValueError("point is infeasible")
    top = 1 + p.alpha * (n - 3) + p.beta * (2 * n - 7)
    rest = (p.alpha + 2 * p.beta) * (n - 3)
    return max(top, rest)
