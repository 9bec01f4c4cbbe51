"""Lower construction vs certificate upper bound, as exact rationals and per-facet slopes.

    python3 scripts/sandwich_table.py 12 22 102 1002 10002
"""
import argparse
from fractions import Fraction

from redge3.cert import CertPoint, upper_bound
from redge3.constructions import Family, closed_form_expectation
from redge3.engine import render

OPT = CertPoint(Fraction(46, 87), Fraction(42, 87))


def lower(n: int) -> tuple[str, Fraction]:
    cands = [("dual-cyclic", closed_form_expectation(Family.DUAL_CYCLIC, n))]
    if (n - 2) % 4 == 0 and n >= 10:
        cands.append(("example2", closed_form_expectation(Family.EXAMPLE2, (n - 2) // 4)))
    if (n - 2) % 10 == 0:
        cands.append(("example3", closed_form_expectation(Family.EXAMPLE3, (n - 2) // 10)))
    return max(cands, key=lambda c: c[1])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("n", type=int, nargs="+")
    a = ap.parse_args()
    print("n family lower lower/n upper upper/n")
    for n in a.n:
        fam, lo = lower(n)
        up = upper_bound(n, OPT)
        print(n, fam, lo, render(lo / n, 4), up, render(up / n, 4))


if __name__ == "__main__":
    main()
