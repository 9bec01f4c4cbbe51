"""Exhaustive f(n) for a range of facet counts, with per-n checkpoints.

    python3 scripts/run_enumeration.py 4 9 --jobs 8 --checkpoint-dir /tmp/ck
"""
import argparse
import os
from fractions import Fraction

from redge3.cert import CertPoint, upper_bound
from redge3.engine import render
from redge3.enumeration import compute_f

OPT = CertPoint(Fraction(46, 87), Fraction(42, 87))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("lo", type=int)
    ap.add_argument("hi", type=int)
    ap.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--checkpoint-dir")
    a = ap.parse_args()
    print("n f f_decimal graphs orientations bound seconds")
    for n in range(a.lo, a.hi + 1):
        ck = os.path.join(a.checkpoint_dir, f"f{n}.ck") if a.checkpoint_dir else None
        r = compute_f(n, jobs=a.jobs, checkpoint=ck)
        print(n, r.f_value, render(r.f_value), r.graphs_examined, r.orientations_admissible,
              upper_bound(n, OPT), f"{r.wall_time:.1f}", flush=True)


if __name__ == "__main__":
    main()
