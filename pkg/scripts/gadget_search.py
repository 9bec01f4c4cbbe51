"""Sweep apex closures with a given facet count and list the best start values.

The 12-facet sweep is how the 19-vertex gadget shipped with the package was found:

    python3 scripts/gadget_search.py 12 --lower 12
"""
import argparse
from fractions import Fraction

from redge3.constructions import GadgetSpec
from redge3.graph import serialize_dpg
from redge3.mk import validate_mihalisin_klee
from redge3.sweep import closure_sweep


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("facets", type=int)
    ap.add_argument("--lower", type=Fraction, default=Fraction(0),
                    help="prune closures whose start value is below this")
    ap.add_argument("--top", type=int, default=5)
    ap.add_argument("--dump", action="store_true", help="print the best closure as DPG")
    a = ap.parse_args()
    res = closure_sweep(a.facets, a.lower)
    print("frontier sizes:", " ".join(map(str, res.states)))
    shown = 0
    for value, g in res.candidates:
        if not validate_mihalisin_klee(g).accepted:
            continue
        spec = GadgetSpec.from_closure(g)
        print(f"E(start) = {value}  increment = {spec.expected_increment}  "
              f"internal vertices = {spec.internal_vertex_count}")
        if a.dump and shown == 0:
            print(serialize_dpg(g), end="")
        shown += 1
        if shown == a.top:
            break
    if not shown:
        print("no accepted closure above the lower bound")


if __name__ == "__main__":
    main()
