"""Exhaustive computation of f(n) for small facet counts.

Graphs: every 3-connected cubic planar graph with ``2n - 4`` vertices is
produced from the tetrahedron by inserting an edge across a face between two
distinct boundary edges; isomorphic copies are rejected by canonical embedding
codes. Orientations: all face-admissible orientations (see :mod:`.orient`)
that also admit three interior-disjoint source-sink paths.
"""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .engine import expected_steps
from .graph import PolytopeDigraph, parse_dpg, serialize_dpg
from .mk import disjoint_path_count
from .orient import face_orientations
from .planar import canonical_code, trace_faces

log = logging.getLogger(__name__)

CENSUS = {4: 1, 5: 1, 6: 2, 7: 5, 8: 14, 9: 50, 10: 233}
DEFAULT_CAP = 10
PREFIX_EDGES = 3

Rotation = dict[int, list[int]]

TETRAHEDRON: Rotation = {0: [1, 2, 3], 1: [0, 3, 2], 2: [0, 1, 3], 3: [0, 2, 1]}


class CapExceeded(ValueError):
    pass


def insert_edge(rot: Rotation, dart1: tuple[int, int], dart2: tuple[int, int]) -> Rotation:
    """Subdivide the face darts ``a->b`` and ``c->d`` and join the new vertices."""
    (a, b), (c, d) = dart1, dart2
    x, y = len(rot), len(rot) + 1
    new = {v: list(n) for v, n in rot.items()}

    def swap(v, old, repl):
        lst = new[v]
        lst[lst.index(old)] = repl

    swap(a, b, x)
    swap(b, a, x)
    swap(c, d, y)
    swap(d, c, y)
    new[x] = [b, y, a]
    new[y] = [d, x, c]
    return new


def children(rot: Rotation) -> Iterator[Rotation]:
    for face in trace_faces(rot):
        k = len(face)
        darts = [(face[i], face[(i + 1) % k]) for i in range(k)]
        for i in range(k):
            for j in range(i + 1, k):
                yield insert_edge(rot, darts[i], darts[j])


def generate_cubic_planar_3connected(n_facets: int, cap: int = DEFAULT_CAP) -> list[Rotation]:
    """One rotation system per isomorphism class, in canonical-code order."""
    if n_facets < 4:
        raise ValueError("a 3-polytope has at least 4 facets")
    if n_facets > cap:
        raise CapExceeded(f"n={n_facets} exceeds cap {cap}")
    level = [TETRAHEDRON]
    for _ in range(4, n_facets):
        found: dict[tuple[int, ...], Rotation] = {}
        for rot in level:
            for child in children(rot):
                code = canonical_code(child)
                if code not in found:
                    found[code] = child
        level = [found[c] for c in sorted(found)]
    return level


def graph_faces(rot: Rotation) -> list[list[int]]:
    return trace_faces(rot)


# --- orientations ------------------------------------------------------------

def _topological_order(down: list[tuple[int, ...]]) -> list[int]:
    """Bottom-up order; among available vertices the smallest label goes first."""
    import heapq
    V = len(down)
    up: list[list[int]] = [[] for _ in range(V)]
    need = [len(d) for d in down]
    for v, d in enumerate(down):
        for w in d:
            up[w].append(v)
    heap = [v for v in range(V) if need[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for u in up[v]:
            need[u] -= 1
            if need[u] == 0:
                heapq.heappush(heap, u)
    return order


def to_digraph(down: list[tuple[int, ...]], n_facets: int,
               rot: Rotation | None = None) -> PolytopeDigraph:
    order = _topological_order(down)
    pos = {old: new for new, old in enumerate(order)}
    new_down = [sorted((pos[w] for w in down[old]), reverse=True) for old in order]
    embedding = None
    if rot is not None:
        embedding = [[pos[w] for w in rot[old]] for old in order]
    return PolytopeDigraph.from_down_lists(new_down, n_facets, embedding)


def admissible_orientations(rot: Rotation, n_facets: int | None = None,
                            prefix=None) -> Iterator[PolytopeDigraph]:
    """All Mihalisin-Klee admissible orientations of a 3-connected cubic plane graph."""
    V = len(rot)
    n = (V + 4) // 2 if n_facets is None else n_facets
    faces = trace_faces(rot)
    for down in face_orientations(rot, faces, prefix=prefix):
        counts = [0, 0, 0, 0]
        for d in down:
            counts[len(d)] += 1
        if counts[1] != n - 3 or counts[2] != n - 3:
            continue
        g = to_digraph(down, n, rot)
        if disjoint_path_count(g, g.top, 0) < 3:
            continue
        yield g


# --- f(n) --------------------------------------------------------------------

@dataclass
class EnumerationResult:
    n_facets: int
    f_value: Fraction
    witness: PolytopeDigraph
    witness_start: int
    graphs_examined: int
    orientations_admissible: int
    wall_time: float

    def lines(self) -> list[str]:
        from .engine import render
        return [
            f"n_facets: {self.n_facets}",
            f"f_value: {self.f_value}",
            f"f_decimal: {render(self.f_value)}",
            f"witness_start: {self.witness_start}",
            f"graphs_examined: {self.graphs_examined}",
            f"orientations_admissible: {self.orientations_admissible}",
        ]


@dataclass
class UnitResult:
    graph: int
    block: int
    count: int
    best: Fraction | None
    seq: int
    start: int
    witness: str  # DPG text


def _run_unit(args) -> UnitResult:
    n, gi, block, rot = args
    prefix = [bool(block >> i & 1) for i in range(PREFIX_EDGES)]
    best, best_seq, best_start, best_g = None, -1, -1, None
    count = 0
    for seq, g in enumerate(admissible_orientations(rot, n, prefix=prefix)):
        count += 1
        E = expected_steps(g)
        m = max(E)
        if best is None or m > best:
            best, best_seq, best_g = m, seq, g
            best_start = E.index(m)
    return UnitResult(gi, block, count, best, best_seq, best_start,
                      serialize_dpg(best_g) if best_g is not None else "")


CHECKPOINT_HEADER = "redge3-enumeration-checkpoint 1"


def _read_checkpoint(path: str, n: int) -> dict[tuple[int, int], UnitResult]:
    done: dict[tuple[int, int], UnitResult] = {}
    if not path or not os.path.exists(path):
        return done
    with open(path) as fh:
        text = fh.read()
    lines = text.split("\n")
    if not lines or lines[0] != CHECKPOINT_HEADER or lines[1] != f"facets {n}":
        raise ValueError(f"{path}: not a checkpoint for n={n}")
    for line in lines[2:]:
        if not line.startswith("unit "):
            continue
        parts = line.split(" ", 8)
        _, gi, block, count, best, seq, start, _, wit = parts
        done[(int(gi), int(block))] = UnitResult(
            int(gi), int(block), int(count),
            None if best == "-" else Fraction(best), int(seq), int(start),
            wit.replace("|", "\n"))
    return done


def _append_checkpoint(path: str, u: UnitResult) -> None:
    best = "-" if u.best is None else str(u.best)
    wit = u.witness.replace("\n", "|")
    with open(path, "a") as fh:
        fh.write(f"unit {u.graph} {u.block} {u.count} {best} {u.seq} {u.start} witness {wit}\n")


def compute_f(n_facets: int, jobs: int = 1, checkpoint: str | None = None,
              cap: int = DEFAULT_CAP, max_units: int | None = None) -> EnumerationResult:
    """Maximize E over every admissible digraph with ``n_facets`` facets and every start.

    Work units are ``(graph, block)`` pairs where the block fixes the first
    ``PREFIX_EDGES`` edge directions. The reduction keeps the largest value and
    breaks ties by ``(graph, block, sequence)``, so the witness does not depend
    on ``jobs``. ``max_units`` stops early (to exercise checkpoint resume).
    """
    t0 = time.monotonic()
    graphs = generate_cubic_planar_3connected(n_facets, cap)
    units = [(n_facets, gi, b, rot) for gi, rot in enumerate(graphs)
             for b in range(2 ** PREFIX_EDGES)]
    done = _read_checkpoint(checkpoint, n_facets) if checkpoint else {}
    if checkpoint and not os.path.exists(checkpoint):
        with open(checkpoint, "w") as fh:
            fh.write(f"{CHECKPOINT_HEADER}\nfacets {n_facets}\n")
    todo = [u for u in units if (u[1], u[2]) not in done]
    if max_units is not None:
        todo = todo[:max_units]
    results = dict(done)

    def record(r: UnitResult):
        results[(r.graph, r.block)] = r
        if checkpoint:
            _append_checkpoint(checkpoint, r)

    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            for r in ex.map(_run_unit, todo, chunksize=1):
                record(r)
    else:
        for u in todo:
            record(_run_unit(u))
    if len(results) < len(units):
        raise RuntimeError(f"incomplete: {len(results)}/{len(units)} units done")
    best_key = None
    best = None
    for key in sorted(results):
        r = results[key]
        if r.best is not None and (best is None or r.best > best.best):
            best, best_key = r, key
    total = sum(r.count for r in results.values())
    return EnumerationResult(
        n_facets, best.best, parse_dpg(best.witness), best.start,
        len(graphs), total, time.monotonic() - t0)
