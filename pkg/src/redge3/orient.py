"""Backtracking enumeration of face-admissible acyclic orientations.

An orientation is admissible here when it is acyclic, has at most one global
source and one global sink, and every face cycle has exactly one local sink
(equivalently one local source). Partial assignments are pruned as soon as a
cycle closes or a second sink/source appears on the graph or any face.
"""

from __future__ import annotations

from typing import Iterator, Mapping, Sequence


def _edge_order(edges: list[tuple[int, int]], faces: Sequence[Sequence[int]]) -> list[int]:
    """Edges grouped face by face, so that faces close early."""
    index = {frozenset(e): i for i, e in enumerate(edges)}
    order: list[int] = []
    seen: set[int] = set()
    remaining = [list(f) for f in faces]
    while remaining:
        # next face: the one with the most already-ordered edges
        best = max(range(len(remaining)), key=lambda k: (
            sum(index[frozenset((f[i], f[(i + 1) % len(f)]))] in seen
                for f in [remaining[k]] for i in range(len(f))), -len(remaining[k]), -k))
        f = remaining.pop(best)
        for i in range(len(f)):
            e = index[frozenset((f[i], f[(i + 1) % len(f)]))]
            if e not in seen:
                seen.add(e)
                order.append(e)
    for e in range(len(edges)):
        if e not in seen:
            order.append(e)
    return order


def face_orientations(adj: Mapping[int, Sequence[int]], faces: Sequence[Sequence[int]],
                      fixed: Mapping[tuple[int, int], bool] | None = None,
                      prefix: Sequence[bool] | None = None) -> Iterator[list[tuple[int, ...]]]:
    """Yield admissible orientations of the graph ``adj`` (vertices ``0..V-1``).

    Each orientation is given as per-vertex tuples of lower neighbors.
    ``fixed`` maps ``(hi, lo)`` pairs to ``True`` to force those edge
    directions. ``prefix`` forces the directions of the first edges in search
    order (``True`` meaning lower-label endpoint is higher); it defines
    independent work blocks.
    """
    V = len(adj)
    edges = sorted({(min(u, w), max(u, w)) for u in adj for w in adj[u]})
    order = _edge_order(edges, faces)
    E = len(edges)
    # per edge: list of (face_id, vertex, other_edge_at_vertex_on_face)
    eid = {frozenset(e): i for i, e in enumerate(edges)}
    incid: list[list[tuple[int, int, int]]] = [[] for _ in range(E)]
    for fi, f in enumerate(faces):
        k = len(f)
        for i in range(k):
            v = f[i]
            e_prev = eid[frozenset((f[i - 1], v))]
            e_next = eid[frozenset((v, f[(i + 1) % k]))]
            incid[e_prev].append((fi, v, e_next))
            incid[e_next].append((fi, v, e_prev))
    deg = [len(adj[v]) for v in range(V)]

    forced: list[int | None] = [None] * E
    for (hi, lo), _ in (fixed or {}).items():
        e = eid[frozenset((hi, lo))]
        forced[e] = hi  # the higher endpoint
    if prefix:
        for pos, flag in enumerate(prefix):
            e = order[pos]
            a, b = edges[e]
            want = a if flag else b
            if forced[e] is not None and forced[e] != want:
                return
            forced[e] = want

    high: list[int] = [-1] * E  # chosen higher endpoint per edge
    desc = [0] * V  # bitmask of vertices strictly below
    ndown = [0] * V
    nup = [0] * V
    fsink = [0] * len(faces)
    fsrc = [0] * len(faces)
    counts = [0, 0]  # global sinks, sources

    def points_into(e: int, v: int) -> bool:
        return high[e] != v

    def assign(e: int, hi: int) -> list | None:
        a, b = edges[e]
        lo = b if hi == a else a
        if desc[lo] >> hi & 1:
            return None
        undo_desc = []
        add = desc[lo] | (1 << lo)
        hb = 1 << hi
        for x in range(V):
            if x == hi or desc[x] & hb:
                if desc[x] | add != desc[x]:
                    undo_desc.append((x, desc[x]))
                    desc[x] |= add
        high[e] = hi
        ndown[hi] += 1
        nup[lo] += 1
        undo_f = []
        ok = True
        for v in (hi, lo):
            if ndown[v] + nup[v] == deg[v]:
                if ndown[v] == 0:
                    counts[0] += 1
                    undo_f.append(("s", None))
                    if counts[0] > 1:
                        ok = False
                elif nup[v] == 0:
                    counts[1] += 1
                    undo_f.append(("t", None))
                    if counts[1] > 1:
                        ok = False
        for fi, v, other in incid[e]:
            if high[other] < 0:
                continue
            into_e = high[e] != v
            into_o = high[other] != v
            if into_e and into_o:
                fsink[fi] += 1
                undo_f.append(("k", fi))
                if fsink[fi] > 1:
                    ok = False
            elif not into_e and not into_o:
                fsrc[fi] += 1
                undo_f.append(("r", fi))
                if fsrc[fi] > 1:
                    ok = False
        return [e, hi, lo, undo_desc, undo_f, ok]

    def unassign(rec) -> None:
        e, hi, lo, undo_desc, undo_f, _ = rec
        for x, old in undo_desc:
            desc[x] = old
        high[e] = -1
        ndown[hi] -= 1
        nup[lo] -= 1
        for kind, fi in undo_f:
            if kind == "s":
                counts[0] -= 1
            elif kind == "t":
                counts[1] -= 1
            elif kind == "k":
                fsink[fi] -= 1
            else:
                fsrc[fi] -= 1

    def emit():
        down: list[list[int]] = [[] for _ in range(V)]
        for e, (a, b) in enumerate(edges):
            hi = high[e]
            down[hi].append(b if hi == a else a)
        return [tuple(sorted(d, reverse=True)) for d in down]

    def rec(depth: int):
        if depth == E:
            yield emit()
            return
        e = order[depth]
        a, b = edges[e]
        choices = (a, b) if forced[e] is None else (forced[e],)
        for hi in choices:
            r = assign(e, hi)
            if r is None:
                continue
            if r[5]:
                yield from rec(depth + 1)
            unassign(r)

    yield from rec(0)


def search_order_edges(adj: Mapping[int, Sequence[int]], faces) -> list[tuple[int, int]]:
    """Edges in the order the search assigns them (for naming prefix blocks)."""
    edges = sorted({(min(u, w), max(u, w)) for u in adj for w in adj[u]})
    return [edges[e] for e in _edge_order(edges, faces)]
