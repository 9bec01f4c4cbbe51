"""Mihalisin-Klee realizability test for directed 3-polytope graphs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .graph import PolytopeDigraph
from .planar import FaceSet, NonPlanarError, is_three_connected, planar_embedding


@dataclass
class MkReport:
    planar: bool
    three_connected: bool
    acyclic_unique_source_sink: bool
    unique_local_sink_per_face: bool
    three_disjoint_paths: bool
    three_regular: bool
    violating_faces: list[tuple[int, ...]] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)

    @property
    def realizable(self) -> bool:
        return (self.planar and self.three_connected and self.acyclic_unique_source_sink
                and self.unique_local_sink_per_face and self.three_disjoint_paths)

    @property
    def accepted(self) -> bool:
        """Realizable and 3-regular, i.e. the digraph of an LP over a simple 3-polytope."""
        return self.realizable and self.three_regular

    def lines(self) -> list[str]:
        def b(x):
            return "yes" if x else "no"
        out = [
            f"planar: {b(self.planar)}",
            f"three_connected: {b(self.three_connected)}",
            f"acyclic_unique_source_sink: {b(self.acyclic_unique_source_sink)}",
            f"unique_local_sink_per_face: {b(self.unique_local_sink_per_face)}",
            f"three_disjoint_paths: {b(self.three_disjoint_paths)}",
            f"three_regular: {b(self.three_regular)}",
            f"realizable: {b(self.realizable)}",
        ]
        out += [f"violating_face: {' '.join(map(str, f))}" for f in self.violating_faces]
        out += [f"diagnostic: {d}" for d in self.diagnostics]
        return out


def check_unique_source_sink(g: PolytopeDigraph) -> bool:
    sinks = sum(1 for d in g.down if not d)
    sources = sum(1 for u in g.up if not u)
    return sinks == 1 and sources == 1


def face_local_sinks(g: PolytopeDigraph, face) -> list[int]:
    k = len(face)
    return [face[i] for i in range(k)
            if face[i] < face[i - 1] and face[i] < face[(i + 1) % k]]


def check_face_local_sinks(g: PolytopeDigraph, faces: FaceSet) -> list[tuple[int, ...]]:
    """Faces whose cycle does not have exactly one local sink."""
    return [f for f in faces.faces if len(face_local_sinks(g, f)) != 1]


def disjoint_path_count(g: PolytopeDigraph, source: int, sink: int, limit: int = 3) -> int:
    """Max number (capped at ``limit``) of source-sink paths with disjoint interiors.

    Vertex-split max flow: interior vertex ``v`` becomes ``v_in -> v_out`` with
    capacity 1; augmenting paths are found by BFS in index order.
    """
    # node 2v = v_in, 2v+1 = v_out
    cap: dict[tuple[int, int], int] = {}
    adj: dict[int, list[int]] = {}

    def arc(a, b, c):
        if (a, b) not in cap:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
            cap[(b, a)] = cap.get((b, a), 0)
        cap[(a, b)] = cap.get((a, b), 0) + c

    big = limit + 1
    for v in range(g.vertex_count):
        arc(2 * v, 2 * v + 1, big if v in (source, sink) else 1)
        for w in sorted(g.down[v], reverse=True):
            arc(2 * v + 1, 2 * w, 1)
    s, t = 2 * source + 1, 2 * sink
    flow = 0
    while flow < limit:
        prev = {s: None}
        q = deque([s])
        while q and t not in prev:
            a = q.popleft()
            for b in adj.get(a, ()):
                if b not in prev and cap[(a, b)] > 0:
                    prev[b] = a
                    q.append(b)
        if t not in prev:
            break
        b = t
        while prev[b] is not None:
            a = prev[b]
            cap[(a, b)] -= 1
            cap[(b, a)] += 1
            b = a
        flow += 1
    return flow


def check_three_disjoint_paths(g: PolytopeDigraph) -> bool:
    sinks = [v for v in range(g.vertex_count) if not g.down[v]]
    sources = [v for v in range(g.vertex_count) if not g.up[v]]
    if len(sinks) != 1 or len(sources) != 1:
        return False
    return disjoint_path_count(g, sources[0], sinks[0]) >= 3


def validate_mihalisin_klee(g: PolytopeDigraph) -> MkReport:
    """Run every condition; never short-circuits."""
    diagnostics = []
    regular = all(g.degree(v) == 3 for v in range(g.vertex_count))
    if not regular:
        diagnostics.append("not 3-regular: not the graph of a simple 3-polytope")
    try:
        faces = planar_embedding(g)
        planar = True
    except NonPlanarError as exc:
        faces = None
        planar = False
        diagnostics.append(f"non-planar: Kuratowski witness edges {exc.witness}")
    connected3 = is_three_connected(g)
    if faces is not None:
        violating = check_face_local_sinks(g, faces)
    else:
        violating = []
        diagnostics.append("face condition not evaluated (no planar embedding)")
    return MkReport(
        planar=planar,
        three_connected=connected3,
        acyclic_unique_source_sink=check_unique_source_sink(g),
        unique_local_sink_per_face=faces is not None and not violating,
        three_disjoint_paths=check_three_disjoint_paths(g),
        three_regular=regular,
        violating_faces=violating,
        diagnostics=diagnostics,
    )
