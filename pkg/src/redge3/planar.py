"""Planar embeddings, face sets and 3-connectivity of polytope graphs.

Rotation systems map each vertex to the cyclic order of its neighbors. Faces
are traced with the rule: the dart after ``(u, v)`` is ``(v, pred_v(u))``,
where ``pred_v`` is the predecessor in ``v``'s rotation.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping, Sequence

import networkx as nx

from .graph import PolytopeDigraph, undirected_edges

Rotation = Mapping[int, Sequence[int]]


class NonPlanarError(ValueError):
    """Raised for non-planar input; ``witness`` is a Kuratowski subgraph edge list."""

    def __init__(self, witness: list[tuple[int, int]]):
        self.witness = witness
        super().__init__(f"graph is not planar (Kuratowski witness with {len(witness)} edges)")


@dataclass(frozen=True)
class FaceSet:
    faces: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.faces)

    def edge_face_counts(self) -> dict[frozenset[int], int]:
        counts: dict[frozenset[int], int] = {}
        for f in self.faces:
            for i, a in enumerate(f):
                e = frozenset((a, f[(i + 1) % len(f)]))
                counts[e] = counts.get(e, 0) + 1
        return counts


def _normalize_face(face: Sequence[int]) -> tuple[int, ...]:
    i = face.index(min(face))
    fwd = tuple(face[i:]) + tuple(face[:i])
    rev = (fwd[0],) + tuple(reversed(fwd[1:]))
    return min(fwd, rev)


def canonical_faces(faces) -> FaceSet:
    return FaceSet(tuple(sorted(_normalize_face(f) for f in faces)))


def trace_faces(rot: Rotation) -> list[list[int]]:
    pos = {v: {w: i for i, w in enumerate(nbrs)} for v, nbrs in rot.items()}
    seen: set[tuple[int, int]] = set()
    faces = []
    for u in rot:
        for v in rot[u]:
            if (u, v) in seen:
                continue
            face = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                face.append(a)
                nb = rot[b]
                a, b = b, nb[pos[b][a] - 1]
            faces.append(face)
    return faces


def adjacency(g: PolytopeDigraph) -> dict[int, list[int]]:
    return {v: sorted(g.neighbors[v]) for v in range(g.vertex_count)}


def rotation_system(adj: Mapping[int, Sequence[int]]) -> dict[int, list[int]]:
    """A planar rotation system for ``adj``; raises :class:`NonPlanarError`."""
    G = nx.Graph()
    G.add_nodes_from(adj)
    G.add_edges_from((u, v) for u in adj for v in adj[u])
    planar, emb = nx.check_planarity(G, counterexample=True)
    if not planar:
        raise NonPlanarError(sorted(tuple(sorted(e)) for e in emb.edges()))
    return {v: list(nbrs) for v, nbrs in emb.get_data().items()}


def is_planar_rotation(rot: Rotation) -> bool:
    V = len(rot)
    E = sum(len(n) for n in rot.values()) // 2
    return V - E + len(trace_faces(rot)) == 2


def planar_embedding(g: PolytopeDigraph) -> FaceSet:
    """Faces of the planar embedding, in reflection-independent canonical form.

    A stored ``embed`` rotation is used when it is a valid planar rotation of
    the graph; otherwise the embedding is computed.
    """
    adj = adjacency(g)
    rot = None
    if g.embedding is not None:
        cand = {v: list(g.embedding[v]) for v in range(g.vertex_count)}
        if all(sorted(cand[v]) == adj[v] for v in adj) and is_planar_rotation(cand):
            rot = cand
    if rot is None:
        rot = rotation_system(adj)
    return canonical_faces(trace_faces(rot))


# --- connectivity ------------------------------------------------------------

def _biconnected_without(adj: Mapping[int, Sequence[int]], removed: int) -> bool:
    """True iff ``adj`` minus ``removed`` is connected and has no cut vertex."""
    verts = [v for v in adj if v != removed]
    if len(verts) <= 2:
        return len(verts) < 2 or verts[1] in adj[verts[0]]
    root = verts[0]
    disc = {root: 0}
    low = {root: 0}
    parent = {root: None}
    root_children = 0
    t = 1
    stack = [(root, iter(adj[root]))]
    while stack:
        v, it = stack[-1]
        advanced = False
        for w in it:
            if w == removed:
                continue
            if w not in disc:
                disc[w] = low[w] = t
                t += 1
                parent[w] = v
                if v == root:
                    root_children += 1
                stack.append((w, iter(adj[w])))
                advanced = True
                break
            if w != parent[v]:
                low[v] = min(low[v], disc[w])
        if advanced:
            continue
        stack.pop()
        p = parent[v]
        if p is not None:
            low[p] = min(low[p], low[v])
            if p != root and low[v] >= disc[p]:
                return False
    return len(disc) == len(verts) and root_children == 1


def _connected_without_edges(adj: Mapping[int, Sequence[int]], cut: set[frozenset]) -> bool:
    root = next(iter(adj))
    seen = {root}
    stack = [root]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen and frozenset((v, w)) not in cut:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(adj)


def _cubic_edge_cut_free(adj: Mapping[int, Sequence[int]]) -> bool | None:
    """No edge cut of size <= 2 in a connected simple cubic graph; ``None`` if undecided.

    Each non-tree edge of a DFS tree gets a random label and each tree edge the
    XOR of the labels of the non-tree edges crossing it. Two edges form a cut
    iff their crossing sets coincide, so equal labels are necessary; every
    candidate is confirmed by an explicit search, and a label collision that
    is not a cut returns ``None``.
    """
    rng = random.Random(0x3C0)
    root = next(iter(adj))
    parent = {root: None}
    order = [root]
    stack = [root]
    while stack:
        v = stack[-1]
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                order.append(w)
                stack.append(w)
                break
        else:
            stack.pop()
    if len(order) != len(adj):
        return False
    acc = dict.fromkeys(adj, 0)
    groups: dict[int, list[frozenset]] = defaultdict(list)
    for v in adj:
        for w in adj[v]:
            if v < w and parent[v] != w and parent[w] != v:
                x = rng.getrandbits(64)
                acc[v] ^= x
                acc[w] ^= x
                groups[x].append(frozenset((v, w)))
    for v in reversed(order[1:]):
        groups[acc[v]].append(frozenset((v, parent[v])))
        acc[parent[v]] ^= acc[v]
    for x, edges in groups.items():
        if x == 0 or len(edges) > 1:
            for i, e in enumerate(edges):
                if x == 0 and not _connected_without_edges(adj, {e}):
                    return False
                for f in edges[i + 1:]:
                    if not _connected_without_edges(adj, {e, f}):
                        return False
            return None
    return True


def is_three_connected_adj(adj: Mapping[int, Sequence[int]]) -> bool:
    if len(adj) < 4:
        return False
    simple_cubic = all(len(set(n)) == len(n) == 3 and v not in n for v, n in adj.items())
    if simple_cubic:
        # vertex and edge connectivity agree on cubic graphs
        fast = _cubic_edge_cut_free(adj)
        if fast is not None:
            return fast
    return all(_biconnected_without(adj, x) for x in adj)


def is_three_connected(g: PolytopeDigraph) -> bool:
    """True iff the underlying undirected graph has >= 4 vertices and no vertex cut of size <= 2."""
    return is_three_connected_adj(adjacency(g))


# --- canonical codes for plane graphs ----------------------------------------

def _code_from(rot: Rotation, u0: int, v0: int, best: list[int] | None) -> list[int] | None:
    num = {u0: 1}
    first = {u0: v0}
    order = [u0]
    code: list[int] = []
    nxt = 2
    for x in order:
        nbrs = rot[x]
        k = nbrs.index(first[x])
        for i in range(len(nbrs)):
            y = nbrs[(k + i) % len(nbrs)]
            if y not in num:
                num[y] = nxt
                nxt += 1
                first[y] = x
                order.append(y)
            code.append(num[y])
        code.append(0)
        if best is not None:
            n = len(code)
            pref = best[:n]
            if code > pref:
                return None
            if code < pref:
                best = None
    return code


def canonical_code(rot: Rotation) -> tuple[int, ...]:
    """Embedding code minimized over all darts and both orientations.

    For 3-connected planar graphs the embedding is unique up to reflection, so
    equal codes mean isomorphic graphs.
    """
    mirror = {v: list(reversed(n)) for v, n in rot.items()}
    best: list[int] | None = None
    for r in (rot, mirror):
        for u in r:
            for v in r[u]:
                c = _code_from(r, u, v, best)
                if c is not None and (best is None or c < best):
                    best = c
    return tuple(best or ())
