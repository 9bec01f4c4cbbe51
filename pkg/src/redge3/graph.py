"""Height-ordered directed graphs of simple 3-polytopes.

Vertex ``i`` is the ``i``-th lowest vertex: index 0 is the global minimum and
index ``V - 1`` the global maximum. Every edge is stored once, in the
down-neighbor list of its higher endpoint, so acyclicity holds by construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence


class DPGError(ValueError):
    """Malformed DPG text; ``line`` is 1-based (0 when not tied to a line)."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class PolytopeDigraph:
    vertex_count: int
    facet_count: int
    down: tuple[tuple[int, ...], ...]
    embedding: tuple[tuple[int, ...], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.down) != self.vertex_count:
            raise ValueError(
                f"expected {self.vertex_count} down-lists, got {len(self.down)}")
        for v, nbrs in enumerate(self.down):
            if len(set(nbrs)) != len(nbrs):
                raise ValueError(f"vertex {v}: duplicate down-neighbor")
            for w in nbrs:
                if not 0 <= w < v:
                    raise ValueError(f"vertex {v}: neighbor index {w} not lower")
        if self.embedding is not None and len(self.embedding) != self.vertex_count:
            raise ValueError("embedding must list every vertex")

    @classmethod
    def from_down_lists(cls, down: Sequence[Iterable[int]], facet_count: int | None = None,
                        embedding=None) -> "PolytopeDigraph":
        """Build from per-vertex down-lists; ``facet_count`` defaults to (V + 4) / 2."""
        down = tuple(tuple(d) for d in down)
        if facet_count is None:
            facet_count = (len(down) + 4) // 2
        if embedding is not None:
            embedding = tuple(tuple(e) for e in embedding)
        return cls(len(down), facet_count, down, embedding)

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[tuple[int, int]],
                   facet_count: int | None = None) -> "PolytopeDigraph":
        """Build from ``(higher, lower)`` pairs."""
        down: list[list[int]] = [[] for _ in range(vertex_count)]
        for hi, lo in edges:
            down[hi].append(lo)
        return cls.from_down_lists([sorted(d, reverse=True) for d in down], facet_count)

    @cached_property
    def up(self) -> tuple[tuple[int, ...], ...]:
        ups: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for v, nbrs in enumerate(self.down):
            for w in nbrs:
                ups[w].append(v)
        return tuple(tuple(sorted(u)) for u in ups)

    @cached_property
    def neighbors(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(self.down[v]) | frozenset(self.up[v])
                     for v in range(self.vertex_count))

    def down_degree(self, v: int) -> int:
        return len(self.down[v])

    def degree(self, v: int) -> int:
        return len(self.down[v]) + len(self.up[v])

    def edges(self) -> list[tuple[int, int]]:
        """Directed edges ``(higher, lower)`` in DPG file order."""
        return [(v, w) for v in range(self.vertex_count)
                for w in sorted(self.down[v], reverse=True)]

    @property
    def edge_count(self) -> int:
        return sum(len(d) for d in self.down)

    @property
    def top(self) -> int:
        return self.vertex_count - 1

    def relabel(self, order: Sequence[int], facet_count: int | None = None) -> "PolytopeDigraph":
        """Reindex so that ``order[i]`` becomes vertex ``i``; ``order`` must be topological."""
        pos = {old: new for new, old in enumerate(order)}
        down = [[] for _ in order]
        for v in range(self.vertex_count):
            for w in self.down[v]:
                down[pos[v]].append(pos[w])
        embedding = None
        if self.embedding is not None:
            embedding = [None] * len(order)
            for old, cyc in enumerate(self.embedding):
                embedding[pos[old]] = [pos[w] for w in cyc]
        return PolytopeDigraph.from_down_lists(
            [sorted(d, reverse=True) for d in down],
            self.facet_count if facet_count is None else facet_count, embedding)


# --- DPG v1 text format ------------------------------------------------------

_INT = re.compile(r"^\d+$")


def _ints(tokens: list[str], lineno: int) -> list[int]:
    for t in tokens:
        if not _INT.match(t):
            raise DPGError(f"malformed index {t!r}", lineno)
    return [int(t) for t in tokens]


def parse_dpg(text: str) -> PolytopeDigraph:
    """Parse DPG v1 text. Structure only; no polytope validation happens here."""
    header_seen = False
    counts: tuple[int, int] | None = None
    down: dict[int, list[int]] = {}
    embed: dict[int, list[int]] = {}
    last = 0
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not header_seen:
            if line.split() != ["DPG", "1"]:
                raise DPGError("expected header 'DPG 1'", lineno)
            header_seen = True
            continue
        if counts is None:
            parts = line.split()
            if len(parts) != 4 or parts[0] != "vertices" or parts[2] != "facets":
                raise DPGError("expected 'vertices <V> facets <n>'", lineno)
            v_count, n_count = _ints([parts[1], parts[3]], lineno)
            counts = (v_count, n_count)
            continue
        if ":" not in line:
            raise DPGError("malformed line (missing ':')", lineno)
        head, rest = line.split(":", 1)
        head_tokens = head.split()
        is_embed = len(head_tokens) == 2 and head_tokens[0] == "embed"
        if not (len(head_tokens) == 1 or is_embed):
            raise DPGError("malformed line", lineno)
        (i,) = _ints(head_tokens[-1:], lineno)
        nbrs = _ints(rest.split(), lineno)
        if not 0 <= i < counts[0]:
            raise DPGError(f"vertex index {i} out of range", lineno)
        for j in nbrs:
            if not 0 <= j < counts[0]:
                raise DPGError(f"neighbor index {j} out of range", lineno)
        if len(set(nbrs)) != len(nbrs):
            raise DPGError("duplicate neighbor", lineno)
        if is_embed:
            if i in embed:
                raise DPGError(f"duplicate embed line for vertex {i}", lineno)
            embed[i] = nbrs
            continue
        if i == 0:
            raise DPGError("vertex 0 has no down-neighbor line", lineno)
        if i <= last:
            raise DPGError("vertex lines must appear once, in increasing order", lineno)
        last = i
        for j in nbrs:
            if j >= i:
                raise DPGError(f"neighbor index not lower ({j} >= {i})", lineno)
        down[i] = nbrs
    if counts is None:
        raise DPGError("missing header" if not header_seen else "missing counts line")
    v_count, n_count = counts
    embedding = None
    if embed:
        if len(embed) != v_count:
            raise DPGError("embedding must cover every vertex")
        embedding = [embed[v] for v in range(v_count)]
    return PolytopeDigraph.from_down_lists(
        [down.get(v, []) for v in range(v_count)], n_count, embedding)


def read_annotations(text: str) -> dict[str, str]:
    """Collect ``# key: value`` comment annotations (e.g. ``# start: 15``)."""
    out = {}
    for raw in text.split("\n"):
        m = re.match(r"^\s*#\s*([A-Za-z_][\w-]*)\s*:\s*(.*?)\s*$", raw)
        if m:
            out[m.group(1)] = m.group(2)
    return out


def serialize_dpg(g: PolytopeDigraph, annotations: dict[str, object] | None = None) -> str:
    lines = [f"# {k}: {v}" for k, v in (annotations or {}).items()]
    lines.append("DPG 1")
    lines.append(f"vertices {g.vertex_count} facets {g.facet_count}")
    for v in range(1, g.vertex_count):
        nbrs = " ".join(str(w) for w in sorted(g.down[v], reverse=True))
        lines.append(f"{v}: {nbrs}".rstrip())
    if g.embedding is not None:
        for v, cyc in enumerate(g.embedding):
            lines.append(f"embed {v}: " + " ".join(map(str, cyc)))
    return "\n".join(lines) + "\n"


# --- structural validation ---------------------------------------------------

@dataclass
class ValidationReport:
    checks: list[tuple[str, bool, str]]

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def failures(self) -> list[str]:
        return [f"{name}: {detail}" for name, ok, detail in self.checks if not ok]

    def __bool__(self):
        return self.ok


def down_degree_counts(g: PolytopeDigraph) -> list[int]:
    counts = [0, 0, 0, 0]
    for d in g.down:
        if len(d) < 4:
            counts[len(d)] += 1
    return counts


def validate_polytope(g: PolytopeDigraph) -> ValidationReport:
    """Counting checks for the digraph of a simple 3-polytope with ``n`` facets."""
    n, V = g.facet_count, g.vertex_count
    bad = [v for v in range(V) if g.degree(v) != 3]
    counts = down_degree_counts(g)
    checks = [
        ("3-regular", not bad,
         "ok" if not bad else "vertices with degree != 3: " + ", ".join(
             f"{v} (degree {g.degree(v)})" for v in bad)),
        ("vertex count", V == 2 * n - 4, f"V={V}, 2n-4={2 * n - 4}"),
        ("edge count", g.edge_count == 3 * n - 6, f"E={g.edge_count}, 3n-6={3 * n - 6}"),
        ("unique sink", counts[0] == 1, f"{counts[0]} vertices with down-degree 0"),
        ("unique source", counts[3] == 1, f"{counts[3]} vertices with down-degree 3"),
        ("dehn-sommerville", counts[1] == n - 3 and counts[2] == n - 3,
         f"1-vertices={counts[1]}, 2-vertices={counts[2]}, n-3={n - 3}"),
    ]
    return ValidationReport(checks)


# --- per-vertex counting profiles --------------------------------------------

@dataclass(frozen=True)
class VertexProfile:
    down_degree: int
    n1_below: int
    n2_below: int

    @property
    def n_below(self) -> int:
        return self.n1_below + self.n2_below


def _prefix_counts(g: PolytopeDigraph) -> tuple[list[int], list[int]]:
    n1, n2 = [], []
    c1 = c2 = 0
    for d in g.down:
        c1 += len(d) == 1
        c2 += len(d) == 2
        n1.append(c1)
        n2.append(c2)
    return n1, n2


def vertex_profiles(g: PolytopeDigraph) -> list[VertexProfile]:
    n1, n2 = _prefix_counts(g)
    return [VertexProfile(len(g.down[v]), n1[v], n2[v]) for v in range(g.vertex_count)]


def vertex_profile(g: PolytopeDigraph, v: int) -> VertexProfile:
    """``N1(v)``/``N2(v)`` count 1-/2-vertices at index <= v, ``v`` included."""
    return vertex_profiles(g)[v]


def deltas(g: PolytopeDigraph, v: int, w: int) -> tuple[int, int]:
    """Return ``(N1(v) - N1(w), N(v) - N(w))`` for ``w`` below ``v``."""
    if not w < v:
        raise ValueError(f"vertex {w} is not lower than {v}")
    n1, n2 = _prefix_counts(g)
    return n1[v] - n1[w], (n1[v] + n2[v]) - (n1[w] + n2[w])


def has_directed_hamiltonian_path(g: PolytopeDigraph) -> bool:
    # In a DAG a Hamiltonian path must follow the (then unique) topological
    # order, and index order is topological.
    return all(v - 1 in g.down[v] for v in range(1, g.vertex_count))


def undirected_edges(g: PolytopeDigraph) -> Iterator[tuple[int, int]]:
    for v, nbrs in enumerate(g.down):
        for w in nbrs:
            yield w, v
