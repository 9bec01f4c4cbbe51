"""Lower-bound families: dual cyclic wedges, backbones and gadget splices.

A gadget replaces one chain vertex of a backbone. Each gadget ships as its
closure: the gadget plus one apex joined to the three boundary vertices
(entry, side, exit), which is itself a simple 3-polytope digraph with the apex
on top, the entry just below it and the exit at index 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .engine import expected_steps
from .graph import PolytopeDigraph, parse_dpg, read_annotations, serialize_dpg
from .mk import validate_mihalisin_klee

GADGET_BUDGET_CAP = 9


# --- dual cyclic wedges ------------------------------------------------------

def dual_cyclic(n: int) -> PolytopeDigraph:
    """Wedge over an ``(n-2)``-gon, i.e. the dual of the cyclic 3-polytope with ``n`` vertices."""
    if n < 4:
        raise ValueError("dual_cyclic needs n >= 4")
    V = 2 * n - 4
    down: list[list[int]] = [[] for _ in range(V)]
    down[1] = [0]
    for j in range(1, n - 3):
        down[2 * j] = [2 * j - 1]
        down[2 * j + 1] = [2 * j, 2 * j - 2]
    if n == 4:
        down[2] = [1, 0]
    else:
        down[2 * n - 6] = [2 * n - 7, 2 * n - 8]
    down[2 * n - 5] = [2 * n - 6, 1, 0]
    return PolytopeDigraph.from_down_lists([sorted(d, reverse=True) for d in down], n)


# --- backbone ----------------------------------------------------------------

def cut_chain_vertex(g: PolytopeDigraph, v: int) -> PolytopeDigraph:
    """Cut off ``v`` (two up-neighbors ``p > q``, one down-neighbor ``r``) by a triangle.

    The triangle ``x > y > z`` takes ``v``'s height slot: ``p -> x``,
    ``q -> y``, ``z -> r`` and ``x -> y -> z``, ``x -> z``.
    """
    if len(g.up[v]) != 2 or len(g.down[v]) != 1:
        raise ValueError(f"vertex {v} is not a (2 up, 1 down) vertex")
    q, p = g.up[v]
    (r,) = g.down[v]

    def shift(u: int) -> int:
        return u if u < v else u + 2

    z, y, x = v, v + 1, v + 2
    down: list[list[int]] = [[] for _ in range(g.vertex_count + 2)]
    for u in range(g.vertex_count):
        if u == v:
            continue
        for w in g.down[u]:
            if w == v:
                down[shift(u)].append(x if u == p else y)
            else:
                down[shift(u)].append(shift(w))
    down[z] = [r]
    down[y] = [z]
    down[x] = [y, z]
    return PolytopeDigraph.from_down_lists(
        [sorted(d, reverse=True) for d in down], g.facet_count + 1)


def backbone(k: int) -> PolytopeDigraph:
    """``P_k``: ``k + 2`` facets; the chain ``v_{k-1} > ... > v_0`` is vertices ``0..k-1``."""
    if k < 2:
        raise ValueError("backbone needs k >= 2")
    g = dual_cyclic(4)
    for i in range(2, k):
        g = cut_chain_vertex(g, i - 1)
    return g


def is_backbone_chain(g: PolytopeDigraph, k: int) -> bool:
    if not all(g.down[i] == (i - 1,) for i in range(1, k)):
        return False
    return len(g.up[0]) == 3 and all(len(g.up[i]) == 2 for i in range(1, k))


# --- gadgets -----------------------------------------------------------------

@dataclass
class GadgetSpec:
    internal_vertex_count: int
    facet_cost: int
    entry: int
    exit: int
    side: int
    local_down_lists: tuple[tuple[int, ...], ...]
    boundary_attachments: dict[str, int] = field(default_factory=dict)
    expected_increment: Fraction = Fraction(0)

    @classmethod
    def from_closure(cls, closure: PolytopeDigraph) -> "GadgetSpec":
        """Read a gadget off ``apex + gadget``; apex on top, entry just below it, exit at 0."""
        apex = closure.top
        entry = apex - 1
        if 0 not in closure.down[apex] or entry not in closure.down[apex]:
            raise ValueError("closure apex must be adjacent to the entry and the sink")
        (side,) = [w for w in closure.down[apex] if w not in (0, entry)]
        local = tuple(closure.down[v] for v in range(apex))
        E = expected_steps(closure)
        return cls(
            internal_vertex_count=apex,
            facet_cost=closure.facet_count - 3,
            entry=entry,
            exit=0,
            side=side,
            local_down_lists=local,
            boundary_attachments={"chain_in": entry, "side_in": side, "out": 0},
            expected_increment=E[entry] + 1,
        )

    def closure(self) -> PolytopeDigraph:
        down = list(self.local_down_lists) + [(self.entry, self.side, self.exit)]
        return PolytopeDigraph.from_down_lists(
            [sorted(d, reverse=True) for d in down], self.facet_cost + 3)

    def internal_flow(self) -> dict[tuple[int, int], Fraction]:
        """Edge traversal probabilities of one unit entering at ``entry``."""
        from .engine import edge_probabilities
        return {e: p for e, p in edge_probabilities(self.closure(), self.entry).items()
                if e[0] != self.internal_vertex_count}

    def to_dpg(self) -> str:
        return serialize_dpg(self.closure(), {
            "entry": self.entry, "side": self.side, "exit": self.exit,
            "increment": self.expected_increment})


@lru_cache(maxsize=None)
def load_gadget(name: str) -> GadgetSpec:
    """Shipped gadget ``example2`` or ``example3``."""
    text = resources.files("redge3.data").joinpath(f"{name}_gadget.dpg").read_text()
    spec = GadgetSpec.from_closure(parse_dpg(text))
    ann = read_annotations(text)
    if "increment" in ann and Fraction(ann["increment"]) != spec.expected_increment:
        raise ValueError(f"{name} gadget: stored increment {ann['increment']} "
                         f"!= computed {spec.expected_increment}")
    return spec


def splice(k: int, gadget: GadgetSpec) -> tuple[PolytopeDigraph, int]:
    """Replace every chain vertex of ``backbone(k)`` by ``gadget``; returns (digraph, start).

    Gadget ``i`` occupies heights ``[i*G, (i+1)*G)``; the backbone's remaining
    vertices follow in order. The chain edge into ``v_i`` lands on the entry,
    the other in-edge on the side vertex, and ``v_i``'s down-edge leaves from
    the exit. At ``v_0`` the third in-edge lands on the exit; at ``v_{k-1}``
    the lower of the two in-edges plays the chain role. The start is the entry
    of the top gadget.
    """
    b = backbone(k)
    G = gadget.internal_vertex_count
    V = b.vertex_count - k + k * G

    def place(u: int) -> int:
        return k * G + (u - k)

    def local(i: int, j: int) -> int:
        return i * G + j

    down: list[list[int]] = [[] for _ in range(V)]
    for i in range(k):
        for j, d in enumerate(gadget.local_down_lists):
            down[local(i, j)] = [local(i, w) for w in d]
        if i > 0:
            down[local(i, gadget.exit)].append(local(i - 1, gadget.entry))
    for u in range(k, b.vertex_count):
        for w in b.down[u]:
            if w >= k:
                down[place(u)].append(place(w))
                continue
            ups = b.up[w]
            outer = [x for x in ups if x >= k]
            if w == k - 1:
                role = gadget.entry if u == min(outer) else gadget.side
            elif w == 0:
                role = gadget.side if u == max(outer) else gadget.exit
            else:
                role = gadget.side
            down[place(u)].append(local(w, role))
    g = PolytopeDigraph.from_down_lists(
        [sorted(d, reverse=True) for d in down], b.facet_count + k * gadget.facet_cost)
    return g, local(k - 1, gadget.entry)


def example2(k: int) -> tuple[PolytopeDigraph, int]:
    if k < 2:
        raise ValueError("example2 needs k >= 2")
    return splice(k, load_gadget("example2"))


def example3(k: int) -> tuple[PolytopeDigraph, int]:
    if k < 1:
        raise ValueError("example3 needs k >= 1")
    if k == 1:
        # a one-gadget splice is the closure itself
        return load_gadget("example3").closure(), load_gadget("example3").entry
    return splice(k, load_gadget("example3"))


# --- closed forms ------------------------------------------------------------

class Family(str, enum.Enum):
    DUAL_CYCLIC = "dual-cyclic"
    BACKBONE = "backbone"
    EXAMPLE2 = "example2"
    EXAMPLE3 = "example3"


def closed_form_expectation(family: Family | str, param: int) -> Fraction:
    """Closed-form ``E`` at the designated start.

    For the dual cyclic family this is the guaranteed threshold
    ``max(E(v_{2n-8}), E(v_{2n-7})) >= 4n/3 - 14/3``, not an exact value.
    """
    family = Family(family)
    if family is Family.DUAL_CYCLIC:
        if param < 4:
            raise ValueError("n >= 4 required")
        return Fraction(4 * param, 3) - Fraction(14, 3)
    if family is Family.BACKBONE:
        if param < 2:
            raise ValueError("k >= 2 required")
        return Fraction(param - 1)
    if family is Family.EXAMPLE2:
        if param < 2:
            raise ValueError("k >= 2 required")
        return param * Fraction(43, 8) - 1
    if param < 1:
        raise ValueError("k >= 1 required")
    return param * Fraction(1721, 128) - 1


def generate(family: Family | str, param: int) -> tuple[PolytopeDigraph, int]:
    """Family member and its designated start vertex."""
    family = Family(family)
    if family is Family.DUAL_CYCLIC:
        g = dual_cyclic(param)
        E = expected_steps(g)
        if param == 4:
            return g, g.top
        a, b = 2 * param - 8, 2 * param - 7
        return g, a if E[a] >= E[b] else b
    if family is Family.BACKBONE:
        return backbone(param), param - 1
    if family is Family.EXAMPLE2:
        return example2(param)
    return example3(param)


def standard_corpus() -> list[tuple[str, PolytopeDigraph, int]]:
    """25 named instances with starts, spanning every family and both gadgets."""
    out = []
    for n in list(range(4, 14)) + [20]:
        out.append((f"dual-cyclic:{n}",) + generate(Family.DUAL_CYCLIC, n))
    for fam, ks in ((Family.BACKBONE, range(2, 7)), (Family.EXAMPLE2, range(2, 7)),
                    (Family.EXAMPLE3, range(1, 4))):
        out += [(f"{fam.value}:{k}",) + generate(fam, k) for k in ks]
    gadget = load_gadget("example2")
    out.append(("example2-closure", gadget.closure(), gadget.entry))
    return out


# --- gadget search -----------------------------------------------------------

def gadget_search(facet_cost: int, vertex_budget: int = GADGET_BUDGET_CAP, *,
                  lower_bound: Fraction = Fraction(0),
                  allow_large: bool = False) -> GadgetSpec:
    """Best gadget costing ``facet_cost`` facets (``2*facet_cost + 1`` vertices).

    Searches every apex closure with ``facet_cost + 3`` facets via the sweep in
    :mod:`.sweep`, keeps those whose splice into ``backbone(2)`` is accepted by
    the realizability test, and returns a maximizer of the increment; ties go
    to the lexicographically smallest down-lists. ``allow_large`` lifts the
    vertex budget guard for offline research runs.
    """
    from .sweep import closure_sweep

    if facet_cost < 1:
        raise ValueError("facet_cost must be >= 1")
    if vertex_budget > GADGET_BUDGET_CAP and not allow_large:
        raise ValueError(f"vertex_budget {vertex_budget} exceeds the cap {GADGET_BUDGET_CAP}")
    need = 2 * facet_cost + 1
    if need > vertex_budget:
        raise ValueError(f"budget exceeded: a facet_cost={facet_cost} gadget has "
                         f"{need} vertices > {vertex_budget}")
    result = closure_sweep(facet_cost + 3, lower_bound)
    best: GadgetSpec | None = None
    best_value = None
    for value, closure in result.candidates:
        if best_value is not None and value < best_value:
            break
        if not validate_mihalisin_klee(closure).accepted:
            continue
        spec = GadgetSpec.from_closure(closure)
        g, _ = splice(2, spec)
        if not validate_mihalisin_klee(g).accepted:
            continue
        if best is None or spec.local_down_lists < best.local_down_lists:
            best, best_value = spec, value
    if best is None:
        raise LookupError(f"no admissible gadget with facet_cost={facet_cost}")
    return best
