"""Bottom-up sweep search for apex-closed gadgets.

A generic linear objective sweeps the boundary of a simple 3-polytope, and
every sublevel set is a disk. Adding vertices in height order therefore acts on
a cyclic frontier of dangling upward edges ("stubs"): a vertex with one lower
neighbor replaces one stub by two, a vertex with two lower neighbors replaces
two adjacent stubs by one, and the top vertex absorbs the last three. Frontier
arcs are the faces currently cut by the level line, so each face gets exactly
one bottom and one top. The graph is 3-connected iff no two faces share two
edges, which is tracked through arc adjacency.

A closure here is ``apex + gadget``: the top vertex (apex) sits directly above
the sink, the gadget entry ``s`` (the objective) and a side vertex with one
lower neighbor. ``E(s)`` is computed bottom-up on the fly, so states with
equal frontier data are merged and states that cannot reach the lower bound
are pruned with a translation-invariant bound on the best reachable value.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .graph import PolytopeDigraph

log = logging.getLogger(__name__)

SCALE_BITS = 48
SCALE = 1 << SCALE_BITS  # below the apex every E is a dyadic rational


# state: (values, kinds, joined, adj)
#   values[i]  scaled E of the owner of stub i
#   kinds[i]   down-degree of the owner of stub i
#   joined[k]  arc k lies between two stubs of one owner (a fresh face)
#   adj[k]     bitmask of arcs sharing an edge with arc k
State = tuple[tuple[int, ...], tuple[int, ...], tuple[bool, ...], tuple[int, ...]]

START: State = ((0, 0, 0), (0, 0, 0), (True, True, True), (0b110, 0b101, 0b011))

_PERMS: dict[int, list[tuple[list[int], list[int]]]] = {}


def _perms(m: int):
    """Rotations and reflections as (stub permutation, arc permutation)."""
    if m not in _PERMS:
        out = []
        for r in range(m):
            sp = [(k + r) % m for k in range(m)]
            out.append((sp, sp[:]))
            rs = sp[::-1]
            ra = [sp[m - 2 - j] for j in range(m - 1)] + [sp[m - 1]]
            out.append((rs, ra))
        _PERMS[m] = out
    return _PERMS[m]


def _remap(adj, ap):
    inv = {o: k for k, o in enumerate(ap)}
    out = []
    for o in ap:
        mask, new = adj[o], 0
        while mask:
            low = mask & -mask
            new |= 1 << inv[low.bit_length() - 1]
            mask ^= low
        out.append(new)
    return tuple(out)


def canonical(state: State) -> tuple[State, list[int]]:
    """Least equivalent state and the stub permutation that produces it."""
    values, kinds, joined, adj = state
    best, best_sp = None, None
    for sp, ap in _perms(len(values)):
        head = (tuple(values[i] for i in sp), tuple(kinds[i] for i in sp),
                tuple(joined[i] for i in ap))
        if best is None or head < best[:3]:
            best, best_sp = head + (_remap(adj, ap),), sp
        elif head == best[:3]:
            a = _remap(adj, ap)
            if a < best[3]:
                best, best_sp = head + (a,), sp
    return best, best_sp


def moves(state: State):
    """Yield ``(d, i, value, child)`` for every legal next vertex."""
    values, kinds, joined, adj = state
    m = len(values)
    for i in range(m):
        # one lower neighbor: stub i becomes two stubs with a new arc between
        e = values[i] + SCALE
        left, right = (i - 1) % m, i
        arcs = list(range(i)) + [-1] + list(range(i, m))
        pos = {a: k for k, a in enumerate(arcs)}
        nadj = []
        for a in arcs:
            if a == -1:
                nadj.append((1 << pos[left]) | (1 << pos[right]))
                continue
            mask = 0
            for j in range(m):
                if adj[a] >> j & 1:
                    mask |= 1 << pos[j]
            if a in (left, right):
                mask |= 1 << pos[-1]
            nadj.append(mask)
        nj = [True if a == -1 else joined[a] for a in arcs]
        nj[pos[left]] = nj[pos[right]] = False
        yield 1, i, e, (values[:i] + (e, e) + values[i + 1:], kinds[:i] + (1, 1) + kinds[i + 1:],
                        tuple(nj), tuple(nadj))

        # two lower neighbors: stubs i, i+1 merge; the arc between them closes
        if m <= 3 or joined[i]:
            continue
        j = (i + 1) % m
        left, right = (i - 1) % m, j
        if adj[left] >> right & 1:
            continue  # the two outer faces would share a second edge
        e = SCALE + (values[i] + values[j]) // 2
        if j > i:
            nv = values[:i] + (e,) + values[j + 1:]
            nk = kinds[:i] + (2,) + kinds[j + 1:]
            arcs = list(range(i)) + list(range(j, m))
        else:
            nv = (e,) + values[1:m - 1]
            nk = (2,) + kinds[1:m - 1]
            arcs = list(range(m - 1))
        pos = {a: k for k, a in enumerate(arcs)}
        nadj = []
        for a in arcs:
            mask = 0
            for jj in range(m):
                if jj in pos and adj[a] >> jj & 1:
                    mask |= 1 << pos[jj]
            if a == left:
                mask |= 1 << pos[right]
            if a == right:
                mask |= 1 << pos[left]
            nadj.append(mask)
        nj = [joined[a] for a in arcs]
        nj[pos[left]] = nj[pos[right]] = False
        yield 2, i, e, (nv, nk, tuple(nj), tuple(nadj))


@lru_cache(maxsize=None)
def _headroom(ones: int, twos: int, gap: int, m: int) -> int | None:
    """Upper bound on ``E(s) - M1`` with ``ones``/``twos`` vertices still to add.

    ``M1`` is the largest frontier value and ``M1 - gap`` the largest value on
    a different owner; ``s`` is the last of the ``twos`` and leaves ``m == 3``.
    """
    if ones == 0 and twos == 1:
        return SCALE - gap // 2 if m == 4 else None
    best = None
    if ones:
        r = _headroom(ones - 1, twos, SCALE, m + 1)
        if r is not None:
            best = SCALE + r
    if twos > 1 and m >= 4:
        z = SCALE - gap // 2
        r = _headroom(ones, twos - 1, z if z >= 0 else -z, m - 1)
        if r is not None:
            r += max(z, 0)
            best = r if best is None else max(best, r)
    return best


def _top_two(values, joined) -> tuple[int, int]:
    m = len(values)
    top = max(values)
    i0 = values.index(top)
    group = {i0}
    k = i0
    while joined[k] and (k + 1) % m not in group:
        k = (k + 1) % m
        group.add(k)
    k = i0
    while joined[(k - 1) % m] and (k - 1) % m not in group:
        k = (k - 1) % m
        group.add(k)
    rest = [values[i] for i in range(m) if i not in group]
    return top, max(rest) if rest else top


@dataclass
class SweepResult:
    facets: int
    candidates: list[tuple[Fraction, PolytopeDigraph]]  # descending value
    states: list[int]  # frontier states kept per level


def closure_sweep(facets: int, lower_bound: Fraction = Fraction(0)) -> SweepResult:
    """All apex closures with ``facets`` facets and ``E(s) >= lower_bound``.

    Candidates are reconstructed digraphs with the apex on top, ``s`` just
    below it and the sink at 0; they are 3-connected and face-admissible by
    construction but the disjoint-path condition is left to the caller.
    """
    V = 2 * facets - 4
    lb = int(lower_bound * SCALE)
    start, _ = canonical(START)
    levels: list[dict] = [{start: None}]
    finals = []
    for t in range(1, V - 1):
        nxt: dict = {}
        for key in levels[-1]:
            for d, i, e, child in moves(key):
                values, kinds, joined, _ = child
                m = len(values)
                left = V - 2 - t
                if left < abs(m - 3) or (left - (m - 3)) % 2:
                    continue
                if t == V - 2:
                    if (d == 2 and e >= lb and not any(joined)
                            and sorted(kinds) == [0, 1, 2]):
                        finals.append((e, key, (d, i)))
                    continue
                ones, twos = (left - (m - 3)) // 2, (left + (m - 3)) // 2
                top, second = _top_two(values, joined)
                room = _headroom(ones, twos, top - second, m) if twos else None
                if room is None or top + room < lb:
                    continue
                ck, _ = canonical(child)
                if ck not in nxt:
                    nxt[ck] = (key, (d, i))
        levels.append(nxt)
        log.debug("level %d: %d states", t, len(nxt))
    finals.sort(key=lambda f: -f[0])
    cands = []
    for e, key, mv in finals:
        path = [mv]
        for t in range(len(levels) - 2, 0, -1):
            key, step = levels[t][key]
            path.append(step)
        cands.append((Fraction(e, SCALE), rebuild(path[::-1], facets)))
    return SweepResult(facets, cands, [len(lv) for lv in levels])


def rebuild(path, facets: int) -> PolytopeDigraph:
    """Replay sweep moves; the apex absorbs the final three stubs."""
    state, owners = START, [0, 0, 0]
    down: list[tuple[int, ...]] = [()]
    for d, i in path:
        state, sp = canonical(state)
        owners = [owners[k] for k in sp]
        child = next(c for dd, ii, _, c in moves(state) if (dd, ii) == (d, i))
        m, v = len(owners), len(down)
        if d == 1:
            down.append((owners[i],))
            owners = owners[:i] + [v, v] + owners[i + 1:]
        else:
            j = (i + 1) % m
            down.append((owners[i], owners[j]))
            owners = owners[:i] + [v] + owners[j + 1:] if j > i else [v] + owners[1:m - 1]
        state = child
    down.append(tuple(owners))
    return PolytopeDigraph.from_down_lists([sorted(x, reverse=True) for x in down], facets)
