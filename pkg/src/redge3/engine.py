"""Exact Random Edge expectations, edge-traversal flows and a seeded simulator.

Simulation PRNG contract: trials are cut into fixed blocks of
``SIM_BLOCK`` walks; block ``b`` draws from ``PCG64(SeedSequence([seed, b]))``
raw 64-bit outputs. A step at a vertex with ``d`` lower neighbors uses the high
32 bits ``r`` of one raw word: ``d == 2`` takes ``r & 1``; ``d == 3`` takes
``r % 3`` and redraws when ``r >= 3 * (2**32 // 3)``. Histograms are therefore
identical for any worker count.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import PolytopeDigraph, vertex_profiles

SIM_BLOCK = 4096
ALPHA = Fraction(46, 87)
BETA = Fraction(42, 87)


class SinkNotUnique(ValueError):
    pass


def expected_steps(g: PolytopeDigraph) -> list[Fraction]:
    """``E(v) = 1 + mean(E(w) for w lower neighbor of v)``, with ``E(v0) = 0``."""
    E = [Fraction(0)] * g.vertex_count
    for v in range(1, g.vertex_count):
        d = g.down[v]
        if not d:
            raise SinkNotUnique(f"vertex {v} has no lower neighbor")
        E[v] = 1 + sum((E[w] for w in d), Fraction(0)) / len(d)
    return E


def edge_probabilities(g: PolytopeDigraph, start: int) -> dict[tuple[int, int], Fraction]:
    """Probability that the walk from ``start`` traverses each edge ``(hi, lo)``."""
    for v in range(1, start + 1):
        if not g.down[v]:
            raise SinkNotUnique(f"vertex {v} has no lower neighbor")
    visit = [Fraction(0)] * g.vertex_count
    visit[start] = Fraction(1)
    prob = {}
    for v in range(g.vertex_count - 1, 0, -1):
        d = g.down[v]
        share = visit[v] / len(d) if d else Fraction(0)
        for w in sorted(d, reverse=True):
            prob[(v, w)] = share
            visit[w] += share
    return prob


def visit_probabilities(g: PolytopeDigraph, start: int) -> list[Fraction]:
    visit = [Fraction(0)] * g.vertex_count
    visit[start] = Fraction(1)
    for (v, w), p in edge_probabilities(g, start).items():
        visit[w] += p
    return visit


def check_recurrence(g: PolytopeDigraph, E: list[Fraction]) -> list[int]:
    """Vertices at which ``E`` violates the expectation recurrence."""
    bad = [] if E[0] == 0 else [0]
    for v in range(1, g.vertex_count):
        d = g.down[v]
        if not d or (E[v] - 1) * len(d) != sum(E[w] for w in d):
            bad.append(v)
    return bad


def render(x: Fraction, places: int = 6) -> str:
    """Decimal rendering, rounded half-to-even."""
    scale = 10 ** places
    q, r = divmod(x.numerator * scale, x.denominator)
    twice = 2 * r
    if twice > x.denominator or (twice == x.denominator and q % 2):
        q += 1
    sign = "-" if q < 0 else ""
    q = abs(q)
    return f"{sign}{q // scale}.{q % scale:0{places}d}"


# --- bound check ------------------------------------------------------------

@dataclass
class BoundReport:
    margins: list[Fraction | None]
    violations: list[int]
    global_bound: Fraction
    global_violations: list[int]

    @property
    def ok(self) -> bool:
        return not self.violations and not self.global_violations


def check_theorem_32(g: PolytopeDigraph, alpha: Fraction = ALPHA,
                     beta: Fraction = BETA) -> BoundReport:
    """Check ``E(v) <= alpha*N1(v) + beta*N(v)`` below the top and the global linear bound.

    ``margins[v]`` is the slack of the per-vertex inequality (``None`` at the
    top vertex, where it is not claimed).
    """
    E = expected_steps(g)
    profiles = vertex_profiles(g)
    margins: list[Fraction | None] = []
    for v, p in enumerate(profiles):
        if v == g.top:
            margins.append(None)
        else:
            margins.append(alpha * p.n1_below + beta * p.n_below - E[v])
    n = g.facet_count
    bound = Fraction(130, 87) * n - Fraction(115, 29)
    return BoundReport(
        margins,
        [v for v, m in enumerate(margins) if m is not None and m < 0],
        bound,
        [v for v in range(g.vertex_count) if E[v] > bound],
    )


# --- simulation -------------------------------------------------------------

@dataclass
class SimulationStats:
    trials: int
    seed: int
    mean: float
    sample_variance: float
    histogram: dict[int, int]

    @property
    def stderr(self) -> float:
        return math.sqrt(self.sample_variance / self.trials)


_THIRD = 3 * (2**32 // 3)


def _draw(bg: np.random.PCG64, degrees: np.ndarray) -> np.ndarray:
    r = bg.random_raw(degrees.size) >> np.uint64(32)
    out = np.zeros(degrees.size, dtype=np.int64)
    two = degrees == 2
    out[two] = (r[two] & np.uint64(1)).astype(np.int64)
    three = np.flatnonzero(degrees == 3)
    while three.size:
        rr = r[three]
        good = rr < np.uint64(_THIRD)
        out[three[good]] = (rr[good] % np.uint64(3)).astype(np.int64)
        three = three[~good]
        if three.size:
            r = np.zeros(degrees.size, dtype=np.uint64)
            r[three] = bg.random_raw(three.size) >> np.uint64(32)
    return out


def _run_block(args) -> Counter:
    down, start, size, seed, block = args
    V = len(down)
    deg = np.array([len(d) for d in down], dtype=np.int64)
    table = np.zeros((V, 3), dtype=np.int64)
    for v, d in enumerate(down):
        for i, w in enumerate(sorted(d, reverse=True)):
            table[v, i] = w
    bg = np.random.PCG64(np.random.SeedSequence([seed, block]))
    pos = np.full(size, start, dtype=np.int64)
    length = np.zeros(size, dtype=np.int64)
    active = np.flatnonzero(pos != 0)
    while active.size:
        here = pos[active]
        choice = _draw(bg, deg[here])
        pos[active] = table[here, choice]
        length[active] += 1
        active = active[pos[active] != 0]
    return Counter(length.tolist())


def simulate(g: PolytopeDigraph, start: int, trials: int, seed: int,
             jobs: int = 1) -> SimulationStats:
    """Run ``trials`` Random Edge walks from ``start`` to vertex 0."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    for v in range(1, g.vertex_count):
        if not g.down[v]:
            raise SinkNotUnique(f"vertex {v} has no lower neighbor")
    blocks = [(g.down, start, min(SIM_BLOCK, trials - b * SIM_BLOCK), seed, b)
              for b in range(-(-trials // SIM_BLOCK))]
    hist: Counter = Counter()
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            for c in ex.map(_run_block, blocks):
                hist.update(c)
    else:
        for b in blocks:
            hist.update(_run_block(b))
    total = sum(k * c for k, c in hist.items())
    mean = total / trials
    if trials > 1:
        var = sum(c * (k - mean) ** 2 for k, c in hist.items()) / (trials - 1)
    else:
        var = 0.0
    return SimulationStats(trials, seed, mean, var, dict(sorted(hist.items())))
