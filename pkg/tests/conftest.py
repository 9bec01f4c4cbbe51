import itertools
from fractions import Fraction

import pytest
from hypothesis import settings

from redge3.constructions import dual_cyclic, standard_corpus
from redge3.graph import PolytopeDigraph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def tetra() -> PolytopeDigraph:
    return dual_cyclic(4)


@pytest.fixture(scope="session")
def corpus():
    return standard_corpus()


# --- brute-force oracles ---------------------------------------------------------

def brute_three_connected(g: PolytopeDigraph) -> bool:
    """Remove every vertex subset of size <= 2 and test connectivity by flood fill."""
    V = g.vertex_count
    if V < 4:
        return False
    for size in (0, 1, 2):
        for cut in itertools.combinations(range(V), size):
            rest = [v for v in range(V) if v not in cut]
            seen = {rest[0]}
            stack = [rest[0]]
            while stack:
                u = stack.pop()
                for w in g.neighbors[u]:
                    if w not in cut and w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != len(rest):
                return False
    return True


def all_paths(g: PolytopeDigraph, start: int):
    """Every directed path from ``start`` to vertex 0, as vertex lists."""
    out = []

    def walk(path):
        v = path[-1]
        if v == 0:
            out.append(list(path))
            return
        for w in g.down[v]:
            path.append(w)
            walk(path)
            path.pop()

    walk([start])
    return out


def path_flow_oracle(g: PolytopeDigraph, start: int) -> dict[tuple[int, int], Fraction]:
    """Edge traversal probabilities summed over explicit source-to-sink paths."""
    flow: dict[tuple[int, int], Fraction] = {}
    for path in all_paths(g, start):
        p = Fraction(1)
        for v in path[:-1]:
            p /= len(g.down[v])
        for a, b in zip(path, path[1:]):
            flow[(a, b)] = flow.get((a, b), Fraction(0)) + p
    return flow


def brute_disjoint_triple(g: PolytopeDigraph) -> bool:
    """Search for three source-sink paths with pairwise disjoint interiors."""
    paths = all_paths(g, g.top)
    inner = [frozenset(p[1:-1]) for p in paths]
    for i, j, k in itertools.combinations(range(len(paths)), 3):
        if paths[i] == paths[j] or paths[j] == paths[k] or paths[i] == paths[k]:
            continue
        if inner[i].isdisjoint(inner[j]) and inner[i].isdisjoint(inner[k]) \
                and inner[j].isdisjoint(inner[k]):
            return True
    return False


def brute_hamiltonian(g: PolytopeDigraph) -> bool:
    """Backtracking search over directed paths, from every vertex."""
    V = g.vertex_count

    def extend(v, seen):
        if len(seen) == V:
            return True
        return any(extend(w, seen | {w}) for w in g.down[v] if w not in seen)

    return any(extend(s, {s}) for s in range(V))


# --- acceptance summary -----------------------------------------------------------

_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    n = int(name.split("_")[2])
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = ""
        if report.failed:
            detail = str(report.longrepr.reprcrash.message).splitlines()[0][:160]
        _ACCEPTANCE[n] = ("PASS" if report.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        status, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {status}" + (f"  {detail}" if detail else ""))
