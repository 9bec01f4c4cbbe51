"""Acceptance suite: one test per numbered criterion.

A PASS/FAIL line per criterion is printed in the terminal summary (see conftest).
"""
import os
import time
from fractions import Fraction

import pytest

from redge3.cert import CertPoint, builtin_system, is_feasible, minimize, tight_set, upper_bound
from redge3.cli import load_manifest, reproduce_lines
from redge3.constructions import Family, backbone, dual_cyclic, example2, example3, generate
from redge3.engine import ALPHA, BETA, check_theorem_32, edge_probabilities, expected_steps, simulate
from redge3.enumeration import (CENSUS, admissible_orientations, compute_f,
                                generate_cubic_planar_3connected)
from redge3.graph import has_directed_hamiltonian_path, serialize_dpg
from redge3.mk import validate_mihalisin_klee

from test_planar_mk import (nonplanar_rewiring, second_sink_mutation, two_cut_splice,
                            two_local_sinks)

pytestmark = pytest.mark.acceptance
JOBS = os.cpu_count() or 1
OPT = CertPoint(Fraction(46, 87), Fraction(42, 87))


def instances():
    """Every constructions instance named by criteria 1 to 3."""
    for n in range(4, 201):
        yield f"dual-cyclic:{n}", dual_cyclic(n)
    for k in range(2, 51):
        yield f"example2:{k}", example2(k)[0]
    for k in range(1, 21):
        yield f"example3:{k}", example3(k)[0]


def test_criterion_1_dual_cyclic_relation():
    t0 = time.perf_counter()
    for n in range(4, 201):
        E = expected_steps(dual_cyclic(n))
        for j in range(n - 3):
            assert E[2 * j] + 2 * E[2 * j + 1] == 4 * j + 2, (n, j)
        assert max(E[2 * n - 8], E[2 * n - 7]) >= Fraction(4 * n, 3) - Fraction(14, 3), n
    assert time.perf_counter() - t0 < 5


def test_criterion_2_example2():
    t0 = time.perf_counter()
    for k in range(2, 51):
        g, s = example2(k)
        assert expected_steps(g)[s] == Fraction(43, 32) * (4 * k + 2) - Fraction(59, 16), k
    g, s = example2(2)
    assert expected_steps(g)[s] == Fraction(39, 4)
    assert time.perf_counter() - t0 < 5


def test_criterion_3_example3():
    t0 = time.perf_counter()
    for k in range(1, 21):
        g, s = example3(k)
        want = Fraction(1721, 1280) * (10 * k + 2) - Fraction(4722, 1280)
        assert expected_steps(g)[s] == want, k
    g, s = example3(1)
    assert expected_steps(g)[s] == Fraction(1593, 128)
    assert not has_directed_hamiltonian_path(g)
    assert time.perf_counter() - t0 < 30


def test_criterion_4_mk_validation():
    t0 = time.perf_counter()
    rejected = [name for name, g in instances() if not validate_mihalisin_klee(g).accepted]
    rejected += [f"backbone:{k}" for k in range(2, 51)
                 if not validate_mihalisin_klee(backbone(k)).accepted]
    assert rejected == []
    flags = {
        "second sink": (second_sink_mutation(), "acyclic_unique_source_sink"),
        "non-planar": (nonplanar_rewiring(), "planar"),
        "2-cut": (two_cut_splice(), "three_connected"),
        "two local sinks": (two_local_sinks(), "unique_local_sink_per_face"),
    }
    for name, (g, flag) in flags.items():
        rep = validate_mihalisin_klee(g)
        assert not rep.realizable and not getattr(rep, flag), name
    assert time.perf_counter() - t0 < 30


def test_criterion_5_certificate():
    t0 = time.perf_counter()
    s = builtin_system()
    assert len(s) == 27
    from redge3.cert import DISPLAYED, Source, inequality_from_table
    for q in s:
        if q.source is Source.FROM_TABLE:
            for t in q.tables:
                r = inequality_from_table(t)
                assert (r.coeff_alpha, r.coeff_beta, r.rhs) == DISPLAYED[q.case_label]
    assert is_feasible(s, OPT)[0]
    tight = {(q.coeff_alpha / q.rhs, q.coeff_beta / q.rhs)
             for q in (s.by_label(lab) for lab in tight_set(s, OPT))}
    assert tight == {(0, Fraction(29, 14)), (Fraction(3, 4), Fraction(5, 4))}
    p, value = minimize(s, (1, 2))
    assert p == OPT and value == Fraction(130, 87)
    for n in (4, 5, 10, 12, 100, 1000, 10**4, 10**6):
        assert upper_bound(n, OPT) == Fraction(130, 87) * n - Fraction(115, 29)
    assert time.perf_counter() - t0 < 1


def test_criterion_6_vertex_bound():
    # exact check of E(v) <= 46/87 N1(v) + 42/87 N(v) below the top vertex
    t0 = time.perf_counter()
    failing, worst = [], Fraction(0)

    def check(name, g):
        nonlocal worst
        r = check_theorem_32(g, ALPHA, BETA)
        if r.violations:
            failing.append(name)
            worst = max([worst] + [-r.margins[v] for v in r.violations])

    for n in range(4, 8):
        for gi, rot in enumerate(generate_cubic_planar_3connected(n)):
            for oi, g in enumerate(admissible_orientations(rot, n)):
                check(f"orientation n={n} graph={gi} #{oi}", g)
    for name, g in instances():
        check(name, g)
    assert time.perf_counter() - t0 < 600
    assert not failing, (f"{len(failing)} digraphs violate the per-vertex bound, "
                         f"max excess {worst}; first: {failing[0]}")


@pytest.fixture(scope="module")
def f_values():
    return {n: compute_f(n, jobs=JOBS) for n in range(4, 10)}


def lower_construction(n: int) -> Fraction:
    best = max(expected_steps(dual_cyclic(n)))
    best = max(best, expected_steps(backbone(n - 2))[n - 3])
    for fam, k in ((Family.EXAMPLE2, (n - 2) / 4), (Family.EXAMPLE3, (n - 2) / 10)):
        if k == int(k) and k >= 1 and (fam is Family.EXAMPLE3 or k >= 2):
            g, s = generate(fam, int(k))
            best = max(best, expected_steps(g)[s])
    return best


def test_criterion_7_enumeration(f_values):
    assert [len(generate_cubic_planar_3connected(n)) for n in range(4, 10)] == \
        [1, 1, 2, 5, 14, 50] == [CENSUS[n] for n in range(4, 10)]
    assert f_values[4].f_value == Fraction(11, 6)
    manifest = load_manifest()
    for n in range(5, 10):
        r = f_values[n]
        assert lower_construction(n) <= r.f_value <= upper_bound(n, OPT), n
        assert expected_steps(r.witness)[r.witness_start] == r.f_value
        assert str(r.f_value) == manifest[f"f.{n}"], n
    # a rerun with a different worker count reproduces the witness byte for byte
    for n in range(5, 9):
        again = compute_f(n, jobs=1 if JOBS > 1 else 2)
        assert (serialize_dpg(again.witness), again.witness_start, again.f_value) == \
            (serialize_dpg(f_values[n].witness), f_values[n].witness_start, f_values[n].f_value)
    assert sum(f_values[n].wall_time for n in range(4, 9)) < 300
    assert f_values[9].wall_time < 7200


def test_criterion_8_flow_dp_simulation(corpus):
    t0 = time.perf_counter()
    assert len(corpus) == 25
    for name, g, s in corpus:
        E = expected_steps(g)[s]
        assert sum(edge_probabilities(g, s).values()) == E, name
        within = 0
        for seed in range(20):
            st = simulate(g, s, 10**5, seed, jobs=JOBS)
            within += abs(st.mean - float(E)) <= 4 * st.stderr
        assert within >= 19, (name, within)
    assert time.perf_counter() - t0 < 600


def test_criterion_9_sandwich():
    t0 = time.perf_counter()
    lines, failed = reproduce_lines(fast=True)
    assert failed == []
    assert any(l.startswith("sandwich.lower_slope = 1721/1280 >= 2689/2000") for l in lines)
    assert any(l.startswith("sandwich.upper n=10000 = 1299655/87") for l in lines)
    assert Fraction(1721, 1280) >= Fraction(13445, 10**4)
    assert upper_bound(10**4, OPT) <= Fraction(14943, 10**4) * 10**4
    assert time.perf_counter() - t0 < 1
