from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from redge3.constructions import (Family, dual_cyclic, example2, example3, generate,
                                  load_gadget)
from redge3.engine import (SinkNotUnique, check_recurrence, check_theorem_32,
                           edge_probabilities, expected_steps, render, simulate,
                           visit_probabilities)
from redge3.graph import PolytopeDigraph

from conftest import path_flow_oracle

small = st.one_of(
    st.tuples(st.just(Family.DUAL_CYCLIC), st.integers(4, 8)),
    st.tuples(st.just(Family.BACKBONE), st.integers(2, 6)),
)
any_family = st.one_of(
    st.tuples(st.just(Family.DUAL_CYCLIC), st.integers(4, 40)),
    st.tuples(st.just(Family.BACKBONE), st.integers(2, 20)),
    st.tuples(st.just(Family.EXAMPLE2), st.integers(2, 10)),
    st.tuples(st.just(Family.EXAMPLE3), st.integers(1, 5)),
)


class TestExpected:
    def test_tetrahedron(self, tetra):
        assert expected_steps(tetra) == [0, 1, Fraction(3, 2), Fraction(11, 6)]

    def test_sink_not_unique(self):
        with pytest.raises(SinkNotUnique):
            expected_steps(PolytopeDigraph.from_down_lists([(), (), (1, 0)], 3))

    def test_example2(self):
        for k in range(2, 9):
            g, s = example2(k)
            assert expected_steps(g)[s] == k * Fraction(43, 8) - 1

    @given(any_family)
    def test_recurrence_and_positivity(self, fam_param):
        g, _ = generate(*fam_param)
        E = expected_steps(g)
        assert check_recurrence(g, E) == []
        assert E[0] == 0 and all(e >= 1 for e in E[1:])

    def test_recurrence_detects_tampering(self, tetra):
        E = expected_steps(tetra)
        E[2] += Fraction(1, 1000)
        assert check_recurrence(tetra, E) == [2, 3]  # v3 reads E[2]

    def test_render(self):
        assert render(Fraction(11, 6)) == "1.833333"
        assert render(Fraction(1, 8), 2) == "0.12"
        assert render(Fraction(3, 8), 2) == "0.38"
        assert render(Fraction(-1, 3)) == "-0.333333"


class TestFlow:
    def test_tetrahedron(self, tetra):
        p = edge_probabilities(tetra, 3)
        assert p[(3, 2)] == p[(3, 1)] == p[(3, 0)] == Fraction(1, 3)
        assert sum(p.values()) == Fraction(11, 6)

    @given(any_family, st.data())
    def test_sum_equals_expectation(self, fam_param, data):
        g, _ = generate(*fam_param)
        start = data.draw(st.integers(0, g.top))
        p = edge_probabilities(g, start)
        assert sum(p.values(), Fraction(0)) == expected_steps(g)[start]

    @given(any_family, st.data())
    def test_conservation(self, fam_param, data):
        g, _ = generate(*fam_param)
        start = data.draw(st.integers(1, g.top))
        p = edge_probabilities(g, start)
        assert all(0 <= x <= 1 for x in p.values())
        inflow = [Fraction(0)] * g.vertex_count
        outflow = [Fraction(0)] * g.vertex_count
        for (a, b), x in p.items():
            outflow[a] += x
            inflow[b] += x
        assert outflow[start] == 1 and inflow[0] == 1
        for w in range(1, g.vertex_count):
            if w != start:
                assert inflow[w] == outflow[w]

    @given(small, st.data())
    def test_path_oracle(self, fam_param, data):
        g, _ = generate(*fam_param)
        start = data.draw(st.integers(0, g.top))
        p = {e: x for e, x in edge_probabilities(g, start).items() if x}
        assert p == path_flow_oracle(g, start)

    def test_path_oracle_on_gadget_closure(self):
        g = load_gadget("example2").closure()
        for start in range(g.vertex_count):
            p = {e: x for e, x in edge_probabilities(g, start).items() if x}
            assert p == path_flow_oracle(g, start)

    def test_visits(self, tetra):
        assert visit_probabilities(tetra, 3) == [1, Fraction(1, 2), Fraction(1, 3), 1]

    def test_example2_units_of_eighths(self):
        g, s = example2(3)
        p = edge_probabilities(g, s)
        assert all((x * 8).denominator == 1 for x in p.values())
        gadget = load_gadget("example2")
        flow = gadget.internal_flow()
        assert sum(flow.values()) + 1 == Fraction(43, 8)

    def test_example3_units(self):
        g, s = example3(2)
        p = edge_probabilities(g, s)
        assert all((x * 128).denominator == 1 for x in p.values())
        assert sum(load_gadget("example3").internal_flow().values()) + 1 == Fraction(1721, 128)


class TestSimulate:
    def test_start_at_sink(self, tetra):
        st_ = simulate(tetra, 0, 100, seed=1)
        assert st_.mean == 0 and st_.histogram == {0: 100}

    def test_tetrahedron_statistics(self, tetra):
        st_ = simulate(tetra, 3, 100_000, seed=7)
        assert abs(st_.mean - 11 / 6) <= 4 * st_.stderr
        assert sum(st_.histogram.values()) == st_.trials
        assert st_.mean == sum(k * c for k, c in st_.histogram.items()) / st_.trials

    def test_deterministic(self):
        g, s = example2(2)
        a = simulate(g, s, 10_000, seed=3)
        b = simulate(g, s, 10_000, seed=3)
        assert a.histogram == b.histogram
        assert simulate(g, s, 10_000, seed=4).histogram != a.histogram

    def test_jobs_invariant(self):
        g, s = example2(2)
        assert simulate(g, s, 20_000, 5, jobs=1).histogram == \
            simulate(g, s, 20_000, 5, jobs=2).histogram

    def test_bad_trials(self, tetra):
        with pytest.raises(ValueError):
            simulate(tetra, 3, 0, 1)

    def test_three_way_choices_uniform(self):
        # first step from the tetrahedron top picks each lower neighbor about 1/3 of the time
        st_ = simulate(dual_cyclic(4), 3, 60_000, seed=11)
        # lengths 1, 2, 3 have probabilities 1/3, 1/3 + 1/6, 1/6
        expect = {1: 1 / 3, 2: 1 / 2, 3: 1 / 6}
        for k, pr in expect.items():
            assert abs(st_.histogram[k] / 60_000 - pr) < 0.01


class TestVertexBound:
    def test_reports_margins(self, tetra):
        r = check_theorem_32(tetra)
        assert r.margins[tetra.top] is None
        assert r.margins[0] == 0
        assert r.global_violations == []

    def test_bottom_triangle_excess(self, tetra):
        # v2 of the tetrahedron: E = 3/2 while 46/87 + 2 * 42/87 = 130/87
        r = check_theorem_32(tetra)
        assert r.margins[2] == Fraction(130, 87) - Fraction(3, 2) == Fraction(-1, 174)
        assert r.violations == [2]

    @given(any_family)
    def test_global_bound_holds(self, fam_param):
        g, _ = generate(*fam_param)
        assert check_theorem_32(g).global_violations == []
