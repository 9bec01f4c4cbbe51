from fractions import Fraction

import pytest

from redge3.engine import expected_steps
from redge3.enumeration import admissible_orientations, generate_cubic_planar_3connected
from redge3.mk import validate_mihalisin_klee
from redge3.planar import is_three_connected
from redge3.sweep import START, canonical, closure_sweep, moves


def apex_form(g) -> bool:
    top = g.top
    d = g.down[top]
    if 0 not in d or top - 1 not in d:
        return False
    (side,) = [w for w in d if w not in (0, top - 1)]
    return len(g.down[side]) == 1


def brute_best(n: int) -> Fraction | None:
    best = None
    for rot in generate_cubic_planar_3connected(n):
        for g in admissible_orientations(rot, n):
            if apex_form(g):
                e = expected_steps(g)[g.top - 1]
                best = e if best is None else max(best, e)
    return best


@pytest.mark.parametrize("n", [5, 6, 7])
def test_sweep_matches_orientation_enumeration(n):
    result = closure_sweep(n)
    assert result.candidates[0][0] == brute_best(n)


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_candidates_are_valid(n):
    result = closure_sweep(n)
    values = [v for v, _ in result.candidates]
    assert values == sorted(values, reverse=True)
    for value, g in result.candidates:
        assert g.facet_count == n and g.vertex_count == 2 * n - 4
        assert apex_form(g)
        assert is_three_connected(g)
        assert expected_steps(g)[g.top - 1] == value


def test_lower_bound_prunes_without_losing_the_best():
    full = closure_sweep(7)
    best = full.candidates[0][0]
    pruned = closure_sweep(7, best)
    assert pruned.candidates[0][0] == best
    assert all(v >= best for v, _ in pruned.candidates)
    assert sum(pruned.states) <= sum(full.states)


def test_known_maxima():
    assert closure_sweep(6).candidates[0][0] == Fraction(35, 8)
    best = closure_sweep(6).candidates[0][1]
    assert validate_mihalisin_klee(best).accepted


def test_canonical_is_invariant():
    state = START
    for _ in range(4):
        d, i, _, state = next(iter(moves(canonical(state)[0])))
    key, perm = canonical(state)
    assert sorted(perm) == list(range(len(state[0])))
    assert canonical(key)[0] == key
