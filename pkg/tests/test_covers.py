from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nervecheck.covers import (
    Cover,
    FiniteMetricSpace,
    circle_arcs,
    circle_sample,
    connected_components,
    is_irreducible,
    lebesgue_number,
    mesh,
    nerve,
    order,
    refinement_projection,
    refines,
    star_refines,
    threshold_adjacency,
)
from nervecheck.errors import InvalidCoverError, MetricError, NotARefinementError, SpaceMismatchError
from nervecheck.homology import induced_homology_map
from nervecheck.simplicial import SimplicialMap


def triangle_space():
    return FiniteMetricSpace([0, 1, 2], [[0, 1, 1], [1, 0, 1], [1, 1, 0]])


def test_metric_validation():
    with pytest.raises(MetricError):
        FiniteMetricSpace([0, 1], [[0, -1], [-1, 0]])
    with pytest.raises(MetricError):
        FiniteMetricSpace([0, 1], [[0, 1], [2, 0]])
    with pytest.raises(MetricError):
        FiniteMetricSpace([0, 1, 2], [[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    S = circle_sample(6)
    assert S.dist(0, 3) == pytest.approx(2.0)


def test_cover_validation():
    with pytest.raises(InvalidCoverError):
        Cover({"a": []}, [0])
    with pytest.raises(InvalidCoverError):
        Cover({"a": [0]}, [0, 1])
    with pytest.raises(InvalidCoverError):
        Cover({"a": [0, 5]}, [0, 1])


def test_three_arc_nerve():
    S = circle_sample(6)
    c = circle_arcs(S, 3, 3)
    N = nerve(c)
    assert N.complex.f_vector() == (3, 3)
    assert order(c) == 2
    assert mesh(c) == pytest.approx(math.sqrt(3))


def test_nerve_extremes():
    disjoint = Cover({"a": [0], "b": [1], "c": [2]})
    assert nerve(disjoint).complex.f_vector() == (3,)
    assert order(disjoint) == 1
    shared = Cover({"a": [0, 1], "b": [0, 2], "c": [0, 3], "d": [0]})
    assert nerve(shared).complex.f_vector() == (4, 6, 4, 1)
    assert order(shared) == 4


def test_star_refinement_examples():
    S = circle_sample(18)
    fine, coarse = circle_arcs(S, 9, 3, -1), circle_arcs(S, 3, 12, -3)
    r = star_refines(fine, coarse)
    assert r.ok and all(r.witness.values())
    self_check = star_refines(fine, fine)
    assert not self_check.ok and self_check.failures
    whole = Cover({"all": range(18)}, S)
    assert star_refines(fine, whole).ok
    with pytest.raises(SpaceMismatchError):
        star_refines(fine, circle_arcs(circle_sample(9), 3, 3))


def test_lebesgue_examples():
    T = triangle_space()
    pairs = Cover({"a": [0, 1], "b": [1, 2], "c": [0, 2]}, T)
    assert lebesgue_number(pairs) == 1
    assert lebesgue_number(Cover({"x": [0, 1, 2]}, T)) == math.inf
    S = circle_sample(6)
    singles = Cover({str(i): [i] for i in range(6)}, S)
    assert lebesgue_number(singles) == pytest.approx(S.distances[0, 1])
    assert mesh(singles) == 0
    assert mesh(Cover({"x": range(6)}, S)) == S.diameter()


def test_refinement_projection_examples():
    S = circle_sample(18)
    fine, coarse = circle_arcs(S, 9, 3, -1), circle_arcs(S, 3, 12, -3)
    pi = refinement_projection(fine, coarse)
    assert induced_homology_map(pi, 1, 3).is_isomorphism()
    assert refinement_projection(fine, fine) == SimplicialMap.identity(nerve(fine).complex)
    with pytest.raises(NotARefinementError):
        refinement_projection(coarse, fine)


def test_projection_tie_break_is_lexicographic():
    # "u" fits in both coarse elements; the projection must pick "a"
    coarse = Cover({"b": [0, 1], "a": [0]}, [0, 1])
    c_fine = Cover({"u": [0], "v": [1]}, [0, 1])
    pi = refinement_projection(c_fine, coarse)
    assert coarse.names[pi(0)] == "a"


def test_irreducible_and_components():
    assert is_irreducible(circle_arcs(circle_sample(6), 3, 3))
    assert not is_irreducible(Cover({"a": [0, 1], "b": [1], "c": [0]}))
    S = circle_sample(12)
    adj = threshold_adjacency(S, S.dist(0, 1) + 1e-12)
    assert len(connected_components([0, 1, 2, 6, 7], adj)) == 2


@st.composite
def random_covers(draw):
    n = draw(st.integers(2, 9))
    k = draw(st.integers(1, 5))
    elems = {f"e{i}": draw(st.sets(st.integers(0, n - 1), min_size=1)) for i in range(k)}
    # make sure every point is covered
    for x in range(n):
        elems[f"e{draw(st.integers(0, k - 1))}"].add(x)
    pts = draw(st.lists(st.floats(-5, 5), min_size=n, max_size=n))
    d = np.abs(np.subtract.outer(np.array(pts), np.array(pts)))
    return Cover(elems, FiniteMetricSpace(range(n), d))


@given(random_covers())
def test_nerve_simplices_are_exactly_intersecting_families(c):
    N = nerve(c)
    assert N.complex.dim <= order(c) - 1
    for s in N.complex.all_simplices():
        assert frozenset.intersection(*(c[N.names[i]] for i in s))


@given(random_covers(), st.data())
def test_nerve_is_monotone(c, data):
    name = data.draw(st.sampled_from(c.names))
    x = data.draw(st.sampled_from(sorted(c.points)))
    bigger = Cover({n: set(c[n]) | ({x} if n == name else set()) for n in c.names}, c.metric)
    small = set(nerve(c).complex.all_simplices())
    assert small <= set(nerve(bigger).complex.all_simplices())


@given(random_covers())
def test_lebesgue_balls_lie_in_one_element(c):
    ell = lebesgue_number(c)
    S = c.metric
    for x in S.points:
        for r in sorted({S.dist(x, y) for y in S.points}):
            if r >= ell:
                break
            ball = {y for y in S.points if S.dist(x, y) <= r}
            assert any(ball <= c[n] for n in c.names)


@given(random_covers(), st.data())
def test_star_refinement_implies_refinement_and_projection_is_carrier(a, data):
    # coarse cover: random unions of elements of a, plus one random extra set
    groups = data.draw(st.lists(st.sets(st.sampled_from(a.names), min_size=1), min_size=1, max_size=4))
    elems = {f"g{i}": frozenset().union(*(a[n] for n in g)) for i, g in enumerate(groups)}
    elems["rest"] = frozenset(data.draw(st.sets(st.sampled_from(sorted(a.points)), min_size=1)))
    covered = frozenset().union(*elems.values())
    if covered != a.points:
        elems["fill"] = a.points - covered
    b = Cover(elems, a.metric)
    if star_refines(a, b).ok:
        assert refines(a, b)
    if refines(a, b):
        pi = refinement_projection(a, b)
        Nb = nerve(b).complex
        for s in nerve(a).complex.all_simplices():
            assert tuple(sorted({pi(v) for v in s})) in Nb
