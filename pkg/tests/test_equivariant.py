from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nervecheck.covers import circle_sample
from nervecheck.equivariant import (
    EXHAUSTIVE_LIMIT,
    circulant_matrix,
    circulant_sigma,
    check_sigma_projection_commutes,
    closed_star,
    collapse_projection_check,
    component_count_check,
    distinguished_families,
    lemma5_dichotomy,
    lemma7_bruteforce,
    lemma7_family_sums,
    lemma7_sampled,
    make_action,
    newman_probe,
    orbit_quotient,
    rotation,
    sigma,
    verify_fiber_structure,
)
from nervecheck.errors import (
    AlignmentError,
    CycleError,
    FreenessError,
    GuardError,
    NotSimplicialError,
    OrderError,
    PartitionError,
    PreconditionError,
    RegularityError,
    SetupError,
    ShapeError,
)
from nervecheck.fixtures import cycle_graph
from nervecheck.homology import homology
from nervecheck.simplicial import Chain, SimplicialMap, boundary, build_complex, push_chain

from conftest import random_chain


def action(n: int, order: int | None = None, step: int = 1, p: int = 3, **kw):
    return make_action(cycle_graph(n), rotation(n, step), order or n, p, **kw)


def fundamental(n: int, p: int = 3) -> Chain:
    coeffs = {(i, i + 1): 1 for i in range(n - 1)}
    coeffs[(0, n - 1)] = -1
    return Chain(cycle_graph(n), 1, coeffs, p)


def edge(n: int, i: int, p: int = 3) -> Chain:
    return Chain(cycle_graph(n), 1, {tuple(sorted((i, (i + 1) % n))): 1}, p)


# -- actions and quotients ----------------------------------------------------


def test_make_action_examples():
    a = action(9)
    assert (a.order, a.k, a.p) == (9, 2, 3)
    b = action(9, order=3, step=3)
    assert b.k == 1
    with pytest.raises(RegularityError):
        action(3)
    assert action(3, regular=False).order == 3


def test_action_validation_errors():
    with pytest.raises(FreenessError):
        make_action(cycle_graph(9), {i: (-i) % 9 for i in range(9)}, 2, 2)
    with pytest.raises(FreenessError):
        make_action(build_complex([[0, 1]]), {0: 1, 1: 0}, 2, 2, regular=False)
    with pytest.raises(OrderError):
        make_action(cycle_graph(9), rotation(9), 3, 3)
    with pytest.raises(OrderError):
        make_action(cycle_graph(6), rotation(6), 6, 3)
    with pytest.raises(NotSimplicialError):
        make_action(cycle_graph(9), {i: (2 * i) % 9 for i in range(9)}, 9, 3)


def test_freeness_gives_full_orbits():
    for n, p in [(9, 3), (27, 3), (8, 2), (25, 5)]:
        a = make_action(cycle_graph(n), rotation(n), n, p)
        assert [len(o) for o in a.vertex_orbits(a.k)] == [n]
        for j in range(a.k + 1):
            assert all(len(o) == p**j for o in a.vertex_orbits(j))


def test_orbit_quotient_examples():
    a = action(9)
    m = orbit_quotient(a, 1)
    assert m.quotient == cycle_graph(3)
    assert all(len(f) == 3 for f in m.fibers.values())
    assert m.projection.vertex_map == {i: i % 3 for i in range(9)}
    assert m.deck == [0, 3, 6]
    m0 = orbit_quotient(a, 0)
    assert m0.quotient == a.complex
    assert m0.projection == SimplicialMap.identity(a.complex)


def test_quotient_composition_law():
    a27 = action(27)
    step1 = orbit_quotient(a27, 1)
    assert step1.quotient == cycle_graph(9)
    step2 = orbit_quotient(step1.induced_action(), 1)
    direct = orbit_quotient(a27, 2)
    assert step2.projection.compose(step1.projection) == direct.projection
    with pytest.raises(RegularityError):
        orbit_quotient(action(9), 2)
    with pytest.raises(SetupError):
        orbit_quotient(action(9), 3)


def test_distinguished_families_examples():
    m = orbit_quotient(action(9), 1)
    fams = distinguished_families(m, 1)
    as_edges = {img: sorted(mem) for img, mem in fams.families.items()}
    assert as_edges == {
        (0, 1): [(0, 1), (3, 4), (6, 7)],
        (0, 2): [(0, 8), (2, 3), (5, 6)],
        (1, 2): [(1, 2), (4, 5), (7, 8)],
    }
    assert fams.signs[(0, 8)] == 1 and fams.signs[(2, 3)] == -1
    f0 = distinguished_families(orbit_quotient(action(9), 0), 1)
    assert set(f0.cardinalities().values()) == {1}
    f27 = distinguished_families(orbit_quotient(action(27), 2), 1)
    assert sorted(f27.cardinalities().values()) == [9, 9, 9]


@pytest.mark.parametrize("n,p,j", [(9, 3, 1), (27, 3, 1), (27, 3, 2), (8, 2, 1), (16, 2, 2), (25, 5, 1)])
def test_family_cardinalities_are_powers_of_p(n, p, j):
    a = make_action(cycle_graph(n), rotation(n), n, p)
    for dim in (0, 1):
        for c in distinguished_families(orbit_quotient(a, j), dim).cardinalities().values():
            assert c == p**j


# -- fibre structure ----------------------------------------------------------


def test_fiber_structure_examples():
    m = orbit_quotient(action(9), 1)
    r = verify_fiber_structure(m, closed_star(m.quotient, (0, 1)))
    assert r.ok and r.count == 3 and r.clauses["deck_transitive"]
    whole = verify_fiber_structure(m, m.quotient.vertices)
    assert whole.ok and whole.count == 1
    m27 = orbit_quotient(action(27), 2)
    v = verify_fiber_structure(m27, [0])
    assert v.ok and v.count == 9 and v.exponent == 2
    with pytest.raises(PreconditionError):
        verify_fiber_structure(orbit_quotient(action(27), 1), [0, 4])


def test_component_count_examples():
    m = orbit_quotient(action(9), 1)
    r = component_count_check(m, [0, 1], [1, 2])
    assert r.ok and r.expected == 1 and r.meet_counts == [1, 1, 1]
    r = component_count_check(m, [0], [0, 1, 2])
    assert r.ok and (r.m_x, r.m_y, r.expected, r.meet_counts) == (1, 0, 3, [3])
    assert component_count_check(m, [0], [1]).status == "inapplicable"


# -- sigma --------------------------------------------------------------------


def test_sigma_examples():
    a = action(9)
    assert sigma(fundamental(9), a).is_zero()
    assert sigma(fundamental(9), a) == 3 * fundamental(9)
    assert sigma(Chain.zero(a.complex, 1, 3), a).is_zero()
    assert sigma(edge(9, 0), a) == edge(9, 0) + edge(9, 1) + edge(9, 2)


@given(st.integers(0, 2**32 - 1), st.integers(0, 2))
def test_sigma_is_linear(seed, s):
    a = action(9)
    rng = np.random.default_rng(seed)
    z, w = random_chain(a.complex, 1, 3, rng), random_chain(a.complex, 1, 3, rng)
    assert sigma(z + w, a) == sigma(z, a) + sigma(w, a)
    assert sigma(s * z, a) == s * sigma(z, a)


@given(st.integers(0, 2**32 - 1))
def test_sigma_maps_cycles_to_cycles(seed):
    a = action(27)
    H = homology(a.complex, 1, 3)
    rng = np.random.default_rng(seed)
    z = H.chain(rng.integers(0, 3, size=H.rank))
    assert boundary(sigma(z, a)).is_zero()
    v0 = random_chain(a.complex, 0, 3, rng)
    assert sigma(v0, a).dim == 0


def test_sigma_commutes_with_projection_examples():
    a9 = action(9)
    a3 = action(3, regular=False)
    q = orbit_quotient(a9, 1).projection
    z = edge(9, 0)
    assert check_sigma_projection_commutes(a9, q, a3, z)
    # oriented base edges ebar_i = gbar^i(ebar_0); ebar_2 = -[0, 2]
    ebar = [push_chain(a3.power_map(i), edge(3, 0)) for i in range(3)]
    assert ebar[2] == -edge(3, 2)
    assert push_chain(q, sigma(z, a9)) == ebar[0] + ebar[1] + ebar[2]
    assert sigma(push_chain(q, z), a3) == ebar[0] + ebar[1] + ebar[2]
    assert check_sigma_projection_commutes(a9, q, a3, Chain.zero(a9.complex, 1, 3))
    bad = make_action(cycle_graph(3), rotation(3, 2), 3, 3, regular=False)
    with pytest.raises(SetupError):
        check_sigma_projection_commutes(a9, q, bad, z)


def test_lemma5_examples():
    a = action(9)
    r = lemma5_dichotomy(fundamental(9), a)
    assert r.verdict == "zero" and r.homology_branch == "identity" and r.consistent
    assert r.translates_share_support
    r0 = lemma5_dichotomy(Chain.zero(a.complex, 1, 3), a)
    assert r0.verdict == "zero" and r0.homology_branch is None
    with pytest.raises(CycleError):
        lemma5_dichotomy(edge(9, 0), a)


def test_lemma5_records_neither_with_witness():
    # a 0-cycle on one vertex: sigma spreads it to three vertices
    a = action(9)
    z = Chain(a.complex, 0, {(0,): 1}, 3)
    r = lemma5_dichotomy(z, a)
    assert r.verdict == "neither" and r.witness is not None
    assert not r.translates_share_support


# -- circulant form and the sigma-kernel scan -----------------------------------


def test_circulant_examples():
    assert not circulant_sigma([1, 2, 0, 1, 2, 0, 1, 2, 0], 3).any()
    assert not circulant_sigma(np.zeros(9, dtype=int), 3).any()
    e1 = np.eye(9, dtype=int)[1]
    assert np.flatnonzero(circulant_sigma(e1, 3)).tolist() == [1, 2, 3]
    with pytest.raises(ShapeError):
        circulant_sigma([1, 2, 3, 4], 3)
    assert np.array_equal(circulant_matrix(3, 9) @ e1 % 3, circulant_sigma(e1, 3))


@given(st.lists(st.integers(0, 2), min_size=9, max_size=9))
def test_circulant_agrees_with_sigma_on_one_orbit(coeffs):
    # delta_i = g^i(delta_0) as oriented simplices; delta_8 = -[0, 8]
    a = action(9)
    deltas = [push_chain(a.power_map(i), edge(9, 0)) for i in range(9)]
    z = Chain.zero(a.complex, 1, 3)
    for c, d in zip(coeffs, deltas):
        z = z + c * d
    out = circulant_sigma(coeffs, 3)
    w = Chain.zero(a.complex, 1, 3)
    for c, d in zip(out, deltas):
        w = w + int(c) * d
    assert sigma(z, a) == w


def test_lemma7_family_sum_examples():
    m = orbit_quotient(action(9), 1)
    fams = distinguished_families(m, 1)
    assert set(lemma7_family_sums(fundamental(9), fams).values()) == {0}
    sums = lemma7_family_sums(edge(9, 0), fams)
    assert sums[(0, 1)] == 1
    assert set(lemma7_family_sums(Chain.zero(m.action.complex, 1, 3), fams).values()) == {0}
    with pytest.raises(PartitionError):
        lemma7_family_sums(Chain(cycle_graph(27), 1, {(20, 21): 1}, 3), fams)


@pytest.mark.parametrize("p,k", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
def test_lemma7_exhaustive(p, k):
    r = lemma7_bruteforce(p, k)
    assert r.ok and r.counts_match_ranks
    assert r.scanned == p ** (p**k)


def test_lemma7_small_cases():
    r = lemma7_bruteforce(2, 1)
    assert (r.scanned, r.zero_solutions, r.fixed_solutions) == (4, 2, 1)
    r = lemma7_bruteforce(3, 2)
    assert r.fixed_solutions == 1 and r.fixed_space_rank == 0
    with pytest.raises(GuardError):
        lemma7_bruteforce(5, 2)
    assert EXHAUSTIVE_LIMIT == 9


def test_lemma7_worker_count_does_not_change_report():
    base = lemma7_bruteforce(3, 2, workers=1)
    for w in (2, 3):
        assert lemma7_bruteforce(3, 2, workers=w) == base


def test_lemma7_sampled():
    r = lemma7_sampled(5, 2, samples=20_000, seed=7)
    assert r.ok and r.mode == "sampled"
    assert lemma7_sampled(5, 2, samples=500, seed=7) == lemma7_sampled(5, 2, samples=500, seed=7)


# -- collapse and Newman probe --------------------------------------------------


def test_collapse_examples():
    m = orbit_quotient(action(9), 1)
    fams = distinguished_families(m, 1)
    res = collapse_projection_check(fundamental(9), fams, m.projection)
    assert res.verdict == "zero" and res.projected.is_zero() and res.consistent
    assert set(res.family_sums.values()) == {0}
    zero = collapse_projection_check(Chain.zero(m.action.complex, 1, 3), fams, m.projection)
    assert zero.verdict == "zero"
    one = collapse_projection_check(edge(9, 0), fams, m.projection)
    assert one.verdict == "nonzero" and one.flagged == [(0, 1)] and one.consistent
    scramble = SimplicialMap(m.action.complex, cycle_graph(9), {i: i for i in range(9)})
    with pytest.raises(PreconditionError):
        collapse_projection_check(fundamental(9), fams, scramble)


def test_newman_probe_examples():
    a = action(9)
    S = circle_sample(9)
    d, v = newman_probe(orbit_quotient(a, 1), S)
    assert abs(d - math.sqrt(3)) < 1e-9 and v == 0
    assert newman_probe(a, S, 0) == (0.0, 0)
    d9, _ = newman_probe(a, S, 2)
    assert abs(d9 - 2 * math.sin(4 * math.pi / 9)) < 1e-9
    with pytest.raises(AlignmentError):
        newman_probe(a, circle_sample(5), 1)
    with pytest.raises(SetupError):
        newman_probe(a, S)
