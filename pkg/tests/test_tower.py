from __future__ import annotations

import numpy as np
import pytest

from nervecheck.errors import FactorizationError, InapplicableError, NotSimplicialError
from nervecheck.fixtures import boundary_of_tetrahedron, circle_tower, cycle_graph, quotient_tower
from nervecheck.homology import homology
from nervecheck.simplicial import SimplicialMap, build_complex
from nervecheck.tower import (
    Thread,
    build_tower,
    coordinate_cycle,
    finite_inverse_limit,
    lemma6_support_check,
    verify_diagram,
)


@pytest.fixture(scope="module")
def circle():
    return circle_tower()


def corrupted_beta_tower(stage: int = 0):
    t = circle_tower()
    facts = {m: (f.intermediate, f.alpha, dict(f.beta.vertex_map)) for m, f in t.factorizations.items()}
    inter, alpha, beta = facts[stage]
    beta[0] = (beta[0] + 1) % len(t.stages[stage].vertices)
    return build_tower(t.stages, t.projections, facts, strict=False)


def test_circle_tower_shape(circle):
    assert circle.depth == 3
    assert [len(K.vertices) for K in circle.stages] == [3, 9, 27]
    assert circle.orders() == [2, 2, 2]
    assert circle.intermediate_orders() == {0: 2, 1: 2}
    assert not circle.mismatches


def test_build_tower_contract_cases(circle):
    single = build_tower([cycle_graph(3)], [])
    assert single.depth == 1
    f = circle.factorizations[0]
    wrong_beta = {v: (w + 1) % 3 for v, w in f.beta.vertex_map.items()}
    with pytest.raises(FactorizationError):
        build_tower(circle.stages, circle.projections, {0: (f.intermediate, f.alpha, wrong_beta)})
    with pytest.raises(NotSimplicialError):
        build_tower([cycle_graph(3), cycle_graph(9)], [])
    with pytest.raises(NotSimplicialError):
        build_tower([cycle_graph(3), cycle_graph(9)], [{i: i % 3 for i in range(9)} | {4: 4}])


def test_diagram_commutes_on_circle(circle):
    rep = verify_diagram(circle, 1, 3)
    assert rep.ok and len(rep.cells) == 12
    assert rep.depth == 3


def test_identity_tower_commutes():
    K = cycle_graph(5)
    ident = SimplicialMap.identity(K)
    t = build_tower([K, K, K], [ident, ident], {0: (K, ident, ident)})
    assert verify_diagram(t, 1, 5).ok


def test_corrupted_beta_is_reported_with_stage():
    rep = verify_diagram(corrupted_beta_tower(0), 1, 3)
    assert not rep.ok
    assert {c.stage for c in rep.failing} == {0}
    assert "beta o alpha = pi on vertices" in {c.name for c in rep.failing}


def test_limit_on_circle(circle):
    L = finite_inverse_limit(circle, 1, 3)
    assert (L.limit_rank, L.thread_space_rank, L.stage_ranks) == (1, 1, [1, 1, 1])
    assert all(L.compatible(th) for th in L.threads)
    th = L.threads[0]
    assert [len(z.support()) for z in th.cycles] == [3, 9, 27]
    for z in th.cycles:
        assert z.dim == 1 and not z.is_zero()


def test_limit_of_quotient_tower_is_zero():
    t = quotient_tower(3, 3)
    assert [len(K.vertices) for K in t.stages] == [3, 9, 27]
    L = finite_inverse_limit(t, 1, 3)
    assert L.stage_ranks == [1, 1, 1]
    assert L.limit_rank == 0
    assert L.thread_space_rank == len(L.threads) == 1
    for th in L.threads:
        assert not np.any(th.coordinates[0]) and th.is_zero_at(0)
        assert L.compatible(th)
    # over Z_2 the degree-3 wraps are isomorphisms
    assert finite_inverse_limit(t, 1, 2).limit_rank == 1


def test_single_stage_limit_rank_is_homology_rank():
    # stages are n-dimensional, as n-skeleta of nerves are
    for K, n in [(cycle_graph(7), 1), (boundary_of_tetrahedron(), 2), (build_complex([[0], [1], [2]]), 0)]:
        t = build_tower([K], [])
        assert finite_inverse_limit(t, n, 3).limit_rank == homology(K, n, 3).rank


def test_truncation_never_increases_rank(circle):
    for t, p in [(circle, 3), (quotient_tower(3, 3), 3), (quotient_tower(5, 2), 5)]:
        ranks = [finite_inverse_limit(t, 1, p, depth=d).limit_rank for d in range(1, t.depth + 1)]
        assert ranks == sorted(ranks, reverse=True)
        assert ranks == finite_inverse_limit(t, 1, p).rank_by_depth


def test_isomorphism_tower_keeps_stage0_rank(circle):
    L = finite_inverse_limit(circle, 1, 3)
    assert L.limit_rank == L.stage_ranks[0]


def test_coordinate_cycles(circle):
    th = finite_inverse_limit(circle, 1, 3).threads[0]
    top = coordinate_cycle(th, 2)
    assert len(top.support()) == 27 and len(top.complex.vertices) == 27
    assert len(coordinate_cycle(th, 0).support()) == 3
    with pytest.raises(IndexError):
        coordinate_cycle(th, 3)


def test_lemma6_support(circle):
    th = finite_inverse_limit(circle, 1, 3).threads[0]
    for m in range(3):
        assert lemma6_support_check(th, th.scale(2), m)
        assert lemma6_support_check(th, th, m)
    zero = Thread(
        [c * 0 for c in th.coordinates],
        [0 * z for z in th.cycles],
        th.depth,
        th.limit_rank,
        th.tower,
    )
    with pytest.raises(InapplicableError):
        lemma6_support_check(th, zero, 0)
    other = finite_inverse_limit(circle_tower(), 1, 3).threads[0]
    with pytest.raises(InapplicableError):
        lemma6_support_check(th, other, 0)
    q = finite_inverse_limit(quotient_tower(), 1, 3).threads[0]
    with pytest.raises(InapplicableError):
        lemma6_support_check(q, q, 2)
