"""Inverse systems of complexes, their homology diagram and finite limits.

Stage 0 is the coarsest complex; ``projections[m]`` maps stage ``m + 1``
to stage ``m``.  A factorization of ``projections[m]`` runs through an
intermediate complex: ``stage m+1 --alpha--> U --beta--> stage m``.

The inverse limit of the infinite system is not computable; every result
here is for the finite truncation actually supplied and says so through
its ``depth`` field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import DimensionError, FactorizationError, InapplicableError, NotSimplicialError
from .field import FpMatrix, Subspace, as_p, kernel_basis
from .homology import HomologyGroup, HomologyMap, induced_homology_map
from .simplicial import Chain, SimplicialComplex, SimplicialMap, skeleton

__all__ = [
    "Factorization",
    "Tower",
    "build_tower",
    "DiagramCell",
    "DiagramReport",
    "verify_diagram",
    "Thread",
    "LimitResult",
    "finite_inverse_limit",
    "coordinate_cycle",
    "lemma6_support_check",
]


@dataclass(frozen=True, eq=False)
class Factorization:
    intermediate: SimplicialComplex
    alpha: SimplicialMap
    beta: SimplicialMap


def _as_map(src: SimplicialComplex, dst: SimplicialComplex, f) -> SimplicialMap:
    if isinstance(f, SimplicialMap):
        if f.source != src or f.target != dst:
            raise NotSimplicialError("map does not connect the expected complexes")
        return f
    return SimplicialMap(src, dst, f)


@dataclass(frozen=True, eq=False)
class Tower:
    stages: tuple[SimplicialComplex, ...]
    projections: tuple[SimplicialMap, ...]
    factorizations: dict[int, Factorization] = field(default_factory=dict)
    mismatches: dict[int, list[int]] = field(default_factory=dict)

    @property
    def depth(self) -> int:
        return len(self.stages)

    def orders(self) -> list[int]:
        """Nerve order (dimension + 1) of each stage."""
        return [K.dim + 1 for K in self.stages]

    def intermediate_orders(self) -> dict[int, int]:
        return {m: f.intermediate.dim + 1 for m, f in self.factorizations.items()}

    def truncate(self, depth: int) -> "Tower":
        depth = max(1, min(depth, self.depth))
        return Tower(
            self.stages[:depth],
            self.projections[: depth - 1],
            {m: f for m, f in self.factorizations.items() if m < depth - 1},
            {m: v for m, v in self.mismatches.items() if m < depth - 1},
        )

    def composite(self, m: int) -> SimplicialMap:
        """Map from the finest stage down to stage m."""
        f = SimplicialMap.identity(self.stages[-1])
        for i in range(self.depth - 2, m - 1, -1):
            f = self.projections[i].compose(f)
        return f


def build_tower(
    stages: Sequence[SimplicialComplex],
    projections: Sequence,
    factorizations: Mapping[int, tuple] | None = None,
    *,
    strict: bool = True,
) -> Tower:
    """Validate and assemble a tower.

    ``projections`` may hold SimplicialMaps or plain vertex dicts.  Each
    factorization is ``(intermediate, alpha, beta)``.  When ``strict`` is
    False a composite that disagrees with the projection is recorded in
    ``Tower.mismatches`` instead of raising, so the diagram check can
    report the failing cell.
    """
    stages = tuple(stages)
    if not stages:
        raise DimensionError("a tower needs at least one stage")
    if len(projections) != len(stages) - 1:
        raise NotSimplicialError(f"{len(stages)} stages need {len(stages) - 1} projections, got {len(projections)}")
    projs = tuple(_as_map(stages[m + 1], stages[m], f) for m, f in enumerate(projections))
    facts: dict[int, Factorization] = {}
    mismatches: dict[int, list[int]] = {}
    for m, (inter, alpha, beta) in sorted((factorizations or {}).items()):
        if not 0 <= m < len(projs):
            raise FactorizationError(f"factorization for missing projection {m}")
        a = _as_map(stages[m + 1], inter, alpha)
        b = _as_map(inter, stages[m], beta)
        bad = [v for v in stages[m + 1].vertices if b(a(v)) != projs[m](v)]
        if bad:
            if strict:
                raise FactorizationError(
                    f"beta.alpha differs from projection {m} at vertices {bad[:5]}"
                )
            mismatches[m] = bad
        facts[m] = Factorization(inter, a, b)
    return Tower(stages, projs, facts, mismatches)


@dataclass
class DiagramCell:
    stage: int
    name: str
    ok: bool


@dataclass
class DiagramReport:
    n: int
    p: int
    depth: int
    cells: list[DiagramCell]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.cells)

    @property
    def failing(self) -> list[DiagramCell]:
        return [c for c in self.cells if not c.ok]


def _restrict(f: SimplicialMap, src: SimplicialComplex, dst: SimplicialComplex) -> SimplicialMap:
    return SimplicialMap(src, dst, {v: f(v) for v in src.vertices})


def verify_diagram(t: Tower, n: int, ctx) -> DiagramReport:
    """Compare the induced homology maps around every cell of the diagram.

    For each projection m: naturality of the skeleton inclusions nu against
    pi; and, when a factorization is present, beta*alpha* = pi* on skeleta
    and on full complexes plus nu-naturality of alpha and beta.
    """
    p = as_p(ctx)
    full = [HomologyGroup(K, n, p) for K in t.stages]
    skel_cx = [skeleton(K, n) for K in t.stages]
    skel = [HomologyGroup(K, n, p) for K in skel_cx]
    nu = [
        induced_homology_map(SimplicialMap.inclusion(s, K), n, p, hs, hf)
        for s, K, hs, hf in zip(skel_cx, t.stages, skel, full)
    ]
    cells: list[DiagramCell] = []

    def same(a: HomologyMap, b: HomologyMap) -> bool:
        return a.matrix == b.matrix

    for m, pi in enumerate(t.projections):
        pi_full = induced_homology_map(pi, n, p, full[m + 1], full[m])
        pi_skel = induced_homology_map(_restrict(pi, skel_cx[m + 1], skel_cx[m]), n, p, skel[m + 1], skel[m])
        cells.append(DiagramCell(m, "nu o pi* = pi* o nu", same(nu[m] @ pi_skel, pi_full @ nu[m + 1])))
        fac = t.factorizations.get(m)
        if fac is None:
            continue
        cells.append(DiagramCell(m, "beta o alpha = pi on vertices", m not in t.mismatches))
        U = fac.intermediate
        U_n = skeleton(U, n)
        hU, hUn = HomologyGroup(U, n, p), HomologyGroup(U_n, n, p)
        nu_U = induced_homology_map(SimplicialMap.inclusion(U_n, U), n, p, hUn, hU)
        a_full = induced_homology_map(fac.alpha, n, p, full[m + 1], hU)
        b_full = induced_homology_map(fac.beta, n, p, hU, full[m])
        a_skel = induced_homology_map(_restrict(fac.alpha, skel_cx[m + 1], U_n), n, p, skel[m + 1], hUn)
        b_skel = induced_homology_map(_restrict(fac.beta, U_n, skel_cx[m]), n, p, hUn, skel[m])
        cells.append(DiagramCell(m, "beta* o alpha* = pi* (skeleta)", same(b_skel @ a_skel, pi_skel)))
        cells.append(DiagramCell(m, "beta* o alpha* = pi* (nerves)", same(b_full @ a_full, pi_full)))
        cells.append(DiagramCell(m, "nu o alpha* = alpha* o nu", same(nu_U @ a_skel, a_full @ nu[m + 1])))
        cells.append(DiagramCell(m, "nu o beta* = beta* o nu", same(nu[m] @ b_skel, b_full @ nu_U)))
    return DiagramReport(n, p, t.depth, cells)


@dataclass(eq=False)
class Thread:
    """A compatible family of n-cycles, one per stage (stage 0 first)."""

    coordinates: list[np.ndarray]
    cycles: list[Chain]
    depth: int
    limit_rank: int
    tower: Tower | None = None

    def scale(self, s: int) -> "Thread":
        p = self.cycles[0].p
        return Thread(
            [(s * c) % p for c in self.coordinates],
            [s * z for z in self.cycles],
            self.depth,
            self.limit_rank,
            self.tower,
        )

    def is_zero_at(self, m: int) -> bool:
        return self.cycles[m].is_zero()


@dataclass
class LimitResult:
    n: int
    p: int
    depth: int
    limit_rank: int
    thread_space_rank: int
    stage_ranks: list[int]
    threads: list[Thread]
    rank_by_depth: list[int]
    maps: list[FpMatrix]

    def compatible(self, th: Thread) -> bool:
        for m, A in enumerate(self.maps):
            if not np.array_equal(A.apply(th.coordinates[m + 1]), th.coordinates[m] % self.p):
                return False
        return True


def finite_inverse_limit(t: Tower, n: int, ctx, depth: int | None = None) -> LimitResult:
    """Threads of H_n of the n-skeleta, truncated at ``depth`` stages.

    A thread is fixed by its finest coordinate x, with stage-m coordinate
    obtained by pushing x down.  The reported ``limit_rank`` is the rank of
    the image in stage 0, which can only drop as finer stages are added;
    ``thread_space_rank`` is the dimension of the full compatible system.
    ``threads`` is a basis of that system whose first ``limit_rank``
    members have independent stage-0 coordinates; the rest vanish at
    stage 0.
    """
    p = as_p(ctx)
    if depth is not None:
        t = t.truncate(depth)
    skel_cx = [skeleton(K, n) for K in t.stages]
    groups = [HomologyGroup(K, n, p) for K in skel_cx]
    maps = [
        induced_homology_map(_restrict(pi, skel_cx[m + 1], skel_cx[m]), n, p, groups[m + 1], groups[m]).matrix
        for m, pi in enumerate(t.projections)
    ]
    # composites[m]: finest -> stage m
    top = groups[-1].rank
    composites = [FpMatrix.identity(p, top)]
    for A in reversed(maps):
        composites.insert(0, A @ composites[0])
    rank_by_depth = []
    acc = None
    for m in range(t.depth):
        acc = FpMatrix.identity(p, groups[0].rank) if m == 0 else acc @ maps[m - 1]
        rank_by_depth.append(acc.rank())
    limit_rank = composites[0].rank()
    chosen: list[int] = []
    images: list[np.ndarray] = []
    for i in range(top):
        cand = images + [composites[0].data[:, i]]
        if Subspace.span(p, cand, groups[0].rank).dim == len(cand):
            chosen.append(i)
            images = cand
    # basis of the thread space: the chosen unit vectors first, then a basis
    # of the threads that vanish at stage 0
    xs = []
    for i in chosen:
        x = np.zeros(top, dtype=np.int64)
        x[i] = 1
        xs.append(x)
    xs.extend(kernel_basis(composites[0]).basis)
    threads = []
    for x in xs:
        coords = [C.apply(x) for C in composites]
        cycles = [g.chain(c) for g, c in zip(groups, coords)]
        threads.append(Thread(coords, cycles, t.depth, limit_rank, t))
    return LimitResult(
        n, p, t.depth, limit_rank, top, [g.rank for g in groups], threads, rank_by_depth, maps
    )


def coordinate_cycle(th: Thread, m: int) -> Chain:
    if not 0 <= m < len(th.cycles):
        raise IndexError(f"stage {m} outside 0..{len(th.cycles) - 1}")
    return th.cycles[m]


def lemma6_support_check(th1: Thread, th2: Thread, m: int) -> bool:
    """Do two nonzero threads of a rank-1 limit have the same support at stage m?"""
    if th1.tower is not th2.tower:
        raise InapplicableError("threads come from different towers")
    if th1.limit_rank != 1:
        raise InapplicableError(f"limit rank is {th1.limit_rank}, not 1")
    z1, z2 = coordinate_cycle(th1, m), coordinate_cycle(th2, m)
    if z1.is_zero() or z2.is_zero():
        raise InapplicableError("a thread is zero at this stage")
    return z1.support() == z2.support()
