"""Finite metric spaces, covers, nerves and refinement projections.

An "open set" here is just a subset of a finite point sample.  Covers keep
their elements keyed by name; nerve vertex ``i`` is the ``i``-th element in
sorted name order, so ties are always broken lexicographically by name.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import InvalidCoverError, MetricError, NotARefinementError, SpaceMismatchError
from .simplicial import SimplicialComplex, SimplicialMap

__all__ = [
    "FiniteMetricSpace",
    "Cover",
    "NerveResult",
    "StarRefinement",
    "nerve",
    "order",
    "star_refines",
    "refines",
    "lebesgue_number",
    "mesh",
    "refinement_projection",
    "is_irreducible",
    "connected_components",
    "threshold_adjacency",
    "circle_sample",
    "circle_arcs",
]

_TRIANGLE_SLACK = 1e-9


class FiniteMetricSpace:
    """Points with a symmetric distance table.

    The triangle inequality is checked on every triple at construction.
    """

    def __init__(self, points: Iterable[int], distances, check: bool = True):
        self.points: tuple[int, ...] = tuple(int(x) for x in points)
        if len(set(self.points)) != len(self.points):
            raise MetricError("duplicate point ids")
        d = np.array(distances, dtype=np.float64)
        n = len(self.points)
        if d.shape != (n, n):
            raise MetricError(f"distance table has shape {d.shape}, expected {(n, n)}")
        if check:
            if np.any(d < 0):
                raise MetricError("negative distance")
            if np.any(np.diag(d) != 0):
                raise MetricError("nonzero self-distance")
            if not np.array_equal(d, d.T):
                raise MetricError("distance table is not symmetric")
            for j in range(n):
                if np.any(d > d[:, j, None] + d[None, j, :] + _TRIANGLE_SLACK):
                    raise MetricError(f"triangle inequality fails through point {self.points[j]}")
        d.setflags(write=False)
        self.distances = d
        self._pos = {x: i for i, x in enumerate(self.points)}

    def __contains__(self, x) -> bool:
        return x in self._pos

    def dist(self, a: int, b: int) -> float:
        return float(self.distances[self._pos[a], self._pos[b]])

    def diameter(self, subset: Iterable[int] | None = None) -> float:
        idx = [self._pos[x] for x in (self.points if subset is None else subset)]
        if len(idx) < 2:
            return 0.0
        return float(self.distances[np.ix_(idx, idx)].max())

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteMetricSpace):
            return NotImplemented
        return self.points == other.points and np.array_equal(self.distances, other.distances)

    def __hash__(self):
        return hash(self.points)


def circle_sample(n: int, radius: float = 1.0) -> FiniteMetricSpace:
    """n equally spaced points 0..n-1 on a circle with the chord metric."""
    k = np.arange(n)
    steps = np.abs(k[:, None] - k[None, :])
    d = 2.0 * radius * np.sin(np.pi * steps / n)
    np.fill_diagonal(d, 0.0)
    d = np.maximum(d, d.T)
    return FiniteMetricSpace(range(n), d, check=False)


class Cover:
    """Named nonempty point subsets whose union is the whole space.

    ``space`` is either a :class:`FiniteMetricSpace` or a plain collection
    of point ids (no metric).
    """

    def __init__(self, elements: Mapping[str, Iterable[int]], space=None):
        elems = {str(name): frozenset(int(x) for x in pts) for name, pts in elements.items()}
        if not elems:
            raise InvalidCoverError("a cover needs at least one element")
        empty = [n for n, pts in elems.items() if not pts]
        if empty:
            raise InvalidCoverError(f"empty cover element(s): {sorted(empty)}")
        union = frozenset().union(*elems.values())
        if space is None:
            self.metric = None
            self.points = union
        elif isinstance(space, FiniteMetricSpace):
            self.metric = space
            self.points = frozenset(space.points)
        else:
            self.metric = None
            self.points = frozenset(int(x) for x in space)
        stray = union - self.points
        if stray:
            raise InvalidCoverError(f"points {sorted(stray)[:5]} are not in the space")
        uncovered = self.points - union
        if uncovered:
            raise InvalidCoverError(f"points {sorted(uncovered)[:5]} are not covered")
        self.names: tuple[str, ...] = tuple(sorted(elems))
        self.elements: dict[str, frozenset[int]] = {n: elems[n] for n in self.names}

    def __len__(self) -> int:
        return len(self.names)

    def __getitem__(self, name: str) -> frozenset[int]:
        return self.elements[name]

    def containing(self, x: int) -> list[str]:
        return [n for n in self.names if x in self.elements[n]]

    def require_metric(self) -> FiniteMetricSpace:
        if self.metric is None:
            raise MetricError("this cover has no metric attached")
        return self.metric

    def same_space(self, other: "Cover") -> bool:
        if self.points != other.points:
            return False
        if self.metric is not None and other.metric is not None:
            return self.metric == other.metric
        return True


@dataclass(frozen=True)
class NerveResult:
    complex: SimplicialComplex
    names: tuple[str, ...]

    def vertex(self, name: str) -> int:
        return self.names.index(name)

    def name(self, vertex: int) -> str:
        return self.names[vertex]


def nerve(c: Cover) -> NerveResult:
    """Nerve of the cover: a simplex for each family with a common point."""
    index = {n: i for i, n in enumerate(c.names)}
    tops = {tuple(sorted(index[n] for n in c.containing(x))) for x in c.points}
    return NerveResult(SimplicialComplex(tops), c.names)


def order(c: Cover) -> int:
    """Largest number of elements sharing a point."""
    return max(len(c.containing(x)) for x in c.points)


@dataclass
class StarRefinement:
    ok: bool
    witness: dict[str, str | None] = field(default_factory=dict)

    @property
    def failures(self) -> list[str]:
        return [u for u, w in self.witness.items() if w is None]


def _check_same_space(a: Cover, b: Cover):
    if not a.same_space(b):
        raise SpaceMismatchError("covers live on different spaces")


def star_refines(fine: Cover, coarse: Cover) -> StarRefinement:
    """Does each star St(u, fine) fit inside some coarse element?

    The witness maps every fine element to the first (by name) coarse
    element containing its star, or None when there is none.
    """
    _check_same_space(fine, coarse)
    witness: dict[str, str | None] = {}
    for u in fine.names:
        pts = fine[u]
        star = frozenset().union(*(fine[v] for v in fine.names if fine[v] & pts))
        witness[u] = next((w for w in coarse.names if star <= coarse[w]), None)
    return StarRefinement(all(w is not None for w in witness.values()), witness)


def refines(fine: Cover, coarse: Cover) -> bool:
    _check_same_space(fine, coarse)
    return all(any(fine[u] <= coarse[w] for w in coarse.names) for u in fine.names)


def lebesgue_number(c: Cover) -> float:
    """min over points x of max over elements u containing x of d(x, complement of u).

    Returns ``math.inf`` when some element is the whole space.
    """
    space = c.require_metric()
    best = math.inf
    for x in sorted(c.points):
        reach = 0.0
        for n in c.containing(x):
            outside = c.points - c[n]
            if not outside:
                reach = math.inf
                break
            reach = max(reach, min(space.dist(x, y) for y in outside))
        best = min(best, reach)
    return best


def mesh(c: Cover) -> float:
    space = c.require_metric()
    return max(space.diameter(c[n]) for n in c.names)


def refinement_projection(fine: Cover, coarse: Cover) -> SimplicialMap:
    """Nerve map sending each fine element to the first coarse element containing it."""
    _check_same_space(fine, coarse)
    vm = {}
    for i, u in enumerate(fine.names):
        target = next((j for j, w in enumerate(coarse.names) if fine[u] <= coarse[w]), None)
        if target is None:
            raise NotARefinementError(f"element {u!r} lies in no element of the coarse cover")
        vm[i] = target
    return SimplicialMap(nerve(fine).complex, nerve(coarse).complex, vm)


def is_irreducible(c: Cover) -> bool:
    """True when no element can be dropped without uncovering a point."""
    for n in c.names:
        rest = frozenset().union(*(c[m] for m in c.names if m != n)) if len(c) > 1 else frozenset()
        if rest >= c.points:
            return False
    return True


def connected_components(vertices: Iterable[int], adjacency: Mapping[int, Iterable[int]]) -> list[frozenset[int]]:
    """Components of the subgraph induced on ``vertices``, ordered by least member."""
    todo = set(vertices)
    comps = []
    while todo:
        start = min(todo)
        stack, comp = [start], {start}
        todo.discard(start)
        while stack:
            v = stack.pop()
            for w in adjacency.get(v, ()):
                if w in todo:
                    todo.discard(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(frozenset(comp))
    return sorted(comps, key=min)


def threshold_adjacency(space: FiniteMetricSpace, eps: float) -> dict[int, set[int]]:
    """Points are adjacent when their distance is at most ``eps``."""
    adj: dict[int, set[int]] = {x: set() for x in space.points}
    for a in space.points:
        for b in space.points:
            if a != b and space.dist(a, b) <= eps:
                adj[a].add(b)
    return adj


def circle_arcs(
    space, n_arcs: int, length: int, offset: int = 0, prefix: str = "a"
) -> Cover:
    """Cover of a circle sample by ``n_arcs`` arcs of ``length`` consecutive points.

    Arc i starts at ``offset + i * stride`` with ``stride = n_points / n_arcs``.
    Names are zero-padded so that name order equals arc order.
    """
    n_points = len(space.points) if isinstance(space, FiniteMetricSpace) else int(space)
    if n_points % n_arcs:
        raise InvalidCoverError(f"{n_arcs} arcs do not divide {n_points} points evenly")
    stride = n_points // n_arcs
    width = len(str(n_arcs - 1))
    elems = {
        f"{prefix}{i:0{width}d}": [(offset + i * stride + t) % n_points for t in range(length)]
        for i in range(n_arcs)
    }
    return Cover(elems, space if isinstance(space, FiniteMetricSpace) else range(n_points))
