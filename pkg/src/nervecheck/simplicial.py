"""Finite simplicial complexes, Z_p chains and simplicial maps.

Simplices are sorted vertex tuples.  The orientation of a simplex is the
one given by its sorted vertex order; a map whose image tuple is out of
order picks up the sign of the sorting permutation, and an image with a
repeated vertex (a degenerate simplex) is sent to the zero chain.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import ComplexMismatchError, DimensionError, NotSimplicialError
from .field import FpMatrix, as_p

Simplex = tuple[int, ...]

__all__ = [
    "Simplex",
    "simplex",
    "permutation_sign",
    "SimplicialComplex",
    "build_complex",
    "skeleton",
    "Chain",
    "boundary",
    "boundary_matrix",
    "SimplicialMap",
    "induced_chain_map",
    "push_chain",
    "barycentric_subdivision",
]


def simplex(vertices: Iterable[int]) -> Simplex:
    vs = tuple(sorted(int(v) for v in vertices))
    if not vs:
        raise DimensionError("a simplex needs at least one vertex")
    if len(set(vs)) != len(vs):
        raise DimensionError(f"repeated vertex in {vs}")
    return vs


def permutation_sign(seq: Iterable[int]) -> int:
    """Sign of the permutation that sorts ``seq``; 0 if it has repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    inversions = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


class SimplicialComplex:
    """An immutable finite simplicial complex.

    Use :func:`build_complex` to construct one from maximal simplices.
    Within each dimension simplices are kept in lexicographic order, which
    fixes the basis order of every chain group.
    """

    __slots__ = ("_by_dim", "_index", "_hash")

    def __init__(self, simplices: Iterable[Iterable[int]]):
        closed: set[Simplex] = set()
        for s in simplices:
            s = simplex(s)
            if s in closed:
                continue
            for k in range(1, len(s) + 1):
                closed.update(combinations(s, k))
        top = max((len(s) for s in closed), default=0)
        by_dim = [[] for _ in range(top)]
        for s in closed:
            by_dim[len(s) - 1].append(s)
        self._by_dim: tuple[tuple[Simplex, ...], ...] = tuple(tuple(sorted(d)) for d in by_dim)
        self._index = tuple({s: i for i, s in enumerate(d)} for d in self._by_dim)
        self._hash = hash(self._by_dim)

    @property
    def dim(self) -> int:
        return len(self._by_dim) - 1

    @property
    def vertices(self) -> tuple[int, ...]:
        if not self._by_dim:
            return ()
        return tuple(s[0] for s in self._by_dim[0])

    def simplices(self, n: int) -> tuple[Simplex, ...]:
        if n < 0 or n >= len(self._by_dim):
            return ()
        return self._by_dim[n]

    def all_simplices(self) -> Iterator[Simplex]:
        for d in self._by_dim:
            yield from d

    def count(self, n: int) -> int:
        return len(self.simplices(n))

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(d) for d in self._by_dim)

    def index(self, s: Simplex) -> int:
        return self._index[len(s) - 1][s]

    def __contains__(self, s) -> bool:
        s = tuple(s)
        n = len(s) - 1
        return 0 <= n < len(self._index) and s in self._index[n]

    def maximal_simplices(self) -> list[Simplex]:
        out = []
        for n, layer in enumerate(self._by_dim):
            cofaces = set()
            if n + 1 < len(self._by_dim):
                for t in self._by_dim[n + 1]:
                    cofaces.update(combinations(t, n + 1))
            out.extend(s for s in layer if s not in cofaces)
        return sorted(out, key=lambda s: (len(s), s))

    def neighbors(self) -> dict[int, set[int]]:
        """Edge-adjacency graph on the vertices."""
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for a, b in self.simplices(1):
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._by_dim == other._by_dim

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"SimplicialComplex(f_vector={self.f_vector()})"


def build_complex(maximal: Iterable[Iterable[int]]) -> SimplicialComplex:
    """Close a list of vertex sets under taking faces."""
    return SimplicialComplex(maximal)


def skeleton(K: SimplicialComplex, n: int) -> SimplicialComplex:
    if n < 0:
        raise DimensionError("skeleton dimension must be >= 0")
    if K.dim <= n:
        return K
    return SimplicialComplex(s for d in range(n + 1) for s in K.simplices(d))


class Chain:
    """A Z_p-linear combination of n-simplices of a fixed complex.

    Only nonzero coefficients are stored, always as residues in [1, p).
    """

    __slots__ = ("complex", "dim", "p", "_coeffs")

    def __init__(self, K: SimplicialComplex, dim: int, coeffs: Mapping, p):
        self.complex = K
        self.dim = int(dim)
        self.p = as_p(p)
        clean: dict[Simplex, int] = {}
        for s, c in coeffs.items():
            s = tuple(s)
            if len(s) != self.dim + 1:
                raise DimensionError(f"simplex {s} in a {self.dim}-chain")
            if s not in K:
                raise ComplexMismatchError(f"simplex {s} is not in the complex")
            c = (clean.get(s, 0) + int(c)) % self.p
            if c:
                clean[s] = c
            else:
                clean.pop(s, None)
        self._coeffs = clean

    @classmethod
    def zero(cls, K: SimplicialComplex, dim: int, p) -> "Chain":
        return cls(K, dim, {}, p)

    @classmethod
    def from_vector(cls, K: SimplicialComplex, dim: int, vec, p) -> "Chain":
        basis = K.simplices(dim)
        vec = np.asarray(vec, dtype=np.int64).reshape(-1)
        if vec.shape[0] != len(basis):
            raise DimensionError(f"vector length {vec.shape[0]} != {len(basis)} simplices")
        return cls(K, dim, {s: int(c) for s, c in zip(basis, vec) if c}, p)

    def to_vector(self) -> np.ndarray:
        v = np.zeros(self.complex.count(self.dim), dtype=np.int64)
        for s, c in self._coeffs.items():
            v[self.complex.index(s)] = c
        return v

    def coefficient(self, s: Iterable[int]) -> int:
        return self._coeffs.get(tuple(s), 0)

    def items(self) -> list[tuple[Simplex, int]]:
        return sorted(self._coeffs.items())

    def support(self) -> frozenset[Simplex]:
        return frozenset(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def _check(self, other: "Chain"):
        if not isinstance(other, Chain):
            raise TypeError(f"cannot combine Chain with {type(other).__name__}")
        if other.p != self.p or other.dim != self.dim or other.complex != self.complex:
            raise ComplexMismatchError("chains differ in complex, dimension or field")

    def __add__(self, other: "Chain") -> "Chain":
        self._check(other)
        out = dict(self._coeffs)
        for s, c in other._coeffs.items():
            out[s] = out.get(s, 0) + c
        return Chain(self.complex, self.dim, out, self.p)

    def __neg__(self) -> "Chain":
        return Chain(self.complex, self.dim, {s: -c for s, c in self._coeffs.items()}, self.p)

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __rmul__(self, scalar: int) -> "Chain":
        return Chain(self.complex, self.dim, {s: scalar * c for s, c in self._coeffs.items()}, self.p)

    __mul__ = __rmul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return (
            self.p == other.p
            and self.dim == other.dim
            and self.complex == other.complex
            and self._coeffs == other._coeffs
        )

    def __hash__(self):
        return hash((self.p, self.dim, tuple(self.items())))

    def __repr__(self) -> str:
        terms = " + ".join(f"{c}*{list(s)}" for s, c in self.items()) or "0"
        return f"Chain(dim={self.dim}, p={self.p}: {terms})"


def boundary(c: Chain) -> Chain:
    if c.dim < 1:
        raise DimensionError("the boundary of a 0-chain is not defined here")
    out: dict[Simplex, int] = {}
    for s, coef in c.items():
        for i in range(len(s)):
            face = s[:i] + s[i + 1 :]
            out[face] = out.get(face, 0) + (coef if i % 2 == 0 else -coef)
    return Chain(c.complex, c.dim - 1, out, c.p)


def boundary_matrix(K: SimplicialComplex, n: int, p) -> FpMatrix:
    """Matrix of the boundary C_n -> C_{n-1}; rows are (n-1)-simplices.

    For n = 0 the target is the zero group, so the matrix has no rows.
    """
    p = as_p(p)
    cols = K.simplices(n)
    if n == 0:
        return FpMatrix.zeros(p, 0, len(cols))
    rows = K.simplices(n - 1)
    m = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for j, s in enumerate(cols):
        for i in range(len(s)):
            face = s[:i] + s[i + 1 :]
            m[K.index(face), j] += 1 if i % 2 == 0 else -1
    return FpMatrix(p, m)


class SimplicialMap:
    """A vertex map between complexes that carries simplices onto simplices."""

    __slots__ = ("source", "target", "vertex_map")

    def __init__(self, source: SimplicialComplex, target: SimplicialComplex, vertex_map: Mapping[int, int]):
        vm = {int(a): int(b) for a, b in vertex_map.items()}
        missing = [v for v in source.vertices if v not in vm]
        if missing:
            raise NotSimplicialError(f"vertex map undefined on {missing[:5]}")
        for s in source.all_simplices():
            img = tuple(sorted({vm[v] for v in s}))
            if img not in target:
                raise NotSimplicialError(f"simplex {list(s)} maps to {list(img)}, not a simplex of the target")
        self.source = source
        self.target = target
        self.vertex_map = {v: vm[v] for v in source.vertices}

    @classmethod
    def identity(cls, K: SimplicialComplex) -> "SimplicialMap":
        return cls(K, K, {v: v for v in K.vertices})

    @classmethod
    def inclusion(cls, sub: SimplicialComplex, K: SimplicialComplex) -> "SimplicialMap":
        return cls(sub, K, {v: v for v in sub.vertices})

    def __call__(self, v: int) -> int:
        return self.vertex_map[v]

    def image(self, s: Simplex) -> tuple[Simplex, int]:
        """Image simplex and orientation sign; sign 0 marks a degenerate image."""
        img = [self.vertex_map[v] for v in s]
        sign = permutation_sign(img)
        return tuple(sorted(set(img))), sign

    def compose(self, first: "SimplicialMap") -> "SimplicialMap":
        """``self after first``."""
        if first.target != self.source:
            raise ComplexMismatchError("maps are not composable")
        return SimplicialMap(first.source, self.target, {v: self.vertex_map[w] for v, w in first.vertex_map.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.vertex_map == other.vertex_map

    def __hash__(self):
        return hash((self.source, self.target, tuple(sorted(self.vertex_map.items()))))

    def __repr__(self) -> str:
        return f"SimplicialMap({self.source!r} -> {self.target!r})"


def induced_chain_map(f: SimplicialMap, n: int, p) -> FpMatrix:
    """Matrix of f_# on n-chains (rows: target n-simplices, cols: source)."""
    p = as_p(p)
    src = f.source.simplices(n)
    m = np.zeros((f.target.count(n), len(src)), dtype=np.int64)
    for j, s in enumerate(src):
        img, sign = f.image(s)
        if sign:
            m[f.target.index(img), j] += sign
    return FpMatrix(p, m)


def push_chain(f: SimplicialMap, c: Chain) -> Chain:
    if c.complex != f.source:
        raise ComplexMismatchError("chain does not live on the map's source")
    out: dict[Simplex, int] = {}
    for s, coef in c.items():
        img, sign = f.image(s)
        if sign:
            out[img] = out.get(img, 0) + sign * coef
    return Chain(f.target, c.dim, out, c.p)


def barycentric_subdivision(K: SimplicialComplex) -> tuple[SimplicialComplex, dict[int, Simplex]]:
    """First barycentric subdivision.

    New vertex ids number the simplices of K by (dimension, lexicographic)
    order; the returned dict maps each new vertex to the simplex it is the
    barycenter of.
    """
    order = sorted(K.all_simplices(), key=lambda s: (len(s), s))
    ids = {s: i for i, s in enumerate(order)}
    flags: list[tuple[int, ...]] = []

    def extend(chain: list[Simplex]):
        top = chain[-1]
        if len(top) == 1:
            flags.append(tuple(ids[s] for s in chain))
            return
        for i in range(len(top)):
            extend(chain + [top[:i] + top[i + 1 :]])

    for s in K.maximal_simplices():
        extend([s])
    return SimplicialComplex(flags), {i: s for s, i in ids.items()}
