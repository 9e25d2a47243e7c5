"""Simplicial homology with Z_p coefficients and induced maps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ComplexMismatchError, CycleError, DimensionError, ShapeError
from .field import FpMatrix, Subspace, as_p, kernel_basis, quotient_basis, rank, rref
from .simplicial import Chain, SimplicialComplex, SimplicialMap, boundary_matrix, push_chain

__all__ = [
    "HomologyGroup",
    "HomologyMap",
    "homology",
    "homology_rank",
    "induced_homology_map",
    "class_of",
]


def _column_space(m: FpMatrix) -> Subspace:
    r, rk, _ = rref(m.T)
    return Subspace(m.p, r.data[:rk], m.rows)


def _invert(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    r, rk, _ = rref(FpMatrix(p, np.hstack([a, np.eye(n, dtype=np.int64)])))
    assert rk >= n and np.array_equal(r.data[:, :n], np.eye(n, dtype=np.int64))
    return r.data[:, n:]


class HomologyGroup:
    """H_n(K; Z_p) with a fixed basis of representative cycles.

    ``representatives`` is a (rank x #n-simplices) array.  The basis is
    drawn from the kernel basis of the boundary map, which is itself fixed
    by the lexicographic order of simplices.
    """

    def __init__(self, K: SimplicialComplex, n: int, p):
        if n < 0:
            raise DimensionError("homology degree must be >= 0")
        self.complex = K
        self.n = n
        self.p = as_p(p)
        self.cycles = kernel_basis(boundary_matrix(K, n, self.p))
        self.boundaries = _column_space(boundary_matrix(K, n + 1, self.p))
        self.representatives = quotient_basis(self.cycles, self.boundaries)
        self.representatives.setflags(write=False)
        # coordinates of a cycle in the basis [boundaries ; representatives]
        basis = np.vstack([self.boundaries.basis, self.representatives])
        self._nb = self.boundaries.dim
        if basis.shape[0]:
            _, _, rows = rref(FpMatrix(self.p, basis))
            self._rows = np.array(rows, dtype=np.int64)
            self._solver = _invert(basis[:, self._rows].T % self.p, self.p)
        else:
            self._rows = np.zeros(0, dtype=np.int64)
            self._solver = np.zeros((0, 0), dtype=np.int64)

    @property
    def rank(self) -> int:
        return self.representatives.shape[0]

    def representative(self, i: int) -> Chain:
        return Chain.from_vector(self.complex, self.n, self.representatives[i], self.p)

    def representative_chains(self) -> list[Chain]:
        return [self.representative(i) for i in range(self.rank)]

    def chain(self, coords) -> Chain:
        """The cycle sum_i coords[i] * representative_i."""
        coords = np.asarray(coords, dtype=np.int64).reshape(-1)
        if coords.shape[0] != self.rank:
            raise ShapeError(f"{coords.shape[0]} coordinates for a rank-{self.rank} group")
        vec = (coords @ self.representatives) % self.p if self.rank else np.zeros(self.complex.count(self.n), dtype=np.int64)
        return Chain.from_vector(self.complex, self.n, vec, self.p)

    def is_cycle_vector(self, vec) -> bool:
        vec = np.asarray(vec, dtype=np.int64)
        return not np.any(boundary_matrix(self.complex, self.n, self.p).apply(vec))

    def coordinates(self, vec) -> np.ndarray:
        """Class coordinates of a cycle given as a coefficient vector."""
        vec = np.asarray(vec, dtype=np.int64) % self.p
        if not self.is_cycle_vector(vec):
            raise CycleError("chain is not a cycle")
        if not self._rows.size:
            return np.zeros(0, dtype=np.int64)
        full = (self._solver @ vec[self._rows]) % self.p
        return full[self._nb :]

    def __repr__(self) -> str:
        return f"HomologyGroup(n={self.n}, p={self.p}, rank={self.rank})"


def homology(K: SimplicialComplex, n: int, ctx) -> HomologyGroup:
    return HomologyGroup(K, n, ctx)


def homology_rank(K: SimplicialComplex, n: int, ctx) -> int:
    """rank ker d_n - rank im d_{n+1}, without building representatives."""
    p = as_p(ctx)
    d_n = boundary_matrix(K, n, p)
    return d_n.cols - rank(d_n) - rank(boundary_matrix(K, n + 1, p))


def class_of(z: Chain, H: HomologyGroup) -> np.ndarray:
    """Coordinates of the class of z; all zeros exactly when z bounds."""
    if z.complex != H.complex or z.dim != H.n or z.p != H.p:
        raise ComplexMismatchError("chain does not live in this homology group's chain group")
    return H.coordinates(z.to_vector())


@dataclass(frozen=True, eq=False)
class HomologyMap:
    source: HomologyGroup
    target: HomologyGroup
    matrix: FpMatrix

    def __matmul__(self, other: "HomologyMap") -> "HomologyMap":
        """``self after other``."""
        return HomologyMap(other.source, self.target, self.matrix @ other.matrix)

    def apply(self, coords) -> np.ndarray:
        return self.matrix.apply(coords)

    def is_isomorphism(self) -> bool:
        m = self.matrix
        return m.rows == m.cols and rank(m) == m.rows

    def is_zero(self) -> bool:
        return not np.any(self.matrix.data)


def _map_columns(f: SimplicialMap, source: HomologyGroup, target: HomologyGroup, reps) -> np.ndarray:
    cols = []
    for vec in reps:
        img = push_chain(f, Chain.from_vector(f.source, source.n, vec, source.p))
        cols.append(class_of(img, target))
    if not cols:
        return np.zeros((target.rank, 0), dtype=np.int64)
    return np.array(cols, dtype=np.int64).T.reshape(target.rank, len(cols))


def induced_homology_map(
    f: SimplicialMap,
    n: int,
    ctx,
    source: HomologyGroup | None = None,
    target: HomologyGroup | None = None,
) -> HomologyMap:
    """f_* : H_n(source) -> H_n(target) in the groups' chosen bases.

    Precomputed groups may be passed in to avoid recomputation; they must
    belong to f's source and target complexes.
    """
    p = as_p(ctx)
    source = source or HomologyGroup(f.source, n, p)
    target = target or HomologyGroup(f.target, n, p)
    if source.complex != f.source or target.complex != f.target:
        raise ComplexMismatchError("homology groups do not match the map")
    return HomologyMap(source, target, FpMatrix(p, _map_columns(f, source, target, source.representatives)))


def well_defined_on_perturbations(hmap: HomologyMap, f: SimplicialMap, seed: int = 0, trials: int = 5) -> bool:
    """Re-derive the matrix from representatives shifted by random boundaries."""
    src = hmap.source
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        reps = src.representatives.copy()
        if src.boundaries.dim:
            noise = rng.integers(0, src.p, size=(src.rank, src.boundaries.dim))
            reps = (reps + noise @ src.boundaries.basis) % src.p
        cols = _map_columns(f, src, hmap.target, reps)
        if not np.array_equal(cols % src.p, hmap.matrix.data):
            return False
    return True
