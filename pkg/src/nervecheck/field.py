"""Exact linear algebra over the prime field Z_p.

All matrices hold canonical residues in ``[0, p)`` as ``int64`` numpy
arrays.  Elimination always takes the first nonzero entry of a column as
pivot and never reorders rows otherwise, so results are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ContainmentError, NotPrimeError, ShapeError

__all__ = [
    "PrimeContext",
    "FpMatrix",
    "Subspace",
    "is_prime",
    "as_p",
    "first_primes",
    "rref",
    "rank",
    "kernel_basis",
    "quotient_basis",
    "quotient_rank",
    "solve",
    "fermat_geometric_failures",
]


def is_prime(n: int) -> bool:
    """Deterministic trial division; fine for the small primes used here."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def as_p(ctx) -> int:
    """Accept a :class:`PrimeContext` or a bare prime and return the prime."""
    if isinstance(ctx, PrimeContext):
        return ctx.p
    return PrimeContext(ctx).p


def first_primes(count: int) -> list[int]:
    out: list[int] = []
    n = 2
    while len(out) < count:
        if is_prime(n):
            out.append(n)
        n += 1
    return out


@dataclass(frozen=True)
class PrimeContext:
    """The coefficient field Z_p."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not is_prime(int(self.p)):
            raise NotPrimeError(f"p must be a prime > 1, got {self.p!r}")
        object.__setattr__(self, "p", int(self.p))

    def reduce(self, x: int) -> int:
        return int(x) % self.p

    def inv(self, x: int) -> int:
        x = self.reduce(x)
        if x == 0:
            raise ZeroDivisionError("0 has no inverse mod p")
        return pow(x, -1, self.p)

    def array(self, values) -> np.ndarray:
        return np.asarray(values, dtype=np.int64) % self.p

    def matrix(self, values) -> "FpMatrix":
        return FpMatrix(self.p, values)


class FpMatrix:
    """Immutable matrix over Z_p."""

    __slots__ = ("p", "data")

    def __init__(self, p: int, values):
        data = np.array(values, dtype=np.int64, copy=True)
        if data.ndim == 1 and data.size == 0:
            data = data.reshape(0, 0)
        if data.ndim != 2:
            raise ShapeError(f"FpMatrix needs a 2-d array, got shape {data.shape}")
        data %= p
        data.setflags(write=False)
        self.p = int(p)
        self.data = data

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls(p, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def T(self) -> "FpMatrix":
        return FpMatrix(self.p, self.data.T)

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if self.p != other.p:
            raise ShapeError("matrices over different fields")
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        return FpMatrix(self.p, (self.data @ other.data) % self.p)

    def apply(self, vec) -> np.ndarray:
        v = np.asarray(vec, dtype=np.int64)
        if v.shape != (self.cols,):
            raise ShapeError(f"vector of length {v.shape} for matrix {self.shape}")
        return (self.data @ v) % self.p

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(
            np.array_equal(self.data, other.data)
        )

    def __hash__(self):
        return hash((self.p, self.shape, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, {self.data.tolist()})"

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def rank(self) -> int:
        return rref(self)[1]


def _eliminate(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """In-place Gauss-Jordan elimination of ``a`` mod p; returns pivot columns."""
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m: FpMatrix) -> tuple[FpMatrix, int, list[int]]:
    """Reduced row-echelon form of ``m``.

    Returns ``(R, rank, pivot_columns)``.
    """
    a, pivots = _eliminate(m.data.copy(), m.p)
    return FpMatrix(m.p, a), len(pivots), pivots


def rank(m: FpMatrix) -> int:
    return rref(m)[1]


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of Z_p^ambient_dim given by independent row vectors."""

    p: int
    basis: np.ndarray
    ambient_dim: int

    def __post_init__(self):
        b = np.array(self.basis, dtype=np.int64).reshape(-1, self.ambient_dim) % self.p
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @classmethod
    def span(cls, p: int, vectors: Iterable[Sequence[int]], ambient_dim: int) -> "Subspace":
        """Independent basis of the span, taken greedily in the given order."""
        chosen: list[np.ndarray] = []
        echelon = np.zeros((0, ambient_dim), dtype=np.int64)
        for v in vectors:
            v = np.asarray(v, dtype=np.int64) % p
            if v.shape != (ambient_dim,):
                raise ShapeError(f"vector length {v.shape} != ambient {ambient_dim}")
            trial = np.vstack([echelon, v])
            reduced, piv = _eliminate(trial.copy(), p)
            if len(piv) > echelon.shape[0]:
                chosen.append(v)
                echelon = reduced[: len(piv)]
        return cls(p, np.array(chosen, dtype=np.int64).reshape(-1, ambient_dim), ambient_dim)

    @classmethod
    def full(cls, p: int, n: int) -> "Subspace":
        return cls(p, np.eye(n, dtype=np.int64), n)

    @classmethod
    def zero(cls, p: int, n: int) -> "Subspace":
        return cls(p, np.zeros((0, n), dtype=np.int64), n)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def contains(self, vec) -> bool:
        v = np.asarray(vec, dtype=np.int64).reshape(1, self.ambient_dim) % self.p
        stacked = FpMatrix(self.p, np.vstack([self.basis, v]))
        return rank(stacked) == self.dim

    def contains_subspace(self, other: "Subspace") -> bool:
        if other.ambient_dim != self.ambient_dim:
            return False
        stacked = FpMatrix(self.p, np.vstack([self.basis, other.basis]))
        return rank(stacked) == self.dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.p == other.p
            and self.dim == other.dim
            and self.contains_subspace(other)
        )


def kernel_basis(m: FpMatrix) -> Subspace:
    """Null space of ``m``, one basis vector per free column (ascending)."""
    r, rk, pivots = rref(m)
    n = m.cols
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = (-r.data[row, f]) % m.p
    return Subspace(m.p, basis, n)


def quotient_basis(V: Subspace, W: Subspace) -> np.ndarray:
    """Coset representatives, drawn from V's basis, for a basis of V/W."""
    if V.p != W.p or V.ambient_dim != W.ambient_dim:
        raise ContainmentError("subspaces live in different ambient spaces")
    if not V.contains_subspace(W):
        raise ContainmentError("W is not contained in V")
    p, n = V.p, V.ambient_dim
    echelon, piv = _eliminate(W.basis.copy(), p)
    echelon = echelon[: len(piv)]
    reps = []
    for v in V.basis:
        trial = np.vstack([echelon, v])
        reduced, newpiv = _eliminate(trial, p)
        if len(newpiv) > echelon.shape[0]:
            reps.append(v)
            echelon = reduced[: len(newpiv)]
    return np.array(reps, dtype=np.int64).reshape(-1, n)


def quotient_rank(V: Subspace, W: Subspace) -> int:
    """dim(V/W); raises :class:`ContainmentError` unless W is inside V."""
    return quotient_basis(V, W).shape[0]


def solve(a: FpMatrix, b) -> np.ndarray | None:
    """One solution x of a @ x = b, or None when the system is inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    b = np.asarray(b, dtype=np.int64).reshape(-1) % a.p
    if b.shape[0] != a.rows:
        raise ShapeError(f"rhs length {b.shape[0]} != rows {a.rows}")
    aug = np.hstack([a.data, b.reshape(-1, 1)])
    red, piv = _eliminate(aug.copy(), a.p)
    if a.cols in piv:
        return None
    x = np.zeros(a.cols, dtype=np.int64)
    for row, c in enumerate(piv):
        x[c] = red[row, -1]
    return x


def fermat_geometric_failures(p: int) -> list[int]:
    """Values x in [2, p) for which x^(p-1) = 1 or sum_{s=1}^{p-1} x^s = 0 fails mod p."""
    PrimeContext(p)
    bad = []
    for x in range(2, p):
        if pow(x, p - 1, p) != 1:
            bad.append(x)
            continue
        total, power = 0, 1
        for _ in range(1, p):
            power = power * x % p
            total += power
        if total % p:
            bad.append(x)
    return bad
