"""Finite cyclic stages of a p-adic action on a simplicial complex.

A :class:`CyclicAction` is a free simplicial automorphism ``g`` of order
``p**k``.  The subgroup of order ``p**j`` is generated by
``g**(p**(k-j))``; ``j = 0`` is the trivial subgroup and ``j = k`` the whole
group.  :func:`orbit_quotient` divides by that subgroup.

The chain operator ``sigma`` sums the first ``p`` powers of ``g``.  The
remaining functions check, on concrete instances, the combinatorial facts
the transfer argument relies on: fibre decompositions, component counts,
the dichotomy sigma(z) in {0, z}, coefficient sums over distinguished
families, and the collapse of a cycle under a family-constant projection.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .covers import FiniteMetricSpace, connected_components
from .errors import (
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
from .field import FpMatrix, as_p, kernel_basis
from .homology import HomologyGroup, class_of, induced_homology_map
from .simplicial import (
    Chain,
    Simplex,
    SimplicialComplex,
    SimplicialMap,
    boundary,
    permutation_sign,
    push_chain,
)

__all__ = [
    "CyclicAction",
    "make_action",
    "rotation",
    "OrbitMapModel",
    "orbit_quotient",
    "FamilyPartition",
    "distinguished_families",
    "closed_star",
    "FiberReport",
    "verify_fiber_structure",
    "ComponentCountReport",
    "component_count_check",
    "sigma",
    "check_sigma_projection_commutes",
    "Lemma5Result",
    "lemma5_dichotomy",
    "circulant_sigma",
    "circulant_matrix",
    "lemma7_family_sums",
    "Lemma7Report",
    "lemma7_bruteforce",
    "lemma7_sampled",
    "CollapseResult",
    "collapse_projection_check",
    "newman_probe",
    "EXHAUSTIVE_LIMIT",
]

# largest vector length p**k scanned exhaustively
EXHAUSTIVE_LIMIT = 9


def _log_p(n: int, p: int) -> int | None:
    """k with p**k == n, or None."""
    k = 0
    while n % p == 0 and n > 1:
        n //= p
        k += 1
    return k if n == 1 else None


class CyclicAction:
    """A validated free action of Z/p^k on a complex through one generator."""

    def __init__(self, K: SimplicialComplex, generator: Mapping[int, int], order: int, p, *, regular: bool = True):
        self.p = as_p(p)
        self.complex = K
        k = _log_p(int(order), self.p)
        if k is None or k < 1:
            raise OrderError(f"order {order} is not a positive power of p={self.p}")
        self.order = int(order)
        self.k = k
        g = {int(a): int(b) for a, b in generator.items()}
        verts = K.vertices
        if set(g) != set(verts) or sorted(g.values()) != sorted(verts):
            raise NotSimplicialError("generator is not a permutation of the vertices")
        try:
            self.g = SimplicialMap(K, K, g)
        except NotSimplicialError as exc:
            raise NotSimplicialError(f"generator is not simplicial: {exc}") from None
        idx = {v: i for i, v in enumerate(verts)}
        perm = np.array([idx[g[v]] for v in verts], dtype=np.int64)
        self._verts = np.array(verts, dtype=np.int64)
        powers = [np.arange(len(verts), dtype=np.int64)]
        for _ in range(self.order):
            powers.append(perm[powers[-1]])
        if not np.array_equal(powers[self.order], powers[0]):
            raise OrderError(f"g**{self.order} is not the identity")
        self._powers = powers[: self.order]
        self._check_free()
        if regular:
            _check_regular(self, 1)

    def power(self, s: int) -> dict[int, int]:
        perm = self._powers[s % self.order]
        return dict(zip(self._verts.tolist(), self._verts[perm].tolist()))

    def power_map(self, s: int) -> SimplicialMap:
        return SimplicialMap(self.complex, self.complex, self.power(s))

    def apply(self, s: int, simplex_: Iterable[int]) -> Simplex:
        gs = self.power(s)
        return tuple(sorted(gs[v] for v in simplex_))

    def subgroup_step(self, j: int) -> int:
        """Exponent e with <g**e> the subgroup of order p**j."""
        if not 0 <= j <= self.k:
            raise SetupError(f"subgroup index j={j} outside 0..{self.k}")
        return self.p ** (self.k - j)

    def subgroup(self, j: int) -> list[int]:
        """Exponents s of the subgroup elements g**s, identity first."""
        step = self.subgroup_step(j)
        return list(range(0, self.order, step))

    def vertex_orbits(self, j: int) -> list[frozenset[int]]:
        """Orbits of the order-p**j subgroup, sorted by least vertex."""
        seen: set[int] = set()
        orbits = []
        maps = [self.power(s) for s in self.subgroup(j)]
        for v in self.complex.vertices:
            if v in seen:
                continue
            orb = frozenset(m[v] for m in maps)
            seen |= orb
            orbits.append(orb)
        return sorted(orbits, key=min)

    def _check_free(self):
        for s in range(1, self.order):
            gs = self.power(s)
            fixed = [v for v, w in gs.items() if v == w]
            if fixed:
                raise FreenessError(f"g**{s} fixes vertex {fixed[0]}")
            for t in self.complex.all_simplices():
                if len(t) > 1 and tuple(sorted(gs[v] for v in t)) == t:
                    raise FreenessError(f"g**{s} maps simplex {list(t)} to itself")

    def __repr__(self) -> str:
        return f"CyclicAction(order={self.order}, p={self.p}, {self.complex!r})"


def make_action(K: SimplicialComplex, g: Mapping[int, int], order: int, p, *, regular: bool = True) -> CyclicAction:
    """Validate g as a free action of order ``order``.

    With ``regular=True`` (the default) the order-p subgroup must also act
    regularly, i.e. the action must admit at least one simplicial quotient.
    """
    return CyclicAction(K, g, order, p, regular=regular)


def rotation(n: int, step: int = 1) -> dict[int, int]:
    return {i: (i + step) % n for i in range(n)}


def _check_regular(a: CyclicAction, j: int):
    """No simplex meets a nontrivial translate, and simplex fibres are single orbits."""
    elems = a.subgroup(j)[1:]
    maps = [a.power(s) for s in elems]
    for t in a.complex.all_simplices():
        ts = set(t)
        for s, m in zip(elems, maps):
            if ts & {m[v] for v in t}:
                raise RegularityError(
                    f"simplex {list(t)} meets its translate under g**{s}; "
                    "the quotient would not be simplicial (subdivide the complex first)"
                )


@dataclass(frozen=True, eq=False)
class OrbitMapModel:
    """Quotient of an action by its subgroup of order p**j."""

    action: CyclicAction
    j: int
    quotient: SimplicialComplex
    projection: SimplicialMap
    fibers: dict[int, frozenset[int]]

    @property
    def p(self) -> int:
        return self.action.p

    @property
    def deck(self) -> list[int]:
        """Exponents s of the deck transformations g**s."""
        return self.action.subgroup(self.j)

    def induced_action(self, *, regular: bool = False) -> CyclicAction:
        """The action of Z/p^(k-j) on the quotient induced by g."""
        if self.j == self.action.k:
            raise SetupError("the full-group quotient carries only the trivial action")
        q = self.projection.vertex_map
        g = self.action.power(1)
        gbar = {q[v]: q[g[v]] for v in self.action.complex.vertices}
        return CyclicAction(self.quotient, gbar, self.action.order // self.p**self.j, self.p, regular=regular)


def orbit_quotient(a: CyclicAction, j: int) -> OrbitMapModel:
    """Orbit map of the order-p**j subgroup; quotient vertices are numbered by least orbit member."""
    a.subgroup_step(j)
    if j > 0:
        _check_regular(a, j)
    orbits = a.vertex_orbits(j)
    label = {}
    for i, orb in enumerate(orbits):
        for v in orb:
            label[v] = i
    quotient = SimplicialComplex(tuple(label[v] for v in s) for s in a.complex.maximal_simplices())
    proj = SimplicialMap(a.complex, quotient, label)
    size = len(a.subgroup(j))
    for n in range(a.complex.dim + 1):
        counts: dict[Simplex, int] = {}
        for s in a.complex.simplices(n):
            img, sign = proj.image(s)
            if not sign:
                raise RegularityError(f"simplex {list(s)} collapses in the quotient")
            counts[img] = counts.get(img, 0) + 1
        bad = [img for img, c in counts.items() if c != size]
        if bad:
            raise RegularityError(f"fibre over {list(bad[0])} is not a single orbit")
    return OrbitMapModel(a, j, quotient, proj, {i: orb for i, orb in enumerate(orbits)})


@dataclass(frozen=True)
class FamilyPartition:
    """n-simplices grouped by their image in the quotient.

    ``signs[s]`` is the orientation of member ``s`` relative to the image
    simplex, so every family carries the orientation of its image.
    """

    dim: int
    p: int
    families: dict[Simplex, tuple[Simplex, ...]]
    signs: dict[Simplex, int]

    def family_of(self, s: Simplex) -> Simplex:
        for img, members in self.families.items():
            if s in members:
                return img
        raise PartitionError(f"simplex {list(s)} is in no family")

    def cardinalities(self) -> dict[Simplex, int]:
        return {img: len(m) for img, m in self.families.items()}

    def members(self) -> set[Simplex]:
        return {s for m in self.families.values() for s in m}


def distinguished_families(m: OrbitMapModel, n: int) -> FamilyPartition:
    families: dict[Simplex, list[Simplex]] = {}
    signs: dict[Simplex, int] = {}
    for s in m.action.complex.simplices(n):
        img, sign = m.projection.image(s)
        families.setdefault(img, []).append(s)
        signs[s] = sign
    return FamilyPartition(
        n, m.p, {img: tuple(families[img]) for img in sorted(families)}, signs
    )


def closed_star(K: SimplicialComplex, s: Iterable[int]) -> frozenset[int]:
    """Vertices of the closed star of a simplex."""
    s = set(s)
    out: set[int] = set()
    for t in K.all_simplices():
        if s <= set(t):
            out.update(t)
    return frozenset(out)


def _is_power_of(n: int, p: int) -> int | None:
    return _log_p(n, p) if n >= 1 else None


def _preimage_components(m: OrbitMapModel, base: frozenset[int]) -> list[frozenset[int]]:
    pre = [v for v, w in m.projection.vertex_map.items() if w in base]
    return connected_components(pre, m.action.complex.neighbors())


def _require_connected(m: OrbitMapModel, base: frozenset[int], what: str = "base subset"):
    missing = base - set(m.quotient.vertices)
    if missing:
        raise PreconditionError(f"{what} has vertices {sorted(missing)} outside the quotient")
    if not base or len(connected_components(base, m.quotient.neighbors())) != 1:
        raise PreconditionError(f"{what} {sorted(base)} is not connected in the quotient")


@dataclass
class FiberReport:
    base: tuple[int, ...]
    components: list[tuple[int, ...]]
    exponent: int | None
    clauses: dict[str, bool]

    @property
    def count(self) -> int:
        return len(self.components)

    @property
    def ok(self) -> bool:
        return all(self.clauses.values())


def verify_fiber_structure(m: OrbitMapModel, base: Iterable[int]) -> FiberReport:
    """Check the fibre decomposition over a connected set of quotient vertices.

    Clauses: the number of components is p**s with s <= k; no simplex of
    the total complex touches two components (disjoint closures); each
    component maps onto the base; the deck group permutes the components
    transitively.
    """
    base = frozenset(int(v) for v in base)
    _require_connected(m, base)
    comps = _preimage_components(m, base)
    s = _is_power_of(len(comps), m.p)
    owner = {v: i for i, c in enumerate(comps) for v in c}
    separated = True
    for t in m.action.complex.all_simplices():
        hit = {owner[v] for v in t if v in owner}
        if len(hit) > 1:
            separated = False
            break
    q = m.projection.vertex_map
    onto = all(frozenset(q[v] for v in c) == base for c in comps)
    first = comps[0]
    translates = {frozenset(m.action.power(e)[v] for v in first) for e in m.deck}
    transitive = translates == set(comps)
    clauses = {
        "power_of_p": s is not None and s <= m.action.k,
        "closures_disjoint": separated,
        "maps_onto": onto,
        "deck_transitive": transitive,
    }
    return FiberReport(tuple(sorted(base)), [tuple(sorted(c)) for c in comps], s, clauses)


@dataclass
class ComponentCountReport:
    status: str  # "ok", "failed" or "inapplicable"
    m_x: int | None = None
    m_y: int | None = None
    expected: int | None = None
    meet_counts: list[int] = field(default_factory=list)
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def component_count_check(m: OrbitMapModel, r_x: Iterable[int], r_y: Iterable[int]) -> ComponentCountReport:
    """Each component over r_y meets exactly p**(m_x - m_y) components over r_x."""
    r_x = frozenset(int(v) for v in r_x)
    r_y = frozenset(int(v) for v in r_y)
    if not r_x & r_y:
        return ComponentCountReport("inapplicable", reason="base subsets are disjoint")
    try:
        _require_connected(m, r_x, "r_x")
        _require_connected(m, r_y, "r_y")
    except PreconditionError as exc:
        return ComponentCountReport("inapplicable", reason=str(exc))
    cx = _preimage_components(m, r_x)
    cy = _preimage_components(m, r_y)
    mx, my = _is_power_of(len(cx), m.p), _is_power_of(len(cy), m.p)
    if mx is None or my is None:
        return ComponentCountReport("inapplicable", mx, my, reason="component counts are not powers of p")
    if mx < my:
        return ComponentCountReport("inapplicable", mx, my, reason="m_x < m_y")
    expected = m.p ** (mx - my)
    counts = [sum(1 for a in cx if a & b) for b in cy]
    status = "ok" if all(c == expected for c in counts) else "failed"
    return ComponentCountReport(status, mx, my, expected, counts)


def sigma(z: Chain, a: CyclicAction) -> Chain:
    """sum_{s=0}^{p-1} g^s(z)."""
    if z.complex != a.complex:
        raise SetupError("chain does not live on the action's complex")
    out = Chain.zero(a.complex, z.dim, z.p)
    for s in range(a.p):
        out = out + push_chain(a.power_map(s), z)
    return out


def check_sigma_projection_commutes(
    a_total: CyclicAction, proj: SimplicialMap, a_base: CyclicAction, z: Chain
) -> bool:
    """Exact chain equality proj(sigma z) == sigma(proj z)."""
    if proj.source != a_total.complex or proj.target != a_base.complex:
        raise SetupError("projection does not connect the two acted-on complexes")
    if a_total.p != a_base.p:
        raise SetupError("actions use different primes")
    g, gbar = a_total.power(1), a_base.power(1)
    for v in a_total.complex.vertices:
        if proj(g[v]) != gbar[proj(v)]:
            raise SetupError(f"projection does not intertwine the generators at vertex {v}")
    return push_chain(proj, sigma(z, a_total)) == sigma(push_chain(proj, z), a_base)


@dataclass
class Lemma5Result:
    verdict: str  # "zero", "fixed" or "neither"
    sigma_z: Chain
    witness: Simplex | None
    homology_branch: str | None  # "identity", "non-identity" or None (z bounds)
    consistent: bool | None
    translates_share_support: bool


def lemma5_dichotomy(z: Chain, a: CyclicAction) -> Lemma5Result:
    """Classify sigma(z) as 0, z, or neither.

    The branch is also predicted from homology: if g acts trivially on the
    class of z the expected outcome is zero, otherwise fixed.
    """
    if z.dim >= 1 and not boundary(z).is_zero():
        raise CycleError("lemma5_dichotomy needs a cycle")
    sz = sigma(z, a)
    if sz.is_zero():
        verdict, witness = "zero", None
    elif sz == z:
        verdict, witness = "fixed", None
    else:
        verdict = "neither"
        diff = sz - z
        witness = min(diff.support() | sz.support())
    H = HomologyGroup(a.complex, z.dim, z.p)
    coords = class_of(z, H)
    branch = consistent = None
    if np.any(coords):
        g_star = induced_homology_map(a.g, z.dim, z.p, H, H)
        branch = "identity" if np.array_equal(g_star.apply(coords), coords) else "non-identity"
        consistent = (branch == "identity" and verdict == "zero") or (branch == "non-identity" and verdict == "fixed")
    support = z.support()
    shares = all(push_chain(a.power_map(s), z).support() == support for s in range(a.p))
    return Lemma5Result(verdict, sz, witness, branch, consistent, shares)


def circulant_matrix(p: int, length: int) -> np.ndarray:
    """Matrix of x -> circulant_sigma(x) on Z_p^length."""
    m = np.zeros((length, length), dtype=np.int64)
    for i in range(length):
        for t in range(p):
            m[i, (i - t) % length] += 1
    return m % p


def circulant_sigma(c, ctx) -> np.ndarray:
    """out[i] = sum_{t=0}^{p-1} c[i - t mod n] mod p, for n a power of p.

    Accepts a single vector or a 2-d batch of row vectors.
    """
    p = as_p(ctx)
    c = np.asarray(c, dtype=np.int64)
    n = c.shape[-1]
    k = _log_p(n, p)
    if k is None or k < 1:
        raise ShapeError(f"length {n} is not a positive power of p={p}")
    out = np.zeros_like(c)
    for t in range(p):
        out += np.roll(c, t, axis=-1)
    return out % p


def lemma7_family_sums(z: Chain, fams: FamilyPartition) -> dict[Simplex, int]:
    """Oriented coefficient sum of z over each family, mod p."""
    members = fams.members()
    stray = [s for s in z.support() if s not in members]
    if stray:
        raise PartitionError(f"simplex {list(min(stray))} of z is in no family")
    return {
        img: sum(z.coefficient(s) * fams.signs[s] for s in mem) % z.p
        for img, mem in fams.families.items()
    }


@dataclass
class Lemma7Report:
    p: int
    k: int
    mode: str
    scanned: int
    zero_solutions: int
    fixed_solutions: int
    zero_space_rank: int
    fixed_space_rank: int
    counterexamples: list[list[int]]
    congruence_violations: list[list[int]]

    @property
    def ok(self) -> bool:
        return not self.counterexamples and not self.congruence_violations

    @property
    def counts_match_ranks(self) -> bool:
        """Exhaustive solution counts agree with p**rank of the solution spaces."""
        if self.mode != "exhaustive":
            return True
        return (
            self.zero_solutions == self.p**self.zero_space_rank
            and self.fixed_solutions == self.p**self.fixed_space_rank
        )


def _solution_ranks(p: int, n: int) -> tuple[int, int]:
    sig = circulant_matrix(p, n)
    zero = kernel_basis(FpMatrix(p, sig)).dim
    fixed = kernel_basis(FpMatrix(p, sig - np.eye(n, dtype=np.int64))).dim
    return zero, fixed


def _congruent_mod_p(x: np.ndarray, p: int) -> np.ndarray:
    """Rows where c_i == c_j mod p whenever i == j mod p."""
    n = x.shape[1]
    if n <= p:
        return np.ones(x.shape[0], dtype=bool)
    return np.all(x[:, p:] == x[:, :-p], axis=1)


def _scan_range(args: tuple[int, int, int, int]) -> tuple[int, int, list[list[int]], list[list[int]]]:
    p, n, start, stop = args
    idx = np.arange(start, stop, dtype=np.int64)
    x = (idx[:, None] // (p ** np.arange(n - 1, -1, -1, dtype=np.int64))[None, :]) % p
    sx = circulant_sigma(x, p)
    is_zero = ~np.any(sx, axis=1)
    is_fixed = np.all(sx == x, axis=1)
    sums = x.sum(axis=1) % p
    bad = (is_zero | is_fixed) & (sums != 0)
    cong_bad = is_zero & ~_congruent_mod_p(x, p)
    return (
        int(is_zero.sum()),
        int(is_fixed.sum()),
        x[bad].tolist(),
        x[cong_bad].tolist(),
    )


def lemma7_bruteforce(p: int, k: int, workers: int = 1) -> Lemma7Report:
    """Scan every x in Z_p^(p^k) with sigma x = 0 or sigma x = x.

    A counterexample is such an x whose coefficient sum is nonzero mod p.
    For sigma x = 0 the congruences c_i = c_j (i = j mod p) are checked too.
    The scan splits into ``workers`` contiguous ranges; results are merged
    in range order, so the report does not depend on the worker count.
    """
    p = as_p(p)
    n = p**k
    if k < 1:
        raise ShapeError("k must be >= 1")
    if n > EXHAUSTIVE_LIMIT:
        raise GuardError(f"p^k = {n} > {EXHAUSTIVE_LIMIT}: exhaustive scan refused, use sampled mode")
    total = p**n
    workers = max(1, int(workers))
    bounds = [total * i // workers for i in range(workers + 1)]
    jobs = [(p, n, bounds[i], bounds[i + 1]) for i in range(workers) if bounds[i] < bounds[i + 1]]
    if workers == 1:
        parts = [_scan_range(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_scan_range, jobs))
    zero_rank, fixed_rank = _solution_ranks(p, n)
    return Lemma7Report(
        p, k, "exhaustive", total,
        sum(part[0] for part in parts),
        sum(part[1] for part in parts),
        zero_rank, fixed_rank,
        [row for part in parts for row in part[2]],
        [row for part in parts for row in part[3]],
    )


def lemma7_sampled(p: int, k: int, samples: int = 100_000, seed: int = 0) -> Lemma7Report:
    """Random elements of both solution spaces, drawn from their kernel bases."""
    p = as_p(p)
    n = p**k
    rng = np.random.default_rng(seed)
    sig = circulant_matrix(p, n)
    counter: list[list[int]] = []
    congr: list[list[int]] = []
    counts = []
    ranks = []
    for target in (0, 1):
        basis = kernel_basis(FpMatrix(p, sig - target * np.eye(n, dtype=np.int64))).basis
        ranks.append(basis.shape[0])
        coeffs = rng.integers(0, p, size=(samples, basis.shape[0]), dtype=np.int64)
        x = (coeffs @ basis) % p if basis.shape[0] else np.zeros((samples, n), dtype=np.int64)
        sx = circulant_sigma(x, p)
        assert np.array_equal(sx, (target * x) % p)
        counts.append(samples)
        bad = x.sum(axis=1) % p != 0
        counter.extend(x[bad].tolist())
        if target == 0:
            congr.extend(x[~_congruent_mod_p(x, p)].tolist())
    return Lemma7Report(p, k, "sampled", 2 * samples, counts[0], counts[1], ranks[0], ranks[1], counter, congr)


@dataclass
class CollapseResult:
    projected: Chain
    family_sums: dict[Simplex, int]
    family_targets: dict[Simplex, Simplex]
    flagged: list[Simplex]  # coarse simplices receiving a nonzero family sum

    @property
    def verdict(self) -> str:
        return "nonzero" if self.flagged else "zero"

    @property
    def consistent(self) -> bool:
        """The family-sum verdict agrees with the directly projected chain."""
        return (self.verdict == "zero") == self.projected.is_zero()


def collapse_projection_check(z: Chain, fams: FamilyPartition, f: SimplicialMap) -> CollapseResult:
    """Project z by a map that is constant on every family.

    "Constant" means all members of a family land on one nondegenerate
    coarse simplex with one common orientation (relative to the family's
    own orientation).  The verdict is zero iff every family sum vanishes.
    """
    if f.source != z.complex:
        raise PreconditionError("map does not start at the chain's complex")
    targets: dict[Simplex, Simplex] = {}
    orient: dict[Simplex, int] = {}
    for img, members in fams.families.items():
        seen = set()
        for s in members:
            t, sign = f.image(s)
            seen.add((t, sign * fams.signs[s]))
        if len(seen) != 1 or next(iter(seen))[1] == 0:
            raise PreconditionError(f"map is not constant on the family over {list(img)}")
        targets[img], orient[img] = next(iter(seen))
    sums = lemma7_family_sums(z, fams)
    flagged = sorted({targets[img] for img, s in sums.items() if s})
    return CollapseResult(push_chain(f, z), sums, targets, flagged)


def newman_probe(m, space: FiniteMetricSpace, j: int | None = None) -> tuple[float, int]:
    """Largest fibre diameter over the vertices and the first vertex attaining it.

    ``m`` is an :class:`OrbitMapModel`, or a :class:`CyclicAction` together
    with ``j``; the latter form also covers subgroups whose quotient is not
    simplicial, since only the vertex orbits matter here.
    """
    if isinstance(m, OrbitMapModel):
        action, j = m.action, m.j
    else:
        action = m
        if j is None:
            raise SetupError("pass j together with a bare CyclicAction")
    missing = [v for v in action.complex.vertices if v not in space]
    if missing:
        raise AlignmentError(f"vertices {missing[:5]} have no point in the metric space")
    best, arg = -math.inf, None
    orbit_of = {v: orb for orb in action.vertex_orbits(j) for v in orb}
    for v in action.complex.vertices:
        d = space.diameter(sorted(orbit_of[v]))
        if d > best:
            best, arg = d, v
    return best, arg
