"""Standard desk-scale instances: cycle graphs, circle covers and towers.

``write_bundled(path)`` regenerates the text files shipped in
``nervecheck/data``; the test-suite checks the shipped copies against it.
"""

from __future__ import annotations

from pathlib import Path

from .covers import Cover, FiniteMetricSpace, circle_arcs, circle_sample, nerve, refinement_projection
from .equivariant import make_action, orbit_quotient, rotation
from .simplicial import SimplicialComplex, SimplicialMap, build_complex
from .tower import Tower, build_tower

__all__ = [
    "cycle_graph",
    "boundary_of_tetrahedron",
    "CIRCLE_POINTS",
    "circle_tower_covers",
    "circle_tower",
    "quotient_tower",
    "data_dir",
    "write_bundled",
]

CIRCLE_POINTS = 108

# (number of arcs, arc length, offset); arcs overlap their neighbours by
# 2 * overhang points and no point lies in three arcs
_V = [(3, 46, -5), (9, 16, -2), (27, 6, -1)]
_U = [(9, 20, -4), (27, 8, -2)]


def cycle_graph(n: int) -> SimplicialComplex:
    return build_complex([[i, (i + 1) % n] for i in range(n)])


def boundary_of_tetrahedron() -> SimplicialComplex:
    return build_complex([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])


def circle_tower_covers(depth: int = 3) -> tuple[list[Cover], list[Cover]]:
    """Arc covers V^0 (3 arcs), V^1 (9), V^2 (27) and intermediates U^0, U^1.

    U^m sits between V^(m+1) and V^m: V^(m+1) refines U^m, which refines V^m.
    """
    space = circle_sample(CIRCLE_POINTS)
    V = [circle_arcs(space, *_V[m], prefix="v") for m in range(depth)]
    U = [circle_arcs(space, *_U[m], prefix="u") for m in range(depth - 1)]
    return V, U


def circle_tower(depth: int = 3, *, strict: bool = True) -> Tower:
    V, U = circle_tower_covers(depth)
    stages = [nerve(c).complex for c in V]
    projections = [refinement_projection(V[m + 1], V[m]) for m in range(depth - 1)]
    facts = {
        m: (nerve(U[m]).complex, refinement_projection(V[m + 1], U[m]), refinement_projection(U[m], V[m]))
        for m in range(depth - 1)
    }
    return build_tower(stages, projections, facts, strict=strict)


def quotient_tower(p: int = 3, k: int = 3) -> Tower:
    """C_{p^k} -> C_{p^(k-1)} -> ... -> C_p by successive orbit maps."""
    stages = []
    projections = []
    action = make_action(cycle_graph(p**k), rotation(p**k), p**k, p)
    stages.append(action.complex)
    for _ in range(k - 1):
        model = orbit_quotient(action, 1)
        stages.append(model.quotient)
        projections.append(model.projection)
        if model.quotient.count(0) == p:
            break
        action = model.induced_action(regular=False)
    stages.reverse()
    projections.reverse()
    return build_tower(stages, projections)


def data_dir() -> Path:
    return Path(__file__).with_name("data")


def _complex_text(K: SimplicialComplex, p: int, comment: str = "") -> str:
    lines = [f"# {comment}"] if comment else []
    lines.append(f"p={p}")
    lines += [" ".join(map(str, s)) for s in K.maximal_simplices()]
    return "\n".join(lines) + "\n"


def _map_text(f: SimplicialMap) -> str:
    return "".join(f"{a} -> {b}\n" for a, b in sorted(f.vertex_map.items()))


def _cover_text(c: Cover, comment: str = "") -> str:
    lines = [f"# {comment}"] if comment else []
    lines += [f"element {n}: " + " ".join(map(str, sorted(c[n]))) for n in c.names]
    return "\n".join(lines) + "\n"


def _metric_text(space: FiniteMetricSpace) -> str:
    lines = ["points " + " ".join(map(str, space.points))]
    for i, x in enumerate(space.points):
        lines.append(f"{x}: " + " ".join(repr(float(d)) for d in space.distances[i]))
    return "\n".join(lines) + "\n"


def bundled_files() -> dict[str, str]:
    """Name -> text of every shipped fixture."""
    files: dict[str, str] = {}
    files["circle3.cx"] = _complex_text(cycle_graph(3), 3, "cycle graph C_3")
    files["circle9.cx"] = _complex_text(cycle_graph(9), 3, "cycle graph C_9")
    files["circle27.cx"] = _complex_text(cycle_graph(27), 3, "cycle graph C_27")
    files["tetra_boundary.cx"] = _complex_text(boundary_of_tetrahedron(), 5, "boundary of the 3-simplex")
    files["circle9_unit.metric"] = _metric_text(circle_sample(9))
    files["rot1_9.map"] = "".join(f"{a} -> {b}\n" for a, b in rotation(9).items())
    files["reflect9.map"] = "".join(f"{a} -> {(-a) % 9}\n" for a in range(9))

    space6 = circle_sample(6)
    files["arcs3_of_6.cover"] = _cover_text(circle_arcs(space6, 3, 3), "3 arcs of 3 points on a 6-point circle")
    files["circle6_unit.metric"] = _metric_text(space6)
    space18 = circle_sample(18)
    files["arcs9_of_18.cover"] = _cover_text(circle_arcs(space18, 9, 3, -1), "9 short arcs on 18 points")
    files["arcs3_of_18.cover"] = _cover_text(circle_arcs(space18, 3, 12, -3), "3 long arcs on 18 points")
    files["circle18_unit.metric"] = _metric_text(space18)

    t = circle_tower()
    manifest = ["# circle covered by 3, 9 and 27 arcs", "p=3", "n=1"]
    for m, K in enumerate(t.stages):
        files[f"tower_v{m}.cx"] = _complex_text(K, 3, f"nerve of V^{m}")
        manifest.append(f"stage tower_v{m}.cx")
    for m, pi in enumerate(t.projections):
        files[f"tower_pi{m}.map"] = _map_text(pi)
        manifest.append(f"projection {m} tower_pi{m}.map")
    for m, fac in sorted(t.factorizations.items()):
        files[f"tower_u{m}.cx"] = _complex_text(fac.intermediate, 3, f"nerve of U^{m}")
        files[f"tower_alpha{m}.map"] = _map_text(fac.alpha)
        files[f"tower_beta{m}.map"] = _map_text(fac.beta)
        manifest.append(f"factor {m} tower_u{m}.cx tower_alpha{m}.map tower_beta{m}.map")
    files["circle_tower.manifest"] = "\n".join(manifest) + "\n"
    files["single_stage.manifest"] = "p=3\nn=1\nstage tower_v0.cx\n"
    return files


def write_bundled(path: Path | str | None = None) -> list[Path]:
    out = Path(path) if path is not None else data_dir()
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in bundled_files().items():
        target = out / name
        target.write_text(text)
        written.append(target)
    return written
