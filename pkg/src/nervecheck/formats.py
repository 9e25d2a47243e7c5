"""Line-oriented text formats.

Blank lines and ``#`` comments are ignored everywhere.

complex file::

    p=3
    0 1          # one maximal simplex per line
    1 2

cover file::

    element a0: 0 1 2

metric file (a labeled distance matrix, rows in the header's order)::

    points 0 1 2
    0: 0 1 1
    1: 1 0 1
    2: 1 1 0

map file::

    0 -> 0
    1 -> 0

tower manifest (paths relative to the manifest; stage 0 is the coarsest;
``projection m`` maps stage m+1 to stage m)::

    p=3
    n=1
    stage v0.cx
    stage v1.cx
    projection 0 pi0.map
    factor 0 u0.cx alpha0.map beta0.map
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .covers import Cover, FiniteMetricSpace
from .errors import NerveCheckError, ParseError
from .field import is_prime
from .simplicial import SimplicialComplex, SimplicialMap
from .tower import Tower, build_tower

__all__ = [
    "read_text",
    "digest",
    "parse_complex",
    "parse_cover",
    "parse_metric",
    "parse_map",
    "parse_generator",
    "Manifest",
    "parse_manifest",
    "load_tower",
    "format_complex",
]


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", str(path)) from None


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _lines(text: str) -> Iterator[tuple[int, str]]:
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _ints(tokens: list[str], path, no) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integer vertex ids, got {' '.join(tokens)!r}", path, no) from None


def _prime_header(line: str, key: str, path, no) -> int:
    value = _int_header(line, key, path, no)
    if not is_prime(value):
        raise ParseError(f"{value} is not a prime", path, no)
    return value


def _int_header(line: str, key: str, path, no) -> int:
    name, _, value = line.partition("=")
    if name.strip() != key or not _:
        raise ParseError(f"expected '{key}=<integer>' header, got {line!r}", path, no)
    try:
        return int(value.strip())
    except ValueError:
        raise ParseError(f"'{key}' must be an integer, got {value.strip()!r}", path, no) from None


def parse_complex(text: str, path: str | None = None) -> tuple[int, SimplicialComplex]:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty complex file (missing 'p=<prime>' header)", path, 1)
    no, head = lines[0]
    p = _prime_header(head, "p", path, no)
    tops = []
    for no, line in lines[1:]:
        vs = _ints(line.split(), path, no)
        if len(set(vs)) != len(vs):
            raise ParseError(f"repeated vertex in simplex {vs}", path, no)
        tops.append(vs)
    if not tops:
        raise ParseError("complex file lists no simplices", path, no)
    return p, SimplicialComplex(tops)


def format_complex(K: SimplicialComplex, p: int) -> str:
    return f"p={p}\n" + "".join(" ".join(map(str, s)) + "\n" for s in K.maximal_simplices())


def parse_cover(text: str, path: str | None = None, space=None) -> Cover:
    elems: dict[str, list[int]] = {}
    last = 0
    for no, line in _lines(text):
        last = no
        head, colon, rest = line.partition(":")
        words = head.split()
        if not colon or len(words) != 2 or words[0] != "element":
            raise ParseError(f"expected 'element <name>: <point ids>', got {line!r}", path, no)
        name = words[1]
        if name in elems:
            raise ParseError(f"duplicate element name {name!r}", path, no)
        elems[name] = _ints(rest.split(), path, no)
    if not elems:
        raise ParseError("cover file has no elements", path, last or 1)
    try:
        return Cover(elems, space)
    except NerveCheckError as exc:
        raise ParseError(str(exc), path) from None


def parse_metric(text: str, path: str | None = None) -> FiniteMetricSpace:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty metric file", path, 1)
    no, head = lines[0]
    words = head.split()
    if not words or words[0] != "points":
        raise ParseError("metric file must start with 'points <ids>'", path, no)
    points = _ints(words[1:], path, no)
    rows = {}
    for no, line in lines[1:]:
        label, colon, rest = line.partition(":")
        if not colon:
            raise ParseError(f"expected '<point>: <distances>', got {line!r}", path, no)
        (x,) = _ints([label.strip()], path, no)
        if x not in points:
            raise ParseError(f"row for unknown point {x}", path, no)
        if x in rows:
            raise ParseError(f"duplicate row for point {x}", path, no)
        try:
            vals = [float(t) for t in rest.split()]
        except ValueError:
            raise ParseError("distances must be numbers", path, no) from None
        if len(vals) != len(points):
            raise ParseError(f"row has {len(vals)} distances, expected {len(points)}", path, no)
        rows[x] = vals
    missing = [x for x in points if x not in rows]
    if missing:
        raise ParseError(f"no rows for points {missing[:5]}", path)
    try:
        return FiniteMetricSpace(points, [rows[x] for x in points])
    except NerveCheckError as exc:
        raise ParseError(str(exc), path) from None


def parse_map(text: str, path: str | None = None) -> dict[int, int]:
    out: dict[int, int] = {}
    for no, line in _lines(text):
        left, arrow, right = line.partition("->")
        if not arrow:
            raise ParseError(f"expected '<vertex> -> <vertex>', got {line!r}", path, no)
        a, b = _ints([left.strip(), right.strip()], path, no)
        if a in out:
            raise ParseError(f"vertex {a} mapped twice", path, no)
        out[a] = b
    return out


def parse_generator(spec: str, K: SimplicialComplex) -> dict[int, int]:
    """``shift:<s>`` cycles the sorted vertex list by s; anything else is a map file."""
    if spec.startswith("shift:"):
        try:
            step = int(spec[len("shift:"):])
        except ValueError:
            raise ParseError(f"bad shift in generator spec {spec!r}") from None
        verts = K.vertices
        return {v: verts[(i + step) % len(verts)] for i, v in enumerate(verts)}
    return parse_map(read_text(spec), spec)


@dataclass
class Manifest:
    base: Path
    p: int
    n: int | None
    stages: list[str] = field(default_factory=list)
    projections: dict[int, str] = field(default_factory=dict)
    factors: dict[int, tuple[str, str, str]] = field(default_factory=dict)

    def files(self) -> list[str]:
        out = list(self.stages)
        out += [self.projections[m] for m in sorted(self.projections)]
        for m in sorted(self.factors):
            out += list(self.factors[m])
        return out


def parse_manifest(text: str, path: str | Path) -> Manifest:
    path = Path(path)
    p = n = None
    stages: list[str] = []
    projections: dict[int, str] = {}
    factors: dict[int, tuple[str, str, str]] = {}
    for no, line in _lines(text):
        if line.startswith("p="):
            p = _prime_header(line, "p", str(path), no)
            continue
        if line.startswith("n="):
            n = _int_header(line, "n", str(path), no)
            continue
        words = line.split()
        kind = words[0]
        if kind == "stage" and len(words) == 2:
            stages.append(words[1])
        elif kind == "projection" and len(words) == 3:
            (m,) = _ints([words[1]], str(path), no)
            projections[m] = words[2]
        elif kind == "factor" and len(words) == 5:
            (m,) = _ints([words[1]], str(path), no)
            factors[m] = (words[2], words[3], words[4])
        else:
            raise ParseError(f"unrecognised manifest line {line!r}", str(path), no)
    if p is None:
        raise ParseError("manifest lacks a 'p=<prime>' line", str(path))
    if not stages:
        raise ParseError("manifest lists no stages", str(path))
    if sorted(projections) != list(range(len(stages) - 1)):
        raise ParseError(
            f"{len(stages)} stages need projections 0..{len(stages) - 2}, got {sorted(projections)}", str(path)
        )
    return Manifest(path.parent, p, n, stages, projections, factors)


def load_tower(man: Manifest, *, strict: bool = False) -> tuple[Tower, dict[str, str]]:
    """Read every file a manifest names; returns the tower and per-file digests."""
    digests: dict[str, str] = {}

    def load(name: str) -> str:
        text = read_text(man.base / name)
        digests[name] = digest(text)
        return text

    def complex_(name: str) -> SimplicialComplex:
        p, K = parse_complex(load(name), name)
        if p != man.p:
            raise ParseError(f"file declares p={p} but the manifest uses p={man.p}", name)
        return K

    stages = [complex_(s) for s in man.stages]
    projections = [parse_map(load(man.projections[m]), man.projections[m]) for m in range(len(stages) - 1)]
    factors = {}
    for m, (u, a, b) in sorted(man.factors.items()):
        factors[m] = (complex_(u), parse_map(load(a), a), parse_map(load(b), b))
    return build_tower(stages, projections, factors, strict=strict), digests
