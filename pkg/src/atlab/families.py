"""Small graph families with straight-line plane embeddings.

Each generator places the vertices in the plane, sorts incident edges by
angle to get the rotation system, and picks the face of most negative signed
area (the traced outer face runs clockwise) as the outer face.
"""

from __future__ import annotations

import math

from .errors import TooLarge
from .graph import Graph, PlanarGraph

MAX_GRID = (3, 4)
MAX_CHAIN = 12  # vertices in a path or cycle


def _embed(name, points, edges) -> PlanarGraph:
    n = len(points)
    rotation = {}
    for v in range(n):
        inc = [(j, b if a == v else a) for j, (a, b) in enumerate(edges) if v in (a, b)]
        px, py = points[v]
        inc.sort(key=lambda t: math.atan2(points[t[1]][1] - py, points[t[1]][0] - px))
        rotation[v] = [j for j, _ in inc]
    ids = [(j, a, b) for j, (a, b) in enumerate(edges)]
    probe = PlanarGraph(range(n), ids, rotation, name=name, _outer_dart=0) if edges else None
    if probe is None:
        return PlanarGraph(range(n), ids, rotation, name=name)

    def area(darts):
        s = 0.0
        for d in darts:
            (x0, y0), (x1, y1) = points[probe.tail(d)], points[probe.head(d)]
            s += x0 * y1 - x1 * y0
        return s / 2

    outer_raw = min(range(len(probe._raw_faces)), key=lambda f: area(probe._raw_faces[f]))
    dart = probe._raw_faces[outer_raw][0]
    return PlanarGraph(range(n), ids, rotation, name=name, _outer_dart=dart)


def path(n: int) -> PlanarGraph:
    if n > MAX_CHAIN:
        raise TooLarge(f"paths are capped at {MAX_CHAIN} vertices")
    return _embed(f"path{n}", [(i, 0.0) for i in range(n)], [(i, i + 1) for i in range(n - 1)])


def _polygon(n, r=1.0, phase=-math.pi / 2):
    return [(r * math.cos(phase + 2 * math.pi * i / n), r * math.sin(phase + 2 * math.pi * i / n)) for i in range(n)]


def cycle(n: int) -> PlanarGraph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    if n > MAX_CHAIN:
        raise TooLarge(f"cycles are capped at {MAX_CHAIN} vertices")
    return _embed(f"C{n}", _polygon(n), [(i, (i + 1) % n) for i in range(n)])


def grid(rows: int, cols: int) -> PlanarGraph:
    if rows > MAX_GRID[0] or cols > MAX_GRID[1]:
        if not (cols <= MAX_GRID[0] and rows <= MAX_GRID[1]):
            raise TooLarge(f"grids are capped at {MAX_GRID[0]}x{MAX_GRID[1]}")
    pts = [(c, -r) for r in range(rows) for c in range(cols)]
    edges = []
    for r in range(rows):
        for c in range(cols - 1):
            edges.append((r * cols + c, r * cols + c + 1))
    for r in range(rows - 1):
        for c in range(cols):
            edges.append((r * cols + c, (r + 1) * cols + c))
    return _embed(f"grid{rows}x{cols}", pts, edges)


def complete(n: int) -> Graph:
    """K_n; embedded for n <= 4, a plain non-planar graph for n = 5."""
    if n > 5:
        raise TooLarge("complete graphs are capped at K5")
    edges = [(a, b) for a in range(n) for b in range(a + 1, n)]
    if n <= 3:
        return _embed(f"K{n}", _polygon(n), edges)
    if n == 4:
        return _embed("K4", _polygon(3) + [(0.0, 0.0)], edges)
    return Graph(range(n), [(j, a, b) for j, (a, b) in enumerate(edges)], name="K5")


def theta() -> PlanarGraph:
    """Two poles joined by three paths of length two (K_{2,3})."""
    pts = [(0.0, 1.0), (0.0, -1.0), (-1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]
    edges = [(0, 2), (0, 3), (0, 4), (2, 1), (3, 1), (4, 1)]
    return _embed("theta", pts, edges)


def cycle_with_chord() -> PlanarGraph:
    pts = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
    return _embed("C4chord", pts, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])


def by_name(name: str) -> Graph:
    """Parse names like ``path3``, ``C6``, ``grid2x3``, ``K4``, ``theta``, ``C4chord``."""
    if name == "theta":
        return theta()
    if name == "C4chord":
        return cycle_with_chord()
    if name.startswith("path"):
        return path(int(name[4:]))
    if name.startswith("grid"):
        r, c = name[4:].split("x")
        return grid(int(r), int(c))
    if name.startswith("C"):
        return cycle(int(name[1:]))
    if name.startswith("K"):
        return complete(int(name[1:]))
    raise ValueError(f"unknown graph family {name!r}")


DEFAULT_FAMILY = ("path3", "path4", "C4", "C6", "theta", "grid2x3", "K4")
