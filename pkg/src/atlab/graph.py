"""Finite simple graphs and their combinatorial plane embeddings.

A plane embedding is given as a rotation system (the counterclockwise cyclic
order of edges around each vertex) together with the boundary walk of the
outer face.  Faces are always derived by tracing the rotation system.

Internally vertices and edges are addressed by their position in the
``vertices`` / ``edges`` tuples, and edge sets are Python ints used as
bitmasks over edge positions.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .errors import (
    CornerVertexNotOnNewBoundary,
    DisconnectedWhenPlanarOpsRequested,
    DualPathConflict,
    FaceIsOuter,
    MalformedGraph,
    MalformedRotation,
    NonPlanarEmbedding,
    NotPlanar,
)

OUTER = 0  # face id of the outer face


def bits(mask: int) -> list[int]:
    """Positions of the set bits of ``mask`` in increasing order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class Graph:
    """A finite simple graph with hashable vertex and edge ids."""

    def __init__(self, vertices: Iterable[Hashable], edges: Iterable[tuple], name: str = ""):
        self.vertices = tuple(vertices)
        self.name = name
        self.index = {}
        for i, v in enumerate(self.vertices):
            if v in self.index:
                raise MalformedGraph(f"duplicate vertex id {v!r}")
            self.index[v] = i
        ids, ends, seen = [], [], set()
        for eid, u, v in edges:
            if eid in ids:
                raise MalformedGraph(f"duplicate edge id {eid!r}")
            if u not in self.index or v not in self.index:
                raise MalformedGraph(f"edge {eid!r} has an unknown endpoint")
            if u == v:
                raise MalformedGraph(f"edge {eid!r} is a loop")
            key = frozenset((u, v))
            if key in seen:
                raise MalformedGraph(f"edge {eid!r} is parallel to another edge")
            seen.add(key)
            ids.append(eid)
            ends.append((self.index[u], self.index[v]))
        self.edge_ids = tuple(ids)
        self.edge_index = {e: j for j, e in enumerate(ids)}
        self.ends = tuple(ends)
        self._incident = [[] for _ in self.vertices]
        for j, (a, b) in enumerate(self.ends):
            self._incident[a].append(j)
            self._incident[b].append(j)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edge_ids)

    @property
    def is_planar_embedded(self) -> bool:
        return False

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<{type(self).__name__}{label} n={self.n} m={self.m}>"

    def key(self) -> tuple:
        """Hashable description used for caching derived tables."""
        return (self.vertices, self.edge_ids, self.ends)

    # -- id <-> mask conversions -------------------------------------------

    def edge_mask(self, edges: Iterable[Hashable]) -> int:
        mask = 0
        for e in edges:
            mask |= 1 << self.edge_index[e]
        return mask

    def edges_of(self, mask: int) -> frozenset:
        return frozenset(self.edge_ids[j] for j in bits(mask))

    def vertex_mask(self, vertices: Iterable[Hashable]) -> int:
        """Mask of a vertex multiset; repeated vertices cancel in pairs."""
        mask = 0
        for v in vertices:
            mask ^= 1 << self.index[v]
        return mask

    def vertices_of(self, mask: int) -> frozenset:
        return frozenset(self.vertices[i] for i in bits(mask))

    @property
    def full_mask(self) -> int:
        return (1 << self.m) - 1

    def incident(self, i: int) -> list[int]:
        return list(self._incident[i])

    def other_end(self, j: int, i: int) -> int:
        a, b = self.ends[j]
        return b if a == i else a

    # -- connectivity ---------------------------------------------------------

    def boundary_of(self, eta: int) -> int:
        """Vertex mask of the odd-degree vertices of the edge set ``eta``."""
        out = 0
        for j in bits(eta):
            a, b = self.ends[j]
            out ^= (1 << a) | (1 << b)
        return out

    def component_labels(self, omega: int | None = None) -> list[int]:
        """Component label of each vertex in the graph (V, omega).

        Labels are numbered by the smallest vertex position in each component.
        """
        if omega is None:
            omega = self.full_mask
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for j in bits(omega):
            ra, rb = find(self.ends[j][0]), find(self.ends[j][1])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        rank, labels = {}, []
        for i in range(self.n):
            r = find(i)
            if r not in rank:
                rank[r] = len(rank)
            labels.append(rank[r])
        return labels

    def is_connected(self, omega: int | None = None) -> bool:
        return self.n == 0 or max(self.component_labels(omega)) == 0

    def spanning_forest(self, omega: int, rng: random.Random | None = None):
        """Spanning forest of (V, omega).

        Returns ``(rootpath, nontree)`` where ``rootpath[i]`` is the edge mask of
        the forest path from vertex ``i`` to the root of its tree and
        ``nontree`` lists the remaining edges of ``omega``.  With ``rng`` the
        edges are scanned in a random order, giving a random forest.
        """
        order = bits(omega)
        if rng is not None:
            rng.shuffle(order)
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        adj = [[] for _ in range(self.n)]
        nontree = []
        for j in order:
            a, b = self.ends[j]
            ra, rb = find(a), find(b)
            if ra == rb:
                nontree.append(j)
            else:
                parent[ra] = rb
                adj[a].append(j)
                adj[b].append(j)
        rootpath = [None] * self.n
        roots = list(range(self.n))
        if rng is not None:
            rng.shuffle(roots)
        for r in roots:
            if rootpath[r] is not None:
                continue
            rootpath[r] = 0
            queue = deque([r])
            while queue:
                x = queue.popleft()
                for j in adj[x]:
                    y = self.other_end(j, x)
                    if rootpath[y] is None:
                        rootpath[y] = rootpath[x] | (1 << j)
                        queue.append(y)
        return rootpath, nontree


@dataclass(frozen=True)
class DualPath:
    """A simple dual path from ``face`` to the outer face."""

    face: int
    faces: tuple  # faces visited, starting at ``face`` and ending at OUTER
    gamma: tuple  # primal edge ids crossed, in order
    mask: int

    @property
    def crossed(self) -> frozenset:
        return frozenset(self.gamma)


@dataclass(frozen=True, order=True)
class Corner:
    """A vertex together with one of the faces incident to it."""

    vertex: Hashable
    face: int


class PlanarGraph(Graph):
    """A connected-or-not simple graph with a rotation system.

    ``rotation`` maps each vertex id to the counterclockwise list of incident
    edge ids.  ``outer_face`` is the boundary walk of the outer face as a list
    of edge ids traversed counterclockwise around the graph (interior on the
    left); it may be omitted when the embedding has a single face.
    """

    def __init__(self, vertices, edges, rotation, outer_face=None, name: str = "", _outer_dart=None):
        super().__init__(vertices, edges, name=name)
        rot = []
        for v in self.vertices:
            order = rotation.get(v, ())
            if len(order) == 0 and self._incident[self.index[v]]:
                raise MalformedRotation(f"vertex {v!r} has no rotation")
            try:
                idx = [self.edge_index[e] for e in order]
            except KeyError as exc:
                raise MalformedRotation(f"unknown edge {exc.args[0]!r} in rotation of {v!r}") from None
            if sorted(idx) != sorted(self._incident[self.index[v]]):
                raise MalformedRotation(f"rotation of {v!r} is not a permutation of its incident edges")
            rot.append(tuple(idx))
        self.rotation = tuple(rot)
        self._rotpos = {}
        for i, order in enumerate(self.rotation):
            for k, j in enumerate(order):
                self._rotpos[(i, j)] = k
        self._trace()
        self._components = max(self.component_labels()) + 1 if self.n else 0
        if self.m:
            # every component contributes V - E + F = 2 on its own
            chi = self.n - self.m + len(self._raw_faces)
            if chi != 2 * self._components:
                raise NonPlanarEmbedding(f"V - E + F = {chi} for {self._components} component(s)")
        self._choose_outer(outer_face, _outer_dart)
        self._paths_cache = {}

    @property
    def is_planar_embedded(self) -> bool:
        return True

    def key(self) -> tuple:
        return super().key() + (self.rotation, self.faces[OUTER][:1])

    # -- darts ------------------------------------------------------------------
    # dart 2j runs ends[j][0] -> ends[j][1], dart 2j+1 the reverse.

    def tail(self, d: int) -> int:
        return self.ends[d >> 1][d & 1]

    def head(self, d: int) -> int:
        return self.ends[d >> 1][1 - (d & 1)]

    def dart_from(self, j: int, i: int) -> int:
        return 2 * j + (0 if self.ends[j][0] == i else 1)

    def _next_dart(self, d: int) -> int:
        h, j = self.head(d), d >> 1
        order = self.rotation[h]
        prev = order[self._rotpos[(h, j)] - 1]
        return self.dart_from(prev, h)

    def _trace(self):
        face_of = [-1] * (2 * self.m)
        faces = []
        for start in range(2 * self.m):
            if face_of[start] >= 0:
                continue
            walk, d = [], start
            while face_of[d] < 0:
                face_of[d] = len(faces)
                walk.append(d)
                d = self._next_dart(d)
            faces.append(tuple(walk))
        self._raw_faces = faces
        self._raw_face_of = face_of

    def _choose_outer(self, outer_face, outer_dart):
        faces = self._raw_faces
        if not faces:
            self.faces = ((),)
            self.face_of_dart = ()
            return
        if outer_dart is not None:
            outer = self._raw_face_of[outer_dart]
        elif outer_face is None:
            if len(faces) != 1:
                raise MalformedRotation("outer_face walk is required when there are several faces")
            outer = 0
        else:
            walk = [self.edge_index[e] for e in outer_face] if all(
                e in self.edge_index for e in outer_face) else None
            if walk is None:
                raise MalformedRotation("outer_face lists an unknown edge")
            target = walk[::-1]
            matches = [f for f, darts in enumerate(faces) if _cyclic_equal([d >> 1 for d in darts], target)]
            if not matches:
                raise MalformedRotation("outer_face walk does not match any traced face")
            outer = matches[0]
        order = [outer] + [f for f in range(len(faces)) if f != outer]
        renum = {old: new for new, old in enumerate(order)}
        self.faces = tuple(faces[f] for f in order)
        self.face_of_dart = tuple(renum[f] for f in self._raw_face_of)

    # -- faces ------------------------------------------------------------------

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    @property
    def inner_faces(self) -> list[int]:
        return list(range(1, self.num_faces))

    def face_edges(self, f: int) -> list:
        return [self.edge_ids[d >> 1] for d in self.faces[f]]

    def face_vertices(self, f: int) -> list:
        """Vertex ids along the face walk (tails of its darts)."""
        return [self.vertices[self.tail(d)] for d in self.faces[f]]

    def edge_faces(self, j: int) -> tuple[int, int]:
        return self.face_of_dart[2 * j], self.face_of_dart[2 * j + 1]

    def faces_at(self, v) -> list[int]:
        """Faces of the angular sectors at ``v`` in counterclockwise order."""
        i = self.index[v]
        return [self.face_of_dart[self.dart_from(j, i)] for j in self.rotation[i]]

    def corners(self) -> list[Corner]:
        out = set()
        for v in self.vertices:
            for f in self.faces_at(v):
                out.add(Corner(v, f))
        return sorted(out, key=lambda c: (self.index[c.vertex], c.face))

    def _require_connected(self):
        if self._components > 1:
            raise DisconnectedWhenPlanarOpsRequested(f"{self!r} has {self._components} components")

    # -- boundary ---------------------------------------------------------------

    def _ccw_outer_darts(self) -> list[int]:
        """Outer face darts (traced orientation) listed in counterclockwise
        visiting order, anchored at the first visit of the lowest vertex."""
        darts = list(self.faces[OUTER])
        if not darts:
            return []
        ccw = [darts[0]] + darts[:0:-1]
        anchor = min(self.tail(d) for d in ccw)
        k = next(i for i, d in enumerate(ccw) if self.tail(d) == anchor)
        return ccw[k:] + ccw[:k]

    def boundary_order(self) -> list:
        """Counterclockwise sequence of outer-face vertices (first occurrences)."""
        cached = self.__dict__.get("_boundary")
        if cached is not None:
            return list(cached)
        self._require_connected()
        if self.m == 0:
            return list(self.vertices)
        seen, out = set(), []
        for d in self._ccw_outer_darts():
            t = self.tail(d)
            if t not in seen:
                seen.add(t)
                out.append(self.vertices[t])
        self._boundary = tuple(out)
        return out

    # -- dual paths ---------------------------------------------------------------

    def dual_path(self, f: int, avoid_edges: int = 0, avoid_faces: frozenset = frozenset()) -> DualPath:
        """Shortest dual path from face ``f`` to the outer face.

        Breadth-first in the dual graph; neighbours are explored by increasing
        (face id, edge position) so the result is deterministic.
        """
        self._require_connected()
        if f == OUTER:
            raise FaceIsOuter("the outer face has no dual path")
        if not 0 < f < self.num_faces:
            raise ValueError(f"no face {f}")
        nbrs = [[] for _ in range(self.num_faces)]
        for j in range(self.m):
            if avoid_edges >> j & 1:
                continue
            a, b = self.edge_faces(j)
            if a != b:
                nbrs[a].append((b, j))
                nbrs[b].append((a, j))
        for lst in nbrs:
            lst.sort()
        prev = {f: None}
        queue = deque([f])
        while queue and OUTER not in prev:
            h = queue.popleft()
            for g2, j in nbrs[h]:
                if g2 in prev or (g2 in avoid_faces and g2 != OUTER):
                    continue
                prev[g2] = (h, j)
                queue.append(g2)
        if OUTER not in prev:
            raise DualPathConflict(f"no admissible dual path from face {f}")
        faces, gamma, node = [OUTER], [], OUTER
        while prev[node] is not None:
            node, j = prev[node]
            faces.append(node)
            gamma.append(j)
        faces.reverse()
        gamma.reverse()
        mask = 0
        for j in gamma:
            mask |= 1 << j
        return DualPath(f, tuple(faces), tuple(self.edge_ids[j] for j in gamma), mask)

    # -- derived embeddings ---------------------------------------------------

    def without_edges(self, mask: int) -> "PlanarGraph":
        """The plane graph obtained by deleting the edges in ``mask``.

        The outer face of the result is the face containing the surviving
        darts of the original outer face.
        """
        keep = [j for j in range(self.m) if not mask >> j & 1]
        edges = [(self.edge_ids[j], self.vertices[self.ends[j][0]], self.vertices[self.ends[j][1]]) for j in keep]
        rotation = {
            v: [self.edge_ids[j] for j in self.rotation[i] if not mask >> j & 1]
            for i, v in enumerate(self.vertices)
        }
        survivors = [d for d in self.faces[OUTER] if not mask >> (d >> 1) & 1]
        sub = PlanarGraph.__new__(PlanarGraph)
        if not survivors:
            raise CornerVertexNotOnNewBoundary("every outer boundary edge lies on a dual path")
        j0 = survivors[0] >> 1
        new_j = keep.index(j0)
        dart = 2 * new_j + (survivors[0] & 1)
        PlanarGraph.__init__(sub, self.vertices, edges, rotation, name=self.name + "'", _outer_dart=dart)
        return sub


def _cyclic_equal(a: Sequence, b: Sequence) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    doubled = list(a) + list(a)
    n = len(a)
    return any(doubled[k:k + n] == list(b) for k in range(n))


class DualPathRegistry:
    """Session-wide choice of one dual path per face.

    Every correlator evaluated with the same registry uses the same paths,
    which keeps spin-side and current-side evaluations comparable.
    """

    def __init__(self, graph: PlanarGraph):
        if not graph.is_planar_embedded:
            raise NotPlanar("dual paths need a plane embedding")
        self.graph = graph
        self._paths: dict[int, DualPath] = {}

    def __contains__(self, f):
        return f in self._paths

    def get(self, f: int) -> DualPath:
        if f not in self._paths:
            self._paths[f] = self.graph.dual_path(f)
        return self._paths[f]

    def mask(self, f: int) -> int:
        """Crossed-edge mask of face ``f`` (empty for the outer face)."""
        return 0 if f == OUTER else self.get(f).mask

    def gamma(self, faces: Iterable[int]) -> int:
        """Mask of the symmetric difference of the paths of ``faces``."""
        out = 0
        for f in faces:
            out ^= self.mask(f)
        return out

    def register_disjoint(self, faces: Iterable[int]) -> list[DualPath]:
        """Register pairwise edge-disjoint paths for the given faces.

        Paths already in the registry are kept.  New paths avoid the edges of
        the others and do not pass through any other requested face, so the
        union of the paths is a dual forest hanging off the outer face.
        """
        wanted = sorted({f for f in faces if f != OUTER})
        used_edges, used_faces = 0, set()
        for f in wanted:
            if f in self._paths:
                p = self._paths[f]
                if used_edges & p.mask:
                    raise DualPathConflict(f"registered path of face {f} overlaps another")
                used_edges |= p.mask
                used_faces.update(p.faces[:-1])
        for f in wanted:
            if f in self._paths:
                continue
            blocked = (used_faces | set(wanted)) - {f}
            p = self.graph.dual_path(f, avoid_edges=used_edges, avoid_faces=frozenset(blocked))
            self._paths[f] = p
            used_edges |= p.mask
            used_faces.update(p.faces[:-1])
        return [self._paths[f] for f in wanted]


def cycle_parity(g: Graph, omega: int, gamma: int, rng: random.Random | None = None) -> bool:
    """True iff every cycle of (V, omega) crosses ``gamma`` an even number of times.

    Checked on the fundamental cycles of a spanning forest; parity is linear
    over the cycle space so the basis decides it.  ``omega`` and ``gamma``
    are edge masks.
    """
    rootpath, nontree = g.spanning_forest(omega, rng)
    for j in nontree:
        a, b = g.ends[j]
        cyc = rootpath[a] ^ rootpath[b] ^ (1 << j)
        if (cyc & gamma).bit_count() & 1:
            return False
    return True


def corner_positions(g: PlanarGraph, corners: Sequence[Corner], paths: DualPathRegistry) -> dict:
    """Sort key of each corner along the outer boundary of G' = G - Gamma.

    Gamma is the union of the registered paths of the corner faces.  The key
    is (visit index in counterclockwise order, sector offset inside the visit).
    """
    g._require_connected()
    gamma = paths.gamma({c.face for c in corners})
    sub = g.without_edges(gamma) if gamma else g
    if not sub.is_connected():
        raise CornerVertexNotOnNewBoundary("removing the dual paths disconnects the graph")
    visits = {}
    for pos, d in enumerate(sub._ccw_outer_darts()):
        visits.setdefault((sub.tail(d), d >> 1), pos)
    keep_index = {}
    if gamma:
        kept = [j for j in range(g.m) if not gamma >> j & 1]
        keep_index = {j: k for k, j in enumerate(kept)}
    out = {}
    for c in corners:
        i = g.index[c.vertex]
        order = g.rotation[i]
        sectors = [k for k, j in enumerate(order) if g.face_of_dart[g.dart_from(j, i)] == c.face]
        if not sectors:
            raise CornerVertexNotOnNewBoundary(f"face {c.face} is not incident to {c.vertex!r}")
        k = sectors[0]
        for back in range(len(order)):
            j = order[(k - back) % len(order)]
            if not gamma >> j & 1:
                break
        else:
            raise CornerVertexNotOnNewBoundary(f"all edges at {c.vertex!r} lie on dual paths")
        sub_j = keep_index.get(j, j) if gamma else j
        key = (i, sub_j)
        if key not in visits:
            raise CornerVertexNotOnNewBoundary(f"corner {c} is not on the outer face of G'")
        out[c] = (visits[key], back)
    return out


def build_graph(desc: dict, name: str = "") -> Graph:
    """Graph from the JSON-style description.

    Expected keys: ``vertices``, ``edges`` (objects with ``id`` and ``ends``)
    and, for a plane embedding, ``rotation`` and ``outer_face``.  Without
    ``rotation`` a plain :class:`Graph` is returned.
    """
    try:
        vertices = list(desc["vertices"])
        edges = [(e["id"], e["ends"][0], e["ends"][1]) for e in desc["edges"]]
    except (KeyError, TypeError, IndexError) as exc:
        raise MalformedGraph(f"bad graph description: {exc}") from None
    name = name or desc.get("name", "")
    rotation = desc.get("rotation")
    if rotation is None:
        return Graph(vertices, edges, name=name)
    by_key = {str(v): v for v in vertices}
    rot = {}
    for k, order in rotation.items():
        v = k if k in by_key.values() and not isinstance(k, str) else by_key.get(str(k))
        if v is None:
            raise MalformedRotation(f"rotation given for unknown vertex {k!r}")
        rot[v] = list(order)
    return PlanarGraph(vertices, edges, rot, desc.get("outer_face"), name=name)


def describe(g: Graph) -> dict:
    """Inverse of :func:`build_graph` (weights not included)."""
    out = {
        "name": g.name,
        "vertices": list(g.vertices),
        "edges": [{"id": e, "ends": [g.vertices[a], g.vertices[b]]} for e, (a, b) in zip(g.edge_ids, g.ends)],
    }
    if g.is_planar_embedded:
        out["rotation"] = {str(v): [g.edge_ids[j] for j in g.rotation[i]] for i, v in enumerate(g.vertices)}
        out["outer_face"] = [g.edge_ids[d >> 1] for d in reversed(g.faces[OUTER])]
    return out
