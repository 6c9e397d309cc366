"""Embedded planar graphs with two designated faces, terminal layouts, and input parsing.

Conventions
-----------
* ``rotation[v]`` lists the edges incident to ``v`` in **counter-clockwise** order.
* A *dart* is a directed edge side; dart ``2*e`` runs ``edges[e][0] -> edges[e][1]``
  and dart ``2*e + 1`` runs the other way.
* Faces are traced with the face on the **left** of each dart, so the unbounded
  face is walked clockwise and bounded faces counter-clockwise.
* "Clockwise" on both designated faces is the global clockwise sense of the
  annulus between them: along the outer face it coincides with the face walk,
  along the inner face it is the reversed walk.
"""

from __future__ import annotations

import json
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

from .errors import (
    EmbeddingError,
    EvenFaceCountError,
    InvariantViolation,
    SchemaError,
    TerminalPlacementError,
)

W_MAX = 10**6

OUTER, INNER = 1, 2


def dart_edge(d: int) -> int:
    return d >> 1


def reverse_dart(d: int) -> int:
    return d ^ 1


class EmbeddedGraph:
    """Weighted undirected plane graph given by a rotation system.

    Vertices are stored by index; ``names`` keeps the external identifiers.
    Instances are treated as immutable.
    """

    __slots__ = (
        "names", "edges", "rotation", "faces", "left_face",
        "outer_face", "inner_face", "_index", "_pos",
    )

    def __init__(
        self,
        names: Sequence,
        edges: Sequence[tuple[int, int, int]],
        rotation: Sequence[Sequence[int]],
        outer_dart: int,
        inner_dart: int,
        w_max: int = W_MAX,
    ):
        self.names = tuple(names)
        self.edges = tuple((int(u), int(v), int(w)) for u, v, w in edges)
        self.rotation = tuple(tuple(int(e) for e in rot) for rot in rotation)
        self._index = {name: i for i, name in enumerate(self.names)}
        if len(self._index) != len(self.names):
            raise SchemaError("vertex identifiers must be unique")
        n = len(self.names)
        if n == 0:
            raise SchemaError("graph has no vertices")
        for e, (u, v, w) in enumerate(self.edges):
            if not (0 <= u < n and 0 <= v < n):
                raise SchemaError(f"edge {e} references an unknown vertex")
            if u == v:
                raise SchemaError(f"edge {e} is a self-loop")
            if not 0 <= w <= w_max:
                raise SchemaError(f"edge {e} weight {w} outside [0, {w_max}]")
        if len(self.rotation) != n:
            raise EmbeddingError("rotation system must list every vertex")
        self._pos = {}
        for v, rot in enumerate(self.rotation):
            incident = sorted(e for e, (a, b, _) in enumerate(self.edges) if v in (a, b))
            if sorted(rot) != incident:
                raise EmbeddingError(f"rotation at vertex {self.names[v]!r} does not list its incident edges")
            for i, e in enumerate(rot):
                self._pos[(v, e)] = i
        self._check_connected()
        self.faces, self.left_face = _trace_faces(self)
        m = len(self.edges)
        if n - m + len(self.faces) != 2:
            raise EmbeddingError(
                f"Euler's formula fails (V={n}, E={m}, F={len(self.faces)}); rotation is not planar"
            )
        self.outer_face = self.left_face[outer_dart]
        self.inner_face = self.left_face[inner_dart]
        if self.outer_face == self.inner_face:
            raise EmbeddingError("outer and inner face coincide")

    # -- basic accessors -------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise SchemaError(f"unknown vertex {name!r}") from None

    def tail(self, d: int) -> int:
        u, v, _ = self.edges[d >> 1]
        return v if d & 1 else u

    def head(self, d: int) -> int:
        u, v, _ = self.edges[d >> 1]
        return u if d & 1 else v

    def weight(self, d_or_e: int, *, dart: bool = False) -> int:
        return self.edges[d_or_e >> 1 if dart else d_or_e][2]

    def out_dart(self, v: int, e: int) -> int:
        return 2 * e + (0 if self.edges[e][0] == v else 1)

    def dart_between(self, u: int, v: int) -> int:
        for e in self.rotation[u]:
            d = self.out_dart(u, e)
            if self.head(d) == v:
                return d
        raise SchemaError(f"no edge between {self.names[u]!r} and {self.names[v]!r}")

    def next_in_face(self, d: int) -> int:
        """Successor of dart ``d`` in the walk of the face on its left."""
        v = self.head(d)
        rot = self.rotation[v]
        i = self._pos[(v, d >> 1)]
        return self.out_dart(v, rot[i - 1])

    def face_vertices(self, f: int) -> tuple[int, ...]:
        return tuple(self.tail(d) for d in self.faces[f])

    def neighbors(self, v: int) -> list[tuple[int, int]]:
        """``(neighbor, edge id)`` pairs in rotation order."""
        return [(self.head(self.out_dart(v, e)), e) for e in self.rotation[v]]

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def with_weights(self, weights: Sequence[int]) -> "EmbeddedGraph":
        edges = [(u, v, int(w)) for (u, v, _), w in zip(self.edges, weights)]
        return EmbeddedGraph(
            self.names, edges, self.rotation,
            self.faces[self.outer_face][0], self.faces[self.inner_face][0],
            w_max=max([W_MAX, *map(int, weights)]),
        )

    def _check_connected(self) -> None:
        n = len(self.names)
        adj = [[] for _ in range(n)]
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        todo = [0]
        while todo:
            x = todo.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        if len(seen) != n:
            raise EmbeddingError("graph is disconnected")


def _trace_faces(g: EmbeddedGraph) -> tuple[tuple[tuple[int, ...], ...], list[int]]:
    ndarts = 2 * len(g.edges)
    left = [-1] * ndarts
    faces = []
    for start in range(ndarts):
        if left[start] != -1:
            continue
        walk = []
        d = start
        while left[d] == -1:
            left[d] = len(faces)
            walk.append(d)
            d = g.next_in_face(d)
        if d != start:
            raise EmbeddingError("rotation system does not define a permutation of darts")
        faces.append(tuple(walk))
    if not faces:
        # a single vertex has one (empty) face
        faces.append(())
    return tuple(faces), left


def derive_faces(g: EmbeddedGraph) -> tuple[tuple[int, ...], ...]:
    """Face boundary walks as dart sequences (face on the left of every dart)."""
    return g.faces


@dataclass(frozen=True)
class TerminalLayout:
    """Terminals on the two designated faces, each listed clockwise, and the demanded pairs."""

    K1: tuple[int, ...]
    K2: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]

    @property
    def k1(self) -> int:
        return len(self.K1)

    @property
    def k2(self) -> int:
        return len(self.K2)

    @property
    def k(self) -> int:
        return len(self.pairs)

    @property
    def terminals(self) -> tuple[int, ...]:
        return self.K1 + self.K2

    def validate(self, g: EmbeddedGraph, require_odd: bool = True) -> None:
        terms = self.terminals
        if len(set(terms)) != len(terms):
            raise TerminalPlacementError("terminals must be distinct vertices")
        if require_odd and (self.k1 % 2 == 0 or self.k2 % 2 == 0):
            raise EvenFaceCountError(
                f"each face needs an odd number of terminals (got k1={self.k1}, k2={self.k2})"
            )
        seen = []
        for s, t in self.pairs:
            if s == t:
                raise TerminalPlacementError("source and sink of a pair coincide")
            seen += [s, t]
        if sorted(seen) != sorted(terms):
            raise TerminalPlacementError("every terminal must appear in exactly one pair")
        for v in terms:
            if g.degree(v) < 1:
                raise TerminalPlacementError(f"terminal {g.names[v]!r} has degree 0")
        _check_face_order(g, self.K1, g.face_vertices(g.outer_face), "outer")
        _check_face_order(g, self.K2, g.face_vertices(g.inner_face)[::-1], "inner")


def _check_face_order(g: EmbeddedGraph, seq, walk, which: str) -> None:
    pos = []
    for v in seq:
        hits = [i for i, x in enumerate(walk) if x == v]
        if len(hits) != 1:
            raise TerminalPlacementError(
                f"terminal {g.names[v]!r} must appear exactly once on the {which} face "
                f"(found {len(hits)} times)"
            )
        pos.append(hits[0])
    k = len(pos)
    if k >= 3:
        descents = sum(pos[(i + 1) % k] < pos[i] for i in range(k))
        if descents != 1:
            raise TerminalPlacementError(f"terminals on the {which} face are not in clockwise order")


@dataclass(frozen=True)
class PlainGraph:
    """Weighted undirected graph without embedding, with terminal sets A and B."""

    names: tuple
    edges: tuple[tuple[int, int, int], ...]
    A: tuple[int, ...]
    B: tuple[int, ...]

    def __post_init__(self):
        n = len(self.names)
        for e, (u, v, w) in enumerate(self.edges):
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise SchemaError(f"edge {e} is malformed")
            if w < 0:
                raise SchemaError(f"edge {e} has negative weight")
        if set(self.A) & set(self.B):
            raise TerminalPlacementError("A and B must be disjoint")
        if len(set(self.A)) != len(self.A) or len(set(self.B)) != len(self.B):
            raise TerminalPlacementError("terminals must be distinct")
        if (len(self.A) - len(self.B)) % 2:
            raise TerminalPlacementError("|A| and |B| must have equal parity")

    @property
    def n(self) -> int:
        return len(self.names)


# -- dual axis ------------------------------------------------------------

@dataclass(frozen=True)
class AxisDescriptor:
    """A simple dual path from the outer to the inner face.

    ``darts`` holds, for every crossed primal edge, the dart that crosses the
    axis clockwise (it carries ``y``; its reverse carries ``y^-1``).
    ``offsets[i]`` is the index into ``K1``/``K2`` of the terminal that receives
    label 0, i.e. the first terminal clockwise after the axis endpoint.
    """

    faces: tuple[int, ...]
    darts: tuple[int, ...]
    offsets: tuple[int, int]

    def y_exponent(self, d: int) -> int:
        if d in self.darts:
            return 1
        if reverse_dart(d) in self.darts:
            return -1
        return 0

    @property
    def edges(self) -> tuple[int, ...]:
        return tuple(d >> 1 for d in self.darts)

    def labels(self, layout: TerminalLayout) -> dict[int, tuple[int, int]]:
        """Map terminal vertex -> (face, label) in the frame of this axis."""
        out = {}
        for face, seq, s in ((OUTER, layout.K1, self.offsets[0]), (INNER, layout.K2, self.offsets[1])):
            k = len(seq)
            for i, v in enumerate(seq):
                out[v] = (face, (i - s) % k)
        return out

    def terminal_at(self, layout: TerminalLayout, face: int, label: int) -> int:
        seq, s = (layout.K1, self.offsets[0]) if face == OUTER else (layout.K2, self.offsets[1])
        return seq[(label + s) % len(seq)]


def dual_axis(g: EmbeddedGraph, layout: TerminalLayout, blocked: Iterable[int] = ()) -> AxisDescriptor:
    """Breadth-first shortest dual path from the outer face to the inner face.

    Edges listed in ``blocked`` may not be crossed; use it to obtain an
    alternative axis.
    """
    blocked = set(blocked)
    nf = len(g.faces)
    prev: list[tuple[int, int] | None] = [None] * nf
    seen = [False] * nf
    seen[g.outer_face] = True
    todo = deque([g.outer_face])
    while todo:
        f = todo.popleft()
        if f == g.inner_face:
            break
        for d in g.faces[f]:
            if d >> 1 in blocked:
                continue
            h = g.left_face[reverse_dart(d)]
            if not seen[h]:
                seen[h] = True
                prev[h] = (f, d)
                todo.append(h)
    if not seen[g.inner_face]:
        raise EmbeddingError("no dual path between the designated faces avoids the blocked edges")
    faces = [g.inner_face]
    darts = []
    f = g.inner_face
    while f != g.outer_face:
        pf, d = prev[f]
        darts.append(d)
        faces.append(pf)
        f = pf
    faces.reverse()
    darts.reverse()
    # each dart d has the face it leaves on its left: it crosses the axis clockwise
    axis = AxisDescriptor(tuple(faces), tuple(darts), _axis_offsets(g, layout, darts))
    check_axis(g, axis)
    return axis


def check_axis(g: EmbeddedGraph, axis: AxisDescriptor) -> None:
    """Net crossings: +1 around the outer walk, -1 around the inner walk, 0 around any other face."""
    for f, walk in enumerate(g.faces):
        want = 1 if f == g.outer_face else -1 if f == g.inner_face else 0
        if signed_crossings(axis, walk) != want:
            raise InvariantViolation(f"axis has net crossing {signed_crossings(axis, walk)} on face {f}")


def _axis_offsets(g: EmbeddedGraph, layout: TerminalLayout, darts: Sequence[int]) -> tuple[int, int]:
    walk1 = g.faces[g.outer_face]
    i = walk1.index(darts[0])
    verts1 = [g.tail(walk1[(i + 1 + j) % len(walk1)]) for j in range(len(walk1))]
    first1 = next(v for v in verts1 if v in layout.K1)
    walk2 = g.faces[g.inner_face]
    i = walk2.index(reverse_dart(darts[-1]))
    verts2 = [g.tail(walk2[(i - j) % len(walk2)]) for j in range(len(walk2))]
    first2 = next(v for v in verts2 if v in layout.K2)
    return layout.K1.index(first1), layout.K2.index(first2)


def signed_crossings(axis: AxisDescriptor, darts: Iterable[int]) -> int:
    """Net clockwise crossings of the axis by a dart sequence."""
    return sum(axis.y_exponent(d) for d in darts)


# -- input/output ----------------------------------------------------------

SCHEMA_VERSION = 1


def _require(doc: Mapping, key: str, kind):
    if key not in doc:
        raise SchemaError(f"missing key {key!r}")
    val = doc[key]
    if not isinstance(val, kind):
        raise SchemaError(f"key {key!r} must be of type {kind}")
    return val


def _parse_edges(raw, index) -> list[tuple[int, int, int]]:
    edges = []
    for i, item in enumerate(raw):
        if not (isinstance(item, list) and len(item) == 3):
            raise SchemaError(f"edge {i} must be [u, v, weight]")
        u, v, w = item
        if not isinstance(w, int) or isinstance(w, bool):
            raise SchemaError(f"edge {i} weight must be an integer")
        edges.append((index(u), index(v), w))
    return edges


def _as_doc(document) -> dict:
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise SchemaError("instance document must be a JSON object")
    return document


def load_instance(document, w_max: int = W_MAX, require_odd: bool = True):
    """Parse and validate a two-face instance document.

    Returns ``(graph, layout)``. See ``docs/schema.md`` for the format.
    """
    doc = _as_doc(document)
    names = _require(doc, "vertices", list)
    index_of = {}
    for i, v in enumerate(names):
        if isinstance(v, bool) or not isinstance(v, (int, str)):
            raise SchemaError("vertex identifiers must be integers or strings")
        index_of[v] = i
    if len(index_of) != len(names):
        raise SchemaError("vertex identifiers must be unique")

    def index(name):
        if name not in index_of:
            raise SchemaError(f"unknown vertex {name!r}")
        return index_of[name]

    edges = _parse_edges(_require(doc, "edges", list), index)
    rot_raw = _require(doc, "rotation", dict)
    rotation = []
    for v in names:
        key = str(v)
        if key not in rot_raw:
            raise EmbeddingError(f"rotation missing for vertex {v!r}")
        ids = rot_raw[key]
        if not isinstance(ids, list) or not all(isinstance(e, int) and 0 <= e < len(edges) for e in ids):
            raise SchemaError(f"rotation of {v!r} must be a list of edge ids")
        rotation.append(ids)

    def hint(key):
        pair = _require(doc, key, list)
        if len(pair) != 2:
            raise SchemaError(f"{key} must be [u, v]")
        return pair

    # darts are resolved after construction of a provisional graph
    o_u, o_v = hint("outer_face_edge")
    i_u, i_v = hint("inner_face_edge")
    o_dart = _dart_from_names(edges, index(o_u), index(o_v))
    i_dart = _dart_from_names(edges, index(i_u), index(i_v))
    g = EmbeddedGraph(names, edges, rotation, o_dart, i_dart, w_max=w_max)

    terms = _require(doc, "terminals", dict)
    K1 = tuple(index(v) for v in _require(terms, "K1", list))
    K2 = tuple(index(v) for v in _require(terms, "K2", list))
    pairs = []
    for p in _require(terms, "pairs", list):
        if not (isinstance(p, list) and len(p) == 2):
            raise SchemaError("each pair must be [source, sink]")
        pairs.append((index(p[0]), index(p[1])))
    layout = TerminalLayout(K1, K2, tuple(pairs))
    layout.validate(g, require_odd=require_odd)
    if "faces" in doc:
        _cross_check_faces(g, doc["faces"], index)
    return g, layout


def _dart_from_names(edges, u, v) -> int:
    for e, (a, b, _) in enumerate(edges):
        if (a, b) == (u, v):
            return 2 * e
        if (a, b) == (v, u):
            return 2 * e + 1
    raise SchemaError("face hint does not name an edge")


def _cross_check_faces(g: EmbeddedGraph, declared, index) -> None:
    derived = {_canonical_cycle(g.face_vertices(f)) for f in range(len(g.faces))}
    for face in declared:
        if _canonical_cycle(tuple(index(v) for v in face)) not in derived:
            raise EmbeddingError(f"declared face {face!r} is not a face of the rotation system")


def _canonical_cycle(seq) -> tuple:
    if not seq:
        return ()
    rots = [tuple(seq[i:]) + tuple(seq[:i]) for i in range(len(seq))]
    return min(rots)


def dump_instance(g: EmbeddedGraph, layout: TerminalLayout) -> dict:
    """Inverse of :func:`load_instance`."""
    nm = g.names
    od = g.faces[g.outer_face][0]
    idd = g.faces[g.inner_face][0]
    return {
        "version": SCHEMA_VERSION,
        "vertices": list(nm),
        "edges": [[nm[u], nm[v], w] for u, v, w in g.edges],
        "rotation": {str(nm[v]): list(rot) for v, rot in enumerate(g.rotation)},
        "outer_face_edge": [nm[g.tail(od)], nm[g.head(od)]],
        "inner_face_edge": [nm[g.tail(idd)], nm[g.head(idd)]],
        "terminals": {
            "K1": [nm[v] for v in layout.K1],
            "K2": [nm[v] for v in layout.K2],
            "pairs": [[nm[s], nm[t]] for s, t in layout.pairs],
        },
    }


def load_ab_instance(document) -> tuple[PlainGraph, int]:
    """Parse an (A+B, q) document: vertices, edges, A, B, q."""
    doc = _as_doc(document)
    names = _require(doc, "vertices", list)
    index_of = {v: i for i, v in enumerate(names)}
    if len(index_of) != len(names):
        raise SchemaError("vertex identifiers must be unique")

    def index(name):
        if name not in index_of:
            raise SchemaError(f"unknown vertex {name!r}")
        return index_of[name]

    edges = _parse_edges(_require(doc, "edges", list), index)
    A = tuple(index(v) for v in _require(doc, "A", list))
    B = tuple(index(v) for v in _require(doc, "B", list))
    q = _require(doc, "q", int)
    g = PlainGraph(tuple(names), tuple(edges), A, B)
    if q < 0 or q > min(len(A), len(B)) or (len(A) - q) % 2:
        raise TerminalPlacementError("q must satisfy q <= min(|A|,|B|) and q = |A| = |B| mod 2")
    return g, q


def dump_ab_instance(g: PlainGraph, q: int) -> dict:
    nm = g.names
    return {
        "version": SCHEMA_VERSION,
        "vertices": list(nm),
        "edges": [[nm[u], nm[v], w] for u, v, w in g.edges],
        "A": [nm[v] for v in g.A],
        "B": [nm[v] for v in g.B],
        "q": q,
    }
