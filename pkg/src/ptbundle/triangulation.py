"""
Layered ideal triangulation of a once-punctured-torus bundle.

Each strip step T_j -> T_{j+1} is a diagonal exchange on the punctured
torus and contributes one ideal tetrahedron.  In tetrahedron j the four
vertices are the corners P0 = 0, P1 = a, P2 = a + b, P3 = b of a
fundamental parallelogram spanned by the two slopes shared by T_j and
T_{j+1} (with det(a, b) = 1); the diagonal with the slope leaving the
strip is the bottom edge and the other diagonal the top edge.

A face is identified with a triangle of the punctured torus by the set of
its counter-clockwise edge vectors, which does not depend on where the
parallelogram sits.  Top faces of layer j are glued to the bottom faces of
layer j+1 with the same key, and the top of layer n-1 is glued to the
bottom of layer 0 through the inverse monodromy.  Corners are matched by
the edge vector opposite them.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .farey import Strip, build_strip
from .sl2z import MatSL2, Slope, TwistWord

EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
# opposite edges share an angle
PAIR = {(0, 1): 0, (2, 3): 0, (0, 2): 1, (1, 3): 1, (0, 3): 2, (1, 2): 2}


@dataclass(frozen=True)
class Tetrahedron:
    index: int
    corners: tuple          # P0..P3 as integer vectors in the plane
    bottom: tuple           # bottom diagonal, (0, 2) or (1, 3)
    orientation: int        # +1 / -1 from the embedding in T x R
    edge_slopes: dict       # edge (u, v) -> Slope
    # angle-pair ids (0: 01/23, 1: 02/13, 2: 03/12) in the positive cyclic
    # order that carries the shapes z, 1/(1-z), (z-1)/z
    shape_order: tuple


@dataclass(frozen=True)
class LayeredTriangulation:
    word: TwistWord
    strip: Strip
    tetrahedra: tuple
    gluings: dict           # (tet, face) -> (tet', face', vertex map as a 4-tuple)
    edge_classes: tuple     # each a tuple of (tet, edge) slots, ordered

    @property
    def n(self) -> int:
        return len(self.tetrahedra)

    def incidences(self, cls: int):
        """(tet, angle variable 0..2) for every slot of an edge class."""
        out = []
        for t, e in self.edge_classes[cls]:
            out.append((t, self.tetrahedra[t].shape_order.index(PAIR[e])))
        return out


def _slope(v):
    return Slope.of(*v)


def _add(u, v):
    return (u[0] + v[0], u[1] + v[1])


def _sub(u, v):
    return (u[0] - v[0], u[1] - v[1])


def _det(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _face_key(pts):
    """ccw edge vectors of a planar triangle, and corner -> opposite edge vector."""
    a, b, c = pts
    if _det(_sub(b, a), _sub(c, a)) < 0:
        b, c = c, b
    vecs = {a: _sub(c, b), b: _sub(a, c), c: _sub(b, a)}
    return frozenset(vecs.values()), vecs


def _apply(A, v):
    return (A.a * v[0] + A.b * v[1], A.c * v[0] + A.d * v[1])


def _tetrahedron(j, old, shared, new):
    a, b = (shared[0].p, shared[0].q), (shared[1].p, shared[1].q)
    if _det(a, b) < 0:
        a, b = b, a
    P = ((0, 0), a, _add(a, b), b)
    if _slope(_add(a, b)) == old:
        bottom = (0, 2)
    else:
        bottom = (1, 3)
        assert _slope(_sub(b, a)) == old
    top = (1, 3) if bottom == (0, 2) else (0, 2)
    assert _slope(_sub(P[top[1]], P[top[0]])) == new

    h = [1 if i in top else 0 for i in range(4)]
    rows = [(P[i][0] - P[0][0], P[i][1] - P[0][1], h[i] - h[0]) for i in (1, 2, 3)]
    orientation = 1 if np.linalg.det(np.array(rows, dtype=float)) > 0 else -1
    order = (0, 1, 2) if orientation > 0 else (0, 2, 1)
    slopes = {e: _slope(_sub(P[e[1]], P[e[0]])) for e in EDGES}
    return Tetrahedron(j, P, bottom, orientation, slopes, order)


def _faces(tet: Tetrahedron, which):
    """Faces (named by opposite vertex) containing the bottom or top diagonal."""
    diag = tet.bottom if which == "bottom" else tuple(sorted({0, 1, 2, 3} - set(tet.bottom)))
    return [f for f in range(4) if f not in diag]


def build_layered_triangulation(w: TwistWord) -> LayeredTriangulation:
    strip = build_strip(w)
    n = strip.n
    A = strip.monodromy
    tets = []
    for j in range(n):
        Tj, Tk = strip.triangles[j].vertex_set(), strip.triangles[j + 1].vertex_set()
        (old,), (new,) = Tj - Tk, Tk - Tj
        tets.append(_tetrahedron(j, old, sorted(Tj & Tk), new))

    def face_data(t, f, M=None):
        pts = [tets[t].corners[i] for i in range(4) if i != f]
        if M is not None:
            pts = [_apply(M, p) for p in pts]
        key, opp = _face_key(pts)
        verts = [i for i in range(4) if i != f]
        corner = {opp[pt]: v for pt, v in zip(pts, verts)}
        return key, corner

    Ainv = A.inverse()
    gluings = {}
    for j in range(n):
        nxt = (j + 1) % n
        M = Ainv if nxt == 0 else None
        below = {}
        for f in _faces(tets[nxt], "bottom"):
            key, corner = face_data(nxt, f)
            below[key] = (f, corner)
        for f in _faces(tets[j], "top"):
            key, corner = face_data(j, f, M)
            g, corner2 = below[key]
            perm = [None] * 4
            for vec, v in corner.items():
                perm[v] = corner2[vec]
            perm[f] = g
            gluings[j, f] = (nxt, g, tuple(perm))
            gluings[nxt, g] = (j, f, tuple(perm.index(i) for i in range(4)))

    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t in range(n):
        for e in EDGES:
            find((t, e))
    for (t, f), (t2, _, perm) in gluings.items():
        for u, v in combinations([i for i in range(4) if i != f], 2):
            e2 = tuple(sorted((perm[u], perm[v])))
            parent[find((t, (u, v)))] = find((t2, e2))
    classes = {}
    for t in range(n):
        for e in EDGES:
            classes.setdefault(find((t, e)), []).append((t, e))
    edge_classes = tuple(sorted(tuple(sorted(c)) for c in classes.values()))
    return LayeredTriangulation(w, strip, tuple(tets), gluings, edge_classes)


def gluing_equations(t: LayeredTriangulation):
    """Angle constraints C x = rhs over x = (a_0, b_0, c_0, a_1, ...).

    One row per tetrahedron (angles sum to pi) followed by one row per edge
    class (angles around the edge sum to 2 pi).
    """
    n = t.n
    C = np.zeros((n + len(t.edge_classes), 3 * n), dtype=int)
    rhs = np.zeros(C.shape[0])
    for j in range(n):
        C[j, 3 * j:3 * j + 3] = 1
        rhs[j] = np.pi
    for i in range(len(t.edge_classes)):
        for tet, var in t.incidences(i):
            C[n + i, 3 * tet + var] += 1
        rhs[n + i] = 2 * np.pi
    return C, rhs


def face_gluings_reverse_orientation(t: LayeredTriangulation) -> bool:
    """Every face pairing reverses the orientations induced by the embedding."""
    for (a, _), (b, _, perm) in t.gluings.items():
        inversions = sum(1 for i in range(4) for j in range(i + 1, 4) if perm[i] > perm[j])
        parity = -1 if inversions % 2 else 1
        if t.tetrahedra[a].orientation * t.tetrahedra[b].orientation * parity != -1:
            return False
    return True
