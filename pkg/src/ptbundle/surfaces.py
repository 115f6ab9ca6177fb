"""
The surface S_gamma built from standard saddles, and its guts report.

Combinatorial model.  Slopes are primitive vectors w = (p, q) acting on the
punctured torus R^2/Z^2 minus the origin.  Two parallel arcs of slope w
leave the puncture near direction +w and arrive near -w, so they meet the
puncture circle in four points, labelled (s, e): s = +1/-1 for the end near
+w/-w and e = +1/-1 for the point just counterclockwise/clockwise of it.
Arc "L" joins (+,+) to (-,-) and arc "R" joins (+,-) to (-,+).

In the saddle between consecutive path slopes u and v the four directions
+-u, +-v alternate around the circle.  Each of the four gaps between
neighbouring directions carries one vertical boundary edge of the octagon,
joining the point of the earlier direction on the gap side (e = +1) to the
point of the later one (e = -1).  The top of the last saddle is glued to
the bottom of the first by the monodromy, which maps (s, e) at w to (s, e)
at A w because A preserves orientation.
"""
from __future__ import annotations

from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field
from enum import Enum

from .errors import InvalidPath
from .farey import EdgePath
from .sl2z import MatSL2, apply_to_slope, farey_adjacent


class Sidedness(str, Enum):
    TWO_SIDED = "TwoSided"
    ONE_SIDED = "OneSided"


@dataclass(frozen=True)
class SaddlePiece:
    index: int
    bottom_slope: object
    top_slope: object
    # e1..e8 as (role, edge id, direction); roles bottom/vertical/top/vertical/...
    faces: tuple


@dataclass
class SurfaceComplex:
    k: int
    faces: list                     # cyclic walks [(edge id, +-1), ...]
    boundary_edges: frozenset
    saddles: tuple = ()
    V: int = 0
    E: int = 0
    F: int = 0
    double: SurfaceComplex | None = field(default=None, repr=False)

    @property
    def chi(self) -> int:
        return self.V - self.E + self.F

    @property
    def sided(self) -> Sidedness:
        return sidedness(self)

    def edge_occurrences(self):
        occ = defaultdict(list)
        for f, walk in enumerate(self.faces):
            for pos, (e, d) in enumerate(walk):
                occ[e].append((f, pos, d))
        return occ

    @property
    def components(self) -> int:
        parent = list(range(len(self.faces)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for occ in self.edge_occurrences().values():
            for f, _, _ in occ[1:]:
                parent[find(f)] = find(occ[0][0])
        return len({find(f) for f in range(len(self.faces))})


def _count_cells(faces):
    """(V, E, F) with vertices found by union-find over face corners."""
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges = set()
    for walk in faces:
        for i, (e, d) in enumerate(walk):
            edges.add(e)
            e2, d2 = walk[(i + 1) % len(walk)]
            end = (e, "head" if d > 0 else "tail")
            start = (e2, "tail" if d2 > 0 else "head")
            parent[find(end)] = find(start)
        for e, _ in walk:
            find((e, "head"))
            find((e, "tail"))
    V = len({find(x) for x in list(parent)})
    return V, len(edges), len(faces)


def _complex(k, faces, boundary, saddles=()):
    V, E, F = _count_cells(faces)
    return SurfaceComplex(k, faces, frozenset(boundary), tuple(saddles), V, E, F)


def _det(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _saddle_walk(i, u, v):
    """Octagon boundary of the saddle between levels i (slope u) and i+1 (slope v).

    Returns a list of (kind, a, b) steps between points (level, s, e).
    """
    dirs = [(u, i, 1), (v, i + 1, 1), (u, i, -1), (v, i + 1, -1)]
    if _det(u, v) < 0:
        dirs = [dirs[0], dirs[3], dirs[2], dirs[1]]
    adj = defaultdict(list)
    for g in range(4):
        (_, la, sa), (_, lb, sb) = dirs[g], dirs[(g + 1) % 4]
        a, b = (la, sa, 1), (lb, sb, -1)
        adj[a].append(("vert", b, g))
        adj[b].append(("vert", a, g))
    for lev in (i, i + 1):
        for e in (1, -1):
            a, b = (lev, 1, e), (lev, -1, -e)
            adj[a].append(("arc", b, None))
            adj[b].append(("arc", a, None))
    # every point has one arc and one vertical edge; alternate between them
    start = (i, 1, 1)
    walk, cur, kind = [], start, "arc"
    while True:
        (other, g), = [(b, g) for kd, b, g in adj[cur] if kd == kind]
        walk.append((kind, cur, other, g))
        cur, kind = other, ("vert" if kind == "arc" else "arc")
        if cur == start:
            break
    if len(walk) != 8:
        raise AssertionError(f"saddle {i} does not close up as an octagon")
    return walk


def build_surface(path: EdgePath, A: MatSL2 | None = None) -> SurfaceComplex:
    A = A or path.monodromy
    k = len(path.vertices)
    slopes = [path.vertex(i) for i in range(k + 1)]
    for i in range(k):
        if not farey_adjacent(slopes[i], slopes[i + 1]):
            raise InvalidPath(f"{slopes[i]} and {slopes[i + 1]} are not Farey neighbours")
    if apply_to_slope(A, slopes[0]) != slopes[k]:
        raise InvalidPath("path does not close up under the monodromy")
    vecs = [(s.p, s.q) for s in slopes]
    Aw0 = (A.a * vecs[0][0] + A.b * vecs[0][1], A.c * vecs[0][0] + A.d * vecs[0][1])
    sigma = 1 if Aw0 == vecs[k] else -1

    def ident(pt):
        lev, s, e = pt
        if lev == k:
            return (0, sigma * s, e)
        return pt

    def arc_edge(a, b):
        a, b = ident(a), ident(b)
        if a[1] < 0:
            a, b = b, a
            d = -1
        else:
            d = 1
        side = "L" if a[2] > 0 else "R"
        return ("arc", a[0], side), d

    faces, boundary, saddles = [], set(), []
    for i in range(k):
        walk = []
        roles = []
        for kind, a, b, g in _saddle_walk(i, vecs[i], vecs[i + 1]):
            if kind == "arc":
                e, d = arc_edge(a, b)
                roles.append("bottom" if a[0] == i else "top")
            else:
                e = ("vert", i, g)
                d = 1 if a[0] == i else -1
                boundary.add(e)
                roles.append("vertical")
            walk.append((e, d))
        faces.append(walk)
        saddles.append(SaddlePiece(i, slopes[i], slopes[i + 1],
                                   tuple((r, e, d) for r, (e, d) in zip(roles, walk))))
    S = _complex(k, faces, boundary, saddles)
    if sidedness(S) is Sidedness.ONE_SIDED:
        S.double = orientation_double(S)
    return S


def orientation_double(c: SurfaceComplex) -> SurfaceComplex:
    """Orientation double cover, i.e. the boundary of a regular neighbourhood."""
    occ = c.edge_occurrences()
    first = {e: (o[0][0], o[0][1]) for e, o in occ.items()}
    faces, boundary = [], set()
    for f, walk in enumerate(c.faces):
        for o in (1, -1):
            new = []
            for pos, (e, d) in enumerate(walk):
                tau = o * d if first[e] == (f, pos) else -o * d
                new.append(((e, tau), o * d))
                if e in c.boundary_edges:
                    boundary.add((e, tau))
            faces.append(new if o > 0 else new[::-1])
    return _complex(2 * c.k, faces, boundary)


def sidedness(c: SurfaceComplex) -> Sidedness:
    """Propagate a transverse orientation across interior edges.

    The ambient bundle is orientable (det A = 1), so a co-orientation of the
    surface is the same datum as an orientation of it: across each interior
    edge the two incident face walks must run in opposite directions.  A
    cycle of faces forcing a reversal means the surface is one-sided.
    """
    occ = c.edge_occurrences()
    adj = defaultdict(list)
    for e, o in occ.items():
        if len(o) == 2:
            (f1, _, d1), (f2, _, d2) = o
            # o1 * d1 == -o2 * d2
            rel = -d1 * d2
            adj[f1].append((f2, rel))
            adj[f2].append((f1, rel))
        elif len(o) > 2:
            raise AssertionError(f"edge {e} bounds {len(o)} faces")
    orient = {}
    for root in range(len(c.faces)):
        if root in orient:
            continue
        orient[root] = 1
        queue = deque([root])
        while queue:
            f = queue.popleft()
            for g, rel in adj[f]:
                want = orient[f] * rel
                if g not in orient:
                    orient[g] = want
                    queue.append(g)
                elif orient[g] != want:
                    return Sidedness.ONE_SIDED
    return Sidedness.TWO_SIDED


def edge_multiplicities(c: SurfaceComplex) -> Counter:
    return Counter(len(o) for o in c.edge_occurrences().values())


@dataclass(frozen=True)
class GutsReport:
    k: int
    parity: str
    square_neighborhoods: int
    seifert_solid_tori: int
    handlebody_ibundle: int
    guts_empty: bool
    chi_surface: int
    agol_lower_bound: float

    def __post_init__(self):
        even = self.k % 2 == 0
        expect = (self.k, self.k, 0 if even else 1)
        got = (self.square_neighborhoods, self.seifert_solid_tori, self.handlebody_ibundle)
        if got != expect or self.parity != ("even" if even else "odd"):
            raise ValueError(f"component counts {got} do not match k = {self.k}")
        if self.chi_surface != (-self.k if even else -2 * self.k):
            raise ValueError(f"chi = {self.chi_surface} does not match k = {self.k}")
        if not self.guts_empty:
            raise ValueError("guts are empty for every such surface")


def guts_report(path: EdgePath, surface: SurfaceComplex | None = None) -> GutsReport:
    """Characteristic-submanifold summary for the cut-open bundle M - S_gamma.

    The counts are the classification for punctured-torus bundles (k square
    neighbourhoods cutting the complement into k Seifert-fibred solid tori,
    plus the I-bundle over S when S is one-sided); chi is taken from the
    constructed complex, so a bookkeeping mismatch raises instead of passing.
    """
    surface = surface or build_surface(path)
    k = path.period
    even = k % 2 == 0
    sg = surface if surface.double is None else surface.double
    # Vol >= -2 V3 chi(Guts) with chi(empty) = 0
    return GutsReport(
        k=k,
        parity="even" if even else "odd",
        square_neighborhoods=k,
        seifert_solid_tori=k,
        handlebody_ibundle=0 if even else 1,
        guts_empty=True,
        chi_surface=sg.chi,
        agol_lower_bound=0.0,
    )
