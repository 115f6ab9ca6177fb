"""
The A-invariant strip of Farey triangles and the minimal edge paths in it.

The strip is the axis of the monodromy in the tree dual to the Farey
tessellation: triangle T_j is the image of the base triangle {0, 1, oo}
under the product of the first j letters of the R/L word, and the
monodromy carries T_j to T_{j+n}.

Strip vertices are labelled by *birth index*: the vertex that enters at
T_j (the one not in T_{j-1}) gets label j.  Every integer is the label of
exactly one vertex, the monodromy acts as  label -> label + n, and the
orbit of a vertex is its label mod n.  All path enumeration happens on
these integer labels.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import TooManyPaths
from .sl2z import (INFINITY, L, MatSL2, R, Slope, TwistWord, apply_to_slope,
                   farey_adjacent, word_to_matrix)

BASE_TRIANGLE = (Slope(0, 1), Slope(1, 1), INFINITY)


@dataclass(frozen=True)
class IdealTriangle:
    vertices: tuple

    def __post_init__(self):
        for s, t in combinations(self.vertices, 2):
            if not farey_adjacent(s, t):
                raise ValueError(f"{s} and {t} are not Farey neighbours")

    def vertex_set(self):
        return frozenset(self.vertices)

    def image(self, A: MatSL2) -> IdealTriangle:
        return IdealTriangle(tuple(apply_to_slope(A, v) for v in self.vertices))


@dataclass(frozen=True)
class Strip:
    word: TwistWord
    monodromy: MatSL2
    prefixes: tuple             # P_0 .. P_n, with P_n == monodromy
    triangles: tuple            # T_0 .. T_n
    labels: tuple               # birth labels of T_0 .. T_{n-1}, as frozensets
    slope_of_label: tuple       # slope of labels 0 .. n-1

    @property
    def n(self) -> int:
        return self.word.length

    def triangle(self, j: int) -> IdealTriangle:
        m, r = divmod(j, self.n)
        A = self.monodromy ** m
        return self.triangles[r].image(A)

    def triangle_labels(self, j: int) -> frozenset:
        m, r = divmod(j, self.n)
        return frozenset(b + m * self.n for b in self.labels[r])

    def slope(self, label: int) -> Slope:
        m, r = divmod(label, self.n)
        return apply_to_slope(self.monodromy ** m, self.slope_of_label[r])

    def fan(self, label: int) -> range:
        """Indices j of the strip triangles containing vertex `label`."""
        j = label
        while label in self.triangle_labels(j + 1):
            j += 1
        return range(label, j + 1)

    def edge_index(self, u: int, v: int) -> int:
        """Largest j with both endpoints in T_j (the strip coordinate of an edge)."""
        j = min(self.fan(u)[-1], self.fan(v)[-1])
        if not {u, v} <= self.triangle_labels(j):
            raise ValueError(f"{u}-{v} is not a strip edge")
        return j

    def edge_triangles(self, u: int, v: int) -> tuple:
        j = self.edge_index(u, v)
        if {u, v} <= self.triangle_labels(j - 1):
            return (j - 1, j)
        return (j,)


def build_strip(w: TwistWord) -> Strip:
    w = TwistWord(w.syllables)  # the strip only sees the positive word
    n = w.length
    A = word_to_matrix(w)
    prefixes = [MatSL2.identity()]
    for letter in w.letters():
        prefixes.append(prefixes[-1] @ (R if letter == "R" else L))
    assert prefixes[-1] == A
    base = IdealTriangle(BASE_TRIANGLE)
    triangles = tuple(base.image(P) for P in prefixes)

    # Births over a window wide enough that every vertex of T_0..T_{n-1}
    # is first seen strictly inside it: a fan spans at most n+1 triangles.
    lo = -2 * n - 2
    Ainv = A.inverse()
    birth = {}
    for j in range(lo, n):
        m, r = divmod(j, n)
        M = (Ainv ** -m if m < 0 else A ** m) @ prefixes[r]
        for v in base.image(M).vertices:
            birth.setdefault(v, j)
    labels = tuple(frozenset(birth[v] for v in triangles[j].vertices) for j in range(n))
    slope_of_label = [None] * n
    for v, b in birth.items():
        if 0 <= b < n:
            slope_of_label[b] = v
    if any(min(lab) <= lo for lab in labels):
        raise AssertionError("birth window too small")
    return Strip(w, A, tuple(prefixes), triangles, labels, tuple(slope_of_label))


@dataclass(frozen=True)
class QuotientEdge:
    ends: tuple         # birth labels (u, v), u < v, with the edge's strip index in 1..n
    triangles: tuple    # strip indices of the one or two triangles containing it


@dataclass(frozen=True)
class QuotientGraph:
    n: int
    vertices: tuple     # slope representatives of the orbits 0 .. n-1
    edges: tuple

    def degree(self, orbit: int) -> int:
        return sum(1 for e in self.edges for u in e.ends if u % self.n == orbit)


def quotient_graph(s: Strip) -> QuotientGraph:
    """Strip 1-skeleton modulo v ~ A.v.

    Each T_j has two rungs (shared with T_{j-1} and T_{j+1}) and one
    boundary edge, so one fundamental domain holds n rungs and n boundary
    edges; both kinds are indexed by the last triangle that contains them.
    """
    edges = []
    for j in range(1, s.n + 1):
        tri = s.triangle_labels(j)
        for u, v in combinations(sorted(tri), 2):
            if s.edge_index(u, v) == j:
                edges.append(QuotientEdge((u, v), s.edge_triangles(u, v)))
    return QuotientGraph(s.n, s.slope_of_label, tuple(edges))


@dataclass(frozen=True)
class EdgePath:
    """One period v_0 .. v_{k-1} of an A-invariant Farey edge path.

    The path continues with v_{i+k} = A v_i.  `labels` are the strip birth
    labels when the path came from the enumeration.
    """
    vertices: tuple
    monodromy: MatSL2
    labels: tuple = field(default=(), compare=False)

    @property
    def period(self) -> int:
        return path_period(self)

    def vertex(self, i: int) -> Slope:
        m, r = divmod(i, len(self.vertices))
        return apply_to_slope(self.monodromy ** m, self.vertices[r])

    def __str__(self):
        return " -> ".join(str(v) for v in self.vertices)


def path_period(p: EdgePath) -> int:
    """Least k with A v_i = v_{i+k} along the listed vertices."""
    vs = p.vertices
    K = len(vs)
    for k in range(1, K + 1):
        if K % k:
            continue
        if all(apply_to_slope(p.monodromy, vs[i]) == vs[i + k] for i in range(K - k)):
            return k
    return K


def _on_one_triangle(s: Strip, a: int, b: int, c: int) -> bool:
    lab = {a, b, c}
    if len(lab) < 3:
        return True
    j = min(s.fan(x)[-1] for x in lab)
    return lab <= s.triangle_labels(j)


def _neighbours(s: Strip, v: int):
    out = set()
    for j in s.fan(v):
        out |= s.triangle_labels(j)
    out.discard(v)
    return sorted(out)


def _canonical_cycle(labels, n):
    k = len(labels)
    best = None
    for t in range(k):
        rot = labels[t:] + tuple(x + n for x in labels[:t])
        shift = (rot[0] // n) * n
        rot = tuple(x - shift for x in rot)
        if best is None or rot < best:
            best = rot
    return best


def is_minimal_cycle(s: Strip, labels) -> bool:
    """Path predicate on one period w_0 .. w_{k-1} of a lifted path (w_k = w_0 + n).

    Every step is a strip edge, the strip index of consecutive edges strictly
    increases (two edges with the same index lie on the same triangle), no
    two consecutive edges lie on one triangle, and the k vertices lie in k
    distinct orbits.
    """
    n, k = s.n, len(labels)
    if len({w % n for w in labels}) != k:
        return False
    w = list(labels) + [x + n for x in labels[:2]] + ([labels[0] + 2 * n] if k == 1 else [])
    try:
        idx = [s.edge_index(w[t], w[t + 1]) for t in range(k + 1)]
    except ValueError:
        return False
    for t in range(k):
        if idx[t + 1] <= idx[t] or _on_one_triangle(s, w[t], w[t + 1], w[t + 2]):
            return False
    return True


def enumerate_cycles(s: Strip):
    """All birth-label cycles satisfying `is_minimal_cycle`, canonically rotated."""
    n = s.n
    found = set()
    for start in range(n):
        goal = start + n
        stack = [[start, w] for w in _neighbours(s, start)]
        while stack:
            path = stack.pop()
            u, v = path[-2], path[-1]
            first = s.edge_index(path[0], path[1])
            last = s.edge_index(u, v)
            if last >= first + n:
                continue
            if v == goal:
                if is_minimal_cycle(s, path[:-1]):
                    found.add(_canonical_cycle(tuple(path[:-1]), n))
                continue
            for w in _neighbours(s, v):
                if s.edge_index(v, w) > last and not _on_one_triangle(s, u, v, w):
                    stack.append(path + [w])
    return sorted(found)


def minimal_paths(s: Strip, limit: int | None = None):
    """Minimal A-invariant edge paths in the strip, one per shift class."""
    cycles = enumerate_cycles(s)
    if limit is not None and len(cycles) > limit:
        raise TooManyPaths(f"{len(cycles)} minimal paths exceed the cap of {limit}")
    return [EdgePath(tuple(s.slope(b) for b in c), s.monodromy, c) for c in cycles]
