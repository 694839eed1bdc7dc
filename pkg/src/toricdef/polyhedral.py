"""Exact rational cones, lattice polytopes, duality, polarity, equivalence.

Cones are pointed and full-dimensional, described simultaneously by primitive
ray generators and primitive facet normals; the conversion in both directions
is the classical double-description correspondence, realized here by exact
enumeration of (d-1)-subsets (all instances are tiny).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor
from typing import Optional, Sequence

from .exact_linalg import (
    dot,
    kernel_basis,
    left_kernel_int,
    mat,
    primitive,
    rank,
    scale_to_primitive,
    snf,
    solve_exact,
    vec_neg,
    vec_sub,
)


class GeometryError(ValueError):
    pass


def _as_vec(v) -> tuple:
    return tuple(int(x) if isinstance(x, Fraction) and x.denominator == 1 else x for x in v)


def _subset_rays_to_normals(gens: Sequence[tuple], dim: int) -> tuple:
    """All facet normals of cone(gens): supporting, tight on a rank d-1 subset."""
    found = set()
    for subset in itertools.combinations(range(len(gens)), dim - 1):
        rows = [gens[i] for i in subset]
        if rows and rank(rows) != dim - 1:
            continue
        kb = kernel_basis(rows, ncols=dim)
        if len(kb) != 1:
            continue
        n = kb[0]
        vals = [dot(n, g) for g in gens]
        if all(v >= 0 for v in vals):
            found.add(n)
        elif all(v <= 0 for v in vals):
            found.add(vec_neg(n))
    return tuple(sorted(found))


def _subset_normals_to_rays(normals: Sequence[tuple], dim: int) -> tuple:
    """Extreme rays of {x : <n,x> >= 0 for all n}; the cone must be pointed."""
    found = set()
    for subset in itertools.combinations(range(len(normals)), dim - 1):
        rows = [normals[i] for i in subset]
        if rows and rank(rows) != dim - 1:
            continue
        kb = kernel_basis(rows, ncols=dim)
        if len(kb) != 1:
            continue
        r = kb[0]
        vals = [dot(n, r) for n in normals]
        if all(v >= 0 for v in vals):
            found.add(r)
        elif all(v <= 0 for v in vals):
            found.add(vec_neg(r))
    return tuple(sorted(found))


@dataclass(frozen=True)
class Cone:
    """Pointed, full-dimensional rational cone with both descriptions."""

    rank: int
    rays: tuple            # primitive extreme ray generators, sorted
    facet_normals: tuple   # primitive inner facet normals of the dual side, sorted

    @staticmethod
    def from_rays(gens: Sequence[Sequence[int]], rank_: Optional[int] = None) -> "Cone":
        gens = [primitive(tuple(int(x) for x in g)) for g in gens]
        if not gens:
            raise GeometryError("a cone needs at least one generator")
        d = rank_ if rank_ is not None else len(gens[0])
        gens = sorted(set(gens))
        r = rank(gens)
        if r != d:
            raise GeometryError(
                f"cone is not full-dimensional: generators span rank {r} < {d}"
            )
        normals = _subset_rays_to_normals(gens, d)
        if not normals or rank(normals) != d:
            raise GeometryError("cone is not pointed (contains a line)")
        rays = _subset_normals_to_rays(normals, d)
        return Cone(rank=d, rays=rays, facet_normals=normals)

    @staticmethod
    def from_inequalities(normals: Sequence[Sequence[int]], rank_: Optional[int] = None) -> "Cone":
        normals = [primitive(tuple(int(x) for x in n)) for n in normals]
        d = rank_ if rank_ is not None else len(normals[0])
        if rank(normals) != d:
            raise GeometryError("inequality system has a nonzero lineality space")
        rays = _subset_normals_to_rays(normals, d)
        if not rays or rank(rays) != d:
            raise GeometryError("inequality cone is not full-dimensional")
        return Cone.from_rays(rays, d)

    @property
    def nrays(self) -> int:
        return len(self.rays)

    def contains(self, x: Sequence) -> bool:
        return all(dot(n, x) >= 0 for n in self.facet_normals)


def dual_cone(c: Cone) -> Cone:
    """The dual cone; rays and facet normals swap roles."""
    return Cone(rank=c.rank, rays=c.facet_normals, facet_normals=c.rays)


@dataclass(frozen=True)
class Face:
    """A face of a cone, as the set of ray indices lying on it."""

    parent: Cone
    ray_indices: tuple
    dim: int

    @property
    def rays(self) -> tuple:
        return tuple(self.parent.rays[i] for i in self.ray_indices)


@lru_cache(maxsize=None)
def _face_index_sets(c: Cone) -> tuple:
    facet_sets = []
    for n in c.facet_normals:
        facet_sets.append(frozenset(i for i, r in enumerate(c.rays) if dot(n, r) == 0))
    sets = {frozenset(range(c.nrays))}
    frontier = set(facet_sets)
    while frontier:
        sets |= frontier
        new = set()
        for s in frontier:
            for f in facet_sets:
                t = s & f
                if t not in sets:
                    new.add(t)
        frontier = new
    sets.add(frozenset())
    return tuple(sorted(sets, key=lambda s: (len(s), sorted(s))))


def faces(c: Cone, d: int) -> list[Face]:
    """All d-dimensional faces, each as the exact set of rays it contains."""
    if d < 0 or d > c.rank:
        raise GeometryError(f"face dimension {d} out of range 0..{c.rank}")
    out = []
    for s in _face_index_sets(c):
        idx = tuple(sorted(s))
        fdim = rank([c.rays[i] for i in idx]) if idx else 0
        if fdim == d:
            out.append(Face(parent=c, ray_indices=idx, dim=d))
    return out


def all_faces(c: Cone) -> list[Face]:
    out = []
    for s in _face_index_sets(c):
        idx = tuple(sorted(s))
        fdim = rank([c.rays[i] for i in idx]) if idx else 0
        out.append(Face(parent=c, ray_indices=idx, dim=fdim))
    return out


@lru_cache(maxsize=None)
def smooth_in_codim2(c: Cone) -> bool:
    return offending_2face(c) is None


@lru_cache(maxsize=None)
def offending_2face(c: Cone) -> Optional[tuple]:
    """A 2-face not spanned by part of a lattice basis, or None."""
    for f in faces(c, 2):
        rows = f.rays
        if len(rows) != 2:
            return rows
        s, _, _ = snf(rows)
        if s[0][0] != 1 or s[1][1] != 1:
            return rows
    return None


# ---------------------------------------------------------------------------
# polytopes


def _ccw_hull_2d(points: Sequence[tuple]) -> list[tuple]:
    """Monotone-chain convex hull; strict turns, so output is vertices only."""
    pts = sorted(set(points))
    if len(pts) == 1:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


@dataclass(frozen=True)
class Polytope:
    """Convex polytope with exact (integer or rational) vertices.

    Vertices are canonically ordered: counterclockwise from the
    lexicographically smallest vertex for full-dimensional polygons,
    lexicographically otherwise.
    """

    rank: int
    vertices: tuple

    @staticmethod
    def from_points(points: Sequence[Sequence]) -> "Polytope":
        pts = [_as_vec(p) for p in points]
        if not pts:
            raise GeometryError("a polytope needs at least one point")
        d = len(pts[0])
        if any(len(p) != d for p in pts):
            raise GeometryError("points of mixed length")
        pts = sorted(set(pts))
        if len(pts) == 1:
            return Polytope(rank=d, vertices=(pts[0],))
        if d == 2 and rank([vec_sub(p, pts[0]) for p in pts]) == 2:
            verts = _ccw_hull_2d(pts)
            start = verts.index(min(verts))
            verts = verts[start:] + verts[:start]
            return Polytope(rank=2, vertices=tuple(verts))
        return Polytope(rank=d, vertices=tuple(sorted(_extreme_points(pts, d))))

    @property
    def dim(self) -> int:
        v0 = self.vertices[0]
        return rank([vec_sub(v, v0) for v in self.vertices[1:]]) if len(self.vertices) > 1 else 0

    @property
    def is_lattice(self) -> bool:
        return all(isinstance(x, int) for v in self.vertices for x in v)

    def translate(self, t: Sequence) -> "Polytope":
        return Polytope.from_points([tuple(x + s for x, s in zip(v, t)) for v in self.vertices])


def _extreme_points(pts: list[tuple], d: int) -> list[tuple]:
    """Extreme points among pts, via the cone over the homogenized point set."""
    chart, back = _affine_chart_points(pts)
    dd = len(chart[0]) if chart[0] else 0
    if dd == 0:
        return [pts[0]]
    if dd == 2:
        hull = _ccw_hull_2d(chart)
        return [back[p] for p in hull]
    gens = [p + (1,) for p in chart]
    # scale rational charts to integer generators; extremeness is invariant
    gens = [scale_to_primitive(g) for g in gens]
    normals = _subset_rays_to_normals(gens, dd + 1)
    if rank(normals) != dd + 1:
        raise GeometryError("degenerate hull input")
    ext = []
    for p, g in zip(chart, gens):
        tight = [n for n in normals if dot(n, g) == 0]
        if tight and rank(tight) == dd:
            ext.append(back[p])
    return ext


def _affine_chart_points(pts: list[tuple]) -> tuple[list[tuple], dict]:
    """Project points to coordinates of their affine span (rational chart)."""
    v0 = pts[0]
    diffs = [vec_sub(p, v0) for p in pts]
    basis = []
    for dvec in diffs:
        if rank(basis + [dvec]) > len(basis):
            basis.append(dvec)
    if not basis:
        chart = [() for _ in pts]
        return chart, {(): pts[0]}
    bt = mat(basis)
    chart = []
    back = {}
    for p, dvec in zip(pts, diffs):
        coords = solve_exact([[b[i] for b in bt] for i in range(len(v0))], dvec)
        c = _as_vec(coords)
        chart.append(c)
        back[c] = p
    return chart, back


def polytope_vertices_ccw(q: Polytope) -> tuple:
    if q.rank != 2 or q.dim != 2:
        raise GeometryError("counterclockwise order is defined for polygons only")
    return q.vertices


def edge_vectors(q: Polytope) -> tuple:
    """Edge vectors of a polygon in counterclockwise order (they sum to 0)."""
    vs = polytope_vertices_ccw(q)
    return tuple(vec_sub(vs[(i + 1) % len(vs)], vs[i]) for i in range(len(vs)))


@dataclass(frozen=True)
class FacetData:
    """Facet pairs (c^v, eta^v): the valid inequality is <x, -c^v> <= eta^v."""

    normals: tuple   # primitive inner normals c^v
    offsets: tuple   # eta^v

    @property
    def pairs(self) -> tuple:
        """The vectors (c^v, eta^v), primitive; they generate the dual of
        the cone over the polytope and evaluate >= 0 on every (vertex, 1)."""
        return tuple(scale_to_primitive(c + (e,)) for c, e in zip(self.normals, self.offsets))


def facet_data(q: Polytope) -> FacetData:
    """Primitive inner normals and offsets of a full-dimensional polytope.

    For polygons the facet order follows the counterclockwise edge order;
    otherwise facets are sorted lexicographically.
    """
    if q.dim != q.rank:
        raise GeometryError(
            f"facet data needs a full-dimensional polytope (dim {q.dim} in rank {q.rank})"
        )
    if q.rank == 2:
        vs = q.vertices
        normals, offsets = [], []
        for i in range(len(vs)):
            a, b = vs[i], vs[(i + 1) % len(vs)]
            e = vec_sub(b, a)
            c = scale_to_primitive((-e[1], e[0]))  # inner normal for ccw order
            eta = -dot(a, c)
            normals.append(c)
            offsets.append(eta)
    else:
        gens = [scale_to_primitive(tuple(v) + (1,)) for v in q.vertices]
        pairs = sorted(_subset_rays_to_normals(gens, q.rank + 1))
        normals, offsets = [], []
        for p in pairs:
            c, eta = p[:-1], p[-1]
            cp = scale_to_primitive(c)
            i = next(k for k, x in enumerate(cp) if x != 0)
            f = Fraction(c[i], cp[i])
            normals.append(cp)
            eta = Fraction(eta) / f
            offsets.append(int(eta) if eta.denominator == 1 else eta)
    fd = FacetData(normals=tuple(normals), offsets=tuple(offsets))
    for pair in fd.pairs:
        for v in q.vertices:
            if dot(pair, tuple(v) + (1,)) < 0:
                raise GeometryError("facet orientation drift")  # pragma: no cover
    return fd


def contains_point(q: Polytope, x: Sequence, strict: bool = False) -> bool:
    if q.dim != q.rank:
        raise GeometryError("containment test needs a full-dimensional polytope")
    fd = facet_data(q)
    for c, eta in zip(fd.normals, fd.offsets):
        val = dot(x, c) + eta  # >= 0 inside
        if val < 0 or (strict and val == 0):
            return False
    return True


def _bounding_box(q: Polytope) -> list[tuple[int, int]]:
    box = []
    for i in range(q.rank):
        lo = min(v[i] for v in q.vertices)
        hi = max(v[i] for v in q.vertices)
        box.append((ceil(lo) if isinstance(lo, Fraction) else lo,
                    floor(hi) if isinstance(hi, Fraction) else hi))
    return box


def lattice_points(q: Polytope) -> list[tuple]:
    if q.dim != q.rank:
        raise GeometryError("lattice point scan needs a full-dimensional polytope")
    fd = facet_data(q)
    out = []
    ranges = [range(lo, hi + 1) for lo, hi in _bounding_box(q)]
    for x in itertools.product(*ranges):
        if all(dot(x, c) + eta >= 0 for c, eta in zip(fd.normals, fd.offsets)):
            out.append(x)
    return sorted(out)


def interior_lattice_points(q: Polytope) -> list[tuple]:
    """Lattice points satisfying every facet inequality strictly."""
    if q.dim != q.rank:
        return []
    fd = facet_data(q)
    out = []
    ranges = [range(lo, hi + 1) for lo, hi in _bounding_box(q)]
    for x in itertools.product(*ranges):
        if all(dot(x, c) + eta > 0 for c, eta in zip(fd.normals, fd.offsets)):
            out.append(x)
    return sorted(out)


def cone_over_polytope(q: Polytope) -> Cone:
    """The cone over Q embedded at height one."""
    if not q.is_lattice:
        raise GeometryError("cone over a polytope needs integer vertices")
    return Cone.from_rays([tuple(v) + (1,) for v in q.vertices], q.rank + 1)


class RationalPolytopeError(GeometryError):
    def __init__(self, polytope: Polytope):
        self.polytope = polytope
        super().__init__("polar polytope has non-integer vertices")


def polar_polytope(q: Polytope, require_lattice: bool = False) -> Polytope:
    """The polar {r : <Q, r> <= 1}; the origin must be interior."""
    if q.dim != q.rank:
        raise GeometryError("polar needs a full-dimensional polytope")
    fd = facet_data(q)
    if not all(eta > 0 for eta in fd.offsets):
        raise GeometryError("polar needs the origin in the interior")
    # facet <x,c> >= -eta with eta > 0  <=>  <x, c/(-eta)> <= 1
    verts = [tuple(Fraction(ci, eta) for ci in c) for c, eta in zip(fd.normals, fd.offsets)]
    polar = Polytope.from_points(verts)
    if require_lattice and not polar.is_lattice:
        raise RationalPolytopeError(polar)
    return polar


def is_reflexive(q: Polytope) -> bool:
    """One interior lattice point and, after centering, a lattice polar."""
    if q.dim != q.rank or not q.is_lattice:
        return False
    interior = interior_lattice_points(q)
    if len(interior) != 1:
        return False
    centered = q.translate(vec_neg(interior[0]))
    return polar_polytope(centered).is_lattice


def minkowski_sum(p: Polytope, q: Polytope) -> Polytope:
    return Polytope.from_points(
        [tuple(a + b for a, b in zip(u, v)) for u in p.vertices for v in q.vertices]
    )


def polytopes_translate_equal(p: Polytope, q: Polytope) -> bool:
    if len(p.vertices) != len(q.vertices):
        return False
    t = vec_sub(q.vertices[0], p.vertices[0])
    return all(vec_sub(b, a) == t for a, b in zip(p.vertices, q.vertices))


# ---------------------------------------------------------------------------
# unimodular equivalence of polygons


def _polygon_edge_sequence(q: Polytope) -> list[tuple]:
    evs = edge_vectors(q)
    seq = []
    for i, e in enumerate(evs):
        pe = primitive(e)
        length = e[0] // pe[0] if pe[0] != 0 else e[1] // pe[1]
        nxt = primitive(evs[(i + 1) % len(evs)])
        d = pe[0] * nxt[1] - pe[1] * nxt[0]
        seq.append((length, d))
    return seq


def polygon_canonical_form(q: Polytope) -> tuple:
    """Cyclic (edge length, turn determinant) sequence, minimized over
    rotations and reflection; an affine-unimodular invariant of polygons."""
    if q.rank != 2 or q.dim != 2:
        raise GeometryError("canonical form is defined for polygons")
    reflected = Polytope.from_points([(v[0], -v[1]) for v in q.vertices])
    best = None
    for poly in (q, reflected):
        seq = _polygon_edge_sequence(poly)
        n = len(seq)
        for r in range(n):
            cand = tuple(seq[(r + i) % n] for i in range(n))
            if best is None or cand < best:
                best = cand
    return best


def unimodular_equivalent(p: Polytope, q: Polytope):
    """An explicit affine-unimodular map (matrix, translation) with
    M (verts p) + t = verts q, or None.

    Complete for polygons: any equivalence aligns the two edge cycles, and
    all 2n alignments are tried with exact verification.
    """
    for poly in (p, q):
        if poly.rank != 2 or poly.dim != 2:
            raise GeometryError("equivalence test is implemented for polygons")
    if len(p.vertices) != len(q.vertices):
        return None
    if polygon_canonical_form(p) != polygon_canonical_form(q):
        return None
    pv = list(p.vertices)
    n = len(pv)
    for reflect in (False, True):
        qv = list(q.vertices)
        if reflect:
            qv = [qv[0]] + list(reversed(qv[1:]))
        pe = [vec_sub(pv[(i + 1) % n], pv[i]) for i in range(n)]
        qe = [vec_sub(qv[(i + 1) % n], qv[i]) for i in range(n)]
        for shift in range(n):
            # solve M pe[i] = qe[i+shift] using two independent edges
            idx = None
            for i, j in itertools.combinations(range(n), 2):
                if pe[i][0] * pe[j][1] - pe[i][1] * pe[j][0] != 0:
                    idx = (i, j)
                    break
            if idx is None:
                break
            i, j = idx
            a = (pe[i], pe[j])
            row0 = solve_exact(a, (qe[(i + shift) % n][0], qe[(j + shift) % n][0]))
            row1 = solve_exact(a, (qe[(i + shift) % n][1], qe[(j + shift) % n][1]))
            if row0 is None or row1 is None:
                continue
            m = (row0, row1)
            if any(isinstance(x, Fraction) for row in m for x in row):
                continue
            if m[0][0] * m[1][1] - m[0][1] * m[1][0] not in (1, -1):
                continue
            mp0 = (dot(m[0], pv[0]), dot(m[1], pv[0]))
            t = vec_sub(qv[shift], mp0)
            ok = True
            for k in range(n):
                img = (dot(m[0], pv[k]) + t[0], dot(m[1], pv[k]) + t[1])
                if img != tuple(qv[(k + shift) % n]):
                    ok = False
                    break
            if ok:
                return m, t
    return None


# ---------------------------------------------------------------------------
# faces of polytopes (needed for edge/2-face data of 3-polytopes)


def polytope_face_vertex_sets(q: Polytope) -> list[tuple[tuple, int]]:
    """All proper nonempty faces as (vertex index set, dim), via facets."""
    if q.dim != q.rank:
        raise GeometryError("face enumeration needs a full-dimensional polytope")
    fd = facet_data(q)
    facet_sets = []
    for c, eta in zip(fd.normals, fd.offsets):
        s = frozenset(i for i, v in enumerate(q.vertices) if dot(v, c) + eta == 0)
        facet_sets.append(s)
    sets = set(facet_sets)
    frontier = set(facet_sets)
    while frontier:
        new = set()
        for s in frontier:
            for f in facet_sets:
                t = s & f
                if t and t not in sets:
                    new.add(t)
        sets |= new
        frontier = new
    out = []
    for s in sets:
        idx = tuple(sorted(s))
        pts = [q.vertices[i] for i in idx]
        fdim = rank([vec_sub(p, pts[0]) for p in pts[1:]]) if len(pts) > 1 else 0
        out.append((idx, fdim))
    return sorted(out)


def polytope_edges(q: Polytope) -> list[tuple[int, int]]:
    return [idx for idx, d in polytope_face_vertex_sets(q) if d == 1]


def polytope_2faces(q: Polytope) -> list[tuple]:
    if q.rank == 2:
        return [tuple(range(len(q.vertices)))]
    return [idx for idx, d in polytope_face_vertex_sets(q) if d == 2]


def saturated_span_basis(vectors: Sequence[tuple]) -> tuple:
    """Lattice basis of span(vectors) ∩ Z^n."""
    if not vectors:
        return ()
    n = len(vectors[0])
    perp = kernel_basis(vectors, ncols=n)  # basis of the orthogonal complement
    if not perp:
        from .exact_linalg import identity
        return identity(n)
    cols = mat([[row[j] for row in perp] for j in range(n)])
    return left_kernel_int(cols, nrows=n)
