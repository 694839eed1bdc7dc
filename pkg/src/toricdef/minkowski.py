"""Minkowski summand spaces, decompositions of polygons, and divisor data.

The summand space of a polytope is computed two independent ways that the
tests cross-check:

* as the dual of L(F')/sum L(F_i) built from the fundamental generator
  pairs of the dual cone, and
* as the edge-parameter cone cut out by the 2-face cycle conditions
  (its dimension exceeds the summand space dimension by one, the scaling).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from typing import Optional, Sequence

from .exact_linalg import (
    dot,
    extend_to_basis,
    kernel_basis,
    rank,
    scale_to_primitive,
    subspace_sum_dim,
    vec_add,
    vec_neg,
    vec_scale,
    vec_sub,
)
from .polyhedral import (
    FacetData,
    GeometryError,
    Polytope,
    _subset_normals_to_rays,
    edge_vectors,
    facet_data,
    minkowski_sum,
    polytope_2faces,
    polytope_edges,
    polytopes_translate_equal,
)


class DecompositionError(GeometryError):
    pass


# ---------------------------------------------------------------------------
# the summand space T~1 via linear dependences of the fundamental pairs


@dataclass(frozen=True)
class SummandSpace:
    """L(F')/sum L(F_i) data of a polytope (dual of the summand space)."""

    polytope: Polytope
    pairs: tuple            # primitive (c^v, eta^v) generators, facet order
    vertex_subsets: tuple   # per vertex: indices of pairs tight at it
    dependence_basis: tuple  # basis rows of L(F')
    subspace_sum_basis: tuple  # rows spanning sum of the L(F_i)
    quotient_basis: tuple   # rows completing the sum to L(F')
    dim: int


def _chart_polytope(q: Polytope) -> Polytope:
    """Project a polytope into exact coordinates of its affine span."""
    from .polyhedral import _affine_chart_points

    chart, _ = _affine_chart_points(list(q.vertices))
    return Polytope.from_points(chart)


def _dependence_space(pairs: Sequence[tuple]) -> tuple:
    """Basis of the space of linear dependences among the given vectors."""
    if not pairs:
        return ()
    m = tuple(tuple(p[i] for p in pairs) for i in range(len(pairs[0])))
    return kernel_basis(m, ncols=len(pairs))


def _embedded_dependences(pairs: Sequence[tuple], subset: Sequence[int], total: int) -> list:
    sub = [pairs[k] for k in subset]
    rows = []
    for row in _dependence_space(sub):
        full = [0] * total
        for pos, k in enumerate(subset):
            full[k] = row[pos]
        rows.append(tuple(full))
    return rows


@lru_cache(maxsize=None)
def tilde_t1(q: Polytope) -> SummandSpace:
    """The summand space data of a polytope (any dimension, rational allowed).

    Lower-dimensional polytopes are charted into their affine span first;
    segments and points have a zero summand space.
    """
    if len(q.vertices) == 1:
        return SummandSpace(q, (), (), (), (), (), 0)
    work = q if q.dim == q.rank else _chart_polytope(q)
    if work.dim <= 1:
        return SummandSpace(q, (), (), (), (), (), 0)
    fd: FacetData = facet_data(work)
    pairs = fd.pairs
    subsets = []
    for v in work.vertices:
        vh = tuple(v) + (1,)
        subsets.append(tuple(k for k, p in enumerate(pairs) if dot(p, vh) == 0))
    dep = _dependence_space(pairs)
    summed = []
    for subset in subsets:
        summed.extend(_embedded_dependences(pairs, subset, len(pairs)))
    sum_dim = rank(summed) if summed else 0
    quotient = extend_to_basis(summed, dep)
    return SummandSpace(
        polytope=q,
        pairs=pairs,
        vertex_subsets=tuple(subsets),
        dependence_basis=dep,
        subspace_sum_basis=tuple(summed),
        quotient_basis=tuple(quotient),
        dim=len(dep) - sum_dim,
    )


# ---------------------------------------------------------------------------
# the cone of Minkowski summands in edge parameters


@dataclass(frozen=True)
class SummandCone:
    """Edge-scaling parameters of summands of multiples of the polytope.

    The cone lives in R^{#edges}: t >= 0 subject to the cycle condition
    sum t_e (edge vector e) = 0 around every 2-face.  The all-ones vector
    is the polytope itself.
    """

    polytope: Polytope
    edges: tuple              # vertex index pairs, walk orientation
    vectors: tuple            # full edge vectors matching `edges`
    constraints: tuple        # cycle condition rows over the edge parameters
    kernel: tuple             # basis of the solution space of the constraints
    extremal_rays: tuple      # primitive generators of the parameter cone
    dim: int

    @property
    def ambient_edges(self) -> int:
        return len(self.edges)

    def contains_parameters(self, t: Sequence) -> bool:
        if len(t) != len(self.edges):
            return False
        if any(x < 0 for x in t):
            return False
        return all(dot(row, t) == 0 for row in self.constraints)


def _cyclic_face_order(q: Polytope, face_idx: Sequence[int]) -> list[int]:
    """Vertex indices of a 2-face in cyclic order around its centroid."""
    pts = [q.vertices[i] for i in face_idx]
    base = pts[0]
    diffs = [vec_sub(p, base) for p in pts]
    basis = []
    for dvec in diffs:
        if rank(basis + [dvec]) > len(basis):
            basis.append(dvec)
    assert len(basis) == 2
    from .exact_linalg import solve_exact

    a = tuple(tuple(b[i] for b in basis) for i in range(len(base)))
    flat = []
    for i, dvec in zip(face_idx, diffs):
        # coordinates in the plane of the face
        coords = solve_exact(a, dvec)
        flat.append((i, coords))
    cx = sum((c[0] for _, c in flat), Fraction(0)) / len(flat)
    cy = sum((c[1] for _, c in flat), Fraction(0)) / len(flat)

    def angle_cmp(p1, p2):
        x1, y1 = p1[1][0] - cx, p1[1][1] - cy
        x2, y2 = p2[1][0] - cx, p2[1][1] - cy
        h1 = 0 if (y1 > 0 or (y1 == 0 and x1 > 0)) else 1
        h2 = 0 if (y2 > 0 or (y2 == 0 and x2 > 0)) else 1
        if h1 != h2:
            return h1 - h2
        cross = x1 * y2 - y1 * x2
        return -1 if cross > 0 else 1

    return [i for i, _ in sorted(flat, key=cmp_to_key(angle_cmp))]


@lru_cache(maxsize=None)
def summand_cone(q: Polytope) -> SummandCone:
    """Parameter cone of Minkowski summands of scalar multiples of q."""
    if q.dim != q.rank:
        raise GeometryError("summand cone needs a full-dimensional polytope")
    if q.dim < 2:
        raise GeometryError("summand cone needs dim >= 2")
    if q.rank == 2:
        n = len(q.vertices)
        edges = tuple((i, (i + 1) % n) for i in range(n))
        vectors = edge_vectors(q)
        walks = [list(range(n)) + [0]]
        face_edges = [[(i, 1) for i in range(n)]]
    else:
        edge_pairs = polytope_edges(q)
        edges = tuple(edge_pairs)
        vectors = tuple(vec_sub(q.vertices[b], q.vertices[a]) for a, b in edges)
        edge_id = {e: k for k, e in enumerate(edges)}
        face_edges = []
        for face in polytope_2faces(q):
            order = _cyclic_face_order(q, face)
            signed = []
            for j in range(len(order)):
                a, b = order[j], order[(j + 1) % len(order)]
                if a < b:
                    signed.append((edge_id[(a, b)], 1))
                else:
                    signed.append((edge_id[(b, a)], -1))
            face_edges.append(signed)
    rows = []
    for signed in face_edges:
        for coord in range(q.rank):
            row = [0] * len(edges)
            for eid, sign in signed:
                row[eid] += sign * vectors[eid][coord]
            rows.append(tuple(row))
    kern = kernel_basis(rows, ncols=len(edges))
    ones = (1,) * len(edges)
    assert all(dot(row, ones) == 0 for row in rows)

    # extreme rays of {x : (t_e = x . kern) >= 0} mapped back to edge space
    k = len(kern)
    ineqs = [tuple(kern[j][e] for j in range(k)) for e in range(len(edges))]
    rays_x = _subset_normals_to_rays(tuple(ineqs), k) if k >= 1 else ()
    extremal = []
    for x in rays_x:
        t = tuple(sum(x[j] * kern[j][e] for j in range(k)) for e in range(len(edges)))
        extremal.append(scale_to_primitive(t))
    return SummandCone(
        polytope=q,
        edges=edges,
        vectors=vectors,
        constraints=tuple(rows),
        kernel=kern,
        extremal_rays=tuple(sorted(extremal)),
        dim=k,
    )


def summand_from_parameters(sc: SummandCone, t: Sequence) -> Polytope:
    """Rebuild the summand whose edges are t_e times the edges of q."""
    if not sc.contains_parameters(t):
        raise GeometryError("parameters outside the summand cone")
    n = len(sc.polytope.vertices)
    adj: dict[int, list] = {i: [] for i in range(n)}
    for (a, b), w, te in zip(sc.edges, sc.vectors, t):
        adj[a].append((b, vec_scale(te, w)))
        adj[b].append((a, vec_scale(-te, w)))
    pos: dict[int, tuple] = {0: (0,) * sc.polytope.rank}
    stack = [0]
    while stack:
        a = stack.pop()
        for b, step in adj[a]:
            p = vec_add(pos[a], step)
            if b in pos:
                assert pos[b] == p, "cycle conditions violated"
            else:
                pos[b] = p
                stack.append(b)
    poly = Polytope.from_points(list(pos.values()))
    return poly.translate(vec_neg(poly.vertices[0]))


def parameters_of_summand(sc: SummandCone, s: Polytope) -> tuple:
    """Recover edge parameters of a summand via the vertex correspondence."""
    carrier = _vertex_correspondence(sc.polytope, s)
    t = []
    for (a, b), w in zip(sc.edges, sc.vectors):
        diff = vec_sub(carrier[b], carrier[a])
        i = next(k for k, x in enumerate(w) if x != 0)
        te = Fraction(diff[i], w[i])
        if vec_scale(te, w) != tuple(diff):
            raise GeometryError("polytope is not a summand of a multiple")
        t.append(int(te) if te.denominator == 1 else te)
    return tuple(t)


def _vertex_correspondence(q: Polytope, s: Polytope) -> dict[int, tuple]:
    """For each vertex of q, the unique vertex of s its normal cone selects."""
    fd = facet_data(q)
    out = {}
    for i, v in enumerate(q.vertices):
        tight = [
            c for c, eta in zip(fd.normals, fd.offsets) if dot(v, c) + eta == 0
        ]
        xi = tuple(sum(col) for col in zip(*tight))
        vals = [dot(x, xi) for x in s.vertices]
        m = min(vals)
        argmin = [x for x, val in zip(s.vertices, vals) if val == m]
        if len(argmin) != 1:
            raise GeometryError(
                "normal fan refinement fails at vertex "
                f"{v}: functional {xi} has a non-unique minimizer"
            )
        out[i] = argmin[0]
    return out


@dataclass(frozen=True)
class SummandClass:
    """Class of a summand: support numbers and coordinates on the quotient."""

    support_values: tuple   # eta'^v per facet of q
    coordinates: tuple      # evaluation against the quotient basis rows


def rho_class(sc: SummandCone, t: Sequence) -> SummandClass:
    summand = summand_from_parameters(sc, t)
    return summand_class(sc.polytope, summand)


def summand_class(q: Polytope, summand: Polytope) -> SummandClass:
    """The functional q-dependences -> K induced by a summand's supports."""
    space = tilde_t1(q)
    fd = facet_data(q)
    etas = []
    for c in fd.normals:
        etas.append(max(-dot(x, c) for x in summand.vertices))
    coords = tuple(
        sum(w_v * eta for w_v, eta in zip(w, etas)) for w in space.quotient_basis
    )
    return SummandClass(support_values=tuple(etas), coordinates=coords)


def class_span_dim(classes: Sequence[SummandClass]) -> int:
    rows = [c.coordinates for c in classes if any(x != 0 for x in c.coordinates)]
    return rank(rows) if rows else 0


# ---------------------------------------------------------------------------
# lattice Minkowski decompositions of polygons


@dataclass(frozen=True)
class Decomposition:
    """Partition of a polygon's edges into zero-sum blocks, realized as
    lattice polygons summing to the polygon up to translation."""

    polygon: Polytope
    blocks: tuple    # tuple of index tuples into the ccw edge list
    summands: tuple  # one lattice polygon per block, anchored at the origin

    @property
    def m(self) -> int:
        return len(self.blocks) - 1

    @property
    def is_extremal(self) -> bool:
        """All blocks are minimal zero-sum subsets (no block splits)."""
        evs = edge_vectors(self.polygon)
        for block in self.blocks:
            for size in range(1, len(block)):
                for sub in itertools.combinations(block, size):
                    if all(sum(evs[i][c] for i in sub) == 0 for c in range(2)):
                        return False
        return True


def _angle_cmp_vec(a, b):
    ha = 0 if (a[1] > 0 or (a[1] == 0 and a[0] > 0)) else 1
    hb = 0 if (b[1] > 0 or (b[1] == 0 and b[0] > 0)) else 1
    if ha != hb:
        return ha - hb
    cross = a[0] * b[1] - a[1] * b[0]
    return -1 if cross > 0 else 1


def polygon_from_edge_vectors(vectors: Sequence[tuple]) -> Polytope:
    """Close a zero-sum set of edge vectors into a convex polygon at 0."""
    ordered = sorted(vectors, key=cmp_to_key(_angle_cmp_vec))
    pts = [(0, 0)]
    for e in ordered[:-1]:
        pts.append(vec_add(pts[-1], e))
    poly = Polytope.from_points(pts)
    return poly.translate(vec_neg(poly.vertices[0]))


def _zero_sum_partitions(vectors: Sequence[tuple]):
    """All partitions of the index set into zero-sum blocks, each block led
    by its smallest element (so every unordered partition appears once)."""
    n = len(vectors)

    def rec(remaining: tuple):
        if not remaining:
            yield []
            return
        lead = remaining[0]
        rest = remaining[1:]
        for size in range(0, len(rest) + 1):
            for comb in itertools.combinations(rest, size):
                block = (lead,) + comb
                s = [0, 0]
                for i in block:
                    s[0] += vectors[i][0]
                    s[1] += vectors[i][1]
                if s != [0, 0]:
                    continue
                leftover = tuple(i for i in rest if i not in comb)
                for tail in rec(leftover):
                    yield [block] + tail

    yield from rec(tuple(range(n)))


def lattice_decompositions(q: Polytope) -> list[Decomposition]:
    """All nontrivial decompositions of a primitive-edge lattice polygon into
    lattice polygons, as zero-sum partitions of the edge set."""
    if q.rank != 2 or q.dim != 2 or not q.is_lattice:
        raise DecompositionError("decompositions are defined for lattice polygons")
    evs = edge_vectors(q)
    from .exact_linalg import primitive

    for i, e in enumerate(evs):
        if primitive(e) != e:
            raise DecompositionError(
                f"edge {i} with vector {e} is not primitive; "
                "decomposition enumeration covers the isolated case only"
            )
    out = []
    for blocks in _zero_sum_partitions(evs):
        if len(blocks) < 2:
            continue
        summands = tuple(
            polygon_from_edge_vectors([evs[i] for i in block]) for block in blocks
        )
        out.append(Decomposition(polygon=q, blocks=tuple(blocks), summands=summands))
    out.sort(key=lambda d: d.blocks)
    return out


def kodaira_spencer_span(q: Polytope, dec: Decomposition) -> tuple[int, tuple]:
    """Dimension and coordinate rows of span(rho(R_0), ..., rho(R_m))."""
    classes = [summand_class(q, s) for s in dec.summands]
    rows = tuple(c.coordinates for c in classes)
    return class_span_dim(classes), rows


# ---------------------------------------------------------------------------
# divisors on the polar variety (support functions on the inner normal fan)


@dataclass(frozen=True)
class DivisorData:
    """Support values on the 1-skeleton of the inner normal fan of a polygon."""

    fan_rays: tuple       # primitive inner normals, ccw edge order
    max_cones: tuple      # per vertex: the pair of adjacent ray indices
    h: tuple              # support values on the fan rays
    a_alpha: tuple        # per maximal cone: the witness point (may be rational)
    is_cartier: bool
    is_nef: bool
    is_ample: bool


def divisor_from_support_values(q: Polytope, h: Sequence[int]) -> DivisorData:
    """Classify an arbitrary integer support function on the fan of q."""
    if q.rank != 2 or q.dim != 2:
        raise GeometryError("divisor data is implemented for polygons")
    fd = facet_data(q)
    n = len(fd.normals)
    if len(h) != n:
        raise GeometryError("one support value per fan ray required")
    from .exact_linalg import solve_exact

    max_cones = tuple(((i - 1) % n, i) for i in range(n))  # rays at vertex i
    witnesses = []
    cartier = True
    for (ra, rb) in max_cones:
        a = (fd.normals[ra], fd.normals[rb])
        x = solve_exact(a, (h[ra], h[rb]))
        witnesses.append(x)
        if x is None or any(isinstance(v, Fraction) for v in x):
            cartier = False
    nef = cartier and all(
        dot(x, c) >= hv
        for x in witnesses
        for c, hv in zip(fd.normals, h)
    )
    ample = nef and len(set(witnesses)) == len(witnesses)
    return DivisorData(
        fan_rays=fd.normals,
        max_cones=max_cones,
        h=tuple(h),
        a_alpha=tuple(witnesses),
        is_cartier=cartier,
        is_nef=nef,
        is_ample=ample,
    )


def divisor_from_summand(q: Polytope, summand: Polytope) -> DivisorData:
    """Support function of a summand, via its vertices on each maximal cone."""
    _vertex_correspondence(q, summand)  # refinement precondition
    fd = facet_data(q)
    h = tuple(min(dot(x, c) for x in summand.vertices) for c in fd.normals)
    return divisor_from_support_values(q, h)
