"""The five Del Pezzo cone polygons and reflexive-polygon enumeration.

The catalog stores expected invariants next to each polygon; tests and the
CLI recompute everything and compare.  Base-space descriptions are known
metadata, not computed by this package.

Reflexive polygons (unique interior lattice point) are enumerated by brute
force: depth-first search over lattice points of a box in angular order
around the origin, pruning as soon as a second interior point appears, then
grouping by canonical form with explicitly verified equivalence witnesses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cmp_to_key
from math import gcd
from typing import Optional

from .polyhedral import (
    Polytope,
    edge_vectors,
    interior_lattice_points,
    polar_polytope,
    polygon_canonical_form,
    unimodular_equivalent,
)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    polygon: Polytope
    expected_t1_dim: int
    expected_decompositions: int
    expected_summand_shapes: tuple      # sorted vertex-count tuples, one per decomposition
    expected_extremal_shapes: tuple     # shapes of the minimal-block decompositions
    expected_ks_dims: tuple             # Kodaira-Spencer span dim per shape
    base_space_note: str                # known result, NOT computed here
    total_space_note: str

    @property
    def polar(self) -> Polytope:
        return polar_polytope(self.polygon)


def catalog_entries() -> list[CatalogEntry]:
    return [
        CatalogEntry(
            name="Q1",
            polygon=Polytope.from_points([(-1, 1), (-1, 0), (1, -1), (1, 0)]),
            expected_t1_dim=1,
            expected_decompositions=1,
            expected_summand_shapes=((2, 2),),
            expected_extremal_shapes=((2, 2),),
            expected_ks_dims=(1,),
            base_space_note="smooth one-parameter base (a complex line); not computed here",
            total_space_note="isolated 4-dimensional cyclic quotient singularity",
        ),
        CatalogEntry(
            name="Q2",
            polygon=Polytope.from_points([(-1, -1), (0, 1), (1, 0)]),
            expected_t1_dim=0,
            expected_decompositions=0,
            expected_summand_shapes=(),
            expected_extremal_shapes=(),
            expected_ks_dims=(),
            base_space_note="rigid; the base space is a reduced point",
            total_space_note="no nontrivial toric total spaces",
        ),
        CatalogEntry(
            name="Q3",
            polygon=Polytope.from_points([(-1, -1), (-1, 0), (1, 1), (0, -1)]),
            expected_t1_dim=1,
            expected_decompositions=0,
            expected_summand_shapes=(),
            expected_extremal_shapes=(),
            expected_ks_dims=(),
            base_space_note="fat point Spec C[eps]/(eps^2); not computed here",
            total_space_note="no toric deformations despite nonzero tangent space",
        ),
        CatalogEntry(
            name="Q4",
            polygon=Polytope.from_points([(-1, 0), (-1, 1), (0, 1), (1, 0), (0, -1)]),
            expected_t1_dim=2,
            expected_decompositions=1,
            expected_summand_shapes=((2, 3),),
            expected_extremal_shapes=((2, 3),),
            expected_ks_dims=(1,),
            base_space_note="complex line with one embedded component; not computed here",
            total_space_note="cone over the projectivization of O + O(1) on the projective plane",
        ),
        CatalogEntry(
            name="Q5",
            polygon=Polytope.from_points(
                [(-1, -1), (0, -1), (1, 0), (1, 1), (0, 1), (-1, 0)]
            ),
            expected_t1_dim=3,
            expected_decompositions=5,
            expected_summand_shapes=((2, 2, 2), (2, 4), (2, 4), (2, 4), (3, 3)),
            expected_extremal_shapes=((2, 2, 2), (3, 3)),
            expected_ks_dims=(2, 1),
            base_space_note=(
                "transversal union of a complex plane and a complex line; not computed here"
            ),
            total_space_note=(
                "two triangles: cone over a product of three projective lines; "
                "three segments: cone over a product of two projective planes"
            ),
        ),
    ]


# ---------------------------------------------------------------------------
# reflexive polygon enumeration


def _half(v) -> int:
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_lt(a, b) -> bool:
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha < hb
    return a[0] * b[1] - a[1] * b[0] > 0


def _angle_cmp(a, b) -> int:
    if _angle_lt(a, b):
        return -1
    if _angle_lt(b, a):
        return 1
    # same direction: nearer point first (only one can be a vertex anyway)
    return (abs(a[0]) + abs(a[1])) - (abs(b[0]) + abs(b[1]))


def _strict_triangle_points(a, b, c) -> list:
    area2 = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    if area2 == 0:
        return []
    lo_x = min(a[0], b[0], c[0])
    hi_x = max(a[0], b[0], c[0])
    lo_y = min(a[1], b[1], c[1])
    hi_y = max(a[1], b[1], c[1])
    out = []
    for x in range(lo_x, hi_x + 1):
        for y in range(lo_y, hi_y + 1):
            p = (x, y)
            s1 = (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0])
            s2 = (c[0] - b[0]) * (y - b[1]) - (c[1] - b[1]) * (x - b[0])
            s3 = (a[0] - c[0]) * (y - c[1]) - (a[1] - c[1]) * (x - c[0])
            if area2 > 0:
                if s1 > 0 and s2 > 0 and s3 > 0:
                    out.append(p)
            else:
                if s1 < 0 and s2 < 0 and s3 < 0:
                    out.append(p)
    return out


def _strict_segment_points(a, b) -> list:
    dx, dy = b[0] - a[0], b[1] - a[1]
    g = gcd(abs(dx), abs(dy))
    return [
        (a[0] + k * dx // g, a[1] + k * dy // g) for k in range(1, g)
    ]


def _enumerate_unique_interior_polygons(bound: int) -> list[Polytope]:
    """All convex lattice polygons in [-bound, bound]^2 whose unique interior
    lattice point is the origin (every class has such a representative)."""
    pts = [
        (x, y)
        for x in range(-bound, bound + 1)
        for y in range(-bound, bound + 1)
        if (x, y) != (0, 0)
    ]
    pts.sort(key=cmp_to_key(_angle_cmp))
    npts = len(pts)
    found = []

    def cross(u, v):
        return u[0] * v[1] - u[1] * v[0]

    def try_close(chain) -> Optional[Polytope]:
        if len(chain) < 3:
            return None
        v1, vk = chain[0], chain[-1]
        e_close = (v1[0] - vk[0], v1[1] - vk[1])
        e_last = (vk[0] - chain[-2][0], vk[1] - chain[-2][1])
        e_first = (chain[1][0] - v1[0], chain[1][1] - v1[1])
        if cross(e_last, e_close) <= 0 or cross(e_close, e_first) <= 0:
            return None
        # origin strictly inside a ccw polygon
        for i in range(len(chain)):
            if cross(chain[i], chain[(i + 1) % len(chain)]) <= 0:
                return None
        poly = Polytope.from_points(chain)
        if len(poly.vertices) != len(chain):
            return None
        if interior_lattice_points(poly) != [(0, 0)]:
            return None
        return poly

    def dfs(chain, start, interior_ok):
        closed = try_close(chain)
        if closed is not None:
            found.append(closed)
        last = chain[-1]
        for j in range(start, npts):
            p = pts[j]
            if not _angle_lt(last, p):
                continue
            if len(chain) >= 2:
                e_prev = (last[0] - chain[-2][0], last[1] - chain[-2][1])
                e_new = (p[0] - last[0], p[1] - last[1])
                if cross(e_prev, e_new) <= 0:
                    continue
                # interior lattice points gained by the extension: the open
                # fan triangle, plus the old closing segment once the hull
                # already has positive area (for a 2-chain that segment is
                # the polygon's first edge and stays on the boundary)
                tri = _strict_triangle_points(chain[0], last, p)
                seg = _strict_segment_points(chain[0], last) if len(chain) >= 3 else []
                extra = [q for q in tri + seg if q != (0, 0)]
                if extra:
                    continue
                has_origin = interior_ok or (0, 0) in tri or (0, 0) in seg
            else:
                has_origin = interior_ok
            dfs(chain + [p], j + 1, has_origin)

    for i in range(npts):
        dfs([pts[i]], i + 1, False)
    return found


@dataclass(frozen=True)
class ReflexiveClassList:
    representatives: tuple  # one polygon per affine-unimodular class


def enumerate_reflexive_polygons(bound: int = 3) -> ReflexiveClassList:
    """Affine-unimodular classes of polygons with one interior lattice point.

    Classes are keyed by canonical form; polygons sharing a form are then
    split by explicit equivalence witnesses, so the class count does not
    rely on completeness of the form.
    """
    if bound < 3:
        raise ValueError("bound >= 3 required to see every class")
    groups: dict[tuple, list[Polytope]] = {}
    for poly in _enumerate_unique_interior_polygons(bound):
        groups.setdefault(polygon_canonical_form(poly), []).append(poly)
    reps: list[Polytope] = []
    for form in sorted(groups):
        members = groups[form]
        subreps: list[Polytope] = []
        for poly in members:
            if not any(unimodular_equivalent(poly, r) is not None for r in subreps):
                subreps.append(poly)
        reps.extend(subreps)
    reps.sort(key=lambda p: (len(p.vertices), polygon_canonical_form(p)))
    return ReflexiveClassList(representatives=tuple(reps))


def primitive_edge_classes(classes: ReflexiveClassList) -> ReflexiveClassList:
    """The classes all of whose edges are primitive."""
    from .exact_linalg import primitive

    keep = []
    for p in classes.representatives:
        if all(primitive(e) == e for e in edge_vectors(p)):
            keep.append(p)
    return ReflexiveClassList(representatives=tuple(keep))


def polar_class_permutation(classes: ReflexiveClassList) -> list[int]:
    """Index of each class's polar class; raises if polarity leaves the list."""
    out = []
    for p in classes.representatives:
        polar = polar_polytope(p)
        assert polar.is_lattice
        match = None
        for j, r in enumerate(classes.representatives):
            if polygon_canonical_form(polar) == polygon_canonical_form(r):
                if unimodular_equivalent(polar, r) is not None:
                    match = j
                    break
        if match is None:
            raise ValueError(f"polar of {p.vertices} missing from the class list")
        out.append(match)
    return out
