"""Shared fixtures: the five Del Pezzo cone polygons, polar figures, and
random generators used across the suite."""

from functools import cmp_to_key
from math import gcd
from random import Random

from toricdef.polyhedral import Polytope

# centered polygons (unique interior lattice point at the origin)
Q1 = Polytope.from_points([(-1, 1), (-1, 0), (1, -1), (1, 0)])
Q2 = Polytope.from_points([(-1, -1), (0, 1), (1, 0)])
Q3 = Polytope.from_points([(-1, -1), (-1, 0), (1, 1), (0, -1)])
Q4 = Polytope.from_points([(-1, 0), (-1, 1), (0, 1), (1, 0), (0, -1)])
Q5 = Polytope.from_points([(-1, -1), (0, -1), (1, 0), (1, 1), (0, 1), (-1, 0)])

CATALOG_POLYGONS = {"Q1": Q1, "Q2": Q2, "Q3": Q3, "Q4": Q4, "Q5": Q5}

# polar polygons as drawn (centered), used as up-to-equivalence references
POLAR_FIGURES = {
    "Q1": Polytope.from_points([(-1, -1), (1, -1), (1, 1), (-1, 1)]),
    "Q2": Polytope.from_points([(-1, 2), (-1, -1), (2, -1)]),
    "Q3": Polytope.from_points([(-1, -1), (1, -1), (1, 2), (-1, 0)]),
    "Q4": Polytope.from_points([(-1, 0), (-1, -1), (1, -1), (1, 1), (0, 1)]),
    "Q5": Q5,
}

THREE_POLYTOPES = {
    "simplex": Polytope.from_points([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]),
    "cube": Polytope.from_points(
        [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)]
    ),
    "triangular_prism": Polytope.from_points(
        [(0, 0, z) for z in (0, 1)]
        + [(1, 0, z) for z in (0, 1)]
        + [(0, 1, z) for z in (0, 1)]
    ),
    "octahedron": Polytope.from_points(
        [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    ),
    "square_pyramid": Polytope.from_points(
        [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1)]
    ),
}


def _angle_cmp(a, b):
    # counterclockwise from the positive x-axis; directions are distinct
    def half(v):
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    ha, hb = half(a), half(b)
    if ha != hb:
        return ha - hb
    cross = a[0] * b[1] - a[1] * b[0]
    return -1 if cross > 0 else 1


def polygon_from_edges(edges):
    """Close a zero-sum edge multiset into a convex polygon."""
    assert tuple(map(sum, zip(*edges))) == (0, 0)
    ordered = sorted(edges, key=cmp_to_key(_angle_cmp))
    pts = [(0, 0)]
    for e in ordered:
        pts.append((pts[-1][0] + e[0], pts[-1][1] + e[1]))
    return Polytope.from_points(pts[:-1])


def _primitive_pool(bound):
    pool = []
    for x in range(-bound, bound + 1):
        for y in range(-bound, bound + 1):
            if (x, y) != (0, 0) and gcd(x, y) == 1:
                pool.append((x, y))
    return pool


def random_lattice_polygon(rng: Random, nedges: int, bound: int = 2) -> Polytope:
    """A random convex lattice polygon with ``nedges`` primitive edges."""
    pool = _primitive_pool(bound)
    while True:
        chosen = rng.sample(pool, nedges - 1)
        last = (-sum(v[0] for v in chosen), -sum(v[1] for v in chosen))
        g = gcd(last[0], last[1])
        if last == (0, 0) or g != 1:
            continue
        if last in chosen:
            continue
        edges = chosen + [last]
        if len({e for e in edges}) != nedges:
            continue
        poly = polygon_from_edges(edges)
        if len(poly.vertices) == nedges:
            return poly


def random_degrees(rng: Random, n: int, dim: int, bound: int = 4):
    return [tuple(rng.randint(-bound, bound) for _ in range(dim)) for _ in range(n)]
