"""Hilbert bases of dual cones and the degree-filtered generator subsets.

The Hilbert basis of a pointed cone is computed as the set of minimal
nonzero lattice points under componentwise dominance of the pairing values
against the dual generators: x is reducible iff some nonzero semigroup
element y has <a, y> <= <a, x> for every dual generator a, and every
irreducible element lies in the half-open zonotope of a simplicial piece of
the cone, which bounds the search region.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor
from typing import Sequence

from .exact_linalg import dot, rank
from .polyhedral import Cone, FacetData, GeometryError, Polytope, facet_data


@dataclass(frozen=True)
class SemigroupBasis:
    """Minimal generating set E of the semigroup (cone ∩ lattice)."""

    cone: Cone
    elements: tuple  # sorted lattice vectors


@dataclass(frozen=True)
class DegreeFiltration:
    """Index sets E_i = {s in E : 0 <= <a^i, s> < <a^i, R>} and their union."""

    degree: tuple
    subsets: tuple   # per ray: tuple of indices into the basis elements
    union: tuple     # sorted union of the subsets


@dataclass(frozen=True)
class FundamentalFiltration:
    """Fundamental generator pairs of the dual cone, filtered per vertex."""

    pairs: tuple     # primitive (c^v, eta^v) vectors, facet order of the polytope
    subsets: tuple   # per vertex: indices of the pairs tight at that vertex
    union: tuple


def _lattice_points_in_box(box) -> itertools.product:
    return itertools.product(*[range(lo, hi + 1) for lo, hi in box])


@lru_cache(maxsize=None)
def hilbert_basis(c: Cone) -> SemigroupBasis:
    """The unique minimal generating set of c ∩ Z^rank (c pointed)."""
    d = c.rank
    rays = c.rays
    duals = c.facet_normals  # generators of the dual cone: > 0 on c minus 0
    grading = tuple(sum(col) for col in zip(*duals))
    assert all(dot(grading, r) > 0 for r in rays)

    # degree bound: a fan triangulation of the cone; every irreducible element
    # lies in the half-open generator zonotope of one simplicial piece
    bound = 0
    base = rays[0]
    for subset in itertools.combinations(range(1, len(rays)), d - 1):
        rows = (base,) + tuple(rays[i] for i in subset)
        if rank(rows) == d:
            bound = max(bound, sum(dot(grading, r) for r in rows))
    if bound == 0:
        bound = sum(dot(grading, r) for r in rays)

    # bounding box of {x in cone : <grading, x> <= bound}
    lo = [0] * d
    hi = [0] * d
    for r in rays:
        t = Fraction(bound, dot(grading, r))
        for i in range(d):
            v = t * r[i]
            lo[i] = min(lo[i], ceil(v))
            hi[i] = max(hi[i], floor(v))

    elements = []
    for x in _lattice_points_in_box(list(zip(lo, hi))):
        if x == (0,) * d:
            continue
        if dot(grading, x) > bound:
            continue
        if all(dot(n, x) >= 0 for n in duals):
            elements.append(x)
    elements.sort(key=lambda x: (dot(grading, x), x))

    basis: list[tuple] = []
    basis_pairings: list[tuple] = []
    for x in elements:
        px = tuple(dot(n, x) for n in duals)
        dominated = False
        for py in basis_pairings:
            if all(a <= b for a, b in zip(py, px)):
                dominated = True
                break
        if not dominated:
            basis.append(x)
            basis_pairings.append(px)
    return SemigroupBasis(cone=c, elements=tuple(sorted(basis)))


def semigroup_contains(c: Cone, x: Sequence[int]) -> bool:
    return all(isinstance(v, int) for v in x) and c.contains(x)


def degree_filtration(
    basis: SemigroupBasis, rays: Sequence[tuple], degree: Sequence[int]
) -> DegreeFiltration:
    """E_i per ray a^i at a fixed degree, by exact pairing evaluation."""
    subsets = []
    for a in rays:
        cutoff = dot(a, degree)
        idx = tuple(
            k
            for k, s in enumerate(basis.elements)
            if 0 <= dot(a, s) < cutoff
        )
        subsets.append(idx)
    union = tuple(sorted(set().union(*map(set, subsets)))) if subsets else ()
    return DegreeFiltration(degree=tuple(degree), subsets=tuple(subsets), union=union)


def fundamental_filtration(q: Polytope) -> FundamentalFiltration:
    """Fundamental generators of the dual of the cone over q, per vertex.

    F_i collects the pairs tight at vertex a^i, i.e. the generators of the
    face of the dual cone orthogonal to the ray through (a^i, 1).
    """
    if not q.is_lattice:
        raise GeometryError("fundamental filtration needs a lattice polytope")
    fd: FacetData = facet_data(q)
    pairs = fd.pairs
    subsets = []
    for v in q.vertices:
        vh = tuple(v) + (1,)
        subsets.append(tuple(k for k, p in enumerate(pairs) if dot(p, vh) == 0))
    union = tuple(sorted(set().union(*map(set, subsets)))) if subsets else ()
    return FundamentalFiltration(pairs=pairs, subsets=tuple(subsets), union=union)
