import itertools

import pytest

from toricdef.exact_linalg import dot
from toricdef.polyhedral import Cone, cone_over_polytope, dual_cone
from toricdef.semigroup import (
    degree_filtration,
    fundamental_filtration,
    hilbert_basis,
)

from helpers import CATALOG_POLYGONS, Q1, Q2, Q5


def brute_force_minimal_generators(cone, box=5):
    """Independent oracle: scan a box, then sieve sums of two elements."""
    pts = [
        x
        for x in itertools.product(range(-box, box + 1), repeat=cone.rank)
        if any(x) and cone.contains(x)
    ]
    pts = set(pts)
    basis = []
    for x in sorted(pts):
        decomposable = False
        for y in pts:
            z = tuple(a - b for a, b in zip(x, y))
            if any(z) and z != x and cone.contains(z) and z in pts:
                decomposable = True
                break
            if not all(abs(v) <= box for v in z):
                # partner outside the scan box: fall back to cone membership
                if any(z) and cone.contains(z):
                    decomposable = True
                    break
        if not decomposable:
            basis.append(x)
    return sorted(basis)


def can_represent(cone, basis, x, memo=None):
    if memo is None:
        memo = {}
    if all(v == 0 for v in x):
        return True
    if x in memo:
        return memo[x]
    memo[x] = False
    for h in basis:
        z = tuple(a - b for a, b in zip(x, h))
        if cone.contains(z) and can_represent(cone, basis, z, memo):
            memo[x] = True
            break
    return memo[x]


def test_hilbert_basis_first_quadrant():
    c = Cone.from_rays([(1, 0), (0, 1)])
    assert hilbert_basis(c).elements == ((0, 1), (1, 0))


def test_hilbert_basis_derived_example():
    c = Cone.from_rays([(1, 0), (1, 2)])
    hb = hilbert_basis(c).elements
    assert set(hb) == {(1, 0), (1, 1), (1, 2)}
    # brute-force oracle: scan points with coordinates <= 4, sieve decomposables
    oracle = [
        x
        for x in brute_force_minimal_generators(c, box=4)
        if all(abs(v) <= 4 for v in x)
    ]
    assert set(oracle) == set(hb)


def test_hilbert_basis_dual_of_q2_cone():
    sigma_dual = dual_cone(cone_over_polytope(Q2))
    hb = hilbert_basis(sigma_dual).elements
    oracle = brute_force_minimal_generators(sigma_dual, box=4)
    assert set(hb) == set(oracle)
    # irredundance: dropping any element loses some representable point
    pts = [
        x
        for x in itertools.product(range(-3, 4), repeat=3)
        if any(x) and sigma_dual.contains(x)
    ]
    for h in hb:
        reduced = [g for g in hb if g != h]
        assert not all(can_represent(sigma_dual, reduced, x, {}) for x in pts)
    assert all(can_represent(sigma_dual, list(hb), x, {}) for x in pts)


def test_hilbert_basis_contains_dual_rays():
    for q in CATALOG_POLYGONS.values():
        sd = dual_cone(cone_over_polytope(q))
        hb = set(hilbert_basis(sd).elements)
        assert set(sd.rays) <= hb


def test_degree_filtration_nonpositive_degree():
    c = cone_over_polytope(Q1)
    sd = dual_cone(c)
    basis = hilbert_basis(sd)
    filt = degree_filtration(basis, c.rays, (0, 0, -1))
    assert all(s == () for s in filt.subsets)
    assert filt.union == ()


def test_degree_filtration_at_gorenstein_degree():
    c = cone_over_polytope(Q1)
    sd = dual_cone(c)
    basis = hilbert_basis(sd)
    filt = degree_filtration(basis, c.rays, (0, 0, 1))
    for a, idx in zip(c.rays, filt.subsets):
        expected = tuple(
            k for k, s in enumerate(basis.elements) if dot(a, s) == 0
        )
        assert idx == expected


def test_degree_filtration_double_degree():
    c = cone_over_polytope(Q2)
    sd = dual_cone(c)
    basis = hilbert_basis(sd)
    filt = degree_filtration(basis, c.rays, (0, 0, 2))
    for a, idx in zip(c.rays, filt.subsets):
        expected = tuple(
            k for k, s in enumerate(basis.elements) if dot(a, s) in (0, 1)
        )
        assert idx == expected


def test_fundamental_filtration_square():
    from toricdef.polyhedral import Polytope

    sq = Polytope.from_points([(0, 0), (1, 0), (1, 1), (0, 1)])
    ff = fundamental_filtration(sq)
    assert all(len(s) == 2 for s in ff.subsets)


def test_fundamental_filtration_catalog():
    for name, expected_f in (("Q5", 6), ("Q2", 3)):
        q = CATALOG_POLYGONS[name]
        ff = fundamental_filtration(q)
        assert len(ff.pairs) == expected_f
        assert all(len(s) == 2 for s in ff.subsets)
        assert ff.union == tuple(range(expected_f))


def test_fundamental_generators_inside_hilbert_basis():
    for q in CATALOG_POLYGONS.values():
        ff = fundamental_filtration(q)
        sd = dual_cone(cone_over_polytope(q))
        hb = set(hilbert_basis(sd).elements)
        assert set(ff.pairs) <= hb
