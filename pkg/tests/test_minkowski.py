import itertools
from fractions import Fraction
from random import Random

import pytest

from toricdef.exact_linalg import dot, rank
from toricdef.minkowski import (
    Decomposition,
    DecompositionError,
    class_span_dim,
    divisor_from_summand,
    divisor_from_support_values,
    kodaira_spencer_span,
    lattice_decompositions,
    parameters_of_summand,
    polygon_from_edge_vectors,
    rho_class,
    summand_class,
    summand_cone,
    summand_from_parameters,
    tilde_t1,
)
from toricdef.polyhedral import (
    Polytope,
    edge_vectors,
    minkowski_sum,
    polytopes_translate_equal,
    unimodular_equivalent,
)

from helpers import (
    CATALOG_POLYGONS,
    Q1,
    Q2,
    Q3,
    Q4,
    Q5,
    THREE_POLYTOPES,
    random_lattice_polygon,
)


def brute_force_zero_sum_partitions(evs):
    """Oracle: all set partitions of the edge indices, filtered."""
    n = len(evs)

    def partitions(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for part in partitions(rest):
            for i in range(len(part)):
                yield part[:i] + [[first] + part[i]] + part[i + 1:]
            yield [[first]] + part

    found = set()
    for part in partitions(list(range(n))):
        if len(part) < 2:
            continue
        if all(
            all(sum(evs[i][c] for i in block) == 0 for c in (0, 1))
            for block in part
        ):
            found.add(frozenset(frozenset(b) for b in part))
    return found


def test_tilde_t1_segment_zero():
    seg = Polytope.from_points([(0, 0), (3, 1)])
    assert tilde_t1(seg).dim == 0


def test_tilde_t1_catalog_dims():
    dims = {"Q1": 1, "Q2": 0, "Q3": 1, "Q4": 2, "Q5": 3}
    for name, expected in dims.items():
        assert tilde_t1(CATALOG_POLYGONS[name]).dim == expected


def test_tilde_t1_ngon_law():
    rng = Random(11)
    for n in range(3, 9):
        poly = random_lattice_polygon(rng, n)
        assert tilde_t1(poly).dim == n - 3


def test_summand_cone_q3_extremal_rays():
    sc = summand_cone(Q3)
    assert sc.dim == 2
    assert set(sc.extremal_rays) == {(0, 2, 1, 3), (3, 1, 2, 0)}
    for ray in sc.extremal_rays:
        tri = summand_from_parameters(sc, ray)
        assert len(tri.vertices) == 3


def test_summand_cone_unit_square():
    sq = Polytope.from_points([(0, 0), (1, 0), (1, 1), (0, 1)])
    sc = summand_cone(sq)
    summands = [summand_from_parameters(sc, r) for r in sc.extremal_rays]
    assert sorted(len(s.vertices) for s in summands) == [2, 2]
    dirs = set()
    for s in summands:
        d = tuple(map(abs, (s.vertices[1][0] - s.vertices[0][0], s.vertices[1][1] - s.vertices[0][1])))
        dirs.add(d)
    assert dirs == {(1, 0), (0, 1)}


def test_summand_cone_triangle_is_a_line():
    sc = summand_cone(Q2)
    assert sc.dim == 1
    assert sc.extremal_rays == ((1, 1, 1),)


def test_smilansky_consistency_polygons():
    for q in CATALOG_POLYGONS.values():
        assert summand_cone(q).dim - 1 == tilde_t1(q).dim


def test_smilansky_consistency_3polytopes():
    for name, p in THREE_POLYTOPES.items():
        assert summand_cone(p).dim - 1 == tilde_t1(p).dim, name


def test_octahedron_rigid_summand_space():
    assert tilde_t1(THREE_POLYTOPES["octahedron"]).dim == 0
    assert tilde_t1(THREE_POLYTOPES["simplex"]).dim == 0


def test_reconstruction_roundtrip():
    for q in (Q1, Q3, Q5):
        sc = summand_cone(q)
        alls = (1,) * sc.ambient_edges
        assert polytopes_translate_equal(
            summand_from_parameters(sc, alls), q.translate(tuple(-x for x in q.vertices[0]))
        )
        for t in sc.extremal_rays:
            s = summand_from_parameters(sc, t)
            assert parameters_of_summand(sc, s) == t
        # interior rational point
        mid = tuple(
            sum(Fraction(r[e]) for r in sc.extremal_rays) / len(sc.extremal_rays)
            for e in range(sc.ambient_edges)
        )
        if sc.contains_parameters(mid):
            s = summand_from_parameters(sc, mid)
            assert parameters_of_summand(sc, s) == mid


def test_reconstruction_additivity():
    sc = summand_cone(Q3)
    one = (1,) * 4
    t = sc.extremal_rays[0]
    s1 = summand_from_parameters(sc, one)
    s2 = summand_from_parameters(sc, t)
    s = minkowski_sum(s1, s2)
    combined = tuple(a + b for a, b in zip(one, t))
    assert parameters_of_summand(sc, s) == combined


def test_summand_from_parameters_rejects_outside():
    sc = summand_cone(Q3)
    with pytest.raises(Exception):
        summand_from_parameters(sc, (1, 0, 0, 0))


def test_rho_zero_on_whole_polytope():
    for q in (Q1, Q3, Q5):
        sc = summand_cone(q)
        cls = rho_class(sc, (1,) * sc.ambient_edges)
        assert all(x == 0 for x in cls.coordinates)


def test_rho_zero_point_summand():
    sc = summand_cone(Q5)
    cls = rho_class(sc, (0,) * 6)
    assert all(x == 0 for x in cls.coordinates)


def test_rho_extremal_ray_spans_q3():
    sc = summand_cone(Q3)
    cls = rho_class(sc, (0, 2, 1, 3))
    assert any(x != 0 for x in cls.coordinates)
    assert class_span_dim([cls]) == 1 == tilde_t1(Q3).dim


def test_rho_translation_invariance():
    sc = summand_cone(Q1)
    s = summand_from_parameters(sc, sc.extremal_rays[0])
    moved = s.translate((7, -5))
    a = summand_class(Q1, s)
    b = summand_class(Q1, moved)
    assert a.coordinates == b.coordinates


def test_rho_well_defined_on_subspace_sum():
    # the functional vanishes on every generator of sum L(F_i)
    for q in (Q1, Q4, Q5):
        space = tilde_t1(q)
        sc = summand_cone(q)
        for t in sc.extremal_rays:
            s = summand_from_parameters(sc, t)
            etas = summand_class(q, s).support_values
            for row in space.subspace_sum_basis:
                assert sum(w * e for w, e in zip(row, etas)) == 0


def test_lattice_decompositions_q1():
    decs = lattice_decompositions(Q1)
    assert len(decs) == 1
    assert sorted(len(s.vertices) for s in decs[0].summands) == [2, 2]


def test_lattice_decompositions_q3_none():
    assert lattice_decompositions(Q3) == []


def test_lattice_decompositions_q5():
    decs = lattice_decompositions(Q5)
    assert len(decs) == 5
    shapes = sorted(tuple(sorted(len(s.vertices) for s in d.summands)) for d in decs)
    assert (2, 2, 2) in shapes  # three segments
    assert (3, 3) in shapes     # two triangles
    extremal = [d for d in decs if d.is_extremal]
    assert len(extremal) == 2
    assert sorted(tuple(sorted(len(s.vertices) for s in d.summands)) for d in extremal) == [
        (2, 2, 2),
        (3, 3),
    ]


def test_decompositions_sum_back_to_polygon():
    for q in (Q1, Q4, Q5):
        for dec in lattice_decompositions(q):
            total = dec.summands[0]
            for s in dec.summands[1:]:
                total = minkowski_sum(total, s)
            assert unimodular_equivalent(total, q) is not None
            t = tuple(
                b - a for a, b in zip(total.vertices[0], q.vertices[0])
            )
            assert polytopes_translate_equal(total.translate(t), q)


def test_decomposition_oracle_equivalence():
    rng = Random(3)
    polys = list(CATALOG_POLYGONS.values()) + [
        random_lattice_polygon(rng, n) for n in (4, 5, 6, 7, 8)
    ]
    for q in polys:
        evs = edge_vectors(q)
        oracle = brute_force_zero_sum_partitions(evs)
        enumerated = {
            frozenset(frozenset(b) for b in d.blocks)
            for d in lattice_decompositions(q)
        }
        assert enumerated == oracle


def test_decompositions_reject_non_primitive():
    bad = Polytope.from_points([(0, 0), (2, 0), (0, 1)])
    with pytest.raises(DecompositionError):
        lattice_decompositions(bad)


def test_kodaira_spencer_spans():
    decs = lattice_decompositions(Q1)
    dim, _ = kodaira_spencer_span(Q1, decs[0])
    assert dim == 1
    for dec in lattice_decompositions(Q5):
        dim, _ = kodaira_spencer_span(Q5, dec)
        shapes = sorted(len(s.vertices) for s in dec.summands)
        if shapes == [3, 3]:
            assert dim == 1
        elif shapes == [2, 2, 2]:
            assert dim == 2
        assert dim <= dec.m


def test_ks_classes_sum_to_zero():
    for q in (Q1, Q4, Q5):
        for dec in lattice_decompositions(q):
            classes = [summand_class(q, s) for s in dec.summands]
            total = [sum(col) for col in zip(*(c.coordinates for c in classes))]
            assert all(x == 0 for x in total)


def test_proper_faces_indecomposable():
    # edges and vertices of a polygon have zero summand space
    for q in (Q4, Q5):
        vs = q.vertices
        for i in range(len(vs)):
            seg = Polytope.from_points([vs[i], vs[(i + 1) % len(vs)]])
            assert tilde_t1(seg).dim == 0
        assert tilde_t1(Polytope.from_points([vs[0]])).dim == 0


def test_divisor_whole_polytope_ample():
    d = divisor_from_summand(Q5, Q5)
    assert d.is_cartier and d.is_nef and d.is_ample


def test_divisor_segment_summand_not_ample():
    dec = lattice_decompositions(Q1)[0]
    seg = dec.summands[0]
    d = divisor_from_summand(Q1, seg)
    assert d.is_cartier and d.is_nef and not d.is_ample
    assert len(set(d.a_alpha)) == 2


def test_divisor_perturbed_not_cartier():
    # Q5's normal fan is smooth, so every integer h is Cartier there; the
    # fan of Q1 has index-2 vertex cones, where a one-ray perturbation of a
    # valid support function loses Cartierness.
    d_ok = divisor_from_summand(Q1, Q1)
    assert d_ok.is_cartier and d_ok.is_nef and d_ok.is_ample
    h = list(d_ok.h)
    h[0] += 1
    d_bad = divisor_from_support_values(Q1, h)
    assert not d_bad.is_cartier
    h5 = list(divisor_from_summand(Q5, Q5).h)
    h5[0] += 1
    assert divisor_from_support_values(Q5, h5).is_cartier


def test_summand_cone_all_ones_member():
    for q in list(CATALOG_POLYGONS.values()) + list(THREE_POLYTOPES.values()):
        sc = summand_cone(q)
        assert sc.contains_parameters((1,) * sc.ambient_edges)
