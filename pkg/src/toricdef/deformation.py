"""Total-space construction for decompositions of the height-one slice.

Given a primitive degree in the dual lattice, the cone is sliced at pairing
value one; a Minkowski decomposition of the slice polytope into m+1 lattice
summands lifts to a cone over conv(R_i x {e^i}) in m extra coordinates.
The original cone embeds as the common level set of the m+1 coordinate
projections, and both the lattice identity and the cone identity of that
embedding are verified exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence

from .exact_linalg import (
    dot,
    hnf,
    hnf_basis,
    inverse_unimodular,
    lattices_equal,
    mat,
    mat_mul,
    primitive,
    solve_exact,
    transpose,
    vec_neg,
    vec_sub,
)
from .minkowski import Decomposition, _vertex_correspondence
from .polyhedral import (
    Cone,
    GeometryError,
    Polytope,
    _subset_normals_to_rays,
    polytopes_translate_equal,
)


class SliceError(GeometryError):
    pass


@dataclass(frozen=True)
class AmbientSlice:
    """The affine hyperplane of pairing one, charted by a lattice basis.

    ``chart_rows`` holds the base point (pairing 1) followed by a basis of
    the orthogonal sublattice; a point x of the ambient lattice has chart
    coordinates (height, u) = x @ inverse(chart_rows).
    """

    cone: Cone
    degree: tuple           # the primitive functional cutting the slice
    base_point: tuple       # lattice point with pairing 1
    chart_rows: tuple       # unimodular: rows = (base point, lattice basis)
    chart_inverse: tuple
    polytope: Polytope      # the slice polytope in chart coordinates

    def to_chart(self, x: Sequence) -> tuple:
        """(height, u)-coordinates of an ambient vector."""
        inv = self.chart_inverse
        return tuple(
            sum(x[i] * inv[i][j] for i in range(len(x))) for j in range(len(x))
        )


def build_ambient(c: Cone, degree: Sequence[int]) -> AmbientSlice:
    """Slice the cone at pairing one against a primitive dual vector.

    The degree must pair nonnegatively with the cone (it lies in the dual)
    and strictly positively with every ray, so the slice is compact.
    """
    degree = tuple(int(x) for x in degree)
    if primitive(degree) != degree:
        raise SliceError(f"degree {degree} is not primitive")
    pairings = [dot(a, degree) for a in c.rays]
    if any(p < 0 for p in pairings):
        raise SliceError(f"degree {degree} is not in the dual cone")
    if any(p == 0 for p in pairings):
        raise SliceError(
            f"degree {degree} vanishes on a ray; the slice is unbounded"
        )
    n = c.rank
    col = tuple((x,) for x in degree)
    h, u = hnf(col)
    assert h[0][0] == 1 and all(h[i][0] == 0 for i in range(1, n))
    # rows: base point first, then a basis of the degree-orthogonal sublattice
    base = u[0]
    kernel_rows = u[1:]
    # normalize the base point against the kernel lattice for determinism
    kh = hnf_basis(kernel_rows) if kernel_rows else ()
    b = list(base)
    for row in kh:
        p = next(j for j, a in enumerate(row) if a != 0)
        q = b[p] // row[p]
        for j in range(n):
            b[j] -= q * row[j]
    base = tuple(b)
    chart_rows = (base,) + tuple(kh)
    inv = inverse_unimodular(chart_rows)
    verts = []
    for a, p in zip(c.rays, pairings):
        x = tuple(Fraction(ai, p) for ai in a)
        coords = tuple(
            sum(x[i] * inv[i][j] for i in range(n)) for j in range(n)
        )
        assert coords[0] == 1
        verts.append(coords[1:])
    poly = Polytope.from_points(verts)
    return AmbientSlice(
        cone=c,
        degree=degree,
        base_point=base,
        chart_rows=chart_rows,
        chart_inverse=inv,
        polytope=poly,
    )


@dataclass(frozen=True)
class VertexConditionReport:
    """Per vertex of the slice: its summand vertices and their latticeness."""

    vertex_summands: tuple  # per vertex: tuple of the m+1 summand vertices
    holds: bool             # at least m of m+1 summand vertices are lattice


@dataclass(frozen=True)
class DeformationData:
    """The lifted cone, projections, embedding, and regular-sequence data."""

    slice: AmbientSlice
    decomposition_blocks: tuple
    summands: tuple           # in slice chart coordinates, arbitrary anchors
    cone_tilde: Cone          # in rank (n-1) + (m+1)
    projections: tuple        # r^0, ..., r^m as coordinate functionals
    embedding: tuple          # rows: images of the ambient lattice basis
    sequence_exponents: tuple  # pairs (r^i, r^0), i = 1..m
    vertex_report: VertexConditionReport

    @property
    def m(self) -> int:
        return len(self.projections) - 1


def build_deformation(slice_: AmbientSlice, dec: Decomposition) -> DeformationData:
    """Lift a decomposition of the slice polytope to its total-space cone."""
    q = slice_.polytope
    if not polytopes_translate_equal(dec.polygon, q):
        raise GeometryError("decomposition does not belong to the slice polytope")
    summands = dec.summands
    mplus1 = len(summands)
    n = slice_.cone.rank
    d = n - 1

    # vertex condition: each slice vertex splits into summand vertices,
    # all lattice here (lattice summands), checked exactly
    correspondences = [_vertex_correspondence(q, s) for s in summands]
    per_vertex = []
    offsets = None
    holds = True
    for i, v in enumerate(q.vertices):
        parts = tuple(corr[i] for corr in correspondences)
        per_vertex.append(parts)
        total = tuple(sum(xs) for xs in zip(*parts))
        off = vec_sub(v, total)
        if offsets is None:
            offsets = off
        elif offsets != off:
            raise GeometryError("summand vertices do not add up to the polytope")
        lattice_count = sum(
            1 for p in parts if all(isinstance(x, int) for x in p)
        )
        if lattice_count < mplus1 - 1:
            holds = False
    report = VertexConditionReport(vertex_summands=tuple(per_vertex), holds=holds)
    if not holds:
        raise GeometryError("vertex condition fails: too few lattice summands")

    # distribute the translation offset into the first summand so the
    # summands add up to the slice polytope exactly
    summands = (summands[0].translate(offsets),) + tuple(summands[1:])

    rays = []
    for i, s in enumerate(summands):
        tag = tuple(1 if j == i else 0 for j in range(mplus1))
        for v in s.vertices:
            rays.append(tuple(v) + tag)
    cone_tilde = Cone.from_rays(rays, d + mplus1)
    projections = tuple(
        (0,) * d + tuple(1 if j == i else 0 for j in range(mplus1))
        for i in range(mplus1)
    )
    embedding = []
    for k in range(1, n):  # images of the orthogonal-sublattice basis
        embedding.append(tuple(1 if j == k - 1 else 0 for j in range(d)) + (0,) * mplus1)
    embedding.append(tuple(0 for _ in range(d)) + (1,) * mplus1)  # base point
    exponents = tuple((projections[i], projections[0]) for i in range(1, mplus1))
    return DeformationData(
        slice=slice_,
        decomposition_blocks=dec.blocks,
        summands=summands,
        cone_tilde=cone_tilde,
        projections=projections,
        embedding=tuple(embedding),
        sequence_exponents=exponents,
        vertex_report=report,
    )


def verify_fiber(dd: DeformationData) -> tuple[bool, dict]:
    """Exact check of the lattice and cone identities of the embedding.

    Lattice: the embedded copy of the ambient lattice equals the common
    integer kernel of the projection differences.  Cone: the pullback of
    the lifted cone along the embedding equals the original cone (in slice
    chart coordinates).  Returns (ok, diagnostics with witnesses).
    """
    diag: dict = {}
    mplus1 = dd.m + 1
    n = dd.slice.cone.rank
    d = n - 1
    total = d + mplus1

    diffs = [
        tuple(a - b for a, b in zip(dd.projections[i], dd.projections[0]))
        for i in range(1, mplus1)
    ]
    cols = tuple(tuple(dv[j] for dv in diffs) for j in range(total))
    from .exact_linalg import left_kernel_int

    kernel_lattice = left_kernel_int(cols, nrows=total) if diffs else None
    if diffs:
        ok_lattice = lattices_equal(dd.embedding, kernel_lattice)
    else:
        ok_lattice = lattices_equal(
            dd.embedding, tuple(tuple(1 if i == j else 0 for j in range(total)) for i in range(total))
        )
    if not ok_lattice:
        diag["lattice"] = {
            "embedded": hnf_basis(dd.embedding),
            "kernel": hnf_basis(kernel_lattice) if kernel_lattice else None,
        }

    # pull the lifted cone's inequalities back along the embedding
    emb = dd.embedding
    pulled = []
    for f in dd.cone_tilde.facet_normals:
        pulled.append(tuple(dot(row, f) for row in emb))
    nonzero = sorted({row for row in pulled if any(row)})
    expected = set()
    for a in dd.slice.cone.rays:
        full = dd.slice.to_chart(a)  # (height, u); reorder to (u, height)
        expected.add(primitive(tuple(full[1:]) + (full[0],)))
    from .exact_linalg import rank as _rank

    if not nonzero or _rank(nonzero) < n:
        ok_cone = False
        diag["cone"] = {"pullback": "inequality system is degenerate"}
        got = set()
    else:
        got = set(_subset_normals_to_rays(tuple(nonzero), n))
        ok_cone = got == expected
        if not ok_cone:
            diag["cone"] = {
                "expected_rays": tuple(sorted(expected)),
                "computed_rays": tuple(sorted(got)),
                "witness": tuple(sorted(got ^ expected)),
            }
    # the projections must be nonnegative on the lifted cone
    ok_proj = all(
        dot(r, p) >= 0 for r in dd.cone_tilde.rays for p in dd.projections
    )
    if not ok_proj:
        diag["projections"] = "negative value on a ray"
    return ok_lattice and ok_cone and ok_proj, diag


def kodaira_spencer_check(
    dd: DeformationData, q: Polytope, expected_dim: Optional[int] = None
) -> bool:
    """Span of the summand classes has dimension <= m (and the expected one)."""
    from .minkowski import class_span_dim, summand_class

    classes = [summand_class(q, s) for s in dd.summands]
    span = class_span_dim(classes)
    if span > dd.m:
        return False
    if expected_dim is not None and span != expected_dim:
        return False
    return True
