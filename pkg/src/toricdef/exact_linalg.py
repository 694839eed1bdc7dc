"""Exact integer/rational vectors, matrices, and lattice normal forms.

Vectors are tuples of ``int`` or ``fractions.Fraction``; matrices are tuples
of row tuples.  Everything is computed exactly: no operation here ever touches
floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

Vector = tuple
Matrix = tuple

class LinAlgError(ValueError):
    pass


def vec(entries: Iterable) -> Vector:
    return tuple(entries)


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise LinAlgError(f"length mismatch: {len(u)} vs {len(v)}")
    return sum(a * b for a, b in zip(u, v))


def vec_add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, u: Sequence) -> Vector:
    return tuple(c * a for a in u)


def vec_neg(u: Sequence) -> Vector:
    return tuple(-a for a in u)


def is_zero_vec(u: Sequence) -> bool:
    return all(a == 0 for a in u)


def mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence], ncols: Optional[int] = None) -> Matrix:
    if not m:
        if ncols is None:
            raise LinAlgError("transpose of empty matrix needs ncols")
        return tuple(() for _ in range(ncols))
    return tuple(zip(*m))


def mat_vec(m: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(dot(row, v) for row in m)


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = list(zip(*b)) if b else []
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def primitive(v: Sequence[int]) -> Vector:
    """Divide an integer vector by the gcd of its entries (sign preserved)."""
    if is_zero_vec(v):
        raise LinAlgError("zero vector has no primitive representative")
    g = 0
    for a in v:
        g = gcd(g, a)
    return tuple(a // g for a in v)


def scale_to_primitive(v: Sequence) -> Vector:
    """Primitive integer vector spanning the same ray as a rational vector."""
    if is_zero_vec(v):
        raise LinAlgError("zero vector has no primitive representative")
    fr = [Fraction(a) for a in v]
    m = lcm(*[f.denominator for f in fr]) if fr else 1
    return primitive(tuple(int(f * m) for f in fr))


def _integerize_rows(m: Sequence[Sequence]) -> list[list[int]]:
    # Row scaling does not change rank or the right kernel.
    out = []
    for row in m:
        fr = [Fraction(a) for a in row]
        mult = lcm(*[f.denominator for f in fr]) if fr else 1
        out.append([int(f * mult) for f in fr])
    return out


def _bareiss_echelon(rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free (Bareiss) row echelon form of an integer matrix.

    Returns the echelon rows and the pivot column indices.  All intermediate
    entries stay integral; divisions are exact.
    """
    a = [row[:] for row in rows]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a[:r], pivots


def rank(m: Sequence[Sequence]) -> int:
    """Rank over the rationals, via fraction-free elimination."""
    if not m:
        return 0
    return len(_bareiss_echelon(_integerize_rows(m))[1])


def kernel_basis(m: Sequence[Sequence], ncols: Optional[int] = None) -> Matrix:
    """Basis of the right kernel {v : m @ v = 0}, as primitive integer rows.

    One basis vector per free column, in increasing free-column order, with
    positive leading entry.  ``ncols`` is required when ``m`` has no rows.
    """
    if not m:
        if ncols is None:
            raise LinAlgError("kernel of empty matrix needs ncols")
        return identity(ncols)
    ncols = len(m[0])
    ech, pivots = _bareiss_echelon(_integerize_rows(m))
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        # back substitution over the pivot rows
        for i in range(len(pivots) - 1, -1, -1):
            c = pivots[i]
            s = sum((ech[i][j] * v[j] for j in range(c + 1, ncols)), Fraction(0))
            v[c] = -s / ech[i][c]
        w = scale_to_primitive(v)
        for a in w:
            if a != 0:
                if a < 0:
                    w = vec_neg(w)
                break
        basis.append(w)
    return tuple(basis)


def subspace_sum_dim(bases: Sequence[Sequence[Sequence]], ambient_dim: int) -> int:
    """Dimension of the sum of subspaces given by row bases."""
    rows = [row for b in bases for row in b]
    for row in rows:
        if len(row) != ambient_dim:
            raise LinAlgError("basis row length does not match ambient dimension")
    return rank(rows) if rows else 0


def det(m: Sequence[Sequence]):
    """Exact determinant (integer for integer input)."""
    n = len(m)
    if n == 0:
        return 1
    if any(len(row) != n for row in m):
        raise LinAlgError("determinant of non-square matrix")
    a = [[Fraction(x) for x in row] for row in m]
    sign = 1
    d = Fraction(1)
    for c in range(n):
        piv = None
        for i in range(c, n):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        d *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c] == 0:
                continue
            f = a[i][c] * inv
            for j in range(c, n):
                a[i][j] -= f * a[c][j]
    d *= sign
    return int(d) if d.denominator == 1 else d


def hnf(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form: H = U @ m with U unimodular.

    Convention: pivots positive, entries above a pivot reduced into
    [0, pivot), zero rows at the bottom.
    """
    h = [list(map(int, row)) for row in m]
    nrows = len(h)
    ncols = len(h[0]) if nrows else 0
    u = [list(row) for row in identity(nrows)]
    r = 0
    for c in range(ncols):
        # Euclid on the entries of column c at rows >= r.
        while True:
            nz = [i for i in range(r, nrows) if h[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(h[i][c]))
            if i0 != r:
                h[r], h[i0] = h[i0], h[r]
                u[r], u[i0] = u[i0], u[r]
            done = True
            for i in range(r + 1, nrows):
                if h[i][c] != 0:
                    q = h[i][c] // h[r][c]
                    for j in range(ncols):
                        h[i][j] -= q * h[r][j]
                    for j in range(nrows):
                        u[i][j] -= q * u[r][j]
                    if h[i][c] != 0:
                        done = False
            if done:
                break
        if r < nrows and h[r][c] != 0:
            if h[r][c] < 0:
                h[r] = [-x for x in h[r]]
                u[r] = [-x for x in u[r]]
            for i in range(r):
                q = h[i][c] // h[r][c]
                if q != 0:
                    for j in range(ncols):
                        h[i][j] -= q * h[r][j]
                    for j in range(nrows):
                        u[i][j] -= q * u[r][j]
            r += 1
            if r == nrows:
                break
    return mat(h), mat(u)


def snf(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form: S = U @ m @ V diagonal with divisibility chain."""
    s = [list(map(int, row)) for row in m]
    nrows = len(s)
    ncols = len(s[0]) if nrows else 0
    u = [list(row) for row in identity(nrows)]
    v = [list(row) for row in identity(ncols)]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row_dst -= q * row_src
        for j in range(ncols):
            s[dst][j] -= q * s[src][j]
        for j in range(nrows):
            u[dst][j] -= q * u[src][j]

    def add_col(src, dst, q):
        for row in s:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    t = 0
    while t < min(nrows, ncols):
        # locate a nonzero entry of minimal absolute value in s[t:, t:]
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if s[i][j] != 0 and (best is None or abs(s[i][j]) < abs(s[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            for i in range(t + 1, nrows):
                if s[i][t] != 0:
                    add_row(t, i, s[i][t] // s[t][t])
                    if s[i][t] != 0:
                        swap_rows(t, i)
            if any(s[i][t] != 0 for i in range(t + 1, nrows)):
                continue
            for j in range(t + 1, ncols):
                if s[t][j] != 0:
                    add_col(t, j, s[t][j] // s[t][t])
                    if s[t][j] != 0:
                        swap_cols(t, j)
            if any(s[i][t] != 0 for i in range(t + 1, nrows)):
                continue
            if any(s[t][j] != 0 for j in range(t + 1, ncols)):
                continue
            # enforce divisibility: fold a bad entry into the pivot row
            bad = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if s[i][j] % s[t][t] != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, -1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return mat(s), mat(u), mat(v)


def left_kernel_int(m: Sequence[Sequence[int]], nrows: Optional[int] = None) -> Matrix:
    """Basis of the saturated lattice {x in Z^rows : x @ m = 0}."""
    if not m:
        if nrows is None:
            raise LinAlgError("left kernel of empty matrix needs nrows")
        return identity(nrows)
    h, u = hnf(m)
    out = [u[i] for i in range(len(h)) if is_zero_vec(h[i])]
    return mat(out)


def hnf_basis(rows: Sequence[Sequence[int]]) -> Matrix:
    """Canonical basis (nonzero HNF rows) of the lattice spanned by rows."""
    if not rows:
        return ()
    h, _ = hnf(rows)
    return tuple(r for r in h if not is_zero_vec(r))


def lattices_equal(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
    return hnf_basis(a) == hnf_basis(b)


def lattice_contains(rows: Sequence[Sequence[int]], x: Sequence[int]) -> bool:
    """Is x an integer combination of the given lattice basis rows?"""
    h = hnf_basis(rows)
    y = list(x)
    for row in h:
        p = next(j for j, a in enumerate(row) if a != 0)
        if y[p] % row[p] != 0:
            return False
        q = y[p] // row[p]
        for j in range(len(y)):
            y[j] -= q * row[j]
    return is_zero_vec(y)


def solve_exact(a: Sequence[Sequence], b: Sequence) -> Optional[Vector]:
    """The unique rational solution of a @ x = b, or None if inconsistent.

    Requires full column rank (raises otherwise).
    """
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    aug = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    piv_of_col = {}
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if aug[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(nrows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_of_col[c] = r
        r += 1
    if len(piv_of_col) < ncols:
        raise LinAlgError("solve_exact requires full column rank")
    for i in range(r, nrows):
        if aug[i][ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for c, i in piv_of_col.items():
        x[c] = aug[i][ncols]
    return tuple(int(f) if f.denominator == 1 else f for f in x)


def inverse_unimodular(u: Sequence[Sequence[int]]) -> Matrix:
    """Exact integer inverse of a unimodular matrix."""
    n = len(u)
    cols = []
    for j in range(n):
        e = tuple(1 if i == j else 0 for i in range(n))
        col = solve_exact(u, e)
        if col is None or any(isinstance(x, Fraction) for x in col):
            raise LinAlgError("matrix is not unimodular")
        cols.append(col)
    return transpose(mat(cols))


def extend_to_basis(base_rows: Sequence[Sequence], candidates: Sequence[Sequence]) -> list:
    """Greedily pick candidate rows extending span(base_rows), in order."""
    acc = [tuple(r) for r in base_rows]
    cur = rank(acc) if acc else 0
    picked = []
    for cand in candidates:
        trial = acc + [tuple(cand)]
        r = rank(trial)
        if r > cur:
            acc = trial
            cur = r
            picked.append(tuple(cand))
    return picked
