"""Exact integer and rational linear algebra.

Everything here runs on Python's arbitrary-precision integers and
``fractions.Fraction``; no floating point enters any computation, so every
returned value is exact.  Matrices are sequences of equal-length rows and are
returned as tuples of tuples.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import NonPointedError

Vec = tuple[int, ...]
Mat = tuple[Vec, ...]


def _rows(m: Iterable[Sequence[int]]) -> list[list[int]]:
    rows = [list(r) for r in m]
    if rows:
        w = len(rows[0])
        if any(len(r) != w for r in rows):
            raise ValueError("ragged matrix")
    return rows


def freeze(m: Iterable[Sequence[int]]) -> Mat:
    return tuple(tuple(r) for r in m)


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence[int]]) -> Mat:
    if not m:
        return ()
    return tuple(tuple(row[j] for row in m) for j in range(len(m[0])))


def vec_dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v, strict=True))


def vec_add(u: Sequence[int], v: Sequence[int]) -> Vec:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vec_sub(u: Sequence[int], v: Sequence[int]) -> Vec:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vec_neg(u: Sequence[int]) -> Vec:
    return tuple(-a for a in u)


def vec_scale(c: int, u: Sequence[int]) -> Vec:
    return tuple(c * a for a in u)


def vec_mat(v: Sequence, m: Sequence[Sequence]) -> tuple:
    """Row vector times matrix."""
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0])))


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    return tuple(vec_mat(row, b) for row in a)


def primitive(v: Sequence[int]) -> Vec:
    """Divide by the gcd of the entries, keeping the direction.

    Raises ValueError on the zero vector.
    """
    g = 0
    for a in v:
        g = gcd(g, a)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(a // g for a in v)


def canonical_sign(v: Sequence[int]) -> Vec:
    """Flip the sign so the first nonzero coordinate is positive."""
    for a in v:
        if a != 0:
            return tuple(v) if a > 0 else vec_neg(v)
    raise ValueError("zero vector has no canonical sign")


def fraction_row_to_primitive(row: Sequence[Fraction]) -> Vec:
    """Scale a rational row by a positive factor to a primitive integer vector."""
    denom = 1
    for x in row:
        f = Fraction(x)
        denom = denom * f.denominator // gcd(denom, f.denominator)
    ints = [int(x * denom) for x in row]
    return primitive(ints)


def det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (Bareiss elimination)."""
    a = _rows(m)
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant requires a square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(m: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals, by exact fraction-free elimination."""
    a = [[Fraction(x) for x in row] for row in m]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nrows):
            if a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == nrows:
            break
    return r


def _row_sub(h: list[list[int]], u: list[list[int]], i: int, j: int, q: int) -> None:
    h[i] = [x - q * y for x, y in zip(h[i], h[j])]
    u[i] = [x - q * y for x, y in zip(u[i], u[j])]


def hnf(m: Sequence[Sequence[int]]) -> tuple[Mat, Mat]:
    """Row-style Hermite normal form.

    Returns (H, U) with H = U*m, U unimodular, pivots positive, entries above
    each pivot reduced into [0, pivot), and zero rows at the bottom.  H is the
    canonical representative of the row lattice of m, so two matrices with
    equal row lattices (and equal row counts) produce identical H.
    """
    h = _rows(m)
    nrows = len(h)
    ncols = len(h[0]) if nrows else 0
    u = [list(r) for r in identity(nrows)]
    piv = 0
    for c in range(ncols):
        if piv >= nrows:
            break
        while True:
            nz = [i for i in range(piv, nrows) if h[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(h[i][c]), i))
            if i0 != piv:
                h[piv], h[i0] = h[i0], h[piv]
                u[piv], u[i0] = u[i0], u[piv]
            done = True
            for i in range(piv + 1, nrows):
                if h[i][c] != 0:
                    q = h[i][c] // h[piv][c]
                    _row_sub(h, u, i, piv, q)
                    if h[i][c] != 0:
                        done = False
            if done:
                break
        if piv < nrows and h[piv][c] != 0:
            if h[piv][c] < 0:
                h[piv] = [-x for x in h[piv]]
                u[piv] = [-x for x in u[piv]]
            for i in range(piv):
                q = h[i][c] // h[piv][c]
                if q:
                    _row_sub(h, u, i, piv, q)
            piv += 1
    return freeze(h), freeze(u)


def snf_with_transforms(m: Sequence[Sequence[int]]) -> tuple[Mat, Mat, Mat]:
    """Smith normal form with transforms: returns (S, U, V) with S = U*m*V."""
    a = _rows(m)
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    u = [list(r) for r in identity(nrows)]
    v = [list(r) for r in identity(ncols)]

    def col_sub(j: int, k: int, q: int) -> None:
        for row in a:
            row[j] -= q * row[k]
        for row in v:
            row[j] -= q * row[k]

    def col_swap(j: int, k: int) -> None:
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    t = 0
    while t < min(nrows, ncols):
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < best[0]):
                    best = (abs(a[i][j]), i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            a[t], a[bi] = a[bi], a[t]
            u[t], u[bi] = u[bi], u[t]
        if bj != t:
            col_swap(t, bj)
        while True:
            # clear column t below the pivot
            for i in range(t + 1, nrows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    _row_sub(a, u, i, t, q)
            stuck = next((i for i in range(t + 1, nrows) if a[i][t]), None)
            if stuck is not None:
                a[t], a[stuck] = a[stuck], a[t]
                u[t], u[stuck] = u[stuck], u[t]
                continue
            # clear row t to the right of the pivot
            for j in range(t + 1, ncols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    col_sub(j, t, q)
            stuck = next((j for j in range(t + 1, ncols) if a[t][j]), None)
            if stuck is not None:
                col_swap(t, stuck)
                continue
            # pivot must divide every remaining entry
            bad = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if a[i][j] % a[t][t] != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            _row_sub(a, u, t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return freeze(a), freeze(u), freeze(v)


def snf(m: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Invariant factors d_1 | d_2 | ..., each positive (zero factors dropped)."""
    s, _, _ = snf_with_transforms(m)
    diag = [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0))]
    return tuple(d for d in diag if d != 0)


def mat_inverse_fraction(m: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], ...]:
    """Exact inverse of a square matrix, as Fractions.

    Raises ValueError on non-square or singular input.
    """
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("inverse requires a square matrix")
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return tuple(tuple(row[n:]) for row in a)


def mat_inverse_unimodular(m: Sequence[Sequence[int]]) -> Mat:
    """Integer inverse of a unimodular matrix."""
    inv = mat_inverse_fraction(m)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append(tuple(int(x) for x in row))
    return tuple(out)


def dual_basis(b: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], ...]:
    """Rows v_i with <b_j, v_i> = delta_ij.

    The result is the transposed inverse of b; when |det b| = 1 every entry
    is an integer-valued Fraction.  Raises ValueError on non-square or
    singular input.
    """
    n = len(b)
    if any(len(r) != n for r in b):
        raise ValueError("dual basis requires a square matrix")
    inv = mat_inverse_fraction(b)
    return tuple(tuple(inv[i][j] for i in range(n)) for j in range(n))


def kernel_basis(m: Sequence[Sequence[int]]) -> Mat:
    """Canonical basis of the integer kernel {x : row.x = 0 for every row}.

    The kernel of an integer matrix is a saturated sublattice; the returned
    rows are its Hermite-canonical basis (possibly empty).
    """
    rows = _rows(m)
    if not rows:
        raise ValueError("kernel of an empty matrix is ambiguous")
    h, u = hnf(transpose(rows))
    ker = [u[i] for i in range(len(h)) if all(x == 0 for x in h[i])]
    if not ker:
        return ()
    h2, _ = hnf(ker)
    return tuple(r for r in h2 if any(x != 0 for x in r))


def solve_in_row_space(basis: Sequence[Sequence[int]], v: Sequence[int]):
    """Coefficients c with c*basis = v, or None when v is outside the span.

    `basis` must have linearly independent rows; the solution is then unique
    and returned as a tuple of Fractions.
    """
    d = len(basis)
    if d == 0:
        return () if all(x == 0 for x in v) else None
    n = len(basis[0])
    # solve basis^T c^T = v^T by elimination on the augmented r x (d+1) system
    a = [[Fraction(basis[i][j]) for i in range(d)] + [Fraction(v[j])] for j in range(n)]
    pivots = []
    r = 0
    for c in range(d):
        piv = next((i for i in range(r, n) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(n):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    if len(pivots) != d:
        raise ValueError("basis rows are linearly dependent")
    for i in range(r, n):
        if a[i][d] != 0:
            return None
    sol = [Fraction(0)] * d
    for i, c in enumerate(pivots):
        sol[c] = a[i][d]
    return tuple(sol)


def particular_solution(a: Sequence[Sequence[int]], b: Sequence[int]):
    """Some rational x with a*x = b (columns act), or None when inconsistent.

    Free variables are set to zero, so the output is deterministic.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    rows = [[Fraction(x) for x in a[i]] + [Fraction(b[i])] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for i in range(r, m):
        if rows[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = rows[i][n]
    return tuple(x)


def complete_to_basis(rows: Sequence[Sequence[int]], ambient: int) -> tuple[Mat, Mat, int]:
    """Extend (the saturation of) a row lattice to a basis of Z^ambient.

    Returns (W, V, k): W is an ambient x ambient unimodular matrix whose first
    k rows form a basis of the saturation of the row lattice of `rows`, and
    V = W^-1 expresses coordinates: for any x, x*V are the coordinates of x in
    the basis W.  With no rows, W = V = identity and k = 0.
    """
    rows = _rows(rows)
    if not rows:
        return identity(ambient), identity(ambient), 0
    if len(rows[0]) != ambient:
        raise ValueError("row width does not match ambient dimension")
    s, _, v = snf_with_transforms(rows)
    k = sum(1 for i in range(min(len(s), ambient)) if s[i][i] != 0)
    w = mat_inverse_unimodular(v)
    return w, freeze(v), k


def saturation_basis(rows: Sequence[Sequence[int]], ambient: int) -> Mat:
    """Hermite-canonical basis of the saturation of a row lattice."""
    w, _, k = complete_to_basis(rows, ambient)
    if k == 0:
        return ()
    h, _ = hnf(w[:k])
    return tuple(r for r in h if any(x != 0 for x in r))


def _dedup(vectors: Iterable[Vec]) -> list[Vec]:
    return list(dict.fromkeys(vectors))


def extreme_rays(inequalities: Sequence[Sequence[int]]) -> Mat:
    """Extreme rays of the pointed cone {x : row.x >= 0 for every row}.

    Returns the unique minimal set of primitive integer generators, sorted
    lexicographically.  Raises NonPointedError when the cone contains a line
    (the rows do not have full column rank).

    Incremental double description: seed with a simplicial cone cut out by
    the first full-rank subset of rows, then add the remaining rows one at a
    time, combining adjacent positive/negative ray pairs.
    """
    rows = [tuple(int(x) for x in r) for r in inequalities]
    rows = [r for r in rows if any(x != 0 for x in r)]
    if not rows:
        raise NonPointedError("cone contains a line (no effective constraints)")
    r = len(rows[0])
    if any(len(row) != r for row in rows):
        raise ValueError("ragged inequality matrix")
    if rank(rows) < r:
        raise NonPointedError("cone contains a line")

    base: list[Vec] = []
    rest: list[Vec] = []
    for row in rows:
        if len(base) < r and rank(base + [row]) > len(base):
            base.append(row)
        else:
            rest.append(row)
    inv = mat_inverse_fraction(base)
    rays = [fraction_row_to_primitive([inv[i][j] for i in range(r)]) for j in range(r)]
    processed: list[Vec] = list(base)

    for h in rest:
        vals = {ray: vec_dot(h, ray) for ray in rays}
        pos = [ray for ray in rays if vals[ray] > 0]
        neg = [ray for ray in rays if vals[ray] < 0]
        zero = [ray for ray in rays if vals[ray] == 0]
        if not neg:
            processed.append(h)
            continue
        new = pos + zero
        if pos:
            tight = {
                ray: frozenset(i for i, row in enumerate(processed) if vec_dot(row, ray) == 0)
                for ray in rays
            }
            for u in pos:
                for w in neg:
                    common = tight[u] & tight[w]
                    adjacent = all(
                        not (common <= tight[v]) for v in rays if v != u and v != w
                    )
                    if adjacent:
                        comb = tuple(vals[u] * w[i] - vals[w] * u[i] for i in range(r))
                        new.append(primitive(comb))
        rays = _dedup(new)
        processed.append(h)

    out = []
    for ray in _dedup(rays):
        tight_rows = [row for row in rows if vec_dot(row, ray) == 0]
        if (rank(tight_rows) if tight_rows else 0) == r - 1:
            out.append(ray)
    return tuple(sorted(out))
