"""Exact linear algebra over the fields of a tower.

Matrices are lists of rows, rows are lists of field elements (ints).  Every
function takes the field explicitly, so the same code serves F_q and F_{q^n}.
Row spaces are compared through their reduced row echelon forms.
"""

from __future__ import annotations

from itertools import combinations, product

from .errors import AmbientMismatch, InputError
from .gf import from_digits, to_digits


def rref_pivots(rows, F, ncols=None):
    """Reduced row echelon form and pivot columns; zero rows are dropped."""
    M = [list(r) for r in rows]
    if ncols is None:
        ncols = len(M[0]) if M else 0
    pivots = []
    top = 0
    for col in range(ncols):
        if top == len(M):
            break
        piv = None
        for i in range(top, len(M)):
            if M[i][col]:
                piv = i
                break
        if piv is None:
            continue
        M[top], M[piv] = M[piv], M[top]
        row = M[top]
        if row[col] != 1:
            c = F.inv(row[col])
            row = [F.mul(c, x) for x in row]
            M[top] = row
        for i in range(len(M)):
            if i != top and M[i][col]:
                f = M[i][col]
                Mi = M[i]
                M[i] = [F.sub(a, F.mul(f, b)) if b else a for a, b in zip(Mi, row)]
        pivots.append(col)
        top += 1
    return M[:top], pivots


def rref(rows, F, ncols=None):
    return rref_pivots(rows, F, ncols)[0]


def rank(rows, F):
    return len(rref_pivots(rows, F)[1])


def kernel(rows, F, ncols=None):
    """Basis (in rref) of the right null space ``{x : M x^T = 0}``."""
    if ncols is None:
        if not rows:
            raise InputError("ncols is required for an empty matrix")
        ncols = len(rows[0])
    R, pivots = rref_pivots(rows, F, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(R[i][f])
        basis.append(v)
    return rref(basis, F, ncols)


def transpose(M, ncols=None):
    if not M:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*M)]


def left_kernel(rows, F, nrows=None):
    """Basis of ``{c : c M = 0}``."""
    ncols = len(rows[0]) if rows else 0
    T = transpose(rows, ncols)
    return kernel(T, F, len(rows) if nrows is None else nrows)


def dot(u, v, F):
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc = F.add(acc, F.mul(a, b))
    return acc


def vec_mat(v, M, F):
    ncols = len(M[0]) if M else 0
    out = [0] * ncols
    for a, row in zip(v, M):
        if a:
            for j, b in enumerate(row):
                if b:
                    out[j] = F.add(out[j], F.mul(a, b))
    return out


def mat_mul(A, B, F):
    return [vec_mat(row, B, F) for row in A]


def identity(k):
    return [[int(i == j) for j in range(k)] for i in range(k)]


def inverse(M, F):
    k = len(M)
    aug = [list(row) + e for row, e in zip(M, identity(k))]
    R, pivots = rref_pivots(aug, F, 2 * k)
    if pivots[:k] != list(range(k)) or len(R) < k:
        raise InputError("matrix is singular")
    return [row[k:] for row in R]


def solve_in_span(basis, v, F):
    """Coefficients c with ``c @ basis == v``, or None when v is not spanned."""
    k = len(basis)
    if k == 0:
        return [] if not any(v) else None
    T = transpose(basis)
    aug = [T[j] + [v[j]] for j in range(len(v))]
    R, pivots = rref_pivots(aug, F, k + 1)
    if k in pivots:
        return None
    c = [0] * k
    for i, pc in enumerate(pivots):
        c[pc] = R[i][k]
    return c


# -- row spaces ---------------------------------------------------------------


def _check_ambient(A, B):
    if A and B and len(A[0]) != len(B[0]):
        raise AmbientMismatch("row spaces live in different ambient spaces")


def row_sum(A, B, F, ncols=None):
    _check_ambient(A, B)
    return rref(list(A) + list(B), F, ncols)


def row_intersect(A, B, F, ncols=None):
    """Intersection of two row spaces through the left kernel of ``[A; B]``."""
    _check_ambient(A, B)
    A = rref(A, F, ncols)
    B = rref(B, F, ncols)
    if not A or not B:
        return []
    stacked = A + B
    K = left_kernel(stacked, F, len(stacked))
    gens = [vec_mat(c[: len(A)], A, F) for c in K]
    return rref(gens, F, len(A[0]))


def row_contains(A, B, F, ncols=None):
    """Whether the row space of ``B`` lies inside that of ``A``."""
    _check_ambient(A, B)
    return len(rref(list(A) + list(B), F, ncols)) == len(rref(A, F, ncols))


def subspace_ops(op, A, B, F, ncols=None):
    if op == "sum":
        return row_sum(A, B, F, ncols)
    if op == "intersect":
        return row_intersect(A, B, F, ncols)
    if op == "contains":
        return row_contains(A, B, F, ncols)
    raise InputError(f"unknown subspace operation {op!r}")


# -- flattening F_{q^n}^r -> F_q^{rn} ----------------------------------------


def flatten(v, tower):
    """Coordinates over F_q in the power basis, blocked per ambient coordinate."""
    out = []
    for x in v:
        out.extend(to_digits(x, tower.q, tower.n))
    return out


def unflatten(w, tower):
    n = tower.n
    if len(w) % n:
        raise InputError("length is not a multiple of n")
    return [from_digits(w[i : i + n], tower.q) for i in range(0, len(w), n)]


def pack(v, Q):
    """Vector over a field of order Q as one base-Q integer (first entry lowest)."""
    x = 0
    for a in reversed(v):
        x = x * Q + a
    return x


def unpack(x, Q, length):
    return to_digits(x, Q, length)


def rank_packed(vectors, F, width):
    """Rank of vectors over ``F`` given as packed base-|F| integers."""
    if F.order == 2:
        basis = {}
        r = 0
        for v in vectors:
            while v:
                top = v.bit_length()
                b = basis.get(top)
                if b is None:
                    basis[top] = v
                    r += 1
                    break
                v ^= b
        return r
    return rank([to_digits(v, F.order, width) for v in vectors], F)


# -- enumeration of subspaces by rref pivot pattern ----------------------------


def gaussian_binomial(n, k, q):
    """Number of k-dimensional subspaces of F_q^n (integer q)."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _pattern_free_slots(pivots, r):
    pset = set(pivots)
    return [(i, c) for i, p in enumerate(pivots) for c in range(p + 1, r) if c not in pset]


def iter_rref_subspaces(F, r, h, start=0, stop=None):
    """Yield ``(index, rows)`` for the h-dimensional subspaces of F^r.

    Subspaces are listed by pivot pattern (lexicographic combinations), then by
    the free entries read as base-|F| digits with the last free slot most
    significant.  ``start``/``stop`` select a contiguous index window without
    generating the skipped subspaces.
    """
    Q = F.order
    index = 0
    for pivots in combinations(range(r), h):
        slots = _pattern_free_slots(pivots, r)
        count = Q ** len(slots)
        if stop is not None and index >= stop:
            return
        if index + count <= start:
            index += count
            continue
        lo = max(start - index, 0)
        hi = count if stop is None else min(count, stop - index)
        base = [[0] * r for _ in range(h)]
        for i, p in enumerate(pivots):
            base[i][p] = 1
        for off in range(lo, hi):
            rows = [row[:] for row in base]
            x = off
            for i, c in slots:
                x, d = divmod(x, Q)
                rows[i][c] = d
            yield index + off, rows
        index += count


def rref_annihilator(rows, pivots, F, r):
    """Rows spanning ``{a : a . w = 0 for all w in span(rows)}`` for an rref basis."""
    pset = set(pivots)
    out = []
    for f in range(r):
        if f in pset:
            continue
        a = [0] * r
        a[f] = 1
        for i, p in enumerate(pivots):
            if rows[i][f]:
                a[p] = F.neg(rows[i][f])
        out.append(a)
    return out


def all_vectors(F, length):
    return product(range(F.order), repeat=length)
