"""Canonical subspaces of (F_q)^n and their enumeration.

A Subspace is a value type: its basis is the unique reduced row-echelon
basis (rows are basis vectors), so equality and hashing are structural.
Coordinates with respect to the canonical basis are read off the pivot
columns, which keeps re-basing cheap everywhere else in the library.
"""

import itertools

from . import linalg


class Subspace:
    __slots__ = ("ambient", "basis", "pivots", "_hash")

    def __init__(self, ambient, basis, pivots):
        # callers go through from_rows / trusted constructors
        self.ambient = ambient
        self.basis = basis      # k x n tuple-of-tuples, RREF, no zero rows
        self.pivots = pivots
        self._hash = hash((ambient, basis))

    @property
    def dim(self):
        return len(self.basis)

    def __eq__(self, other):
        return (self.ambient, self.basis) == (other.ambient, other.basis)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return (self.ambient, self.basis) < (other.ambient, other.basis)

    def __repr__(self):
        return "Span%r" % (self.basis,)

    def coords(self, v):
        """Coordinates of v in the canonical basis (v must lie in the space)."""
        return tuple(v[c] for c in self.pivots)

    def contains_vector(self, ctx, v):
        return reduce_against(ctx, v, self.basis) == (0,) * self.ambient

    def contains(self, ctx, other):
        return all(self.contains_vector(ctx, row) for row in other.basis)

    def vectors(self, ctx):
        """All q^dim vectors of the subspace (deterministic order)."""
        out = []
        for coeffs in itertools.product(ctx.elements(), repeat=self.dim):
            out.append(linalg.row_combine(ctx, coeffs, self.basis, self.ambient))
        return out


def from_rows(ctx, rows, ambient):
    rows = [r for r in rows]
    if not rows:
        return Subspace(ambient, (), ())
    R, piv = linalg.rref(ctx, rows)
    return Subspace(ambient, R[: len(piv)], piv)


def zero_subspace(n):
    return Subspace(n, (), ())


def full_subspace(n):
    return Subspace(n, linalg.identity(n), tuple(range(n)))


def subspace_sum(ctx, A, B):
    assert A.ambient == B.ambient
    return from_rows(ctx, A.basis + B.basis, A.ambient)


def reduce_against(ctx, v, rref_rows):
    """Reduce the row vector v against RREF rows; zero iff v is in the span."""
    v = list(v)
    for row in rref_rows:
        piv = next(j for j, x in enumerate(row) if x)
        c = v[piv]
        if c:
            for j, x in enumerate(row):
                if x:
                    v[j] = ctx.sub(v[j], ctx.mul(c, x))
    return tuple(v)


def enumerate_subspaces(ctx, n, k, containing=None):
    """All k-dimensional subspaces of (F_q)^n, optionally those containing a
    given subspace; canonical RREF form, deterministic order.

    Generation is by RREF shape: choose pivot columns, then fill the free
    entries (entries right of a pivot and not in a pivot column).
    """
    if not (0 <= k <= n):
        raise ValueError("need 0 <= k <= n")
    if containing is not None:
        if containing.ambient != n:
            raise ValueError("containing subspace has wrong ambient dimension")
        if containing.dim > k:
            return []
    out = []
    for pivs in itertools.combinations(range(n), k):
        free_pos = [
            (i, j)
            for i in range(k)
            for j in range(pivs[i] + 1, n)
            if j not in pivs
        ]
        for vals in itertools.product(ctx.elements(), repeat=len(free_pos)):
            rows = [[0] * n for _ in range(k)]
            for i, c in enumerate(pivs):
                rows[i][c] = 1
            for (i, j), v in zip(free_pos, vals):
                rows[i][j] = v
            S = Subspace(n, tuple(tuple(r) for r in rows), tuple(pivs))
            if containing is None or S.contains(ctx, containing):
                out.append(S)
    return out


def num_subspaces(q, n, k):
    """Gaussian binomial [n choose k]_q as an integer."""
    if not (0 <= k <= n):
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def enumerate_completions(ctx, basis_rows, k_plus, n, within=None):
    """All ways to extend basis_rows (rank k, rows in (F_q)^n) by k_plus - k
    further vectors keeping the family free; appended vectors range over
    `within` (default: the full space).  Count:
    prod_{i=k}^{k_plus-1} (|within| - q^i)."""
    k = len(basis_rows)
    if not (k <= k_plus <= n):
        raise ValueError("need k <= k_plus <= n")
    if linalg.rank(ctx, basis_rows) != k and k > 0:
        raise ValueError("input rows are not independent")
    pool = within.vectors(ctx) if within is not None else full_subspace(n).vectors(ctx)
    results = []

    def rec(rows, rref_rows):
        if len(rows) == k_plus:
            results.append(tuple(rows))
            return
        for v in pool:
            if reduce_against(ctx, v, rref_rows) != (0,) * n:
                nxt, _ = linalg.rref(ctx, list(rref_rows) + [v])
                rec(rows + [v], tuple(r for r in nxt if any(r)))

    start_rref = tuple(r for r in linalg.rref(ctx, basis_rows)[0] if any(r)) if k else ()
    rec(list(basis_rows), start_rref)
    return results
