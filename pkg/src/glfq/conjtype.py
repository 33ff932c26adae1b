"""Partitions, polypartitions, conjugacy types and class sizes in GL(n, F_q).

A polypartition is a family of integer partitions indexed by monic
irreducible polynomials different from X; it labels a conjugacy class of
GL(n, F_q) through the block-companion (Jordan) matrix J.  This module
computes the type of an invertible matrix, the exact class cardinality,
the diagonal-1 completion, and whole-group censuses used as oracles.
"""

import itertools
from fractions import Fraction

from . import fields, linalg
from .fields import pdeg, poly_parse, poly_str


class Partition:
    """Non-increasing tuple of positive parts."""

    __slots__ = ("parts",)

    def __init__(self, parts):
        parts = tuple(parts)
        assert all(isinstance(x, int) and x > 0 for x in parts)
        assert all(parts[i] >= parts[i + 1] for i in range(len(parts) - 1))
        self.parts = parts

    @property
    def size(self):
        return sum(self.parts)

    @property
    def length(self):
        return len(self.parts)

    def mult(self, k):
        """m_k: the number of parts equal to k."""
        return sum(1 for x in self.parts if x == k)

    def b(self):
        """b(mu) = sum (j-1) mu_j over 1-indexed parts."""
        return sum(j * x for j, x in enumerate(self.parts))

    def conjugate(self):
        if not self.parts:
            return Partition(())
        return Partition(
            tuple(sum(1 for x in self.parts if x > i) for i in range(self.parts[0]))
        )

    def __eq__(self, other):
        return self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __lt__(self, other):
        return self.parts < other.parts

    def __repr__(self):
        return "(%s)" % ",".join(map(str, self.parts))


class Polypartition:
    """Sorted map {monic irreducible != X  ->  non-empty Partition}.

    Keys are ordered by (degree, ascending coefficient vector); this order is
    the canonical one used for Jordan blocks, printing and equality.
    """

    __slots__ = ("ctx", "entries")

    def __init__(self, ctx, entries):
        items = sorted(entries.items() if isinstance(entries, dict) else entries,
                       key=lambda kv: (pdeg(kv[0]), kv[0]))
        for P, mu in items:
            assert fields.is_monic(P) and P != fields.PX
            assert isinstance(mu, Partition) and mu.parts
        assert len({P for P, _ in items}) == len(items)
        self.ctx = ctx
        self.entries = tuple(items)

    @property
    def size(self):
        return sum(pdeg(P) * mu.size for P, mu in self.entries)

    def partition(self, P):
        for Q, mu in self.entries:
            if Q == P:
                return mu
        return Partition(())

    @property
    def k1(self):
        """Number of parts of the (X-1) partition."""
        return self.partition(fields.linear_poly(self.ctx, 1)).length

    @property
    def k11(self):
        """Number of parts equal to 1 in the (X-1) partition."""
        return self.partition(fields.linear_poly(self.ctx, 1)).mult(1)

    def b(self):
        return sum(pdeg(P) * mu.b() for P, mu in self.entries)

    def __eq__(self, other):
        return self.entries == other.entries and self.ctx is other.ctx

    def __hash__(self):
        return hash(self.entries)

    def __lt__(self, other):
        return self.entries < other.entries

    def __repr__(self):
        return format_polypartition(self)


def format_polypartition(mu):
    inner = ";".join(
        "%s:(%s)" % (poly_str(mu.ctx, P), ",".join(map(str, part.parts)))
        for P, part in mu.entries
    )
    return "{%s}" % inner


def parse_polypartition(ctx, s):
    s = s.strip().replace(" ", "")
    if not (s.startswith("{") and s.endswith("}")):
        raise ValueError("polypartition must be wrapped in { }: %r" % s)
    body = s[1:-1]
    if not body:
        return Polypartition(ctx, {})
    entries = {}
    for chunk in body.split(";"):
        poly_s, _, part_s = chunk.rpartition(":")
        if not poly_s or not (part_s.startswith("(") and part_s.endswith(")")):
            raise ValueError("bad polypartition entry: %r" % chunk)
        P = poly_parse(ctx, poly_s)
        if not fields.is_irreducible(ctx, P) or P == fields.PX:
            raise ValueError("label %r is not an admissible irreducible" % poly_s)
        parts = tuple(sorted((int(x) for x in part_s[1:-1].split(",")), reverse=True))
        if P in entries:
            raise ValueError("duplicate label %r" % poly_s)
        entries[P] = Partition(parts)
    return Polypartition(ctx, entries)


def empty_polypartition(ctx):
    return Polypartition(ctx, {})


# ---------------------------------------------------------------------------


def companion(ctx, P):
    """Companion matrix of a monic polynomial: 1's on the subdiagonal, the
    negated ascending coefficients in the last column."""
    d = pdeg(P)
    rows = [[0] * d for _ in range(d)]
    for i in range(1, d):
        rows[i][i - 1] = 1
    for i in range(d):
        rows[i][d - 1] = ctx.neg(P[i])
    return linalg.mat(rows)


def jordan_matrix(mu):
    """Block-diagonal matrix J(mu): for each label P (canonical key order) and
    each part m (decreasing), the companion block of P^m."""
    ctx = mu.ctx
    blocks = []
    for P, part in mu.entries:
        for m in part.parts:
            blocks.append(companion(ctx, fields.ppow(ctx, P, m)))
    n = sum(len(b) for b in blocks)
    rows = [[0] * n for _ in range(n)]
    at = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                rows[at + i][at + j] = x
        at += len(b)
    return linalg.mat(rows)


def type_of(ctx, g):
    """The polypartition labelling the conjugacy class of an invertible g.

    For each irreducible factor P of the characteristic polynomial, the
    dimensions d_j = dim ker P(g)^j grow by deg(P) times the conjugate
    partition of mu(P); transposing the increments recovers mu(P).
    """
    n, m = linalg.shape(g)
    assert n == m
    if n == 0:
        return empty_polypartition(ctx)
    if not linalg.is_invertible(ctx, g):
        raise ValueError("type_of requires an invertible matrix")
    entries = {}
    for P, mult in fields.factor(ctx, linalg.charpoly(ctx, g)):
        d = pdeg(P)
        Pg = linalg.apply_poly(ctx, P, g)
        cols = []
        power = linalg.identity(n)
        prev = 0
        while True:
            power = linalg.mat_mul(ctx, power, Pg)
            dim = n - linalg.rank(ctx, power)
            step = (dim - prev) // d
            assert step * d == dim - prev
            if step == 0:
                break
            cols.append(step)
            prev = dim
            if sum(cols) * d >= mult * d:  # kernels have stabilized
                break
        conj = Partition(tuple(cols))  # conjugate partition of mu(P)
        entries[P] = conj.conjugate()
        assert entries[P].size == mult
    return Polypartition(ctx, entries)


def pochhammer(x, m):
    """(x)_m = (1-x)(1-x^2)...(1-x^m) with exact Fraction arithmetic."""
    assert m >= 0
    x = Fraction(x)
    out = Fraction(1)
    p = Fraction(1)
    for _ in range(m):
        p *= x
        out *= 1 - p
    return out


def class_size(mu, n):
    """Exact cardinality of the conjugacy class C_mu inside GL(n, F_q)."""
    if mu.size != n:
        raise ValueError("polypartition has size %d, expected %d" % (mu.size, n))
    q = mu.ctx.q
    num = 1
    for i in range(n):
        num *= q ** n - q ** i
    den = Fraction(q) ** (mu.size + 2 * mu.b())
    for P, part in mu.entries:
        d = pdeg(P)
        for k in set(part.parts):
            den *= pochhammer(Fraction(1, q ** d), part.mult(k))
    out = Fraction(num) / den
    assert out.denominator == 1
    return int(out)


def gl_order(q, n):
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def complete(mu, n):
    """mu with n - |mu| extra parts 1 added to the (X-1) partition."""
    if mu.size > n:
        raise ValueError("cannot complete size %d to %d" % (mu.size, n))
    extra = n - mu.size
    if extra == 0:
        return mu
    ctx = mu.ctx
    xm1 = fields.linear_poly(ctx, 1)
    entries = dict(mu.entries)
    old = entries.get(xm1, Partition(()))
    entries[xm1] = Partition(tuple(sorted(old.parts + (1,) * extra, reverse=True)))
    return Polypartition(ctx, entries)


def reduce_polypartition(mu):
    """Strip all parts 1 from the (X-1) partition; returns (reduced, stripped)."""
    ctx = mu.ctx
    xm1 = fields.linear_poly(ctx, 1)
    entries = dict(mu.entries)
    old = entries.pop(xm1, Partition(()))
    kept = tuple(x for x in old.parts if x > 1)
    if kept:
        entries[xm1] = Partition(kept)
    return Polypartition(ctx, entries), old.mult(1)


def partitions_of(n):
    """All partitions of n, deterministic order."""
    out = []

    def rec(rest, maxpart, acc):
        if rest == 0:
            out.append(Partition(tuple(acc)))
            return
        for p in range(min(rest, maxpart), 0, -1):
            rec(rest - p, p, acc + [p])

    rec(n, n, [])
    return out


def enumerate_polypartitions(ctx, n):
    """All polypartitions of size exactly n over F_q, canonical order."""
    assert n >= 0
    labels = []
    for d in range(1, n + 1):
        labels.extend(P for P in fields.enumerate_irreducibles(ctx, d) if P != fields.PX)
    out = []

    def rec(i, rest, acc):
        if rest == 0:
            out.append(Polypartition(ctx, dict(acc)))
            return
        if i == len(labels):
            return
        P = labels[i]
        d = pdeg(P)
        rec(i + 1, rest, acc)
        for s in range(d, rest + 1, d):
            for part in partitions_of(s // d):
                rec(i + 1, rest - s, acc + [(P, part)])

    rec(0, n, [])
    return sorted(out, key=lambda m: m.entries)


# ---------------------------------------------------------------------------
# censuses and class orbits (brute-force oracles)
# ---------------------------------------------------------------------------

_GL_CACHE = {}


def enumerate_gl(ctx, n):
    """All invertible n x n matrices over F_q (cached)."""
    key = (ctx.p, ctx.e, n)
    if key in _GL_CACHE:
        return _GL_CACHE[key]
    out = []
    vecs = list(itertools.product(ctx.elements(), repeat=n))

    def rec(rows, rref_rows):
        if len(rows) == n:
            out.append(tuple(rows))
            return
        from .subspaces import reduce_against

        for v in vecs:
            if reduce_against(ctx, v, rref_rows) != (0,) * n:
                nxt, _ = linalg.rref(ctx, list(rref_rows) + [v])
                rec(rows + [v], tuple(r for r in nxt if any(r)))

    rec([], ())
    _GL_CACHE[key] = out
    return out


_CENSUS_CACHE = {}


def census(ctx, n):
    """Bucket the whole of GL(n, F_q) by conjugacy type.

    Returns {polypartition: count}; cached by (p, e, n).
    """
    key = (ctx.p, ctx.e, n)
    if key in _CENSUS_CACHE:
        return _CENSUS_CACHE[key]
    buckets = {}
    for g in enumerate_gl(ctx, n):
        t = type_of(ctx, g)
        buckets[t] = buckets.get(t, 0) + 1
    _CENSUS_CACHE[key] = buckets
    return buckets


def gl_generators(ctx, n):
    """A generating set of GL(n, F_q): all transvections I + E_ij (i != j)
    plus diag(c, 1, ..., 1) for a generator c of the multiplicative group.

    Transvections generate SL(n, F_q); the diagonal matrix supplies the
    missing determinants.  Deliberately redundant for robustness.
    """
    if n == 0:
        return []
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                rows = [list(r) for r in linalg.identity(n)]
                rows[i][j] = 1
                gens.append(linalg.mat(rows))
    c = _multiplicative_generator(ctx)
    if c != 1:
        rows = [list(r) for r in linalg.identity(n)]
        rows[0][0] = c
        gens.append(linalg.mat(rows))
    return gens


def _multiplicative_generator(ctx):
    q = ctx.q
    for c in range(1, q):
        seen, x = set(), 1
        while True:
            x = ctx.mul(x, c)
            if x in seen:
                break
            seen.add(x)
        if len(seen) == q - 1:
            return c
    raise AssertionError("no multiplicative generator found")


_ORBIT_CACHE = {}


def class_orbit(mu, n):
    """All elements of the conjugacy class C_{mu^n}, by BFS under conjugation
    by standard generators starting from the Jordan representative."""
    key = (mu.ctx.p, mu.ctx.e, mu.entries, n)
    if key in _ORBIT_CACHE:
        return _ORBIT_CACHE[key]
    ctx = mu.ctx
    start = jordan_matrix(complete(mu, n))
    gens = [(g, linalg.inverse(ctx, g)) for g in gl_generators(ctx, n)]
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for g, ginv in gens:
                y = linalg.mat_mul(ctx, linalg.mat_mul(ctx, g, x), ginv)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    out = sorted(seen)
    assert len(out) == class_size(complete(mu, n), n)
    _ORBIT_CACHE[key] = out
    return out
