"""Partial isomorphisms of (F_q)^n and their averaged-extension algebra.

A partial isomorphism is a pair of isomorphisms (g1: V -> W, g2: W -> V)
between equal-dimension subspaces of (F_q)^n.  Values are canonical: the
matrices are always expressed with respect to the RREF bases of V and W,
so equality and hashing are componentwise.  Composition is written
left-to-right (gh means "apply g, then h"), hence mat(gh) = mat(h) mat(g)
and the composite automorphism of V is mat(g2) mat(g1).

The product of two basis elements averages over compatible extensions to
the common middle space (see trivial_extensions_fixed_right for the two
extension notions and why the product uses the larger one); the uniform
averages over the type orbits span a commutative subalgebra whose
structure constants feed the center module.  All coefficients are exact
Fractions.
"""

import itertools
from fractions import Fraction

from . import linalg, subspaces
from .conjtype import (
    Partition,
    Polypartition,
    class_orbit,
    class_size,
    complete,
    empty_polypartition,
    enumerate_gl,
    gl_order,
    jordan_matrix,
    pochhammer,
    type_of,
)
from .fields import linear_poly
from .ranklaw import dim_sum_law


class PartialIso:
    """(V | g1 <-> g2 | W): g1 maps V to W, g2 maps W back to V.

    g1 and g2 are k x k matrices with respect to the canonical (RREF-row)
    bases of V and W; they act on coordinate columns.
    """

    __slots__ = ("V", "W", "g1", "g2", "_hash")

    def __init__(self, V, W, g1, g2):
        self.V = V
        self.W = W
        self.g1 = g1
        self.g2 = g2
        self._hash = hash((V.basis, W.basis, g1, g2))

    @property
    def n(self):
        return self.V.ambient

    @property
    def dim(self):
        return self.V.dim

    def composite(self, ctx):
        """Matrix of the automorphism g1g2 of V (apply g1, then g2)."""
        return linalg.mat_mul(ctx, self.g2, self.g1)

    def fixed_dim(self, ctx):
        """k1 = dim Fix(g1g2) = dim ker(composite - I)."""
        k = self.dim
        delta = linalg.mat_sub(ctx, self.composite(ctx), linalg.identity(k))
        return k - linalg.rank(ctx, delta)

    def __eq__(self, other):
        return (
            self.V == other.V
            and self.W == other.W
            and self.g1 == other.g1
            and self.g2 == other.g2
        )

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return (self.V.basis, self.W.basis, self.g1, self.g2) < (
            other.V.basis,
            other.W.basis,
            other.g1,
            other.g2,
        )

    def __repr__(self):
        return "[%r | %r | %r | %r]" % (self.V.basis, self.g1, self.g2, self.W.basis)


def empty_piso(n):
    z = subspaces.zero_subspace(n)
    return PartialIso(z, z, (), ())


def rev(x):
    """The reversed partial isomorphism (W | g2 <-> g1 | V)."""
    return PartialIso(x.W, x.V, x.g2, x.g1)


def piso_type(ctx, x):
    """Type (polypartition of size dim) of the composed automorphism."""
    return type_of(ctx, x.composite(ctx))


def apply_fwd(ctx, x, v):
    """Image under g1 of an ambient vector v of V, as an ambient vector."""
    coords = linalg.mat_vec(ctx, x.g1, x.V.coords(v))
    return linalg.row_combine(ctx, coords, x.W.basis, x.n)


def apply_bwd(ctx, x, w):
    """Image under g2 of an ambient vector w of W, as an ambient vector."""
    coords = linalg.mat_vec(ctx, x.g2, x.W.coords(w))
    return linalg.row_combine(ctx, coords, x.V.basis, x.n)


def canonical_piso(ctx, E, F, A, B):
    """Canonical PartialIso from arbitrary bases.

    E and F are row bases of the two spaces (not necessarily RREF), A is the
    matrix of g1 with respect to (E, F) and B the matrix of g2 with respect
    to (F, E), both acting on coordinate columns.  Rewrites everything in
    the RREF bases.
    """
    k = len(E)
    n = len(E[0]) if k else 0
    if k == 0:
        return empty_piso(n)
    RV, pivV, D = linalg.rref(ctx, E, transform=True)
    RW, pivW, C = linalg.rref(ctx, F, transform=True)
    V = subspaces.Subspace(n, RV, pivV)
    W = subspaces.Subspace(n, RW, pivW)
    # canonical basis vector u_i = row i of D E maps to row i of (D A^T) F;
    # its W-coordinates sit in the pivot columns, and transposition turns
    # rows of images into columns of the matrix.
    img1 = linalg.mat_mul(ctx, linalg.mat_mul(ctx, D, linalg.transpose(A)), F)
    g1 = tuple(tuple(img1[i][c] for i in range(k)) for c in pivW)
    img2 = linalg.mat_mul(ctx, linalg.mat_mul(ctx, C, linalg.transpose(B)), E)
    g2 = tuple(tuple(img2[i][c] for i in range(k)) for c in pivV)
    return PartialIso(V, W, g1, g2)


# ---------------------------------------------------------------------------
# trivial extensions
# ---------------------------------------------------------------------------


def count_E(q, n, k_plus, k, k1):
    """Number of strict trivial extensions with the right space fixed
    (dimension k -> k_plus inside (F_q)^n) and the left space free.

    With k1 = 0 this also counts the compatible extensions of the same
    shape (the two notions coincide exactly when the composite has no
    fixed vector; see trivial_extensions_fixed_right)."""
    if not (0 <= k1 <= k <= k_plus <= n):
        raise ValueError("need 0 <= k1 <= k <= k_plus <= n")
    out = q ** ((k - k1) * (k_plus - k))
    for i in range(k, k_plus):
        out *= q ** n - q ** i
    return out


def count_F(q, k_plus, k, k1):
    """Number of strict trivial extensions with both spaces fixed (k1 = 0
    again gives the compatible-extension count)."""
    if not (0 <= k1 <= k <= k_plus):
        raise ValueError("need 0 <= k1 <= k <= k_plus")
    out = q ** ((k - k1) * (k_plus - k))
    for i in range(k, k_plus):
        out *= q ** k_plus - q ** i
    return out


def _extend_basis(ctx, rows, sup):
    """One fixed completion of `rows` into a basis of the subspace `sup`."""
    out = list(rows)
    rref_rows = rows
    n = sup.ambient
    for v in sup.basis:
        if len(out) == sup.dim:
            break
        if subspaces.reduce_against(ctx, v, rref_rows) != (0,) * n:
            out.append(v)
            R, _ = linalg.rref(ctx, out)
            rref_rows = tuple(r for r in R if any(r))
    assert len(out) == sup.dim
    return tuple(out)


def _column_space_vectors(ctx, M):
    """All vectors of the column space of the square matrix M, as tuples."""
    k = len(M)
    basis = tuple(r for r in linalg.rref(ctx, linalg.transpose(M))[0] if any(r))
    out = []
    for coeffs in itertools.product(ctx.elements(), repeat=len(basis)):
        out.append(linalg.row_combine(ctx, coeffs, basis, k))
    return out


def trivial_extensions_fixed_right(ctx, x, W_plus, left_inside=None, strict=True):
    """Extensions of x with right space W_plus; the left space is free (or
    constrained inside `left_inside`).

    Both variants are parameterized by a completion of the g1-preimage
    basis together with a matrix P: for the basis E of V defined by
    e_i = g1^{-1}(f_i), the extension has mat(g1+) = identity and
    mat(g2+) = [[G, P], [0, I]] with G the matrix of g1g2 in basis E.

    strict=True keeps only P with columns in the column space of G - I.
    These are the strict trivial extensions: the composite type gains only
    parts 1 on the (X-1)-partition, the extension splits as a direct sum
    g1 (+) psi, g2 (+) psi^{-1}, and the count is E_q(n, k+, k, k1).

    strict=False allows arbitrary P.  These are the compatible extensions:
    exactly those whose induced quotient maps V+/V <-> W+/W are mutually
    inverse, with count E_q(n, k+, k, 0).  The two notions coincide iff
    G - I is invertible (k1 = 0); otherwise the compatible set is strictly
    larger (e.g. extending the identity of a line to the plane admits
    unipotent composites, which are compatible but not strict).

    The algebra product averages over compatible extensions: unlike the
    strict set, they are stable under composition of extensions, and the
    resulting product is associative, whereas averaging over strict
    extensions is not associative once q > 2 (colinear counterexamples
    exist in dimension 2).
    """
    n, k = x.n, x.dim
    k_plus = W_plus.dim
    if not W_plus.contains(ctx, x.W):
        raise ValueError("W_plus must contain the right space")
    if k_plus == k:
        return [x]
    F_plus = _extend_basis(ctx, x.W.basis, W_plus)
    if k:
        E = linalg.mat_mul(
            ctx, linalg.transpose(linalg.inverse(ctx, x.g1)), x.V.basis
        )
        G = linalg.mat_mul(ctx, x.g1, x.g2)
        if strict:
            cols = _column_space_vectors(
                ctx, linalg.mat_sub(ctx, G, linalg.identity(k))
            )
        else:
            cols = [v for v in itertools.product(ctx.elements(), repeat=k)]
    else:
        E, G, cols = (), (), [()]
    completions = subspaces.enumerate_completions(ctx, E, k_plus, n, within=left_inside)
    ident = linalg.identity(k_plus)
    lower = tuple((0,) * k + ident[i][k:] for i in range(k, k_plus))
    out = []
    for E_plus in completions:
        for choice in itertools.product(cols, repeat=k_plus - k):
            upper = tuple(G[i] + tuple(c[i] for c in choice) for i in range(k))
            out.append(canonical_piso(ctx, E_plus, F_plus, ident, upper + lower))
    return out


def trivial_extensions_fixed_left(ctx, x, V_plus, strict=True):
    """Extensions of x with left space V_plus, right space free (same two
    variants as trivial_extensions_fixed_right)."""
    return [
        rev(y)
        for y in trivial_extensions_fixed_right(ctx, rev(x), V_plus, strict=strict)
    ]


def trivial_extensions_both_fixed(ctx, x, V_plus, W_plus, strict=True):
    """Extensions of x with both enlarged spaces fixed (same two variants
    as trivial_extensions_fixed_right)."""
    if V_plus.dim != W_plus.dim:
        raise ValueError("extension spaces must have equal dimension")
    if not V_plus.contains(ctx, x.V):
        raise ValueError("V_plus must contain the left space")
    return trivial_extensions_fixed_right(
        ctx, x, W_plus, left_inside=V_plus, strict=strict
    )


def is_extension(ctx, small, big):
    """True iff big extends small: larger spaces, restrictions agree."""
    if not (big.V.contains(ctx, small.V) and big.W.contains(ctx, small.W)):
        return False
    for v in small.V.basis:
        if apply_fwd(ctx, big, v) != apply_fwd(ctx, small, v):
            return False
    for w in small.W.basis:
        if apply_bwd(ctx, big, w) != apply_bwd(ctx, small, w):
            return False
    return True


def is_trivial_extension(ctx, small, big, method="type"):
    """Extension predicates.  method="type" tests strict triviality (the
    composite type gains only parts 1 on the (X-1)-partition); method
    ="quotient" tests compatibility (the induced quotient maps are
    mutually inverse).  The two are NOT equivalent: strict implies
    compatible, and the converse fails whenever the composite of `small`
    has a fixed vector."""
    if not is_extension(ctx, small, big):
        return False
    if method == "type":
        extra = big.dim - small.dim
        t = piso_type(ctx, small)
        xm1 = linear_poly(ctx, 1)
        entries = dict(t.entries)
        old = entries.get(xm1, Partition(()))
        if extra:
            entries[xm1] = Partition(
                tuple(sorted(old.parts + (1,) * extra, reverse=True))
            )
        return piso_type(ctx, big) == Polypartition(ctx, entries)
    if method == "quotient":
        n = big.n
        redV = lambda v: subspaces.reduce_against(ctx, v, small.V.basis)
        redW = lambda w: subspaces.reduce_against(ctx, w, small.W.basis)
        for u in big.V.basis:
            back = apply_bwd(ctx, big, apply_fwd(ctx, big, u))
            if redV(back) != redV(u):
                return False
        for w in big.W.basis:
            forth = apply_fwd(ctx, big, apply_bwd(ctx, big, w))
            if redW(forth) != redW(w):
                return False
        return True
    raise ValueError("unknown method %r" % method)


# ---------------------------------------------------------------------------
# the algebra A(n, F_q)
# ---------------------------------------------------------------------------


class AlgElem:
    """Sparse rational linear combination of partial isomorphisms."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = {}
        if terms:
            for t, c in terms.items():
                if c:
                    self.terms[t] = Fraction(c)

    def __eq__(self, other):
        return self.n == other.n and self.terms == other.terms

    def __add__(self, other):
        assert self.n == other.n
        out = dict(self.terms)
        for t, c in other.terms.items():
            s = out.get(t, 0) + c
            if s:
                out[t] = s
            elif t in out:
                del out[t]
        return AlgElem(self.n, out)

    def scale(self, c):
        c = Fraction(c)
        return AlgElem(self.n, {t: c * x for t, x in self.terms.items()})

    def mass(self):
        return sum(self.terms.values(), Fraction(0))

    def degree(self):
        return max((t.dim for t in self.terms), default=0)

    def __repr__(self):
        items = sorted(self.terms.items(), key=lambda tc: tc[0])
        return " + ".join("%s*%r" % (c, t) for t, c in items) or "0"


def unit_elem(n):
    return AlgElem(n, {empty_piso(n): Fraction(1)})


def basis_elem(x):
    return AlgElem(x.n, {x: Fraction(1)})


_PRODUCT_CACHE = {}


def clear_product_cache():
    _PRODUCT_CACHE.clear()


def _basis_product(ctx, a, b, cache=True):
    """Product of two basis elements, as a dict piso -> Fraction (mass 1).

    Averages over compatible (not strict) extensions to the middle space;
    this is what makes the product associative."""
    key = (ctx.p, ctx.e, a, b)
    hit = _PRODUCT_CACHE.get(key)
    if hit is not None:
        return hit
    if len(_PRODUCT_CACHE) >= 200000:
        _PRODUCT_CACHE.clear()
    M = subspaces.subspace_sum(ctx, a.W, b.V)
    right = trivial_extensions_fixed_right(ctx, a, M, strict=False)
    left = trivial_extensions_fixed_left(ctx, b, M, strict=False)
    w = Fraction(1, len(right) * len(left))
    out = {}
    mat_mul = linalg.mat_mul
    for ea in right:
        Va, a1, a2 = ea.V, ea.g1, ea.g2
        for eb in left:
            t = PartialIso(
                Va, eb.W, mat_mul(ctx, eb.g1, a1), mat_mul(ctx, a2, eb.g2)
            )
            out[t] = out.get(t, 0) + w
    if cache:
        _PRODUCT_CACHE[key] = out
    return out


def product(ctx, x, y):
    """The associative averaged-extension product on A(n, F_q)."""
    if x.n != y.n:
        raise ValueError("ambient dimension mismatch")
    out = {}
    for a, ca in x.terms.items():
        for b, cb in y.terms.items():
            c = ca * cb
            for t, w in _basis_product(ctx, a, b).items():
                out[t] = out.get(t, 0) + c * w
    return AlgElem(x.n, out)


def op_R_to(ctx, x, W_plus, strict=False):
    """R_W^{W+}: per-term uniform average of right-fixed trivial extensions.

    The default (strict=False) averages over compatible extensions,
    consistently with the product: R_W^{W+}(x) = x * id_{W+}.  With
    strict=True it averages over strict extensions instead; the operator
    calculus (nested restriction, composition, L/R commutation) holds for
    the strict operators and fails for the compatible ones (smallest
    counterexample: the empty partial isomorphism extended through a line
    at n = 2, q = 2)."""
    out = {}
    for t, c in x.terms.items():
        exts = trivial_extensions_fixed_right(ctx, t, W_plus, strict=strict)
        w = c / len(exts)
        for e in exts:
            out[e] = out.get(e, 0) + w
    return AlgElem(x.n, out)


def op_L_to(ctx, x, V_plus, strict=False):
    """L_V^{V+}: per-term uniform average of left-fixed trivial extensions
    (same two variants as op_R_to; strict=False matches the product:
    L_V^{V+}(x) = id_{V+} * x)."""
    out = {}
    for t, c in x.terms.items():
        exts = trivial_extensions_fixed_left(ctx, t, V_plus, strict=strict)
        w = c / len(exts)
        for e in exts:
            out[e] = out.get(e, 0) + w
    return AlgElem(x.n, out)


def op_R(ctx, X, x, strict=False):
    """Generalized extension operator R^X: enlarge each right space to W+X."""
    out = AlgElem(x.n)
    for t, c in x.terms.items():
        target = subspaces.subspace_sum(ctx, t.W, X)
        out = out + op_R_to(ctx, AlgElem(x.n, {t: c}), target, strict=strict)
    return out


def op_L(ctx, X, x, strict=False):
    """Generalized extension operator L^X: enlarge each left space to V+X."""
    out = AlgElem(x.n)
    for t, c in x.terms.items():
        target = subspaces.subspace_sum(ctx, t.V, X)
        out = out + op_L_to(ctx, AlgElem(x.n, {t: c}), target, strict=strict)
    return out


def op_LR(ctx, V_plus, W_plus, x, strict=False):
    """LR: per-term uniform average of both-fixed trivial extensions."""
    out = {}
    for t, c in x.terms.items():
        exts = trivial_extensions_both_fixed(ctx, t, V_plus, W_plus, strict=strict)
        w = c / len(exts)
        for e in exts:
            out[e] = out.get(e, 0) + w
    return AlgElem(x.n, out)


# ---------------------------------------------------------------------------
# projection to the pair group algebra
# ---------------------------------------------------------------------------


class PairAlgElem:
    """Sparse element of C[GL(n) x GL(n)^opp], keyed by matrix pairs."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = {}
        if terms:
            for t, c in terms.items():
                if c:
                    self.terms[t] = Fraction(c)

    def __eq__(self, other):
        return self.n == other.n and self.terms == other.terms

    def mul(self, ctx, other):
        """(g1, g2)(h1, h2) = (g1h1, h2g2), matrices composing in reverse."""
        out = {}
        for (a1, a2), ca in self.terms.items():
            for (b1, b2), cb in other.terms.items():
                key = (linalg.mat_mul(ctx, b1, a1), linalg.mat_mul(ctx, a2, b2))
                s = out.get(key, 0) + ca * cb
                out[key] = s
        return PairAlgElem(self.n, out)

    def __repr__(self):
        return "PairAlgElem(%d, %d terms)" % (self.n, len(self.terms))


def pi_n(ctx, x):
    """Full-extension projection A(n) -> C[GL(n) x GL(n)^opp]."""
    full = subspaces.full_subspace(x.n)
    lifted = op_R_to(ctx, x, full)
    out = {}
    for t, c in lifted.terms.items():
        key = (t.g1, t.g2)
        out[key] = out.get(key, 0) + c
    return PairAlgElem(x.n, out)


# ---------------------------------------------------------------------------
# the two-sided group action
# ---------------------------------------------------------------------------


def act_piso(ctx, k, x, l):
    """k . x . l = (k^{-1}(V) | k g1 l^{-1} <-> l g2 k^{-1} | l^{-1}(W))."""
    if x.dim == 0:
        return x
    kinv = linalg.inverse(ctx, k)
    linv = linalg.inverse(ctx, l)
    E = linalg.mat_mul(ctx, x.V.basis, linalg.transpose(kinv))
    F = linalg.mat_mul(ctx, x.W.basis, linalg.transpose(linv))
    return canonical_piso(ctx, E, F, x.g1, x.g2)


def act_left(ctx, k, x):
    return act_piso(ctx, k, x, linalg.identity(x.n))


def act_right(ctx, x, l):
    return act_piso(ctx, linalg.identity(x.n), x, l)


def act_elem(ctx, k, x, l):
    out = {}
    for t, c in x.terms.items():
        u = act_piso(ctx, k, t, l)
        out[u] = out.get(u, 0) + c
    return AlgElem(x.n, out)


# ---------------------------------------------------------------------------
# type orbits and invariant elements
# ---------------------------------------------------------------------------

_ORBIT_CACHE = {}
_ALL_CACHE = {}


def num_free_families(q, n, k):
    """(q^n - 1)(q^n - q) ... (q^n - q^{k-1})."""
    out = 1
    for i in range(k):
        out *= q ** n - q ** i
    return out


def card_iso(q, n):
    """Cardinality of I(n, F_q): sum over degrees of squared family counts."""
    return sum(num_free_families(q, n, k) ** 2 for k in range(n + 1))


def all_pisos(ctx, n):
    """The full basis I(n, F_q), deterministic order, cached."""
    key = (ctx.p, ctx.e, n)
    if key in _ALL_CACHE:
        return _ALL_CACHE[key]
    out = [empty_piso(n)]
    for k in range(1, n + 1):
        subs = subspaces.enumerate_subspaces(ctx, n, k)
        gl = enumerate_gl(ctx, k)
        for V in subs:
            for W in subs:
                for g1 in gl:
                    for g2 in gl:
                        out.append(PartialIso(V, W, g1, g2))
    assert len(out) == card_iso(ctx.q, n)
    _ALL_CACHE[key] = out
    return out


def orbit_size(mu, n):
    """Cardinality of the type orbit of mu inside I(n, F_q)."""
    k = mu.size
    q = mu.ctx.q
    return (
        subspaces.num_subspaces(q, n, k) ** 2
        * gl_order(q, k)
        * class_size(mu, k)
    ) if k else 1


def orbit_of_type(mu, n):
    """All partial isomorphisms of type mu in (F_q)^n (the GL x GL orbit)."""
    k = mu.size
    if k > n:
        raise ValueError("type size exceeds ambient dimension")
    ctx = mu.ctx
    key = (ctx.p, ctx.e, mu.entries, n)
    if key in _ORBIT_CACHE:
        return _ORBIT_CACHE[key]
    if k == 0:
        out = [empty_piso(n)]
    else:
        subs = subspaces.enumerate_subspaces(ctx, n, k)
        cls = class_orbit(mu, k)
        out = []
        for g1 in enumerate_gl(ctx, k):
            g1inv = linalg.inverse(ctx, g1)
            # g2 = z g1^{-1} makes the composite g2 g1 equal to z
            g2s = [linalg.mat_mul(ctx, z, g1inv) for z in cls]
            for V in subs:
                for W in subs:
                    for g2 in g2s:
                        out.append(PartialIso(V, W, g1, g2))
    assert len(out) == orbit_size(mu, n)
    _ORBIT_CACHE[key] = out
    return out


def invariant_elem(ctx, mu, n, normalization="tilde"):
    """The invariant class of type mu: "tilde" averages the orbit to mass 1,
    "hat" divides the plain orbit sum A by the square root of its cardinality
    (= the free-family count), "raw" is the plain sum A itself."""
    orbit = orbit_of_type(mu, n)
    if normalization == "tilde":
        c = Fraction(1, len(orbit))
    elif normalization == "hat":
        c = Fraction(num_free_families(ctx.q, n, mu.size), len(orbit))
    elif normalization == "raw":
        c = Fraction(num_free_families(ctx.q, n, mu.size) ** 2, len(orbit))
    else:
        raise ValueError("unknown normalization %r" % normalization)
    return AlgElem(n, {x: c for x in orbit})


def type_census(ctx, x, check_orbits=True):
    """Expand an invariant element in the tilde basis: returns {type: c} with
    x = sum c_mu Atilde_mu.  With check_orbits, asserts that the coefficient
    is constant on each type orbit and that whole orbits are present."""
    buckets = {}
    for t, c in x.terms.items():
        buckets.setdefault(piso_type(ctx, t), []).append(c)
    out = {}
    for mu, coeffs in buckets.items():
        if check_orbits:
            if len(set(coeffs)) != 1:
                raise AssertionError("coefficient not constant on orbit %r" % mu)
            if len(coeffs) != orbit_size(mu, x.n):
                raise AssertionError("incomplete orbit %r" % mu)
        out[mu] = sum(coeffs, Fraction(0))
    return out


def _invariant_product_orbits(ctx, lam, mu, n):
    O1 = orbit_of_type(lam, n)
    O2 = orbit_of_type(mu, n)
    w = Fraction(1, len(O1) * len(O2))
    acc = {}
    for a in O1:
        for b in O2:
            for t, c in _basis_product(ctx, a, b, cache=False).items():
                acc[t] = acc.get(t, 0) + c
    elem = AlgElem(n, {t: w * c for t, c in acc.items()})
    return type_census(ctx, elem, check_orbits=True)


def _supported_automorphisms(ctx, nu, S, m, fix_class=False):
    """All N in GL(m, F_q) that act as the identity on the quotient by the
    subspace S and whose restriction to S has type nu.  These are exactly
    the middle-space composites of the compatible extensions of a partial
    isomorphism of type nu whose relevant space is S.  With fix_class, the
    restriction is frozen to the Jordan representative (valid inside an
    average that is invariant under conjugation fixing S)."""
    s = S.dim
    assert nu.size == s
    comp_rows = []
    rref = S.basis
    for v in linalg.identity(m):
        if subspaces.reduce_against(ctx, v, rref) != (0,) * m:
            comp_rows.append(v)
            R, _ = linalg.rref(ctx, list(rref) + comp_rows)
            rref = tuple(r for r in R if any(r))
    assert len(comp_rows) == m - s
    reps = [jordan_matrix(nu)] if fix_class else class_orbit(nu, s)
    out = []
    svecs = S.vectors(ctx)
    rows_basis = tuple(S.basis) + tuple(comp_rows)
    Binv = linalg.inverse(ctx, linalg.transpose(rows_basis))
    for u in reps:
        # N on S: u in the canonical basis of S; N on the complement basis:
        # c_j + w_j with w_j ranging over S
        base_img = [
            linalg.row_combine(ctx, col, S.basis, m)
            for col in linalg.transpose(u)
        ]
        for ws in itertools.product(svecs, repeat=m - s):
            cols = list(base_img) + [
                tuple(ctx.add(a, b) for a, b in zip(c, w))
                for c, w in zip(comp_rows, ws)
            ]
            # matrix of N in canonical coordinates (columns act on columns):
            # N = (images as columns) (basis as columns)^{-1}
            Bmat = linalg.mat_mul(ctx, linalg.transpose(cols), Binv)
            out.append(Bmat)
    return out


def _invariant_product_classes(ctx, lam, mu, n):
    """Matrix form of the same expansion: condition on the middle dimension
    m = dim(V + W) and average the type of B A over the middle-space
    composites A and B of the compatible extensions of the two factors.

    A runs over automorphisms of the middle space that restrict to type lam
    on V = Span(e_1..e_k) and act as the identity on the quotient by V (the
    restriction may be frozen to the Jordan form since everything else is
    averaged); B runs over the same set for W, which itself runs over the
    l-dimensional subspaces with V + W = middle space.  The law of m is the
    dimension-of-sum law.  Cross-checked exactly against the double orbit
    sum in the test suite."""
    k, l = lam.size, mu.size
    q = ctx.q
    out = {}
    for m in range(max(k, l), min(n, k + l) + 1):
        pm = dim_sum_law(n, q, 0, k, l, m)
        if pm == 0:
            continue
        if m == 0:
            e = empty_polypartition(ctx)
            out[e] = out.get(e, Fraction(0)) + pm
            continue
        V = subspaces.from_rows(ctx, linalg.identity(m)[:k], m)
        A_list = _supported_automorphisms(ctx, lam, V, m, fix_class=True)
        counts = {}
        total = 0
        for W in subspaces.enumerate_subspaces(ctx, m, l):
            if subspaces.subspace_sum(ctx, V, W).dim != m:
                continue
            B_list = _supported_automorphisms(ctx, mu, W, m)
            for A in A_list:
                for B in B_list:
                    t = type_of(ctx, linalg.mat_mul(ctx, B, A))
                    counts[t] = counts.get(t, 0) + 1
                    total += 1
        for t, c in counts.items():
            out[t] = out.get(t, Fraction(0)) + pm * Fraction(c, total)
    return {t: c for t, c in out.items() if c}


def invariant_product(lam, mu, n, method="auto", check_symmetry=True):
    """Structure constants of Atilde_lam * Atilde_mu in the tilde basis.

    "orbits" performs the double orbit sum over partial isomorphisms and
    asserts orbit-constancy of every output coefficient; "classes" conditions
    on the middle dimension and reduces to completed conjugacy-class products
    (the two are asserted equal on small inputs by the test suite)."""
    if lam.size > n or mu.size > n:
        raise ValueError("type size exceeds ambient dimension")
    ctx = lam.ctx
    if method == "auto":
        work = orbit_size(lam, n) * orbit_size(mu, n)
        method = "orbits" if work <= 3000000 and ctx.q <= 3 and n <= 3 else "classes"
    if method == "orbits":
        out = _invariant_product_orbits(ctx, lam, mu, n)
        if check_symmetry and lam != mu:
            sym = _invariant_product_orbits(ctx, mu, lam, n)
            if sym != out:
                raise AssertionError("invariant product is not symmetric")
    elif method == "classes":
        out = _invariant_product_classes(ctx, lam, mu, n)
    else:
        raise ValueError("unknown method %r" % method)
    return out


# ---------------------------------------------------------------------------
# compatibility maps between ambient dimensions
# ---------------------------------------------------------------------------


def _fits_in(sub, n_small):
    return all(all(x == 0 for x in row[n_small:]) for row in sub.basis)


def _truncate(sub, n_small):
    return subspaces.Subspace(
        n_small, tuple(row[:n_small] for row in sub.basis), sub.pivots
    )


def phi(ctx, x, n_small):
    """The compatibility map A(n') -> A(n): keep terms whose spaces sit in
    the first n coordinates, with the degree-dependent rescaling that sends
    Ahat_{mu, n'} to Ahat_{mu, n}."""
    n_big = x.n
    if n_small > n_big:
        raise ValueError("phi maps to a smaller ambient dimension")
    q = ctx.q
    qi = Fraction(1, q)
    out = {}
    for t, c in x.terms.items():
        if not (_fits_in(t.V, n_small) and _fits_in(t.W, n_small)):
            continue
        k = t.dim
        scale = (
            Fraction(q) ** ((n_big - n_small) * k)
            * pochhammer(qi, n_big)
            * pochhammer(qi, n_small - k)
            / (pochhammer(qi, n_big - k) * pochhammer(qi, n_small))
        )
        u = PartialIso(_truncate(t.V, n_small), _truncate(t.W, n_small), t.g1, t.g2)
        out[u] = out.get(u, 0) + c * scale
    return AlgElem(n_small, out)


# ---------------------------------------------------------------------------
# the naive one-automorphism construction (not associative)
# ---------------------------------------------------------------------------


def naive_extensions(ctx, V, g, V_plus):
    """Trivial extensions of the single automorphism (g, V) to V_plus: all
    automorphisms of V_plus restricting to g whose type only adds parts 1 to
    the (X - 1) partition.  Brute force over GL(dim V_plus)."""
    k_plus = V_plus.dim
    extra = k_plus - V.dim
    if extra == 0:
        return [g]
    xm1 = linear_poly(ctx, 1)
    base = type_of(ctx, g) if V.dim else empty_polypartition(ctx)
    entries = dict(base.entries)
    old = entries.get(xm1, Partition(()))
    entries[xm1] = Partition(tuple(sorted(old.parts + (1,) * extra, reverse=True)))
    target = Polypartition(ctx, entries)
    base_imgs = [
        linalg.row_combine(ctx, linalg.mat_vec(ctx, g, V.coords(v)), V.basis, V.ambient)
        for v in V.basis
    ]
    out = []
    for h in enumerate_gl(ctx, k_plus):
        ok = True
        for v, img in zip(V.basis, base_imgs):
            hv = linalg.row_combine(
                ctx, linalg.mat_vec(ctx, h, V_plus.coords(v)), V_plus.basis, V.ambient
            )
            if hv != img:
                ok = False
                break
        if ok and type_of(ctx, h) == target:
            out.append(h)
    return out


def naive_product(ctx, x, y, n):
    """Product of naive elements {(V, g): coeff}: means of trivial extensions
    to the sum of the supports, composed on the common space."""
    out = {}
    for (V, g), cg in x.items():
        for (W, h), ch in y.items():
            M = subspaces.subspace_sum(ctx, V, W)
            gs = naive_extensions(ctx, V, g, M)
            hs = naive_extensions(ctx, W, h, M)
            w = cg * ch * Fraction(1, len(gs) * len(hs))
            for gp in gs:
                for hp in hs:
                    key = (M, linalg.mat_mul(ctx, hp, gp))
                    out[key] = out.get(key, 0) + w
    return {k: c for k, c in out.items() if c}


def naive_product_counterexample(ctx, n=2):
    """A triple of naive partial isomorphisms with (G*H)*I != G*(H*I),
    demonstrating that the one-automorphism construction is not associative.

    Searches k-dimensional automorphisms G, H against the identity on a
    containing (k+1)-dimensional space for k = 1, 2, then falls back to a
    full scan.  A counterexample needs a k-dimensional space with a
    non-identity automorphism fitting strictly inside (F_q)^n, so the
    smallest cases are n = 2 for q >= 3 (nontrivial G, H on a line) and
    n = 3 for q = 2 (nontrivial G, H on a plane); at n = 2, q = 2 the naive
    product is associative (exhaustive scan) and this raises ValueError."""
    if n < 2:
        raise ValueError("non-associativity requires n >= 2")
    if ctx.q == 2 and n < 3:
        raise ValueError(
            "the naive product on (F_2)^2 is associative; need n >= 3")

    def atoms():
        for k in (1, 2):
            if k + 1 > n:
                continue
            smalls = subspaces.enumerate_subspaces(ctx, n, k)
            bigs = subspaces.enumerate_subspaces(ctx, n, k + 1)
            for L in smalls:
                for gm in enumerate_gl(ctx, k):
                    if gm == linalg.identity(k):
                        continue
                    for hm in enumerate_gl(ctx, k):
                        if hm == linalg.identity(k):
                            continue
                        for P in bigs:
                            if P.contains(ctx, L):
                                yield (L, gm), (L, hm), (P, linalg.identity(k + 1))
        basis = [
            (V, g)
            for k in range(n + 1)
            for V in subspaces.enumerate_subspaces(ctx, n, k)
            for g in enumerate_gl(ctx, k)
        ]
        for G in basis:
            for H in basis:
                for I in basis:
                    yield G, H, I

    for G, H, I in atoms():
        eg, eh, ei = ({key: Fraction(1)} for key in (G, H, I))
        lhs = naive_product(ctx, naive_product(ctx, eg, eh, n), ei, n)
        rhs = naive_product(ctx, eg, naive_product(ctx, eh, ei, n), n)
        if lhs != rhs:
            return (G, H, I), lhs, rhs
    raise AssertionError("no counterexample found; the naive product bug?")
