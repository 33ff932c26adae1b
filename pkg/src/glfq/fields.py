"""Finite fields F_q (q = p^e) with canonical integer-encoded elements.

Elements of F_q are plain Python ints in [0, q).  For a prime field the
encoding is the residue; for an extension field the int is the base-p
digit vector of the coefficient representation with respect to the
generator t, least significant digit = constant coefficient.  All field
operations go through a FieldCtx, which precomputes small lookup tables
(the library never enumerates fields with q > 16, so tables are cheap).

Polynomials over F_q are tuples of element encodings in ascending degree
with no trailing zeros (the zero polynomial is the empty tuple).
"""

import itertools
from functools import lru_cache


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class FieldCtx:
    """Arithmetic context for F_q = F_p[t]/(modulus), q = p^e.

    Two contexts with equal (p, e, modulus) behave identically; make_field
    is memoized so identical parameters give the *same* object.
    """

    def __init__(self, p, e, modulus=None):
        assert _is_prime(p), "p must be prime"
        assert e >= 1
        self.p = p
        self.e = e
        self.q = p ** e
        self.modulus = modulus  # ascending coeff tuple over F_p, monic, len e+1
        if e == 1:
            assert modulus is None
        else:
            assert modulus is not None and len(modulus) == e + 1 and modulus[-1] == 1
        self._build_tables()

    # -- encoding helpers ------------------------------------------------

    def digits(self, a):
        """Base-p digit vector (ascending) of the encoding a."""
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def encode(self, digs):
        a = 0
        for d in reversed(digs):
            a = a * self.p + (d % self.p)
        return a

    def _build_tables(self):
        p, e, q = self.p, self.e, self.q
        if e == 1:
            self._mul = None
            self._inv = [0] + [pow(a, p - 2, p) for a in range(1, p)]
        else:
            mod = self.modulus
            mul = [[0] * q for _ in range(q)]
            for a in range(q):
                da = self.digits(a)
                for b in range(a, q):
                    db = self.digits(b)
                    prod = [0] * (2 * e - 1)
                    for i, x in enumerate(da):
                        if x:
                            for j, y in enumerate(db):
                                prod[i + j] = (prod[i + j] + x * y) % p
                    # reduce modulo the defining polynomial
                    for i in range(len(prod) - 1, e - 1, -1):
                        c = prod[i]
                        if c:
                            prod[i] = 0
                            for j in range(e):
                                prod[i - e + j] = (prod[i - e + j] - c * mod[j]) % p
                    v = self.encode(prod[:e])
                    mul[a][b] = v
                    mul[b][a] = v
            self._mul = mul
            inv = [0] * q
            for a in range(1, q):
                for b in range(1, q):
                    if mul[a][b] == 1:
                        inv[a] = b
                        break
            self._inv = inv
        # square roots: smallest root wins
        roots = [None] * q
        for a in range(q - 1, -1, -1):
            roots[self.mul(a, a)] = a
        self._sqrt = roots

    # -- element arithmetic ----------------------------------------------

    def add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        p = self.p
        return self.encode([(x + y) % p for x, y in zip(self.digits(a), self.digits(b))])

    def sub(self, a, b):
        if self.e == 1:
            return (a - b) % self.p
        p = self.p
        return self.encode([(x - y) % p for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a):
        return self.sub(0, a)

    def mul(self, a, b):
        if self.e == 1:
            return (a * b) % self.p
        return self._mul[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return self._inv[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        if n < 0:
            a, n = self.inv(a), -n
        r = 1
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def elements(self):
        return range(self.q)

    def is_square(self, a):
        """True iff a is a square in F_q.

        Odd q: Euler criterion a^((q-1)/2) = 1 (a = 0 counts as a square).
        Even q: squaring is the Frobenius bijection, everything is a square.
        """
        if a == 0 or self.p == 2:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    def sqrt(self, a):
        """A square root of a, or None; the smaller encoding of the two roots."""
        return self._sqrt[a]

    def abs_trace(self, a):
        """Absolute trace down to the prime subfield: sum of a^(p^i), i < e.

        Prime-subfield elements are encoded by their residue, so the result
        is an int in [0, p).
        """
        t, x = 0, a
        for _ in range(self.e):
            t = self.add(t, x)
            x = self.pow(x, self.p)
        assert t < self.p
        return t

    # -- element text syntax ----------------------------------------------

    def elem_str(self, a):
        if self.e == 1:
            return str(a)
        digs = self.digits(a)
        terms = []
        for i in range(self.e - 1, -1, -1):
            c = digs[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                var = "t" if i == 1 else "t^%d" % i
                terms.append(var if c == 1 else "%d*%s" % (c, var))
        return "+".join(terms) if terms else "0"

    def elem_parse(self, s):
        s = s.replace(" ", "")
        if self.e == 1:
            return int(s) % self.p
        digs = [0] * self.e
        for term in s.replace("-", "+-").split("+"):
            if not term:
                continue
            neg = term.startswith("-")
            if neg:
                term = term[1:]
            if "t" in term:
                coef, _, rest = term.partition("t")
                c = int(coef.rstrip("*")) if coef else 1
                i = int(rest[1:]) if rest.startswith("^") else 1
            else:
                c, i = int(term), 0
            if i >= self.e:
                raise ValueError("generator power out of range: %r" % s)
            digs[i] = (digs[i] + (-c if neg else c)) % self.p
        return self.encode(digs)

    def __repr__(self):
        return "F_%d" % self.q


def make_field(p, e=1):
    """The field F_{p^e}.

    For e > 1 the defining modulus is the lexicographically smallest monic
    irreducible of degree e over F_p, comparing coefficient vectors from
    the constant term up.  Deterministic and cached, so element encodings
    are stable and repeated calls return the identical context object.
    """
    return _make_field(p, e)


@lru_cache(maxsize=None)
def _make_field(p, e):
    if not _is_prime(p):
        raise ValueError("p = %d is not prime" % p)
    if e < 1:
        raise ValueError("e must be >= 1")
    if e == 1:
        return FieldCtx(p, 1)
    fp = make_field(p, 1)
    for tail in _tuples_ascending(p, e):
        cand = tail + (1,)
        if is_irreducible(fp, cand):
            return FieldCtx(p, e, modulus=cand)
    raise AssertionError("unreachable: irreducibles of every degree exist")


def _tuples_ascending(p, k):
    """All k-tuples over [0,p) in lexicographic order."""
    return itertools.product(range(p), repeat=k)


# ---------------------------------------------------------------------------
# polynomials over F_q: ascending coefficient tuples, no trailing zeros
# ---------------------------------------------------------------------------

PX = (0, 1)  # the polynomial X


def pnorm(coeffs):
    coeffs = tuple(coeffs)
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return coeffs[:n]


def pdeg(P):
    return len(P) - 1  # zero polynomial gets degree -1


def is_monic(P):
    return len(P) > 0 and P[-1] == 1


def padd(ctx, A, B):
    if len(A) < len(B):
        A, B = B, A
    out = list(A)
    for i, b in enumerate(B):
        out[i] = ctx.add(out[i], b)
    return pnorm(out)


def psub(ctx, A, B):
    n = max(len(A), len(B))
    out = []
    for i in range(n):
        a = A[i] if i < len(A) else 0
        b = B[i] if i < len(B) else 0
        out.append(ctx.sub(a, b))
    return pnorm(out)


def pscale(ctx, c, A):
    return pnorm(ctx.mul(c, a) for a in A)


def pmul(ctx, A, B):
    if not A or not B:
        return ()
    out = [0] * (len(A) + len(B) - 1)
    for i, a in enumerate(A):
        if a:
            for j, b in enumerate(B):
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b))
    return pnorm(out)


def pdivmod(ctx, A, B):
    if not B:
        raise ZeroDivisionError("polynomial division by zero")
    A = list(A)
    q = [0] * max(0, len(A) - len(B) + 1)
    binv = ctx.inv(B[-1])
    db = len(B) - 1
    for i in range(len(A) - 1, db - 1, -1):
        c = ctx.mul(A[i], binv)
        if c:
            q[i - db] = c
            for j, b in enumerate(B):
                A[i - db + j] = ctx.sub(A[i - db + j], ctx.mul(c, b))
    return pnorm(q), pnorm(A)


def pmod(ctx, A, B):
    return pdivmod(ctx, A, B)[1]


def pmonic(ctx, A):
    if not A or A[-1] == 1:
        return A
    return pscale(ctx, ctx.inv(A[-1]), A)


def pgcd(ctx, A, B):
    while B:
        A, B = B, pmod(ctx, A, B)
    return pmonic(ctx, A)


def peval(ctx, P, x):
    r = 0
    for c in reversed(P):
        r = ctx.add(ctx.mul(r, x), c)
    return r


def ppow(ctx, A, n):
    r = (1,)
    while n:
        if n & 1:
            r = pmul(ctx, r, A)
        A = pmul(ctx, A, A)
        n >>= 1
    return r


def ppow_mod(ctx, A, n, M):
    r = pmod(ctx, (1,), M)
    A = pmod(ctx, A, M)
    while n:
        if n & 1:
            r = pmod(ctx, pmul(ctx, r, A), M)
        A = pmod(ctx, pmul(ctx, A, A), M)
        n >>= 1
    return r


_IRR_CACHE = {}


def enumerate_irreducibles(ctx, d):
    """All monic irreducibles of degree d over ctx, sorted lexicographically
    by ascending coefficient vector.  Includes X itself at degree 1."""
    assert d >= 1
    key = (ctx.p, ctx.e, ctx.modulus, d)
    if key in _IRR_CACHE:
        return _IRR_CACHE[key]
    out = []
    for tail in _tuples_ascending(ctx.q, d):
        cand = tail + (1,)
        if _irreducible_by_trial_division(ctx, cand):
            out.append(cand)
    _IRR_CACHE[key] = out
    return out


def _irreducible_by_trial_division(ctx, P):
    d = pdeg(P)
    if d == 1:
        return True
    if P[0] == 0:  # divisible by X
        return False
    for k in range(1, d // 2 + 1):
        for Q in enumerate_irreducibles(ctx, k):
            if not pmod(ctx, P, Q):
                return False
    return True


def is_irreducible(ctx, P):
    """Irreducibility by trial division against sieved low-degree irreducibles."""
    if not is_monic(P):
        raise ValueError("irreducibility test requires a monic polynomial")
    if pdeg(P) < 1:
        raise ValueError("degree must be >= 1")
    return _irreducible_by_trial_division(ctx, P)


def factor(ctx, P):
    """Complete factorization of monic P into (irreducible, multiplicity) pairs,
    sorted by (degree, coefficient vector)."""
    if not is_monic(P):
        raise ValueError("factor requires a monic polynomial")
    if pdeg(P) < 1:
        raise ValueError("degree must be >= 1")
    out = []
    rest = P
    d = 1
    while pdeg(rest) >= 1:
        if d > pdeg(rest) // 2:
            out.append((rest, 1))
            break
        for Q in enumerate_irreducibles(ctx, d):
            m = 0
            while True:
                qt, rm = pdivmod(ctx, rest, Q)
                if rm:
                    break
                rest, m = qt, m + 1
            if m:
                out.append((Q, m))
        d += 1
    out.sort(key=lambda t: (pdeg(t[0]), t[0]))
    check = (1,)
    for Q, m in out:
        check = pmul(ctx, check, ppow(ctx, Q, m))
    assert check == P
    return out


# -- polynomial text syntax -------------------------------------------------
# sparse descending in X, '+'-separated; coefficients in the element syntax.


def poly_str(ctx, P):
    if not P:
        return "0"
    terms = []
    for i in range(len(P) - 1, -1, -1):
        c = P[i]
        if c == 0:
            continue
        cs = ctx.elem_str(c)
        if i == 0:
            terms.append(cs)
        else:
            var = "X" if i == 1 else "X^%d" % i
            if c == 1:
                terms.append(var)
            elif ctx.e > 1 and ("+" in cs):
                terms.append("(%s)*%s" % (cs, var))
            else:
                terms.append("%s*%s" % (cs, var))
    return "+".join(terms)


def poly_parse(ctx, s):
    """Parse the canonical polynomial syntax; '-' is accepted and normalized."""
    s = s.replace(" ", "").replace("**", "^")
    if s == "0":
        return ()
    # split on top-level + and -, keeping signs; '(' groups extension coefficients
    terms = []
    depth, cur, sign = 0, "", 1
    for ch in s:
        if ch == "(":
            depth += 1
            cur += ch
        elif ch == ")":
            depth -= 1
            cur += ch
        elif ch in "+-" and depth == 0 and cur:
            terms.append((sign, cur))
            sign = -1 if ch == "-" else 1
            cur = ""
        elif ch in "+-" and depth == 0 and not cur:
            sign = -sign if ch == "-" else sign
        else:
            cur += ch
    if cur:
        terms.append((sign, cur))
    coeffs = {}
    for sign, term in terms:
        if "X" in term:
            coef_s, _, rest = term.partition("X")
            coef_s = coef_s.rstrip("*")
            if coef_s.startswith("(") and coef_s.endswith(")"):
                coef_s = coef_s[1:-1]
            c = ctx.elem_parse(coef_s) if coef_s else 1
            i = int(rest[1:]) if rest.startswith("^") else 1
        else:
            c, i = ctx.elem_parse(term), 0
        if sign < 0:
            c = ctx.neg(c)
        coeffs[i] = ctx.add(coeffs.get(i, 0), c)
    n = max(coeffs) + 1 if coeffs else 0
    return pnorm(tuple(coeffs.get(i, 0) for i in range(n)))


def linear_poly(ctx, a):
    """The monic linear polynomial X - a."""
    return (ctx.neg(a), 1)
