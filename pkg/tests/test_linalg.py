"""Exact dense linear algebra over F_q."""

import itertools
import random

import pytest

from glfq import linalg
from glfq.fields import make_field, peval


def random_matrix(ctx, rng, n):
    return tuple(
        tuple(rng.choice(ctx.elements()) for _ in range(n)) for _ in range(n))


@pytest.mark.parametrize("p,e", [(2, 1), (3, 1), (2, 2)])
def test_rref_idempotent_and_rank(p, e):
    ctx = make_field(p, e)
    rng = random.Random(0)
    for _ in range(50):
        n = rng.randint(1, 4)
        A = random_matrix(ctx, rng, n)
        R, piv = linalg.rref(ctx, [list(r) for r in A])
        assert linalg.rank(ctx, A) == len(piv)
        R2, piv2 = linalg.rref(ctx, [list(r) for r in R])
        assert tuple(R2) == tuple(R) and piv2 == piv


@pytest.mark.parametrize("p,e", [(2, 1), (3, 1), (2, 2)])
def test_inverse(p, e):
    ctx = make_field(p, e)
    rng = random.Random(1)
    found = 0
    while found < 30:
        n = rng.randint(1, 4)
        A = random_matrix(ctx, rng, n)
        if not linalg.is_invertible(ctx, A):
            continue
        found += 1
        B = linalg.inverse(ctx, A)
        assert linalg.mat_mul(ctx, A, B) == linalg.identity(n)
        assert linalg.mat_mul(ctx, B, A) == linalg.identity(n)


def test_rank_exhaustive_2x2_over_f2():
    ctx = make_field(2)
    counts = {0: 0, 1: 0, 2: 0}
    for entries in itertools.product((0, 1), repeat=4):
        A = (entries[:2], entries[2:])
        counts[linalg.rank(ctx, A)] += 1
    # 1 zero matrix, 6 invertible, 9 rank one
    assert counts == {0: 1, 1: 9, 2: 6}


@pytest.mark.parametrize("p,e", [(2, 1), (3, 1)])
def test_charpoly_cayley_hamilton(p, e):
    ctx = make_field(p, e)
    rng = random.Random(2)
    for _ in range(30):
        n = rng.randint(1, 4)
        A = random_matrix(ctx, rng, n)
        cp = linalg.charpoly(ctx, A)
        assert len(cp) == n + 1 and cp[-1] == 1
        assert linalg.apply_poly(ctx, cp, A) == linalg.zeros(n, n)


def test_charpoly_determinant_and_trace():
    ctx = make_field(5)
    rng = random.Random(3)
    for _ in range(30):
        A = random_matrix(ctx, rng, 2)
        cp = linalg.charpoly(ctx, A)
        a, b = A[0]
        c, d = A[1]
        det = ctx.sub(ctx.mul(a, d), ctx.mul(b, c))
        tr = ctx.add(a, d)
        assert cp == (det, ctx.neg(tr), 1)
        assert linalg.is_invertible(ctx, A) == (peval(ctx, cp, 0) != 0)


def test_kernel_basis():
    ctx = make_field(3)
    rng = random.Random(4)
    for _ in range(30):
        n = rng.randint(1, 4)
        A = random_matrix(ctx, rng, n)
        K = linalg.kernel_basis(ctx, A)
        assert len(K) == n - linalg.rank(ctx, A)
        for v in K:
            assert linalg.mat_vec(ctx, A, v) == (0,) * n


def test_mat_parse_str_roundtrip():
    ctx = make_field(5)
    A = linalg.mat_parse(ctx, "0,2;1,2")
    assert A == ((0, 2), (1, 2))
    assert linalg.mat_parse(ctx, linalg.mat_str(ctx, A)) == A
