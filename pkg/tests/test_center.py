"""Completed-class products, the padded-unipotent transport law, and the
symbolic structure polynomials in X = q^n."""

import itertools
import json
from fractions import Fraction

import pytest

from glfq import center
from glfq.conjtype import (
    Partition,
    Polypartition,
    class_orbit,
    class_size,
    complete,
    empty_polypartition,
    jordan_matrix,
    parse_polypartition,
    type_of,
)
from glfq.fields import linear_poly, make_field
from glfq.partial_iso import num_free_families


def unipotent_type(ctx, pi):
    if not pi:
        return empty_polypartition(ctx)
    return Polypartition(ctx, ((linear_poly(ctx, 1), Partition(pi)),))


@pytest.mark.parametrize("q,n,lam_s,mu_s", [
    (2, 2, "{X+1:(1)}", "{X+1:(1)}"),
    (2, 3, "{X+1:(2)}", "{X+1:(1)}"),
    (3, 2, "{X+2:(1)}", "{X+2:(1)}"),
    (3, 2, "{X+1:(1)}", "{X+2:(1)}"),
])
def test_completed_product_vs_double_loop(q, n, lam_s, mu_s):
    ctx = make_field(q)
    lam = parse_polypartition(ctx, lam_s)
    mu = parse_polypartition(ctx, mu_s)
    fast = center.completed_product(lam, mu, n)
    slow = center.class_convolution(lam, mu, n)
    assert fast == slow


def test_completed_product_commutative_and_representative_free():
    ctx = make_field(3)
    lam = parse_polypartition(ctx, "{X+1:(1)}")
    mu = parse_polypartition(ctx, "{X+2:(1)}")
    n = 2
    base = center.completed_product(lam, mu, n)
    assert base == center.completed_product(mu, lam, n)
    mu_n = complete(mu, n)
    h0 = jordan_matrix(mu_n)
    others = [g for g in class_orbit(mu, n) if g != h0]
    for h in others[:3]:
        assert type_of(ctx, h) == mu_n
        assert base == center.completed_product(lam, mu, n, representative=h)


def test_completed_product_rejects_oversized_types():
    ctx = make_field(2)
    lam = parse_polypartition(ctx, "{X^2+X+1:(1)}")
    with pytest.raises(ValueError):
        center.completed_product(lam, lam, 1)


def brute_padded_law(ctx, pi, m):
    """Enumerate every free block P and bucket the unipotent types of
    [[U, P], [0, I_m]] directly."""
    u = sum(pi)
    U = jordan_matrix(unipotent_type(ctx, pi)) if u else ()
    xm1 = linear_poly(ctx, 1)
    counts = {}
    total = 0
    for flat in itertools.product(ctx.elements(), repeat=u * m):
        rows = [tuple(U[i]) + flat[i * m:(i + 1) * m] for i in range(u)]
        for j in range(m):
            rows.append(tuple(0 for _ in range(u))
                        + tuple(1 if t == j else 0 for t in range(m)))
        t = type_of(ctx, tuple(rows))
        (sigma,) = [part.parts for poly, part in t.entries if poly == xm1]
        counts[sigma] = counts.get(sigma, 0) + 1
        total += 1
    return {s: Fraction(c, total) for s, c in counts.items()}


@pytest.mark.parametrize("q,pi,m", [
    (2, (), 2),
    (2, (1,), 2),
    (2, (2,), 1),
    (2, (2,), 2),
    (2, (1, 1), 2),
    (2, (2, 1), 1),
    (2, (3,), 1),
    (3, (2,), 1),
])
def test_padded_unipotent_law_vs_enumeration(q, pi, m):
    ctx = make_field(q)
    assert center.padded_unipotent_law(ctx, pi, m) == brute_padded_law(ctx, pi, m)


@pytest.mark.parametrize("q,nu_s,n", [
    (2, "{X+1:(2)}", 3),
    (2, "{X+1:(2)}", 4),
    (2, "{X+1:(2,1)}", 4),
    (3, "{X+1:(1)}", 3),
])
def test_transport_mass(q, nu_s, n):
    ctx = make_field(q)
    nu = parse_polypartition(ctx, nu_s)
    vec = center.transport(nu, n)
    mass = sum(c * class_size(tau, n) for tau, c in vec.coeffs.items())
    assert mass == num_free_families(q, n, nu.size)


@pytest.mark.parametrize("q,nu_s,n", [
    (2, "{X^2+X+1:(1)}", 2),
    (2, "{X^2+X+1:(1)}", 3),
    (3, "{X+1:(1)}", 2),
    (3, "{X+1:(1)}", 3),
])
def test_transport_single_class_matches_pi_scalar(q, nu_s, n):
    # with no (X-1) parts the lift lands on a single completed class and the
    # transport reduces to the pi_scalar display
    ctx = make_field(q)
    nu = parse_polypartition(ctx, nu_s)
    vec = center.transport(nu, n)
    assert set(vec.coeffs) == {complete(nu, n)}
    assert vec == center.pi_expansion(ctx, {nu: Fraction(1)}, n)


def test_pi_scalar_of_empty_type_is_one():
    ctx = make_field(3)
    for n in (1, 2, 5):
        assert center.pi_scalar(empty_polypartition(ctx), n) == 1


@pytest.mark.parametrize("q,tau_s", [
    (2, "{X+1:(2)}"),
    (2, "{X+1:(2,2)}"),
    (2, "{X^2+X+1:(1)}"),
    (3, "{X+1:(1)}"),
    (3, "{X+2:(3);X+1:(1,1)}"),
])
def test_completed_class_size_poly(q, tau_s):
    ctx = make_field(q)
    tau = parse_polypartition(ctx, tau_s)
    poly = center.completed_class_size_poly(tau)
    for n in range(tau.size, tau.size + 3):
        want = class_size(complete(tau, n), n)
        assert center._laur_eval(poly, Fraction(q) ** n) == want


def test_completed_class_size_poly_requires_reduced_input():
    ctx = make_field(2)
    tau = parse_polypartition(ctx, "{X+1:(2,1)}")
    with pytest.raises(AssertionError):
        center.completed_class_size_poly(tau)


def test_num_free_poly_evaluates_to_counts():
    for q in (2, 3):
        for k in range(4):
            poly = center.num_free_poly(q, k)
            for n in range(k, k + 3):
                assert (center._laur_eval(poly, Fraction(q) ** n)
                        == num_free_families(q, n, k))


def test_generic_S_known_values_q2():
    ctx = make_field(2)
    lam = parse_polypartition(ctx, "{X+1:(1)}")
    S = center.generic_S(lam, lam)
    want = {
        parse_polypartition(ctx, "{X+1:(1)}"): Fraction(1),
        parse_polypartition(ctx, "{X+1:(2)}"): Fraction(1, 2),
        parse_polypartition(ctx, "{X+1:(1,1)}"): Fraction(1, 4),
        parse_polypartition(ctx, "{X^2+X+1:(1)}"): Fraction(1, 4),
    }
    assert S == want


def test_generic_S_independent_of_ambient_dimension():
    ctx = make_field(2)
    lam = parse_polypartition(ctx, "{X+1:(1)}")
    at_n0 = center.generic_S(lam, lam)
    at_n0_plus_1 = center.generic_S(lam, lam, n=3, method="classes")
    assert at_n0 == at_n0_plus_1


def test_fh_polynomials_reject_unipotent_parts():
    ctx = make_field(2)
    lam = parse_polypartition(ctx, "{X+1:(2)}")
    good = parse_polypartition(ctx, "{X^2+X+1:(1)}")
    with pytest.raises(ValueError):
        center.fh_polynomials(lam, good)
    with pytest.raises(ValueError):
        center.fh_polynomials(good, lam)


@pytest.mark.parametrize("q,lam_s,mu_s,n_list", [
    (3, "{X+1:(1)}", "{X+1:(1)}", [2, 3, 4]),
    (3, "{X+1:(1)}", "{X+2:(1)}", [2, 3]),
    (3, "{X+1:(1)}", "{X^2+1:(1)}", [3, 4]),
    (2, "{X^2+X+1:(1)}", "{X^2+X+1:(1)}", [4]),
])
def test_fh_polynomials_match_brute_force(q, lam_s, mu_s, n_list):
    ctx = make_field(q)
    lam = parse_polypartition(ctx, lam_s)
    mu = parse_polypartition(ctx, mu_s)
    report = center.verify_fh(lam, mu, n_list)
    assert report["ok"], report
    assert all(not diffs for diffs in report["n"].values())
    # structural sanity: no negative degrees and at least one output class
    assert report["degrees"]
    assert all(d >= 0 for d in report["degrees"].values())


def test_fh_verify_rejects_small_n():
    ctx = make_field(3)
    lam = parse_polypartition(ctx, "{X+1:(1)}")
    with pytest.raises(ValueError):
        center.verify_fh(lam, lam, [1])


def test_generic_product_json_roundtrip():
    ctx = make_field(3)
    lam = parse_polypartition(ctx, "{X+1:(1)}")
    gp = center.fh_polynomials(lam, lam)
    data = json.loads(gp.to_json())
    assert data["q"] == 3
    assert len(data["lhs"]) == 2
    assert {d["type"] for d in data["rhs"]} == {
        center.format_polypartition(nu) for nu in gp.rhs}
    for d in data["rhs"]:
        assert all("/" in c for c in d["poly"])


def test_struct_poly_basics():
    p = center.StructPoly([Fraction(-1), Fraction(2, 7)])
    assert p.degree == 1
    assert p(Fraction(49)) == 13
    assert p == center.StructPoly([-1, Fraction(2, 7), 0])
    assert center.StructPoly([]).degree == -1


def test_central_vector_algebra():
    ctx = make_field(2)
    mu = complete(parse_polypartition(ctx, "{X+1:(2)}"), 2)
    a = center.CentralVector(ctx, 2, {mu: Fraction(1, 2)})
    assert (a + a).coeffs == {mu: Fraction(1)}
    assert a.scale(2).is_integral()
    assert not a.is_integral()
    assert (a + a.scale(-1)).coeffs == {}
