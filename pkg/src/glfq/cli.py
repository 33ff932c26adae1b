"""Command-line front end.

Subcommands expose the library to batch users: conjugacy types and class
sizes, the census of GL(n, F_q), products of completed classes, the generic
(polynomial-in-q^n) structure constants, the degree-1 closed forms, the
counting formulas, the rank laws, and a set of self-verification suites.

Exit codes: 0 success, 1 computation error (message on stderr), 2 usage
error.  All output is deterministic given the flags and --seed.
"""

import argparse
import json
import random
import sys
from fractions import Fraction

from . import center, degree1, linalg, partial_iso, ranklaw, subspaces
from .conjtype import (
    census,
    class_size,
    format_polypartition,
    gl_order,
    parse_polypartition,
    type_of,
)
from .fields import make_field


def _field_from_args(args):
    if args.q is not None:
        if args.p is not None or args.e != 1:
            raise SystemExit2("give either --q or --p/--e, not both")
        q = args.q
        p = q
        for f in range(2, q):
            if f * f > q:
                break
            if q % f == 0:
                p = f
                break
        e = 0
        qq = q
        while qq % p == 0 and qq > 1:
            qq //= p
            e += 1
        if qq != 1 or p ** e != q:
            raise SystemExit2("--q must be a prime power")
        return make_field(p, e)
    if args.p is None:
        raise SystemExit2("a field is required: --q or --p [--e]")
    return make_field(args.p, args.e)


class SystemExit2(Exception):
    """Usage error detected after argparse (exit code 2)."""


def _parse_matrix(ctx, s):
    rows = []
    for row in s.split(";"):
        rows.append(tuple(ctx.elem_parse(e.strip()) for e in row.split(",")))
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise SystemExit2("matrix must be square")
    return tuple(rows)


def _frac_str(c):
    c = Fraction(c)
    return "%d/%d" % (c.numerator, c.denominator)


def _print_coeffs(coeffs, as_json):
    items = sorted(
        ((format_polypartition(m), c) for m, c in coeffs.items()))
    if as_json:
        print(json.dumps(
            [{"type": t, "coeff": _frac_str(c)} for t, c in items],
            indent=2))
    else:
        for t, c in items:
            print("%s  %s" % (t, c if c.denominator != 1 else c.numerator))


# -- subcommands -------------------------------------------------------------

def cmd_type(args):
    ctx = _field_from_args(args)
    g = _parse_matrix(ctx, args.mat)
    if not linalg.is_invertible(ctx, g):
        raise SystemExit2("matrix is singular")
    print(format_polypartition(type_of(ctx, g)))
    return 0


def cmd_class_size(args):
    ctx = _field_from_args(args)
    mu = parse_polypartition(ctx, args.type)
    print(class_size(mu, args.n))
    return 0


def cmd_census(args):
    ctx = _field_from_args(args)
    buckets = census(ctx, args.n)
    total = 0
    rows = []
    for mu in sorted(buckets, key=format_polypartition):
        cnt = buckets[mu]
        assert cnt == class_size(mu, args.n)
        total += cnt
        rows.append((format_polypartition(mu), cnt))
    assert total == gl_order(ctx.q, args.n)
    if args.json:
        print(json.dumps(
            [{"type": t, "size": c} for t, c in rows], indent=2))
    else:
        for t, c in rows:
            print("%s  %d" % (t, c))
        print("total  %d" % total)
    return 0


def cmd_class_product(args):
    ctx = _field_from_args(args)
    lam = parse_polypartition(ctx, args.a)
    mu = parse_polypartition(ctx, args.b)
    out = center.completed_product(lam, mu, args.n)
    _print_coeffs(out.coeffs, args.json)
    return 0


def cmd_generic_product(args):
    ctx = _field_from_args(args)
    lam = parse_polypartition(ctx, args.a)
    mu = parse_polypartition(ctx, args.b)
    gp = center.fh_polynomials(lam, mu)
    if args.verify_at is not None:
        report = center.verify_fh(lam, mu, [args.verify_at])
        status = "PASS" if report["ok"] else "FAIL"
        print("verification at n=%d: %s" % (args.verify_at, status),
              file=sys.stderr)
        if not report["ok"]:
            print(json.dumps(report["n"], default=str), file=sys.stderr)
            return 1
    if args.json:
        print(gp.to_json())
    else:
        for nu, poly in sorted(
                gp.rhs.items(), key=lambda kv: format_polypartition(kv[0])):
            print("%s  %s" % (format_polypartition(nu),
                              " ".join(map(str, poly.coeffs))))
    return 0


def cmd_degree1(args):
    ctx = _field_from_args(args)
    a = ctx.elem_parse(args.a)
    b = ctx.elem_parse(args.b)
    if args.n is None:
        case = degree1.classify(ctx, a, b)
        out = degree1.degree1_product(ctx, a, b)
        if args.json:
            print(json.dumps({
                "q": ctx.q,
                "a": ctx.elem_str(a),
                "b": ctx.elem_str(b),
                "case": case.tag,
                "delta": None if case.delta is None else ctx.elem_str(case.delta),
                "terms": [
                    {"type": format_polypartition(m), "coeff": _frac_str(c)}
                    for m, c in sorted(
                        out.items(),
                        key=lambda kv: format_polypartition(kv[0]))
                ],
            }, indent=2))
        else:
            print("case: %s" % case.tag)
            _print_coeffs(out, False)
    else:
        out = degree1.project_degree1(ctx, a, b, args.n)
        _print_coeffs(out.coeffs, args.json)
    return 0


def cmd_count(args):
    ctx = _field_from_args(args)
    q = ctx.q
    if args.what == "E":
        print(partial_iso.count_E(q, args.n, args.kplus, args.k, args.k1))
    elif args.what == "F":
        print(partial_iso.count_F(q, args.kplus, args.k, args.k1))
    else:
        print(subspaces.num_subspaces(q, args.n, args.k))
    return 0


def cmd_ranklaw(args):
    ctx = _field_from_args(args)
    q = ctx.q
    if args.law == "rank":
        out = ranklaw.rank_law(args.d, q, args.a, args.c)
    elif args.law == "cond":
        out = ranklaw.rank_law_conditional(
            args.d, q, args.a, args.b, args.c, args.dd)
    elif args.law == "dimsum":
        out = ranklaw.dim_sum_law(args.n, q, args.j, args.k, args.l, args.m)
    else:
        out = ranklaw.count_constrained_subspaces(
            args.j, args.k, args.l, args.m, q)
    print(out)
    return 0


# -- verify suites ------------------------------------------------------------

def _suite_assoc(ctx, n, rng, samples):
    basis = partial_iso.all_pisos(ctx, n)
    for _ in range(samples):
        x, y, z = (partial_iso.basis_elem(rng.choice(basis)) for _ in range(3))
        lhs = partial_iso.product(ctx, partial_iso.product(ctx, x, y), z)
        rhs = partial_iso.product(ctx, x, partial_iso.product(ctx, y, z))
        if lhs != rhs:
            return False, "associativity fails"
    return True, "%d random triples associative at (n=%d, q=%d)" % (
        samples, n, ctx.q)


def _suite_naive(ctx, n, rng, samples):
    triple = partial_iso.naive_product_counterexample(ctx, n)
    return True, "counterexample found: %r" % (triple,)


def _suite_operators(ctx, n, rng, samples):
    basis = partial_iso.all_pisos(ctx, n)
    subs = []
    for k in range(n + 1):
        subs.extend(subspaces.enumerate_subspaces(ctx, n, k))
    for _ in range(samples):
        x = partial_iso.basis_elem(rng.choice(basis))
        X, Y = rng.choice(subs), rng.choice(subs)
        lhs = partial_iso.op_L(
            ctx, X, partial_iso.op_R(ctx, Y, x, strict=True), strict=True)
        rhs = partial_iso.op_R(
            ctx, Y, partial_iso.op_L(ctx, X, x, strict=True), strict=True)
        if lhs != rhs:
            return False, "L/R commutation fails"
        both = partial_iso.op_R(
            ctx, Y, partial_iso.op_R(ctx, X, x, strict=True), strict=True)
        merged = partial_iso.op_R(
            ctx, subspaces.subspace_sum(ctx, X, Y), x, strict=True)
        if both != merged:
            return False, "R composition fails"
    return True, "%d random operator identities hold at (n=%d, q=%d)" % (
        samples, n, ctx.q)


def _suite_extensions(ctx, n, rng, samples):
    q = ctx.q
    checked = 0
    for x in partial_iso.all_pisos(ctx, n):
        k = x.dim
        tp = partial_iso.piso_type(ctx, x)
        k1 = tp.k1
        for k_plus in range(k, n + 1):
            W_plus = subspaces.enumerate_subspaces(
                ctx, n, k_plus, containing=x.W)[0]
            exts = partial_iso.trivial_extensions_fixed_right(
                ctx, x, W_plus, strict=True)
            if len(exts) != partial_iso.count_E(q, n, k_plus, k, k1):
                return False, "E count mismatch at %r" % (x,)
            V_plus = subspaces.enumerate_subspaces(
                ctx, n, k_plus, containing=x.V)[0]
            both = partial_iso.trivial_extensions_both_fixed(
                ctx, x, V_plus, W_plus, strict=True)
            if len(both) != partial_iso.count_F(q, k_plus, k, k1):
                return False, "F count mismatch at %r" % (x,)
            checked += 2
        if checked >= 2 * samples:
            break
    return True, "%d extension counts match at (n=%d, q=%d)" % (
        checked, n, ctx.q)


def _suite_census(ctx, n, rng, samples):
    buckets = census(ctx, n)
    total = 0
    for mu, cnt in buckets.items():
        if cnt != class_size(mu, n):
            return False, "size mismatch for %s" % format_polypartition(mu)
        total += cnt
    if total != gl_order(ctx.q, n):
        return False, "census does not cover GL"
    return True, "%d classes cover GL(%d, F_%d)" % (len(buckets), n, ctx.q)


def _suite_ranklaw(ctx, n, rng, samples):
    q = ctx.q
    for d in range(n + 1):
        for a in range(n + 2):
            s = sum(ranklaw.rank_law(d, q, a, c) for c in range(d + 1))
            if s != 1:
                return False, "rank_law does not sum to 1"
    for j in range(n + 1):
        for k in range(j, n + 1):
            for l in range(j, n + 1):
                s = sum(ranklaw.dim_sum_law(n, q, j, k, l, m)
                        for m in range(n + 1))
                if s != 1:
                    return False, "dim_sum_law does not sum to 1"
    return True, "laws are probability measures up to n=%d, q=%d" % (n, q)


def _suite_degree1(ctx, n, rng, samples):
    from .center import hat_from_tilde
    from .conjtype import Partition, Polypartition
    from .fields import linear_poly
    for a in range(1, ctx.q):
        for b in range(1, ctx.q):
            lam = Polypartition(
                ctx, ((linear_poly(ctx, a), Partition((1,))),))
            mu = Polypartition(
                ctx, ((linear_poly(ctx, b), Partition((1,))),))
            n0 = 2
            tilde = partial_iso.invariant_product(lam, mu, n0)
            hat = hat_from_tilde(ctx, tilde, lam, mu, n0)
            if degree1.degree1_product(ctx, a, b) != hat:
                return False, "closed form != engine at a=%d b=%d" % (a, b)
    return True, "closed form matches engine for all units, q=%d" % ctx.q


def _suite_fh(ctx, n, rng, samples):
    from .conjtype import Partition, Polypartition
    from .fields import linear_poly
    for a in range(1, ctx.q):
        for b in range(1, ctx.q):
            lam = Polypartition(
                ctx, ((linear_poly(ctx, a), Partition((1,))),))
            mu = Polypartition(
                ctx, ((linear_poly(ctx, b), Partition((1,))),))
            report = center.verify_fh(lam, mu, [2, 3])
            if not report["ok"]:
                return False, "fh mismatch at a=%d b=%d" % (a, b)
    return True, "fh polynomials verified for degree-1 pairs, q=%d" % ctx.q


def _suite_phi(ctx, n, rng, samples):
    from .conjtype import enumerate_polypartitions
    for size in (0, 1, 2):
        for mu in enumerate_polypartitions(ctx, size):
            big = partial_iso.invariant_elem(ctx, mu, 3, normalization="hat")
            small = partial_iso.invariant_elem(ctx, mu, 2, normalization="hat")
            if partial_iso.phi(ctx, big, 2) != small:
                return False, "phi fails on %s" % format_polypartition(mu)
    return True, "phi sends hat elements at n=3 to n=2, q=%d" % ctx.q


def _suite_pi(ctx, n, rng, samples):
    basis = partial_iso.all_pisos(ctx, n)
    for _ in range(samples):
        x = partial_iso.basis_elem(rng.choice(basis))
        y = partial_iso.basis_elem(rng.choice(basis))
        lhs = partial_iso.pi_n(ctx, partial_iso.product(ctx, x, y))
        rhs = partial_iso.pi_n(ctx, x).mul(ctx, partial_iso.pi_n(ctx, y))
        if lhs != rhs:
            return False, "pi_n is not multiplicative"
    return True, "pi_n multiplicative on %d random pairs at (n=%d, q=%d)" % (
        samples, n, ctx.q)


_SUITES = {
    "assoc": (_suite_assoc, 2, 2),
    "naive": (_suite_naive, 2, 3),
    "operators": (_suite_operators, 2, 2),
    "extensions": (_suite_extensions, 2, 2),
    "census": (_suite_census, 2, 2),
    "ranklaw": (_suite_ranklaw, 4, 2),
    "degree1": (_suite_degree1, 2, 3),
    "fh": (_suite_fh, 2, 2),
    "phi": (_suite_phi, 2, 2),
    "pi": (_suite_pi, 2, 2),
}


def cmd_verify(args):
    fn, default_n, default_q = _SUITES[args.suite]
    if args.q is None and args.p is None:
        args.q = default_q
    ctx = _field_from_args(args)
    n = args.n if args.n is not None else default_n
    rng = random.Random(args.seed)
    ok, msg = fn(ctx, n, rng, args.samples)
    print("suite %s: %s (%s)" % (args.suite, "PASS" if ok else "FAIL", msg))
    return 0 if ok else 1


# -- argument parsing ----------------------------------------------------------

def _add_field_flags(p):
    p.add_argument("--q", type=int, help="field size (prime power)")
    p.add_argument("--p", type=int, help="characteristic (with --e)")
    p.add_argument("--e", type=int, default=1, help="extension degree")
    p.add_argument("--threads", type=int, default=None,
                   help="worker hint; results are deterministic regardless")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="glfq",
        description="Conjugacy classes, partial isomorphisms, and generic "
                    "class products over finite general linear groups.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("type", help="conjugacy type of a matrix")
    _add_field_flags(p)
    p.add_argument("--mat", required=True,
                   help="rows separated by ';', entries by ','")
    p.set_defaults(fn=cmd_type)

    p = sub.add_parser("class-size", help="cardinality of a conjugacy class")
    _add_field_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--type", required=True)
    p.set_defaults(fn=cmd_class_size)

    p = sub.add_parser("census", help="bucket GL(n, F_q) by type")
    _add_field_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_census)

    p = sub.add_parser("class-product",
                       help="product of two completed classes at fixed n")
    _add_field_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", required=True, help="polypartition")
    p.add_argument("--b", required=True, help="polypartition")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_class_product)

    p = sub.add_parser("generic-product",
                       help="structure polynomials in X = q^n")
    _add_field_flags(p)
    p.add_argument("--a", required=True, help="polypartition")
    p.add_argument("--b", required=True, help="polypartition")
    p.add_argument("--verify-at", type=int, default=None, metavar="N",
                   help="cross-check against the brute-force product at n=N")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_generic_product)

    p = sub.add_parser("degree1", help="closed-form degree-1 products")
    _add_field_flags(p)
    p.add_argument("--a", required=True, help="field element")
    p.add_argument("--b", required=True, help="field element")
    p.add_argument("--n", type=int, default=None,
                   help="project to GL(n) class products")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_degree1)

    p = sub.add_parser("count", help="extension and subspace counts")
    _add_field_flags(p)
    p.add_argument("--what", choices=["E", "F", "subspaces"], required=True)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--kplus", type=int, default=0)
    p.add_argument("--k1", type=int, default=0)
    p.set_defaults(fn=cmd_count)

    p = sub.add_parser("ranklaw", help="exact rank and dimension laws")
    _add_field_flags(p)
    p.add_argument("--law", choices=["rank", "cond", "dimsum", "count"],
                   required=True)
    for flag in ("d", "a", "b", "c", "dd", "n", "j", "k", "l", "m"):
        p.add_argument("--" + flag, type=int, default=0)
    p.set_defaults(fn=cmd_ranklaw)

    p = sub.add_parser("verify", help="self-verification suites")
    _add_field_flags(p)
    p.add_argument("--suite", choices=sorted(_SUITES), required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(fn=cmd_verify)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit2 as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return 2
    except (ValueError, AssertionError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
