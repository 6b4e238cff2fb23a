"""Command-line interface: ``unigraded <command> ...``.

Exit codes: 0 success, 2 parse/input error, 3 unknown verdict,
4 cap exceeded, 5 internal invariant failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction

from . import algebra as alg
from . import finite_fields as ff
from .config import CapExceeded, InvariantViolation
from .expr import ParseError, format_terms, parse_terms, parse_unit
from .radicals import (Answer, MinusFourIsFourthPower, OddRootOfUnity, UnitGroup,
                       abs_cogalois_decide, cogalois_decide, contains, is_essential, kneser_decide)
from .rational import cyclotomic_has_unitary_grading, fmt_rat

EXIT_OK, EXIT_PARSE, EXIT_UNKNOWN, EXIT_CAP, EXIT_INVARIANT = 0, 2, 3, 4, 5


class Unknown(Exception):
    """Raised to report a three-valued verdict that came out Unknown."""

    def __init__(self, record: dict):
        self.record = record


def jrat(x: Fraction):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else fmt_rat(x)


def element_text(A: alg.GradedAlgebra, x: alg.AlgebraElement) -> str:
    terms = [(c, A.representative(d)) for d, c in x.coeffs.items()]
    return format_terms(sorted(terms, key=lambda t: t[1].sort_key()))


def certificate_json(cert) -> dict:
    return {"generator_exponents": list(cert.generator_exponents),
            "rational": jrat(cert.rational_part())}


def group_of(text: str) -> UnitGroup:
    units = [parse_unit(t) for t in text.split(";") if t.strip()]
    return UnitGroup(units)


def group_of_terms(terms) -> UnitGroup:
    return UnitGroup([u for _, u in terms])


# -- commands -------------------------------------------------------------

def _not_field_bound(A, x, what):
    # the evaluation map from a non-field Q<U> is not injective, so the
    # algebra minimal polynomial is only a multiple of the true one
    m = alg.min_poly(A, x)
    raise Unknown({"result": {"upper_bound": len(m) - 1, "algebra_min_poly": [jrat(c) for c in m]},
                   "method": "MinPoly",
                   "reason": f"Q<U> is not a field, so the {what} is only bounded by the algebra minimal polynomial "
                             f"of degree {len(m) - 1}"})


def cmd_degree(args):
    terms = parse_terms(args.expr)
    A = alg.build(group_of_terms(terms))
    x = A.from_terms(terms)
    if not kneser_decide(A.group).is_field:
        _not_field_bound(A, x, "degree")
    res = alg.degree_of(A, x)
    if res.method == "MinPoly":
        print("warning: the unit group is not certified co-Galois; degree from the minimal polynomial",
              file=sys.stderr)
    return {"result": res.degree, "method": res.method}, f"{res.degree} ({res.method})"


def cmd_minpoly(args):
    terms = parse_terms(args.expr)
    A = alg.build(group_of_terms(terms))
    if not kneser_decide(A.group).is_field:
        _not_field_bound(A, A.from_terms(terms), "minimal polynomial")
    m = alg.min_poly(A, A.from_terms(terms))
    text = "[" + ", ".join(fmt_rat(c) for c in m) + "]"
    return {"result": [jrat(c) for c in m], "method": "MinPoly"}, f"{text}\n{alg.poly_str(m)}"


def kneser_witness(U: UnitGroup, verdict) -> dict:
    A = alg.build(U)
    a, b = alg.zero_divisor_witness(A, verdict)
    r = verdict.reason
    w = {"zero_divisors": [element_text(A, a), element_text(A, b)]}
    if isinstance(r, OddRootOfUnity):
        w.update(kind="OddRootOfUnity", p=r.p, certificate=certificate_json(r.certificate))
    elif isinstance(r, MinusFourIsFourthPower):
        w.update(kind="MinusFourIsFourthPower", u=str(r.u), certificate=certificate_json(r.certificate))
    return w


def cmd_is_field(args):
    U = group_of(args.gens)
    v = kneser_decide(U)
    if not v.is_field:
        w = kneser_witness(U, v)
        lines = [f"not a field: {v.reason.describe()}",
                 f"zero divisors: ({w['zero_divisors'][0]}) * ({w['zero_divisors'][1]}) = 0"]
        return {"result": "not-a-field", "witness": w}, "\n".join(lines)
    out = {"result": "field", "dimension": U.presentation.order}
    text = f"field of degree {U.presentation.order}"
    if args.samples:
        A = alg.build(U)
        rng = random.Random(args.seed)
        for _ in range(args.samples):
            x = A.random_element(rng)
            if alg.invert(A, x) is None:
                raise InvariantViolation(f"Kneser verdict Field but {x} is not invertible")
        out["inverted_samples"] = args.samples
        text += f"; {args.samples} sampled elements inverted"
    return out, text


def cmd_essential(args):
    U = group_of(args.gens)
    ok, w = is_essential(U)
    out = {"result": ok, "torsion_order": U.torsion_order}
    if w is not None:
        out["witness"] = {"p": w.p, "certificate": certificate_json(w.certificate)}
        return out, f"not essential: {w.describe()}"
    return out, f"essential (roots of unity in U: mu_{U.torsion_order})"


def _tri(args, decide):
    U = group_of(args.gens)
    v = decide(U)
    rec = {"result": v.answer.value, "reason": v.reason}
    if v.answer is Answer.UNKNOWN:
        raise Unknown(rec)
    return rec, str(v)


def cmd_cogalois(args):
    return _tri(args, cogalois_decide)


def cmd_abs_cogalois(args):
    return _tri(args, abs_cogalois_decide)


def cmd_subfields(args):
    U = group_of(args.gens)
    A = alg.build(U)
    subs = alg.subfield_lattice(A)
    listing = []
    for s in subs:
        units = [str(A.representative(g)) for g in s.generators]
        listing.append({"order": s.order, "generators": [list(g) for g in s.generators], "units": units})
    lines = ["D = " + (" x ".join(f"Z/{m}" for m in A.moduli) or "0") + f", {len(subs)} subgroups"]
    for item in listing:
        lines.append(f"  degree {item['order']}: Q(" + ", ".join(item["units"] or ["1"]) + ")")
    return {"result": {"count": len(subs), "subgroups": listing}}, "\n".join(lines)


def cmd_member(args):
    U = group_of(args.gens)
    x = parse_unit(args.expr)
    cert = contains(U, x)
    if cert is None:
        return {"result": False}, f"{x} is not in U"
    return ({"result": True, "witness": certificate_json(cert)},
            f"{x} = {fmt_rat(cert.rational_part())} * prod g_j^n_j with n = {list(cert.generator_exponents)}")


def cmd_ff_sweep(args):
    records = ff.sweep(args.qmax, args.nmax, jobs=args.jobs)
    if args.figure:
        from .plotting import sweep_heatmap
        sweep_heatmap(records, args.figure)
    rows = [r.as_dict() for r in records]
    if args.format == "csv":
        buf = io.StringIO()
        wr = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [])
        wr.writeheader()
        wr.writerows(rows)
        text = buf.getvalue().rstrip("\n")
    else:
        text = "\n".join(json.dumps(r) for r in rows)
    return {"result": rows}, text


def cmd_ff_grading(args):
    q, n = args.q, args.n
    w = ff.construct_grading(q, n)
    exists = ff.grading_exists(q, n)
    rep = ff.kneser_subgroup(q, n)
    h0, h1 = ff.herbrand_check(q, n)
    out = {"q": q, "n": n, "grading_exists": exists,
           "witness_a": w.a if w else None, "x": list(w.x) if w else None,
           "norm_one": ff.norm_one_check(q, n), "h1": h1, "h0": h0,
           "h1_classical": ff.h1_classical(q, n),
           "uprime": {"index": rep.index, "mu_n_L": rep.mu_n_L, "mu_n_K": rep.mu_n_K,
                      "hypotheses_hold": rep.hypotheses_hold, "sequence_ok": rep.sequence_ok}}
    if (w is not None) != exists:
        raise InvariantViolation(f"construct_grading and the ered criterion disagree at ({q}, {n})")
    lines = [f"F_{q}^{n} | F_{q}: " + (f"graded by x with x^{n} = {w.a}, x = {list(w.x)}" if w else "no unitary grading"),
             f"|mu_n(L)| = {rep.mu_n_L}, |mu_n(K)| = {rep.mu_n_K}, H^1 = {h1}, H^0 = {h0}, |U'/K^x| = {rep.index}"]
    return {"result": out}, "\n".join(lines)


def cmd_cyclotomic(args):
    ok = cyclotomic_has_unitary_grading(args.n)
    return {"result": ok}, ("true" if ok else "false")


def cmd_eval(args):
    terms = parse_terms(args.expr)
    A = alg.build(group_of_terms(terms))
    z = alg.complex_eval(A, A.from_terms(terms), args.prec)
    from mpmath import mp
    re, im = z.midpoint()
    digits = max(5, int(args.prec * 0.30103))
    with mp.workprec(z.precision):
        re_s, im_s = mp.nstr(re, digits), mp.nstr(im, digits)
        rad = mp.nstr(z.radius, 3)
    return ({"result": {"re": re_s, "im": im_s, "radius": rad}},
            f"{re_s} + {im_s}*i  (+/- {rad})")


# -- wiring ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for sampled checks")

    p = argparse.ArgumentParser(prog="unigraded", description="Exact computations in graded radical algebras.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    add("degree", cmd_degree, "degree of an expression over Q").add_argument("expr")
    add("minpoly", cmd_minpoly, "minimal polynomial (constant term first)").add_argument("expr")
    for name, fn, h in [("is-field", cmd_is_field, "Kneser field test"),
                        ("essential", cmd_essential, "essentiality of Q^x in U"),
                        ("cogalois", cmd_cogalois, "co-Galois decision"),
                        ("abs-cogalois", cmd_abs_cogalois, "absolute co-Galois decision"),
                        ("subfields", cmd_subfields, "subgroups of D")]:
        sp = add(name, fn, h)
        sp.add_argument("--gens", required=True, help="units separated by ';'")
        if name == "is-field":
            sp.add_argument("--samples", type=int, default=0, help="invert this many random elements")
    sp = add("member", cmd_member, "membership certificate")
    sp.add_argument("--gens", required=True)
    sp.add_argument("expr")
    sp = add("ff-sweep", cmd_ff_sweep, "finite-field grading sweep")
    sp.add_argument("--qmax", type=int, default=31)
    sp.add_argument("--nmax", type=int, default=8)
    sp.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    sp.add_argument("--figure", help="write a heatmap to this path")
    sp.add_argument("--jobs", type=int, default=1)
    sp = add("ff-grading", cmd_ff_grading, "grading of F_(q^n) | F_q")
    sp.add_argument("q", type=int)
    sp.add_argument("n", type=int)
    add("cyclotomic", cmd_cyclotomic, "unitary grading of Q(zeta_n) | Q").add_argument("n", type=int)
    sp = add("eval", cmd_eval, "numerical value with an error bound")
    sp.add_argument("expr")
    sp.add_argument("--prec", type=int, default=64)
    return p


def run(argv=None) -> tuple[int, str]:
    """Execute a command; returns (exit code, output text)."""
    p = build_parser()
    args = p.parse_args(argv)
    record = {"command": args.command}
    try:
        payload, text = args.fn(args)
        record["status"] = "ok"
        record.update(payload)
        code = EXIT_OK
    except Unknown as u:
        record.update(status="unknown", **u.record)
        text, code = f"unknown: {u.record['reason']}", EXIT_UNKNOWN
    except ParseError as e:
        record.update(status="error", result=str(e))
        text, code = f"parse error {e}", EXIT_PARSE
    except CapExceeded as e:
        record.update(status="error", result=str(e))
        text, code = f"cap exceeded: {e}", EXIT_CAP
    except InvariantViolation as e:
        record.update(status="error", result=str(e))
        text, code = f"invariant violation: {e}", EXIT_INVARIANT
    except ValueError as e:
        record.update(status="error", result=str(e))
        text, code = f"error: {e}", EXIT_PARSE
    if args.json:
        text = json.dumps(record)
    return code, text


def main(argv=None) -> int:
    code, text = run(argv)
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
