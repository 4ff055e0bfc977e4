"""Command-line surface exposing every kernel operation reproducibly.

One invocation runs one subcommand, reads values either from positional
grammar strings or from a JSON input document (``-i FILE``), and writes a
single JSON document ``{"manifest": ..., "result": ...}`` in canonical byte
form. The manifest records the field configuration, truncation order,
x-adic precision, perfection depth, the command with its scalar arguments,
and a digest of every parsed input, which is enough to reproduce the output
bit for bit.

Exit codes: 0 success, 2 parse or validation error, 3 precondition
violation, 4 non-convergence or a failed residual check, 5 a solution
leaves the configured scalar field.
"""

import argparse
import dataclasses
import json
import sys
from fractions import Fraction

from .carlitz import bracket, carlitz_d, carlitz_delta, tau_power
from .errors import KernelError, ResidualCheckFailed, ValidationError
from .fields import FieldConfig
from .jsonio import (
    build_manifest,
    canonical_dumps,
    comp_value,
    decode_field,
    decode_implicit,
    decode_ode,
    decode_riccati,
    encode_certificate,
    encode_comp,
    encode_normal_form,
    encode_perf,
    encode_problem,
    encode_series,
    encode_unit_factorization,
    perf_value,
    series_value,
)
from .ore import OreFraction, factor_unit, fraction_normalize, invert_unit, ore_left_multiple
from .series import cs_eval, growth_certificate
from .solvers import (
    normalize_time_change,
    residual,
    riccati_series,
    solve_implicit,
    solve_ode,
    solve_riccati,
    untransform_ode_solution,
)
from .textio import emit_series

COMMANDS = (
    "add",
    "compose",
    "power",
    "invert",
    "factor",
    "ore",
    "fraction-normalize",
    "tau",
    "delta",
    "d",
    "bracket",
    "solve-implicit",
    "solve-ode",
    "solve-riccati",
    "eval",
    "certify",
    "residual-check",
)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="characteristic of the base field")
    common.add_argument("--v", type=int, help="q = p^v")
    common.add_argument("--s", type=int, help="scalars live in F_{q^s}")
    common.add_argument("--mod", help="modulus coefficients over F_p, ascending, comma-separated")
    common.add_argument("--perf-depth", type=int, help="cap exponent denominators at p^E")
    common.add_argument("--order", type=int, help="truncation order N")
    common.add_argument("--xprec", help="x-adic precision as num/den_exp, meaning num / p^den_exp")
    common.add_argument("--branch", choices=["zero", "nonzero"], help="Riccati constant-term branch")
    common.add_argument("--check", action="store_true", help="back-substitute and fail on nonzero residual")
    common.add_argument("-i", "--input", metavar="FILE", help="JSON input document")
    common.add_argument("-o", "--output", metavar="FILE", help="write the output document here")

    parser = argparse.ArgumentParser(prog="fqlin", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)

    def sub(name, help_text, *positionals, **options):
        p = subs.add_parser(name, parents=[common], help=help_text)
        for pos in positionals:
            p.add_argument(pos, nargs="?", help="series expression (or supply it in the input document)")
        for flag, kwargs in options.items():
            p.add_argument(f"--{flag}", **kwargs)
        return p

    sub("add", "sum of two series", "a", "b")
    sub("compose", "functional composition a o b", "a", "b")
    sub("power", "k-th compositional self-power", "z", k={"type": int, "required": True})
    sub("invert", "compositional inverse of a unit", "u")
    sub("factor", "split off the t^[q^m] monomial factor of a series", "c")
    sub("ore", "left Ore cofactors a', b' with a' o b = b' o a", "a", "b")
    sub("fraction-normalize", "root twist plus single series form of a left fraction", "denom", "numer")
    sub("tau", "apply the Frobenius twist j times", "u", j={"type": int, "required": True})
    sub("delta", "the difference operator u(x t) - x u(t)", "u")
    sub("d", "the Carlitz derivative", "u")
    sub("bracket", "the element x^{q^k} - x", k={"type": int, "required": True})
    sub("solve-implicit", "solve an implicit composition equation from the input document")
    sub("solve-ode", "solve d z = sum a_jk tau^j z^{o k} from the input document")
    sub("solve-riccati", "solve d y = lam (y o y) + P(y) + R from the input document")
    sub("eval", "evaluate a composition series at a scalar point", "u", "t0")
    sub("certify", "growth certificate of stored coefficients", "u")
    sub("residual-check", "back-substitute a candidate into a problem")
    return parser


def _load_doc(args):
    if not args.input:
        return {}
    try:
        with open(args.input, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise ValidationError(f"cannot read input document: {exc}")
    except json.JSONDecodeError as exc:
        raise ValidationError(f"input document is not valid JSON: {exc}")


def _resolve_field(args, doc):
    if args.p is not None:
        kwargs = {"p": args.p}
        if args.v is not None:
            kwargs["v"] = args.v
        if args.s is not None:
            kwargs["s"] = args.s
        if args.mod is not None:
            try:
                kwargs["modulus"] = tuple(int(c) for c in args.mod.split(","))
            except ValueError:
                raise ValidationError(f"--mod must be comma-separated integers, got {args.mod!r}")
        if args.perf_depth is not None:
            kwargs["perf_depth"] = args.perf_depth
        return FieldConfig(**kwargs)
    if "field" in doc:
        field = decode_field(doc["field"])
        if args.perf_depth is not None:
            field = dataclasses.replace(field, perf_depth=args.perf_depth)
        return field
    raise ValidationError("no field configured: pass --p or an input document with a field entry")


def _resolve_xprec(args, field):
    if args.xprec is None:
        return None
    num, _, den = args.xprec.partition("/")
    try:
        return Fraction(int(num), field.p ** int(den or "0"))
    except ValueError:
        raise ValidationError(f"--xprec must look like num or num/den_exp, got {args.xprec!r}")


def _raw(args, doc, name):
    value = getattr(args, name, None)
    if value is None:
        value = doc.get(name)
    if value is None:
        raise ValidationError(f"missing input {name!r}: pass it positionally or in the input document")
    return value


def _series_result(value):
    return {"value": encode_series(value), "text": emit_series(value)}


def _required_order(args):
    if args.order is None:
        raise ValidationError("this command needs --order N")
    return args.order


def _first_nonzero_index(res):
    """Least index whose coefficient is certifiably nonzero, or None.

    Residuals keep zero-modulo-precision coefficients, so a stored term does
    not by itself witness failure; only a coefficient with a certain digit
    does."""
    bad = [k for k, c in res.terms.items() if not c.is_zero()]
    return min(bad) if bad else None


def _run_check(prob, candidate, order):
    res = residual(prob, candidate, order)
    bad = _first_nonzero_index(res)
    if bad is not None:
        raise ResidualCheckFailed(f"back-substituted residual is nonzero at index {bad}")
    return {"residual_zero": True}


def _execute(args):
    doc = _load_doc(args)
    field = _resolve_field(args, doc)
    xprec = _resolve_xprec(args, field)
    inputs = {}
    extra_args = {}
    code = 0

    def manifest():
        extra = {"args": extra_args} if extra_args else None
        return build_manifest(args.command, field, order=args.order, xprec=xprec, inputs=inputs, extra=extra)

    cmd = args.command
    if cmd == "add":
        a = series_value(field, _raw(args, doc, "a"))
        b = series_value(field, _raw(args, doc, "b"))
        inputs["a"], inputs["b"] = encode_series(a), encode_series(b)
        if type(a) is not type(b):
            raise ValidationError("add needs two series of the same kind")
        result = _series_result(a + b)
    elif cmd == "compose":
        a = comp_value(field, _raw(args, doc, "a"))
        b = comp_value(field, _raw(args, doc, "b"))
        inputs["a"], inputs["b"] = encode_comp(a), encode_comp(b)
        result = _series_result(a.compose(b))
    elif cmd == "power":
        z = comp_value(field, _raw(args, doc, "z"))
        inputs["z"] = encode_comp(z)
        extra_args["k"] = args.k
        result = _series_result(z.self_power(args.k))
    elif cmd == "invert":
        u = comp_value(field, _raw(args, doc, "u"))
        inputs["u"] = encode_comp(u)
        result = _series_result(invert_unit(u, order=args.order, xprec=xprec))
    elif cmd == "factor":
        c = comp_value(field, _raw(args, doc, "c"))
        inputs["c"] = encode_comp(c)
        fact = factor_unit(c)
        result = encode_unit_factorization(fact)
        result["text"] = emit_series(fact.unit)
    elif cmd == "ore":
        a = comp_value(field, _raw(args, doc, "a"))
        b = comp_value(field, _raw(args, doc, "b"))
        inputs["a"], inputs["b"] = encode_comp(a), encode_comp(b)
        a_prime, b_prime = ore_left_multiple(a, b, order=args.order)
        result = {
            "a_prime": encode_comp(a_prime),
            "a_prime_text": emit_series(a_prime),
            "b_prime": encode_comp(b_prime),
            "b_prime_text": emit_series(b_prime),
        }
    elif cmd == "fraction-normalize":
        denom = comp_value(field, _raw(args, doc, "denom"))
        numer = comp_value(field, _raw(args, doc, "numer"))
        inputs["denom"], inputs["numer"] = encode_comp(denom), encode_comp(numer)
        nf = fraction_normalize(OreFraction(denom=denom, numer=numer), order=args.order, xprec=xprec)
        result = encode_normal_form(nf)
        result["text"] = emit_series(nf.series)
    elif cmd == "tau":
        u = comp_value(field, _raw(args, doc, "u"))
        inputs["u"] = encode_comp(u)
        extra_args["j"] = args.j
        result = _series_result(tau_power(u, args.j))
    elif cmd == "delta":
        u = comp_value(field, _raw(args, doc, "u"))
        inputs["u"] = encode_comp(u)
        result = _series_result(carlitz_delta(u))
    elif cmd == "d":
        u = comp_value(field, _raw(args, doc, "u"))
        inputs["u"] = encode_comp(u)
        result = _series_result(carlitz_d(u))
    elif cmd == "bracket":
        extra_args["k"] = args.k
        result = _series_result(bracket(field, args.k))
    elif cmd == "solve-implicit":
        prob = decode_implicit(field, doc)
        inputs["problem"] = encode_problem(prob)
        extra_args["check"] = args.check
        z, cert = solve_implicit(prob, _required_order(args), xprec=xprec)
        result = {
            "z": encode_comp(z),
            "text": emit_series(z),
            "certificate": encode_certificate(cert, field.p),
        }
        if args.check:
            result["check"] = _run_check(prob, z, args.order)
    elif cmd == "solve-ode":
        prob = decode_ode(field, doc)
        inputs["problem"] = encode_problem(prob)
        extra_args["check"] = args.check
        norm, gamma = normalize_time_change(prob)
        zp, cert = solve_ode(norm, _required_order(args), xprec=xprec)
        z = zp if norm is prob else untransform_ode_solution(zp, gamma)
        result = {
            "z": encode_comp(z),
            "text": emit_series(z),
            "gamma": encode_perf(gamma),
            "certificate": encode_certificate(growth_certificate(z), field.p),
        }
        if args.check:
            result["check"] = _run_check(prob, z, args.order)
    elif cmd == "solve-riccati":
        if args.branch is not None:
            doc = dict(doc)
            doc["branch"] = args.branch
        prob = decode_riccati(field, doc)
        inputs["problem"] = encode_problem(prob)
        extra_args["branch"] = prob.branch
        extra_args["check"] = args.check
        c, a = solve_riccati(prob, _required_order(args), xprec=xprec)
        y = riccati_series(c, a, field)
        result = {
            "c": encode_perf(c),
            "c_text": emit_series(c),
            "a": [encode_perf(item) for item in a],
            "series": encode_comp(y),
            "text": emit_series(y),
        }
        if args.check:
            result["check"] = _run_check(prob, y, args.order)
    elif cmd == "eval":
        u = comp_value(field, _raw(args, doc, "u"))
        t0 = perf_value(field, _raw(args, doc, "t0"))
        inputs["u"], inputs["t0"] = encode_comp(u), encode_perf(t0)
        value = cs_eval(u, t0)
        result = _series_result(value)
    elif cmd == "certify":
        u = comp_value(field, _raw(args, doc, "u"))
        inputs["u"] = encode_comp(u)
        result = encode_certificate(growth_certificate(u), field.p)
    elif cmd == "residual-check":
        kind = doc.get("type")
        if kind not in ("implicit", "ode", "riccati"):
            raise ValidationError('residual-check needs "type": implicit, ode, or riccati')
        problem_doc = doc.get("problem")
        if not isinstance(problem_doc, dict):
            raise ValidationError('residual-check needs a "problem" object')
        decoder = {"implicit": decode_implicit, "ode": decode_ode, "riccati": decode_riccati}[kind]
        prob = decoder(field, problem_doc)
        candidate = comp_value(field, _raw(args, doc, "candidate"))
        inputs["problem"] = encode_problem(prob)
        inputs["candidate"] = encode_comp(candidate)
        extra_args["type"] = kind
        res = residual(prob, candidate, _required_order(args))
        zero = _first_nonzero_index(res) is None
        result = {"residual": encode_comp(res), "text": emit_series(res), "zero": zero}
        if not zero:
            code = ResidualCheckFailed.exit_code
    else:
        raise ValidationError(f"unknown command {cmd!r}")

    return {"manifest": manifest(), "result": result}, code


def run_command(argv):
    """Exit code plus output document for one command line."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else 2), None
    try:
        out, code = _execute(args)
    except KernelError as exc:
        detail = f"error: {type(exc).__name__}: {exc}"
        if getattr(exc, "required_degree", None) is not None:
            detail += f" (required relative degree {exc.required_degree})"
        print(detail, file=sys.stderr)
        return exc.exit_code, None
    text = canonical_dumps(out)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return code, out


def main(argv=None):
    code, _ = run_command(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
