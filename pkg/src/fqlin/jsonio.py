"""JSON documents for kernel values, canonical bytes, and input digests.

Every value the command line reads or writes has a document form built from
exact integers only:

* field config       ``{"p": 2, "v": 1, "s": 1, "modulus": [0, 1]}``
* field element      coordinate array over F_p, e.g. ``[1, 0]``
* exponent in Z[1/p] ``{"num": 1, "den_exp": 2}`` meaning num / p^den_exp
* twisted series     ``{"prec": <exp>|null, "terms": [{"e": <exp>, "c": [..]}]}``
* composition series ``{"N": 8|null, "terms": [{"k": -1, "coef": <series>}]}``
* left fraction      ``{"denom": <comp>, "numer": <comp>}``

``canonical_dumps`` fixes one byte encoding per document (sorted keys, no
whitespace, trailing newline) so that digests and golden files are stable.
"""

import hashlib
import json
from fractions import Fraction

from .errors import ValidationError
from .fields import FieldConfig, PerfSeries, is_inf
from .ore import OreFraction
from .series import CompSeries
from .solvers import ImplicitProblem, OdeProblem, RiccatiProblem
from .textio import parse_comp_series, parse_perf_series


def _require(cond, message):
    if not cond:
        raise ValidationError(message)


def _int(value, what):
    _require(isinstance(value, int) and not isinstance(value, bool), f"{what} must be an integer")
    return value


def encode_exp(e, p):
    e = Fraction(e)
    den = e.denominator
    den_exp = 0
    while den > 1:
        _require(den % p == 0, f"exponent denominator {e.denominator} is not a power of {p}")
        den //= p
        den_exp += 1
    return {"num": e.numerator, "den_exp": den_exp}


def decode_exp(doc, p):
    _require(isinstance(doc, dict), "exponent must be an object")
    return Fraction(_int(doc.get("num"), "num"), p ** _int(doc.get("den_exp"), "den_exp"))


def encode_field(field):
    return {"p": field.p, "v": field.v, "s": field.s, "modulus": list(field.modulus)}


def decode_field(doc):
    _require(isinstance(doc, dict), "field config must be an object")
    kwargs = {"p": _int(doc.get("p"), "p")}
    for name in ("v", "s", "perf_depth"):
        if doc.get(name) is not None:
            kwargs[name] = _int(doc[name], name)
    if doc.get("modulus") is not None:
        _require(isinstance(doc["modulus"], list), "modulus must be an array")
        kwargs["modulus"] = tuple(_int(c, "modulus coefficient") for c in doc["modulus"])
    return FieldConfig(**kwargs)


def encode_elem(c):
    return list(c.coords)


def encode_perf(a):
    prec = None if is_inf(a.prec) else encode_exp(a.prec, a.field.p)
    return {
        "prec": prec,
        "terms": [{"e": encode_exp(e, a.field.p), "c": encode_elem(c)} for e, c in a.terms],
    }


def decode_perf(field, doc):
    _require(isinstance(doc, dict), "series must be an object")
    terms = []
    for item in doc.get("terms", []):
        _require(isinstance(item, dict), "series term must be an object")
        coords = item.get("c")
        _require(isinstance(coords, list), "coefficient must be a coordinate array")
        terms.append((decode_exp(item.get("e"), field.p), field.elem(coords)))
    prec = doc.get("prec")
    if prec is None:
        return PerfSeries(field, terms)
    return PerfSeries(field, terms, decode_exp(prec, field.p))


def encode_comp(u):
    order = None if is_inf(u.order) else u.order
    return {
        "N": order,
        "terms": [{"k": k, "coef": encode_perf(u.terms[k])} for k in sorted(u.terms)],
    }


def decode_comp(field, doc):
    _require(isinstance(doc, dict), "composition series must be an object")
    terms = {}
    for item in doc.get("terms", []):
        _require(isinstance(item, dict), "composition term must be an object")
        terms[_int(item.get("k"), "k")] = decode_perf(field, item.get("coef"))
    order = doc.get("N", None)
    if order is None:
        return CompSeries(field, terms)
    return CompSeries(field, terms, _int(order, "N"))


def comp_value(field, value):
    """A composition series from either a grammar string or a document."""
    if isinstance(value, str):
        return parse_comp_series(field, value)
    return decode_comp(field, value)


def perf_value(field, value):
    if isinstance(value, str):
        return parse_perf_series(field, value)
    return decode_perf(field, value)


def series_value(field, value):
    """Auto-detecting decode: documents carry an "N" key exactly when they
    are composition series; strings are detected by the token ``t``."""
    if isinstance(value, str):
        from .textio import parse_series

        return parse_series(field, value)
    _require(isinstance(value, dict), "series value must be a string or object")
    if "N" in value or any("k" in item for item in value.get("terms", []) if isinstance(item, dict)):
        return decode_comp(field, value)
    return decode_perf(field, value)


def encode_series(value):
    if isinstance(value, CompSeries):
        return encode_comp(value)
    return encode_perf(value)


def encode_fraction(f):
    return {"denom": encode_comp(f.denom), "numer": encode_comp(f.numer)}


def decode_fraction(field, doc):
    _require(isinstance(doc, dict), "fraction must be an object")
    return OreFraction(
        denom=comp_value(field, doc.get("denom")),
        numer=comp_value(field, doc.get("numer")),
    )


def encode_unit_factorization(fact):
    return {"shift": fact.shift, "unit": encode_comp(fact.unit)}


def encode_normal_form(nf):
    return {"shift": nf.shift, "series": encode_comp(nf.series)}


def encode_certificate(cert, p):
    order = None if is_inf(cert.order) else cert.order
    return {"kappa": encode_exp(cert.kappa, p), "order": order}


def decode_implicit(field, doc):
    _require(isinstance(doc, dict), "implicit problem must be an object")
    coeffs = doc.get("P")
    _require(isinstance(coeffs, list), "P must be an array of composition series")
    nu = doc.get("nu", 0)
    return ImplicitProblem(
        P=tuple(comp_value(field, item) for item in coeffs),
        nu=_int(nu, "nu"),
    )


def decode_ode(field, doc):
    _require(isinstance(doc, dict), "differential problem must be an object")
    entries = doc.get("a")
    _require(isinstance(entries, list), "a must be an array of {j, k, coef} entries")
    a = {}
    for item in entries:
        _require(isinstance(item, dict), "right-side entry must be an object")
        key = (_int(item.get("j"), "j"), _int(item.get("k"), "k"))
        a[key] = perf_value(field, item.get("coef"))
    return OdeProblem(field=field, a=a)


def decode_riccati(field, doc):
    _require(isinstance(doc, dict), "Riccati problem must be an object")
    lam = doc.get("lam")
    _require(lam is not None, "Riccati problem needs lam")

    def keyed(name):
        out = {}
        for item in doc.get(name) or []:
            _require(isinstance(item, dict), f"{name} entry must be an object")
            out[_int(item.get("k"), "k")] = perf_value(field, item.get("coef"))
        return out

    return RiccatiProblem(
        lam=perf_value(field, lam),
        p=keyed("p"),
        r=keyed("r"),
        branch=doc.get("branch", "zero"),
    )


def encode_problem(prob):
    if isinstance(prob, ImplicitProblem):
        return {"nu": prob.nu, "P": [encode_comp(c) for c in prob.P]}
    if isinstance(prob, OdeProblem):
        return {
            "a": [
                {"j": j, "k": k, "coef": encode_perf(prob.a[(j, k)])}
                for j, k in sorted(prob.a)
            ]
        }
    if isinstance(prob, RiccatiProblem):
        return {
            "lam": encode_perf(prob.lam),
            "p": [{"k": k, "coef": encode_perf(prob.p[k])} for k in sorted(prob.p)],
            "r": [{"k": k, "coef": encode_perf(prob.r[k])} for k in sorted(prob.r)],
            "branch": prob.branch,
        }
    raise ValidationError(f"cannot encode {type(prob).__name__}")


def canonical_dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"


def digest(obj):
    return hashlib.sha256(canonical_dumps(obj).encode("ascii")).hexdigest()


def build_manifest(command, field, order=None, xprec=None, inputs=None, extra=None):
    doc = {
        "command": command,
        "field": encode_field(field),
        "order": None if order is None or is_inf(order) else int(order),
        "xprec": None if xprec is None else encode_exp(xprec, field.p),
        "perf_depth": field.perf_depth,
        "inputs": {name: digest(value) for name, value in (inputs or {}).items()},
    }
    if extra:
        doc.update(extra)
    return doc
