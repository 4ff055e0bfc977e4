"""Exact arithmetic for the coefficient field F_{q^s}((x))^perf.

The scalar tower is built in two layers.  The residue field F_{q^s} with
q = p^v is realised as F_p[g]/(modulus) with elements stored as coordinate
tuples over F_p (constant coordinate first).  On top of it sit perfected
Laurent series: finite sums of monomials c*x^e whose exponents e live in
Z[1/p] (denominators limited to p^E for a configurable depth E), together
with an x-adic precision marker.  A series with precision ``prec`` is known
exactly below x^prec and unknown from x^prec on; exactly known values carry
the infinite sentinel.  All values are immutable after construction and all
arithmetic is exact, so equal inputs always produce identical outputs.

Precision propagates ultrametrically:

* addition keeps ``min(prec_a, prec_b)``,
* multiplication keeps ``min(prec_a + val_b, prec_b + val_a)``,
* inversion keeps ``prec_a - 2*val_a``.

Raising to the q-th power multiplies exponents and precision by q;
q-th roots divide them by q and may hit the perfection depth cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .errors import (
    DivisionByZero,
    PerfectionDepthExceeded,
    PrecisionExhausted,
    ValidationError,
)

INF = math.inf


def is_inf(value):
    return isinstance(value, float) and math.isinf(value)


def vadd(a, b):
    """Add valuations/precisions where +infinity absorbs."""
    if is_inf(a) or is_inf(b):
        return INF
    return a + b


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# dense polynomials over F_p (integer coefficient lists, constant first),
# used only to validate and construct residue-field moduli


def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _fp_trim(out)


def _fp_divmod(a, b, p):
    a = list(a)
    if not b:
        raise ZeroDivisionError
    binv = pow(b[-1], p - 2, p)
    quot = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and _fp_trim(a):
        shift = len(a) - len(b)
        factor = (a[-1] * binv) % p
        quot[shift] = factor
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * bi) % p
        _fp_trim(a)
    return _fp_trim(quot), a


def _fp_monic_polys(p, degree):
    """All monic polynomials of the given degree, ascending lexicographic
    order on the coordinate tuple (constant coordinate most significant)."""
    total = p**degree
    for i in range(total):
        coords = []
        rem = i
        for j in range(degree):
            power = p ** (degree - 1 - j)
            coords.append(rem // power)
            rem %= power
        yield coords + [1]


def _fp_is_irreducible(f, p):
    degree = len(f) - 1
    if degree < 1:
        return False
    if degree == 1:
        return True
    for d in range(1, degree // 2 + 1):
        for cand in _fp_monic_polys(p, d):
            _, rem = _fp_divmod(f, cand, p)
            if not rem:
                return False
    return True


def _first_irreducible(p, degree):
    for cand in _fp_monic_polys(p, degree):
        if _fp_is_irreducible(cand, p):
            return tuple(cand)
    raise ValidationError(f"no irreducible polynomial of degree {degree} found")


# ---------------------------------------------------------------------------
# field configuration and residue-field elements


@dataclass(frozen=True)
class FieldConfig:
    """Parameters of the scalar tower F_p < F_q < F_{q^s}, q = p^v.

    ``modulus`` is the monic irreducible polynomial over F_p (ascending
    coefficients, degree v*s) presenting F_{q^s}; when omitted the
    lexicographically first monic irreducible of that degree is chosen.
    ``perf_depth`` caps exponent denominators at p^E, ``default_xprec``
    is the x-adic precision used when an exact value must be truncated
    (for example when inverting a series with infinitely many digits).
    """

    p: int
    v: int = 1
    s: int = 1
    modulus: tuple = None
    perf_depth: int = None
    default_xprec: Fraction = Fraction(32)

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValidationError(f"p = {self.p} is not prime")
        if self.v < 1 or self.s < 1:
            raise ValidationError("v and s must be positive")
        degree = self.v * self.s
        if self.modulus is None:
            object.__setattr__(self, "modulus", _first_irreducible(self.p, degree))
        else:
            mod = tuple(int(c) % self.p for c in self.modulus)
            object.__setattr__(self, "modulus", mod)
            if len(mod) != degree + 1 or mod[-1] != 1:
                raise ValidationError(
                    f"modulus must be monic of degree {degree} (got {mod})"
                )
            if not _fp_is_irreducible(list(mod), self.p):
                raise ValidationError(f"modulus {mod} is reducible over F_{self.p}")
        if self.perf_depth is None:
            object.__setattr__(self, "perf_depth", 8 * self.v)
        elif self.perf_depth < 0:
            raise ValidationError("perf_depth must be non-negative")
        object.__setattr__(self, "default_xprec", Fraction(self.default_xprec))

    @property
    def q(self):
        return self.p**self.v

    @property
    def degree(self):
        return self.v * self.s

    @property
    def order(self):
        return self.p**self.degree

    # -- element constructors ------------------------------------------------

    def elem(self, value):
        if isinstance(value, FieldElem):
            if value.field != self:
                raise ValidationError("element belongs to a different field")
            return value
        if isinstance(value, int):
            coords = [value % self.p] + [0] * (self.degree - 1)
            return FieldElem(self, tuple(coords))
        coords = tuple(int(c) % self.p for c in value)
        if len(coords) != self.degree:
            raise ValidationError(
                f"expected {self.degree} coordinates, got {len(coords)}"
            )
        return FieldElem(self, coords)

    def zero(self):
        return self.elem(0)

    def one(self):
        return self.elem(1)

    def gen(self):
        if self.degree == 1:
            # g is the root of a degree-one modulus, i.e. a prime-field scalar
            return self.elem(-self.modulus[0])
        return self.elem([0, 1] + [0] * (self.degree - 2))

    def elements(self):
        """All field elements in ascending lexicographic coordinate order."""
        n, p = self.degree, self.p
        total = p**n
        for i in range(total):
            coords = []
            rem = i
            for j in range(n):
                power = p ** (n - 1 - j)
                coords.append(rem // power)
                rem %= power
            yield FieldElem(self, tuple(coords))

    def fq_elements(self):
        """The subfield F_q inside F_{q^s} (fixed points of the q-power map)."""
        return [e for e in self.elements() if e.pow_q(1) == e]


@lru_cache(maxsize=None)
def _reduction_rows(cfg):
    """Coordinates of g^k mod modulus for k = degree .. 2*degree-2."""
    n, p = cfg.degree, cfg.p
    rows = []
    current = [(-cfg.modulus[i]) % p for i in range(n)]  # g^n
    rows.append(tuple(current))
    for _ in range(n - 2):
        shifted = [0] + current[:-1]
        carry = current[-1]
        if carry:
            for i in range(n):
                shifted[i] = (shifted[i] - carry * cfg.modulus[i]) % p
        current = shifted
        rows.append(tuple(current))
    return tuple(rows)


@lru_cache(maxsize=None)
def _frobenius_columns(cfg, k):
    """Images of the basis 1, g, ..., g^{n-1} under y -> y^{p^k}."""
    n = cfg.degree
    cols = []
    for i in range(n):
        e = FieldElem(cfg, tuple(1 if j == i else 0 for j in range(n)))
        img = e
        for _ in range(k):
            img = img._pow_small(cfg.p)
        cols.append(img.coords)
    return tuple(cols)


class FieldElem:
    """Element of F_{q^s}, stored as coordinates over F_p."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = coords

    def _check(self, other):
        if not isinstance(other, FieldElem) or other.field != self.field:
            raise ValidationError("mixed-field arithmetic")

    def __add__(self, other):
        self._check(other)
        p = self.field.p
        return FieldElem(
            self.field,
            tuple((a + b) % p for a, b in zip(self.coords, other.coords)),
        )

    def __neg__(self):
        p = self.field.p
        return FieldElem(self.field, tuple((-a) % p for a in self.coords))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        p = self.field.p
        n = self.field.degree
        prod = [0] * (2 * n - 1)
        for i, ai in enumerate(self.coords):
            if ai:
                for j, bj in enumerate(other.coords):
                    if bj:
                        prod[i + j] = (prod[i + j] + ai * bj) % p
        if n == 1:
            return FieldElem(self.field, (prod[0],))
        rows = _reduction_rows(self.field)
        out = prod[:n]
        for k in range(n, 2 * n - 1):
            carry = prod[k]
            if carry:
                row = rows[k - n]
                for i in range(n):
                    out[i] = (out[i] + carry * row[i]) % p
        return FieldElem(self.field, tuple(out))

    def _pow_small(self, e):
        """Self to a small non-negative integer power (square and multiply)."""
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __pow__(self, e):
        if e < 0:
            return self.inverse()._pow_small(-e)
        return self._pow_small(e)

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero field element")
        # extended Euclid in F_p[y] against the modulus
        p = self.field.p
        mod = list(self.field.modulus)
        r0, r1 = mod, _fp_trim(list(self.coords))
        t0, t1 = [], [1]
        while r1:
            quot, rem = _fp_divmod(r0, r1, p)
            r0, r1 = r1, rem
            prod = _fp_mul(quot, t1, p)
            t_next = [
                ((t0[i] if i < len(t0) else 0) - (prod[i] if i < len(prod) else 0)) % p
                for i in range(max(len(t0), len(prod)))
            ]
            t0, t1 = t1, _fp_trim(t_next)
        # r0 is the gcd, a nonzero constant since the modulus is irreducible
        scale = pow(r0[0], p - 2, p)
        coords = [(scale * (t0[i] if i < len(t0) else 0)) % p
                  for i in range(self.field.degree)]
        return FieldElem(self.field, tuple(coords))

    def pow_p(self, e):
        """y -> y^{p^e}; negative e applies the inverse Frobenius."""
        n = self.field.degree
        k = e % n
        if k == 0:
            return self
        cols = _frobenius_columns(self.field, k)
        p = self.field.p
        out = [0] * n
        for i, ci in enumerate(self.coords):
            if ci:
                col = cols[i]
                for j in range(n):
                    out[j] = (out[j] + ci * col[j]) % p
        return FieldElem(self.field, tuple(out))

    def pow_q(self, e):
        """y -> y^{q^e} with q = p^v."""
        return self.pow_p(e * self.field.v)

    def is_zero(self):
        return not any(self.coords)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, FieldElem)
            and other.field == self.field
            and other.coords == self.coords
        )

    def __hash__(self):
        return hash((self.field.p, self.field.modulus, self.coords))

    def __repr__(self):
        return f"FieldElem{self.coords}"


def field_arith(a, b, op, e=None):
    """Named dispatch over residue-field operations."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "pow_p":
        return a.pow_p(e)
    raise ValidationError(f"unknown field operation {op!r}")


# ---------------------------------------------------------------------------
# exponents in Z[1/p]


@dataclass(frozen=True)
class PerfExp:
    """Exponent num / p^den_exp with p not dividing num unless den_exp = 0."""

    num: int
    den_exp: int

    def to_fraction(self, p):
        return Fraction(self.num, p**self.den_exp)

    @staticmethod
    def from_fraction(fr, p, max_depth=None):
        fr = Fraction(fr)
        den = fr.denominator
        e = 0
        while den % p == 0:
            den //= p
            e += 1
        if den != 1:
            raise ValidationError(
                f"exponent denominator of {fr} is not a power of p = {p}"
            )
        if max_depth is not None and e > max_depth:
            raise PerfectionDepthExceeded(
                f"exponent {fr} needs perfection depth {e} > cap {max_depth}"
            )
        return PerfExp(fr.numerator, e)


def _check_exp(field, fr):
    den = fr.denominator
    if den == 1:
        return fr
    p = field.p
    e = 0
    while den % p == 0:
        den //= p
        e += 1
    if den != 1:
        raise ValidationError(
            f"exponent denominator of {fr} is not a power of p = {p}"
        )
    if e > field.perf_depth:
        raise PerfectionDepthExceeded(
            f"exponent {fr} needs perfection depth {e} > cap {field.perf_depth}"
        )
    return fr


# ---------------------------------------------------------------------------
# perfected Laurent series


class Valuation(NamedTuple):
    value: object  # Fraction, or INF for an exact zero
    exact: bool    # False means "at least this much" (zero modulo precision)


class PerfSeries:
    """Finite sum of monomials c*x^e, exponents in Z[1/p], plus precision."""

    __slots__ = ("field", "terms", "prec")

    def __init__(self, field, terms, prec=INF):
        if not is_inf(prec):
            prec = _check_exp(field, Fraction(prec))
        merged = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for exp, coeff in items:
            exp = Fraction(exp)
            if exp >= prec:
                continue
            if exp in merged:
                coeff = merged[exp] + coeff
            merged[exp] = coeff
        clean = []
        for exp in sorted(merged):
            coeff = merged[exp]
            if coeff.is_zero():
                continue
            _check_exp(field, exp)
            clean.append((exp, coeff))
        self.field = field
        self.terms = tuple(clean)
        self.prec = prec

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, field, prec=INF):
        return cls(field, (), prec)

    @classmethod
    def constant(cls, field, value, prec=INF):
        return cls(field, [(Fraction(0), field.elem(value))], prec)

    @classmethod
    def one(cls, field):
        return cls.constant(field, 1)

    @classmethod
    def x_pow(cls, field, exp, coeff=1, prec=INF):
        return cls(field, [(Fraction(exp), field.elem(coeff))], prec)

    # -- structure ------------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, PerfSeries) or other.field != self.field:
            raise ValidationError("mixed-field series arithmetic")

    def leading(self):
        return self.terms[0] if self.terms else None

    def valuation_lb(self):
        """Exact valuation if a term is known, else the precision bound."""
        return self.terms[0][0] if self.terms else self.prec

    def is_zero(self):
        """Zero modulo the known precision."""
        return not self.terms

    def is_exact_zero(self):
        return not self.terms and is_inf(self.prec)

    def coeff(self, exp):
        exp = Fraction(exp)
        for e, c in self.terms:
            if e == exp:
                return c
            if e > exp:
                break
        return self.field.zero()

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        self._check(other)
        prec = min(self.prec, other.prec)
        return PerfSeries(self.field, list(self.terms) + list(other.terms), prec)

    def __neg__(self):
        return PerfSeries(
            self.field, [(e, -c) for e, c in self.terms], self.prec
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        prec = min(
            vadd(self.prec, other.valuation_lb()),
            vadd(other.prec, self.valuation_lb()),
        )
        acc = {}
        for ea, ca in self.terms:
            for eb, cb in other.terms:
                e = ea + eb
                if e >= prec:
                    continue
                prod = ca * cb
                if e in acc:
                    acc[e] = acc[e] + prod
                else:
                    acc[e] = prod
        return PerfSeries(self.field, acc, prec)

    def scale(self, elem):
        elem = self.field.elem(elem)
        if elem.is_zero():
            return PerfSeries.zero(self.field, self.prec)
        return PerfSeries(
            self.field, [(e, c * elem) for e, c in self.terms], self.prec
        )

    def shift_x(self, exp):
        """Multiply by the exact monomial x^exp."""
        exp = Fraction(exp)
        prec = self.prec if is_inf(self.prec) else self.prec + exp
        return PerfSeries(
            self.field, [(e + exp, c) for e, c in self.terms], prec
        )

    def inv(self, prec=None):
        """Multiplicative inverse, carrying precision prec_a - 2*val_a.

        Exact single monomials invert exactly.  Any other exact input has an
        infinite expansion, which is truncated at the field's default
        relative precision unless an explicit absolute ``prec`` is given.
        """
        lead = self.leading()
        if lead is None:
            if is_inf(self.prec):
                raise DivisionByZero("inverse of the zero series")
            raise PrecisionExhausted(
                f"cannot invert a series known only as O(x^{self.prec})"
            )
        w, c0 = lead
        limit = INF if is_inf(self.prec) else self.prec - 2 * w
        if prec is not None and not is_inf(prec):
            limit = min(limit, Fraction(prec))
        if is_inf(limit):
            if len(self.terms) == 1:
                return PerfSeries(self.field, [(-w, c0.inverse())], INF)
            limit = self.field.default_xprec - w
        if limit <= -w:
            raise PrecisionExhausted(
                "inverse would carry no known digits at the requested precision"
            )
        c0_inv = c0.inverse()
        digits = []
        rem = PerfSeries.one(self.field)
        while rem.terms:
            e_r, c_r = rem.terms[0]
            e_d = e_r - w
            if e_d >= limit:
                break
            c_d = c_r * c0_inv
            digits.append((e_d, c_d))
            mono = PerfSeries(self.field, [(e_d, c_d)])
            rem = rem - mono * self
        return PerfSeries(self.field, digits, limit)

    def frobenius(self, e):
        """Raise to the q^e-th power (q-th roots for negative e)."""
        if e == 0:
            return self
        qe = Fraction(self.field.q) ** e
        prec = self.prec if is_inf(self.prec) else self.prec * qe
        shift = e * self.field.v
        terms = [(exp * qe, c.pow_p(shift)) for exp, c in self.terms]
        return PerfSeries(self.field, terms, prec)

    def root_q(self):
        return self.frobenius(-1)

    def truncate(self, prec):
        if prec is None or is_inf(prec) or prec >= self.prec:
            return self
        return PerfSeries(self.field, self.terms, Fraction(prec))

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, PerfSeries)
            and other.field == self.field
            and other.terms == self.terms
            and other.prec == self.prec
        )

    def __hash__(self):
        return hash((self.field.p, self.field.modulus, self.terms, self.prec))

    def __repr__(self):
        body = " + ".join(f"{c!r}*x^{e}" for e, c in self.terms) or "0"
        tail = "" if is_inf(self.prec) else f" + O(x^{self.prec})"
        return f"<PerfSeries {body}{tail}>"


def ps_arith(a, b, op, prec=None):
    """Named dispatch over series operations (b is ignored for inv)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv(prec=prec)
    raise ValidationError(f"unknown series operation {op!r}")


def ps_frobenius(a, e):
    return a.frobenius(e)


def ps_root_q(a):
    return a.root_q()


def valuation(a):
    """Leading exponent; for a series with no known terms the result is the
    precision bound and is flagged as a lower bound rather than exact."""
    lead = a.leading()
    if lead is not None:
        return Valuation(lead[0], True)
    return Valuation(a.prec, False)
