"""F_q-linear series and their twisted composition.

A composition series is a finite F_q-linear combination u = sum c_k t^{q^k}
with coefficients in the perfected scalar field, plus an order marker:
``order`` = N means the coefficients at indices 0..N are accounted for and
anything at index N+1 and beyond is unknown, so u is carried modulo
O(t^{q^{N+1}}).  Composition twists coefficients by the q-power Frobenius,

    (a o b)_l  =  sum_{n+j=l} a_n * b_j^{q^n},

which makes the identity t a two-sided unit and keeps both distributive
laws.  Negative indices are allowed: t^{q^{-j}} stands for the q^j-th root
twist, available because the scalars are perfected.  Exact zero
coefficients are never stored; zero-to-x-precision coefficients are kept
because they still carry information.

A growth certificate for u is the number kappa >= 0 with
v(c_k) >= -kappa * q^k for every known coefficient.  Evaluation at a point
t0 with v(t0) > kappa then converges, and cutting the sum after index N
leaves a tail of valuation at least q^{N+1} * (v(t0) - kappa).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import OutsideConvergenceDomain, ValidationError
from .fields import INF, PerfSeries, is_inf, vadd, valuation


class CompSeries:
    """Finite sum of c_k t^{q^k} known up to index ``order``."""

    __slots__ = ("field", "terms", "order")

    def __init__(self, field, terms, order=INF):
        if not is_inf(order):
            order = int(order)
        clean = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for k, coef in items:
            k = int(k)
            if not isinstance(coef, PerfSeries) or coef.field != field:
                raise ValidationError("coefficients must be series over the same field")
            if not is_inf(order) and k > order:
                continue
            if k in clean:
                coef = clean[k] + coef
            clean[k] = coef
        self.field = field
        self.terms = {k: c for k, c in sorted(clean.items()) if not c.is_exact_zero()}
        self.order = order

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, field, order=INF):
        return cls(field, {}, order)

    @classmethod
    def identity(cls, field):
        return cls(field, {0: PerfSeries.one(field)})

    @classmethod
    def monomial(cls, field, k, coef=None):
        if coef is None:
            coef = PerfSeries.one(field)
        elif not isinstance(coef, PerfSeries):
            coef = PerfSeries.constant(field, coef)
        return cls(field, {k: coef})

    # -- structure ------------------------------------------------------------

    def coeff(self, k):
        return self.terms.get(k, PerfSeries.zero(self.field))

    def min_index(self):
        """Smallest index whose coefficient might be nonzero, or None for an
        exact zero series."""
        if self.terms:
            return min(self.terms)
        if is_inf(self.order):
            return None
        return self.order + 1

    def is_zero(self):
        return not self.terms

    def is_exact_zero(self):
        return not self.terms and is_inf(self.order)

    def _check(self, other):
        if not isinstance(other, CompSeries) or other.field != self.field:
            raise ValidationError("mixed-field composition arithmetic")

    # -- additive structure ---------------------------------------------------

    def __add__(self, other):
        self._check(other)
        order = min(self.order, other.order)
        merged = dict(self.terms)
        for k, c in other.terms.items():
            merged[k] = merged[k] + c if k in merged else c
        return CompSeries(self.field, merged, order)

    def __neg__(self):
        return CompSeries(
            self.field, {k: -c for k, c in self.terms.items()}, self.order
        )

    def __sub__(self, other):
        return self + (-other)

    # -- scalar action --------------------------------------------------------

    def scale_left(self, gamma):
        """(gamma t) o self: every coefficient is multiplied by gamma."""
        gamma = self._as_scalar(gamma)
        return CompSeries(
            self.field, {k: gamma * c for k, c in self.terms.items()}, self.order
        )

    def scale_right(self, gamma):
        """self o (gamma t): coefficient k picks up gamma^{q^k}."""
        gamma = self._as_scalar(gamma)
        return CompSeries(
            self.field,
            {k: c * gamma.frobenius(k) for k, c in self.terms.items()},
            self.order,
        )

    def _as_scalar(self, gamma):
        if isinstance(gamma, PerfSeries):
            if gamma.field != self.field:
                raise ValidationError("scalar from a different field")
            return gamma
        return PerfSeries.constant(self.field, gamma)

    # -- composition ----------------------------------------------------------

    def compose(self, other):
        self._check(other)
        ma = self.min_index()
        mb = other.min_index()
        if ma is None or mb is None:
            return CompSeries.zero(self.field)
        order = min(vadd(self.order, mb), vadd(other.order, ma))
        acc = {}
        for n, a_n in self.terms.items():
            for j, b_j in other.terms.items():
                l = n + j
                if l > order:
                    continue
                part = a_n * b_j.frobenius(n)
                acc[l] = acc[l] + part if l in acc else part
        return CompSeries(self.field, acc, order)

    def self_power(self, k):
        """k-fold composition of self with itself (k >= 0)."""
        if k < 0:
            raise ValidationError("compositional power must be non-negative")
        result = CompSeries.identity(self.field)
        for _ in range(k):
            result = self.compose(result)
        return result

    # -- truncation and evaluation ---------------------------------------------

    def truncate(self, order):
        if order is None or is_inf(order) or order >= self.order:
            return self
        return CompSeries(self.field, self.terms, int(order))

    def truncate_x(self, xprec):
        """Truncate every coefficient to the given x-adic precision."""
        if xprec is None:
            return self
        return CompSeries(
            self.field,
            {k: c.truncate(xprec) for k, c in self.terms.items()},
            self.order,
        )

    def eval_at(self, t0, cert=None, term_log=None):
        """Evaluate at a scalar point inside the convergence domain.

        The result precision accounts both for coefficient x-precision and,
        when the order is finite, for the certified tail bound
        q^{order+1} * (v(t0) - kappa).
        """
        if not isinstance(t0, PerfSeries) or t0.field != self.field:
            raise ValidationError("evaluation point must be a scalar series")
        if cert is None:
            cert = growth_certificate(self)
        if t0.is_exact_zero():
            return PerfSeries.zero(self.field)
        vt0 = valuation(t0)
        if vt0.value <= cert.kappa:
            detail = "" if vt0.exact else " (valuation known only as a bound)"
            raise OutsideConvergenceDomain(
                f"v(t0) = {vt0.value} is not above kappa = {cert.kappa}{detail}"
            )
        total = PerfSeries.zero(self.field)
        for k, c_k in self.terms.items():
            term = c_k * t0.frobenius(k)
            if term_log is not None:
                term_log.append((k, valuation(term).value))
            total = total + term
        if not is_inf(self.order):
            q = self.field.q
            tail = (vt0.value - cert.kappa) * q ** (self.order + 1)
            total = total.truncate(min(total.prec, tail))
        return total

    # -- comparison -------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, CompSeries)
            and other.field == self.field
            and other.terms == self.terms
            and other.order == self.order
        )

    def __repr__(self):
        body = " + ".join(f"({c!r})*t^[q^{k}]" for k, c in self.terms.items()) or "0"
        tail = "" if is_inf(self.order) else f" + O(t^[q^{self.order + 1}])"
        return f"<CompSeries {body}{tail}>"


def cs_add(a, b):
    return a + b


def cs_compose(a, b):
    return a.compose(b)


def cs_self_power(a, k):
    return a.self_power(k)


def cs_eval(a, t0, cert=None, term_log=None):
    return a.eval_at(t0, cert=cert, term_log=term_log)


# ---------------------------------------------------------------------------
# growth certificates


@dataclass(frozen=True)
class GrowthCertificate:
    """kappa bounds coefficient decay: v(c_k) >= -kappa q^k for k <= order."""

    kappa: Fraction
    order: object  # int, or INF when every coefficient is accounted for


def growth_certificate(u):
    q = u.field.q
    kappa = Fraction(0)
    for k, c in u.terms.items():
        bound = -Fraction(c.valuation_lb()) / q**k
        if bound > kappa:
            kappa = bound
    return GrowthCertificate(kappa=kappa, order=u.order)


# ---------------------------------------------------------------------------
# multinomial coefficients of compositional powers


def multinomial_coeff(l, k, coeffs, field):
    """Coefficient at index l of z^{o k} for z = sum_{n>=1} c_n t^{q^n}.

    Computed by the recursion (z outermost)

        M_{j}[m] = sum_{n>=1} c_n * M_{j-1}[m-n]^{q^n},

    which only ever touches c_n with n <= m - (j-1), so partially known
    coefficient tables are safe as long as entries up to l-k+1 are present.
    """
    if k < 1 or l < k:
        return PerfSeries.zero(field)
    zero = PerfSeries.zero(field)
    prev = {m: coeffs.get(m, zero) for m in range(1, l - k + 2)}
    for j in range(2, k + 1):
        cur = {}
        for m in range(j, l - k + j + 1):
            acc = zero
            for n, c_n in coeffs.items():
                if n < 1 or m - n < j - 1:
                    continue
                lower = prev.get(m - n)
                if lower is None or lower.is_exact_zero():
                    continue
                acc = acc + c_n * lower.frobenius(n)
            cur[m] = acc
        prev = cur
    return prev.get(l, zero)
