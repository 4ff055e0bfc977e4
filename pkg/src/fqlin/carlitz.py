"""Carlitz brackets, twist operators, and the Carlitz derivative.

The bracket [k] = x^{q^k} - x vanishes at k = 0 and has valuation 1 for
k >= 1; negative k gives fractional exponents (for example [-1] has
valuation 1/q).  Its q-th root is again a two-term expression because
(x^{q^{k}} - x)^{1/q} = x^{q^{k-1}} - x^{1/q}.

On composition series, tau_j is pre-composition with t^{q^j}: indices shift
up by j and coefficients are twisted by the q^j-power Frobenius.  The
difference operator sends u to u(x t) - x u(t), which acts diagonally as
c_k -> [k] c_k, and the Carlitz derivative is its q-th root

    d(c_k t^{q^k}) = ([k] c_k)^{1/q} t^{q^{k-1}},

an F_q-linear map that lowers the order marker by one.
"""

from __future__ import annotations

from fractions import Fraction

from .fields import PerfSeries, is_inf
from .series import CompSeries


def bracket(field, k):
    """[k] = x^{q^k} - x as an exact scalar series."""
    if k == 0:
        return PerfSeries.zero(field)
    exp = Fraction(field.q) ** k
    return PerfSeries(
        field, [(exp, field.one()), (Fraction(1), -field.one())]
    )


def tau_power(u, j):
    """t^{q^j} o u; negative j applies the formal q^{|j|}-th root twist."""
    if j == 0:
        return u
    order = u.order if is_inf(u.order) else u.order + j
    return CompSeries(
        u.field, {k + j: c.frobenius(j) for k, c in u.terms.items()}, order
    )


def carlitz_delta(u):
    """u(x t) - x u(t); multiplies the k-th coefficient by [k]."""
    x = PerfSeries.x_pow(u.field, 1)
    terms = {}
    for k, c in u.terms.items():
        xqk = PerfSeries.x_pow(u.field, Fraction(u.field.q) ** k)
        terms[k] = (xqk - x) * c
    return CompSeries(u.field, terms, u.order)


def carlitz_d(u):
    """q-th root of the difference operator; drops the order by one."""
    x = PerfSeries.x_pow(u.field, 1)
    terms = {}
    for k, c in u.terms.items():
        if k == 0:
            continue
        xqk = PerfSeries.x_pow(u.field, Fraction(u.field.q) ** k)
        terms[k - 1] = ((xqk - x) * c).root_q()
    order = u.order if is_inf(u.order) else max(u.order - 1, -1)
    return CompSeries(u.field, terms, order)
