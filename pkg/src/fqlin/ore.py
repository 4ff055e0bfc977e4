"""Units, left common multiples, and fraction normal forms.

Under composition the series with an invertible coefficient at index 0 are
exactly the units; every nonzero series splits as c = u o t^{q^m} with u a
unit and m the index of the first nonzero coefficient, because
post-composition with t^{q^m} shifts indices plainly.  Units invert through
a compositional geometric series: writing u = (u_0 t) o (t + w) with
w = sum_{l>=1} u_0^{-1} u_l t^{q^l}, the inverse of t + w is
sum_n (-1)^n w^{o n}, locally finite since w^{o n} starts at index n.

Any two nonzero series a, b admit a common left multiple

    a' o b = t^{q^L} o a,      L = max(0, l - m),

with m, l the first nonzero indices of a and b: the right-hand side starts
at index m + L >= l, and dividing by b from the right solves ascending
index by index since the first coefficient of b is invertible.  This is
the Ore condition that makes left fractions denom^{-1} o numer composable.
A fraction is reported in the normal form (shift, series) meaning that
denom^{-1} o numer equals the formal q^shift-th root twist applied to the
series, obtained from the unit part of the denominator.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    NotAUnit,
    PrecisionExhausted,
    ValidationError,
    ZeroDenominator,
    ZeroInput,
)
from .carlitz import tau_power
from .fields import INF, is_inf
from .series import CompSeries


@dataclass(frozen=True)
class UnitFactorization:
    shift: int
    unit: CompSeries


@dataclass(frozen=True)
class OreFraction:
    """Left fraction denom^{-1} o numer."""

    denom: CompSeries
    numer: CompSeries

    def __post_init__(self):
        if self.denom.field != self.numer.field:
            raise ValidationError("fraction parts over different fields")
        if self.denom.is_exact_zero():
            raise ZeroDenominator("fraction with zero denominator")


@dataclass(frozen=True)
class FractionNormalForm:
    """The fraction equals the q^shift-th root twist applied to ``series``."""

    shift: int
    series: CompSeries

    def meromorphic(self):
        """t^{q^{-shift}} o series as one twisted Laurent series; applies
        inverse Frobenius to the coefficients."""
        return tau_power(self.series, -self.shift)


def _leading(c, what):
    """First possibly-nonzero index and its coefficient, which must be
    certifiably nonzero and sit at a non-negative index."""
    if c.is_exact_zero():
        raise ZeroInput(f"{what} is the zero series")
    m = c.min_index()
    if m < 0:
        raise ValidationError(f"{what} has a negative leading index {m}")
    lead = c.terms.get(m)
    if lead is None or lead.is_zero():
        raise PrecisionExhausted(
            f"first nonzero index of {what} is not determined at this precision"
        )
    return m, lead


def factor_unit(c):
    """Split c = unit o t^{q^shift} off the first nonzero coefficient."""
    m, _ = _leading(c, "factorization input")
    order = c.order if is_inf(c.order) else c.order - m
    unit = CompSeries(c.field, {k - m: v for k, v in c.terms.items()}, order)
    return UnitFactorization(shift=m, unit=unit)


def invert_unit(u, order=None, xprec=None):
    """Compositional inverse of a unit, with coefficients up to ``order``."""
    m, u0 = _leading(u, "unit")
    if m != 0:
        raise NotAUnit(f"first nonzero coefficient sits at index {m}, not 0")
    n_cap = u.order if order is None else min(order, u.order)
    if is_inf(n_cap):
        raise ValidationError("inverting an exact unit needs an order cap")
    n_cap = int(n_cap)
    u0_inv = u0.inv()
    neg_w = CompSeries(
        u.field,
        {l: -(u0_inv * c) for l, c in u.terms.items() if l >= 1},
        n_cap,
    )
    total = CompSeries.identity(u.field)
    power = total
    for _ in range(n_cap):
        power = neg_w.compose(power)
        first = power.min_index()
        if first is None or first > n_cap:
            break
        total = total + power
    result = total.scale_right(u0_inv).truncate(n_cap)
    if xprec is not None:
        result = result.truncate_x(xprec)
    return result


def ore_left_multiple(a, b, order=None):
    """Cofactors (a', b') with a' o b = b' o a and b' = t^{q^L}.

    ``order`` caps the index range of a'; with exact inputs it is required,
    otherwise the cap defaults to what the input orders determine.
    """
    if a.field != b.field:
        raise ValidationError("mixed-field Ore construction")
    m, _ = _leading(a, "first Ore input")
    l, beta = _leading(b, "second Ore input")
    shift = max(0, l - m)
    k0 = m + shift - l
    cap = INF if order is None else int(order)
    if not is_inf(a.order):
        cap = min(cap, a.order + shift - l)
    if not is_inf(b.order):
        cap = min(cap, b.order + k0 - l)
    if is_inf(cap):
        raise ValidationError("Ore construction on exact inputs needs an order cap")
    cap = int(cap)
    beta_inv = beta.inv()
    target = CompSeries(
        a.field,
        {k + shift: c.frobenius(shift) for k, c in a.terms.items()},
        a.order if is_inf(a.order) else a.order + shift,
    )
    quot = {}
    for k in range(k0, cap + 1):
        s = target.coeff(k + l)
        for i, qi in quot.items():
            bc = b.coeff(k + l - i)
            if not bc.is_exact_zero():
                s = s - qi * bc.frobenius(i)
        if s.is_exact_zero():
            continue
        quot[k] = s * beta_inv.frobenius(k)
    a_prime = CompSeries(a.field, quot, cap)
    b_prime = CompSeries.monomial(a.field, shift)
    return a_prime, b_prime


def fraction_normalize(f, order=None, xprec=None):
    """Normal form of denom^{-1} o numer: a root twist and a single series."""
    fact = factor_unit(f.denom)
    inv = invert_unit(fact.unit, order=order)
    series = inv.compose(f.numer)
    if order is not None:
        series = series.truncate(order)
    if xprec is not None:
        series = series.truncate_x(xprec)
    return FractionNormalForm(shift=fact.shift, series=series)
