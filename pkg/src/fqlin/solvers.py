"""Coefficient-recursion solvers with growth certificates.

Three equation families are solved exactly, coefficient by coefficient.

Implicit equations P_0 + P_1 o z + sum_k P_k o z^{o k} = 0 with the linear
part P_1 = u o t^{q^nu} (u a unit): the index-(i+nu) coefficient of the
equation contains the unknown c_i only through the single term
u_0 c_i^{q^nu}, since the tail of P_1 and the nonlinear terms only involve
earlier coefficients.  Dividing by u_0 and taking a q^nu-th root reads off
c_i directly; the compositional inverse of u is never formed, so sparse
solutions stay cheap even when u has dense higher coefficients.

Additive ODEs d z = sum_{j,k} a_{jk} tau^j (z^{o k}) + sum_j a_{j0} t^{q^j}
with d the Carlitz derivative: matching the t^{q^i} coefficient of both
sides gives

    c_{i+1} = [i+1]^{-1} (sum_{j+l=i, l>=1} sum_k a_{jk} M_{l,k}(c)^{q^j}
              + a_{i0})^q,

where M_{l,k} is the compositional multinomial.  The whole bracket is
raised to the q-th power before dividing by [i+1]; the base case is
c_1 = [1]^{-1} a_{00}^q.  A time change conjugating by gamma t (gamma a
power of x) makes every inhomogeneous coefficient integral first.  The
conjugation scales every a_{jk} by gamma^{q^j - 1/q}: scaling only the
inhomogeneous column, which would suffice for linear equations, does not
survive the k >= 2 terms, so the transform used here is
z = (gamma t) o z' o (gamma^{-1} t), i.e. c_i = gamma^{1-q^i} c'_i.

Riccati-type equations d y = lambda (y o y) + P(tau) y + R with
y = c t^{1/q} + sum_n a_n t^{q^n}: the fractional index forces
c = lambda^{-1} [-1]^{1/q} exactly and a_0^{1/q} + a_0 = 0; each later
coefficient solves the additive equation

    alpha w - beta w^q = rhs_l,      w = a_{l+1}^{1/q},
    alpha = [l+1]^{1/q} - lambda c = x^{q^l} - x^{1/q^2},
    beta = lambda c^{q^{l+1}},

handled by a Newton-polygon analysis over the value group Z[1/p], a
residue-field solve, and a Hensel fixed-point lift w <- (rhs + beta w^q)
/ alpha whose error contracts as e -> (beta/alpha) e^q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .carlitz import bracket, carlitz_d, tau_power
from .errors import (
    NeedsFieldExtension,
    NonConvergent,
    NotSolvable,
    ValidationError,
    ZeroInput,
)
from .fields import INF, PerfSeries, is_inf, valuation
from .ore import factor_unit
from .series import CompSeries, GrowthCertificate, growth_certificate, multinomial_coeff

__all__ = [
    "GrowthCertificate",
    "ImplicitProblem",
    "OdeProblem",
    "RiccatiProblem",
    "growth_certificate",
    "normalize_time_change",
    "residual",
    "riccati_series",
    "solve_implicit",
    "solve_ode",
    "solve_riccati",
    "untransform_ode_solution",
]


def _coerce_coeff(field, value, what):
    if not isinstance(value, PerfSeries) or value.field != field:
        raise ValidationError(f"{what} must be a scalar series over the problem field")
    return value


# ---------------------------------------------------------------------------
# implicit equations


@dataclass(frozen=True)
class ImplicitProblem:
    """P_0 + P_1 o z + P_2 o (z o z) + ... = 0 with a t^{q^nu}-shifted
    invertible linear part."""

    P: tuple
    nu: int = 0

    def __post_init__(self):
        P = tuple(self.P)
        object.__setattr__(self, "P", P)
        if len(P) < 2:
            raise ValidationError("an implicit problem needs at least P_0 and P_1")
        if self.nu < 0:
            raise ValidationError("nu must be non-negative")
        fld = P[1].field
        for i, part in enumerate(P):
            if not isinstance(part, CompSeries) or part.field != fld:
                raise ValidationError(f"P_{i} is not a series over the problem field")
            if part.min_index() is not None and part.min_index() < 0:
                raise ValidationError(f"P_{i} has negative indices")
        try:
            fact = factor_unit(P[1])
        except ZeroInput:
            raise NotSolvable("the linear part P_1 is zero") from None
        if fact.shift != self.nu:
            raise NotSolvable(
                f"P_1 starts at index {fact.shift}, expected nu = {self.nu}"
            )
        if self.nu == 0 and not P[0].coeff(0).is_zero():
            raise NotSolvable("P_0 has a nonzero coefficient at index 0")

    @property
    def field(self):
        return self.P[1].field


def solve_implicit(prob, order, xprec=None):
    """Unique solution z = sum_{i > nu} c_i t^{q^i} and its certificate."""
    nu = prob.nu
    fld = prob.field
    p0, p1 = prob.P[0], prob.P[1]
    fact = factor_unit(p1)
    u0_inv = fact.unit.coeff(0).inv()
    nonlinear = [
        (k, pk) for k, pk in enumerate(prob.P) if k >= 2 and not pk.is_exact_zero()
    ]
    for j in range(2 * nu + 1):
        if not p0.coeff(j).is_zero():
            raise NotSolvable(f"the constant term is nonzero at index {j} <= 2 nu")
    bounds = [order]
    if not is_inf(p0.order):
        bounds.append(p0.order - nu)
    if not is_inf(p1.order):
        bounds.append(p1.order + 1)
    for k, pk in nonlinear:
        if not is_inf(pk.order):
            bounds.append(pk.order + k * (nu + 1) - nu)
    n_eff = int(min(bounds))
    coeffs = {}
    for i in range(nu + 1, n_eff + 1):
        j = i + nu
        total = p0.coeff(j)
        for l, p1_l in p1.terms.items():
            if l == nu or j - l not in coeffs:
                continue
            total = total + p1_l * coeffs[j - l].frobenius(l)
        for k, pk in nonlinear:
            for n, p_n in pk.terms.items():
                l = j - n
                if l < k:
                    continue
                m = multinomial_coeff(l, k, coeffs, fld)
                if m.is_exact_zero():
                    continue
                total = total + p_n * m.frobenius(n)
        c_i = (-(u0_inv * total)).frobenius(-nu)
        if xprec is not None:
            c_i = c_i.truncate(xprec)
        if not c_i.is_exact_zero():
            coeffs[i] = c_i
    z = CompSeries(fld, coeffs, n_eff)
    return z, growth_certificate(z)


# ---------------------------------------------------------------------------
# additive ODEs


@dataclass(frozen=True)
class OdeProblem:
    """d z = sum a_{jk} tau^j (z^{o k}) + sum a_{j0} t^{q^j}, keyed (j, k)."""

    field: object
    a: dict

    def __post_init__(self):
        clean = {}
        for (j, k), coef in dict(self.a).items():
            j, k = int(j), int(k)
            if j < 0 or k < 0:
                raise ValidationError("coefficient indices (j, k) must be >= 0")
            _coerce_coeff(self.field, coef, f"a[{j},{k}]")
            if not coef.is_exact_zero():
                clean[(j, k)] = coef
        object.__setattr__(self, "a", clean)


def solve_ode(prob, order, xprec=None):
    """Unique solution z = sum_{i>=1} c_i t^{q^i} and its certificate."""
    fld = prob.field
    coeffs = {}
    for i in range(order):
        total = prob.a.get((i, 0), PerfSeries.zero(fld))
        for (j, k), a_jk in prob.a.items():
            if k < 1:
                continue
            l = i - j
            if l < k:
                continue
            m = multinomial_coeff(l, k, coeffs, fld)
            if m.is_exact_zero():
                continue
            total = total + a_jk * m.frobenius(j)
        if total.is_exact_zero():
            continue
        binv = bracket(fld, i + 1).inv(
            prec=None if xprec is None else Fraction(xprec) + 1
        )
        c = binv * total.frobenius(1)
        if xprec is not None:
            c = c.truncate(xprec)
        if not c.is_exact_zero():
            coeffs[i + 1] = c
    z = CompSeries(fld, coeffs, order)
    return z, growth_certificate(z)


def normalize_time_change(prob):
    """Conjugate by gamma t with gamma = x^e, the smallest integer power
    making every inhomogeneous coefficient a_{j0} integral.

    Every coefficient a_{jk} is scaled by gamma^{q^j - 1/q}; solutions
    transform back through untransform_ode_solution.
    """
    q = prob.field.q
    e = 0
    for (j, k), coef in prob.a.items():
        if k != 0:
            continue
        v = Fraction(coef.valuation_lb())
        if v >= 0:
            continue
        need = math.ceil(-v * q / (q ** (j + 1) - 1))
        e = max(e, need)
    gamma = PerfSeries.x_pow(prob.field, e)
    if e == 0:
        return prob, gamma
    scaled = {
        (j, k): coef.shift_x(Fraction(e * (q ** (j + 1) - 1), q))
        for (j, k), coef in prob.a.items()
    }
    return OdeProblem(prob.field, scaled), gamma


def untransform_ode_solution(zp, gamma):
    """Undo the conjugation: c_i = gamma^{1 - q^i} c'_i."""
    gamma_inv = gamma.inv()
    terms = {}
    for i, c in zp.terms.items():
        terms[i] = c * gamma * gamma_inv.frobenius(i)
    return CompSeries(zp.field, terms, zp.order)


# ---------------------------------------------------------------------------
# Riccati-type equations


@dataclass(frozen=True)
class RiccatiProblem:
    """d y = lambda (y o y) + P(tau) y + R, solved through the fractional
    leading term y = c t^{1/q} + sum a_n t^{q^n}."""

    lam: PerfSeries
    p: dict = dc_field(default_factory=dict)
    r: dict = dc_field(default_factory=dict)
    branch: str = "zero"

    def __post_init__(self):
        if not isinstance(self.lam, PerfSeries):
            raise ValidationError("lambda must be a scalar series")
        fld = self.lam.field
        floor = Fraction(1, fld.q**2)
        if self.lam.is_zero():
            raise ValidationError("lambda must be nonzero")
        if valuation(self.lam).value < floor:
            raise ValidationError(f"lambda needs valuation >= {floor}")
        for name, data, k_min in (("p", self.p, 1), ("r", self.r, 0)):
            clean = {}
            for k, coef in dict(data).items():
                k = int(k)
                if k < k_min:
                    raise ValidationError(f"{name}_{k} index below {k_min}")
                _coerce_coeff(fld, coef, f"{name}_{k}")
                if coef.is_exact_zero():
                    continue
                if Fraction(coef.valuation_lb()) < floor:
                    raise ValidationError(f"{name}_{k} needs valuation >= {floor}")
                clean[k] = coef
            object.__setattr__(self, name, clean)
        if self.branch not in ("zero", "nonzero"):
            raise ValidationError("branch must be 'zero' or 'nonzero'")

    @property
    def field(self):
        return self.lam.field


def _nonzero_a0(fld):
    """Lexicographically least nonzero root of a^{1/q} + a = 0; in odd
    characteristic the roots may only exist in a quadratic extension."""
    for e in fld.elements():
        if e.is_zero():
            continue
        if e.pow_q(-1) == -e:
            return e
    raise NeedsFieldExtension(
        2, "no nonzero solution of a^{q-1} = -1 in the scalar residue field"
    )


# -- residue-field helpers (dense polynomials over FieldElem) --


def _poly_trim(f):
    while f and f[-1].is_zero():
        f.pop()
    return f


def _poly_divmod(f, g):
    f = list(f)
    lead_inv = g[-1].inverse()
    while _poly_trim(f) and len(f) >= len(g):
        shift = len(f) - len(g)
        factor = f[-1] * lead_inv
        for i, gi in enumerate(g):
            f[shift + i] = f[shift + i] - factor * gi
        _poly_trim(f)
    return f


def _poly_gcd(f, g):
    f, g = _poly_trim(list(f)), _poly_trim(list(g))
    while g:
        f, g = g, _poly_divmod(f, g)
    return f


def _poly_mulmod(f, g, mod, zero):
    out = [zero] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if fi.is_zero():
            continue
        for j, gj in enumerate(g):
            out[i + j] = out[i + j] + fi * gj
    return _poly_divmod(out, mod)


def _min_root_degree(fld, poly):
    """Smallest extension degree of the scalar field containing a root of
    poly (distinct-degree sieve with w^{|F|^delta} - w), given that no
    root lies in the scalar field itself."""
    poly = _poly_trim(list(poly))
    while poly and poly[0].is_zero():
        poly = poly[1:]  # discard the root w = 0, found by direct search
    deg = len(poly) - 1
    zero, one = fld.zero(), fld.one()
    big_q = fld.order
    frob = [zero, one]  # the polynomial w
    for delta in range(1, deg + 1):
        power = big_q
        base = frob
        result = [one]
        while power:
            if power & 1:
                result = _poly_mulmod(result, base, poly, zero)
            base = _poly_mulmod(base, base, poly, zero)
            power >>= 1
        frob = result
        probe = list(frob) + [zero, zero]
        probe[1] = probe[1] - one  # w^{|F|^delta} - w
        if delta > 1 and _poly_gcd(poly, probe):
            return delta
    return max(deg, 2)


def _residue_root(fld, on_line, r0, a0, b0, q):
    """Lexicographically least nonzero solution of the residue equation
    r0*[0] - a0*w*[1] + b0*w^q*[q] = 0 restricted to the on-line indices.

    Returns a field element, or the extension degree needed when the
    equation has no root in the scalar field."""
    zero = fld.zero()
    for w in fld.elements():
        if w.is_zero():
            continue
        acc = zero
        if 0 in on_line:
            acc = acc + r0
        if 1 in on_line:
            acc = acc - a0 * w
        if q in on_line:
            acc = acc + b0 * (w**q)
        if acc.is_zero():
            return w
    coeffs = [zero] * (q + 1)
    if 0 in on_line:
        coeffs[0] = r0
    if 1 in on_line:
        coeffs[1] = -a0
    if q in on_line:
        coeffs[q] = b0
    return _min_root_degree(fld, coeffs)


def _in_value_group(mu, p):
    den = mu.denominator
    while den % p == 0:
        den //= p
    return den == 1


def _solve_additive(alpha, beta, rhs, wprec, trace=None):
    """The small solution of alpha w - beta w^q = rhs with v(w) >= 0,
    Hensel-lifted to x-adic precision wprec."""
    fld = alpha.field
    q = fld.q
    v_alpha = valuation(alpha).value
    v_beta = valuation(beta).value
    stop = max(Fraction(wprec) + v_alpha, q * Fraction(wprec) + v_beta)
    if rhs.is_zero():
        if is_inf(rhs.prec):
            return PerfSeries.zero(fld)
        bound = min(rhs.prec - v_alpha, (rhs.prec - v_beta) / q)
        return PerfSeries.zero(fld, prec=bound)
    v_r = valuation(rhs).value
    chord = v_r + Fraction(v_beta - v_r) / q
    if v_alpha < chord:
        candidates = [
            (Fraction(v_r - v_alpha), (0, 1)),
            (Fraction(v_alpha - v_beta) / (q - 1), (1, q)),
        ]
    elif v_alpha == chord:
        candidates = [(Fraction(v_r - v_beta) / q, (0, 1, q))]
    else:
        candidates = [(Fraction(v_r - v_beta) / q, (0, q))]
    alpha_inv = alpha.inv(prec=stop - 2 * v_alpha + 1)
    r0 = rhs.leading()[1]
    a0 = alpha.leading()[1]
    b0 = beta.leading()[1]
    needed_degree = None
    for mu, on_line in candidates:
        if mu < 0 or not _in_value_group(mu, fld.p):
            continue
        root = _residue_root(fld, on_line, r0, a0, b0, q)
        if isinstance(root, int):
            needed_degree = root if needed_degree is None else min(needed_degree, root)
            continue
        w = PerfSeries.x_pow(fld, mu, root)
        res = rhs - (alpha * w - beta * w.frobenius(1))
        res_vals = [valuation(res).value]
        converged = res.is_zero() or res_vals[-1] >= stop
        for _ in range(64):
            if converged:
                break
            w = alpha_inv * (rhs + beta * w.frobenius(1))
            res = rhs - (alpha * w - beta * w.frobenius(1))
            v_now = valuation(res).value
            if not res.is_zero() and v_now <= res_vals[-1]:
                break  # stalled: not the contracting branch
            res_vals.append(v_now)
            converged = res.is_zero() or v_now >= stop
        if converged:
            if trace is not None:
                trace.append({"mu": mu, "residuals": res_vals})
            return w.truncate(wprec)
    if needed_degree is not None:
        raise NeedsFieldExtension(
            needed_degree, "residue equation has no root in the scalar field"
        )
    raise NonConvergent(
        "no contracting root with non-negative valuation; the equation "
        "falls outside the certified parameter range"
    )


def solve_riccati(prob, order, xprec=None, trace=None):
    """Solution data (c, [a_0 ... a_order]) of the fractional-term ansatz."""
    fld = prob.field
    q = fld.q
    if xprec is None:
        xprec = fld.default_xprec
    wprec = Fraction(xprec) + 4
    lam = prob.lam
    root_bracket = bracket(fld, -1).root_q()  # [-1]^{1/q}, exact
    if is_inf(lam.prec) and len(lam.terms) == 1:
        lam_inv = lam.inv()  # exact for a monomial
    else:
        lam_inv = lam.inv(prec=wprec)
    c = lam_inv * root_bracket
    if prob.branch == "zero":
        a = [PerfSeries.zero(fld)]
    else:
        a = [PerfSeries.constant(fld, _nonzero_a0(fld))]
    for l in range(order):
        alpha = PerfSeries(
            fld,
            [(Fraction(q) ** l, fld.one()), (Fraction(1, q**2), -fld.one())],
        )
        beta = lam * c.frobenius(l + 1)
        rhs = PerfSeries.zero(fld)
        for n in range(l + 1):
            rhs = rhs + lam * (a[n] * a[l - n].frobenius(n))
        for k, p_k in prob.p.items():
            if 1 <= k <= l:
                rhs = rhs + p_k * a[l - k].frobenius(k)
            elif k == l + 1:
                rhs = rhs + p_k * c.frobenius(l + 1)
        r_l = prob.r.get(l)
        if r_l is not None:
            rhs = rhs + r_l
        step_trace = None if trace is None else []
        w = _solve_additive(alpha, beta, rhs, wprec, trace=step_trace)
        if trace is not None:
            trace.append({"l": l, "steps": step_trace})
        a.append(w.frobenius(1))
    return c, a


def riccati_series(c, a, field):
    """Assemble y = c t^{1/q} + sum a_n t^{q^n} as one composition series."""
    terms = {}
    if not c.is_exact_zero():
        terms[-1] = c
    for n, a_n in enumerate(a):
        terms[n] = a_n
    return CompSeries(field, terms, len(a) - 1)


# ---------------------------------------------------------------------------
# residuals


def _residual_implicit(prob, z, order):
    total = prob.P[0]
    for k, p_k in enumerate(prob.P):
        if k == 0:
            continue
        total = total + p_k.compose(z.self_power(k))
    return total.truncate(order)


def _ode_rhs(prob, z):
    total = CompSeries.zero(prob.field)
    for (j, k), a_jk in prob.a.items():
        total = total + tau_power(z.self_power(k), j).scale_left(a_jk)
    return total


def _residual_ode(prob, z, order):
    return (carlitz_d(z) - _ode_rhs(prob, z)).truncate(order)


def _residual_riccati(prob, y, order):
    fld = prob.field
    rhs = y.compose(y).scale_left(prob.lam)
    for k, p_k in prob.p.items():
        rhs = rhs + tau_power(y, k).scale_left(p_k)
    rhs = rhs + CompSeries(fld, dict(prob.r))
    return (carlitz_d(y) - rhs).truncate(order)


def residual(prob, candidate, order):
    """Left-hand side minus right-hand side of the problem's equation,
    evaluated at the candidate and truncated to the given order.  A
    candidate solves the problem modulo the order exactly when every
    coefficient of the residual is zero."""
    if isinstance(prob, ImplicitProblem):
        return _residual_implicit(prob, candidate, order)
    if isinstance(prob, OdeProblem):
        return _residual_ode(prob, candidate, order)
    if isinstance(prob, RiccatiProblem):
        return _residual_riccati(prob, candidate, order)
    raise ValidationError(f"no residual for problem type {type(prob).__name__}")
