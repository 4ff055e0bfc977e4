"""Walk the three solvers through small worked problems and print the results.

Run with no arguments. Everything is exact arithmetic; the residual of each
returned solution is recomputed and reported, so the output doubles as a
quick end-to-end health check.
"""

from fractions import Fraction

from fqlin import (
    CompSeries,
    FieldConfig,
    ImplicitProblem,
    OdeProblem,
    PerfSeries,
    RiccatiProblem,
    emit_series,
    growth_certificate,
    normalize_time_change,
    residual,
    riccati_series,
    solve_implicit,
    solve_ode,
    solve_riccati,
    untransform_ode_solution,
)

F2 = FieldConfig(p=2)


def residual_report(prob, candidate, order):
    res = residual(prob, candidate, order)
    ok = all(c.is_zero() for c in res.terms.values())
    return "residual zero" if ok else f"RESIDUAL NONZERO: {emit_series(res)}"


def implicit_demo():
    print("== implicit: z + z o z = t^[q^1] over F_2 ==")
    prob = ImplicitProblem(
        P=(CompSeries.monomial(F2, 1), CompSeries.identity(F2), CompSeries.identity(F2))
    )
    z, cert = solve_implicit(prob, order=8)
    print("  z =", emit_series(z))
    print("  kappa =", cert.kappa, "|", residual_report(prob, z, 8))


def ode_demo():
    print("== differential: d z = x^-1 t + tau^0 z^{o 2} over F_2 ==")
    prob = OdeProblem(
        field=F2,
        a={(0, 0): PerfSeries.x_pow(F2, -1), (0, 2): PerfSeries.one(F2)},
    )
    norm, gamma = normalize_time_change(prob)
    print("  time change gamma =", emit_series(gamma))
    zp, cert = solve_ode(norm, order=4, xprec=Fraction(16))
    z = untransform_ode_solution(zp, gamma)
    print("  z =", emit_series(z))
    print("  kappa =", growth_certificate(z).kappa, "|", residual_report(prob, z, 4))


def riccati_demo():
    print("== Riccati: d y = lam (y o y) + x tau y + x^{1/2} over F_2, lam = x^{1/4} ==")
    prob = RiccatiProblem(
        lam=PerfSeries.x_pow(F2, Fraction(1, 4)),
        p={1: PerfSeries.x_pow(F2, 1)},
        r={0: PerfSeries.x_pow(F2, Fraction(1, 2))},
    )
    c, a = solve_riccati(prob, order=5, xprec=Fraction(10))
    y = riccati_series(c, a, F2)
    print("  c =", emit_series(c))
    for n, item in enumerate(a):
        print(f"  a_{n} =", emit_series(item))
    print(" ", residual_report(prob, y, 5))


def main():
    implicit_demo()
    ode_demo()
    riccati_demo()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
