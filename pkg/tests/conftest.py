"""Shared field configurations and hypothesis strategies."""

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from fqlin import FieldConfig, PerfSeries

F2 = FieldConfig(p=2)
F3 = FieldConfig(p=3)
F4 = FieldConfig(p=2, v=2)
F8 = FieldConfig(p=2, v=3)
F9 = FieldConfig(p=3, v=2)
F4_OVER_F2 = FieldConfig(p=2, v=1, s=2)  # scalars in F_4, q = 2

SMALL_FIELDS = [F2, F3, F4, F9, F4_OVER_F2]


@pytest.fixture(params=SMALL_FIELDS, ids=lambda c: f"p{c.p}v{c.v}s{c.s}")
def field(request):
    return request.param


def elems(cfg, nonzero=False):
    coords = st.tuples(*[st.integers(0, cfg.p - 1)] * cfg.degree)
    strat = coords.map(cfg.elem)
    if nonzero:
        strat = strat.filter(lambda e: not e.is_zero())
    return strat


def exponents(cfg, depth=2, span=6):
    """Exponents in Z[1/p] with denominator at most p^depth."""
    return st.builds(
        lambda n, d: Fraction(n, cfg.p**d),
        st.integers(-span, span),
        st.integers(0, depth),
    )


def assert_cs_close(a, b):
    """No certifiably nonzero coefficient in the difference, up to the
    common order."""
    d = a - b
    for k, c in d.terms.items():
        assert c.is_zero(), f"index {k} differs: {c!r}"


def perf_series(cfg, max_terms=4, depth=2, exact=True, nonzero=False):
    pairs = st.lists(
        st.tuples(exponents(cfg, depth=depth), elems(cfg)),
        min_size=1 if nonzero else 0,
        max_size=max_terms,
    )
    if exact:
        strat = pairs.map(lambda ts: PerfSeries(cfg, ts))
    else:
        prec = st.one_of(st.none(), exponents(cfg, depth=1, span=8))
        strat = st.builds(
            lambda ts, pr: PerfSeries(cfg, ts) if pr is None else PerfSeries(cfg, ts, pr),
            pairs,
            prec,
        )
    if nonzero:
        strat = strat.filter(lambda s: not s.is_zero())
    return strat
