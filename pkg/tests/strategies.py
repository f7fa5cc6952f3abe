"""Hypothesis strategies for small exact objects."""
from fractions import Fraction

from hypothesis import strategies as st

from qspectra.exact import Q, Y, MultiPoly, RationalFunction, mu_var, nu_var

VARS = (Q, mu_var(0), nu_var(0), Y)

coeffs = st.one_of(st.integers(-5, 5), st.fractions(min_value=-3, max_value=3, max_denominator=4))


@st.composite
def polys(draw, max_terms=4, vars=VARS):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(-2, 2)) if v == Q else draw(st.integers(0, 2)) for v in vars)
        terms[e] = draw(coeffs)
    return MultiPoly(terms, vars)


@st.composite
def nonzero_polys(draw, **kw):
    p = draw(polys(**kw))
    return p if p else MultiPoly.const(draw(st.integers(1, 5)))


@st.composite
def ratfuns(draw):
    return RationalFunction(draw(polys(max_terms=3)), draw(nonzero_polys(max_terms=2)))


@st.composite
def y_ratfuns(draw):
    """Rational functions in y whose denominator is a product of 1 - c*y factors."""
    num = draw(polys(max_terms=3, vars=(Q, mu_var(0), Y)))
    cs = draw(st.lists(st.integers(-3, 3).filter(bool), max_size=2))
    y = MultiPoly.var(Y)
    return RationalFunction.from_factors(num, [1 - c * y for c in cs])


points = st.fixed_dictionaries({
    v: st.fractions(min_value=-9, max_value=9, max_denominator=9).filter(lambda x: x != 0)
    for v in VARS
})


def ev(x, pt):
    return Fraction(x) if isinstance(x, (int, Fraction)) else x.evaluate(pt)
