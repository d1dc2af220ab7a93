import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from backend.errors import CompositionTypeError, UnsupportedOperationError
from backend.relmat import FinType, compose, identity, mjoin, mleq, mtop, mzero, transpose
from backend.span import (
    FinMap,
    SpanT,
    all_functions,
    beck_check,
    bottom_span,
    find_yoneda_equivalent,
    flatten,
    identity_span,
    is_functional_span,
    pullback,
    pullback_mediator,
    span_compose,
    span_domain,
    span_equiv,
    span_interior,
    span_join,
    span_leq,
    span_transpose,
    top_span,
    yoneda,
)
from strategies import BOOL, fintype

AB = FinType("AB", ("a", "b"))
X12 = FinType("X", ("x1", "x2"))


def finmaps(src, dst):
    return st.lists(st.integers(0, len(dst) - 1), min_size=len(src), max_size=len(src)).map(
        lambda image: FinMap(src, dst, image)
    )


@st.composite
def spans(draw, yt, xt, max_apex=3):
    apex = fintype(draw(st.integers(0, max_apex)), "E")
    return SpanT(apex, draw(finmaps(apex, yt)), draw(finmaps(apex, xt)))


@st.composite
def span_pairs(draw, max_n=3):
    """(σ: Z→Y, ρ: Y→X)."""
    z, y, x = (fintype(draw(st.integers(1, max_n)), name) for name in "ZYX")
    return draw(spans(z, y, max_apex=max_n)), draw(spans(y, x, max_apex=max_n))


@st.composite
def cospans(draw, max_n=3):
    y, x, z = (fintype(draw(st.integers(1, max_n)), name) for name in "YXZ")
    return draw(finmaps(y, x)), draw(finmaps(z, x))


def test_finmap_validation_and_composition():
    with pytest.raises(CompositionTypeError):
        FinMap(AB, X12, [0])
    with pytest.raises(CompositionTypeError):
        FinMap(AB, X12, [0, 2])
    f = FinMap(AB, X12, [1, 1])
    assert FinMap.identity(AB).then(f) == f
    assert f.then(FinMap(X12, AB, [1, 0])).image == (0, 0)


def test_span_legs_must_share_the_apex():
    with pytest.raises(CompositionTypeError):
        SpanT(AB, FinMap.identity(AB), FinMap(X12, X12, [0, 1]))


def test_identity_is_a_unit_for_composition():
    rho = SpanT(fintype(2, "E"), FinMap(fintype(2, "E"), AB, [0, 0]), FinMap(fintype(2, "E"), X12, [0, 1]))
    assert span_equiv(span_compose(identity_span(AB), rho), rho)
    assert span_equiv(span_compose(rho, identity_span(X12)), rho)


@settings(max_examples=500, deadline=None)
@given(span_pairs(max_n=4))
def test_flatten_is_functorial(pair_):
    sigma, rho = pair_
    assert flatten(span_compose(sigma, rho)) == compose(flatten(sigma), flatten(rho))


@settings(max_examples=200, deadline=None)
@given(span_pairs())
def test_transpose_reverses_composition(pair_):
    sigma, rho = pair_
    lhs = span_transpose(span_compose(sigma, rho))
    rhs = span_compose(span_transpose(rho), span_transpose(sigma))
    assert span_equiv(lhs, rhs)
    assert flatten(span_transpose(rho)) == transpose(flatten(rho))


def test_span_order_examples():
    rho = yoneda(FinMap(AB, X12, [0, 1]))
    witness = span_leq(rho, rho)
    assert witness and witness.mediator == FinMap.identity(AB)
    doubled_apex = fintype(4, "D")
    doubled = SpanT(doubled_apex, FinMap(doubled_apex, AB, [0, 1, 0, 1]), FinMap(doubled_apex, X12, [0, 1, 0, 1]))
    assert span_equiv(rho, doubled)
    assert span_leq(bottom_span(AB, X12), rho)
    assert not span_leq(top_span(AB, X12), rho)
    with pytest.raises(CompositionTypeError):
        span_leq(rho, identity_span(AB))


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_span_order_refines_the_relation_order(data):
    sigma = data.draw(spans(AB, X12))
    rho = data.draw(spans(AB, X12))
    assert span_leq(bottom_span(AB, X12), sigma)
    assert span_leq(sigma, top_span(AB, X12))
    witness = span_leq(sigma, rho)
    if witness:
        assert mleq(flatten(sigma), flatten(rho))
        m = witness.mediator
        assert m.then(rho.left) == sigma.left and m.then(rho.right) == sigma.right


def test_yoneda_spans_are_functional():
    for ny, nx in itertools.product((1, 2, 3), repeat=2):
        y, x = fintype(ny, "Y"), fintype(nx, "X")
        for f in all_functions(y, x):
            assert is_functional_span(yoneda(f))
            assert find_yoneda_equivalent(yoneda(f)) == f


def test_two_target_span_is_not_functional():
    y = FinType("Y", ("y",))
    apex = FinType("E", ("e1", "e2"))
    rho = SpanT(apex, FinMap(apex, y, [0, 0]), FinMap(apex, X12, [0, 1]))
    assert not is_functional_span(rho)
    assert find_yoneda_equivalent(rho) is None


@settings(max_examples=300, deadline=None)
@given(spans(fintype(3, "Y"), fintype(2, "X"), max_apex=4))
def test_functional_spans_come_from_functions(rho):
    f = find_yoneda_equivalent(rho)
    assert is_functional_span(rho) == (f is not None)
    if f is not None:
        assert flatten(rho) == flatten(yoneda(f))


def test_function_search_is_capped(monkeypatch):
    monkeypatch.setenv("RELVERIFY_SPAN_APEX_CAP", "2")
    big = fintype(3, "B")
    with pytest.raises(UnsupportedOperationError):
        find_yoneda_equivalent(identity_span(big))
    assert find_yoneda_equivalent(identity_span(AB)) == FinMap.identity(AB)


def test_interior_examples():
    assert span_equiv(span_interior(identity_span(AB)), identity_span(AB))
    apex = FinType("E", ("e1", "e2"))
    loop = SpanT(apex, FinMap(apex, AB, [0, 0]), FinMap(apex, AB, [0, 1]))
    inner = span_interior(loop)
    assert inner.apex.labels == ("e1",)
    assert flatten(inner).entries == ((1, 0), (0, 0))
    assert span_leq(inner, loop)
    with pytest.raises(CompositionTypeError):
        span_interior(yoneda(FinMap(AB, X12, [0, 0])))


def test_span_domain():
    labels, _ = span_domain(yoneda(FinMap(AB, X12, [1, 0])))
    assert labels == ("a", "b")
    apex = FinType("E", ("e1", "e2"))
    partial = SpanT(apex, FinMap(apex, AB, [0, 0]), FinMap(apex, X12, [0, 1]))
    labels, totalized = span_domain(partial)
    assert labels == ("a",)
    assert totalized.src.labels == ("a",) and totalized.dst == X12


def test_flatten_examples():
    assert flatten(identity_span(AB)) == identity(AB, BOOL)
    assert flatten(top_span(AB, X12)) == mtop(AB, X12, BOOL)
    assert flatten(bottom_span(AB, X12)) == mzero(AB, X12, BOOL)


@settings(max_examples=200, deadline=None)
@given(spans(AB, X12), spans(AB, X12))
def test_flatten_turns_span_join_into_matrix_join(sigma, rho):
    joined = span_join(sigma, rho)
    assert flatten(joined) == mjoin(flatten(sigma), flatten(rho))
    assert span_leq(sigma, joined) and span_leq(rho, joined)


def test_pullback_example():
    f = FinMap(AB, X12, [0, 1])
    g = FinMap(fintype(3, "Z"), X12, [1, 1, 0])
    apex, p_y, p_z = pullback(f, g)
    assert apex.labels == ("(a,z2)", "(b,z0)", "(b,z1)")
    assert p_y.image == (0, 1, 1) and p_z.image == (2, 0, 1)
    with pytest.raises(CompositionTypeError):
        pullback(f, FinMap.identity(AB))


@settings(max_examples=100, deadline=None)
@given(cospans(), st.data())
def test_pullback_mediators_are_unique(cospan, data):
    f, g = cospan
    apex, p_y, p_z = pullback(f, g)
    if not len(apex):
        return
    w = fintype(data.draw(st.integers(1, 2)), "W")
    through = data.draw(finmaps(w, apex))
    h, k = through.then(p_y), through.then(p_z)
    m = pullback_mediator(f, g, h, k)
    assert m.then(p_y) == h and m.then(p_z) == k
    matching = [c for c in all_functions(w, apex) if c.then(p_y) == h and c.then(p_z) == k]
    assert matching == [m]


def test_mediator_rejects_a_fork_that_does_not_commute():
    f = FinMap(AB, X12, [0, 1])
    one = FinType("W", ("w",))
    with pytest.raises(CompositionTypeError):
        pullback_mediator(f, f, FinMap(one, AB, [0]), FinMap(one, AB, [1]))


def test_beck_condition_examples():
    assert beck_check(FinMap.identity(AB), FinMap.identity(AB))
    constant = FinMap(fintype(3, "Y"), X12, [0, 0, 0])
    injective = FinMap(FinType("Z", ("z",)), X12, [1])
    assert beck_check(constant, injective)


@settings(max_examples=100, deadline=None)
@given(cospans())
def test_beck_condition_holds_for_pullbacks(cospan):
    f, g = cospan
    assert beck_check(f, g)
