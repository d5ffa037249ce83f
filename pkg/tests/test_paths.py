import itertools

import pytest
from hypothesis import given, settings

from hskein.groups import GroupParseError
from hskein.paths import (
    CrossingEvent, PathEndpointError, PathWord, compose, delta_loop, delta_loop_raw, format_path, index, invert,
    loop, parse_path, q_power, s_eval, s_f, s_if,
)
from hskein.ring import RPoly, specialize
from hskein.wrap import SkeinVector, parse_wrap
from strategies import Z3, events, paths, recursive_s, same_vector

P = RPoly.parse


def ev(*pairs):
    return tuple(CrossingEvent(s, k) for s, k in pairs)


def vec(**kw):
    return SkeinVector({k: P(v) for k, v in kw.items()})


def test_index_examples():
    assert index(PathWord("a", "b", ())) == 0
    assert index(PathWord("a", "b", ev((1, "A"), (-1, "A")))) == 0
    assert index(PathWord("a", "b", ev((1, "A"), (1, "A"), (-1, "B")))) == 1


def test_s_examples():
    assert s_eval(PathWord("K+", "K-", ev((1, "K0")))) == vec(K0="q")
    assert s_eval(PathWord("a", "b", ev((1, "A"), (-1, "B")))) == vec(A="q", B="-q")
    assert s_eval(PathWord("a", "a", ())).is_zero()


def test_compose_examples():
    g = PathWord("a", "b", ev((1, "A")))
    assert compose(g, PathWord("b", "b", ())) == g
    assert s_eval(compose(g, PathWord("b", "c", ev((1, "B"))))) == vec(A="q", B="q^3")
    assert s_eval(compose(g, PathWord("b", "c", ev((-1, "A"))))).is_zero()
    with pytest.raises(PathEndpointError):
        compose(g, PathWord("c", "d", ()))


def test_invert_examples():
    assert invert(PathWord("a", "b", ())) == PathWord("b", "a", ())
    g = PathWord("a", "b", ev((1, "A")))
    assert invert(g).events == ev((-1, "A"))
    assert s_eval(invert(g)) == vec(A="-q^-1")


def test_s_f_and_s_if_examples():
    empty = loop("Ka")
    assert s_if(empty).is_zero() and s_f(empty) == SkeinVector.basis("Ka")
    g = PathWord("K+", "K-", ev((1, "K0")))
    assert s_f(g) == SkeinVector({"K-": P("q^2"), "K0": P("z*q")})
    lp = loop("Ka", ev((1, "A"), (-1, "B")))
    assert s_if(lp) == vec(A="z*q", B="-z*q")


@pytest.mark.parametrize("n", range(6))
def test_closed_form_equals_recursion_exhaustively(n):
    steps = [(s, k) for s in (1, -1) for k in ("A", "B")]
    for word in itertools.product(steps, repeat=n):
        evs = ev(*word)
        assert same_vector(s_eval(PathWord("p", "p", evs)), recursive_s(evs)), word


@settings(max_examples=1000)
@given(paths())
def test_closed_form_equals_recursion_random(g):
    assert same_vector(s_eval(g), recursive_s(g.events))


# -- identities between paths ---------------------------------------------------------

def qq(k):
    return q_power(k)


@settings(max_examples=1000)
@given(paths("a", "b"))
def test_path_times_inverse_vanishes(g):
    assert s_eval(compose(g, invert(g))).is_zero()
    assert s_eval(compose(invert(g), g)).is_zero()


@settings(max_examples=1000)
@given(paths("a", "b"))
def test_inverse_formula(g):
    assert s_eval(invert(g)) == -s_eval(g).scale(qq(-2 * index(g)))
    assert invert(invert(g)) == g


@settings(max_examples=1000)
@given(paths("a", "b"), paths("a", "b"))
def test_coterminal_difference(g1, g2):
    lhs = s_eval(g2) - s_eval(g1)
    rhs = s_eval(compose(invert(g1), g2)).scale(qq(2 * index(g1)))
    assert lhs == rhs


@settings(max_examples=1000)
@given(paths("a", "a"), paths("a", "a"))
def test_loop_commutator_with_doubled_exponent(g1, g2):
    one = RPoly(1)
    lhs = s_eval(compose(g1, g2)) - s_eval(compose(g2, g1))
    rhs = s_eval(g1).scale(one - qq(2 * index(g2))) - s_eval(g2).scale(one - qq(2 * index(g1)))
    assert lhs == rhs


@settings(max_examples=1000)
@given(paths("a", "b"), paths("b", "b"))
def test_conjugated_loop(g0, g1):
    conj = compose(compose(g0, g1), invert(g0))
    rhs = s_eval(g0).scale(RPoly(1) - qq(2 * index(g1))) + s_eval(g1).scale(qq(2 * index(g0)))
    assert s_eval(conj) == rhs


@settings(max_examples=1000)
@given(paths("a", "b"), paths("b", "c"))
def test_endpoint_maps_on_products(g1, g2):
    g = compose(g1, g2)
    assert s_if(g) == s_if(g1) + s_if(g2).scale(qq(2 * index(g1)))
    assert s_f(g) == s_f(g1) + s_if(g2).scale(qq(2 * index(g1)))
    assert s_f(g) == s_if(g) + SkeinVector.basis(g.start)


@settings(max_examples=1000)
@given(paths("a", "b"))
def test_coefficient_sum_is_index(g):
    total = sum((specialize(c, 1, 0) for _, c in s_eval(g).items()), 0)
    assert total == index(g)
    if index(g):
        assert not s_eval(g).is_zero()


# -- the local loop around two double points ------------------------------------------

def test_delta_loop_values():
    assert delta_loop_raw() == vec(**{"K0-": "q", "K-0": "-q", "K0+": "-q^-1", "K+0": "q^-1"})
    assert delta_loop(False).is_zero()
    assert delta_loop(True) == vec(K0o="q - q^-1", Ko0="q^-1 - q")


# -- path literals ------------------------------------------------------------------------

def test_parse_path_opaque_labels():
    g = parse_path("events=(+1:<A>)")
    assert s_eval(g) == vec(**{"<A>": "q"})
    assert g.start == "K_start" and g.end == "K_end"


def test_parse_path_with_model():
    g = parse_path("start=<b1,b2,b3>; events=(+1:<b1+b2,b3>)(-1:<b1+b3,b2>); end=<b1,b2,b3>", Z3)
    alpha = parse_wrap(Z3, "<b1,b2,b3>")
    assert g.start == g.end == alpha
    assert s_if(g) == SkeinVector({parse_wrap(Z3, "<b1*b2,b3>"): P("z*q"), parse_wrap(Z3, "<b1*b3,b2>"): P("-z*q")})


@given(events(6))
def test_path_literal_round_trip(evs):
    g = PathWord("S", "T", evs)
    assert parse_path(format_path(g)) == g


@pytest.mark.parametrize("bad", ["events=(+2:A)", "events=(+1 A)", "start", "color=red"])
def test_parse_path_errors(bad):
    with pytest.raises(GroupParseError):
        parse_path(bad)
