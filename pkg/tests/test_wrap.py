import pytest
from hypothesis import given, strategies as st

from hskein.groups import GroupParseError
from hskein.ring import RPoly
from hskein.wrap import (
    SkeinVector, WrapClass, descendants, from_hat, homology_class, parse_wrap, skein_closure, star_closure,
    to_hat, u_act,
)
from strategies import F2, Z3, free_reduce, free_words, rpoly, z3_elems


def W(text, model=Z3):
    return parse_wrap(model, text)


def z3_wraps(max_len=4):
    return st.lists(z3_elems(2), min_size=0, max_size=max_len).map(lambda xs: WrapClass.of(Z3, *xs))


def f2_wraps(max_len=3):
    return st.lists(free_words(max_len=3), max_size=max_len).map(
        lambda xs: WrapClass.of(F2, *(free_reduce(x) for x in xs)))


def test_wrap_is_unordered():
    assert W("<b1, b2, b3>") == W("<b3, b1, b2>")
    assert str(W("<b2, 1, b1^-1>")) == "<1, b1^-1, b2>"
    assert str(W("<>")) == "<>"


@given(z3_wraps())
def test_wrap_literal_round_trip(alpha):
    assert parse_wrap(Z3, str(alpha)) == alpha


@given(f2_wraps())
def test_free_wrap_literal_round_trip(alpha):
    assert parse_wrap(F2, str(alpha)) == alpha


def test_wrap_parse_error_has_column():
    with pytest.raises(GroupParseError):
        parse_wrap(Z3, "<b1, b9>")
    with pytest.raises(GroupParseError):
        parse_wrap(Z3, "b1, b2")


def test_descendant_examples():
    assert descendants(W("<b1, b2, b3>"), Z3) == {W("<b1+b2, b3>"), W("<b1+b3, b2>"), W("<b2+b3, b1>")}
    assert descendants(W("<b1>"), Z3) == set()


def test_free_descendants_match_merge_oracle():
    alpha = W("<x, y>", F2)
    want = set()
    for g in [(), (1,), (-1,), (2,), (-2,)]:
        word = free_reduce((1,) + g + (2,) + tuple(-l for l in reversed(g)))
        want.add(WrapClass.of(F2, word))
    assert descendants(alpha, F2, 1) == want


@given(z3_wraps(5))
def test_descendants_shorten_by_one_and_keep_homology(alpha):
    for d in descendants(alpha, Z3):
        assert len(d) == len(alpha) - 1
        assert homology_class(d, Z3) == homology_class(alpha, Z3)


@given(f2_wraps(3))
def test_free_descendants_keep_homology(alpha):
    for d in descendants(alpha, F2, 1):
        assert len(d) == len(alpha) - 1
        assert homology_class(d, F2) == homology_class(alpha, F2)


def test_closure_examples():
    assert set(skein_closure([W("<b1>")], Z3).members) == {W("<b1>")}
    seed = W("<b1, b2, b3>")
    want = {seed, W("<b1+b2, b3>"), W("<b1+b3, b2>"), W("<b2+b3, b1>"), W("<b1+b2+b3>")}
    assert set(skein_closure([seed], Z3).members) == want
    assert len(skein_closure([], Z3)) == 0


@given(st.lists(z3_wraps(4), max_size=3))
def test_closure_is_closed_and_idempotent(seeds):
    c = skein_closure(seeds, Z3)
    assert c.is_closed()
    assert skein_closure(c.members, Z3).members == c.members


@given(f2_wraps(3))
def test_free_closure_is_closed(alpha):
    c = skein_closure([alpha], F2, 1)
    assert c.is_closed()


def test_u_act_examples():
    assert u_act(W("<>"), 2, Z3) == W("<1, 1>")
    assert u_act(W("<b1>"), 1, Z3) == W("<1, b1>")
    assert u_act(W("<b1>"), 0, Z3) == W("<b1>")


@given(z3_wraps(3), st.integers(0, 3), st.integers(0, 3))
def test_u_act_composes(alpha, i, j):
    assert u_act(alpha, i + j, Z3) == u_act(u_act(alpha, i, Z3), j, Z3)


@given(z3_wraps(3))
def test_u_act_commutes_with_descendants(alpha):
    lifted = {u_act(d, 1, Z3) for d in descendants(alpha, Z3)}
    assert lifted <= descendants(u_act(alpha, 1, Z3), Z3)


def test_star_closure_examples():
    assert W("<1, 1, 1>") in star_closure([W("<>")])
    assert W("<b1, b2>") not in star_closure([W("<b1>")])
    assert W("<1, b1>") in star_closure([W("<b1>")])


def test_homology_examples():
    assert homology_class(W("<b1, b2>"), Z3) == (1, 1, 0)
    assert homology_class(W("<x, x^-1>", F2), F2) == (0, 0)
    assert homology_class(W("<x*y*x^-1>", F2), F2) == (0, 1)


# -- skein vectors -------------------------------------------------------------------

KEYS = [W("<b1>"), W("<b2>"), W("<1, b1>"), W("<b1, b2>")]


def vectors():
    return st.dictionaries(st.sampled_from(KEYS), rpoly(4, 2), max_size=4).map(SkeinVector)


@given(vectors(), vectors(), vectors(), rpoly(3, 1), rpoly(3, 1))
def test_module_axioms(a, b, c, r, s):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a - a == SkeinVector()
    assert a.scale(r * s) == a.scale(s).scale(r)
    assert (a + b).scale(r) == a.scale(r) + b.scale(r)
    assert a.scale(r + s) == a.scale(r) + a.scale(s)
    assert a.scale(RPoly(1)) == a


@given(vectors())
def test_hat_round_trip(v):
    assert from_hat(to_hat(v), Z3) == v


def test_unit_ratio():
    v = SkeinVector({KEYS[0]: RPoly.parse("q - z"), KEYS[1]: RPoly.parse("1")})
    assert v.scale(RPoly.parse("-q^3")).unit_ratio(v) == (-1, 3)
    assert v.scale(RPoly.parse("2")).unit_ratio(v) is None
