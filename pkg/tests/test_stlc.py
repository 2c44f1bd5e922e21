import random

import pytest
from hypothesis import given, settings

from conftest import closed_terms
from travnorm.ctree import build_ctree
from travnorm.fuzz import random_closed_term
from travnorm.linred import normal_order
from travnorm.stlc import (Arrow, Base, TypeMismatch, Untypable, arity, eta_long, infer,
                           normalize_stlc)
from travnorm.term import Var, alpha_eq, parse
from travnorm.traversal import Mode, enumerate_maximal

A = Base("a")


def arrow(*tys):
    out = tys[-1]
    for t in reversed(tys[:-1]):
        out = Arrow(t, out)
    return out


def test_infer():
    assert infer(parse("\\x. x")) == ({}, arrow(A, A))
    assert infer(parse("\\s z. s (s z)")) == ({}, arrow(arrow(A, A), A, A))
    with pytest.raises(Untypable):
        infer(parse("\\x. x x"))
    ctx, ty = infer(parse("f x"))
    assert set(ctx) == {"f", "x"} and ctx["f"] == Arrow(ctx["x"], ty)


def test_type_printing_and_arity():
    ty = arrow(arrow(A, A), A, A)
    assert str(ty) == "(a -> a) -> a -> a"
    assert arity(ty) == 2 and arity(A) == 0


def test_eta_long():
    out = eta_long(parse("\\f. f"), arrow(arrow(A, A), A, A))
    assert alpha_eq(out, parse("\\f x. f x"))
    two = parse("\\s z. s (s z)")
    assert eta_long(two, arrow(arrow(A, A), A, A)) == two
    assert eta_long(Var("x"), A, ctx={"x": A}) == Var("x")
    with pytest.raises(TypeMismatch):
        eta_long(parse("\\x. x"), A)


def test_normalize_stlc():
    ab = normalize_stlc(parse("(\\x. x)(\\y. y)"))
    assert alpha_eq(ab, parse("\\y. y"))
    add = "(\\m n s z. m s (n s z))"
    three = normalize_stlc(parse(f"{add} (\\s z. s z) (\\s z. s (s z))"))
    assert alpha_eq(three, parse("\\s z. s (s (s z))"))
    two = parse("\\s z. s (s z)")
    assert alpha_eq(normalize_stlc(two), two)
    with pytest.raises(Untypable):
        normalize_stlc(parse("(\\x. x x)(\\y. y)"))


def typable(t):
    try:
        return infer(t)
    except Untypable:
        return None


@settings(max_examples=100, deadline=None)
@given(closed_terms())
def test_eta_long_is_idempotent(t):
    r = typable(t)
    if r is None:
        return
    ctx, ty = r
    once = eta_long(t, ty, ctx=ctx)
    assert alpha_eq(eta_long(once, ty, ctx=ctx), once)


def test_normalizing_and_stlc_modes_coincide_on_eta_long_terms():
    rng = random.Random(7)
    checked = 0
    while checked < 30:
        t = random_closed_term(rng, 10)
        r = typable(t)
        if r is None:
            continue
        long = eta_long(t, r[1], ctx=r[0])
        tree = build_ctree(long)
        norm = enumerate_maximal(tree, Mode.NORMALIZING)
        assert all(not o.is_ghost for tr in norm for o in tr.occs)
        assert [tr.occs for tr in norm] == [tr.occs for tr in enumerate_maximal(tree, Mode.STLC)]
        want = eta_long(normal_order(t), r[1], ctx=r[0])
        assert alpha_eq(normalize_stlc(t), want)
        checked += 1
