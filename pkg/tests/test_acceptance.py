"""The nine acceptance criteria, one test each.

A PASS/FAIL line per criterion is printed in the terminal summary (see conftest.py).
Invariant checks from invariants.py run inline on every traversal and reduction.
"""

import json
import random
import time

import pytest

import examples_data as P
from invariants import check_traversal, linear_normalize_checked
from travnorm import fuzz
from travnorm.ctree import build_ctree
from travnorm.jseq import (GLAM, GVAR, LAM, VAR, VARIABLES, arity_threshold, external_flags,
                           strand_ending_at)
from travnorm.linred import (GenRedex, gen_redexes, linear_fire, lloc, normal_order, subterm,
                             trivial_finish)
from travnorm.readout import core_pviews, induced_tree, readout
from travnorm.stlc import Untypable, eta_long, infer, normalize_stlc
from travnorm.term import Divergence, NameSupply, Var, alpha_eq, parse
from travnorm.traversal import Mode, empty, enumerate_maximal, forced_step, step_with


def checked_traversals(tree, mode=Mode.NORMALIZING, fuel=100_000):
    travs = enumerate_maximal(tree, mode, fuel)
    for tr in travs:
        check_traversal(tree, tr.occs)
    return travs


def checked_normalize(t, fuel=100_000):
    travs = checked_traversals(build_ctree(t), fuel=fuel)
    return readout(induced_tree(core_pviews(travs)))


def normalizing_terms(seed, count, max_size=12):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        t = fuzz.random_closed_term(rng, max_size)
        try:
            normal_order(t, 1000, max_size=5000)
        except Divergence:
            continue
        out.append(t)
    return out


# 1 ------------------------------------------------------------------------

GOLDEN = [
    (P.BABY, "\\y. y"),
    (P.MISSING_OPERAND, "y1 (\\z. z y2) y2"),
    (P.VARITY_TWO, "\\x y s z. s (x s (y s z))"),
] + [(f"{P.CHURCH_INCREMENT} {P.church(k)}", P.church(k + 1)) for k in range(6)]


@pytest.mark.parametrize("text,want", GOLDEN)
def test_criterion_1_golden_normal_forms(text, want):
    start = time.perf_counter()
    got = checked_normalize(parse(text))
    assert time.perf_counter() - start < 1.0
    assert alpha_eq(got, parse(want))


# 2 ------------------------------------------------------------------------

def _fixture_view(o):
    d = {"kind": o.kind, "dist": o.dist}
    if o.is_ghost:
        d["label"] = o.label
    if o.kind == LAM:
        d["binders"] = list(o.binders)
    if o.kind == VAR:
        d["name"] = o.name
    return d


def test_criterion_2_golden_traversals():
    tree = build_ctree(parse(P.BABY))
    baby = checked_traversals(tree)
    assert [len(t) for t in baby] == [18]
    assert P.as_triples(baby[0].occs) == P.BABY_T

    missing = checked_traversals(build_ctree(parse(P.MISSING_OPERAND)))
    assert sorted(len(t) for t in missing) == [12, 18]
    assert sorted(P.as_triples(t.occs) for t in missing) == sorted([P.MISSING_T1, P.MISSING_T2])

    varity = checked_traversals(build_ctree(parse(P.VARITY_TWO)))
    tables = P.varity_tables()
    assert len(varity) == len(tables) == 3
    def key(seq):
        return json.dumps(seq, sort_keys=True)
    got = sorted(([_fixture_view(o) for o in t.occs] for t in varity), key=key)
    assert [len(g) for g in got] == [len(v) for v in sorted(tables.values(), key=key)]
    assert got == sorted(tables.values(), key=key)


# 3 ------------------------------------------------------------------------

def _until_choice(t):
    while True:
        nxt = forced_step(t, Mode.NORMALIZING)
        if nxt is None:
            return t
        t = nxt


def test_criterion_3_arity_threshold_values():
    (baby,) = checked_traversals(build_ctree(parse(P.BABY)))
    assert arity_threshold(baby.occs) == 0
    tree = build_ctree(parse(P.CHURCH_INCREMENT))
    t_eps = _until_choice(empty(tree))
    assert P.as_triples(t_eps.occs) == P.CHURCH_T_EPS
    assert arity_threshold(t_eps.occs) == 1
    t1 = _until_choice(step_with(t_eps, len(t_eps) - 1, 1))
    assert P.as_triples(t1.occs) == P.CHURCH_T1
    assert arity_threshold(t1.occs) == 2


# 4 ------------------------------------------------------------------------

def _external_prefixes(rng, want):
    """Prefixes of normalizing traversals that end at an external variable."""
    found = []
    for t in normalizing_terms(2024, 400):
        for tr in checked_traversals(build_ctree(t)):
            ext = external_flags(tr.occs)
            ends = [k for k, o in enumerate(tr.occs) if o.kind in VARIABLES and ext[k]]
            for k in rng.sample(ends, min(2, len(ends))):
                found.append(tr.__class__(tr.occs[:k + 1], tr.tree, tr.rules[:k + 1]))
        if len(found) >= want:
            break
    return found


def _weave_violations(t, i, rng):
    last = len(t) - 1
    strand = strand_ending_at(t.occs, last)
    k = len(strand.occs) // 2
    n_at = [last - 2 * q for q in range(k)]          # n_1 .. n_k
    alpha_at = [last - 2 * q - 1 for q in range(k)]  # alpha_1 .. alpha_k
    cur = step_with(t, last, i)
    while len(cur) < len(t) + 2 * k + 20:
        nxt = forced_step(cur, Mode.IMAGINARY)
        if nxt is None:
            nxt = step_with(cur, len(cur) - 1, rng.randint(1, 3))
        cur = nxt
    check_traversal(t.tree, cur.occs)
    occs = cur.occs
    bad = []
    label = i
    for q in range(k):
        lam, var = len(t) + 2 * q, len(t) + 2 * q + 1
        if (occs[lam].kind, lam - occs[lam].dist, occs[lam].label) != (GLAM, n_at[q], label):
            bad.append(("lambda", q))
        label += occs[alpha_at[q]].arity - occs[n_at[q]].arity
        if (occs[var].kind, var - occs[var].dist, occs[var].label) != (GVAR, alpha_at[q], label):
            bad.append(("variable", q))
    if not all(o.is_ghost for o in occs[len(t):]):
        bad.append(("structural node after the weave",))
    return bad


def test_criterion_4_weaving_property():
    rng = random.Random(4)
    prefixes = _external_prefixes(rng, 120)
    assert len(prefixes) >= 100
    violations = []
    for t in prefixes:
        a = arity_threshold(t.occs)
        for i in range(a + 1, a + 4):
            violations += _weave_violations(t, i, rng)
    assert violations == []


# 5 ------------------------------------------------------------------------

def test_criterion_5_omega_behaviour():
    tree = build_ctree(parse(P.OMEGA))
    with pytest.raises(Divergence):
        enumerate_maximal(tree, fuel=5000)
    head_y, arg_y = (0, 1, 0), (0, 1, 0, 1, 0)
    t = empty(tree)
    for _ in range(400):
        t = forced_step(t, Mode.NORMALIZING)
        assert t is not None, "the traversal of omega is infinite"
    check_traversal(tree, t.occs)
    lengths = []
    occs = t.occs
    for k, o in enumerate(occs):
        if o.kind == VAR and o.path == head_y:
            nxt = next(j for j in range(k + 1, len(occs)) if occs[j].kind == VAR)
            if occs[nxt].path == arg_y:
                lengths.append(sum(occs[j].is_ghost for j in range(k + 1, nxt)))
    assert lengths[:4] == [2 * (2 ** i - 1) for i in range(1, 5)] == [2, 6, 14, 30]


# 6 ------------------------------------------------------------------------

def test_criterion_6_differential_agreement():
    engines = {"traversal": checked_normalize,
               "linear": linear_normalize_checked,
               "normal-order": normal_order}
    start = time.perf_counter()
    rep = fuzz.compare(seed=6, count=500, max_size=12, engines=engines)
    elapsed = time.perf_counter() - start
    assert rep.ok, f"counterexample {rep.counterexample}: {rep.results}"
    assert rep.checked == rep.agreed >= 500
    assert elapsed < 60


# 7 ------------------------------------------------------------------------

def test_criterion_7_linear_reduction_examples():
    assert gen_redexes(parse("(\\x y. m) a1 a2")) == {GenRedex((0, 0), (0, 1)),
                                                      GenRedex((0, 0, 0), (1,))}
    assert gen_redexes(parse("(\\z. (\\x y. m) n) a1 a2")) == {
        GenRedex((0, 0), (0, 1)), GenRedex((0, 0, 0, 0), (0, 0, 0, 1)),
        GenRedex((0, 0, 0, 0, 0), (1,))}

    t = parse("(\\x. x x n) z")
    assert lloc(t) == (0, 0, 0, 0)
    u = parse("(\\x y. z y x)(\\u. u)(\\v. v)")
    assert subterm(u, lloc(u)) == Var("y")
    assert lloc(parse("(\\z. u)((\\x. x) y)")) is None

    s = NameSupply("l")
    t1 = linear_fire(t, lloc(t), s)
    assert t1 == parse("(\\x. z x n) z")
    assert linear_fire(t1, lloc(t1), s) == parse("(\\x. z z n) z")

    assert trivial_finish(parse("(\\x. u)((\\z. z) y)")) == parse("u")
    assert alpha_eq(trivial_finish(parse("(\\x. z ((\\w y. y) x)) U")), parse("z (\\y. y)"))


# 8 ------------------------------------------------------------------------

def test_criterion_8_stlc_coincidence():
    rng = random.Random(8)
    checked = 0
    for _ in range(20_000):
        t = fuzz.random_closed_term(rng, 12)
        try:
            ctx, ty = infer(t)
        except Untypable:
            continue
        tree = build_ctree(eta_long(t, ty, ctx=ctx))
        norm = checked_traversals(tree, Mode.NORMALIZING)
        stlc = checked_traversals(tree, Mode.STLC)
        assert not any(o.is_ghost for tr in norm for o in tr.occs)
        assert [tr.occs for tr in norm] == [tr.occs for tr in stlc]
        assert alpha_eq(normalize_stlc(t), eta_long(normal_order(t), ty, ctx=ctx))
        linear_normalize_checked(t)
        checked += 1
        if checked == 60:
            break
    assert checked >= 50


# 9 ------------------------------------------------------------------------

def test_criterion_9_invariant_suite():
    terms = [parse(text) for text, _ in GOLDEN]
    terms += normalizing_terms(9, 300)
    for t in terms:
        checked_traversals(build_ctree(t))
        assert alpha_eq(linear_normalize_checked(t), normal_order(t))
