"""Random terms and three-way differential comparison of the normalizers."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .linred import ll_reduce, normal_order, trivial_finish
from .readout import normalize_by_traversals
from .term import Abs, App, Divergence, Term, Var, alpha_eq, free_vars

NAMES = "xyzw"


def random_term(rng: random.Random, size: int, scope: tuple = (), names: str = NAMES) -> Term:
    """A random term with exactly `size` nodes whose free variables lie in scope."""
    if size < 1 or (size == 1 and not scope):
        raise ValueError("no term of that size")
    if size == 1:
        return Var(rng.choice(scope))
    ok = lambda n: n >= 2 or (n == 1 and scope)
    splits = [k for k in range(1, size - 1) if ok(k) and ok(size - 1 - k)]
    if splits and rng.random() < 0.55:
        k = rng.choice(splits)
        return App(random_term(rng, k, scope, names), random_term(rng, size - 1 - k, scope, names))
    x = rng.choice(names)
    return Abs(x, random_term(rng, size - 1, scope + (x,), names))


def random_closed_term(rng: random.Random, max_size: int) -> Term:
    return random_term(rng, rng.randint(2, max_size))


def _traversal(t, fuel):
    return normalize_by_traversals(t, fuel)


def _linear(t, fuel):
    return trivial_finish(ll_reduce(t, fuel))


def _normal_order(t, fuel):
    return normal_order(t, fuel)


ENGINES = {"traversal": _traversal, "linear": _linear, "normal-order": _normal_order}


@dataclass
class Report:
    tried: int = 0
    checked: int = 0
    agreed: int = 0
    counterexample: Optional[Term] = None
    results: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def run_all(t: Term, fuel: int, engines: Optional[dict] = None) -> dict:
    engines = engines or ENGINES
    return {name: f(t, fuel) for name, f in engines.items()}


def agree(results: dict) -> bool:
    vals = list(results.values())
    return all(alpha_eq(vals[0], v) for v in vals[1:])


def _disagrees(t: Term, fuel: int, oracle_fuel: int, engines: dict) -> bool:
    try:
        normal_order(t, oracle_fuel, max_size=5000)
    except Divergence:
        return False
    try:
        return not agree(run_all(t, fuel, engines))
    except Exception:
        return True


def _shrinks(t: Term):
    """Smaller closed candidates: closed subterms and one-node contractions."""
    out = []

    def sub(u):
        if not free_vars(u) and u is not t:
            out.append(u)
        if isinstance(u, App):
            sub(u.fn)
            sub(u.arg)
        elif isinstance(u, Abs):
            sub(u.body)

    def contract(u):
        if isinstance(u, Var):
            return
        if isinstance(u, App):
            yield u.fn
            yield u.arg
            for v in contract(u.fn):
                yield App(v, u.arg)
            for v in contract(u.arg):
                yield App(u.fn, v)
        else:
            yield u.body
            for v in contract(u.body):
                yield Abs(u.var, v)

    sub(t)
    out.extend(v for v in contract(t) if not free_vars(v))
    return out


def minimize(t: Term, still_fails: Callable[[Term], bool]) -> Term:
    changed = True
    while changed:
        changed = False
        for c in _shrinks(t):
            if still_fails(c):
                t = c
                changed = True
                break
    return t


def compare(seed: int = 42, count: int = 200, max_size: int = 12, fuel: int = 100_000,
            oracle_fuel: int = 1000, engines: Optional[dict] = None) -> Report:
    """Check that all engines agree on `count` random normalizing closed terms."""
    engines = engines or ENGINES
    rng = random.Random(seed)
    rep = Report()
    while rep.checked < count:
        t = random_closed_term(rng, max_size)
        rep.tried += 1
        try:
            normal_order(t, oracle_fuel, max_size=5000)
        except Divergence:
            continue
        rep.checked += 1
        try:
            results = run_all(t, fuel, engines)
            good = agree(results)
        except Exception:
            results, good = {}, False
        if not good:
            rep.counterexample = minimize(t, lambda u: _disagrees(u, fuel, oracle_fuel, engines))
            try:
                rep.results = run_all(rep.counterexample, fuel, engines)
            except Exception as e:
                rep.results = {"error": repr(e)}
            return rep
        rep.agreed += 1
    return rep
