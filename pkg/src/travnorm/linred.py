"""Linear reduction on plain terms, trivial finishing, and a normal-order oracle.

Occurrences are addressed by paths into the AST: an abstraction's body is
step 0, an application's operator step 0 and its operand step 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .term import (Abs, App, Divergence, NameSupply, Term, Var, all_names, free_vars,
                   rename_bound, size, substitute)

Path = tuple


class InvalidPath(KeyError):
    pass


class NotInvolved(ValueError):
    pass


class NotQuasiNormal(ValueError):
    pass


@dataclass(frozen=True)
class GenRedex:
    binder: Path
    argument: Path


def subterm(t: Term, path: Path) -> Term:
    for step in path:
        if isinstance(t, Abs) and step == 0:
            t = t.body
        elif isinstance(t, App) and step in (0, 1):
            t = t.fn if step == 0 else t.arg
        else:
            raise InvalidPath(path)
    return t


def replace_at(t: Term, path: Path, new: Term) -> Term:
    if not path:
        return new
    step, rest = path[0], path[1:]
    if isinstance(t, Abs) and step == 0:
        return Abs(t.var, replace_at(t.body, rest, new))
    if isinstance(t, App) and step == 0:
        return App(replace_at(t.fn, rest, new), t.arg)
    if isinstance(t, App) and step == 1:
        return App(t.fn, replace_at(t.arg, rest, new))
    raise InvalidPath(path)


def binder_of(t: Term, path: Path) -> Optional[Path]:
    """Path of the abstraction binding the variable at `path`, or None if free."""
    v = subterm(t, path)
    if not isinstance(v, Var):
        raise InvalidPath(f"{path} is not a variable occurrence")
    found = None
    u = t
    for k, step in enumerate(path):
        if isinstance(u, Abs) and u.var == v.name:
            found = path[:k]
        u = subterm(u, (step,))
    return found


def lambda_list(t: Term, at: Path = ()) -> list:
    """Binder paths of the head abstractions still pending at `at`."""
    def go(u, p):
        if isinstance(u, Var):
            return []
        if isinstance(u, Abs):
            return [p] + go(u.body, p + (0,))
        return go(u.fn, p + (0,))[1:]
    return go(subterm(t, at), tuple(at))


def _analyse(t: Term):
    """Lambda-lists of every subterm and the generalized redexes, in one pass."""
    ll = {}
    redexes = {}

    def go(u, p):
        if isinstance(u, Var):
            ll[p] = ()
        elif isinstance(u, Abs):
            go(u.body, p + (0,))
            ll[p] = (p,) + ll[p + (0,)]
        else:
            go(u.fn, p + (0,))
            go(u.arg, p + (1,))
            head = ll[p + (0,)]
            if head:
                redexes[head[0]] = p + (1,)
            ll[p] = head[1:]

    go(t, ())
    return ll, redexes


def gen_redexes(t: Term) -> set:
    _, redexes = _analyse(t)
    return {GenRedex(b, a) for b, a in redexes.items()}


def lloc(t: Term) -> Optional[Path]:
    """Leftmost variable occurrence involved in a generalized redex."""
    ll, redexes = _analyse(t)

    def go(u, p, scope):
        if isinstance(u, Var):
            b = scope.get(u.name)
            return p if b is not None and b in redexes else None
        if isinstance(u, Abs):
            return go(u.body, p + (0,), {**scope, u.var: p})
        r = go(u.fn, p + (0,), scope)
        if r is not None:
            return r
        if not ll[p + (0,)]:
            return go(u.arg, p + (1,), scope)
        return None

    return go(t, (), {})


def hoc(t: Term) -> Path:
    """Head occurrence: the leftmost variable occurrence."""
    p = ()
    while not isinstance(t, Var):
        t = t.body if isinstance(t, Abs) else t.fn
        p += (0,)
    return p


def args_of_hoc(t: Term) -> list:
    """Paths of the operands collected along the head spine while no lambda is pending."""
    def go(u, p):
        if isinstance(u, Var):
            return []
        if isinstance(u, Abs):
            return go(u.body, p + (0,))
        out = go(u.fn, p + (0,))
        if not lambda_list(u.fn):
            out.append(p + (1,))
        return out
    return go(t, ())


def linear_fire(t: Term, occ: Path, supply: NameSupply) -> Term:
    """Substitute the single occurrence `occ` by a fresh copy of its redex argument."""
    b = binder_of(t, occ)
    _, redexes = _analyse(t)
    if b is None or b not in redexes:
        raise NotInvolved(f"occurrence {occ} is not involved in a generalized redex")
    arg_path = redexes[b]
    avoid = all_names(t)
    arg = rename_bound(subterm(t, arg_path), supply, avoid)
    fv = free_vars(arg)
    # rename binders between the redex and occ that would capture the argument
    top = len(arg_path) - 1
    for k in range(len(occ), top, -1):
        node = subterm(t, occ[:k])
        if isinstance(node, Abs) and node.var in fv:
            y = supply.fresh(avoid | fv)
            avoid.add(y)
            t = replace_at(t, occ[:k], Abs(y, substitute(node.body, node.var, Var(y), supply)))
    return replace_at(t, occ, arg)


@dataclass(frozen=True)
class LinearStep:
    step: int
    lloc_path: Path
    redex_binder_path: Path
    argument_path: Path
    term: Term


def ll_reduce(t: Term, fuel: int = 100_000, supply: Optional[NameSupply] = None,
              on_step: Optional[Callable[[LinearStep], None]] = None,
              max_size: int = 1_000_000) -> Term:
    supply = supply or NameSupply("l")
    for n in range(1, fuel + 1):
        occ = lloc(t)
        if occ is None:
            return t
        b = binder_of(t, occ)
        arg_path = _analyse(t)[1][b]
        t = linear_fire(t, occ, supply)
        if on_step is not None:
            on_step(LinearStep(n, occ, b, arg_path, t))
        if size(t) > max_size:
            break
    raise Divergence(fuel, "linear reduction")


def _spinal_innermost(t: Term, p: Path = ()) -> Optional[Path]:
    if isinstance(t, Var):
        return None
    if isinstance(t, Abs):
        return _spinal_innermost(t.body, p + (0,))
    if isinstance(t.fn, Abs):
        r = _spinal_innermost(t.fn.body, p + (0, 0))
        return p if r is None else r
    r = _spinal_innermost(t.fn, p + (0,))
    return r if r is not None else _spinal_innermost(t.arg, p + (1,))


def trivial_finish(t: Term, supply: Optional[NameSupply] = None,
                   on_step: Optional[Callable[[Path, Term], None]] = None) -> Term:
    """Normalize a quasi-normal form by discarding arguments."""
    if lloc(t) is not None:
        raise NotQuasiNormal("term still has an involved occurrence")
    supply = supply or NameSupply("f")
    while True:
        p = _spinal_innermost(t)
        if p is None:
            return t
        r = subterm(t, p)
        t = replace_at(t, p, substitute(r.fn.body, r.fn.var, r.arg, supply))
        if on_step is not None:
            on_step(p, t)


def arg_lookup(t: Term, occ: Path) -> Optional[Path]:
    """Argument that the generalized redex of `occ`'s binder will substitute."""
    b = binder_of(t, occ)
    if b is None:
        return None
    # climb to the top of the bulk abstraction containing the binder
    top = b
    while top and isinstance(subterm(t, top[:-1]), Abs):
        top = top[:-1]
    i = len(b) - len(top) + 1
    while True:
        # the bulk abstraction must be the operator of an application spine
        if not top or top[-1] != 0 or not isinstance(subterm(t, top[:-1]), App):
            return None
        app = top[:-1]
        operands = [app + (1,)]
        while app and app[-1] == 0 and isinstance(subterm(t, app[:-1]), App):
            app = app[:-1]
            operands.append(app + (1,))
        if i <= len(operands):
            return operands[i - 1]
        i -= len(operands)
        if not app or not isinstance(subterm(t, app[:-1]), Abs):
            return None
        top = app[:-1]
        nb = 1
        while top and isinstance(subterm(t, top[:-1]), Abs):
            top = top[:-1]
            nb += 1
        i += nb


def _step_normal(t: Term, supply: NameSupply) -> Optional[Term]:
    if isinstance(t, Var):
        return None
    if isinstance(t, Abs):
        r = _step_normal(t.body, supply)
        return None if r is None else Abs(t.var, r)
    if isinstance(t.fn, Abs):
        return substitute(t.fn.body, t.fn.var, t.arg, supply)
    r = _step_normal(t.fn, supply)
    if r is not None:
        return App(r, t.arg)
    r = _step_normal(t.arg, supply)
    return None if r is None else App(t.fn, r)


def normal_order(t: Term, fuel: int = 100_000, supply: Optional[NameSupply] = None,
                 max_size: int = 1_000_000) -> Term:
    """Leftmost-outermost beta normalization; fuel counts beta steps."""
    supply = supply or NameSupply("n")
    for _ in range(fuel + 1):
        try:
            r = _step_normal(t, supply)
        except RecursionError:
            break  # the term grew too deep to be worth chasing
        if r is None:
            return t
        t = r
        if size(t) > max_size:
            break
    raise Divergence(fuel, "normal-order reduction")
