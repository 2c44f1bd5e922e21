"""Simple types: inference by unification, eta-long expansion, and STLC normalization."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .ctree import build_ctree
from .readout import core_pviews, induced_tree, readout
from .term import Abs, NameSupply, Term, Var, all_names, apply, spine
from .traversal import Mode, enumerate_maximal


class Untypable(TypeError):
    pass


class TypeMismatch(TypeError):
    pass


@dataclass(frozen=True)
class Base:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Arrow:
    dom: "SimpleType"
    cod: "SimpleType"

    def __str__(self):
        d = f"({self.dom})" if isinstance(self.dom, Arrow) else str(self.dom)
        return f"{d} -> {self.cod}"


@dataclass(frozen=True)
class _TVar:
    id: int

    def __str__(self):
        return f"t{self.id}"


SimpleType = Union[Base, Arrow]


def arity(ty) -> int:
    n = 0
    while isinstance(ty, Arrow):
        n += 1
        ty = ty.cod
    return n


def arg_types(ty) -> list:
    out = []
    while isinstance(ty, Arrow):
        out.append(ty.dom)
        ty = ty.cod
    return out


class _Unifier:
    def __init__(self):
        self.subst = {}
        self.count = 0

    def new(self) -> _TVar:
        self.count += 1
        return _TVar(self.count)

    def find(self, ty):
        while isinstance(ty, _TVar) and ty in self.subst:
            ty = self.subst[ty]
        return ty

    def resolve(self, ty):
        ty = self.find(ty)
        if isinstance(ty, Arrow):
            return Arrow(self.resolve(ty.dom), self.resolve(ty.cod))
        return ty

    def occurs(self, v, ty) -> bool:
        ty = self.find(ty)
        if ty == v:
            return True
        return isinstance(ty, Arrow) and (self.occurs(v, ty.dom) or self.occurs(v, ty.cod))

    def unify(self, a, b, err=Untypable):
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if isinstance(a, _TVar):
            if self.occurs(a, b):
                raise err(f"occurs check: {a} in {self.resolve(b)}")
            self.subst[a] = b
        elif isinstance(b, _TVar):
            self.unify(b, a, err)
        elif isinstance(a, Arrow) and isinstance(b, Arrow):
            self.unify(a.dom, b.dom, err)
            self.unify(a.cod, b.cod, err)
        else:
            raise err(f"cannot unify {a} with {b}")


def _infer(t: Term, u: _Unifier, ctx: dict, annot: dict):
    """Type every subterm; `annot` maps AST paths to (unresolved) types."""
    free = dict(ctx)

    def go(t, path, env):
        if isinstance(t, Var):
            if t.name in env:
                ty = env[t.name]
            else:
                if t.name not in free:
                    free[t.name] = u.new()
                ty = free[t.name]
        elif isinstance(t, Abs):
            a = u.new()
            b = go(t.body, path + (0,), {**env, t.var: a})
            ty = Arrow(a, b)
        else:
            f = go(t.fn, path + (0,), env)
            a = go(t.arg, path + (1,), env)
            ty = u.new()
            u.unify(f, Arrow(a, ty))
        annot[path] = ty
        return ty

    return go(t, (), {}), free


def _rename(types, u: _Unifier):
    """Map remaining type variables to a, b, c, ... in order of appearance."""
    names = {}

    def go(ty):
        ty = u.find(ty)
        if isinstance(ty, _TVar):
            if ty not in names:
                n = len(names)
                names[ty] = Base(chr(ord("a") + n) if n < 26 else f"t{n}")
            return names[ty]
        if isinstance(ty, Arrow):
            return Arrow(go(ty.dom), go(ty.cod))
        return ty

    return [go(ty) for ty in types]


def infer(t: Term) -> tuple:
    """Principal (context, type) of t; raises Untypable."""
    u = _Unifier()
    ty, free = _infer(t, u, {}, {})
    names = sorted(free)
    out = _rename([ty] + [free[x] for x in names], u)
    return dict(zip(names, out[1:])), out[0]


def eta_long(t: Term, ty: SimpleType, supply: Optional[NameSupply] = None,
             ctx: Optional[dict] = None) -> Term:
    """Fully eta-expand t with respect to ty (and the types of its free variables)."""
    u = _Unifier()
    annot = {}
    try:
        inferred, free = _infer(t, u, ctx or {}, annot)
    except Untypable as e:
        raise TypeMismatch(str(e)) from None
    u.unify(inferred, ty, TypeMismatch)
    supply = supply or NameSupply("e")
    avoid = set(all_names(t))

    def fresh():
        x = supply.fresh(avoid)
        avoid.add(x)
        return x

    def expand_var(x, ty):
        zs = [(fresh(), a) for a in arg_types(u.resolve(ty))]
        body = apply(Var(x), [expand_var(z, a) for z, a in zs])
        for z, _ in reversed(zs):
            body = Abs(z, body)
        return body

    def expand(t, path):
        if isinstance(t, Abs):
            return Abs(t.var, expand(t.body, path + (0,)))
        head, args = spine(t)
        hpath = path + (0,) * len(args)
        new_head = head if isinstance(head, Var) else expand(head, hpath)
        new_args = []
        for k, a in enumerate(args):
            new_args.append(expand(a, path + (0,) * (len(args) - 1 - k) + (1,)))
        zs = [(fresh(), a) for a in arg_types(u.resolve(annot[path]))]
        body = apply(apply(new_head, new_args), [expand_var(z, a) for z, a in zs])
        for z, _ in reversed(zs):
            body = Abs(z, body)
        return body

    return expand(t, ())


def normalize_stlc(t: Term, fuel: int = 100_000, supply: Optional[NameSupply] = None) -> Term:
    ctx, ty = infer(t)
    long = eta_long(t, ty, ctx=ctx)
    travs = enumerate_maximal(build_ctree(long), Mode.STLC, fuel)
    return readout(induced_tree(core_pviews(travs)), supply)
