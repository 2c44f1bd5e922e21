"""Rebuild a term from its justified paths, and the end-to-end pipeline."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .ctree import build_ctree
from .jseq import APP, GLAM, GVAR, LAM, VAR, Occ, core, pview
from .term import Abs, NameSupply, Term, Var, apply
from .traversal import DEFAULT_FUEL, Mode, enumerate_maximal


class IncoherentPaths(ValueError):
    pass


class UnboundGhost(ValueError):
    pass


@dataclass(frozen=True)
class Entry:
    occ: Occ
    justifier: Optional[tuple]
    label: int


@dataclass
class InducedTree:
    labels: dict  # path -> Entry

    @property
    def paths(self) -> list:
        return sorted(self.labels, key=lambda p: (len(p), p))


def _same(a: Entry, b: Entry) -> bool:
    x, y = a.occ, b.occ
    return (a.justifier, a.label) == (b.justifier, b.label) and \
        (x.kind, x.binders + x.pending, x.name) == (y.kind, y.binders + y.pending, y.name)


def induced_tree(paths: Iterable[Sequence[Occ]]) -> InducedTree:
    """Label tree generated by a set of justified paths.

    Variables and application nodes are the 0th child of their parent lambda;
    a lambda is the child of its justifier indexed by its link label.
    """
    labels = {}
    for s in paths:
        where = []
        for k, o in enumerate(s):
            if k == 0:
                if not o.is_lambda or o.dist:
                    raise IncoherentPaths("paths must start with a pointerless lambda")
                p = ()
            elif o.is_lambda:
                if o.dist != 1:
                    raise IncoherentPaths("a lambda must point to its parent")
                p = where[k - 1] + (o.label,)
            else:
                if s[k - 1].kind not in (LAM, GLAM):
                    raise IncoherentPaths("paths must alternate")
                p = where[k - 1] + (0,)
            if o.dist and (o.dist > k):
                raise IncoherentPaths(f"dangling pointer at position {k}")
            just = where[k - o.dist] if o.dist else None
            e = Entry(o, just, o.label)
            if p in labels and not _same(labels[p], e):
                raise IncoherentPaths(f"paths disagree at {p}")
            labels[p] = e
            where.append(p)
    return InducedTree(labels)


def _is_free(tree: InducedTree, e: Entry) -> bool:
    if e.occ.kind != VAR or e.justifier != ():
        return False
    return e.label > len(tree.labels[()].occ.binders)


def readout(tree: InducedTree, supply: Optional[NameSupply] = None) -> Term:
    """Name the binders of an induced tree and convert it to a term."""
    labels = tree.labels
    if () not in labels:
        raise IncoherentPaths("empty path set")
    # binder slot counts, widened to the largest label pointing at each lambda
    width = {}
    for p, e in labels.items():
        if e.occ.is_lambda:
            width[p] = max(width.get(p, 0), len(e.occ.binders) + len(e.occ.pending))
    for p, e in labels.items():
        if e.occ.kind in (VAR, GVAR) and not _is_free(tree, e):
            if e.justifier not in width:
                raise UnboundGhost(f"variable at {p} points to a non-lambda")
            width[e.justifier] = max(width[e.justifier], e.label)

    free = {e.occ.name for e in labels.values() if _is_free(tree, e)}
    group = {}
    preferred = {}
    for p in sorted(labels):
        e = labels[p]
        if not e.occ.is_lambda:
            continue
        base = list(e.occ.binders + e.occ.pending)
        if width[p] > len(base):
            group[p] = len(group) + 1
            base += [f"g{group[p]}_{i}" for i in range(len(base) + 1, width[p] + 1)]
        preferred[p] = base

    nkids = {}
    for p in labels:
        if p and labels[p].occ.is_lambda:
            nkids[p[:-1]] = max(nkids.get(p[:-1], 0), p[-1])
    taken = set(free)
    for names in preferred.values():
        taken.update(names)
    supply = supply or NameSupply("v")

    def build(p, scope, visible):
        e = labels[p]
        names = []
        for x in preferred[p]:
            if x in visible or x in free or x in names:
                x = supply.fresh(taken)
                taken.add(x)
            names.append(x)
        scope = {**scope, p: names}
        visible = visible | set(names)
        c = p + (0,)
        if c not in labels:
            raise IncoherentPaths(f"lambda at {p} has no body")
        v = labels[c]
        if v.occ.kind == APP:
            raise IncoherentPaths("application nodes cannot occur in normal forms")
        if _is_free(tree, v):
            head = Var(v.occ.name)
        else:
            binder = scope.get(v.justifier)
            if binder is None:
                raise UnboundGhost(f"variable at {c} points outside its path")
            head = Var(binder[v.label - 1])
        args = []
        i = 1
        while c + (i,) in labels:
            args.append(build(c + (i,), scope, visible))
            i += 1
        if nkids.get(c, 0) >= i:
            raise IncoherentPaths(f"gap in the arguments of {c}")
        body = apply(head, args)
        for x in reversed(names):
            body = Abs(x, body)
        return body

    return build((), {}, frozenset())


def core_pviews(traversals) -> list:
    return [pview(core(t.occs)) for t in traversals]


def normalize_by_traversals(t: Term, fuel: int = DEFAULT_FUEL,
                            supply: Optional[NameSupply] = None) -> Term:
    tree = build_ctree(t)
    travs = enumerate_maximal(tree, Mode.NORMALIZING, fuel)
    return readout(induced_tree(core_pviews(travs)), supply)
