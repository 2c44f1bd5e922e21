"""Traversal rules, maximal-traversal enumeration and on-the-fly eta-expansion."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .ctree import AppNode, CTree, Lam, VarNode
from .jseq import (APP, GLAM, GVAR, LAM, VAR, VARIABLES, Occ, arity_threshold,
                   oview_indices, structure)
from .term import Abs, Divergence, NameSupply, Term, Var, all_names, apply

DEFAULT_FUEL = 100_000


class Mode(enum.Enum):
    IMAGINARY = "imaginary"
    BRANCHING = "branching"
    NORMALIZING = "normalizing"
    STLC = "stlc"


@dataclass(frozen=True)
class Traversal:
    occs: tuple
    tree: CTree
    rules: tuple = ()

    def __len__(self):
        return len(self.occs)

    def structure(self) -> tuple:
        return structure(self.occs)


def node_occ(tree: CTree, path: tuple, dist: int = 0, label: int = 0) -> Occ:
    lab = tree.labels[path]
    arity = tree.arities[path]
    if isinstance(lab, Lam):
        return Occ(LAM, path, dist, label, arity, binders=lab.binders)
    if isinstance(lab, AppNode):
        return Occ(APP, path, dist, label, arity)
    return Occ(VAR, path, dist, label, arity, name=lab.name)


class _State:
    """A traversal under construction, with externality cached per occurrence."""

    def __init__(self, tree: CTree, occs=(), rules=()):
        self.tree = tree
        self.occs: list[Occ] = []
        self.ext: list[bool] = []
        self.rules: list[str] = []
        for o, r in zip(occs, rules or ["?"] * len(occs)):
            self.push(o, r)

    def push(self, o: Occ, rule: str):
        k = len(self.occs)
        self.ext.append(o.is_root if not o.dist else self.ext[k - o.dist])
        self.occs.append(o)
        self.rules.append(rule)

    def truncate(self, n: int):
        del self.occs[n:], self.ext[n:], self.rules[n:]

    def freeze(self) -> Traversal:
        return Traversal(tuple(self.occs), self.tree, tuple(self.rules))

    def find_in_pview(self, end: int, path: tuple) -> int:
        k = end
        occs = self.occs
        while k >= 0:
            o = occs[k]
            if o.kind == LAM and o.path == path:
                return k
            if o.kind in (LAM, GLAM):
                if not o.dist:
                    break
                k -= o.dist
            else:
                k -= 1
        raise ValueError(f"binder {path} not found in the P-view")

    def child(self, m: int, i: int, dist: int, eta_rule: str, rule: str):
        o = self.occs[m]
        if o.kind in (VAR, APP) and i <= o.arity:
            return rule, node_occ(self.tree, o.path + (i,), dist, i)
        return eta_rule, Occ(GLAM, None, dist, i)

    def successors(self, mode: Mode, max_label: Optional[int] = None) -> list:
        occs, tree = self.occs, self.tree
        n = len(occs)
        if n == 0:
            return [("Root", node_occ(tree, ()))]
        k = n - 1
        last = occs[k]
        if last.kind == APP:
            return [("App", node_occ(tree, last.path + (0,), 1, 0))]
        if last.kind == LAM:
            c = last.path + (0,)
            lab = tree.labels[c]
            if isinstance(lab, AppNode):
                return [("Lam@", node_occ(tree, c))]
            bpath, i = tree.binding[c]
            j = self.find_in_pview(k, bpath)
            return [("LamVar", node_occ(tree, c, n - j, i))]
        if last.kind == GLAM:
            if mode is Mode.STLC:
                return []
            j = k - last.dist
            a = j - 1
            label = occs[a].arity + last.label - occs[j].arity
            return [("LamGhost", Occ(GVAR, None, n - a, label))]
        # variable occurrence
        if not self.ext[k]:
            a = k - last.dist
            m = a - 1
            i = last.label
            rule, occ = self.child(m, i, n - m, "VarEta", "Var")
            if mode is Mode.STLC and rule == "VarEta":
                return []
            return [(rule, occ)]
        if mode is Mode.NORMALIZING:
            top = arity_threshold(occs, k, self.ext)
        elif mode is Mode.STLC:
            top = last.arity
        else:
            if max_label is None:
                raise ValueError(f"{mode.value} mode needs an explicit label bound")
            top = max_label
        if mode is Mode.IMAGINARY:
            targets = [m for m in oview_indices(occs, k) if occs[m].kind in VARIABLES]
        else:
            targets = [k]
        out = []
        for m in targets:
            for i in range(1, top + 1):
                out.append(self.child(m, i, n - m, "IVarEta", "IVar"))
        return out


def extensions(t: Traversal, mode: Mode, max_label: Optional[int] = None) -> list[Traversal]:
    st = _State(t.tree, t.occs, t.rules)
    out = []
    for rule, o in st.successors(mode, max_label):
        out.append(Traversal(t.occs + (o,), t.tree, t.rules + (rule,)))
    return out


def empty(tree: CTree) -> Traversal:
    return Traversal((), tree, ())


def step_with(t: Traversal, m: int, i: int) -> Traversal:
    """Imaginary IVar step: visit the i-th child of occurrence m."""
    st = _State(t.tree, t.occs, t.rules)
    k = len(t.occs) - 1
    last = t.occs[k]
    if last.kind not in VARIABLES or not st.ext[k]:
        raise ValueError("the traversal does not end with an external variable")
    if m not in oview_indices(t.occs, k) or t.occs[m].kind not in VARIABLES:
        raise ValueError(f"occurrence {m} is not a variable of the O-view")
    if i < 1:
        raise ValueError("link labels start at 1")
    rule, o = st.child(m, i, len(t.occs) - m, "IVarEta", "IVar")
    return Traversal(t.occs + (o,), t.tree, t.rules + (rule,))


def forced_step(t: Traversal, mode: Mode = Mode.IMAGINARY) -> Optional[Traversal]:
    """Apply the unique non-IVar rule, or return None at an IVar point or the end."""
    st = _State(t.tree, t.occs, t.rules)
    k = len(t.occs) - 1
    if k >= 0 and t.occs[k].kind in VARIABLES and st.ext[k]:
        return None
    succ = st.successors(mode)
    if not succ:
        return None
    rule, o = succ[0]
    return Traversal(t.occs + (o,), t.tree, t.rules + (rule,))


def enumerate_maximal(tree: CTree, mode: Mode = Mode.NORMALIZING, fuel: int = DEFAULT_FUEL,
                      max_label: Optional[int] = None) -> list[Traversal]:
    """All maximal traversals, depth first, sorted by structure."""
    if mode is Mode.IMAGINARY:
        raise ValueError("imaginary traversals are not enumerable; use step_with")
    if mode is Mode.BRANCHING and max_label is None:
        raise ValueError("branching enumeration needs max_label")
    st = _State(tree)
    results = []
    branches = []  # (length at branch point, remaining choices)
    while True:
        succ = st.successors(mode, max_label)
        if succ:
            if len(st.occs) >= fuel:
                raise Divergence(fuel, "traversal")
            if len(succ) > 1:
                branches.append((len(st.occs), succ[:0:-1]))
            st.push(succ[0][1], succ[0][0])
            continue
        results.append(st.freeze())
        while branches and not branches[-1][1]:
            branches.pop()
        if not branches:
            break
        depth, rest = branches[-1]
        rule, o = rest.pop()
        st.truncate(depth)
        st.push(o, rule)
    results.sort(key=lambda t: t.structure())
    return results


# ---------------------------------------------------------------- eta-expansion

class _Node:
    def __init__(self, kind, binders=None, name=None, parent=None):
        self.kind = kind
        self.binders = list(binders or [])
        self.name = name
        self.parent = parent
        self.children = []   # lam: [body]; app: [op, args...]; var: [None, args...]

    def arity(self):
        return len(self.binders) if self.kind == LAM else len(self.children) - 1

    def to_term(self) -> Term:
        if self.kind == LAM:
            body = self.children[0].to_term()
            for x in reversed(self.binders):
                body = Abs(x, body)
            return body
        args = [c.to_term() for c in self.children[1:]]
        head = Var(self.name) if self.kind == VAR else self.children[0].to_term()
        return apply(head, args)


def _mutable_tree(tree: CTree) -> dict:
    nodes = {}
    for p in sorted(tree.labels, key=len):
        lab = tree.labels[p]
        parent = nodes[p[:-1]] if p else None
        if isinstance(lab, Lam):
            node = _Node(LAM, lab.binders, parent=parent)
        elif isinstance(lab, AppNode):
            node = _Node(APP, parent=parent)
        else:
            node = _Node(VAR, name=lab.name, parent=parent)
            node.children.append(None)
        nodes[p] = node
    for p in sorted(tree.labels):
        if p:
            kids = nodes[p[:-1]].children
            while len(kids) <= p[-1]:
                kids.append(None)
            kids[p[-1]] = nodes[p]
    return nodes


def eta_expansion_of(tree: CTree, t: Traversal) -> Term:
    """The term obtained by eta-expanding exactly where t visits ghosts."""
    nodes = _mutable_tree(tree)
    names = all_names(tree.term) if tree.term is not None else set()
    supply = NameSupply("eta")
    image = []
    for k, o in enumerate(t.occs):
        if o.kind == GVAR:
            image.append(image[k - 1].children[0])
            continue
        eta = (k > 0 and t.rules[k] in ("VarEta", "IVarEta")) or o.kind == GLAM
        if not eta:
            image.append(nodes[o.path])
            continue
        m = image[k - o.dist]
        while m.arity() < o.label:
            x = supply.fresh(names)
            names.add(x)
            m.parent.binders.append(x)
            lam = _Node(LAM, parent=m)
            v = _Node(VAR, name=x, parent=lam)
            v.children.append(None)
            lam.children.append(v)
            m.children.append(lam)
        image.append(m.children[o.label])
    return nodes[()].to_term()
