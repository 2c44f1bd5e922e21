"""Computation trees: bulk lambdas, merged application nodes, enabling.

Paths are tuples of child indices.  A lambda's single child sits at index 0,
an application node's operator at 0 and its operands at 1..m, and a variable
node's arguments at 1..m, so a child's index always equals the link label of
the occurrence that visits it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .term import Abs, Term, Var, spine

Path = tuple


class InvalidPath(KeyError):
    pass


@dataclass(frozen=True)
class Lam:
    binders: tuple


@dataclass(frozen=True)
class AppNode:
    pass


@dataclass(frozen=True)
class VarNode:
    name: str


NodeLabel = Union[Lam, AppNode, VarNode]


@dataclass
class CTree:
    labels: dict            # path -> NodeLabel
    arities: dict           # path -> arity
    binding: dict           # var path -> (enabler path, label)
    free_index: dict        # free name -> root link label
    term: Optional[Term] = None

    @property
    def root(self) -> Path:
        return ()

    def label(self, path: Path) -> NodeLabel:
        try:
            return self.labels[path]
        except KeyError:
            raise InvalidPath(path) from None

    def arity(self, path: Path) -> int:
        self.label(path)
        return self.arities[path]

    def is_free(self, path: Path) -> bool:
        lab = self.label(path)
        return isinstance(lab, VarNode) and self.binding[path][0] == () and \
            self.binding[path][1] > len(self.labels[()].binders)

    def paths(self) -> list:
        return sorted(self.labels, key=lambda p: (len(p), p))

    def to_dot(self) -> str:
        lines = ["digraph ctree {"]
        for p in sorted(self.labels):
            lines.append(f'  "{path_str(p)}" [label="{label_str(self.labels[p])}"];')
        for p in sorted(self.labels):
            if p:
                lines.append(f'  "{path_str(p[:-1])}" -> "{path_str(p)}" [label="{p[-1]}"];')
        for p, (q, i) in sorted(self.binding.items()):
            lines.append(f'  "{path_str(p)}" -> "{path_str(q)}" [style=dashed, label="{i}"];')
        lines.append("}")
        return "\n".join(lines)


def path_str(p: Path) -> str:
    if not p:
        return "ε"
    return ".".join(str(i) for i in p) if any(i > 9 for i in p) else "".join(map(str, p))


def label_str(lab: NodeLabel) -> str:
    if isinstance(lab, Lam):
        return "λ" + " ".join(lab.binders)
    if isinstance(lab, AppNode):
        return "@"
    return lab.name


def build_ctree(t: Term) -> CTree:
    labels, arities, binding, free_index = {}, {}, {}, {}
    root_binders = []

    def lam(t, path, scope):
        binders = []
        while isinstance(t, Abs):
            binders.append(t.var)
            t = t.body
        labels[path] = Lam(tuple(binders))
        arities[path] = len(binders)
        if path == ():
            root_binders.extend(binders)
        scope = dict(scope)
        for i, x in enumerate(binders, 1):
            scope[x] = (path, i)
        head, args = spine(t)
        cpath = path + (0,)
        if isinstance(head, Var):
            labels[cpath] = VarNode(head.name)
            arities[cpath] = len(args)
            if head.name in scope:
                binding[cpath] = scope[head.name]
            else:
                if head.name not in free_index:
                    free_index[head.name] = len(root_binders) + len(free_index) + 1
                binding[cpath] = ((), free_index[head.name])
            for k, a in enumerate(args, 1):
                lam(a, cpath + (k,), scope)
        else:
            labels[cpath] = AppNode()
            arities[cpath] = len(args)
            lam(head, cpath + (0,), scope)
            for k, a in enumerate(args, 1):
                lam(a, cpath + (k,), scope)

    lam(t, (), {})
    return CTree(labels, arities, binding, free_index, t)


def enabler(tree: CTree, path: Path) -> Optional[tuple]:
    """Return (enabler path, link label), or None for application nodes."""
    lab = tree.label(path)
    if path == ():
        raise InvalidPath("the root has no enabler")
    if isinstance(lab, VarNode):
        return tree.binding[path]
    if isinstance(lab, AppNode):
        return None
    return path[:-1], path[-1]


def is_external(tree: CTree, path: Path) -> bool:
    while path != ():
        e = enabler(tree, path)
        if e is None:
            return False
        path = e[0]
    return True
