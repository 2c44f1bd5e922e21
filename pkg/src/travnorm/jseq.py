"""Justified sequences in quadruplet encoding.

An occurrence stores its node, the pending lambdas accumulated by core
projection, a backward pointer distance (0 when pointerless) and a link
label.  Occurrences also carry the node data needed to work without the
tree: binder names, variable name and arity.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

LAM = "lam"
APP = "app"
VAR = "var"
GLAM = "ghost_lam"
GVAR = "ghost_var"

LAMBDAS = (LAM, GLAM)
VARIABLES = (VAR, GVAR)


class DanglingPointer(ValueError):
    pass


class NotExternalVariable(ValueError):
    pass


@dataclass(frozen=True)
class Occ:
    kind: str
    path: Optional[tuple] = None    # structural nodes only
    dist: int = 0
    label: int = 0
    arity: int = 0
    binders: tuple = ()
    pending: tuple = ()
    name: Optional[str] = None      # structural variables only

    @property
    def is_ghost(self) -> bool:
        return self.kind in (GLAM, GVAR)

    @property
    def is_lambda(self) -> bool:
        return self.kind in LAMBDAS

    @property
    def is_root(self) -> bool:
        return self.kind == LAM and self.path == ()

    @property
    def structure_kind(self) -> str:
        if self.kind in LAMBDAS:
            return "Lam"
        return "App" if self.kind == APP else "Var"

    def show(self) -> str:
        if self.kind == LAM:
            s = "λ" + "".join(self.binders)
            if self.pending:
                s += "^[" + "".join(self.pending) + "]"
        elif self.kind == GLAM:
            s = "λλ" + (("^[" + "".join(self.pending) + "]") if self.pending else "")
        elif self.kind == GVAR:
            s = "θ"
        elif self.kind == APP:
            s = "@"
        else:
            s = self.name or "?"
        if self.dist:
            s += f"<{self.dist},{self.label}>"
        return s


JSeq = tuple  # tuple[Occ, ...]


def show(s: Sequence[Occ]) -> str:
    return " · ".join(o.show() for o in s)


def structure(s: Sequence[Occ]) -> tuple:
    return tuple((o.structure_kind, o.dist, o.label) for o in s)


def justifier(s: Sequence[Occ], k: int) -> Optional[int]:
    d = s[k].dist
    return k - d if d else None


def external_flags(s: Sequence[Occ]) -> list[bool]:
    """Hereditary justification by a root occurrence, per occurrence."""
    flags = []
    for k, o in enumerate(s):
        j = justifier(s, k)
        flags.append(o.is_root if j is None else flags[j])
    return flags


def _reindex(s: Sequence[Occ], keep: list[int], strict: bool = True) -> JSeq:
    pos = {k: n for n, k in enumerate(keep)}
    out = []
    for n, k in enumerate(keep):
        o = s[k]
        j = justifier(s, k)
        if j is None:
            out.append(o)
        elif j in pos:
            out.append(replace(o, dist=n - pos[j]))
        elif strict:
            raise DanglingPointer(f"justifier of occurrence {k} is not retained")
        else:
            out.append(replace(o, dist=0, label=0))
    return tuple(out)


def pview_indices(s: Sequence[Occ], end: Optional[int] = None) -> list[int]:
    k = len(s) - 1 if end is None else end
    out = []
    while k >= 0:
        o = s[k]
        out.append(k)
        if o.is_lambda:
            j = justifier(s, k)
            if j is None:
                break
            out.append(j)
            k = j - 1
        else:
            k -= 1
    out.reverse()
    return out


def oview_indices(s: Sequence[Occ], end: Optional[int] = None) -> list[int]:
    k = len(s) - 1 if end is None else end
    out = []
    while k >= 0:
        o = s[k]
        out.append(k)
        if o.kind in VARIABLES:
            j = justifier(s, k)
            if j is None:
                break
            out.append(j)
            k = j - 1
        elif o.kind == APP:
            break
        else:
            k -= 1
    out.reverse()
    return out


def pview(s: Sequence[Occ]) -> JSeq:
    return _reindex(s, pview_indices(s))


def oview(s: Sequence[Occ]) -> JSeq:
    return _reindex(s, oview_indices(s))


def filter_root(s: Sequence[Occ]) -> JSeq:
    ext = external_flags(s)
    return _reindex(s, [k for k in range(len(s)) if ext[k]])


def core(s: Sequence[Occ], seed: Sequence[str] = ()) -> JSeq:
    """Keep external occurrences, threading internal binders onto lambdas."""
    ext = external_flags(s)
    stack = list(seed)
    keep, out = [], {}
    for k in range(len(s) - 1, -1, -1):
        o = s[k]
        if ext[k]:
            keep.append(k)
            if o.is_lambda:
                out[k] = replace(o, pending=o.pending + tuple(stack))
            else:
                out[k] = o
            stack = []
        elif o.kind == LAM:
            stack = list(o.binders) + list(o.pending) + stack
        elif o.kind == GLAM:
            stack = list(o.pending) + stack
        else:
            stack = stack[o.arity:]
    keep.reverse()
    patched = [out.get(k, o) for k, o in enumerate(s)]
    return _reindex(patched, keep)


def eq_mod_pending(a: Occ, b: Occ) -> bool:
    if (a.structure_kind, a.dist, a.label) != (b.structure_kind, b.dist, b.label):
        return False
    if a.is_lambda:
        return a.binders + a.pending == b.binders + b.pending
    return True


def jseq_eq(s: Sequence[Occ], u: Sequence[Occ]) -> bool:
    return len(s) == len(u) and all(eq_mod_pending(a, b) for a, b in zip(s, u))


@dataclass(frozen=True)
class Strand:
    start: int
    end: int
    occs: JSeq


def strand_ending_at(s: Sequence[Occ], i: int) -> Strand:
    return _strand(s, external_flags(s), i)


def _strand(s: Sequence[Occ], ext: Sequence[bool], i: int) -> Strand:
    if s[i].kind not in VARIABLES or not ext[i]:
        raise NotExternalVariable(f"occurrence {i} is not an external variable")
    k = i - 1
    while k >= 0 and not ext[k]:
        k -= 1
    if k < 0 or not s[k].is_lambda:
        raise ValueError("malformed strand")
    return Strand(k, i, tuple(s[k:i + 1]))


def arity_threshold(s: Sequence[Occ], end: Optional[int] = None,
                    ext: Optional[Sequence[bool]] = None) -> int:
    """Largest IVar label that can still reach a structural node.

    Walks the strand backwards as pairs (alpha_q, n_q) and takes the maximum
    of the running sums b_1 = |n_1|, b_(q+1) = b_q + |n_(q+1)| - |alpha_q|
    over every pair of the strand, including the outermost one.
    """
    i = len(s) - 1 if end is None else end
    st = _strand(s, external_flags(s) if ext is None else ext, i)
    occs = st.occs
    ns = occs[1::2][::-1]
    alphas = occs[0::2][::-1]
    b = best = ns[0].arity
    for q in range(1, len(ns)):
        b += ns[q].arity - alphas[q - 1].arity
        best = max(best, b)
    return best


def to_json(s: Sequence[Occ], rules: Optional[Sequence[str]] = None) -> list:
    out = []
    for k, o in enumerate(s):
        d = {"kind": o.kind}
        if o.path is not None:
            d["path"] = list(o.path)
        if o.kind == LAM:
            d["binders"] = list(o.binders)
        if o.name is not None:
            d["name"] = o.name
        d["arity"] = o.arity
        d["pending"] = list(o.pending)
        d["dist"] = o.dist
        d["label"] = o.label
        if rules is not None:
            d["rule"] = rules[k]
        out.append(d)
    return out


def from_json(data: list) -> JSeq:
    out = []
    for d in data:
        path = tuple(d["path"]) if "path" in d else None
        out.append(Occ(d["kind"], path, d["dist"], d["label"], d.get("arity", 0),
                       tuple(d.get("binders", ())), tuple(d["pending"]), d.get("name")))
    return tuple(out)
