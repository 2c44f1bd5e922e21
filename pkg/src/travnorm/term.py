"""Untyped lambda terms: syntax, printing, alpha-equivalence and substitution."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Union


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Abs:
    var: str
    body: "Term"


Term = Union[Var, App, Abs]


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class Divergence(RuntimeError):
    """Raised when a computation exceeds its fuel budget."""

    def __init__(self, fuel: int, what: str = "computation"):
        super().__init__(f"{what} exceeded fuel {fuel}")
        self.fuel = fuel


@dataclass
class NameSupply:
    """Deterministic generator of fresh identifiers `<prefix><counter>`."""

    prefix: str = "v"
    counter: int = 0
    issued: set = field(default_factory=set)

    def fresh(self, avoid: Iterable[str] = ()) -> str:
        avoid = set(avoid)
        while True:
            self.counter += 1
            name = f"{self.prefix}{self.counter}"
            if name not in avoid and name not in self.issued:
                self.issued.add(name)
                return name


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"(?P<ws>\s+|--[^\n]*)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<sym>[\\λ.()])"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
        if m.lastgroup == "ident":
            tokens.append(("ident", m.group(), pos))
        elif m.lastgroup == "sym":
            sym = "\\" if m.group() == "λ" else m.group()
            tokens.append((sym, sym, pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def take(self, kind: str) -> str:
        tok = self.tokens[self.i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", _byte_offset(self.text, tok[2]))
        self.i += 1
        return tok[1]

    def term(self) -> Term:
        if self.peek() == "\\":
            return self.lam()
        return self.app()

    def lam(self) -> Term:
        self.take("\\")
        names = [self.take("ident")]
        while self.peek() == "ident":
            names.append(self.take("ident"))
        self.take(".")
        body = self.term()
        for x in reversed(names):
            body = Abs(x, body)
        return body

    def app(self) -> Term:
        t = self.atom()
        while self.peek() in ("ident", "("):
            t = App(t, self.atom())
        # a trailing abstraction may be written without parentheses
        if self.peek() == "\\":
            t = App(t, self.lam())
        return t

    def atom(self) -> Term:
        if self.peek() == "ident":
            return Var(self.take("ident"))
        if self.peek() == "(":
            self.take("(")
            t = self.term()
            self.take(")")
            return t
        tok = self.tokens[self.i]
        what = "end of input" if tok[0] == "eof" else repr(tok[1])
        raise ParseError(f"expected a term, found {what}", _byte_offset(self.text, tok[2]))


def parse(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.take("eof")
    return t


# ---------------------------------------------------------------- printing

def pretty(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Abs):
        names = []
        while isinstance(t, Abs):
            names.append(t.var)
            t = t.body
        return "\\" + " ".join(names) + ". " + pretty(t)
    head, args = spine(t)
    parts = [f"({pretty(head)})" if isinstance(head, Abs) else pretty(head)]
    for a in args:
        parts.append(pretty(a) if isinstance(a, Var) else f"({pretty(a)})")
    return " ".join(parts)


def to_json(t: Term) -> dict:
    if isinstance(t, Var):
        return {"kind": "var", "name": t.name}
    if isinstance(t, App):
        return {"kind": "app", "fn": to_json(t.fn), "arg": to_json(t.arg)}
    return {"kind": "lam", "var": t.var, "body": to_json(t.body)}


# ---------------------------------------------------------------- utilities

def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split `h a1 ... an` into its head and argument list."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def apply(head: Term, args: Iterable[Term]) -> Term:
    for a in args:
        head = App(head, a)
    return head


def lams(names: Iterable[str], body: Term) -> Term:
    for x in reversed(list(names)):
        body = Abs(x, body)
    return body


def size(t: Term) -> int:
    n = 0
    stack = [t]
    while stack:
        u = stack.pop()
        n += 1
        if isinstance(u, App):
            stack.append(u.fn)
            stack.append(u.arg)
        elif isinstance(u, Abs):
            stack.append(u.body)
    return n


def free_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, App):
        return free_vars(t.fn) | free_vars(t.arg)
    return free_vars(t.body) - {t.var}


def all_names(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, App):
        return all_names(t.fn) | all_names(t.arg)
    return all_names(t.body) | {t.var}


def alpha_eq(a: Term, b: Term) -> bool:
    def go(a, b, env_a, env_b, depth):
        if isinstance(a, Var) and isinstance(b, Var):
            da, db = env_a.get(a.name), env_b.get(b.name)
            if da is None and db is None:
                return a.name == b.name
            return da == db
        if isinstance(a, App) and isinstance(b, App):
            return go(a.fn, b.fn, env_a, env_b, depth) and go(a.arg, b.arg, env_a, env_b, depth)
        if isinstance(a, Abs) and isinstance(b, Abs):
            return go(a.body, b.body, {**env_a, a.var: depth}, {**env_b, b.var: depth}, depth + 1)
        return False

    return go(a, b, {}, {}, 0)


def rename_bound(t: Term, supply: NameSupply, avoid: set[str]) -> Term:
    """Give every binder in t a fresh name."""
    def go(t, env):
        if isinstance(t, Var):
            return Var(env.get(t.name, t.name))
        if isinstance(t, App):
            return App(go(t.fn, env), go(t.arg, env))
        y = supply.fresh(avoid)
        return Abs(y, go(t.body, {**env, t.var: y}))

    return go(t, {})


def substitute(t: Term, x: str, s: Term, supply: NameSupply) -> Term:
    """Capture-avoiding t[x := s]."""
    fv_s = free_vars(s)

    def go(t):
        if isinstance(t, Var):
            return s if t.name == x else t
        if isinstance(t, App):
            return App(go(t.fn), go(t.arg))
        if t.var == x or x not in free_vars(t.body):
            return t
        if t.var in fv_s:
            y = supply.fresh(fv_s | all_names(t.body) | {x})
            body = substitute(t.body, t.var, Var(y), supply)
            return Abs(y, go(body))
        return Abs(t.var, go(t.body))

    return go(t)
