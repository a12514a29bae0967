"""Pretty printer producing re-parseable surface syntax with few parentheses."""

from __future__ import annotations

from .parser import KEYWORDS, is_identifier
from .syntax import (
    App, BoolElim, BoolFalse, BoolTrue, BoolTy, Const, EmptyElim, EmptyTy,
    Fst, Id, J, Lam, Pair, Pi, Refl, Sigma, SigmaElim, Snd, Term, UnitElim,
    UnitTy, UnitVal, Universe, Var, consts, occurs,
)

TERM, PROD, APP, ATOM = 0, 1, 2, 3

_LITS = {UnitTy: "Unit", UnitVal: "tt", BoolTy: "Bool", BoolTrue: "true",
         BoolFalse: "false", EmptyTy: "Empty"}
_FORMS = {Refl: "refl", Id: "Id", J: "J", Pair: "pair", Fst: "fst", Snd: "snd",
          UnitElim: "elim Unit", BoolElim: "elim Bool", EmptyElim: "elim Empty",
          SigmaElim: "elim Sigma"}


def print_term(t: Term, names: tuple[str, ...] | list[str] = ()) -> str:
    """Render ``t``; ``names`` are the context's binder names, innermost last."""
    p = _Printer(consts(t))
    scope: list[str] = []
    for n in names:
        # anonymous or shadowed context entries get distinct printable names
        scope.append(n if n != "_" and is_identifier(n) and n not in scope and n not in KEYWORDS
                     else p.fresh("x", scope))
    p.taken |= set(scope)
    return p.go(t, scope, TERM)


class _Printer:
    def __init__(self, taken: set[str]):
        self.taken = taken

    def fresh(self, hint: str, scope: list[str]) -> str:
        base = hint if is_identifier(hint) else "x"
        avoid = set(scope) | self.taken | KEYWORDS
        if base not in avoid:
            return base
        stem = base.rstrip("0123456789'") or "x"
        k = 1
        while f"{stem}{k}" in avoid:
            k += 1
        return f"{stem}{k}"

    def binder(self, hint: str, body: Term, scope: list[str]) -> str:
        if not occurs(body, 0):
            return "_"
        return self.fresh(hint, scope)

    def go(self, t: Term, scope: list[str], prec: int) -> str:
        text, level = self.render(t, scope)
        return f"({text})" if level < prec else text

    def render(self, t: Term, scope: list[str]) -> tuple[str, int]:
        cls = type(t)
        if cls is Var:
            i = t.index
            if i < len(scope):
                return scope[-1 - i], ATOM
            return f"?{i - len(scope)}", ATOM
        if cls is Universe:
            return f"U{t.level}", ATOM
        if cls is Const:
            return t.name, ATOM
        if cls in _LITS:
            return _LITS[cls], ATOM
        if cls is Lam:
            xs = []
            while type(t) is Lam:
                x = self.binder(t.name, t.body, scope)
                xs.append(x)
                scope = scope + [x]
                t = t.body
            return f"fun {' '.join(xs)} => {self.go(t, scope, TERM)}", TERM
        if cls is Pi or cls is Sigma:
            return self.binders(t, scope)
        if cls is App:
            return f"{self.go(t.fn, scope, APP)} {self.go(t.arg, scope, ATOM)}", APP
        if cls in _FORMS:
            args = " ".join(self.go(c, scope, ATOM) for c in _kids(t))
            return f"{_FORMS[cls]} {args}", APP
        raise TypeError(t)

    def binders(self, t: Term, scope: list[str]) -> tuple[str, int]:
        cls = type(t)
        dom, body = (t.dom, t.cod) if cls is Pi else (t.first, t.second)
        if not occurs(body, 0):
            left = self.go(dom, scope, PROD if cls is Pi else APP)
            right = self.go(body, scope + ["_"], TERM if cls is Pi else PROD)
            op = "->" if cls is Pi else "*"
            return f"{left} {op} {right}", TERM if cls is Pi else PROD
        kw = "Pi" if cls is Pi else "Sigma"
        groups = []
        while type(t) is cls:
            dom, body = (t.dom, t.cod) if cls is Pi else (t.first, t.second)
            if not occurs(body, 0):
                break
            x = self.fresh(t.name, scope)
            d = self.go(dom, scope, TERM)
            if groups and groups[-1][1] == d and _same_dom_after_shift(groups[-1], dom):
                groups[-1][0].append(x)
            else:
                groups.append(([x], d, dom))
            scope = scope + [x]
            t = body
        head = " ".join(f"({' '.join(xs)} : {d})" for xs, d, _ in groups)
        return f"{kw} {head} -> {self.go(t, scope, TERM)}", TERM


def _same_dom_after_shift(group, dom: Term) -> bool:
    # grouping ``(x y : A)`` requires the second domain to be the first one
    # shifted past the new binder(s)
    from .syntax import shift

    xs, _, first = group
    return shift(first, len(xs)) == dom


def _kids(t: Term):
    return [getattr(t, name) for name, _ in t._kids]
