"""Lexer, parser and name resolution for the ``.hott`` surface language.

The grammar is small and fully explicit::

    file   := {import} {decl}
    import := "import" path
    decl   := "def" name {group} [":" term] ":=" term
            | "axiom" name {group} ":" term
            | "postulate" name {group} ":" term string
            | "wsusp" name {"(" param ":=" term ")"} [":" U<n>] ["at" "levels" nat+]
            | "trunc" name {"(" param ":=" term ")"} [":" U<n>] ["at" "levels" nat+]
    group  := "(" name+ ":" term ")"
    term   := "fun" name+ "=>" term
            | ("Pi" | "Sigma") group+ "->" term
            | prod ["->" term]
    prod   := app ["*" prod]
    app    := form {atom} | atom {atom}
    form   := "refl" atom atom | "Id" atom atom atom | "J" atom^5
            | "pair" atom atom | "fst" atom | "snd" atom
            | "elim" ("Unit" atom^3 | "Bool" atom^4 | "Empty" atom^2 | "Sigma" atom^3)
    atom   := name | U<n> | "Unit" | "tt" | "Bool" | "true" | "false" | "Empty"
            | "(" term ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .diagnostics import Diagnostic
from .syntax import (
    App, Axiom, BoolElim, BoolFalse, BoolTrue, BoolTy, Const, Declaration,
    Definition, EmptyElim, EmptyTy, Fst, Id, J, Lam, Pair, Pi, Postulate, Refl,
    SchemaInstance, Sigma, SigmaElim, Snd, SourceSpan, Term, UnitElim, UnitTy,
    UnitVal, Universe, Var, with_span,
)

KEYWORDS = frozenset(
    "def axiom postulate import wsusp trunc Pi Sigma fun Id refl J pair fst snd "
    "Unit tt Bool true false Empty elim".split()
)
DECL_KEYWORDS = frozenset({"def", "axiom", "postulate", "import", "wsusp", "trunc"})
LITERALS = {"Unit": UnitTy, "tt": UnitVal, "Bool": BoolTy, "true": BoolTrue,
            "false": BoolFalse, "Empty": EmptyTy}
FORM_ARITY = {"refl": 2, "Id": 3, "J": 5, "pair": 2, "fst": 1, "snd": 1}
ELIM_ARITY = {"Unit": 3, "Bool": 4, "Empty": 2, "Sigma": 3}

_UNIVERSE = re.compile(r"U(\d+)\Z")
_START = set("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz_")
_CONT = _START | set("0123456789'.-/")


def is_identifier(s: str) -> bool:
    if not s or s[0] not in _START or s in KEYWORDS or _UNIVERSE.match(s) or s == "_":
        return False
    for i, ch in enumerate(s):
        if ch not in _CONT:
            return False
        if ch == "-" and i + 1 < len(s) and s[i + 1] in "->":
            return False
    return not s.endswith("-")


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(message)
        self.message = message
        self.span = span


# -- lexer ------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # IDENT KW UNIV NAT SYM STRING PATH EOF
    value: str
    span: SourceSpan


def lex(text: str, filename: str = "<input>") -> tuple[list[Token], list[Diagnostic]]:
    toks: list[Token] = []
    diags: list[Diagnostic] = []
    i, n = 0, len(text)
    line, col = 1, 1

    def span_from(l0, c0):
        return SourceSpan(filename, l0, c0, line, col)

    def advance(k: int = 1):
        nonlocal i, line, col
        for _ in range(k):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    expect_path = False
    while i < n:
        ch = text[i]
        if ch in " \t\r\n﻿":
            advance()
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                advance()
            continue
        if text.startswith("{-", i):
            l0, c0 = line, col
            depth = 0
            while i < n:
                if text.startswith("{-", i):
                    depth += 1
                    advance(2)
                elif text.startswith("-}", i):
                    depth -= 1
                    advance(2)
                    if depth == 0:
                        break
                else:
                    advance()
            if depth:
                diags.append(Diagnostic("error", span_from(l0, c0), "unterminated block comment"))
            continue
        l0, c0 = line, col
        if expect_path:
            expect_path = False
            j = i
            while j < n and not text[j].isspace():
                j += 1
            word = text[i:j]
            advance(j - i)
            toks.append(Token("PATH", word, span_from(l0, c0)))
            continue
        if ch in _START:
            j = i + 1
            while j < n and text[j] in _CONT:
                if text[j] == "-" and j + 1 < n and text[j + 1] in "->":
                    break
                j += 1
            while text[j - 1] == "-":
                j -= 1
            word = text[i:j]
            advance(j - i)
            if word in KEYWORDS:
                toks.append(Token("KW", word, span_from(l0, c0)))
                expect_path = word == "import"
            elif _UNIVERSE.match(word):
                toks.append(Token("UNIV", word[1:], span_from(l0, c0)))
            else:
                toks.append(Token("IDENT", word, span_from(l0, c0)))
            continue
        if ch.isdigit() and ch.isascii():
            j = i
            while j < n and text[j].isascii() and text[j].isdigit():
                j += 1
            word = text[i:j]
            advance(j - i)
            toks.append(Token("NAT", word, span_from(l0, c0)))
            continue
        if ch == '"':
            j = i + 1
            while j < n and text[j] not in '"\n':
                j += 1
            if j >= n or text[j] != '"':
                advance(j - i)
                diags.append(Diagnostic("error", span_from(l0, c0), "unterminated string"))
                continue
            value = text[i + 1:j]
            advance(j + 1 - i)
            toks.append(Token("STRING", value, span_from(l0, c0)))
            continue
        for sym in (":=", "=>", "->", "(", ")", ":", "*"):
            if text.startswith(sym, i):
                advance(len(sym))
                toks.append(Token("SYM", sym, span_from(l0, c0)))
                break
        else:
            advance()
            diags.append(Diagnostic("error", span_from(l0, c0), f"unexpected character {ch!r}"))
    toks.append(Token("EOF", "", SourceSpan(filename, line, col, line, col)))
    return toks, diags


# -- surface syntax -----------------------------------------------------------


@dataclass
class SName:
    name: str
    span: SourceSpan


@dataclass
class SUniv:
    level: int
    span: SourceSpan


@dataclass
class SLit:
    kind: str
    span: SourceSpan


@dataclass
class SBind:
    kind: str  # "Pi" | "Sigma" | "fun"
    name: str
    dom: Optional["STerm"]
    body: "STerm"
    span: SourceSpan


@dataclass
class SApp:
    fn: "STerm"
    arg: "STerm"
    span: SourceSpan


@dataclass
class SForm:
    kw: str  # "refl", "J", ..., or "elim Unit" etc.
    args: list
    span: SourceSpan


STerm = Union[SName, SUniv, SLit, SBind, SApp, SForm]


@dataclass
class SDecl:
    kind: str
    name: str
    span: SourceSpan
    type: Optional[STerm] = None
    body: Optional[STerm] = None
    marker: Optional[str] = None
    params: list = field(default_factory=list)
    level: Optional[int] = None
    levels: Optional[tuple[int, ...]] = None


@dataclass
class SImport:
    path: str
    span: SourceSpan


@dataclass
class ParsedFile:
    filename: str
    imports: list[SImport]
    decls: list[SDecl]
    diagnostics: list[Diagnostic]


def _join(a: SourceSpan, b: SourceSpan) -> SourceSpan:
    return SourceSpan(a.file, a.line, a.col, b.end_line, b.end_col)


# -- parser -------------------------------------------------------------------


class Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def at(self, kind: str, value: Optional[str] = None) -> bool:
        t = self.tok
        return t.kind == kind and (value is None or t.value == value)

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        shown = "end of input" if tok.kind == "EOF" else repr(tok.value)
        raise ParseError(f"{msg}, found {shown}", tok.span)

    def expect(self, kind: str, value: Optional[str] = None) -> Token:
        if not self.at(kind, value):
            self.error(f"expected {value or kind.lower()}")
        return self.next()

    def ident(self) -> Token:
        if not self.at("IDENT"):
            self.error("expected a name")
        return self.next()

    def binder_name(self) -> Token:
        # an identifier or the wildcard "_", which lexes as an identifier
        if self.at("IDENT"):
            return self.next()
        self.error("expected a binder name")

    def group(self) -> tuple[list[Token], STerm]:
        self.expect("SYM", "(")
        names = [self.binder_name()]
        while self.at("IDENT"):
            names.append(self.next())
        self.expect("SYM", ":")
        ty = self.term()
        self.expect("SYM", ")")
        return names, ty

    def term(self) -> STerm:
        t = self.tok
        if t.kind == "KW" and t.value == "fun":
            self.next()
            names = [self.binder_name()]
            while self.at("IDENT"):
                names.append(self.next())
            self.expect("SYM", "=>")
            body = self.term()
            for nm in reversed(names):
                body = SBind("fun", nm.value, None, body, _join(nm.span, _span_of(body)))
            return SBind(body.kind, body.name, body.dom, body.body, _join(t.span, _span_of(body)))
        if t.kind == "KW" and t.value in ("Pi", "Sigma"):
            self.next()
            groups = [self.group()]
            while self.at("SYM", "("):
                groups.append(self.group())
            self.expect("SYM", "->")
            body = self.term()
            for names, ty in reversed(groups):
                for nm in reversed(names):
                    body = SBind(t.value, nm.value, ty, body, _join(nm.span, _span_of(body)))
            return SBind(body.kind, body.name, body.dom, body.body, _join(t.span, _span_of(body)))
        lhs = self.prod()
        if self.at("SYM", "->"):
            self.next()
            rhs = self.term()
            return SBind("Pi", "_", lhs, rhs, _join(_span_of(lhs), _span_of(rhs)))
        return lhs

    def prod(self) -> STerm:
        lhs = self.app()
        if self.at("SYM", "*"):
            self.next()
            rhs = self.prod()
            return SBind("Sigma", "_", lhs, rhs, _join(_span_of(lhs), _span_of(rhs)))
        return lhs

    def starts_atom(self) -> bool:
        t = self.tok
        if t.kind in ("IDENT", "UNIV"):
            return t.kind != "IDENT" or t.value != "_"
        if t.kind == "KW" and t.value in LITERALS:
            return True
        return t.kind == "SYM" and t.value == "("

    def app(self) -> STerm:
        t = self.tok
        if t.kind == "KW" and (t.value in FORM_ARITY or t.value == "elim"):
            head = self.form()
        else:
            head = self.atom()
        while self.starts_atom():
            arg = self.atom()
            head = SApp(head, arg, _join(_span_of(head), _span_of(arg)))
        return head

    def form(self) -> STerm:
        t = self.next()
        kw = t.value
        if kw == "elim":
            which = self.tok
            if not (which.kind == "KW" and which.value in ELIM_ARITY):
                self.error("expected Unit, Bool, Empty or Sigma after elim")
            self.next()
            kw = f"elim {which.value}"
            arity = ELIM_ARITY[which.value]
        else:
            arity = FORM_ARITY[kw]
        args = []
        for _ in range(arity):
            if not self.starts_atom():
                self.error(f"{kw} expects {arity} argument(s)")
            args.append(self.atom())
        end = _span_of(args[-1]) if args else t.span
        return SForm(kw, args, _join(t.span, end))

    def atom(self) -> STerm:
        t = self.tok
        if t.kind == "IDENT" and t.value != "_":
            self.next()
            return SName(t.value, t.span)
        if t.kind == "UNIV":
            self.next()
            return SUniv(int(t.value), t.span)
        if t.kind == "KW" and t.value in LITERALS:
            self.next()
            return SLit(t.value, t.span)
        if t.kind == "SYM" and t.value == "(":
            self.next()
            inner = self.term()
            close = self.expect("SYM", ")")
            return _respan(inner, _join(t.span, close.span))
        if t.kind == "KW" and (t.value in FORM_ARITY or t.value == "elim"):
            self.error(f"{t.value} must be parenthesized in argument position")
        self.error("expected a term")

    # -- declarations ---------------------------------------------------------

    def decl(self) -> SDecl:
        t = self.next()
        kw = t.value
        if kw in ("wsusp", "trunc"):
            return self.schema(t)
        name = self.ident()
        groups = []
        while self.at("SYM", "("):
            groups.append(self.group())
        ty = None
        if kw == "def":
            if self.at("SYM", ":"):
                self.next()
                ty = self.term()
            self.expect("SYM", ":=")
            body = self.term()
        else:
            self.expect("SYM", ":")
            ty = self.term()
            body = None
        marker = None
        if kw == "postulate":
            if not self.at("STRING"):
                self.error("a postulate needs a marker string")
            marker = self.next().value
            if not marker.strip():
                raise ParseError("a postulate marker must be nonempty", self.toks[self.pos - 1].span)
        for names, gty in reversed(groups):
            for nm in reversed(names):
                if ty is not None:
                    ty = SBind("Pi", nm.value, gty, ty, _join(nm.span, _span_of(ty)))
                if body is not None:
                    body = SBind("fun", nm.value, None, body, _join(nm.span, _span_of(body)))
        if groups and ty is None:
            raise ParseError("a def with parameters needs a result type", name.span)
        last = self.toks[self.pos - 1]
        return SDecl(kw, name.value, _join(t.span, last.span), type=ty, body=body, marker=marker)

    def schema(self, t: Token) -> SDecl:
        name = self.ident()
        params = []
        while self.at("SYM", "("):
            self.next()
            p = self.ident()
            self.expect("SYM", ":=")
            val = self.term()
            self.expect("SYM", ")")
            params.append((p.value, val, p.span))
        level = None
        if self.at("SYM", ":"):
            self.next()
            level = int(self.expect("UNIV").value)
        levels = None
        if self.at("IDENT", "at"):
            self.next()
            self.expect("IDENT", "levels")
            levels = [int(self.expect("NAT").value)]
            while self.at("NAT"):
                levels.append(int(self.next().value))
            levels = tuple(levels)
        last = self.toks[self.pos - 1]
        return SDecl(t.value, name.value, _join(t.span, last.span), params=params,
                     level=level, levels=levels)

    def sync(self) -> None:
        # skip to the next declaration keyword
        self.next()
        while not (self.at("EOF") or (self.tok.kind == "KW" and self.tok.value in DECL_KEYWORDS)):
            self.next()


def _span_of(t: STerm) -> SourceSpan:
    return t.span


def _respan(t: STerm, span: SourceSpan) -> STerm:
    t.span = span
    return t


def parse_file(text: str, filename: str = "<input>") -> ParsedFile:
    """Parse a whole file, recovering at declaration boundaries."""
    toks, diags = lex(text, filename)
    p = Parser(toks)
    imports: list[SImport] = []
    decls: list[SDecl] = []
    while not p.at("EOF"):
        start = p.pos
        try:
            t = p.tok
            if t.kind == "KW" and t.value == "import":
                p.next()
                path = p.expect("PATH")
                if decls:
                    diags.append(Diagnostic("error", t.span, "imports must precede declarations"))
                imports.append(SImport(path.value, path.span))
            elif t.kind == "KW" and t.value in DECL_KEYWORDS:
                decls.append(p.decl())
            else:
                p.error("expected a declaration")
        except ParseError as err:
            diags.append(Diagnostic("error", err.span, f"syntax error: {err.message}"))
            p.pos = max(p.pos, start)
            p.sync()
        except RecursionError:
            diags.append(Diagnostic("error", p.tok.span, "syntax error: nesting too deep"))
            p.sync()
    return ParsedFile(filename, imports, decls, diags)


def parse_term_surface(text: str, filename: str = "<input>") -> STerm:
    toks, diags = lex(text, filename)
    if diags:
        d = diags[0]
        raise ParseError(d.message, d.span)
    p = Parser(toks)
    t = p.term()
    if not p.at("EOF"):
        p.error("unexpected trailing input")
    return t


# -- resolution -----------------------------------------------------------------


class ResolveError(Exception):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(message)
        self.message = message
        self.span = span


def resolve(t: STerm, scope: list[str], is_global: Callable[[str], bool],
            extra: Optional[dict[str, Term]] = None) -> Term:
    """Turn a surface term into a core term.

    ``scope`` lists bound names, innermost last.  ``extra`` maps placeholder
    names to closed core terms and is consulted before globals.
    """
    r = _Resolver(is_global, extra or {})
    return r.go(t, list(scope))


class _Resolver:
    def __init__(self, is_global, extra):
        self.is_global = is_global
        self.extra = extra

    def go(self, t: STerm, scope: list[str]) -> Term:
        match t:
            case SName(name=name):
                for k in range(len(scope) - 1, -1, -1):
                    if scope[k] == name:
                        return with_span(Var(len(scope) - 1 - k), t.span)
                if name in self.extra:
                    return self.extra[name]
                if self.is_global(name):
                    return with_span(Const(name), t.span)
                raise ResolveError(f"UnboundName: unknown name {name}", t.span)
            case SUniv(level=level):
                return with_span(Universe(level), t.span)
            case SLit(kind=kind):
                return with_span(LITERALS[kind](), t.span)
            case SBind(kind=kind, name=name, dom=dom, body=body):
                if kind == "fun":
                    scope.append(name)
                    try:
                        b = self.go(body, scope)
                    finally:
                        scope.pop()
                    return with_span(Lam(b, name), t.span)
                d = self.go(dom, scope)
                scope.append(name)
                try:
                    b = self.go(body, scope)
                finally:
                    scope.pop()
                cls = Pi if kind == "Pi" else Sigma
                return with_span(cls(d, b, name), t.span)
            case SApp(fn=fn, arg=arg):
                return with_span(App(self.go(fn, scope), self.go(arg, scope)), t.span)
            case SForm(kw=kw, args=args):
                a = [self.go(x, scope) for x in args]
                cls = {"refl": Refl, "Id": Id, "J": J, "pair": Pair, "fst": Fst, "snd": Snd,
                       "elim Unit": UnitElim, "elim Bool": BoolElim, "elim Empty": EmptyElim,
                       "elim Sigma": SigmaElim}[kw]
                return with_span(cls(*a), t.span)
        raise TypeError(t)


def resolve_decl(d: SDecl, is_global: Callable[[str], bool],
                 extra: Optional[dict[str, Term]] = None) -> Declaration:
    """Resolve a surface declaration to a core one (without checking)."""
    if d.kind == "def":
        body = resolve(d.body, [], is_global, extra)
        ty = resolve(d.type, [], is_global, extra) if d.type is not None else None
        return Declaration(d.name, Definition(ty, body), d.span)
    if d.kind == "axiom":
        return Declaration(d.name, Axiom(resolve(d.type, [], is_global, extra)), d.span)
    if d.kind == "postulate":
        return Declaration(d.name, Postulate(resolve(d.type, [], is_global, extra), d.marker), d.span)
    params = tuple((k, resolve(v, [], is_global, extra)) for k, v, _ in d.params)
    levels = d.levels if d.levels is not None else (0, 1)
    return Declaration(d.name, SchemaInstance(d.kind, params, d.level, levels), d.span)


def parse_term(text: str, scope: Optional[list[str]] = None,
               is_global: Callable[[str], bool] = lambda _: True) -> Term:
    """Parse and resolve a single term; unknown names become constants."""
    return resolve(parse_term_surface(text), list(scope or []), is_global)
