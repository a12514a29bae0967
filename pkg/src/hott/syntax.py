"""Core term language, declarations, contexts and global environments.

Terms are nameless: a ``Var`` carries a de Bruijn index counting enclosing
binders outward.  Binder name hints survive only for printing and are ignored
by equality, so structural equality of terms is alpha-equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional


@dataclass(frozen=True, slots=True)
class SourceSpan:
    file: str
    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}"


class Term:
    """Base class of core terms.  Every subclass is a frozen dataclass."""

    __slots__ = ()

    # populated per subclass: tuple of (field name, binders introduced) for
    # each term-valued field
    _kids: tuple = ()

    def __post_init__(self):
        fv = self.index + 1 if type(self) is Var else 0
        for name, binds in self._kids:
            k = getattr(self, name).fv - binds
            if k > fv:
                fv = k
        object.__setattr__(self, "fv", fv)

    def __str__(self) -> str:
        from .printer import print_term

        return print_term(self)


def _term(cls):
    cls = dataclass(frozen=True, slots=True)(cls)
    return cls


def _hint():
    return field(default="x", compare=False, repr=False)


def _meta():
    return field(default=None, init=False, compare=False, repr=False)


def _fv():
    return field(default=0, init=False, compare=False, repr=False)


@_term
class Var(Term):
    index: int
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class Universe(Term):
    level: int
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class Pi(Term):
    dom: Term
    cod: Term
    name: str = _hint()
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class Lam(Term):
    body: Term
    name: str = _hint()
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class App(Term):
    fn: Term
    arg: Term
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class Sigma(Term):
    first: Term
    second: Term
    name: str = _hint()
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class Pair(Term):
    fst: Term
    snd: Term
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class Fst(Term):
    p: Term
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class Snd(Term):
    p: Term
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class Id(Term):
    type: Term
    lhs: Term
    rhs: Term
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class Refl(Term):
    type: Term
    point: Term
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class J(Term):
    motive: Term
    base: Term
    lhs: Term
    rhs: Term
    path: Term
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class Const(Term):
    name: str
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class UnitTy(Term):
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class UnitVal(Term):
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class BoolTy(Term):
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class BoolTrue(Term):
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class BoolFalse(Term):
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class EmptyTy(Term):
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class UnitElim(Term):
    motive: Term
    base: Term
    scrut: Term
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class BoolElim(Term):
    motive: Term
    on_true: Term
    on_false: Term
    scrut: Term
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class EmptyElim(Term):
    motive: Term
    scrut: Term
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


@_term
class SigmaElim(Term):
    """Dependent pair eliminator; ``body`` takes the two components."""

    motive: Term
    body: Term
    scrut: Term
    fv: int = _fv()
    span: Optional[SourceSpan] = _meta()


_BINDERS = {Pi: {"cod": 1}, Lam: {"body": 1}, Sigma: {"second": 1}}
_NON_TERM = {"name", "fv", "span", "index", "level"}

for _cls in (Var, Universe, Pi, Lam, App, Sigma, Pair, Fst, Snd, Id, Refl, J,
             Const, UnitTy, UnitVal, BoolTy, BoolTrue, BoolFalse, EmptyTy,
             UnitElim, BoolElim, EmptyElim, SigmaElim):
    _binds = _BINDERS.get(_cls, {})
    _cls._kids = tuple(
        (f, _binds.get(f, 0))
        for f in _cls.__dataclass_fields__
        if f not in _NON_TERM and _cls.__dataclass_fields__[f].init
    )


def children(t: Term) -> Iterator[tuple[Term, int]]:
    for name, binds in t._kids:
        yield getattr(t, name), binds


def rebuild(t: Term, kids: list[Term]) -> Term:
    """Copy ``t`` with its term-valued fields replaced by ``kids`` in order."""
    cls = type(t)
    if cls is Pi:
        return Pi(kids[0], kids[1], t.name)
    if cls is Lam:
        return Lam(kids[0], t.name)
    if cls is Sigma:
        return Sigma(kids[0], kids[1], t.name)
    return cls(*kids)


def with_span(t: Term, span: Optional[SourceSpan]) -> Term:
    if span is not None:
        object.__setattr__(t, "span", span)
    return t


class ShiftUnderflow(ValueError):
    pass


def shift(term: Term, amount: int, cutoff: int = 0) -> Term:
    """Add ``amount`` to every free variable index >= ``cutoff``."""
    if amount == 0 or term.fv <= cutoff:
        return term
    if type(term) is Var:
        i = term.index + amount
        if i < 0:
            raise ShiftUnderflow(f"negative index after shifting Var {term.index} by {amount}")
        return Var(i)
    return rebuild(term, [shift(k, amount, cutoff + b) for k, b in children(term)])


def subst(term: Term, replacement: Term, index: int = 0) -> Term:
    """Replace ``Var index`` by ``replacement`` and lower the variables above it.

    ``replacement`` is given in the context *outside* the binder that
    ``index`` refers to, i.e. this is the instantiation used by beta.
    """
    return _subst(term, replacement, index)


def _subst(t: Term, r: Term, k: int) -> Term:
    if t.fv <= k:
        return t
    if type(t) is Var:
        i = t.index
        if i == k:
            return shift(r, k, 0)
        return Var(i - 1) if i > k else t
    return rebuild(t, [_subst(c, r, k + b) for c, b in children(t)])


def occurs(term: Term, index: int) -> bool:
    if term.fv <= index:
        return False
    if type(term) is Var:
        return term.index == index
    return any(occurs(c, index + b) for c, b in children(term))


def struct_eq(a: Term, b: Term) -> bool:
    """Alpha-equivalence: identical nameless trees."""
    return a == b


def consts(term: Term, acc: Optional[set] = None) -> set:
    if acc is None:
        acc = set()
    stack = [term]
    while stack:
        t = stack.pop()
        if type(t) is Const:
            acc.add(t.name)
        else:
            stack.extend(c for c, _ in children(t))
    return acc


def subterms(term: Term, depth: int = 0) -> Iterator[tuple[Term, int]]:
    """Yield every subterm with the number of binders above it."""
    yield term, depth
    for c, b in children(term):
        yield from subterms(c, depth + b)


def apps(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


def spine(t: Term) -> tuple[Term, list[Term]]:
    args = []
    while type(t) is App:
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


# -- declarations and environments -----------------------------------------


@dataclass(frozen=True)
class Definition:
    type: Term
    body: Term


@dataclass(frozen=True)
class Axiom:
    type: Term


@dataclass(frozen=True)
class Postulate:
    type: Term
    marker: str

    def __post_init__(self):
        if not self.marker.strip():
            raise ValueError("a postulate needs a nonempty marker")


@dataclass(frozen=True)
class SchemaInstance:
    schema: str  # "wsusp" or "trunc"
    parameters: tuple[tuple[str, Term], ...]
    level: Optional[int] = None
    target_levels: tuple[int, ...] = (0, 1)


@dataclass(frozen=True)
class Declaration:
    name: str
    kind: object  # Definition | Axiom | Postulate | SchemaInstance
    span: Optional[SourceSpan] = None
    # schema instance name for constants produced by the HIT elaborator
    origin: Optional[str] = None

    @property
    def type(self) -> Optional[Term]:
        return getattr(self.kind, "type", None)

    @property
    def body(self) -> Optional[Term]:
        return getattr(self.kind, "body", None)


@dataclass(frozen=True)
class Context:
    """Local telescope; ``types[k]`` is well formed in the first ``k`` entries."""

    types: tuple[Term, ...] = ()
    names: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.types)

    def push(self, ty: Term, name: str = "x") -> "Context":
        return Context(self.types + (ty,), self.names + (name,))

    def lookup(self, index: int) -> Term:
        if index >= len(self.types):
            raise IndexError(index)
        return shift(self.types[-1 - index], index + 1, 0)


@dataclass
class GlobalEnv:
    decls: dict[str, Declaration] = field(default_factory=dict)
    imports: dict[str, tuple[str, ...]] = field(default_factory=dict)
    # schema instances, in declaration order, kept for printing
    schemas: list[Declaration] = field(default_factory=list)
    _order: dict[str, int] = field(default_factory=dict, repr=False)

    def __contains__(self, name: str) -> bool:
        return name in self.decls

    def __len__(self) -> int:
        return len(self.decls)

    def get(self, name: str) -> Optional[Declaration]:
        return self.decls.get(name)

    def add(self, decl: Declaration) -> None:
        if decl.name in self.decls:
            raise KeyError(decl.name)
        self._order[decl.name] = len(self._order)
        self.decls[decl.name] = decl

    def height(self, name: str) -> int:
        return self._order.get(name, -1)

    def copy(self) -> "GlobalEnv":
        env = GlobalEnv(dict(self.decls), dict(self.imports), list(self.schemas))
        env._order = dict(self._order)
        return env
