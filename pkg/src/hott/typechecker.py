"""Bidirectional type checking with universe cumulativity at universe heads."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .evaluator import conv, whnf
from .syntax import (
    App, Axiom, BoolElim, BoolFalse, BoolTrue, BoolTy, Const, Context,
    Declaration, Definition, EmptyElim, EmptyTy, Fst, GlobalEnv, Id, J, Lam,
    Pair, Pi, Postulate, Refl, SchemaInstance, Sigma, SigmaElim, Snd,
    SourceSpan, Term, UnitElim, UnitTy, UnitVal, Universe, Var, apps, shift,
    subst,
)

KINDS = (
    "Mismatch", "UnboundName", "UniverseViolation", "NotAFunction",
    "NotAPair", "NotAnIdType", "SchemaError", "CannotInfer", "DuplicateName",
)


@dataclass
class CheckError(Exception):
    kind: str
    message: str
    span: Optional[SourceSpan] = None
    expected: Optional[Term] = None
    got: Optional[Term] = None
    names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        assert self.kind in KINDS, self.kind
        Exception.__init__(self, self.message)

    def __str__(self) -> str:
        return self.render()

    def render(self) -> str:
        msg = f"{self.kind}: {self.message}"
        if self.expected is not None or self.got is not None:
            from .printer import print_term

            if self.expected is not None:
                msg += f"\n  expected: {print_term(self.expected, self.names)}"
            if self.got is not None:
                msg += f"\n  got: {print_term(self.got, self.names)}"
        return msg


class Checker:
    """Typing judgements over a fixed global environment."""

    def __init__(self, env: GlobalEnv):
        self.env = env

    # -- helpers -----------------------------------------------------------

    def whnf(self, t: Term) -> Term:
        return whnf(self.env, t)

    def conv(self, a: Term, b: Term) -> bool:
        return conv(self.env, a, b)

    def cumul(self, ctx: Context, sub: Term, sup: Term) -> bool:
        if self.conv(sub, sup):
            return True
        a, b = self.whnf(sub), self.whnf(sup)
        return type(a) is Universe and type(b) is Universe and a.level <= b.level

    def _mismatch(self, ctx: Context, expected: Term, got: Term, what: str) -> CheckError:
        e, g = self.whnf(expected), self.whnf(got)
        kind = "UniverseViolation" if type(e) is Universe and type(g) is Universe else "Mismatch"
        return CheckError(kind, what, expected=e, got=g, names=ctx.names)

    # -- judgements --------------------------------------------------------

    def infer(self, ctx: Context, t: Term) -> Term:
        try:
            return self._infer(ctx, t)
        except CheckError as err:
            if err.span is None:
                err.span = t.span
            raise

    def check(self, ctx: Context, t: Term, ty: Term) -> None:
        try:
            self._check(ctx, t, ty)
        except CheckError as err:
            if err.span is None:
                err.span = t.span
            raise

    def check_type(self, ctx: Context, t: Term) -> int:
        """Check that ``t`` is a type and return its universe level."""
        got = self.infer(ctx, t)
        w = self.whnf(got)
        if type(w) is not Universe:
            raise CheckError("Mismatch", "expected a type", span=t.span,
                             expected=Universe(0), got=w, names=ctx.names)
        return w.level

    def check_family(self, ctx: Context, fam: Term, domains: list[Term]) -> None:
        """Check ``fam`` is a type family over the telescope ``domains``.

        ``domains[i]`` lives in ``ctx`` extended by the first ``i`` entries.
        """
        try:
            self._check_family(ctx, fam, domains)
        except CheckError as err:
            if err.span is None:
                err.span = fam.span
            raise

    def _check_family(self, ctx: Context, fam: Term, domains: list[Term]) -> None:
        n = len(domains)
        i = 0
        while i < n and type(fam) is Lam:
            ctx = ctx.push(domains[i], fam.name)
            fam = fam.body
            i += 1
        if i == n:
            if type(fam) is Lam:
                raise CheckError("Mismatch", f"motive takes more than {n} argument(s)",
                                 names=ctx.names)
            self.check_type(ctx, fam)
            return
        ty = self.infer(ctx, fam)
        for j in range(i, n):
            w = self.whnf(ty)
            if type(w) is not Pi:
                raise CheckError(
                    "Mismatch", f"motive takes {j} argument(s) but {n} are required",
                    got=w, names=ctx.names)
            if not self.conv(w.dom, domains[j]):
                raise CheckError("Mismatch", f"motive argument {j + 1} has the wrong type",
                                 expected=domains[j], got=w.dom, names=ctx.names)
            ctx = ctx.push(domains[j], w.name)
            ty = w.cod
        w = self.whnf(ty)
        if type(w) is not Universe:
            raise CheckError("Mismatch", f"motive takes more than {n} argument(s)",
                             expected=Universe(0), got=w, names=ctx.names)

    def _infer(self, ctx: Context, t: Term) -> Term:
        match t:
            case Var(index=i):
                if i >= len(ctx):
                    raise CheckError("UnboundName", f"variable index {i} is out of scope")
                return ctx.lookup(i)
            case Universe(level=l):
                return Universe(l + 1)
            case Const(name=name):
                decl = self.env.get(name)
                if decl is None or decl.type is None:
                    raise CheckError("UnboundName", f"unknown constant {name}")
                return decl.type
            case Pi(dom=a, cod=b, name=x) | Sigma(first=a, second=b, name=x):
                la = self.check_type(ctx, a)
                lb = self.check_type(ctx.push(a, x), b)
                return Universe(max(la, lb))
            case App(fn=f, arg=a):
                tf = self.whnf(self.infer(ctx, f))
                if type(tf) is not Pi:
                    raise CheckError("NotAFunction", "applying a term that is not a function",
                                     got=tf, names=ctx.names)
                self.check(ctx, a, tf.dom)
                return subst(tf.cod, a)
            case Fst(p=p) | Snd(p=p):
                tp = self.whnf(self.infer(ctx, p))
                if type(tp) is not Sigma:
                    raise CheckError("NotAPair", "projection from a term that is not a pair",
                                     got=tp, names=ctx.names)
                if type(t) is Fst:
                    return tp.first
                return subst(tp.second, Fst(p))
            case Id(type=a, lhs=m, rhs=n):
                level = self.check_type(ctx, a)
                self.check(ctx, m, a)
                self.check(ctx, n, a)
                return Universe(level)
            case Refl(type=a, point=m):
                self.check_type(ctx, a)
                self.check(ctx, m, a)
                return Id(a, m, m)
            case J(motive=e, base=d, lhs=m, rhs=n, path=p):
                return self._infer_j(ctx, e, d, m, n, p)
            case UnitTy() | BoolTy() | EmptyTy():
                return Universe(0)
            case UnitVal():
                return UnitTy()
            case BoolTrue() | BoolFalse():
                return BoolTy()
            case UnitElim(motive=e, base=b, scrut=s):
                self.check_family(ctx, e, [UnitTy()])
                self.check(ctx, b, App(e, UnitVal()))
                self.check(ctx, s, UnitTy())
                return App(e, s)
            case BoolElim(motive=e, on_true=bt, on_false=bf, scrut=s):
                self.check_family(ctx, e, [BoolTy()])
                self.check(ctx, bt, App(e, BoolTrue()))
                self.check(ctx, bf, App(e, BoolFalse()))
                self.check(ctx, s, BoolTy())
                return App(e, s)
            case EmptyElim(motive=e, scrut=s):
                self.check_family(ctx, e, [EmptyTy()])
                self.check(ctx, s, EmptyTy())
                return App(e, s)
            case SigmaElim(motive=e, body=h, scrut=w):
                tw = self.whnf(self.infer(ctx, w))
                if type(tw) is not Sigma:
                    raise CheckError("NotAPair", "pair induction on a term that is not a pair",
                                     got=tw, names=ctx.names)
                self.check_family(ctx, e, [tw])
                body_ty = Pi(tw.first, Pi(tw.second, App(shift(e, 2), Pair(Var(1), Var(0))),
                                          "y"), "x")
                self.check(ctx, h, body_ty)
                return App(e, w)
            case Lam() | Pair():
                what = "function" if type(t) is Lam else "pair"
                raise CheckError("CannotInfer",
                                 f"cannot infer the type of a {what}; add an annotation")
        raise CheckError("CannotInfer", f"unsupported term {type(t).__name__}")

    def _infer_j(self, ctx: Context, e: Term, d: Term, m: Term, n: Term, p: Term) -> Term:
        tp = self.whnf(self.infer(ctx, p))
        if type(tp) is not Id:
            raise CheckError("NotAnIdType", "J expects a path", span=p.span,
                             got=tp, names=ctx.names)
        a = tp.type
        self.check(ctx, m, a)
        self.check(ctx, n, a)
        if not self.conv(m, tp.lhs):
            raise CheckError("Mismatch", "left endpoint of J does not match the path",
                             span=m.span, expected=self.whnf(tp.lhs), got=self.whnf(m),
                             names=ctx.names)
        if not self.conv(n, tp.rhs):
            raise CheckError("Mismatch", "right endpoint of J does not match the path",
                             span=n.span, expected=self.whnf(tp.rhs), got=self.whnf(n),
                             names=ctx.names)
        self.check_family(ctx, e, [a, shift(a, 1), Id(shift(a, 2), Var(1), Var(0))])
        base_ty = Pi(a, apps(shift(e, 1), Var(0), Var(0), Refl(shift(a, 1), Var(0))), "x")
        self.check(ctx, d, base_ty)
        return apps(e, m, n, p)

    def _check(self, ctx: Context, t: Term, ty: Term) -> None:
        cls = type(t)
        if cls is Lam:
            w = self.whnf(ty)
            if type(w) is not Pi:
                raise CheckError("Mismatch", "a function was given where a non-function is expected",
                                 got=w, names=ctx.names)
            self.check(ctx.push(w.dom, t.name), t.body, w.cod)
            return
        if cls is Pair:
            w = self.whnf(ty)
            if type(w) is not Sigma:
                raise CheckError("Mismatch", "a pair was given where a non-pair is expected",
                                 got=w, names=ctx.names)
            self.check(ctx, t.fst, w.first)
            self.check(ctx, t.snd, subst(w.second, t.fst))
            return
        got = self.infer(ctx, t)
        if not self.cumul(ctx, got, ty):
            raise self._mismatch(ctx, ty, got, "type mismatch")

    # -- declarations ------------------------------------------------------

    def check_declaration(self, decl: Declaration) -> GlobalEnv:
        env = self.env
        if decl.name in env:
            raise CheckError("DuplicateName", f"{decl.name} is already declared", span=decl.span)
        kind = decl.kind
        ctx = Context()
        try:
            if isinstance(kind, Definition):
                if kind.type is None:
                    ty = self.infer(ctx, kind.body)
                    self.check_type(ctx, ty)
                    decl = Declaration(decl.name, Definition(ty, kind.body), decl.span, decl.origin)
                else:
                    self.check_type(ctx, kind.type)
                    self.check(ctx, kind.body, kind.type)
            elif isinstance(kind, (Axiom, Postulate)):
                self.check_type(ctx, kind.type)
            elif isinstance(kind, SchemaInstance):
                from .schema import elaborate

                for d in elaborate(env, decl):
                    self.check_declaration(d)
                env.schemas.append(decl)
                return env
            else:
                raise TypeError(kind)
        except CheckError as err:
            if err.span is None:
                err.span = decl.span
            raise
        env.add(decl)
        return env


def check_declaration(env: GlobalEnv, decl: Declaration) -> GlobalEnv:
    return Checker(env).check_declaration(decl)


def infer(env: GlobalEnv, ctx: Context, t: Term) -> Term:
    return Checker(env).infer(ctx, t)


def check(env: GlobalEnv, ctx: Context, t: Term, ty: Term) -> None:
    Checker(env).check(ctx, t, ty)


def cumul(env: GlobalEnv, ctx: Context, sub: Term, sup: Term) -> bool:
    return Checker(env).cumul(ctx, sub, sup)
