"""Weak-head normalization and untyped conversion checking.

Definitional computation is exactly: beta for functions, projections on
pairs, the unit/bool/pair eliminators on canonical scrutinees, J on refl,
and unfolding of ``def`` constants.  Axioms, postulates and schema constants
are inert, so higher-inductive computation laws stay propositional.
"""

from __future__ import annotations

from .syntax import (
    App, BoolElim, BoolFalse, BoolTrue, Const, Definition, Fst, GlobalEnv, J,
    Lam, Pair, Refl, SigmaElim, Snd, Term, UnitElim, UnitVal, Var,
    apps, children, shift, spine, subst,
)


def unfold(env: GlobalEnv, name: str) -> Term | None:
    decl = env.get(name)
    if decl is not None and isinstance(decl.kind, Definition):
        return decl.kind.body
    return None


def whnf(env: GlobalEnv, term: Term, delta: bool = True) -> Term:
    """Reduce ``term`` to weak-head normal form.

    With ``delta=False`` a defined constant in head position is left folded;
    scrutinees of eliminators are still reduced fully.
    """
    t = term
    while True:
        head, args = spine(t)
        cls = type(head)
        if cls is Lam:
            if not args:
                return t
            t = apps(subst(head.body, args[0]), *args[1:])
            continue
        if cls is Const:
            body = unfold(env, head.name) if delta else None
            if body is None:
                return t
            t = apps(body, *args)
            continue
        step = _step(env, head)
        if step is None:
            return t
        new_head, fired = step
        t = apps(new_head, *args)
        if not fired:
            return t


def _step(env: GlobalEnv, h: Term) -> tuple[Term, bool] | None:
    """Fire an eliminator at the head if its scrutinee is canonical.

    Returns ``(result, True)`` on reduction, ``(h', False)`` when only the
    scrutinee was normalized, and ``None`` when ``h`` is already stuck.
    """
    cls = type(h)
    if cls is Fst or cls is Snd:
        p = whnf(env, h.p)
        if type(p) is Pair:
            return (p.fst if cls is Fst else p.snd), True
        return None if p is h.p else (cls(p), False)
    if cls is J:
        p = whnf(env, h.path)
        if type(p) is Refl:
            return App(h.base, h.lhs), True
        return None if p is h.path else (J(h.motive, h.base, h.lhs, h.rhs, p), False)
    if cls is UnitElim:
        s = whnf(env, h.scrut)
        if type(s) is UnitVal:
            return h.base, True
        return None if s is h.scrut else (UnitElim(h.motive, h.base, s), False)
    if cls is BoolElim:
        s = whnf(env, h.scrut)
        if type(s) is BoolTrue:
            return h.on_true, True
        if type(s) is BoolFalse:
            return h.on_false, True
        return None if s is h.scrut else (BoolElim(h.motive, h.on_true, h.on_false, s), False)
    if cls is SigmaElim:
        s = whnf(env, h.scrut)
        if type(s) is Pair:
            return App(App(h.body, s.fst), s.snd), True
        return None if s is h.scrut else (SigmaElim(h.motive, h.body, s), False)
    return None


def conv(env: GlobalEnv, a: Term, b: Term) -> bool:
    """Definitional equality with function eta and without pair eta."""
    return _Conv(env).run(a, b)


class _Conv:
    def __init__(self, env: GlobalEnv):
        self.env = env
        # successful comparisons; values keep both terms alive so ids stay valid
        self.memo: dict[tuple[int, int], tuple[Term, Term]] = {}

    def run(self, a: Term, b: Term) -> bool:
        if a is b or a == b:
            return True
        key = (id(a), id(b))
        if key in self.memo:
            return True
        ok = self._lazy(a, b)
        if ok:
            self.memo[key] = (a, b)
        return ok

    def _lazy(self, a: Term, b: Term) -> bool:
        env = self.env
        a = whnf(env, a, delta=False)
        b = whnf(env, b, delta=False)
        while True:
            if a is b or a == b:
                return True
            ha, sa = spine(a)
            hb, sb = spine(b)
            ua = unfold(env, ha.name) if type(ha) is Const else None
            ub = unfold(env, hb.name) if type(hb) is Const else None
            if ua is None and ub is None:
                return self._struct(a, b)
            if (type(ha) is Const and type(hb) is Const and ha.name == hb.name
                    and len(sa) == len(sb)
                    and all(self.run(x, y) for x, y in zip(sa, sb))):
                return True
            # unfold the more recently defined side first
            ha_h = env.height(ha.name) if ua is not None else -1
            hb_h = env.height(hb.name) if ub is not None else -1
            if ha_h >= hb_h:
                a = whnf(env, apps(ua, *sa), delta=False)
            else:
                b = whnf(env, apps(ub, *sb), delta=False)

    def _struct(self, a: Term, b: Term) -> bool:
        ta, tb = type(a), type(b)
        if ta is Lam and tb is not Lam:
            return self.run(a.body, App(shift(b, 1), Var(0)))
        if tb is Lam and ta is not Lam:
            return self.run(App(shift(a, 1), Var(0)), b.body)
        if ta is not tb:
            return False
        ka = a._kids
        if not ka:
            return a == b
        return all(self.run(x, y) for (x, _), (y, _) in zip(children(a), children(b)))
