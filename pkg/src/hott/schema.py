"""Elaboration of ``wsusp`` and ``trunc`` declarations into trusted constants.

A W-suspension ``N`` over ``(B, C, A, f, g)`` yields the type former, the
point and cell constructors, and for every requested level ``k`` a recursor,
an inductor and their computation laws, stated as paths.  Constant names are
``N.pt``, ``N.cl`` and ``N.rec.k``, ``N.ind.k``, ``N.rec-beta-pt.k``,
``N.rec-beta-cl.k``, ``N.ind-beta-pt.k``, ``N.ind-beta-cl.k``.

Truncations yield ``N``, ``N.inj``, ``N.sq`` and per level ``N.rec.k``,
``N.ind.k``, ``N.rec-beta-inj.k``, ``N.ind-beta-inj.k``.

Types are produced by instantiating textual templates over placeholder names
and the path library (``concat``, ``ap``, ``apd``, ``transport``); the caller
re-checks every generated declaration before adding it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    App, Axiom, Const, Context, Declaration, GlobalEnv, Lam, Pi, SchemaInstance,
    Term, Universe, children, rebuild, subst,
)

WSUSP_PARAMS = ("B", "C", "A", "f", "g")
TRUNC_PARAMS = ("A",)
WSUSP_NEEDS = ("concat", "ap", "apd", "transport")
TRUNC_NEEDS = ("transport",)


@dataclass(frozen=True)
class WSuspSignature:
    name: str
    B: Term
    C: Term
    A: Term
    f: Term
    g: Term
    level: int
    target_levels: tuple[int, ...]


@dataclass(frozen=True)
class TruncSignature:
    name: str
    A: Term
    level: int
    target_levels: tuple[int, ...]


def _err(msg: str, span=None):
    from .typechecker import CheckError

    return CheckError("SchemaError", msg, span=span)


def generated_names(decl: Declaration) -> list[str]:
    inst = decl.kind
    n = decl.name
    if inst.schema == "wsusp":
        fixed = [n, f"{n}.pt", f"{n}.cl"]
        per = ["rec", "ind", "rec-beta-pt", "rec-beta-cl", "ind-beta-pt", "ind-beta-cl"]
    else:
        fixed = [n, f"{n}.inj", f"{n}.sq"]
        per = ["rec", "ind", "rec-beta-inj", "ind-beta-inj"]
    out = list(fixed)
    for k in inst.target_levels:
        out += [f"{n}.{p}.{k}" for p in per]
    return out


def signature(env: GlobalEnv, decl: Declaration):
    """Validate the parameters of a schema instance and fix its level."""
    from .typechecker import Checker

    inst: SchemaInstance = decl.kind
    params = dict(inst.parameters)
    expected = WSUSP_PARAMS if inst.schema == "wsusp" else TRUNC_PARAMS
    if len(params) != len(inst.parameters):
        raise _err("a schema parameter is given twice", decl.span)
    missing = [p for p in expected if p not in params]
    extra = [p for p in params if p not in expected]
    if missing or extra:
        raise _err(f"{inst.schema} expects parameters {', '.join(expected)}"
                   + (f"; missing {', '.join(missing)}" if missing else "")
                   + (f"; unexpected {', '.join(extra)}" if extra else ""), decl.span)
    if not inst.target_levels:
        raise _err("at least one target level is required", decl.span)
    needs = WSUSP_NEEDS if inst.schema == "wsusp" else TRUNC_NEEDS
    absent = [nm for nm in needs if nm not in env]
    if absent:
        raise _err(f"{inst.schema} needs the path library; missing {', '.join(absent)}",
                   decl.span)
    ch = Checker(env)
    ctx = Context()
    if inst.schema == "trunc":
        a = params["A"]
        la = ch.check_type(ctx, a)
        level = inst.level if inst.level is not None else la
        ch.check(ctx, a, Universe(level))
        return TruncSignature(decl.name, a, level, tuple(inst.target_levels))
    b, c = params["B"], params["C"]
    lb = ch.check_type(ctx, b)
    lc = ch.check_type(ctx, c)
    level = inst.level if inst.level is not None else max(lb, lc)
    ch.check(ctx, b, Universe(level))
    ch.check(ctx, c, Universe(level))
    ch.check(ctx, params["A"], Pi(b, Universe(level), "b"))
    ch.check(ctx, params["f"], Pi(b, c, "b"))
    ch.check(ctx, params["g"], Pi(b, c, "b"))
    return WSuspSignature(decl.name, b, c, params["A"], params["f"], params["g"],
                          level, tuple(inst.target_levels))


# -- templates -----------------------------------------------------------------
# Placeholders: PB PC PA Pf Pg (parameters), W (type former) and Wpt, Wcl,
# Wrec, Wind, Wrb, Wib, Winj, Wsq (generated constants).

_S = "Pi (b : PB) -> PA b -> Id X (p (Pf b)) (p (Pg b))"
_REC_TEL = f"(X : U{{k}}) (p : PC -> X) (s : {_S})"
_D = ("Pi (b : PB) (a : PA b) -> Id (E (Wpt (Pg b))) "
      "(transport W (fun x => E x) (Wpt (Pf b)) (Wpt (Pg b)) (Wcl b a) (e (Pf b))) (e (Pg b))")
_IND_TEL = f"(E : W -> U{{k}}) (e : Pi (c : PC) -> E (Wpt c)) (d : {_D})"


def _wsusp_templates() -> dict[str, str]:
    r = "(Wrec X p s)"
    rf = f"({r} (Wpt (Pf b)))"
    rg = f"({r} (Wpt (Pg b)))"
    i = "(Wind E e d)"
    jf = f"({i} (Wpt (Pf b)))"
    jg = f"({i} (Wpt (Pg b)))"
    egb = "(E (Wpt (Pg b)))"
    efb = "(E (Wpt (Pf b)))"
    tr = "(transport W (fun x => E x) (Wpt (Pf b)) (Wpt (Pg b)) (Wcl b a))"
    rec_cl = (
        f"Pi {_REC_TEL} (b : PB) (a : PA b) -> "
        f"Id (Id X {rf} (p (Pg b))) "
        f"(concat X {rf} {rg} (p (Pg b)) (ap W X {r} (Wpt (Pf b)) (Wpt (Pg b)) (Wcl b a)) "
        f"(Wrb X p s (Pg b))) "
        f"(concat X {rf} (p (Pf b)) (p (Pg b)) (Wrb X p s (Pf b)) (s b a))"
    )
    ind_cl = (
        f"Pi {_IND_TEL} (b : PB) (a : PA b) -> "
        f"Id (Id {egb} ({tr} {jf}) (e (Pg b))) "
        f"(concat {egb} ({tr} {jf}) {jg} (e (Pg b)) "
        f"(apd W (fun x => E x) {i} (Wpt (Pf b)) (Wpt (Pg b)) (Wcl b a)) (Wib E e d (Pg b))) "
        f"(concat {egb} ({tr} {jf}) ({tr} (e (Pf b))) (e (Pg b)) "
        f"(ap {efb} {egb} {tr} {jf} (e (Pf b)) (Wib E e d (Pf b))) (d b a))"
    )
    return {
        "": "U{i}",
        "pt": "PC -> W",
        "cl": "Pi (b : PB) -> PA b -> Id W (Wpt (Pf b)) (Wpt (Pg b))",
        "rec": f"Pi {_REC_TEL} -> W -> X",
        "ind": f"Pi {_IND_TEL} -> Pi (x : W) -> E x",
        "rec-beta-pt": f"Pi {_REC_TEL} (c : PC) -> Id X ({r} (Wpt c)) (p c)",
        "rec-beta-cl": rec_cl,
        "ind-beta-pt": f"Pi {_IND_TEL} (c : PC) -> Id (E (Wpt c)) ({i} (Wpt c)) (e c)",
        "ind-beta-cl": ind_cl,
    }


_TREC_TEL = "(X : U{k}) (c : PA -> X) (s : Pi (x y : X) -> Id X x y)"
_TIND_TEL = ("(E : W -> U{k}) (e : Pi (a : PA) -> E (Winj a)) "
             "(d : Pi (x y : W) (u : E x) (v : E y) -> "
             "Id (E y) (transport W (fun z => E z) x y (Wsq x y) u) v)")


def _trunc_templates() -> dict[str, str]:
    return {
        "": "U{i}",
        "inj": "PA -> W",
        "sq": "Pi (x y : W) -> Id W x y",
        "rec": f"Pi {_TREC_TEL} -> W -> X",
        "ind": f"Pi {_TIND_TEL} -> Pi (x : W) -> E x",
        "rec-beta-inj": f"Pi {_TREC_TEL} (a : PA) -> Id X (Wrec X c s (Winj a)) (c a)",
        "ind-beta-inj": f"Pi {_TIND_TEL} (a : PA) -> Id (E (Winj a)) (Wind E e d (Winj a)) (e a)",
    }


WSUSP_FIXED = ("", "pt", "cl")
WSUSP_PER_LEVEL = ("rec", "ind", "rec-beta-pt", "rec-beta-cl", "ind-beta-pt", "ind-beta-cl")
TRUNC_FIXED = ("", "inj", "sq")
TRUNC_PER_LEVEL = ("rec", "ind", "rec-beta-inj", "ind-beta-inj")


def _instantiate(env: GlobalEnv, template: str, extra: dict[str, Term]) -> Term:
    from .parser import parse_term_surface, resolve

    t = resolve(parse_term_surface(template, "<schema>"), [], lambda n: n in env, extra)
    return _beta(t)


def _beta(t: Term) -> Term:
    """Contract redexes such as ``(fun _ => Unit) b`` left by lambda parameters."""
    if not any(True for _ in children(t)):
        return t
    t = rebuild(t, [_beta(k) for k, _ in children(t)])
    if isinstance(t, App) and isinstance(t.fn, Lam):
        return _beta(subst(t.fn.body, t.arg))
    return t


def elaborate(env: GlobalEnv, decl: Declaration) -> list[Declaration]:
    """Produce the declarations of a schema instance, in dependency order."""
    sig = signature(env, decl)
    n = sig.name
    if isinstance(sig, WSuspSignature):
        templates, fixed, per = _wsusp_templates(), WSUSP_FIXED, WSUSP_PER_LEVEL
        extra = {"PB": sig.B, "PC": sig.C, "PA": sig.A, "Pf": sig.f, "Pg": sig.g,
                 "W": Const(n), "Wpt": Const(f"{n}.pt"), "Wcl": Const(f"{n}.cl")}
    else:
        templates, fixed, per = _trunc_templates(), TRUNC_FIXED, TRUNC_PER_LEVEL
        extra = {"PA": sig.A, "W": Const(n), "Winj": Const(f"{n}.inj"),
                 "Wsq": Const(f"{n}.sq")}

    out = []

    def emit(suffix: str, name: str, k: int | None):
        text = templates[suffix].format(i=sig.level, k=k)
        ty = _instantiate(env, text, extra)
        out.append(Declaration(name, Axiom(ty), decl.span, origin=n))

    for suffix in fixed:
        emit(suffix, f"{n}.{suffix}" if suffix else n, None)
    for k in sig.target_levels:
        extra = dict(extra, Wrec=Const(f"{n}.rec.{k}"), Wind=Const(f"{n}.ind.{k}"),
                     Wrb=Const(f"{n}.rec-beta-pt.{k}"), Wib=Const(f"{n}.ind-beta-pt.{k}"))
        for suffix in per:
            emit(suffix, f"{n}.{suffix}.{k}", k)
    return out
