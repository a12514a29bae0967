import random

import pytest

from hott.driver import check_file, check_paths, BUNDLED_STDLIB
from hott.evaluator import conv
from hott.parser import parse_file
from hott.syntax import (
    App, Axiom, Const, Context, Declaration, Definition, GlobalEnv, Id, Lam,
    Pair, Pi, Refl, Sigma, Universe, Var, struct_eq,
)
from hott.typechecker import CheckError, Checker, check, check_declaration, cumul, infer

from conftest import telescope, tm

EMPTY = Context()


def run_source(env, text):
    """Check ``text`` against a copy of ``env``; return the file's diagnostics."""
    pf = parse_file(text, "<test>")
    assert not pf.diagnostics, pf.diagnostics
    return check_file(pf, env.copy()).diagnostics


def error_kind(env, text):
    diags = run_source(env, text)
    assert len(diags) == 1, [d.format() for d in diags]
    return diags[0].message.split(":", 1)[0]


# -- inference and checking -----------------------------------------------------

def test_universe_in_next_universe():
    env = GlobalEnv()
    assert struct_eq(infer(env, EMPTY, Universe(0)), Universe(1))
    assert struct_eq(infer(env, EMPTY, Universe(3)), Universe(4))


def test_refl_inhabits_the_diagonal():
    env = GlobalEnv()
    ctx = EMPTY.push(Universe(0), "A").push(Var(0), "m")
    assert struct_eq(infer(env, ctx, Refl(Var(1), Var(0))), Id(Var(1), Var(0), Var(0)))


def test_concat_refl_refl_infers_and_converts(env):
    ctx, names = telescope(env, ("A", "U0"), ("x", "A"))
    t = tm(env, "concat A x x x (refl A x) (refl A x)", names)
    ty = infer(env, ctx, t)
    assert conv(env, ty, tm(env, "Id A x x", names))
    assert conv(env, t, tm(env, "refl A x", names))


def test_check_lambda_against_pi():
    env = GlobalEnv()
    ctx = EMPTY.push(Universe(0), "A")
    check(env, ctx, Lam(Var(0)), Pi(Var(0), Var(1)))


def test_check_pair_against_sigma():
    env = GlobalEnv()
    # A : U0, P : A -> U0, a : A, b : P a  |-  (a, b) : Sigma (x : A), P x
    ctx = (EMPTY.push(Universe(0), "A").push(Pi(Var(0), Universe(0)), "P")
           .push(Var(1), "a").push(App(Var(1), Var(0)), "b"))
    check(env, ctx, Pair(Var(1), Var(0)), Sigma(Var(3), App(Var(3), Var(0))))


def test_refl_against_off_diagonal_is_a_mismatch():
    env = GlobalEnv()
    ctx = EMPTY.push(Universe(0), "A").push(Var(0), "m").push(Var(1), "n")
    with pytest.raises(CheckError) as exc:
        check(env, ctx, Refl(Var(2), Var(1)), Id(Var(2), Var(1), Var(0)))
    err = exc.value
    assert err.kind == "Mismatch"
    assert struct_eq(err.expected, Id(Var(2), Var(1), Var(0)))
    assert struct_eq(err.got, Id(Var(2), Var(1), Var(1)))


def test_mismatch_sides_are_weak_head_normal(env):
    with pytest.raises(CheckError) as exc:
        check(env, EMPTY, tm(env, "true"), tm(env, "id U0 Unit"))
    assert struct_eq(exc.value.expected, tm(env, "Unit"))


# -- cumulativity ---------------------------------------------------------------

def test_cumul_at_universe_heads():
    env = GlobalEnv()
    assert cumul(env, EMPTY, Universe(0), Universe(1))
    assert cumul(env, EMPTY, Universe(1), Universe(1))
    assert not cumul(env, EMPTY, Universe(1), Universe(0))


def test_cumul_is_head_only():
    env = GlobalEnv()
    a = Const("A")
    assert not cumul(env, EMPTY, Pi(a, Universe(0)), Pi(a, Universe(1)))
    assert not cumul(env, EMPTY, Sigma(a, Universe(0)), Sigma(a, Universe(1)))


def test_lifting_a_family_must_be_explicit(env):
    # P : A -> U0 is not a U1-valued family, but its eta-expansion is
    bad = ("def f (A : U0) (P : A -> U0) : A -> U1 := P")
    assert error_kind(env, bad) == "Mismatch"
    assert run_source(env, "def f (A : U0) (P : A -> U0) : A -> U1 := fun x => P x") == []


def test_subsumption_soundness_on_stdlib_types(env):
    rng = random.Random(11)
    ch = Checker(env)
    names = sorted(n for n, d in env.decls.items() if d.type is not None)
    for n in rng.sample(names, 150):
        ty = env.decls[n].type
        level = ch.check_type(EMPTY, ty)
        for sup in (Universe(level), Universe(level + 1), Universe(4)):
            assert ch.cumul(EMPTY, Universe(level), sup)
            ch.check(EMPTY, ty, sup)
        ch.check(EMPTY, Const(n), ty)


# -- error kinds ----------------------------------------------------------------

@pytest.mark.parametrize("src,kind", [
    ("def bad : U0 := U0", "UniverseViolation"),
    ("def bad : U1 := U1", "UniverseViolation"),
    ("def bad : U0 := Pi (A : U0) -> A", "UniverseViolation"),
    ("def bad : Bool := tt", "Mismatch"),
    ("def bad : Bool := true false", "NotAFunction"),
    ("def bad : Bool := fst true", "NotAPair"),
    ("def bad (b : Bool) : Bool := J (fun x y p => Bool) (fun x => x) b b b", "NotAnIdType"),
    ("def bad := fun x => x", "CannotInfer"),
    ("def bad : Bool := no-such-name", "UnboundName"),
    ("def id : U0 := Unit", "DuplicateName"),
    ("wsusp W (B := Unit) (C := Unit) (A := true) (f := fun _ => tt) (g := fun _ => tt)",
     "Mismatch"),
    ("wsusp W (B := Unit) (C := Unit) (f := fun _ => tt) (g := fun _ => tt)", "SchemaError"),
])
def test_error_kinds(env, src, kind):
    assert error_kind(env, src) == kind


def test_every_error_carries_a_span(env):
    for src in ("def bad : U0 := U0", "def bad : Bool := fst true", "def bad := fun x => x"):
        (d,) = run_source(env, src)
        assert d.span is not None and d.span.line == 1 and d.span.col >= 1


def test_error_points_at_the_offending_subterm(env):
    (d,) = run_source(env, "def bad (A : U0) (x y : A) : Id A x y :=\n  refl A x")
    assert (d.span.line, d.span.col) == (2, 3)


def test_checking_continues_after_an_error(env):
    src = "def a : Bool := tt\ndef b : Bool := true\ndef c : Unit := true\n"
    diags = run_source(env, src)
    assert [d.span.line for d in diags] == [1, 3]


# -- declarations ---------------------------------------------------------------

def test_check_declaration_extends_env():
    env = GlobalEnv()
    ty = Pi(Universe(0), Pi(Var(0), Var(1)))
    check_declaration(env, Declaration("myid", Definition(ty, Lam(Lam(Var(0))))))
    assert "myid" in env
    with pytest.raises(CheckError) as exc:
        check_declaration(env, Declaration("myid", Axiom(Universe(0))))
    assert exc.value.kind == "DuplicateName"


def test_axiom_checks_only_its_type():
    env = GlobalEnv()
    check_declaration(env, Declaration("ax", Axiom(Pi(Universe(0), Var(0)))))
    with pytest.raises(CheckError):
        check_declaration(env, Declaration("bad", Axiom(Const("ax"))))


def test_univalence_axiom_is_accepted(env):
    assert isinstance(env.decls["ua"].kind, Axiom)
    Checker(env).check_type(EMPTY, env.decls["ua"].type)


def test_untyped_definition_records_inferred_type(env):
    assert run_source(env, "def t := refl Bool true") == []
    e = env.copy()
    check_file(parse_file("def t := refl Bool true"), e)
    assert struct_eq(e.decls["t"].type, tm(env, "Id Bool true true"))


# -- whole-library properties ---------------------------------------------------

def test_inferred_types_are_well_typed(env):
    """Type-correctness smoke test over every stdlib definition."""
    ch = Checker(env)
    inferred = 0
    for d in env.decls.values():
        if d.type is not None:
            ch.check_type(EMPTY, d.type)
        body = d.body
        if body is None:
            continue
        try:
            ty = ch.infer(EMPTY, body)
        except CheckError as err:
            assert err.kind == "CannotInfer", d.name
            continue
        ch.check_type(EMPTY, ty)
        assert ch.cumul(EMPTY, ty, d.type) or conv(env, ty, d.type), d.name
        inferred += 1
    assert inferred > 0


def test_checking_is_deterministic():
    a = check_paths([str(BUNDLED_STDLIB)], BUNDLED_STDLIB)
    b = check_paths([str(BUNDLED_STDLIB)], BUNDLED_STDLIB)
    assert list(a.env.decls) == list(b.env.decls)
    assert all(a.env.decls[n] == b.env.decls[n] for n in a.env.decls)
    assert [d.format() for d in a.diagnostics] == [d.format() for d in b.diagnostics]
