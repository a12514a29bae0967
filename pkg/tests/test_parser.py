import random

import pytest
from hypothesis import given, settings, HealthCheck
from hypothesis import strategies as st

from hott.driver import BUNDLED_STDLIB
from hott.parser import ParseError, lex, parse_file, parse_term, parse_term_surface
from hott.printer import print_term
from hott.syntax import Const, Lam, Pi, Universe, Var, struct_eq, subterms

from termgen import terms

ROUNDTRIP_SETTINGS = settings(max_examples=1000, deadline=None,
                              suppress_health_check=[HealthCheck.too_slow])


def roundtrip(t):
    return parse_term(print_term(t))


@ROUNDTRIP_SETTINGS
@given(terms(depth=8))
def test_print_parse_roundtrip_random(t):
    back = roundtrip(t)
    assert struct_eq(back, t), (print_term(t), print_term(back))


def test_roundtrip_stdlib_bodies(env):
    for d in env.decls.values():
        for t in (d.type, d.body):
            if t is not None:
                assert struct_eq(roundtrip(t), t), d.name


def test_roundtrip_stdlib_subterms(env):
    rng = random.Random(7)
    pool = [sub for d in env.decls.values() if d.body is not None
            for sub, _ in subterms(d.body) if sub.fv == 0]
    for sub in rng.sample(pool, 500):
        assert struct_eq(roundtrip(sub), sub)


def test_two_parses_of_a_file_agree():
    text = (BUNDLED_STDLIB / "paths.hott").read_text()
    a, b = parse_file(text, "paths.hott"), parse_file(text, "paths.hott")
    assert [d.name for d in a.decls] == [d.name for d in b.decls]
    for x, y in zip(a.decls, b.decls):
        assert x == y


def test_arrows_and_binders():
    t = parse_term("Pi (A : U0) (x : A) -> A -> A")
    assert isinstance(t, Pi) and t.dom == Universe(0)
    assert struct_eq(t.cod.cod.cod, Var(2))


def test_lambda_binds_innermost_last():
    t = parse_term("fun x y => x")
    assert isinstance(t, Lam) and struct_eq(t.body.body, Var(1))


def test_unknown_names_become_constants():
    assert struct_eq(parse_term("foo"), Const("foo"))


def test_dotted_schema_names_lex_as_one_identifier():
    toks, diags = lex("S1.ind-beta-cl.0")
    assert not diags
    assert [t.value for t in toks if t.kind == "IDENT"] == ["S1.ind-beta-cl.0"]


@pytest.mark.parametrize("src", ["fun => x", "Pi (x : ) -> x", "(a b", "Id A x", "fun x =>", "elim Nat P x"])
def test_malformed_terms_raise_positioned_errors(src):
    with pytest.raises(ParseError) as ei:
        parse_term_surface(src)
    assert ei.value.span is not None and ei.value.span.line == 1


def test_parse_file_reports_errors_and_recovers():
    pf = parse_file("def a : U1 := U0\ndef b : := U0\ndef c : U1 := U0\n", "f.hott")
    assert [d.name for d in pf.decls] == ["a", "c"]
    assert pf.diagnostics and pf.diagnostics[0].span.line == 2


def test_postulate_requires_marker():
    pf = parse_file("postulate p : U0\n", "f.hott")
    assert pf.diagnostics and "marker" in pf.diagnostics[0].message


@settings(max_examples=10_000, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.binary(max_size=200))
def test_fuzz_bytes_never_crash(data):
    text = data.decode("utf-8", errors="replace")
    pf = parse_file(text, "fuzz.hott")
    assert all(d.span is not None for d in pf.diagnostics)
