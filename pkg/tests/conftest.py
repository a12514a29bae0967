import sys
from pathlib import Path

import pytest

from hott.driver import BUNDLED_STDLIB, check_paths
from hott.parser import parse_term
from hott.syntax import Context

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

TESTS = Path(__file__).resolve().parent
NEGATIVE = TESTS / "negative"
FIXTURES = TESTS / "fixtures"


@pytest.fixture(scope="session")
def stdlib_result():
    res = check_paths([str(BUNDLED_STDLIB)], BUNDLED_STDLIB)
    assert res.exit_code == 0, [d.format() for d in res.diagnostics]
    return res


@pytest.fixture(scope="session")
def env(stdlib_result):
    return stdlib_result.env


def tm(env, text, scope=()):
    """Parse a term against the names of ``env``; unknown names are an error."""
    return parse_term(text, list(scope), lambda n: n in env)


def telescope(env, *binders):
    """Build a context from ("name", "type text") pairs."""
    ctx, names = Context(), []
    for name, ty in binders:
        ctx = ctx.push(tm(env, ty, names), name)
        names.append(name)
    return ctx, names
