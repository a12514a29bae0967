"""A small proof checker for homotopy type theory with schema-generated HITs."""

import sys

from .evaluator import conv, whnf
from .syntax import Context, Declaration, GlobalEnv, shift, struct_eq, subst
from .typechecker import CheckError, Checker, check, check_declaration, cumul, infer

# terms are trees and most judgements recurse on them
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)

__all__ = [
    "CheckError", "Checker", "Context", "Declaration", "GlobalEnv", "check",
    "check_declaration", "conv", "cumul", "infer", "shift", "struct_eq",
    "subst", "whnf",
]
__version__ = "0.1.0"
