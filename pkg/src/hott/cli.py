"""Command line driver: ``hott check [paths] [options]``."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional, TextIO

from .driver import BUNDLED_STDLIB, CheckResult, check_paths
from .printer import print_term
from .syntax import Axiom, Declaration, Definition, Postulate, SchemaInstance


def format_decl(d: Declaration) -> list[str]:
    k = d.kind
    if isinstance(k, Definition):
        return [f"def {d.name} : {print_term(k.type)} := {print_term(k.body)}"]
    if isinstance(k, Postulate):
        return [f'postulate {d.name} : {print_term(k.type)} "{k.marker}"']
    if isinstance(k, Axiom):
        if d.origin is not None:
            # schema output is re-derived from its instance line when re-checked
            return [f"-- {d.name} : {print_term(k.type)}"]
        return [f"axiom {d.name} : {print_term(k.type)}"]
    if isinstance(k, SchemaInstance):
        params = " ".join(f"({p} := {print_term(t)})" for p, t in k.parameters)
        line = f"{k.schema} {d.name} {params}"
        if k.level is not None:
            line += f" : U{k.level}"
        line += " at levels " + " ".join(str(x) for x in k.target_levels)
        return [line]
    raise TypeError(k)


def dump(result: CheckResult, out: TextIO) -> None:
    for path in result.order:
        fr = result.files.get(path)
        if fr is None:
            continue
        out.write(f"-- file: {path}\n")
        for d in fr.decls:
            for line in format_decl(d):
                out.write(line + "\n")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hott", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", help="type-check .hott files or directories")
    c.add_argument("paths", nargs="*", help="files or directories (default: the stdlib)")
    c.add_argument("--stdlib", metavar="DIR", help="standard library root")
    c.add_argument("--no-stdlib", action="store_true", help="do not resolve bare imports")
    c.add_argument("--dump-elaborated", action="store_true",
                   help="print every checked declaration, including schema constants")
    c.add_argument("--summary", action="store_true", help="print declaration and file counts")
    c.add_argument("--jobs", type=int, default=1, metavar="N", help="parallel file checks")
    return ap


def stdlib_dir(args) -> Optional[Path]:
    if args.no_stdlib:
        return None
    if args.stdlib:
        return Path(args.stdlib)
    env = os.environ.get("HOTT_STDLIB")
    if env:
        return Path(env)
    return BUNDLED_STDLIB


def main(argv: Optional[list[str]] = None) -> int:
    if sys.getrecursionlimit() < 20000:
        sys.setrecursionlimit(20000)
    args = build_parser().parse_args(argv)
    lib = stdlib_dir(args)
    paths = args.paths
    if not paths:
        if lib is None:
            print("hott: error: no input files", file=sys.stderr)
            return 2
        paths = [str(lib)]
    if lib is not None and not lib.is_dir():
        print(f"hott: error: stdlib directory {lib} does not exist", file=sys.stderr)
        return 2
    result = check_paths(paths, lib, jobs=max(1, args.jobs))
    for d in result.diagnostics:
        print(d.format(), file=sys.stderr)
    if args.dump_elaborated and result.exit_code != 2:
        dump(result, sys.stdout)
    if args.summary:
        print(f"checked {result.declaration_count} declarations in {len(result.files)} files")
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
