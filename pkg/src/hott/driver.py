"""File loading, import resolution and dependency-ordered checking."""

from __future__ import annotations

import os
import threading
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .diagnostics import Diagnostic, from_check_error
from .parser import ParsedFile, ResolveError, parse_file, resolve_decl
from .syntax import Declaration, GlobalEnv, SchemaInstance, SourceSpan
from .typechecker import CheckError, Checker

BUNDLED_STDLIB = Path(__file__).resolve().parent / "stdlib"


@dataclass
class FileResult:
    path: str
    decls: list[Declaration] = field(default_factory=list)  # own, checked
    diagnostics: list[Diagnostic] = field(default_factory=list)
    source_decls: int = 0

    @property
    def ok(self) -> bool:
        return not any(d.severity == "error" for d in self.diagnostics)


@dataclass
class CheckResult:
    order: list[str]
    files: dict[str, FileResult]
    env: GlobalEnv
    load_errors: list[Diagnostic] = field(default_factory=list)

    @property
    def diagnostics(self) -> list[Diagnostic]:
        out = list(self.load_errors)
        for f in self.files.values():
            out.extend(f.diagnostics)
        return sorted(out, key=Diagnostic.sort_key)

    @property
    def exit_code(self) -> int:
        if self.load_errors:
            return 2
        return 0 if all(f.ok for f in self.files.values()) else 1

    @property
    def declaration_count(self) -> int:
        return sum(f.source_decls for f in self.files.values())


def display_path(p: Path) -> str:
    try:
        rel = os.path.relpath(p)
    except ValueError:
        return str(p)
    return str(p) if rel.startswith("..") else rel


def expand_inputs(paths: list[str]) -> list[Path]:
    out: list[Path] = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            out.extend(sorted(q for q in p.rglob("*.hott") if q.is_file()))
        else:
            out.append(p)
    return out


class Loader:
    def __init__(self, stdlib: Optional[Path]):
        self.stdlib = stdlib.resolve() if stdlib is not None else None
        self.parsed: dict[Path, ParsedFile] = {}
        self.deps: dict[Path, list[tuple[Path, SourceSpan]]] = {}
        self.errors: list[Diagnostic] = []

    def resolve_import(self, spec: str, importer: Path) -> Optional[Path]:
        """``./`` and ``../`` imports are relative to the importer; bare ones
        name a file under the stdlib root."""
        name = spec if spec.endswith(".hott") else spec + ".hott"
        if spec.startswith(("./", "../")):
            return (importer.parent / name).resolve()
        if self.stdlib is None:
            return None
        return (self.stdlib / name).resolve()

    def load(self, path: Path, span: Optional[SourceSpan] = None) -> bool:
        path = path.resolve()
        if path in self.parsed:
            return True
        shown = display_path(path)
        try:
            raw = path.read_bytes()
        except OSError as err:
            self.errors.append(Diagnostic("error", span or SourceSpan(shown, 1, 1, 1, 1),
                                          f"cannot read {shown}: {err.strerror or err}"))
            return False
        try:
            text, bad = raw.decode("utf-8"), False
        except UnicodeDecodeError:
            text, bad = raw.decode("utf-8", errors="replace"), True
        pf = parse_file(text, shown)
        if bad:
            pf.diagnostics.append(Diagnostic("error", SourceSpan(shown, 1, 1, 1, 1),
                                             "file is not valid UTF-8"))
        self.parsed[path] = pf
        deps = []
        for imp in pf.imports:
            target = self.resolve_import(imp.path, path)
            if target is None:
                self.errors.append(Diagnostic(
                    "error", imp.span,
                    f"unresolved import {imp.path} (no standard library configured)"))
                continue
            if not target.is_file():
                self.errors.append(Diagnostic("error", imp.span,
                                              f"unresolved import {imp.path}"))
                continue
            deps.append((target, imp.span))
            self.load(target, imp.span)
        self.deps[path] = deps
        return True

    def topo_order(self, roots: list[Path]) -> list[Path]:
        order: list[Path] = []
        state: dict[Path, int] = {}

        def visit(p: Path, stack: list[Path]):
            st = state.get(p, 0)
            if st == 2 or p not in self.parsed:
                return
            if st == 1:
                cyc = stack[stack.index(p):] + [p]
                names = " -> ".join(display_path(q) for q in cyc)
                span = next((s for q, s in self.deps.get(stack[-1], []) if q == p), None)
                self.errors.append(Diagnostic("error", span, f"import cycle: {names}"))
                return
            state[p] = 1
            stack.append(p)
            for q, _ in self.deps.get(p, []):
                visit(q, stack)
            stack.pop()
            state[p] = 2
            order.append(p)

        for r in roots:
            visit(r.resolve(), [])
        return order


def check_file(pf: ParsedFile, base: GlobalEnv) -> FileResult:
    """Check one parsed file against ``base`` (which is extended in place)."""
    res = FileResult(pf.filename, diagnostics=list(pf.diagnostics))
    env = base
    checker = Checker(env)
    for sd in pf.decls:
        res.source_decls += 1
        before = len(env.decls)
        try:
            decl = resolve_decl(sd, lambda n: n in env)
            checker.check_declaration(decl)
        except ResolveError as err:
            res.diagnostics.append(Diagnostic("error", err.span, err.message))
            continue
        except CheckError as err:
            res.diagnostics.append(from_check_error(err, sd.span))
            # drop any partially added schema constants
            for name in list(env.decls)[before:]:
                del env.decls[name]
            continue
        except RecursionError:
            res.diagnostics.append(Diagnostic("error", sd.span, "term nesting too deep"))
            continue
        if sd.kind in ("wsusp", "trunc"):
            res.decls.append(env.schemas[-1])
        res.decls.extend(env.decls[n] for n in list(env.decls)[before:])
    return res


def check_paths(paths: list[str], stdlib: Optional[Path] = BUNDLED_STDLIB,
                jobs: int = 1) -> CheckResult:
    loader = Loader(stdlib)
    roots = expand_inputs(paths)
    for r in roots:
        loader.load(r)
    order = loader.topo_order(roots)
    if loader.errors:
        return CheckResult([display_path(p) for p in order], {}, GlobalEnv(),
                           sorted(loader.errors, key=Diagnostic.sort_key))

    results: dict[Path, FileResult] = {}
    closure: dict[Path, list[Path]] = {}
    position = {p: i for i, p in enumerate(order)}
    for p in order:
        acc = set()
        for q, _ in loader.deps[p]:
            acc.add(q)
            acc.update(closure[q])
        closure[p] = sorted(acc, key=position.__getitem__)

    def run(p: Path) -> FileResult:
        pf = loader.parsed[p]
        failed = [(q, s) for q, s in loader.deps[p] if not results[q].ok]
        if failed:
            res = FileResult(pf.filename, diagnostics=list(pf.diagnostics))
            for q, s in failed:
                res.diagnostics.append(Diagnostic(
                    "error", s, f"imported file {display_path(q)} has errors"))
            res.source_decls = len(pf.decls)
            return res
        env = GlobalEnv()
        home: dict[str, Path] = {}
        clashes = []
        for q in closure[p]:
            for d in results[q].decls:
                if isinstance(d.kind, SchemaInstance):
                    env.schemas.append(d)
                elif d.name not in env:
                    env.add(d)
                    home[d.name] = q
                elif env.decls[d.name] is not d:
                    clashes.append((d.name, home[d.name], q))
        if clashes:
            res = FileResult(pf.filename, diagnostics=list(pf.diagnostics))
            span = loader.deps[p][0][1]
            for name, q1, q2 in clashes:
                res.diagnostics.append(Diagnostic(
                    "error", span, f"DuplicateName: {name} is declared in both "
                                   f"{display_path(q1)} and {display_path(q2)}"))
            res.source_decls = len(pf.decls)
            return res
        env.imports = {display_path(q): tuple(display_path(r) for r, _ in loader.deps[q])
                       for q in closure[p] + [p]}
        return check_file(pf, env)

    if jobs <= 1:
        for p in order:
            results[p] = run(p)
    else:
        pending = list(order)
        running = {}
        # checking recurses deeply; worker threads need a large stack
        threading.stack_size(256 * 1024 * 1024)
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            while pending or running:
                ready = [p for p in pending if all(q in results for q, _ in loader.deps[p])]
                for p in ready:
                    pending.remove(p)
                    running[pool.submit(run, p)] = p
                done, _ = wait(list(running), return_when=FIRST_COMPLETED)
                for fut in done:
                    results[running.pop(fut)] = fut.result()

    env = GlobalEnv()
    for p in order:
        for d in results[p].decls:
            if isinstance(d.kind, SchemaInstance):
                env.schemas.append(d)
            elif d.name not in env:
                env.add(d)
    files = {display_path(p): results[p] for p in order}
    return CheckResult([display_path(p) for p in order], files, env)
