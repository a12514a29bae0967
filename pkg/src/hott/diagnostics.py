"""Positioned diagnostics and their stable text format."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .syntax import SourceSpan


@dataclass(frozen=True, order=False)
class Diagnostic:
    severity: str  # "error" | "warning" | "note"
    span: Optional[SourceSpan]
    message: str
    expected: Optional[str] = None
    got: Optional[str] = None

    def sort_key(self) -> tuple:
        s = self.span
        if s is None:
            return ("", 0, 0, self.message)
        return (s.file, s.line, s.col, self.message)

    def format(self) -> str:
        s = self.span
        where = f"{s.file}:{s.line}:{s.col}" if s is not None else "<unknown>:1:1"
        text = f"{where}: {self.severity}: {self.message}"
        if self.expected is not None:
            text += f"\n  expected: {self.expected}"
        if self.got is not None:
            text += f"\n  got: {self.got}"
        return text


def from_check_error(err, fallback: Optional[SourceSpan] = None) -> Diagnostic:
    from .printer import print_term

    exp = print_term(err.expected, err.names) if err.expected is not None else None
    got = print_term(err.got, err.names) if err.got is not None else None
    return Diagnostic("error", err.span or fallback, f"{err.kind}: {err.message}", exp, got)
