"""Postulate census over ``hott check --dump-elaborated``.

Lists every body-less trusted name written in source (``axiom`` and
``postulate`` lines; schema constants are printed as comments and excluded)
and exits 1 unless the list is exactly the expected closed set.
"""

import argparse
import re
import subprocess
import sys

EXPECTED = {"ua", "funext", "ind-implies-uniq", "two-cell-path", "rec-uniq-implies-ind"}
TRUSTED = re.compile(r"^(axiom|postulate) (\S+) :", re.M)


def census(dump: str) -> list[tuple[str, str]]:
    return TRUSTED.findall(dump)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("paths", nargs="*", help="files to check (default: the stdlib)")
    args = ap.parse_args(argv)
    proc = subprocess.run([sys.executable, "-m", "hott.cli", "check", "--dump-elaborated", *args.paths],
                          capture_output=True, text=True)
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        return proc.returncode
    found = census(proc.stdout)
    for kind, name in found:
        print(f"{kind} {name}")
    names = [n for _, n in found]
    print(f"{len(names)} trusted names")
    if sorted(names) != sorted(EXPECTED):
        print(f"census mismatch: expected {sorted(EXPECTED)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
