"""Time a single-threaded check of the bundled stdlib."""

import argparse
import statistics
import sys
import time

from hott.driver import BUNDLED_STDLIB, check_paths


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--runs", type=int, default=3)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args(argv)
    sys.setrecursionlimit(20000)
    times = []
    for _ in range(args.runs):
        t0 = time.perf_counter()
        res = check_paths([str(BUNDLED_STDLIB)], BUNDLED_STDLIB, jobs=args.jobs)
        times.append(time.perf_counter() - t0)
        if res.exit_code != 0:
            print("stdlib failed to check", file=sys.stderr)
            return 1
    print(f"{res.declaration_count} declarations in {len(res.files)} files")
    print(f"median {statistics.median(times):.2f}s  min {min(times):.2f}s  max {max(times):.2f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
