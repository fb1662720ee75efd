#!/usr/bin/env python3
"""Run the acceptance criteria and print one PASS/FAIL line per criterion.

    python3 scripts/run_acceptance.py          # all
    python3 scripts/run_acceptance.py 1 5 10   # a subset
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

import test_acceptance as acc  # noqa: E402


def main(argv):
    wanted = {int(a) for a in argv} or {c[0] for c in acc.CRITERIA}
    failed = [c[0] for c in acc.CRITERIA if c[0] in wanted and acc.run_criterion(*c) is not None]
    print(f"{len(wanted) - len(failed)}/{len(wanted)} passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
