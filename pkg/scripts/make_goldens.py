#!/usr/bin/env python3
"""Regenerate the committed figure goldens used by the acceptance regression.

Run only after the physics criteria (1-9) pass; the goldens are derived
artifacts, never hand-edited.
"""

import shutil
import sys
from pathlib import Path

from lasergrating.cli import main

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "goldens"

if __name__ == "__main__":
    for fig in ("1", "2", "4", "5", "6"):
        target = GOLDEN / f"figure{fig}"
        if target.exists():
            shutil.rmtree(target)
        target.mkdir(parents=True)
        print(f"generating golden for figure {fig}")
        rc = main(["figure", fig, "--out", str(target)])
        if rc != 0:
            sys.exit(rc)
    print("done")
