#!/usr/bin/env python3
"""Regenerate the data for all figure commands into out/figures/."""

import sys
from pathlib import Path

from lasergrating.cli import main

OUT = Path(__file__).resolve().parent.parent / "out" / "figures"

if __name__ == "__main__":
    for fig in ("1", "2", "4", "5", "6"):
        target = OUT / f"figure{fig}"
        target.mkdir(parents=True, exist_ok=True)
        print(f"figure {fig} -> {target}")
        rc = main(["figure", fig, "--out", str(target)])
        if rc != 0:
            sys.exit(rc)
