#!/usr/bin/env python3
"""Run every operator identity suite and store the JSON report."""

import sys
from pathlib import Path

from fraczee.cli import main

if __name__ == "__main__":
    Path("out").mkdir(exist_ok=True)
    sys.exit(main(["verify", "all", "--out", "out/verify.json"]))
