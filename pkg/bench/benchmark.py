#!/usr/bin/env python
"""
Timing benchmark for the conversion, sensitivity and search paths.

Runs each stage on the reference low-pass filter with a cold memo cache and
reports wall-clock seconds, so a change to the denominator solve or the
derivative engine can be compared before/after on the same machine.

Usage:
    uv run python bench/benchmark.py [label] [--full]

``--full`` adds the default staged optimization (wide 41², narrow 31², simplex),
which takes a while. Writes JSON to stdout, e.g.:
    uv run python bench/benchmark.py before > bench/before.json
"""

from __future__ import annotations

import json
import sys
import time
from collections.abc import Callable
from pathlib import Path
from typing import Any

from hns_filter import cache
from hns_filter.filterio import read_filter
from hns_filter.optimizer import SearchBox, staged_optimize
from hns_filter.sensitivity import ratio_profile, s_rcs
from hns_filter.synth import convert

REFERENCE = Path(__file__).resolve().parent.parent / "data" / "reference_lowpass.txt"
OPTIMUM = (-0.2316615, -1.2783899677)


def _timed(fn: Callable[[], Any]) -> float:
    # Every stage starts cold so the denominator solve is included.
    cache.clear()
    start = time.perf_counter()
    fn()
    return round(time.perf_counter() - start, 4)


def run() -> None:
    args = [a for a in sys.argv[1:] if not a.startswith("--")]
    label = args[0] if args else "run"
    target = read_filter(REFERENCE)

    bench: dict[str, Callable[[], Any]] = {
        "convert": lambda: convert(target),
        "s_rcs": lambda: s_rcs(target, *OPTIMUM),
        "ratio_profile": lambda: ratio_profile(target, *OPTIMUM),
        "staged_small": lambda: staged_optimize(
            target, wide=SearchBox.wide(9), narrow_resolution=9
        ),
    }
    if "--full" in sys.argv:
        bench["staged_default"] = lambda: staged_optimize(target)

    rows = {name: _timed(fn) for name, fn in bench.items()}
    print(json.dumps({"label": label, "seconds": rows}, indent=2))


if __name__ == "__main__":
    run()
