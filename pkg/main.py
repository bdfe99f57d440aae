"""Entrypoint shim for the hns-filter command line.

The implementation lives in the ``hns_filter`` package; this module keeps a
stable ``main.py`` entrypoint (``python main.py optimize data/reference_lowpass.txt``)
and re-exports the CLI callables for convenience.
"""

from __future__ import annotations

from hns_filter.cli import build_parser, main, run

__all__ = ["build_parser", "main", "run"]


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
