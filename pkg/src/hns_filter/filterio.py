"""Filter definition files and CSV emission.

A filter file is key-value text::

    # third-order low-pass
    num = [0.287589, 0.6888683, 0.6888683, 0.287589]
    den = [0.418204, 0.473048, 0.061292]

Blank lines and ``#`` comments are ignored; any other key is rejected.
"""

from __future__ import annotations

import csv
import logging
import math
import re
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import TextIO

from .config import CSV_DIGITS
from .errors import FilterParseError
from .synth import RealTransfer3

logger = logging.getLogger(__name__)

_LINE_RE = re.compile(r"^\s*(?P<key>[A-Za-z_]\w*)\s*=\s*\[(?P<body>[^\]]*)\]\s*$")
_DECIMAL_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
_KEYS = {"num": 4, "den": 3}


def parse_decimal(text: str) -> float:
    """A plain decimal literal (no ``nan``, ``inf``, hex or underscores)."""
    text = text.strip()
    if not _DECIMAL_RE.match(text):
        raise FilterParseError(f"not a decimal literal: {text!r}")
    value = float(text)
    if not math.isfinite(value):
        raise FilterParseError(f"decimal literal out of range: {text!r}")
    return value


def parse_filter(text: str) -> RealTransfer3:
    fields: dict[str, tuple[float, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE_RE.match(line)
        if not m:
            raise FilterParseError(f"line {lineno}: expected 'key = [v, ...]'")
        key = m.group("key")
        if key not in _KEYS:
            raise FilterParseError(f"line {lineno}: unknown key {key!r}")
        if key in fields:
            raise FilterParseError(f"line {lineno}: duplicate key {key!r}")
        values = tuple(parse_decimal(v) for v in m.group("body").split(",") if v.strip())
        if len(values) != _KEYS[key]:
            raise FilterParseError(
                f"line {lineno}: {key} needs {_KEYS[key]} values, got {len(values)}"
            )
        fields[key] = values
    missing = [k for k in _KEYS if k not in fields]
    if missing:
        raise FilterParseError(f"missing key(s): {', '.join(missing)}")
    return RealTransfer3(fields["num"], fields["den"])  # type: ignore[arg-type]


def read_filter(path: Path) -> RealTransfer3:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FilterParseError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise FilterParseError(f"{path} is not UTF-8 text: {exc.reason}") from exc
    logger.debug("read filter definition from %s", path)
    return parse_filter(text)


def format_filter(target: RealTransfer3) -> str:
    num = ", ".join(repr(v) for v in target.num)
    den = ", ".join(repr(v) for v in target.den)
    return f"num = [{num}]\nden = [{den}]\n"


def format_number(value: float, digits: int = CSV_DIGITS) -> str:
    return f"{value:.{digits}g}"


def write_csv(
    stream: TextIO,
    header: Sequence[str],
    rows: Iterable[Sequence[float]],
    digits: int = CSV_DIGITS,
) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(v, digits) for v in row])
