"""FastMCP server exposing the conversion, sensitivity and search tools over stdio.

The tools are pure functions of their arguments; the only state is the memo
cache of denominator solves, dropped when the server shuts down.
"""

from __future__ import annotations

import logging
import sys
from collections.abc import AsyncIterator
from contextlib import asynccontextmanager

from fastmcp import FastMCP
from fastmcp.tools.tool import ToolAnnotations

from . import cache
from .config import SERVER_NAME

# stdout carries the protocol.
logging.basicConfig(
    level=logging.WARNING,
    stream=sys.stderr,
    format="%(asctime)s %(levelname)s %(name)s: %(message)s",
)

READONLY = ToolAnnotations(readOnlyHint=True, openWorldHint=False)

_INSTRUCTIONS = (
    "Filters are given as `num` (4 coefficients of z⁰..z⁻³) and `den` "
    "(3 coefficients of z⁻¹..z⁻³, leading 1 implied). Start with `convert_filter`; "
    "`optimize_free_parameters` runs hundreds of conversions and takes a while."
)


@asynccontextmanager
async def _lifespan(_server: FastMCP) -> AsyncIterator[None]:
    try:
        yield
    finally:
        cache.clear()


mcp = FastMCP(SERVER_NAME, instructions=_INSTRUCTIONS, lifespan=_lifespan)

# tools.py decorates its functions with `mcp.tool`, so it must load after `mcp`.
from . import tools as tools  # noqa: E402,F401


def run() -> None:  # pragma: no cover
    mcp.run(transport="stdio")
