"""The four MCP tools: thin orchestration over the library, Markdown out.

Tools never raise for bad input or infeasible filters; they return a short
explanation with a hint instead. Computation runs in a worker thread so the
event loop stays responsive.
"""

from __future__ import annotations

import asyncio
import logging

from .config import MAX_TOOL_GRID_POINTS, MAX_TOOL_RESOLUTION, REPORT_DIGITS
from .errors import FilterParseError, HnsFilterError
from .optimizer import SearchBox, staged_optimize
from .report import algebra_report, conversion_report, optimization_report, profile_report
from .sensitivity import FrequencyGrid, ZConvention, profile, ratio_profile, s_rcs
from .server import READONLY, mcp
from .synth import Branch, RealTransfer3, convert

logger = logging.getLogger(__name__)

_FILTER_HINT = (
    "Pass `num` as 4 numerator coefficients (z⁰..z⁻³) and `den` as 3 "
    "denominator coefficients (z⁻¹..z⁻³, leading 1 implied)."
)


def _target(num: list[float], den: list[float]) -> RealTransfer3:
    if len(num) != 4 or len(den) != 3:
        raise FilterParseError(f"got {len(num)} numerator and {len(den)} denominator values")
    return RealTransfer3(tuple(num), tuple(den))  # type: ignore[arg-type]


def _choice[E: (Branch, ZConvention)](kind: type[E], value: str) -> E:
    try:
        return kind(value.strip().lower())
    except ValueError as exc:
        options = ", ".join(f"`{m.value}`" for m in kind)
        raise FilterParseError(f"{value!r} is not one of {options}") from exc


def _failure(action: str, exc: HnsFilterError) -> str:
    hint = _FILTER_HINT if isinstance(exc, FilterParseError) else (
        "Conversion needs a denominator with one real pole and a complex pair; "
        "try the other `branch` or check the filter's poles."
    )
    return f"Could not {action}: {exc}\n\n💡 {hint}"


# output_schema=None: FastMCP auto-wraps plain `-> str` returns in a generated
# {"result": {"type": "string"}, ...} schema and ships it on every tool listing.
# It adds tokens per tool with no semantic value here, so we opt out explicitly.
@mcp.tool(annotations=READONLY, output_schema=None)
async def algebra_info() -> str:
    """Describe the built-in algebras Γ(e,3) and R⊕C and the isomorphism between them."""
    try:
        return await asyncio.to_thread(algebra_report)
    except HnsFilterError as exc:
        return f"Could not build the algebra report: {exc}"


@mcp.tool(annotations=READONLY, output_schema=None)
async def convert_filter(
    num: list[float],
    den: list[float],
    a3: float = 0.0,
    b2: float = 0.0,
    branch: str = "negative",
) -> str:
    """Realize a third-order real IIR filter as a first-order Γ(e,3) filter.

    Args:
        num: Numerator coefficients of z⁰, z⁻¹, z⁻², z⁻³.
        den: Denominator coefficients of z⁻¹, z⁻², z⁻³ (leading 1 implied).
        a3: Free parameter (third component of A).
        b2: Free parameter (second component of B).
        branch: Sign of c2, "negative" or "positive".
    """
    try:
        target = _target(num, den)
        f = await asyncio.to_thread(convert, target, a3, b2, _choice(Branch, branch))
        return conversion_report(target, f)
    except HnsFilterError as exc:
        return _failure("convert the filter", exc)


@mcp.tool(annotations=READONLY, output_schema=None)
async def sensitivity_summary(
    num: list[float],
    den: list[float],
    a3: float = 0.0,
    b2: float = 0.0,
    z_convention: str = "rotated",
    grid_points: int = 33,
) -> str:
    """Total parametric sensitivity of both realizations and their ratio.

    Args:
        num: Numerator coefficients of z⁰, z⁻¹, z⁻², z⁻³.
        den: Denominator coefficients of z⁻¹, z⁻², z⁻³.
        a3: Free parameter of the hypercomplex realization.
        b2: Free parameter of the hypercomplex realization.
        z_convention: "rotated" (z = sin ω + i·cos ω) or "standard" (z = e^{iω}).
        grid_points: Frequencies on [0, 2π], endpoints included.
    """
    try:
        target = _target(num, den)
        n = min(max(int(grid_points), 2), MAX_TOOL_GRID_POINTS)
        grid = FrequencyGrid.uniform(n, _choice(ZConvention, z_convention))

        def compute() -> str:
            hyper = s_rcs(target, a3, b2, grid)
            real = profile(target, grid)
            ratios = [r for _, r in ratio_profile(target, a3, b2, grid)]
            below = sum(1 for r in ratios if r < 1.0)
            return "\n\n".join(
                [
                    profile_report(f"Hypercomplex realization (a3={a3:g}, b2={b2:g})", hyper),
                    profile_report("Real realization", real),
                    f"## Ratio\n- hypercomplex is less sensitive at {below} of {len(ratios)} "
                    f"points (max ratio {max(ratios, default=float("nan")):.{REPORT_DIGITS}g})",
                ]
            )

        return await asyncio.to_thread(compute)
    except HnsFilterError as exc:
        return _failure("compute the sensitivity", exc)


@mcp.tool(annotations=READONLY, output_schema=None)
async def optimize_free_parameters(
    num: list[float],
    den: list[float],
    wide_resolution: int = 41,
    narrow_resolution: int = 31,
) -> str:
    """Search (a3, b2) for the least total sensitivity: wide grid, narrow grid, simplex.

    Args:
        num: Numerator coefficients of z⁰, z⁻¹, z⁻², z⁻³.
        den: Denominator coefficients of z⁻¹, z⁻², z⁻³.
        wide_resolution: Points per axis on [-10, 10]².
        narrow_resolution: Points per axis around the wide minimum.
    """
    try:
        target = _target(num, den)
        wide = SearchBox.wide(min(max(int(wide_resolution), 2), MAX_TOOL_RESOLUTION))
        narrow = min(max(int(narrow_resolution), 2), MAX_TOOL_RESOLUTION)
        result = await asyncio.to_thread(
            staged_optimize, target, None, wide=wide, narrow_resolution=narrow
        )
        return optimization_report(result)
    except HnsFilterError as exc:
        return _failure("optimize the free parameters", exc)
