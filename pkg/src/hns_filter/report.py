"""Human-readable reports shared by the CLI and the MCP tools (Markdown text)."""

from __future__ import annotations

import numpy as np

from .algebra import GAMMA3, RC, AlgebraTable, format_element
from .config import REPORT_DIGITS
from .isomorphism import find_isomorphism, homomorphism_error
from .optimizer import OptimResult
from .sensitivity import SensitivityProfile
from .synth import HyperFilter1, RealTransfer3, expand, expand_closed_form, round_trip_residual

_D = REPORT_DIGITS


def _n(value: float) -> str:
    return f"{value:.{_D}g}"


def _product_rows(table: AlgebraTable) -> list[str]:
    names = table.basis_names
    rows = []
    for i in range(table.dim):
        for j in range(i, table.dim):
            terms = [
                f"{_n(table.gamma[i, j, k])}·{names[k]}"
                for k in range(table.dim)
                if table.gamma[i, j, k] != 0.0
            ]
            product = " + ".join(terms).replace("+ -", "- ") or "0"
            rows.append(f"- {names[i]}·{names[j]} = {product}")
    return rows


def table_report(table: AlgebraTable) -> str:
    counts = table.nonzero_constants()
    identity = " + ".join(
        f"{_n(c)}·{name}" for c, name in zip(table.identity, table.basis_names, strict=True) if c
    )
    lines = [f"### {table.name}", *_product_rows(table), ""]
    lines.append(f"- identity: {identity}")
    lines.append(
        f"- nonzero structure constants off the identity: {counts.raw} "
        f"({counts.per_cell} per unordered product)"
    )
    lines.append(f"- commutative: {table.is_commutative()}, associative: {table.is_associative()}")
    return "\n".join(lines)


def algebra_report() -> str:
    matrix = find_isomorphism(GAMMA3, RC)
    error = homomorphism_error(GAMMA3, RC, matrix)
    lines = ["## Built-in algebras", "", table_report(GAMMA3), "", table_report(RC), ""]
    lines.append(f"### Isomorphism {GAMMA3.name} → {RC.name}")
    lines.append("Columns are the images of e1, e2, e3:")
    lines.append("```")
    lines.extend("  ".join(f"{v:>16.{_D}g}" for v in row) for row in matrix)
    lines.append("```")
    lines.append(f"- det = {_n(float(np.linalg.det(matrix)))}, max product error = {error:.3e}")
    return "\n".join(lines)


def conversion_report(target: RealTransfer3, f: HyperFilter1) -> str:
    residual = round_trip_residual(f, target)
    return "\n".join(
        [
            "## Hypercomplex realization",
            f"- A = {format_element(f.A, _D)}",
            f"- B = {format_element(f.B, _D)}",
            f"- C = {format_element(f.C, _D)}",
            f"- free parameters: a3 = {_n(f.free.a3)}, b2 = {_n(f.free.b2)}",
            f"- round-trip residual: {residual:.3e}",
        ]
    )


def expansion_report(f: HyperFilter1) -> str:
    """Coefficients from the algebra next to the closed forms, as printed and corrected."""
    forms = {
        "algebra": expand(f),
        "closed form": expand_closed_form(f),
        "as printed": expand_closed_form(f, printed=True),
    }
    names = ("k0", "K", "M", "L", "T", "P", "Q")
    lines = ["## Expanded transfer function", "", "| coefficient | " + " | ".join(forms) + " |"]
    lines.append("|---" * (len(forms) + 1) + "|")
    for name in names:
        cells = [_n(getattr(form, name)) for form in forms.values()]
        lines.append(f"| {name} | " + " | ".join(cells) + " |")
    return "\n".join(lines)


def monomial_section() -> str:
    from .symbolic import monomial_report  # sympy is only needed here

    mismatches = monomial_report()
    if not mismatches:
        return "All printed closed forms agree with the algebra."
    lines = ["Monomials where the printed closed forms disagree with the algebra:"]
    lines.extend(
        f"- {m.coefficient}: {m.monomial} has {_n(m.oracle)} (printed {_n(m.printed)})"
        for m in mismatches
    )
    return "\n".join(lines)


def profile_report(label: str, profile: SensitivityProfile) -> str:
    values = profile.values()
    lines = [f"## {label}", f"- S_RCS = {_n(profile.aggregate)} over {len(values)} points"]
    if values.size:
        peak = int(np.argmax(values))
        lines.append(f"- peak RCS {_n(values[peak])} at ω = {_n(profile.per_point[peak][0])}")
    if profile.flagged:
        lines.append(f"- excluded ω: {', '.join(_n(w) for w in profile.flagged)}")
    return "\n".join(lines)


def optimization_report(result: OptimResult) -> str:
    lines = ["## Staged optimization"]
    stages: dict[str, int] = {}
    for entry in result.trace:
        stages[entry.stage] = stages.get(entry.stage, 0) + 1
    for entry in result.trace:
        if entry.stage in ("wide", "narrow"):
            lines.append(
                f"- {entry.stage}: {entry.state} → a3 = {_n(entry.point[0])}, "
                f"b2 = {_n(entry.point[1])}, S_RCS = {_n(entry.value)}"
            )
    if "refine" in stages:
        lines.append(f"- refine: {stages['refine'] - 1} simplex iterations")
    a3, b2 = result.point
    lines.append(f"- **final**: a3 = {_n(a3)}, b2 = {_n(b2)}, S_RCS = {_n(result.value)}")
    return "\n".join(lines)
