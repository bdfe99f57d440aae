"""Central configuration: tolerances, search budgets, defaults, exit codes.

Every magic value the toolkit depends on lives here so behavior can be reasoned
about (and adjusted) in one place.
"""

from __future__ import annotations

from typing import Final

# --- Algebra ----------------------------------------------------------------
# inverse() refuses elements with |norm| <= SINGULAR_TOL * scale**dim.
SINGULAR_TOL: Final = 1e-12
TABLE_CHECK_TOL: Final = 1e-12

# Idempotent search (Newton on u*u - u).
IDEMPOTENT_STARTS: Final = 64
IDEMPOTENT_ITERATIONS: Final = 100
IDEMPOTENT_TOL: Final = 1e-12
ISOMORPHISM_CHECK_TOL: Final = 1e-9
ISOMORPHISM_SEED: Final = 0

# --- Denominator solve (damped Newton, lattice multistart) -----------------
LATTICE_BOUND: Final = 2.0
LATTICE_STEP: Final = 0.25
NEWTON_MAX_ITER: Final = 60
NEWTON_TOL: Final = 1e-12
NEWTON_ACCEPT_TOL: Final = 1e-10
NEWTON_MAX_HALVINGS: Final = 10
NEWTON_POLISH_STEPS: Final = 3
BRANCH_ZERO_TOL: Final = 1e-9

# --- Numerator solve --------------------------------------------------------
MAX_CONDITION: Final = 1e12

# --- Sensitivity ------------------------------------------------------------
GRID_POINTS: Final = 33
# |H| <= MAGNITUDE_TOL * sum|numerator coefficients| counts as a zero.
MAGNITUDE_TOL: Final = 1e-9
POLE_TOL: Final = 1e-12
ZERO_SENSITIVITY_TOL: Final = 1e-12

# --- Optimizer --------------------------------------------------------------
WIDE_A3: Final = (-10.0, 10.0)
WIDE_B2: Final = (-10.0, 10.0)
WIDE_RESOLUTION: Final = 41
NARROW_RESOLUTION: Final = 31
NARROW_HALF_WIDTH_CELLS: Final = 1.5  # narrow box spans 3x3 wide-lattice cells

NM_REFLECTION: Final = 1.0
NM_EXPANSION: Final = 2.0
NM_CONTRACTION: Final = 0.5
NM_SHRINK: Final = 0.5
NM_INITIAL_EDGE: Final = 0.02
NM_DIAMETER_TOL: Final = 1e-8
NM_SPREAD_TOL: Final = 1e-10
NM_MAX_ITER: Final = 500

# --- Output -----------------------------------------------------------------
REPORT_DIGITS: Final = 10
CSV_DIGITS: Final = 12

# --- Process exit codes -----------------------------------------------------
EXIT_OK: Final = 0
EXIT_PARSE: Final = 2
EXIT_INFEASIBLE: Final = 3
EXIT_NUMERICAL: Final = 4

# --- Memo cache -------------------------------------------------------------
CACHE_MAX_ENTRIES: Final = 256

# --- MCP tools --------------------------------------------------------------
SERVER_NAME: Final = "HNS-Filter-Sensitivity"
# Caps on tool arguments so a single call stays interactive.
MAX_TOOL_GRID_POINTS: Final = 1025
MAX_TOOL_RESOLUTION: Final = 81
