"""Shared test fixtures."""

from __future__ import annotations

from collections.abc import Iterator
from pathlib import Path

import pytest

from hns_filter import cache
from hns_filter.synth import RealTransfer3

DATA = Path(__file__).resolve().parent.parent / "data"

# Third-order low-pass reference filter and its known realization.
REFERENCE_NUM = (0.287589, 0.6888683, 0.6888683, 0.287589)
REFERENCE_DEN = (0.418204, 0.473048, 0.061292)
REFERENCE_C = (0.1403252267, -0.3718209092, 0.0009238933689)
REFERENCE_A2_B1_B3 = (8.446312201, 3.749468903, -2.973890946)
REFERENCE_OPTIMUM = (-0.2316615, -1.2783899677)


@pytest.fixture(autouse=True)
def _clear_cache() -> Iterator[None]:
    """Clear the memo cache (and in-flight locks) around each test."""
    cache.clear()
    yield
    cache.clear()


@pytest.fixture
def reference() -> RealTransfer3:
    return RealTransfer3(REFERENCE_NUM, REFERENCE_DEN)


@pytest.fixture
def identity_filter() -> RealTransfer3:
    return RealTransfer3((1.0, 0.0, 0.0, 0.0), (0.0, 0.0, 0.0))


@pytest.fixture
def reference_file() -> Path:
    return DATA / "reference_lowpass.txt"
