"""Tests for the memo cache, the MCP tools and the server wiring."""

from __future__ import annotations

import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor

import pytest

from hns_filter import cache, server, tools
from hns_filter.errors import NoRealSolution

from .conftest import REFERENCE_DEN, REFERENCE_NUM

THREE_REAL_POLES = [-0.4, -0.11, 0.03]  # poles 0.5, 0.2, -0.3


# --------------------------------------------------------------------------- #
# cache                                                                       #
# --------------------------------------------------------------------------- #


class TestCache:
    def test_set_and_get(self) -> None:
        cache.cache_set("k", "v")
        assert cache.cache_get("k") == "v"
        assert cache.size() == 1

    def test_miss(self) -> None:
        assert cache.cache_get("absent") is None

    def test_lru_eviction(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setattr("hns_filter.cache.CACHE_MAX_ENTRIES", 3)
        for i in range(5):
            cache.cache_set(f"k{i}", str(i))
        assert cache.size() == 3
        assert "k0" not in cache._cache
        assert "k4" in cache._cache

    def test_get_refreshes_recency(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setattr("hns_filter.cache.CACHE_MAX_ENTRIES", 2)
        cache.cache_set("a", 1)
        cache.cache_set("b", 2)
        cache.cache_get("a")
        cache.cache_set("c", 3)
        assert "a" in cache._cache
        assert "b" not in cache._cache

    def test_eviction_drops_key_lock(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setattr("hns_filter.cache.CACHE_MAX_ENTRIES", 2)
        for i in range(4):
            cache.get_or_compute(f"k{i}", lambda i=i: i)
        assert set(cache._cache) == {"k2", "k3"}
        assert set(cache._locks) == {"k2", "k3"}

    def test_single_flight(self) -> None:
        calls = 0
        lock = threading.Lock()

        def compute() -> str:
            nonlocal calls
            with lock:
                calls += 1
            time.sleep(0.05)
            return "value"

        with ThreadPoolExecutor(max_workers=4) as pool:
            results = list(pool.map(lambda _: cache.get_or_compute("key", compute), range(4)))
        assert results == ["value"] * 4
        assert calls == 1

    def test_exceptions_are_not_cached(self) -> None:
        def fail() -> str:
            raise NoRealSolution(1.0)

        with pytest.raises(NoRealSolution):
            cache.get_or_compute("bad", fail)
        assert cache.cache_get("bad") is None
        assert cache.get_or_compute("bad", lambda: "ok") == "ok"


# --------------------------------------------------------------------------- #
# tools                                                                       #
# --------------------------------------------------------------------------- #


class TestTools:
    async def test_algebra_info(self) -> None:
        out = await tools.algebra_info()
        assert "Γ(e,3)" in out and "R⊕C" in out
        assert "Isomorphism" in out

    async def test_convert(self) -> None:
        out = await tools.convert_filter(list(REFERENCE_NUM), list(REFERENCE_DEN))
        assert "C = 0.140325" in out
        assert "- 0.37182" in out
        assert "round-trip residual" in out

    async def test_convert_positive_branch(self) -> None:
        out = await tools.convert_filter(
            list(REFERENCE_NUM), list(REFERENCE_DEN), branch="Positive"
        )
        assert "+ 0.37182" in out

    async def test_convert_bad_arity(self) -> None:
        out = await tools.convert_filter([1.0, 2.0, 3.0], list(REFERENCE_DEN))
        assert out.startswith("Could not convert the filter")
        assert "💡" in out and "4 numerator" in out

    async def test_convert_bad_branch(self) -> None:
        out = await tools.convert_filter(list(REFERENCE_NUM), list(REFERENCE_DEN), branch="up")
        assert "is not one of" in out

    async def test_convert_infeasible(self) -> None:
        out = await tools.convert_filter([1.0, 0.0, 0.0, 0.0], THREE_REAL_POLES)
        assert "no real solution" in out
        assert "complex pair" in out

    async def test_sensitivity_summary(self) -> None:
        out = await tools.sensitivity_summary(
            list(REFERENCE_NUM), list(REFERENCE_DEN), grid_points=17
        )
        assert "Hypercomplex realization" in out
        assert "Real realization" in out
        assert "## Ratio" in out
        assert "excluded ω" in out  # the transmission zero at z = -1

    async def test_sensitivity_summary_bad_convention(self) -> None:
        out = await tools.sensitivity_summary(
            list(REFERENCE_NUM), list(REFERENCE_DEN), z_convention="polar"
        )
        assert out.startswith("Could not compute the sensitivity")

    @pytest.mark.slow
    async def test_optimize(self) -> None:
        out = await tools.optimize_free_parameters(
            list(REFERENCE_NUM), list(REFERENCE_DEN), wide_resolution=3, narrow_resolution=3
        )
        assert "## Staged optimization" in out
        assert "**final**" in out

    async def test_optimize_infeasible(self) -> None:
        out = await tools.optimize_free_parameters(
            [1.0, 0.0, 0.0, 0.0], THREE_REAL_POLES, wide_resolution=2, narrow_resolution=2
        )
        assert out.startswith("Could not optimize the free parameters")


# --------------------------------------------------------------------------- #
# server                                                                      #
# --------------------------------------------------------------------------- #


class TestServer:
    async def test_tools_registered(self) -> None:
        registered = {tool.name for tool in await server.mcp.list_tools()}
        assert registered == {
            "algebra_info",
            "convert_filter",
            "sensitivity_summary",
            "optimize_free_parameters",
        }

    async def test_tools_are_read_only(self) -> None:
        for tool in await server.mcp.list_tools():
            assert tool.annotations is not None
            assert tool.annotations.readOnlyHint is True

    async def test_lifespan_clears_cache(self, monkeypatch: pytest.MonkeyPatch) -> None:
        cleared = False

        def fake_clear() -> None:
            nonlocal cleared
            cleared = True

        monkeypatch.setattr(cache, "clear", fake_clear)
        async with server._lifespan(server.mcp):
            assert not cleared
        assert cleared

    async def test_instructions_name_registered_tools(self) -> None:
        registered = {tool.name for tool in await server.mcp.list_tools()}
        mentioned = set(re.findall(r"`(\w+)`", server._INSTRUCTIONS)) - {"num", "den"}
        assert mentioned
        assert mentioned <= registered
