# Shared fixtures for the sullivan test suite

import os

import pytest
from unittest.mock import MagicMock

from sullivan.cache import ComplexCache
from sullivan.complex import ChainComplex, SparseMatrix, build_complex
from sullivan.config import Settings
from sullivan.controller import SullivanController
from sullivan.diagram import Diagram
from sullivan.models import Flavor
from sullivan.operations import class_eta, class_zeta

# Diagram of genus 3 with five punctures, two ghost surfaces
TWO_SURFACE_LAMBDA = "(0)(1 3)(2 5 4)"
TWO_SURFACE_SURFACES = [(0, 1, "(0),(1 3)"), (1, 2, "(2 5 4)")]

# ω̃_{2,1} and ω̃_{2,2}
OMEGA_21 = "(0)(1 3 l1)(2 l2)"
OMEGA_22 = "(0 l1)(1 3)(2 l2)"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: builds large components; set SULLIVAN_RUN_SLOW=1 to run")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("SULLIVAN_RUN_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="slow test, set SULLIVAN_RUN_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def two_surface_diagram() -> Diagram:
    """The two-surface diagram of type (g=3, m=5)."""
    return Diagram.build(Flavor.UNPAR_UNEN, TWO_SURFACE_LAMBDA, TWO_SURFACE_SURFACES)


@pytest.fixture
def zeta2() -> Diagram:
    return class_zeta(2)


@pytest.fixture
def eta2() -> Diagram:
    return class_eta(2)


@pytest.fixture
def omega_terms():
    """ω̃_{2,1}, ω̃_{2,2} with one genus-0 disk per λ-cycle."""
    return tuple(
        Diagram.build(Flavor.PAR_ENUM, text, [(0, 0, f"({c})") for c in text.strip("()").split(")(")])
        for text in (OMEGA_21, OMEGA_22)
    )


@pytest.fixture
def triangle() -> ChainComplex:
    """Boundary of a triangle: vertices a, b, c and edges ab, bc, ca."""
    d1 = SparseMatrix.from_dense(
        [
            [-1, 0, 1],
            [1, -1, 0],
            [0, 1, -1],
        ]
    )
    return ChainComplex([["a", "b", "c"], ["ab", "bc", "ca"]], {1: d1})


@pytest.fixture(scope="session")
def sd_0_2() -> ChainComplex:
    return build_complex(Flavor.UNPAR_UNEN, 0, 2)


@pytest.fixture(scope="session")
def sd_0_3() -> ChainComplex:
    return build_complex(Flavor.UNPAR_UNEN, 0, 3)


@pytest.fixture
def settings(tmp_path) -> Settings:
    return Settings(cache_dir=str(tmp_path / "cache"), threads=1)


@pytest.fixture
def complex_cache(settings) -> ComplexCache:
    return ComplexCache(settings.cache_dir)


@pytest.fixture
def controller(settings, complex_cache) -> SullivanController:
    """Controller with an isolated cache directory."""
    return SullivanController(settings, cache=complex_cache)


@pytest.fixture
def mock_cache() -> MagicMock:
    """A ComplexCache that never holds anything."""
    cache = MagicMock(spec=ComplexCache)
    cache.cache_dir = "/nonexistent"
    cache.cache_load.return_value = None
    cache.cache_store.return_value = "/nonexistent/entry.sqlite"
    return cache
