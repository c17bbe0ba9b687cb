import os

import pytest
from sqlalchemy import create_engine, text

from sullivan.cache import ComplexCache, payload_checksum
from sullivan.complex import ChainComplex, SparseMatrix
from sullivan.exceptions import CacheError
from sullivan.models import Flavor


def _tamper(path: str, statement: str) -> None:
    engine = create_engine(f"sqlite:///{path}")
    with engine.begin() as conn:
        conn.execute(text(statement))
    engine.dispose()


def test_store_and_load(complex_cache, sd_0_2):
    path = complex_cache.cache_store(sd_0_2)
    assert os.path.exists(path)
    assert path.endswith("unpar-unen_g0_m2.sqlite")
    loaded = complex_cache.cache_load(Flavor.UNPAR_UNEN, 0, 2)
    assert loaded.component == (Flavor.UNPAR_UNEN, 0, 2)
    assert loaded.bases == sd_0_2.bases
    for k in range(1, len(sd_0_2.bases)):
        assert loaded.boundary_matrix(k) == sd_0_2.boundary_matrix(k)
    assert (complex_cache.stores, complex_cache.hits, complex_cache.misses) == (1, 1, 0)


def test_missing_entry_is_a_miss(complex_cache):
    assert complex_cache.cache_load(Flavor.PAR_UNEN, 0, 1) is None
    assert complex_cache.misses == 1
    assert not complex_cache.exists(Flavor.PAR_UNEN, 0, 1)


def test_store_replaces_previous_entry(complex_cache, sd_0_2):
    complex_cache.cache_store(sd_0_2)
    complex_cache.cache_store(sd_0_2)
    (entry,) = complex_cache.list_entries()
    assert entry["counts"] == [1, 2, 1]
    assert (entry["flavor"], entry["g"], entry["m"]) == ("unpar-unen", 0, 2)


def test_only_components_are_cached(complex_cache, triangle):
    with pytest.raises(CacheError):
        complex_cache.cache_store(triangle)


def test_checksum_mismatch(complex_cache, sd_0_2):
    path = complex_cache.cache_store(sd_0_2)
    _tamper(path, "UPDATE complex_header SET checksum='bad'")
    with pytest.raises(CacheError, match="checksum"):
        complex_cache.cache_load(Flavor.UNPAR_UNEN, 0, 2)


def test_tampered_coefficient_is_detected(complex_cache, sd_0_2):
    path = complex_cache.cache_store(sd_0_2)
    _tamper(path, "UPDATE complex_boundary_entry SET coefficient='7'")
    with pytest.raises(CacheError):
        complex_cache.cache_load(Flavor.UNPAR_UNEN, 0, 2)


def test_format_version_mismatch(complex_cache, sd_0_2):
    path = complex_cache.cache_store(sd_0_2)
    _tamper(path, "UPDATE complex_header SET format_version=99")
    with pytest.raises(CacheError, match="format version 99"):
        complex_cache.cache_load(Flavor.UNPAR_UNEN, 0, 2)


def test_clear(complex_cache, sd_0_2):
    complex_cache.cache_store(sd_0_2)
    removed = complex_cache.clear(Flavor.UNPAR_UNEN, 0, 2)
    assert len(removed) == 1
    assert complex_cache.list_entries() == []
    assert complex_cache.clear() == []


def test_empty_cache_dir(tmp_path):
    cache = ComplexCache(str(tmp_path / "absent"))
    assert cache.list_entries() == []
    assert cache.clear() == []


def test_checksum_depends_on_payload():
    a = payload_checksum("unpar-unen", 0, 2, [["x"]], [])
    b = payload_checksum("unpar-unen", 0, 2, [["y"]], [])
    assert a != b
    assert a == payload_checksum("unpar-unen", 0, 2, [["x"]], [])
