"""On-disk cache: bit-exact round trips, version gating, corruption handling."""

import json
import logging
import os

import numpy as np
import pytest

from lfunlab.cache import CACHE_DIR_ENV, CACHE_VERSION, ReportCache, default_cache_dir
from lfunlab.chars import build_character_table


@pytest.fixture
def cache(tmp_path):
    return ReportCache(str(tmp_path / "lab-cache"))


def test_table_roundtrip_bit_exact(cache):
    t = build_character_table(35)
    cache.put_table(t)
    back = cache.get_table(35)
    assert back is not None
    assert back.q == t.q and back.phi == t.phi and back.exponent == t.exponent
    assert np.array_equal(back.value_exponents, t.value_exponents)
    assert np.array_equal(back.conjugate_map, t.conjugate_map)
    assert back.components == t.components
    assert back.principal_index == t.principal_index


def test_table_miss_when_cold(cache):
    assert cache.get_table(35) is None


def test_lvec_roundtrip_bit_exact(cache):
    rng = np.random.default_rng(7)
    vec = rng.standard_normal(24) + 1j * rng.standard_normal(24)
    cache.put_lvec(35, 7, 2, "closed_direct", vec)
    back = cache.get_lvec(35, 7, 2, "closed_direct")
    assert back is not None
    assert back.dtype == np.complex128
    assert np.array_equal(back, vec)  # every float64 survives the text format


def test_lvec_keyed_by_method_and_shift(cache):
    vec = np.arange(4, dtype=np.complex128)
    cache.put_lvec(5, 1, 1, "closed_direct", vec)
    assert cache.get_lvec(5, 1, 1, "closed_lemma1") is None
    assert cache.get_lvec(5, 2, 1, "closed_direct") is None
    assert cache.get_lvec(5, 1, 1, "closed_direct") is not None


def test_version_mismatch_is_silent_miss(cache, tmp_path):
    t = build_character_table(12)
    cache.put_table(t)
    path = cache._table_path(12)
    data = dict(np.load(path, allow_pickle=False))
    meta = json.loads(bytes(data["meta"]).decode("utf-8"))
    meta["version"] = CACHE_VERSION + 1
    data["meta"] = np.frombuffer(json.dumps(meta).encode("utf-8"), dtype=np.uint8)
    np.savez(path.removesuffix(".npz"), **data)
    assert cache.get_table(12) is None
    assert os.path.exists(path)  # future versions are left alone


def test_corrupt_table_discarded_with_warning(cache, caplog):
    t = build_character_table(12)
    cache.put_table(t)
    path = cache._table_path(12)
    with open(path, "wb") as handle:
        handle.write(b"not an npz archive")
    with caplog.at_level(logging.WARNING, logger="lfunlab.cache"):
        assert cache.get_table(12) is None
    assert not os.path.exists(path)
    assert any("discard" in r.message for r in caplog.records)


def test_corrupt_lvec_discarded(cache, caplog):
    vec = np.ones(4, dtype=np.complex128)
    cache.put_lvec(5, 1, 1, "closed_direct", vec)
    path = cache._lvec_path(5, 1, 1, "closed_direct")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("{ broken json")
    with caplog.at_level(logging.WARNING, logger="lfunlab.cache"):
        assert cache.get_lvec(5, 1, 1, "closed_direct") is None
    assert not os.path.exists(path)


def test_re_im_length_mismatch_discarded(cache):
    cache.put_lvec(5, 1, 1, "closed_direct", np.ones(4, dtype=np.complex128))
    path = cache._lvec_path(5, 1, 1, "closed_direct")
    record = json.loads(open(path, encoding="utf-8").read())
    record["im"] = record["im"][:-1]
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(json.dumps(record))
    assert cache.get_lvec(5, 1, 1, "closed_direct") is None
    assert not os.path.exists(path)


def test_wrong_key_fields_are_a_miss(cache):
    cache.put_lvec(5, 1, 1, "closed_direct", np.ones(4, dtype=np.complex128))
    path = cache._lvec_path(5, 1, 1, "closed_direct")
    record = json.loads(open(path, encoding="utf-8").read())
    record["q"] = 7
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(json.dumps(record))
    assert cache.get_lvec(5, 1, 1, "closed_direct") is None


def test_entries_and_clear(cache):
    t = build_character_table(5)
    cache.put_table(t)
    cache.put_lvec(5, 1, 1, "closed_direct", np.ones(4, dtype=np.complex128))
    names = cache.entries()
    assert len(names) == 2
    assert any(n.startswith("table_") for n in names)
    assert any(n.startswith("lvec_") for n in names)
    assert not any(n.endswith(".tmp") for n in names)
    assert cache.clear() == 2
    assert cache.entries() == []


def test_atomic_write_leaves_no_temp_files(cache):
    for q in (5, 7, 12):
        cache.put_table(build_character_table(q))
    leftovers = [n for n in os.listdir(cache.directory) if n.endswith(".tmp")]
    assert leftovers == []


def test_default_dir_env_override(monkeypatch, tmp_path):
    monkeypatch.setenv(CACHE_DIR_ENV, str(tmp_path / "override"))
    assert default_cache_dir() == str(tmp_path / "override")
