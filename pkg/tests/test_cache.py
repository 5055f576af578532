from __future__ import annotations

from pathlib import Path

from cwilf import brute, cache
from cwilf.config import get_config, use_config


def test_cache_round_trip(tmp_path):
    with use_config(get_config().with_(cache_dir=tmp_path)):
        first = brute.tally(6, ("des", "inv"), avoid="132")
        files = list(Path(tmp_path).glob("tally-*.json"))
        assert len(files) == 1
        assert brute.tally(6, ("des", "inv"), avoid="132") == first


def test_corrupted_entry_is_recomputed(tmp_path):
    with use_config(get_config().with_(cache_dir=tmp_path)):
        want = brute.tally(5, ("des",), avoid="123")
        (entry,) = Path(tmp_path).glob("tally-*.json")
        entry.write_text(entry.read_text().replace("43", "44"))
        assert cache.load(entry) is None
        assert brute.tally(5, ("des",), avoid="123") == want
        entry.write_text("not json")
        assert brute.tally(5, ("des",), avoid="123") == want


def test_keys_depend_on_parameters():
    a = cache.entry_key("tally", {"n": 5})
    assert a == cache.entry_key("tally", {"n": 5})
    assert a != cache.entry_key("tally", {"n": 6})
    assert a != cache.entry_key("select", {"n": 5})
