import json

import pytest

from asymchar.cache import ENV_VAR, Cache, CacheError


def test_round_trip(tmp_path):
    cache = Cache(tmp_path)
    calls = []

    def compute():
        calls.append(1)
        return {"value": 0.1 + 0.2, "list": [1, 2]}

    a = cache.cached({"cmd": "x", "n": 1}, compute)
    b = cache.cached({"cmd": "x", "n": 1}, compute)
    assert a == b and len(calls) == 1
    assert (cache.hits, cache.misses) == (1, 1)


def test_disabled(tmp_path):
    cache = Cache(tmp_path, enabled=False)
    cache.cached({"k": 1}, lambda: 1)
    assert not list(tmp_path.iterdir())


def test_corruption_detected(tmp_path):
    cache = Cache(tmp_path)
    key = {"cmd": "y"}
    cache.put(key, {"v": 1})
    path = cache.path_for(key)
    entry = json.loads(path.read_text())
    entry["payload"]["v"] = 2
    path.write_text(json.dumps(entry))
    with pytest.raises(CacheError):
        cache.get(key)
    path.write_text("{not json")
    with pytest.raises(CacheError):
        cache.get(key)


def test_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "env"))
    cache = Cache(tmp_path / "arg")
    cache.put({"a": 1}, 3)
    assert (tmp_path / "env").exists() and not (tmp_path / "arg").exists()
