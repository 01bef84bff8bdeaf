"""Content-addressed result cache.

Each entry is a JSON file named by the SHA-256 of its key.  The file stores the
key, the payload and a digest of the payload; a digest mismatch is reported as
corruption.  Writes go to a temporary file that is renamed into place.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Callable

ENV_VAR = "ASYMCHAR_CACHE_DIR"
DEFAULT_DIR = Path.home() / ".cache" / "asymchar"


class CacheError(RuntimeError):
    pass


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class Cache:
    def __init__(self, directory: str | os.PathLike | None = None, enabled: bool = True):
        env = os.environ.get(ENV_VAR)
        self.directory = Path(env) if env else Path(directory) if directory else DEFAULT_DIR
        self.enabled = enabled
        self.hits = 0
        self.misses = 0

    def path_for(self, key: dict) -> Path:
        return self.directory / f"{_digest(_canonical(key))}.json"

    def get(self, key: dict) -> Any | None:
        if not self.enabled:
            return None
        path = self.path_for(key)
        if not path.exists():
            return None
        try:
            entry = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise CacheError(f"unreadable cache entry {path}") from exc
        payload = entry.get("payload")
        if entry.get("key") != key or entry.get("digest") != _digest(_canonical(payload)):
            raise CacheError(f"corrupted cache entry {path}")
        return payload

    def put(self, key: dict, payload: Any) -> None:
        if not self.enabled:
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        entry = {"key": key, "payload": payload, "digest": _digest(_canonical(payload))}
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(_canonical(entry))
        os.replace(tmp, self.path_for(key))

    def cached(self, key: dict, compute: Callable[[], Any]) -> Any:
        """Payload for ``key``, computing and storing it on a miss.  Payloads must be JSON data."""
        hit = self.get(key)
        if hit is not None:
            self.hits += 1
            return hit
        self.misses += 1
        payload = json.loads(_canonical(compute()))
        self.put(key, payload)
        return payload
