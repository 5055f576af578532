"""Content-addressed on-disk cache for brute-force tables.

Each entry is a JSON file named by the SHA-256 of its key; the file stores the
payload together with a digest of the payload.  A digest mismatch or an
unreadable file counts as a miss, so a corrupted cache only costs time.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Callable

from cwilf.config import CODE_VERSION, get_config

log = logging.getLogger(__name__)


def _canon(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def entry_key(op: str, params: dict) -> str:
    return hashlib.sha256(_canon({"op": op, "params": params, "v": CODE_VERSION}).encode()).hexdigest()


def load(path: Path) -> Any | None:
    try:
        blob = json.loads(path.read_text())
        payload = blob["payload"]
        if hashlib.sha256(_canon(payload).encode()).hexdigest() != blob["sha256"]:
            log.warning("cache entry %s failed verification; recomputing", path.name)
            return None
        return payload
    except (OSError, ValueError, KeyError, TypeError):
        return None


def store(path: Path, payload: Any) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    blob = {"sha256": hashlib.sha256(_canon(payload).encode()).hexdigest(), "payload": payload}
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(_canon(blob))
    os.replace(tmp, path)


def cached(op: str, params: dict, compute: Callable[[], Any]) -> Any:
    """Return compute() (JSON-serializable), memoized under CWILF_CACHE if set."""
    root = get_config().cache_dir
    if root is None:
        return compute()
    path = Path(root) / f"{op}-{entry_key(op, params)[:32]}.json"
    hit = load(path)
    if hit is not None:
        return hit
    payload = compute()
    store(path, payload)
    return payload
