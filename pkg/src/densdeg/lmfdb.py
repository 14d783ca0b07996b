"""Optional fetcher for curve models from the LMFDB HTTP API, with a cache.

Network access is opt-in (``online=True``); everything else works offline
from the on-disk cache or the shipped fixture corpus.  Cache layout: one
JSON file per label, named by a hash of the label, written atomically under
an exclusive file lock so concurrent CLI invocations do not corrupt it.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Optional

from filelock import FileLock

CACHE_ENV = "DENSDEG_CACHE_DIR"
_API = "https://www.lmfdb.org/api"
_TIMEOUT = 20


class FetchError(RuntimeError):
    pass


class OfflineError(FetchError):
    """No cached or shipped data, and network access was not allowed."""


def cache_dir(override: Optional[str] = None) -> Path:
    if override:
        return Path(override)
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "densdeg"


def _cache_path(label: str, directory: Path) -> Path:
    digest = hashlib.sha256(label.encode("utf-8")).hexdigest()[:20]
    return directory / ("%s.json" % digest)


def cache_read(label: str, directory: Path) -> Optional[dict]:
    path = _cache_path(label, directory)
    if not path.exists():
        return None
    entry = json.loads(path.read_text())
    if entry.get("label") != label:
        raise FetchError("cache file %s does not carry label %r" % (path, label))
    return entry["model"]


def cache_write(label: str, model: dict, directory: Path) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    path = _cache_path(label, directory)
    lock = FileLock(str(directory / ".densdeg.lock"))
    with lock:
        fd, tmp = tempfile.mkstemp(dir=str(directory), suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump({"label": label, "model": model}, fh,
                          sort_keys=True, separators=(",", ":"))
                fh.write("\n")
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)
    return path


def _shipped_model(label: str) -> Optional[dict]:
    from . import fixtures
    try:
        return dict(fixtures.curve_record(label)["model"])
    except KeyError:
        return None


def _looks_elliptic(label: str) -> bool:
    # ell. labels: 11.a3 / 3872.f4; genus-2 labels: 249.a.6723.1
    return label.count(".") == 1


def _fetch_online(label: str) -> dict:
    import requests

    if _looks_elliptic(label):
        url = "%s/ec_curvedata/?label=%s&_format=json" % (_API, label)
        payload = requests.get(url, timeout=_TIMEOUT).json()
        rows = payload.get("data", [])
        if not rows:
            raise FetchError("no LMFDB elliptic curve with label %r" % label)
        return {"ainvs": [int(a) for a in rows[0]["ainvs"]]}
    url = "%s/g2c_curvedata/?label=%s&_format=json" % (_API, label)
    payload = requests.get(url, timeout=_TIMEOUT).json()
    rows = payload.get("data", [])
    if not rows:
        raise FetchError("no LMFDB genus-2 curve with label %r" % label)
    eqn = rows[0].get("eqn")
    if isinstance(eqn, str):
        eqn = json.loads(eqn)
    f_coeffs, h_coeffs = eqn
    return {"f": [int(a) for a in f_coeffs], "h": [int(a) for a in h_coeffs]}


def fetch(label: str, cache: Optional[str] = None, online: bool = False) -> dict:
    """Resolve a label to a model JSON: cache, then network, then fixtures.

    With ``online=False`` the order is cache -> shipped fixtures -> error;
    with ``online=True`` a network failure still falls back to the cache and
    fixtures before raising.
    """
    directory = cache_dir(cache)
    cached = cache_read(label, directory)
    if cached is not None:
        return cached
    if online:
        try:
            model = _fetch_online(label)
        except FetchError:
            raise
        except Exception as exc:
            shipped = _shipped_model(label)
            if shipped is not None:
                return shipped
            raise FetchError("network fetch failed for %r: %s" % (label, exc))
        cache_write(label, model, directory)
        return model
    shipped = _shipped_model(label)
    if shipped is not None:
        return shipped
    raise OfflineError(
        "label %r is not cached or shipped; re-run with --online" % label)
