"""Content-addressed on-disk store for computed subspaces.

Entries are JSON files named by the SHA-256 of a canonical key; each file
carries a checksum of its payload.  A missing or corrupt entry is a miss:
the caller recomputes and the entry is rewritten.  Writes go through a
temporary file and ``os.replace`` so readers never see a partial file.
"""

import hashlib
import json
import logging
import os
import tempfile

from .linalg import subspace_from_json, subspace_to_json

log = logging.getLogger(__name__)

ENV_VAR = "BMW_DUALITY_CACHE"
FORMAT = 1


def cache_key(kind, m, n, f, field):
    desc = field if isinstance(field, str) else field.descriptor
    text = json.dumps({"format": FORMAT, "kind": kind, "m": m, "n": n, "f": f, "field": desc},
                      sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


class Cache:
    def __init__(self, root):
        self.root = os.fspath(root)
        self.hits = 0
        self.misses = 0
        self.corrupt = 0

    @classmethod
    def from_env(cls, explicit=None):
        root = explicit or os.environ.get(ENV_VAR)
        return cls(root) if root else None

    def path(self, key):
        return os.path.join(self.root, key[:2], key + ".json")

    def load(self, key):
        p = self.path(key)
        try:
            with open(p, encoding="utf-8") as fh:
                doc = json.load(fh)
            payload = doc["payload"]
            if hashlib.sha256(payload.encode()).hexdigest() != doc["checksum"]:
                raise ValueError("checksum mismatch")
            sub = subspace_from_json(payload)
        except FileNotFoundError:
            self.misses += 1
            return None
        except (ValueError, KeyError, TypeError, AssertionError) as exc:
            log.warning("cache entry %s is corrupt (%s); recomputing", p, exc)
            self.corrupt += 1
            self.misses += 1
            return None
        self.hits += 1
        return sub

    def store(self, key, sub):
        payload = subspace_to_json(sub)
        doc = {"checksum": hashlib.sha256(payload.encode()).hexdigest(), "payload": payload}
        p = self.path(key)
        os.makedirs(os.path.dirname(p), exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(p), suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(doc, fh, sort_keys=True)
            os.replace(tmp, p)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def get_or_compute(self, kind, ctx, f, compute):
        key = cache_key(kind, ctx.m, ctx.n, f, ctx.field)
        sub = self.load(key)
        if sub is None:
            sub = compute()
            self.store(key, sub)
        return sub

    def stats(self):
        return {"hits": self.hits, "misses": self.misses, "corrupt": self.corrupt}


def prime_context(cache, ctx, fs, algebra=True):
    """Load (or compute and store) the expensive subspaces of ``ctx`` into its memo."""
    from . import schur_weyl as sw

    if cache is None:
        return
    if algebra:
        ctx._cache["algebra"] = cache.get_or_compute("algebra_closure", ctx, None,
                                                     lambda: sw.image_algebra(ctx))
    for f in fs:
        ctx._cache[("W", f)] = cache.get_or_compute("W", ctx, f, lambda: sw.w_subspace(ctx, f))
        ctx._cache[("HT", f)] = cache.get_or_compute("HT", ctx, f,
                                                     lambda: sw.harmonic_tensors(ctx, f))
