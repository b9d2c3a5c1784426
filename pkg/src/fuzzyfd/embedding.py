"""Fixed-dimension vectors for cell values, with pluggable providers.

Three providers share one contract (deterministic vectors of a constant
dimension, cached per exact input string):

* :class:`NgramEmbedder` hashes character n-grams; it needs no model or
  network and is the default for tests and benchmarks.
* :class:`DictionaryEmbedder` maps hand-listed synonym groups onto shared
  one-hot vectors; it is how fixtures pin down semantic matches that no
  surface embedder can guarantee.
* :class:`RemoteEmbedder` posts batches to an HTTP service exposing
  ``POST /embed`` and lets a real language model do the work.
"""

from __future__ import annotations

import json
import threading
import urllib.error
import urllib.request
import zlib
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Sequence

import numpy as np

from .errors import EmbeddingError, RemoteEmbeddingError


def cosine_distance(u: np.ndarray, v: np.ndarray) -> float:
    """1 - cosine similarity, clamped to [0, 2].

    A zero-norm vector carries no direction, so its distance to anything
    is defined as the maximum 2.0 (it can never match).
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 2.0
    d = 1.0 - float(np.dot(u, v)) / (nu * nv)
    return min(max(d, 0.0), 2.0)


class EmbeddingProvider:
    """Base provider: validation, per-string cache, thread safety.

    Subclasses implement :meth:`_embed_uncached` for the strings missing
    from the cache. Identical input text always yields the identical
    vector within one provider instance.
    """

    def __init__(self, dimension: int):
        self._dimension = dimension
        self._cache: dict[str, np.ndarray] = {}
        self._lock = threading.Lock()

    @property
    def dimension(self) -> int:
        return self._dimension

    @property
    def cache_size(self) -> int:
        return len(self._cache)

    def _embed_uncached(self, texts: Sequence[str]) -> np.ndarray:
        raise NotImplementedError

    def embed_batch(self, texts: Sequence[str]) -> list[np.ndarray]:
        """One vector per text; repeat calls are served from the cache."""
        if not texts:
            raise ValueError("texts must be non-empty")
        for t in texts:
            if not t.strip():
                raise ValueError("texts must be non-empty after trimming")
        with self._lock:
            missing = list(dict.fromkeys(t for t in texts if t not in self._cache))
        if missing:
            vectors = self._embed_uncached(missing)
            if vectors.shape != (len(missing), self._dimension):
                raise EmbeddingError(
                    f"provider returned shape {vectors.shape}, "
                    f"expected ({len(missing)}, {self._dimension})"
                )
            with self._lock:
                for t, vec in zip(missing, vectors):
                    self._cache.setdefault(t, vec)
        with self._lock:
            return [self._cache[t] for t in texts]

    def embed(self, text: str) -> np.ndarray:
        return self.embed_batch([text])[0]


class NgramEmbedder(EmbeddingProvider):
    """Hashed character n-gram vectors, L2-normalized.

    Case is folded and the text is wrapped in boundary markers before
    n-grams are taken, so typos and casing differences land near the
    original value. The hash seed is fixed: vectors are stable across
    runs and platforms.
    """

    def __init__(self, n: int = 3, dimension: int = 256, seed: int = 13):
        if n < 1:
            raise ValueError("n must be >= 1")
        super().__init__(dimension)
        self.n = n
        self._salt = f"ngram-{seed}-".encode("utf-8")

    def describe(self) -> str:
        return f"ngram(n={self.n}, d={self.dimension})"

    def _grams(self, text: str) -> list[str]:
        padded = "\x02" + text.strip().lower() + "\x03"
        if len(padded) <= self.n:
            return [padded]
        return [padded[i:i + self.n] for i in range(len(padded) - self.n + 1)]

    def _embed_uncached(self, texts: Sequence[str]) -> np.ndarray:
        out = np.zeros((len(texts), self.dimension), dtype=np.float32)
        for i, text in enumerate(texts):
            row = out[i]
            for gram in self._grams(text):
                bucket = zlib.crc32(self._salt + gram.encode("utf-8")) % self.dimension
                row[bucket] += 1.0
            norm = np.linalg.norm(row)
            if norm > 0:
                row /= norm
        return out


class DictionaryEmbedder(EmbeddingProvider):
    """Synonym groups mapped to shared one-hot vectors.

    Members of one group embed identically (distance 0); values from
    different groups are orthogonal (distance exactly 1). Values absent
    from every group get their own private group. Intended for fixtures
    and demos where the desired matches are known.
    """

    def __init__(self, groups: Iterable[Iterable[str]], dimension: int = 1024):
        super().__init__(dimension)
        self._key_of: dict[str, int] = {}
        self._next_key = 0
        for group in groups:
            members = list(group)
            if not members:
                continue
            key = self._allocate_key()
            for member in members:
                if member in self._key_of and self._key_of[member] != key:
                    raise EmbeddingError(f"value {member!r} appears in two synonym groups")
                self._key_of[member] = key

    @classmethod
    def from_json_file(cls, path, dimension: int = 1024) -> "DictionaryEmbedder":
        """Load groups from a JSON list of lists of strings."""
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, list) or not all(isinstance(g, list) for g in raw):
            raise EmbeddingError(f"{path}: expected a JSON list of synonym groups")
        return cls(raw, dimension=dimension)

    def describe(self) -> str:
        return f"dictionary({len(self._key_of)} listed values, d={self.dimension})"

    def _allocate_key(self) -> int:
        if self._next_key >= self.dimension:
            raise EmbeddingError(
                f"more than {self.dimension} distinct groups; raise the dimension"
            )
        key = self._next_key
        self._next_key += 1
        return key

    def _embed_uncached(self, texts: Sequence[str]) -> np.ndarray:
        out = np.zeros((len(texts), self.dimension), dtype=np.float32)
        for i, text in enumerate(texts):
            key = self._key_of.get(text)
            if key is None:
                key = self._allocate_key()
                self._key_of[text] = key
            out[i, key] = 1.0
        return out


class RemoteEmbedder(EmbeddingProvider):
    """Client for an HTTP embedding service.

    Protocol: ``POST <url>/embed`` with ``{"texts": [...]}`` returning
    ``{"embeddings": [[...], ...], "dim": d}``. Batches are sent with a
    bounded number in flight; transport failures are retried and finally
    surface as a retriable :class:`RemoteEmbeddingError` carrying the
    failed texts. A dimension change mid-run is a fatal configuration
    error.
    """

    def __init__(self, url: str, *, timeout: float = 30.0, retries: int = 2,
                 batch_size: int = 64, parallelism: int = 4):
        super().__init__(dimension=0)  # learned from the first response
        self.url = url.rstrip("/")
        self.timeout = timeout
        self.retries = retries
        self.batch_size = batch_size
        self.parallelism = parallelism

    def describe(self) -> str:
        return f"remote({self.url})"

    def _post_batch(self, batch: list[str]) -> np.ndarray:
        payload = json.dumps({"texts": batch}).encode("utf-8")
        request = urllib.request.Request(
            self.url + "/embed", data=payload,
            headers={"Content-Type": "application/json"},
        )
        last_exc: Exception | None = None
        for _attempt in range(self.retries + 1):
            try:
                with urllib.request.urlopen(request, timeout=self.timeout) as resp:
                    body = json.loads(resp.read().decode("utf-8"))
                vectors = np.asarray(body["embeddings"], dtype=np.float32)
                dim = int(body.get("dim", vectors.shape[1] if vectors.ndim == 2 else 0))
                if vectors.ndim != 2 or vectors.shape != (len(batch), dim):
                    raise RemoteEmbeddingError(
                        f"service returned {vectors.shape} for {len(batch)} texts",
                        retriable=False, failed_texts=batch,
                    )
                if self._dimension == 0:
                    self._dimension = dim
                elif dim != self._dimension:
                    raise RemoteEmbeddingError(
                        f"service dimension changed from {self._dimension} to {dim}",
                        retriable=False, failed_texts=batch,
                    )
                return vectors
            except RemoteEmbeddingError:
                raise
            except (urllib.error.URLError, TimeoutError, OSError, ValueError, KeyError) as exc:
                last_exc = exc
        raise RemoteEmbeddingError(
            f"embedding service {self.url} unreachable after "
            f"{self.retries + 1} attempts: {last_exc}",
            retriable=True, failed_texts=batch,
        )

    def _embed_uncached(self, texts: Sequence[str]) -> np.ndarray:
        batches = [list(texts[i:i + self.batch_size])
                   for i in range(0, len(texts), self.batch_size)]
        if len(batches) == 1:
            results = [self._post_batch(batches[0])]
        else:
            with ThreadPoolExecutor(max_workers=self.parallelism) as pool:
                results = list(pool.map(self._post_batch, batches))
        return np.vstack(results)


def stack_vectors(vectors: Sequence[np.ndarray], dtype=np.float64) -> np.ndarray:
    """Stack provider vectors into one matrix for distance math."""
    return np.vstack([np.asarray(v, dtype=dtype) for v in vectors])


def cosine_distance_matrix(left: Sequence[np.ndarray], right: Sequence[np.ndarray],
                           dtype=np.float64) -> np.ndarray:
    """All pairwise cosine distances, rows = left, columns = right.

    Zero-norm vectors get distance 2.0 against everything, matching
    :func:`cosine_distance`. ``dtype=np.float32`` halves the cost on
    large instances at ~1e-6 precision, plenty for threshold gating.
    """
    a = stack_vectors(left, dtype)
    b = stack_vectors(right, dtype)
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"dimension mismatch: {a.shape[1]} vs {b.shape[1]}")
    na = np.linalg.norm(a, axis=1)
    nb = np.linalg.norm(b, axis=1)
    zero_a = na == 0.0
    zero_b = nb == 0.0
    na[zero_a] = 1.0
    nb[zero_b] = 1.0
    dist = 1.0 - (a / na[:, None]) @ (b / nb[:, None]).T
    dist[zero_a, :] = 2.0
    dist[:, zero_b] = 2.0
    return np.clip(dist, 0.0, 2.0)
