"""Service configuration, from environment variables or keyword overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass

POOLINGS = ("mean", "last-token")

ENV_PREFIX = "EMBED_SERVICE_"


@dataclass(frozen=True)
class ServiceConfig:
    """Which backend to serve and how to run it.

    ``model`` is either the built-in ``"hash"`` backend (deterministic
    hashed character n-grams, no downloads) or a transformer model
    identifier, whose token states from the last hidden layer get pooled
    per ``pooling``. The dimension advertised by ``/info`` always equals
    the dimension of every ``/embed`` response.
    """

    model: str = "hash"
    device: str = "cpu"
    pooling: str = "mean"
    max_batch: int = 256
    dimension: int = 384  # hash backend only; transformers define their own
    port: int = 8199

    def __post_init__(self):
        if self.pooling not in POOLINGS:
            raise ValueError(f"pooling must be one of {POOLINGS}, got {self.pooling!r}")
        if self.max_batch < 1:
            raise ValueError("max_batch must be >= 1")
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")


def from_env(**overrides) -> ServiceConfig:
    """Build a config from EMBED_SERVICE_* variables plus overrides."""
    def env(name, default, cast=str):
        raw = os.environ.get(ENV_PREFIX + name)
        return cast(raw) if raw is not None else default

    values = {
        "model": env("MODEL", "hash"),
        "device": env("DEVICE", "cpu"),
        "pooling": env("POOLING", "mean"),
        "max_batch": env("MAX_BATCH", 256, int),
        "dimension": env("DIMENSION", 384, int),
        "port": env("PORT", 8199, int),
    }
    values.update(overrides)
    return ServiceConfig(**values)
