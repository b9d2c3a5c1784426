"""Embedding backends: a dependency-free hash baseline and transformers.

Both expose ``dimension``, ``name``, and ``encode(texts) -> float32
matrix`` and must be deterministic for a fixed configuration. Inference
is serialized by the caller, so backends need not be thread-safe
themselves.
"""

from __future__ import annotations

import zlib
from typing import Sequence

import numpy as np

from .config import ServiceConfig


class BackendLoadError(RuntimeError):
    """The configured backend could not be constructed."""


class HashBackend:
    """Hashed character trigram vectors, L2-normalized.

    Self-contained stand-in for a real model: deterministic, instant to
    load, and similar surface forms land near each other. Useful for
    tests, demos, and environments without model weights.
    """

    def __init__(self, dimension: int):
        self.dimension = dimension
        self.name = f"hash-trigram-{dimension}"

    def encode(self, texts: Sequence[str]) -> np.ndarray:
        out = np.zeros((len(texts), self.dimension), dtype=np.float32)
        for i, text in enumerate(texts):
            padded = "\x02" + text.strip().lower() + "\x03"
            grams = [padded] if len(padded) <= 3 else [
                padded[j:j + 3] for j in range(len(padded) - 2)]
            row = out[i]
            for gram in grams:
                row[zlib.crc32(b"embed-service:" + gram.encode("utf-8")) % self.dimension] += 1.0
            norm = np.linalg.norm(row)
            if norm > 0:
                row /= norm
        return out


class TransformerBackend:
    """Last-hidden-layer states of a transformer, pooled to one vector.

    ``pooling="mean"`` averages token states under the attention mask;
    ``pooling="last-token"`` takes the final non-padding position.
    Weights load once at construction; inference runs without gradients
    in eval mode, so identical input yields identical output.
    """

    def __init__(self, model_id: str, device: str, pooling: str):
        try:
            import torch
            from transformers import AutoModel, AutoTokenizer
        except ImportError as exc:
            raise BackendLoadError(
                f"transformers/torch not installed; cannot serve {model_id!r}"
            ) from exc
        try:
            self._tokenizer = AutoTokenizer.from_pretrained(model_id)
            self._model = AutoModel.from_pretrained(model_id).to(device)
        except Exception as exc:
            raise BackendLoadError(f"cannot load model {model_id!r}: {exc}") from exc
        self._model.eval()
        self._torch = torch
        self._device = device
        self._pooling = pooling
        self.dimension = int(self._model.config.hidden_size)
        self.name = model_id
        if self._tokenizer.pad_token is None and self._tokenizer.eos_token is not None:
            self._tokenizer.pad_token = self._tokenizer.eos_token

    def encode(self, texts: Sequence[str]) -> np.ndarray:
        torch = self._torch
        encoded = self._tokenizer(list(texts), padding=True, truncation=True,
                                  return_tensors="pt").to(self._device)
        with torch.no_grad():
            states = self._model(**encoded).last_hidden_state
        mask = encoded["attention_mask"].unsqueeze(-1)
        if self._pooling == "mean":
            pooled = (states * mask).sum(dim=1) / mask.sum(dim=1).clamp(min=1)
        else:
            last = encoded["attention_mask"].sum(dim=1) - 1
            pooled = states[torch.arange(states.shape[0]), last]
        return pooled.float().cpu().numpy()


def load_backend(config: ServiceConfig):
    if config.model == "hash":
        return HashBackend(config.dimension)
    return TransformerBackend(config.model, config.device, config.pooling)
