"""HTTP embedding service with pluggable backends."""

from .app import create_app
from .backends import BackendLoadError, HashBackend, TransformerBackend, load_backend
from .config import ServiceConfig, from_env

__version__ = "0.1.0"

__all__ = ["BackendLoadError", "HashBackend", "ServiceConfig", "TransformerBackend",
           "create_app", "from_env", "load_backend"]
