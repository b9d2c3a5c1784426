"""Run the service: ``python -m embed_service`` or the console script."""

from __future__ import annotations

import argparse
import logging

import uvicorn

from .app import create_app
from .config import POOLINGS, from_env


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="embed-service",
        description="HTTP embedding service (EMBED_SERVICE_* env vars set the defaults)",
    )
    parser.add_argument("--model", default=None,
                        help="'hash' (built-in, default) or a transformer model id")
    parser.add_argument("--device", default=None, help="cpu or a accelerator id")
    parser.add_argument("--pooling", default=None, choices=POOLINGS)
    parser.add_argument("--max-batch", type=int, default=None)
    parser.add_argument("--dimension", type=int, default=None,
                        help="vector size of the hash backend")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=None)
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    overrides = {k: v for k, v in (
        ("model", args.model), ("device", args.device), ("pooling", args.pooling),
        ("max_batch", args.max_batch), ("dimension", args.dimension),
        ("port", args.port),
    ) if v is not None}
    config = from_env(**overrides)
    uvicorn.run(create_app(config), host=args.host, port=config.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
