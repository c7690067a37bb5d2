"""HTTP service wrapping the compression and rendering pipeline."""

from .app import create_app

__all__ = ["create_app"]
