"""HTTP service and command-line interface."""

from .app import create_app

__all__ = ["create_app"]
