"""User-facing CLI strings."""

from templates.messages import Messages

__all__ = ["Messages"]
