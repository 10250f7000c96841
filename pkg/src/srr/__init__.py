"""Service rate regions of linear storage codes."""

__version__ = "0.1.0"
