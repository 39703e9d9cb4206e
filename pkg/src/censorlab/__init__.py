"""Censorship of quantum resources: channels, free sets, censors and the transmission protocol."""

__version__ = "0.1.0"

from .errors import CensorlabError  # noqa: E402

__all__ = ["CensorlabError", "__version__"]
