"""Gabor filter-bank features + kernel entropy component analysis."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
