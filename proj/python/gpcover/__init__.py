"""Variance-guaranteed sampling plans for Gaussian-process fields."""

from ._gpcover import *  # noqa: F401,F403
from ._gpcover import GpcoverError, run_cli

__all__ = [name for name in dir() if not name.startswith("_")]
