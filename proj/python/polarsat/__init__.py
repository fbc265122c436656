"""Polarized random k-SAT: generator, solvers, bounds and experiment harness."""

from polarsat._core import *  # noqa: F401,F403
from polarsat._core import __version__  # noqa: F401
