"""Semi-analytic solutions of the 1D pressureless Euler-Poisson system with relaxation."""

from ._core import *  # noqa: F401,F403
from ._core import Error

__all__ = [name for name in dir() if not name.startswith("_")] + ["Error"]
