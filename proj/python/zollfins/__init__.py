"""Zoll surfaces of revolution and their K = 1 Finsler metrics."""

from ._zollfins import *  # noqa: F401,F403
from ._zollfins import ZollProfile, FinslerMetric, ConvexityError, ChartExitError  # noqa: F401

__version__ = "0.1.0"
