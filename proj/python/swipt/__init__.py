"""SWIPT MISO simulator: special functions, closed-form outage probabilities,
Monte-Carlo estimators and experiment sweeps."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"
