"""Elias omega codes, Gibbs prime priors, multiplicative chains and codelength fits."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
