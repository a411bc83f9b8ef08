"""Closed-form low-rank solvers and subspace clustering."""

from ._lrsc import *  # noqa: F401,F403
from ._lrsc import (
    AssumptionViolated,
    ConfigError,
    Infeasible,
    InvalidInput,
    LrscError,
    NotSupported,
    OracleError,
    ParseError,
)

__version__ = "0.1.0"
