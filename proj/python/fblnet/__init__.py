"""Uplink rate-outage bounds and coding-rate meta distributions in the
finite-blocklength regime, backed by the C++ core."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__doc__ = _core_doc
