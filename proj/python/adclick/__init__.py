"""Multi-click sponsored-search click model.

Thin package wrapper around the compiled extension: session-log IO, one-pass
counting estimators, exact sequence enumeration, forward-cascade baselines,
evaluation metrics, and the synthetic corpus generator.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__doc__ = _core_doc
