"""Selects the compiled search kernel, falling back to the Python twin.

Set ``V2VALLOC_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernel_py

BACKEND = "python"
search = _kernel_py.search
random_construct = _kernel_py.random_construct

if not os.environ.get("V2VALLOC_PURE_PYTHON"):
    try:
        from . import _kernel  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        search = _kernel.search
        random_construct = _kernel.random_construct

STATUS_EXHAUSTED = _kernel_py.STATUS_EXHAUSTED
STATUS_NODE_LIMIT = _kernel_py.STATUS_NODE_LIMIT
STATUS_TIME_LIMIT = _kernel_py.STATUS_TIME_LIMIT
