"""Selects the compiled enumeration core, falling back to numpy.

Set ``GLSTAT_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _enumerate_python as python_core

if os.environ.get("GLSTAT_PURE_PYTHON", "") not in ("", "0"):
    core = python_core
    COMPILED = False
else:
    try:
        from . import _enumerate as core
        COMPILED = True
    except ImportError:  # pragma: no cover
        core = python_core
        COMPILED = False

try:
    from . import _enumerate as compiled_core
except ImportError:  # pragma: no cover
    compiled_core = None

NAME = "compiled" if COMPILED else "python"
