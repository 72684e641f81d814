"""Frank-Wolfe solver backend selection.

Imports the compiled kernel when available; set ``LINBAI_PURE_PYTHON=1``
to force the numpy fallback (used by the benchmark script).
"""

import os

from . import fwpy

if os.environ.get("LINBAI_PURE_PYTHON"):
    minimax_design = fwpy.minimax_design
    HAVE_COMPILED_CORE = False
else:
    try:
        from ._fwcore import minimax_design

        HAVE_COMPILED_CORE = True
    except ImportError:
        minimax_design = fwpy.minimax_design
        HAVE_COMPILED_CORE = False

__all__ = ["minimax_design", "HAVE_COMPILED_CORE", "fwpy"]
