"""Select the partition refinement backend.

The compiled extension is used when it was built; setting the environment
variable ``PGAKIT_PURE_PYTHON=1`` forces the pure-Python implementation.
"""

import os

from . import _refine_py

if os.environ.get("PGAKIT_PURE_PYTHON"):
    refine_partition = _refine_py.refine_partition
    BACKEND = "python"
else:
    try:
        from ._refine import refine_partition
        BACKEND = "cython"
    except ImportError:
        refine_partition = _refine_py.refine_partition
        BACKEND = "python"
