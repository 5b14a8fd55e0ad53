"""Backend selection for the dense state-vector kernels.

The compiled extension is used when it imports cleanly; otherwise the numpy
reference implementation takes over.  Setting ``VBSLAB_FORCE_PYTHON=1``
forces the fallback.
"""

import os

from . import _kernels_py as python_impl

compiled_impl = None
if os.environ.get("VBSLAB_FORCE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled_impl
    except ImportError:  # extension not built
        compiled_impl = None

impl = compiled_impl if compiled_impl is not None else python_impl
BACKEND = "cython" if impl is compiled_impl and compiled_impl is not None else "python"

apply_two_site = impl.apply_two_site
matrix_unit_expectations = impl.matrix_unit_expectations
