"""Pick the compiled kernels when available; EUROHOOPS_PURE=1 forces numpy."""
import os

from . import _kernels_py as python_kernels

compiled_kernels = None
if not os.environ.get("EUROHOOPS_PURE"):
    try:
        from . import _kernels as compiled_kernels
    except ImportError:  # extension not built
        compiled_kernels = None

kernels = compiled_kernels if compiled_kernels is not None else python_kernels
BACKEND = "compiled" if compiled_kernels is not None else "python"
