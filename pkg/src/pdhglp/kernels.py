"""Kernel backend selection.

Prefers the compiled extension ``pdhglp._core``; falls back to the numpy
/scipy implementation when the extension is missing.  Set the environment
variable PDHGLP_PURE_PYTHON=1 to force the fallback (used by the kernel
benchmark and by tests that exercise both paths).
"""

import os

if os.environ.get("PDHGLP_PURE_PYTHON"):
    from . import _core_py as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _core_py as _impl

BACKEND = _impl.backend_name()

csr_matvec = _impl.csr_matvec
csr_matvec_transpose = _impl.csr_matvec_transpose
pdhg_sweep = _impl.pdhg_sweep
