"""Kernel backend selection.

The compiled extension is preferred when it imports cleanly; the numpy
fallback is always available. Override with MASSFILL_BACKEND=python|compiled.
Both backends satisfy identical numerical contracts (see _kernels_np), so the
choice affects speed, not results.
"""

import os

from . import _kernels_np

_FORCED = os.environ.get("MASSFILL_BACKEND", "auto").lower()

_impl = None
_name = None

if _FORCED in ("auto", "compiled"):
    try:
        from . import _kernels_c as _impl

        _name = "compiled"
    except ImportError:
        if _FORCED == "compiled":
            raise ImportError(
                "MASSFILL_BACKEND=compiled but massfill._kernels_c is not built; "
                "run `pip install -e .` with a C compiler available"
            )
        _impl = None

if _impl is None:
    _impl = _kernels_np
    _name = "python"


def kernel_backend():
    """Name of the active backend: 'compiled' or 'python'."""
    return _name


im2col = _impl.im2col
col2im_add = _impl.col2im_add
glcm_counts = _impl.glcm_counts
zone_sizes = _impl.zone_sizes
label_components = _impl.label_components
GLCM_OFFSETS = _kernels_np.GLCM_OFFSETS
