"""Mollification kernels: compiled core with a NumPy fallback.

The convolution of the singular motion with the scaled bump mollifier is
the hot loop of every slic ladder (it runs once per quadrature node of a
2-d weak-form integral, per mollification level).  A Cython extension
implements it with plain loops; if the extension is missing the NumPy
implementation is used instead.  Set CAVITAS_KERNELS=python|compiled to
force a backend (benchmarks use this).
"""
import os

_choice = os.environ.get("CAVITAS_KERNELS", "").strip().lower()

if _choice == "python":
    from . import _fallback as _impl
    BACKEND = "python"
elif _choice == "compiled":
    from . import _core as _impl   # raises if the extension was not built
    BACKEND = "compiled"
else:
    try:
        from . import _core as _impl
        BACKEND = "compiled"
    except ImportError:
        from . import _fallback as _impl
        BACKEND = "python"

mollify_radial_batch = _impl.mollify_radial_batch
mollify_fan_batch = _impl.mollify_fan_batch

__all__ = ["BACKEND", "mollify_radial_batch", "mollify_fan_batch"]
