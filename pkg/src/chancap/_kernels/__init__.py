"""Hot numerical kernels with a compiled core and a numpy fallback.

The Cython extension is picked when importable; set CHANCAP_KERNELS=python
or CHANCAP_KERNELS=cython to force a backend (forcing cython raises if the
extension was not built).  `BACKEND` names the backend in use.
"""

import os

_requested = os.environ.get("CHANCAP_KERNELS", "auto").lower()
if _requested not in ("auto", "cython", "python"):
    raise ValueError(f"CHANCAP_KERNELS must be auto, cython or python, got {_requested!r}")

if _requested in ("auto", "cython"):
    try:
        from . import _cykernels as _impl

        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        from . import _pykernels as _impl

        BACKEND = "python"
else:
    from . import _pykernels as _impl

    BACKEND = "python"

entropy_psd = _impl.entropy_psd
apply_kraus_pure = _impl.apply_kraus_pure
apply_kraus_dm = _impl.apply_kraus_dm
chi_pure_ensemble = _impl.chi_pure_ensemble

__all__ = [
    "BACKEND",
    "entropy_psd",
    "apply_kraus_pure",
    "apply_kraus_dm",
    "chi_pure_ensemble",
]
