"""Kernel backend selection.

Two interchangeable kernel modules exist: a numba-compiled one and a pure
numpy one.  Both export the same six functions with identical semantics;
outputs are bit-identical because every routine is deterministic in its
inputs.  The active module is picked once at import time from the
HFREE_BACKEND environment variable:

    (unset) / "auto"  numba when importable, numpy otherwise
    "numba"           require the compiled kernels, fail if unavailable
    "numpy"           force the pure fallback

`kernels` is the selected module and `BACKEND` its name.
"""

from __future__ import annotations

import os
import warnings

from .errors import CapabilityError, ParameterError

_ENV_VAR = "HFREE_BACKEND"


def _select():
    choice = os.environ.get(_ENV_VAR, "auto").strip().lower() or "auto"
    if choice not in ("auto", "numba", "numpy"):
        raise ParameterError(
            f"{_ENV_VAR} must be 'auto', 'numba' or 'numpy', got {choice!r}"
        )
    if choice in ("auto", "numba"):
        try:
            from . import _kernels_numba as mod

            return mod, "numba"
        except ImportError as exc:
            if choice == "numba":
                raise CapabilityError(
                    f"{_ENV_VAR}=numba but the compiled kernels are unavailable: {exc}"
                ) from exc
            warnings.warn(
                "numba unavailable, falling back to the pure numpy kernels; "
                "large runs will be slow",
                RuntimeWarning,
                stacklevel=2,
            )
    from . import _kernels_numpy as mod

    return mod, "numpy"


kernels, BACKEND = _select()
