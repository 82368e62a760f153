"""Kernel dispatch: compiled extension when importable, pure Python otherwise.

Set ``FOURTHORDER_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"

if os.environ.get("FOURTHORDER_PURE_PYTHON") == "1":
    two_photon_coefficients = _pykernels.two_photon_coefficients
    tally_pulses = _pykernels.tally_pulses
else:
    try:
        from ._ckernels import tally_pulses, two_photon_coefficients
    except ImportError:
        two_photon_coefficients = _pykernels.two_photon_coefficients
        tally_pulses = _pykernels.tally_pulses
    else:
        BACKEND = "cython"

__all__ = ["BACKEND", "two_photon_coefficients", "tally_pulses"]
