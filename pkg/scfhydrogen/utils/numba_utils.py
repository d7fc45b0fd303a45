"""Numba compilation options shared by the numerical kernels."""
from typing import Any, Callable, Dict

import numba

NUMBA_OPTS: Dict[str, Any] = {
    "cache": True,
}


def njit(func: Callable) -> Callable:
    return numba.njit(func, **NUMBA_OPTS)
