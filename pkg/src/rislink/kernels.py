"""Backend selection for the element-summation kernels.

The compiled extension is used when it imports; otherwise the numpy
implementation is used. :func:`use_backend` switches explicitly.
"""

from __future__ import annotations

import numpy as np

from . import _fieldcore_py

try:
    from . import _fieldcore as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS = {"python": _fieldcore_py}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled

_active = _BACKENDS.get("compiled", _fieldcore_py)


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def backend() -> str:
    return "compiled" if _active is _compiled else "python"


def use_backend(name: str) -> None:
    global _active
    try:
        _active = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {name!r}; "
                         f"have {available_backends()}") from None


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def cascade_sum(ex, ey, amp, phase, k, src, dests):
    """sum_n amp_n * exp(j*(phase_n - k*|r_n - src| - k*|r_n - dest_m|)) for every dest."""
    dests = _f64(dests).reshape(-1, 3)
    return _active.cascade_sum(_f64(ex), _f64(ey), _f64(amp), _f64(phase),
                               float(k), _f64(src), dests)


def plane_wave_sum(ex, ey, amp, phase, k, dirs):
    """sum_n amp_n * exp(j*(phase_n + k*u_m . r_n)) for every unit direction u_m."""
    dirs = _f64(dirs).reshape(-1, 3)
    return _active.plane_wave_sum(_f64(ex), _f64(ey), _f64(amp), _f64(phase), float(k), dirs)
