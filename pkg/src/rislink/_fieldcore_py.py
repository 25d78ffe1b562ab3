"""Pure-numpy versions of the element-summation kernels in ``_fieldcore.pyx``."""

import numpy as np

_CHUNK = 1 << 22  # max elements*points per temporary


def _chunks(n_el, n_pt):
    step = max(1, _CHUNK // max(n_el, 1))
    for start in range(0, n_pt, step):
        yield slice(start, min(start + step, n_pt))


def cascade_sum(ex, ey, amp, phase, k, src, dests):
    ex, ey, amp, phase = (np.asarray(a, dtype=float) for a in (ex, ey, amp, phase))
    dests = np.asarray(dests, dtype=float).reshape(-1, 3)
    r1 = np.sqrt((ex - src[0]) ** 2 + (ey - src[1]) ** 2 + src[2] ** 2)
    weights = amp * np.exp(1j * (phase - k * r1))
    out = np.empty(len(dests), dtype=complex)
    for sl in _chunks(ex.size, len(dests)):
        d = dests[sl]
        r2 = np.sqrt((ex - d[:, :1]) ** 2 + (ey - d[:, 1:2]) ** 2 + d[:, 2:3] ** 2)
        out[sl] = np.exp(-1j * k * r2) @ weights
    return out


def plane_wave_sum(ex, ey, amp, phase, k, dirs):
    ex, ey, amp, phase = (np.asarray(a, dtype=float) for a in (ex, ey, amp, phase))
    dirs = np.asarray(dirs, dtype=float).reshape(-1, 3)
    weights = amp * np.exp(1j * phase)
    out = np.empty(len(dirs), dtype=complex)
    for sl in _chunks(ex.size, len(dirs)):
        u = dirs[sl]
        out[sl] = np.exp(1j * k * (u[:, :1] * ex + u[:, 1:2] * ey)) @ weights
    return out
